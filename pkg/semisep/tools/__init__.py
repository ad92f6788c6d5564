"""Scene files, reports and rendering."""
