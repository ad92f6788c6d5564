"""Core plumbing: configuration-independent logging, errors and report records."""
