"""Scenes, decision procedures and the sampling oracle."""
