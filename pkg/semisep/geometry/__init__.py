"""Projective charts, blow-ups and walls."""
