"""Exact algebra: polynomial kernel, plane cell decomposition, finite spaces of orderings."""
