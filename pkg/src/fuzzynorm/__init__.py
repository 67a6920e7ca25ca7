"""Numerical checkers for fuzzy norms, metric midpoints and affine isometries."""
