"""Exact positivity and stability checks for sheaves on smooth complete toric varieties."""
