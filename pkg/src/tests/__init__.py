"""Tests package for scale_dynamics."""
