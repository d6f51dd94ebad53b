"""Concurrent block decompositions of even reversible Boolean functions."""
