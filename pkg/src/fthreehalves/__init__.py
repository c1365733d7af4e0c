"""Exact computation in the group F(3/2) of PL homeomorphisms of [0, 1]."""
