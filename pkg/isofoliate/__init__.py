"""Numerical laboratory for CMC foliations, volume comparison, and mass in asymptotically Schwarzschild ends."""
