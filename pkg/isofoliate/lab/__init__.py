"""Numerical modules: metrics, curvature, charts, CMC surfaces, centers, and masses."""
