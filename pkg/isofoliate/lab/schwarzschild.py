"""Closed-form geometry of the Schwarzschild metric g_m = phi_m^(4/(n-2)) delta.

phi_m(r) = 1 + m / (2 r^(n-2)) is the conformal factor; the horizon is the minimal
sphere S_{r_h} with r_h = (m/2)^(1/(n-2)).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gamma as gamma_function

from isofoliate.domain.enums import ErrorMessage
from isofoliate.domain.errors import NoHorizonError, PreconditionError
from isofoliate.domain.manifold import ManifoldSpec

__all__ = [
    "composite_gauss_legendre",
    "conformal_factor",
    "horizon_radius",
    "schwarzschild_volume",
    "sphere_area_schwarzschild",
    "sphere_mean_curvature_gap_schwarzschild",
    "sphere_mean_curvature_schwarzschild",
    "unit_sphere_area",
]

NODES_PER_DECADE = 64


def unit_sphere_area(n: int) -> float:
    """Area omega_{n-1} of the unit sphere S^{n-1} in R^n.

    Args:
        n: Ambient dimension.

    Returns:
        2 pi^(n/2) / Gamma(n/2).

    """
    return float(2.0 * math.pi ** (n / 2.0) / gamma_function(n / 2.0))


def conformal_factor(m: float, n: int, r: float | np.ndarray) -> float | np.ndarray:
    """Evaluate phi_m(r) = 1 + m / (2 r^(n-2))."""
    return 1.0 + m / (2.0 * np.power(r, n - 2))


def horizon_radius(spec: ManifoldSpec) -> float:
    """Radius of the horizon r_h = (m/2)^(1/(n-2)).

    Raises:
        NoHorizonError: If the mass is not positive.

    """
    if spec.mass <= 0.0:
        raise NoHorizonError(ErrorMessage.NO_HORIZON, mass=spec.mass)
    return (spec.mass / 2.0) ** (1.0 / (spec.dimension - 2))


def _require_unperturbed(spec: ManifoldSpec) -> None:
    if not spec.is_schwarzschild:
        raise PreconditionError(ErrorMessage.PERTURBED_METRIC)


def sphere_area_schwarzschild(spec: ManifoldSpec, r: float) -> float:
    """The g_m-area phi^(2(n-1)/(n-2)) r^(n-1) omega_{n-1} of the centered sphere S_r."""
    _require_unperturbed(spec)
    n = spec.dimension
    phi = conformal_factor(spec.mass, n, r)
    return float(phi ** (2.0 * (n - 1) / (n - 2)) * r ** (n - 1) * unit_sphere_area(n))


def sphere_mean_curvature_schwarzschild(spec: ManifoldSpec, r: float) -> float:
    """Mean curvature of S_r with respect to the outward normal.

    H = phi^(-n/(n-2)) (1 - m / (2 r^(n-2))) (n-1) / r, which vanishes on the horizon.
    """
    _require_unperturbed(spec)
    n, m = spec.dimension, spec.mass
    phi = conformal_factor(m, n, r)
    return float(phi ** (-n / (n - 2)) * (1.0 - m / (2.0 * r ** (n - 2))) * (n - 1) / r)


def sphere_mean_curvature_gap_schwarzschild(spec: ManifoldSpec, r: float) -> float:
    """1 - (A/omega)^(1/(n-1)) H / (n-1) on S_r, evaluated without cancellation.

    With mu = m / (2 r^(n-2)) the area radius times H/(n-1) is (1 - mu)/(1 + mu), so the
    gap is 2 mu / (1 + mu).
    """
    _require_unperturbed(spec)
    mu = spec.mass / (2.0 * r ** (spec.dimension - 2))
    return float(2.0 * mu / (1.0 + mu))


def composite_gauss_legendre(
    a: float,
    b: float,
    nodes_per_panel: int = NODES_PER_DECADE,
) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule on [a, b] with one panel per decade of the radius.

    A zero lower limit uses a single panel on [0, b].

    Returns:
        Nodes and weights.

    """
    x, w = np.polynomial.legendre.leggauss(nodes_per_panel)
    if a <= 0.0:
        edges = np.array([0.0, b])
    else:
        panels = max(1, math.ceil(math.log10(b / a)))
        edges = np.geomspace(a, b, panels + 1)
    lower, upper = edges[:-1, None], edges[1:, None]
    half = 0.5 * (upper - lower)
    nodes = (lower + half * (x[None, :] + 1.0)).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


def schwarzschild_volume(m: float, n: int, r: float, inner: float | None = None) -> float:
    """g_m-volume of the shell between the horizon (or `inner`) and S_r.

    The volume density on S_rho is phi^(2n/(n-2)) rho^(n-1) omega_{n-1}.
    For m = 0 the lower limit is the origin.
    """
    if inner is None:
        inner = (m / 2.0) ** (1.0 / (n - 2)) if m > 0.0 else 0.0
    if r <= inner:
        return 0.0
    rho, w = composite_gauss_legendre(inner, r)
    density = conformal_factor(m, n, rho) ** (2.0 * n / (n - 2)) * rho ** (n - 1)
    return float(unit_sphere_area(n) * np.dot(w, density))
