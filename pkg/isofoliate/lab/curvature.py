"""Riemann, Ricci, and scalar curvature of a `MetricField`.

Conventions: Rm(X, Y, Z, W) = g(R(X, Y)Z, W) with R(X, Y) = [nabla_X, nabla_Y] - nabla_[X, Y],
and Rc(Y, Z) = sum_a Rm(e_a, Y, Z, e_a). A space of constant sectional curvature k has
Rm = (k/2) g (.) g, where (.) is the Kulkarni-Nomizu product.

Three evaluation paths are available and can be compared against each other:

- closed form for exact (possibly translated) Schwarzschild,
- fourth-order central differences of the Christoffel symbols,
- the exact metric jet (second derivatives supplied by `MetricField`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from isofoliate.domain.base import ReportModel
from isofoliate.domain.enums import CurvatureMethod, ErrorMessage
from isofoliate.domain.errors import DegenerateGeometryError, PreconditionError, StepSizeError

from .metric import CHART_RADIUS, MetricField, MetricJet, christoffel_from_jet
from .schwarzschild import conformal_factor

__all__ = [
    "CurvatureDecomposition",
    "CurvatureSample",
    "DecayReport",
    "christoffel_derivative",
    "curvature_at",
    "curvature_decomposition",
    "kulkarni_nomizu",
    "perturbation_decay_report",
    "riemann_from_christoffel",
]

CONDITION_LIMIT = 1e12
MIN_STEP = 1e-3
RELATIVE_STEP = 1e-4
STENCIL = ((-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0))


@dataclass(frozen=True)
class CurvatureSample:
    """Curvature at one point or a batch of points.

    Attributes:
        point: Coordinates x, shape ``(..., n)``.
        metric: g_ij at the points.
        riemann: Rm_ijkl, shape ``(..., n, n, n, n)``.
        ricci: Rc_jk.
        scalar: R.
        method: How the tensors were computed.

    """

    point: np.ndarray
    metric: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: np.ndarray
    method: CurvatureMethod

    def symmetry_defect(self) -> float:
        """Largest violation of the Riemann antisymmetries, pair symmetry, and Bianchi identity."""
        rm = self.riemann
        defects = (
            rm + np.swapaxes(rm, -4, -3),
            rm + np.swapaxes(rm, -2, -1),
            rm - np.einsum("...ijkl->...klij", rm),
            rm + np.einsum("...ijkl->...jkil", rm) + np.einsum("...ijkl->...kijl", rm),
        )
        return float(max(np.max(np.abs(defect)) for defect in defects))

    def ricci_along(self, vector: np.ndarray) -> np.ndarray:
        """Rc(v, v) for a vector field given at the sample points."""
        return np.einsum("...i,...ij,...j->...", vector, self.ricci, vector)

    def norm(self) -> np.ndarray:
        """Pointwise |Rm|_g."""
        inv = np.linalg.inv(self.metric)
        raised = np.einsum("...ai,...bj,...ck,...dl,...abcd->...ijkl", inv, inv, inv, inv, self.riemann)
        return np.sqrt(np.abs(np.einsum("...ijkl,...ijkl->...", raised, self.riemann)))


@dataclass(frozen=True)
class CurvatureDecomposition:
    """Rm = (traceless Rc (.) g)/(n-2) + R (g (.) g)/(2n(n-1)) + W."""

    traceless_ricci: np.ndarray
    weyl: np.ndarray
    weyl_trace: float
    reconstruction_error: float


class DecayReport(ReportModel):
    """Sampled decay ratios of the perturbation h = g - g_m."""

    radii: tuple[float, ...]
    value_ratio: tuple[float, ...]
    gradient_ratio: tuple[float, ...]
    hessian_ratio: tuple[float, ...]
    evenness_ratio: tuple[float, ...]
    decay_constant: float
    within_bounds: bool


def kulkarni_nomizu(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kulkarni-Nomizu product of two symmetric 2-tensors.

    Args:
        a: Symmetric tensor, shape ``(..., n, n)``.
        b: Symmetric tensor of the same shape.

    Returns:
        c_ijkl = a_jk b_il + a_il b_jk - a_ik b_jl - a_jl b_ik.

    """
    return (
        np.einsum("...jk,...il->...ijkl", a, b)
        + np.einsum("...il,...jk->...ijkl", a, b)
        - np.einsum("...ik,...jl->...ijkl", a, b)
        - np.einsum("...jl,...ik->...ijkl", a, b)
    )


def christoffel_derivative(jet: MetricJet) -> np.ndarray:
    """Exact d_m Gamma^i_jk from the metric jet, indexed ``[..., m, i, j, k]``."""
    dg, ddg, inv = jet.dg, jet.ddg, jet.inverse
    lowered = np.swapaxes(dg, -3, -2) + np.moveaxis(np.swapaxes(dg, -3, -2), -1, -2) - dg
    d_lowered = np.einsum("...mjlk->...mljk", ddg) + np.einsum("...mklj->...mljk", ddg) - ddg
    d_inverse = -np.einsum("...ia,...mab,...bl->...mil", inv, dg, inv)
    return 0.5 * (
        np.einsum("...mil,...ljk->...mijk", d_inverse, lowered) + np.einsum("...il,...mljk->...mijk", inv, d_lowered)
    )


def riemann_from_christoffel(gamma: np.ndarray, d_gamma: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Assemble Rm_ijkl from Gamma^i_jk, its derivative ``[..., m, i, j, k]``, and g_ij.

    R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_ip Gamma^p_jk - Gamma^l_jp Gamma^p_ik.
    """
    raised = (
        np.einsum("...iljk->...ijkl", d_gamma)
        - np.einsum("...jlik->...ijkl", d_gamma)
        + np.einsum("...lip,...pjk->...ijkl", gamma, gamma)
        - np.einsum("...ljp,...pik->...ijkl", gamma, gamma)
    )
    return np.einsum("...ijkm,...ml->...ijkl", raised, g)


def _contract(riemann: np.ndarray, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    inv = np.linalg.inv(g)
    ricci = np.einsum("...il,...ijkl->...jk", inv, riemann)
    scalar = np.einsum("...jk,...jk->...", inv, ricci)
    return ricci, scalar


def _check_invertible(g: np.ndarray) -> None:
    condition = np.linalg.cond(g)
    if np.any(~np.isfinite(condition)) or np.any(condition > CONDITION_LIMIT):
        raise DegenerateGeometryError(ErrorMessage.DEGENERATE_METRIC, condition=float(np.max(condition)))


def _closed_form(metric: MetricField, x: np.ndarray) -> np.ndarray:
    """Rm = A (g (.) g - n phi^(4/(n-2)) (dr (x) dr) (.) g) with A = m / (r^n phi^(2n/(n-2)))."""
    if not metric.is_schwarzschild:
        raise PreconditionError(ErrorMessage.PERTURBED_METRIC)
    n, m = metric.dimension, metric.mass
    y = x - metric.translation
    r = np.linalg.norm(y, axis=-1)
    phi = conformal_factor(m, n, r)
    g = metric.metric(x)
    radial = y / r[..., None]
    dr_dr = np.einsum("...i,...j->...ij", radial, radial)
    scale = m / (r**n * phi ** (2.0 * n / (n - 2)))
    weight = n * phi ** (4.0 / (n - 2))
    return scale[..., None, None, None, None] * (
        kulkarni_nomizu(g, g) - kulkarni_nomizu(weight[..., None, None] * dr_dr, g)
    )


def _finite_difference(metric: MetricField, x: np.ndarray) -> np.ndarray:
    n = metric.dimension
    radius = np.linalg.norm(x - metric.translation, axis=-1)
    step = np.maximum(MIN_STEP, RELATIVE_STEP * np.linalg.norm(x, axis=-1))
    if np.any(radius - 2.0 * step < CHART_RADIUS):
        raise StepSizeError(ErrorMessage.OUT_OF_CHART, min_radius=float(np.min(radius)))

    d_gamma = np.zeros((*x.shape, n, n, n))
    for direction in range(n):
        offset = np.zeros(n)
        offset[direction] = 1.0
        for multiple, coefficient in STENCIL:
            shifted = x + multiple * step[..., None] * offset
            d_gamma[..., direction, :, :, :] += coefficient * metric.christoffel(shifted)
        d_gamma[..., direction, :, :, :] /= 12.0 * step[..., None, None, None]

    jet = metric.jet(x)
    return riemann_from_christoffel(christoffel_from_jet(jet), d_gamma, jet.g)


def _from_jet(metric: MetricField, x: np.ndarray) -> np.ndarray:
    jet = metric.jet(x)
    return riemann_from_christoffel(christoffel_from_jet(jet), christoffel_derivative(jet), jet.g)


def curvature_at(metric: MetricField, x: np.ndarray, method: CurvatureMethod | None = None) -> CurvatureSample:
    """Evaluate Rm, Rc, and R at one point or a batch of points.

    Args:
        metric: The metric to differentiate.
        x: Points with |x - q| >= 1/2, shape ``(n,)`` or ``(..., n)``.
        method: Evaluation path; defaults to the closed form for exact Schwarzschild
            and to finite differences otherwise.

    Returns:
        The curvature sample.

    Raises:
        PreconditionError: Closed form requested for a perturbed metric.
        StepSizeError: The difference stencil would leave the chart.
        DegenerateGeometryError: The metric matrix is not invertible.

    """
    x = np.asarray(x, dtype=float)
    if method is None:
        method = CurvatureMethod.CLOSED_FORM if metric.is_schwarzschild else CurvatureMethod.FINITE_DIFFERENCE

    g = metric.metric(x)
    _check_invertible(g)

    evaluators = {
        CurvatureMethod.CLOSED_FORM: _closed_form,
        CurvatureMethod.FINITE_DIFFERENCE: _finite_difference,
        CurvatureMethod.JET: _from_jet,
    }
    riemann = evaluators[method](metric, x)
    ricci, scalar = _contract(riemann, g)
    return CurvatureSample(point=x, metric=g, riemann=riemann, ricci=ricci, scalar=scalar, method=method)


def curvature_decomposition(sample: CurvatureSample) -> CurvatureDecomposition:
    """Split Rm into its Ricci parts and the Weyl remainder W."""
    g = sample.metric
    n = g.shape[-1]
    traceless = sample.ricci - (sample.scalar / n)[..., None, None] * g
    ricci_part = kulkarni_nomizu(traceless, g) / (n - 2)
    scalar_part = (sample.scalar / (2.0 * n * (n - 1)))[..., None, None, None, None] * kulkarni_nomizu(g, g)
    weyl = sample.riemann - ricci_part - scalar_part
    weyl_ricci, _ = _contract(weyl, g)
    rebuilt = ricci_part + scalar_part + weyl
    return CurvatureDecomposition(
        traceless_ricci=traceless,
        weyl=weyl,
        weyl_trace=float(np.max(np.abs(weyl_ricci))),
        reconstruction_error=float(np.max(np.abs(rebuilt - sample.riemann))),
    )


def _sphere_directions(n: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng([seed, n, count])
    directions = rng.standard_normal((count, n))
    return directions / np.linalg.norm(directions, axis=-1, keepdims=True)


def perturbation_decay_report(
    metric: MetricField,
    radii: np.ndarray | tuple[float, ...],
    directions: int = 64,
    seed: int = 0,
) -> DecayReport:
    """Sample r^(n-2+gamma+k) sup|d^k h| and the evenness defect on spheres |x - q| = r.

    The evenness ratio is r^(n-1+gamma) sup|h(q + y) - h(q - y)|; it stays bounded for
    asymptotically even perturbations and grows linearly in r for odd ones.
    """
    n, gamma = metric.dimension, metric.spec.gamma
    unit = _sphere_directions(n, directions, seed)
    q = metric.translation
    value, gradient, hessian, evenness = [], [], [], []
    for r in radii:
        points = q + r * unit
        jet = metric.perturbation_jet(points)
        mirrored = metric.perturbation_jet(q - r * unit)
        base = r ** (n - 2 + gamma)
        value.append(base * float(np.max(np.abs(jet.g))))
        gradient.append(base * r * float(np.max(np.abs(jet.dg))))
        hessian.append(base * r**2 * float(np.max(np.abs(jet.ddg))))
        evenness.append(base * r * float(np.max(np.abs(jet.g - mirrored.g))))

    constant = metric.spec.perturbation.decay_constant
    within = max(value + gradient + hessian, default=0.0) <= constant
    return DecayReport(
        radii=tuple(float(r) for r in radii),
        value_ratio=tuple(value),
        gradient_ratio=tuple(gradient),
        hessian_ratio=tuple(hessian),
        evenness_ratio=tuple(evenness),
        decay_constant=constant,
        within_bounds=within,
    )
