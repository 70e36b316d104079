"""Pointwise evaluation of g_ij and its coordinate derivatives in the asymptotic chart.

Metrics are g = (g_m + s h)(x - q): Schwarzschild of mass m, a perturbation h scaled by
s (s = 1 except along continuation paths), and a translation q. All evaluators accept
batches of points with shape ``(..., n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from isofoliate.domain.enums import ErrorMessage, Parity
from isofoliate.domain.errors import ChartError, DegenerateGeometryError
from isofoliate.domain.manifold import ManifoldSpec

__all__ = [
    "CHART_RADIUS",
    "MetricField",
    "MetricJet",
    "PerturbationPattern",
    "christoffel_from_jet",
]

CHART_RADIUS = 0.5


@dataclass(frozen=True)
class MetricJet:
    """Metric components with first and second coordinate derivatives.

    Attributes:
        g: Components g_ij, shape ``(..., n, n)``.
        dg: First derivatives, ``dg[..., k, i, j] = d_k g_ij``.
        ddg: Second derivatives, ``ddg[..., k, l, i, j] = d_k d_l g_ij``.

    """

    g: np.ndarray
    dg: np.ndarray
    ddg: np.ndarray

    @cached_property
    def inverse(self) -> np.ndarray:
        """Inverse metric g^ij."""
        return np.linalg.inv(self.g)


@dataclass(frozen=True)
class PerturbationPattern:
    """One deterministic bump pattern h = f(x) B.

    The even part is x^T Q x (r0^2 + |x|^2)^(-e/2) with e = n + gamma, the odd part
    c.x (r0^2 + |x|^2)^(-e/2) with e = n - 1 + gamma; both decay like r^(2-n-gamma).
    """

    tensor: np.ndarray
    quadratic: np.ndarray
    linear: np.ndarray
    even_weight: float
    odd_weight: float
    support_radius: float
    gamma: float

    @classmethod
    def enumerate(cls, spec: ManifoldSpec, seed: int = 0) -> PerturbationPattern:
        """Build pattern number ``spec.perturbation.pattern`` for the given seed."""
        n = spec.dimension
        perturbation = spec.perturbation
        rng = np.random.default_rng([seed, perturbation.pattern, n])

        tensor = rng.standard_normal((n, n))
        tensor = tensor + tensor.T
        tensor /= np.linalg.norm(tensor)

        quadratic = rng.standard_normal((n, n))
        quadratic = quadratic + quadratic.T
        quadratic /= np.max(np.abs(np.linalg.eigvalsh(quadratic)))

        linear = rng.standard_normal(n)
        linear /= np.linalg.norm(linear)

        weights = {
            Parity.EVEN: (1.0, 0.0),
            Parity.ODD: (0.0, 1.0),
            Parity.MIXED: (0.5, 0.5),
        }[perturbation.parity]

        return cls(
            tensor=tensor,
            quadratic=quadratic,
            linear=linear,
            even_weight=weights[0],
            odd_weight=weights[1],
            support_radius=perturbation.support_radius,
            gamma=spec.gamma,
        )

    def scalar_jet(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return f, df, and d2f at points x."""
        n = x.shape[-1]
        eye = np.eye(n)
        q = self.support_radius**2 + np.einsum("...i,...i->...", x, x)

        f = np.zeros(x.shape[:-1])
        df = np.zeros(x.shape)
        ddf = np.zeros((*x.shape, n))

        parts = (
            (self.even_weight, n + self.gamma, "even"),
            (self.odd_weight, n - 1 + self.gamma, "odd"),
        )
        for weight, exponent, kind in parts:
            if weight == 0.0:
                continue
            w = q ** (-exponent / 2.0)
            dw = -exponent * x * (q ** (-exponent / 2.0 - 1.0))[..., None]
            outer = np.einsum("...k,...l->...kl", x, x)
            ddw = (
                -exponent * eye * (q ** (-exponent / 2.0 - 1.0))[..., None, None]
                + exponent * (exponent + 2.0) * outer * (q ** (-exponent / 2.0 - 2.0))[..., None, None]
            )
            if kind == "even":
                qx = np.einsum("ij,...j->...i", self.quadratic, x)
                p = np.einsum("...i,...i->...", x, qx)
                dp = 2.0 * qx
                ddp = np.broadcast_to(2.0 * self.quadratic, ddf.shape)
            else:
                p = np.einsum("i,...i->...", self.linear, x)
                dp = np.broadcast_to(self.linear, x.shape)
                ddp = np.zeros(ddf.shape)

            f = f + weight * p * w
            df = df + weight * (dp * w[..., None] + p[..., None] * dw)
            ddf = ddf + weight * (
                ddp * w[..., None, None]
                + np.einsum("...k,...l->...kl", dp, dw)
                + np.einsum("...k,...l->...kl", dw, dp)
                + p[..., None, None] * ddw
            )
        return f, df, ddf


@dataclass(frozen=True)
class MetricField:
    """Evaluator of g_ij, d_k g_ij, and d_k d_l g_ij for a `ManifoldSpec`."""

    spec: ManifoldSpec
    seed: int = 0
    scale: float = 1.0
    pattern: PerturbationPattern | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        """Materialize the perturbation pattern once."""
        if self.pattern is None and not self.spec.perturbation.is_empty:
            object.__setattr__(self, "pattern", PerturbationPattern.enumerate(self.spec, self.seed))

    @classmethod
    def euclidean(cls, n: int) -> MetricField:
        """The flat metric delta_ij in dimension n."""
        return cls(ManifoldSpec(dimension=n, mass=0.0))

    @property
    def dimension(self) -> int:
        """Ambient dimension n."""
        return self.spec.dimension

    @property
    def mass(self) -> float:
        """Mass m of the model Schwarzschild metric."""
        return self.spec.mass

    @property
    def translation(self) -> np.ndarray:
        """Coordinate translation q."""
        return np.asarray(self.spec.shift, dtype=float)

    @property
    def is_schwarzschild(self) -> bool:
        """Whether the evaluated metric has no active perturbation."""
        return self.pattern is None or self.scale == 0.0

    def with_scale(self, scale: float) -> MetricField:
        """Return the metric g_m + scale * h with the same pattern."""
        return MetricField(self.spec, self.seed, scale, self.pattern)

    def _shifted(self, x: np.ndarray) -> np.ndarray:
        y = np.asarray(x, dtype=float) - self.translation
        radius = np.linalg.norm(y, axis=-1)
        if np.any(radius < CHART_RADIUS):
            raise ChartError(ErrorMessage.OUT_OF_CHART, min_radius=float(np.min(radius)))
        return y

    def schwarzschild_jet(self, y: np.ndarray) -> MetricJet:
        """Jet of phi^(4/(n-2)) delta at already-shifted points y."""
        n, m = self.dimension, self.mass
        eye = np.eye(n)
        power = 4.0 / (n - 2)
        r = np.linalg.norm(y, axis=-1)
        phi = 1.0 + 0.5 * m * r ** (2 - n)
        dphi = 0.5 * m * (2 - n) * y * (r ** (-n))[..., None]
        ddphi = 0.5 * m * (2 - n) * (
            eye * (r ** (-n))[..., None, None]
            - n * np.einsum("...k,...l->...kl", y, y) * (r ** (-n - 2))[..., None, None]
        )
        conformal = phi**power
        dconformal = power * (phi ** (power - 1.0))[..., None] * dphi
        ddconformal = power * (power - 1.0) * (phi ** (power - 2.0))[..., None, None] * np.einsum(
            "...k,...l->...kl", dphi, dphi
        ) + power * (phi ** (power - 1.0))[..., None, None] * ddphi

        g = conformal[..., None, None] * eye
        dg = dconformal[..., :, None, None] * eye
        ddg = ddconformal[..., :, :, None, None] * eye
        return MetricJet(g, dg, ddg)

    def perturbation_jet(self, x: np.ndarray) -> MetricJet:
        """Jet of the scaled perturbation s h at points x (zero when unperturbed)."""
        y = self._shifted(x)
        n = self.dimension
        if self.pattern is None or self.scale == 0.0:
            zeros = np.zeros((*y.shape[:-1], n, n))
            return MetricJet(zeros, np.zeros((*y.shape, n, n)), np.zeros((*y.shape, n, n, n)))
        f, df, ddf = self.pattern.scalar_jet(y)
        amplitude = self.scale * self.spec.perturbation.amplitude
        tensor = self.pattern.tensor
        return MetricJet(
            amplitude * f[..., None, None] * tensor,
            amplitude * df[..., :, None, None] * tensor,
            amplitude * ddf[..., :, :, None, None] * tensor,
        )

    def jet(self, x: np.ndarray) -> MetricJet:
        """Metric, first, and second derivatives at points x."""
        y = self._shifted(x)
        base = self.schwarzschild_jet(y)
        if self.is_schwarzschild:
            return base
        extra = self.perturbation_jet(x)
        return MetricJet(base.g + extra.g, base.dg + extra.dg, base.ddg + extra.ddg)

    def metric(self, x: np.ndarray) -> np.ndarray:
        """Metric components g_ij at points x."""
        return self.jet(x).g

    def christoffel(self, x: np.ndarray) -> np.ndarray:
        """Christoffel symbols ``gamma[..., i, j, k]`` = Gamma^i_jk at points x."""
        return christoffel_from_jet(self.jet(x))

    def check_positive(self, x: np.ndarray) -> None:
        """Raise if the metric is not positive definite at any of the points."""
        eigenvalues = np.linalg.eigvalsh(self.metric(x))
        if np.any(eigenvalues <= 0.0):
            raise DegenerateGeometryError(ErrorMessage.DEGENERATE_METRIC, min_eigenvalue=float(np.min(eigenvalues)))


def christoffel_from_jet(jet: MetricJet) -> np.ndarray:
    """Gamma^i_jk = 1/2 g^il (d_j g_lk + d_k g_lj - d_l g_jk)."""
    dg = jet.dg
    # lowered[..., l, j, k]
    lowered = np.swapaxes(dg, -3, -2) + np.moveaxis(np.swapaxes(dg, -3, -2), -1, -2) - dg
    return 0.5 * np.einsum("...il,...ljk->...ijk", jet.inverse, lowered)
