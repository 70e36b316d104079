"""Radial graphs over coordinate spheres and their geometry in a `MetricField`.

A graph surface is X = p + (R + u(theta)) theta for unit vectors theta on a `SphereGrid`.
Everything is computed from the chart derivatives of u by the chain rule:

- tangents T_a and second derivatives T_ab of the embedding,
- the induced metric, the outward unit normal, and the second fundamental form
  h_ab = -g(nabla_{T_a} T_b, nu), so that round spheres have positive mean curvature,
- the Christoffel symbols of the induced metric and the ambient Rc(nu, nu).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from isofoliate.domain.base import ReportModel
from isofoliate.domain.enums import CurvatureMethod, ErrorMessage, GridMode
from isofoliate.domain.errors import DegenerateGeometryError, UnsupportedConfigurationError

from .curvature import CurvatureSample, curvature_at
from .grid import SphereGrid
from .metric import MetricField, christoffel_from_jet

__all__ = [
    "GeometricBounds",
    "GraphSurface",
    "build_surface",
    "class_norm",
    "geometric_bounds",
]


@dataclass(frozen=True)
class GraphSurface:
    """Nodal geometry of graph(u) over S_R(p).

    Chart tensors are indexed by the grid's chart coordinates; ambient vectors have n
    Cartesian components.
    """

    grid: SphereGrid
    radius: float
    u: np.ndarray
    metric: MetricField
    center: np.ndarray
    embedding: np.ndarray
    tangents: np.ndarray
    second_derivatives: np.ndarray
    ambient_metric: np.ndarray
    ambient_christoffel: np.ndarray
    induced: np.ndarray
    induced_inverse: np.ndarray
    induced_christoffel: np.ndarray
    normal: np.ndarray
    normal_covector: np.ndarray
    second_fundamental_form: np.ndarray
    mean_curvature: np.ndarray
    area_weights: np.ndarray
    euclidean_weights: np.ndarray
    curvature: CurvatureSample

    @property
    def dimension(self) -> int:
        """Ambient dimension n."""
        return self.grid.dimension

    @property
    def area(self) -> float:
        """Induced area."""
        return float(np.sum(self.area_weights))

    @property
    def euclidean_area(self) -> float:
        """Area with respect to the Euclidean metric delta."""
        return float(np.sum(self.euclidean_weights))

    @property
    def traceless(self) -> np.ndarray:
        """Traceless second fundamental form in chart components."""
        n = self.dimension
        return self.second_fundamental_form - (self.mean_curvature / (n - 1))[:, None, None] * self.induced

    def norm_squared(self, tensor: np.ndarray) -> np.ndarray:
        """Pointwise |t|^2 of a chart (0,2)-tensor with respect to the induced metric."""
        inv = self.induced_inverse
        return np.einsum("nac,nbd,nab,ncd->n", inv, inv, tensor, tensor)

    @property
    def second_fundamental_form_squared(self) -> np.ndarray:
        """|h|^2."""
        return self.norm_squared(self.second_fundamental_form)

    @property
    def traceless_squared(self) -> np.ndarray:
        """|h_0|^2 of the traceless part."""
        return self.norm_squared(self.traceless)

    @property
    def ricci_normal(self) -> np.ndarray:
        """Ambient Rc(nu, nu)."""
        return self.curvature.ricci_along(self.normal)

    @property
    def potential(self) -> np.ndarray:
        """|h|^2 + Rc(nu, nu), the zeroth-order part of the Jacobi operator."""
        return self.second_fundamental_form_squared + self.ricci_normal

    @property
    def radial_speed(self) -> np.ndarray:
        """g(theta, nu): normal speed of the variation d/dt (R + u + t) theta."""
        return np.einsum("ni,ni->n", self.grid.directions, self.normal_covector)

    def integrate(self, values: np.ndarray) -> float:
        """Integral over the surface with respect to the induced area."""
        return float(np.dot(self.area_weights, values))

    def mean(self, values: np.ndarray) -> float:
        """Area-weighted mean."""
        return self.integrate(values) / self.area

    def gradient(self, values: np.ndarray) -> np.ndarray:
        """Chart components f_a of d f."""
        first, _ = self.grid.derivatives(values)
        return first

    def hessian(self, values: np.ndarray) -> np.ndarray:
        """Covariant Hessian f_ab - Gamma^c_ab f_c."""
        first, second = self.grid.derivatives(values)
        return second - np.einsum("ncab,nc->nab", self.induced_christoffel, first)

    def laplacian(self, values: np.ndarray) -> np.ndarray:
        """Laplace-Beltrami of the induced metric."""
        return np.einsum("nab,nab->n", self.induced_inverse, self.hessian(values))


def build_surface(
    grid: SphereGrid,
    radius: float,
    u: np.ndarray,
    metric: MetricField,
    center: np.ndarray | None = None,
) -> GraphSurface:
    """Build graph(u) over the coordinate sphere S_R(p) and its geometry.

    Args:
        grid: Sphere discretization.
        radius: Coordinate radius R.
        u: Nodal values of the graph function.
        metric: Ambient metric.
        center: Center p of the coordinate sphere; the origin by default.

    Returns:
        The surface with all derived fields.

    Raises:
        DegenerateGeometryError: 1 + u/R <= 0 somewhere or the induced metric degenerates.
        ChartError: The surface leaves the asymptotic chart.

    """
    n = grid.dimension
    u = np.asarray(u, dtype=float)
    center = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    if np.any(1.0 + u / radius <= 0.0):
        raise DegenerateGeometryError(ErrorMessage.DEGENERATE_EMBEDDING, min_ratio=float(np.min(1.0 + u / radius)))
    if not grid.is_full:
        _require_axial_symmetry(metric, center)

    theta, frame, frame_hessian = grid.directions, grid.frame, grid.frame_hessian
    rho = radius + u
    d_u, dd_u = grid.derivatives(u)

    embedding = center + rho[:, None] * theta
    tangents = d_u[:, :, None] * theta[:, None, :] + rho[:, None, None] * frame
    second = (
        dd_u[:, :, :, None] * theta[:, None, None, :]
        + d_u[:, :, None, None] * frame[:, None, :, :]
        + d_u[:, None, :, None] * frame[:, :, None, :]
        + rho[:, None, None, None] * frame_hessian
    )

    jet = metric.jet(embedding)
    g = jet.g
    gamma = christoffel_from_jet(jet)

    induced = np.einsum("nai,nij,nbj->nab", tangents, g, tangents)
    determinant = np.linalg.det(induced)
    if np.any(determinant <= 0.0):
        raise DegenerateGeometryError(ErrorMessage.DEGENERATE_EMBEDDING, min_determinant=float(np.min(determinant)))
    induced_inverse = np.linalg.inv(induced)

    # covector annihilating every tangent, oriented away from the center
    covector = np.linalg.svd(tangents)[2][:, -1, :]
    covector *= np.sign(np.einsum("ni,ni->n", covector, theta))[:, None]
    inverse_g = jet.inverse
    length = np.sqrt(np.einsum("ni,nij,nj->n", covector, inverse_g, covector))
    covector /= length[:, None]
    normal = np.einsum("nij,nj->ni", inverse_g, covector)

    accelerations = second + np.einsum("nkij,nai,nbj->nabk", gamma, tangents, tangents)
    form = -np.einsum("nabk,nk->nab", accelerations, covector)
    form = 0.5 * (form + np.swapaxes(form, 1, 2))
    mean_curvature = np.einsum("nab,nab->n", induced_inverse, form)
    lowered = np.einsum("nabk,nkl,ndl->nabd", accelerations, g, tangents)
    induced_christoffel = np.einsum("ncd,nabd->ncab", induced_inverse, lowered)

    method = CurvatureMethod.CLOSED_FORM if metric.is_schwarzschild else CurvatureMethod.JET
    curvature = curvature_at(metric, embedding, method)

    euclidean = np.einsum("nai,nbi->nab", tangents, tangents)
    area_weights = grid.weights * np.sqrt(determinant) / grid.density
    euclidean_weights = grid.weights * np.sqrt(np.linalg.det(euclidean)) / grid.density

    return GraphSurface(
        grid=grid,
        radius=float(radius),
        u=u,
        metric=metric,
        center=center,
        embedding=embedding,
        tangents=tangents,
        second_derivatives=second,
        ambient_metric=g,
        ambient_christoffel=gamma,
        induced=induced,
        induced_inverse=induced_inverse,
        induced_christoffel=induced_christoffel,
        normal=normal,
        normal_covector=covector,
        second_fundamental_form=form,
        mean_curvature=mean_curvature,
        area_weights=area_weights,
        euclidean_weights=euclidean_weights,
        curvature=curvature,
    )


def _require_axial_symmetry(metric: MetricField, center: np.ndarray) -> None:
    """Meridian geometry represents the whole surface only for metrics symmetric about the last axis."""
    off_axis = np.concatenate([center[:-1], metric.translation[:-1]])
    if not metric.is_schwarzschild or np.any(off_axis != 0.0):
        raise UnsupportedConfigurationError(ErrorMessage.AXISYMMETRIC_UNSUPPORTED, mode=str(GridMode.AXISYMMETRIC))


def class_norm(grid: SphereGrid, radius: float, u: np.ndarray) -> float:
    """Scaled C^2 norm sup(R^-1 |u| + |Du| + R |D^2 u|) with D the connection of S_R.

    On S_R, |Du| = |grad u|_{S^{n-1}} / R and |D^2 u| = |Hess u|_{S^{n-1}} / R^2.
    """
    u = np.asarray(u, dtype=float)
    return float(
        (np.max(np.abs(u)) + np.max(grid.gradient_norm(u)) + np.max(grid.hessian_norm(u))) / radius,
    )


class GeometricBounds(ReportModel):
    """Scaled mean curvature range and curvature size on a surface."""

    radius: float
    min_scaled_mean_curvature: float
    max_scaled_mean_curvature: float
    scaled_curvature: float
    within_bounds: bool


def geometric_bounds(surface: GraphSurface) -> GeometricBounds:
    """Check (n-1)/2 <= |H R| <= 2(n-1) and report R^n sup|Rm|."""
    n, radius = surface.dimension, surface.radius
    scaled = np.abs(surface.mean_curvature) * radius
    low, high = float(np.min(scaled)), float(np.max(scaled))
    return GeometricBounds(
        radius=radius,
        min_scaled_mean_curvature=low,
        max_scaled_mean_curvature=high,
        scaled_curvature=float(radius**n * np.max(surface.curvature.norm())),
        within_bounds=(n - 1) / 2.0 <= low and high <= 2.0 * (n - 1),
    )
