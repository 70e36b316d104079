"""Tensor calculus on graph surfaces in Cartesian components.

Tangential tensors on a surface are stored as ambient tensors with lower Cartesian
indices that vanish on the normal. A smooth field f on the surface is differentiated
along the projected coordinate directions E_k = P(e_k),

    D_k f = sum_a c_k^a d_a f,    c_k^a = gbar^ab g(T_b, e_k),

and the intrinsic covariant derivative of a tangential tensor is the ambient one,

    (nabla S)_k i...j = D_k S_i...j - Gamma^p_ki S_p...j - ... - Gamma^p_kj S_i...p,

projected back onto the surface. Cartesian components are smooth across the poles of
the chart, so spectral derivatives stay accurate everywhere. Needs the full n = 3 grid.

The Codazzi equation and the Gauss equation read, in this repository's convention,

    nabla h(X; Y, Z) - nabla h(Y; X, Z) = Rm(X, Y, nu, Z),
    Rmbar(X, Y, Z, W) = Rm(X, Y, Z, W) + h(X, W) h(Y, Z) - h(X, Z) h(Y, W).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from isofoliate.domain.base import ReportModel

from .surface import GraphSurface

__all__ = [
    "ExtrinsicCalculus",
    "GaussCodazziResidual",
    "SimonsBalance",
    "gauss_codazzi_residual",
    "simons_balance",
]


class GaussCodazziResidual(ReportModel):
    """Max-norm residuals of the Codazzi and Gauss equations and the sizes they compare."""

    codazzi: float
    gauss: float
    codazzi_scale: float
    gauss_scale: float


@dataclass(frozen=True)
class SimonsBalance:
    """Both sides of the Simons identity for |h_0|^2 at every node."""

    lhs: np.ndarray
    rhs: np.ndarray
    scale: float

    @property
    def residual(self) -> float:
        """Max |lhs - rhs| relative to the largest term (absolute if every term vanishes)."""
        difference = float(np.max(np.abs(self.lhs - self.rhs)))
        return difference / self.scale if self.scale > 0.0 else difference


@dataclass(frozen=True)
class ExtrinsicCalculus:
    """Differential operators for tangential tensors on a full-grid surface."""

    surface: GraphSurface

    def __post_init__(self) -> None:
        """Reject axisymmetric grids."""
        self.surface.grid.require_full()

    @cached_property
    def lift(self) -> np.ndarray:
        """c[n, k, a] = gbar^ab g(T_b, e_k): chart components of E_k."""
        s = self.surface
        return np.einsum("nab,nbj,njk->nka", s.induced_inverse, s.tangents, s.ambient_metric)

    @cached_property
    def projector(self) -> np.ndarray:
        """Pi[n, a, x] = delta_ax - nu^a nu_x, acting on covector slots."""
        s = self.surface
        n = s.dimension
        return np.eye(n) - np.einsum("na,nx->nax", s.normal, s.normal_covector)

    @cached_property
    def metric_lower(self) -> np.ndarray:
        """Induced metric as a tangential 2-tensor g_ij - nu_i nu_j."""
        s = self.surface
        return s.ambient_metric - np.einsum("ni,nj->nij", s.normal_covector, s.normal_covector)

    @cached_property
    def metric_upper(self) -> np.ndarray:
        """Tangential inverse metric g^ij - nu^i nu^j."""
        s = self.surface
        return np.linalg.inv(s.ambient_metric) - np.einsum("ni,nj->nij", s.normal, s.normal)

    @cached_property
    def second_fundamental_form(self) -> np.ndarray:
        """h in Cartesian components."""
        return np.einsum("nab,nia,njb->nij", self.surface.second_fundamental_form, self.lift, self.lift)

    @cached_property
    def traceless(self) -> np.ndarray:
        """Traceless second fundamental form in Cartesian components."""
        n = self.surface.dimension
        return self.second_fundamental_form - (self.surface.mean_curvature / (n - 1))[:, None, None] * self.metric_lower

    @cached_property
    def riemann(self) -> np.ndarray:
        """Ambient Rm with every slot projected onto the surface."""
        return self.project(self.surface.curvature.riemann, 4)

    @cached_property
    def normal_curvature(self) -> np.ndarray:
        """T_kij = Rm(E_k, E_i, nu, E_j)."""
        rm = self.surface.curvature.riemann
        pi = self.projector
        return np.einsum("nabcd,nak,nbi,nc,ndj->nkij", rm, pi, pi, self.surface.normal, pi, optimize=True)

    def derivative(self, values: np.ndarray) -> np.ndarray:
        """D_k of nodal values of shape ``(N, ...)``; the new index is inserted at axis 1."""
        grid = self.surface.grid
        flat = values.reshape(values.shape[0], -1)
        coefficients = grid.basis.T @ (grid.weights[:, None] * flat)
        chart = np.einsum("nak,km->nam", grid.basis_gradient, coefficients)
        result = np.einsum("nka,nam->nkm", self.lift, chart)
        return result.reshape(values.shape[0], self.surface.dimension, *values.shape[1:])

    def project(self, tensor: np.ndarray, slots: int) -> np.ndarray:
        """Project the first ``slots`` tensor axes (after the node axis) onto the surface."""
        for axis in range(1, slots + 1):
            moved = np.moveaxis(tensor, axis, -1)
            moved = np.einsum("n...a,nax->n...x", moved, self.projector)
            tensor = np.moveaxis(moved, -1, axis)
        return tensor

    def covariant(self, tensor: np.ndarray, slots: int) -> np.ndarray:
        """Intrinsic covariant derivative of a tangential tensor.

        Args:
            tensor: Shape ``(N, n, ..., n, *labels)`` with ``slots`` covector slots followed
                by label axes that are not differentiated as tensor indices.
            slots: Number of covector slots.

        Returns:
            The derivative with the derivative slot at axis 1, all slots projected.

        """
        gamma = self.surface.ambient_christoffel
        result = self.derivative(tensor)
        for slot in range(slots):
            moved = np.moveaxis(tensor, 1 + slot, -1)
            correction = np.einsum("npki,n...p->nk...i", gamma, moved)
            result = result - np.moveaxis(correction, -1, 2 + slot)
        return self.project(result, slots + 1)

    def contract(self, tensor: np.ndarray, first: int, second: int) -> np.ndarray:
        """Trace two slots with the tangential inverse metric."""
        moved = np.moveaxis(tensor, (first, second), (-2, -1))
        return np.einsum("n...ij,nij->n...", moved, self.metric_upper)

    def inner(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Full contraction of two tangential tensors of equal rank."""
        rank = left.ndim - 1
        raised = right
        for axis in range(1, rank + 1):
            moved = np.moveaxis(raised, axis, -1)
            moved = np.einsum("n...a,nax->n...x", moved, self.metric_upper)
            raised = np.moveaxis(moved, -1, axis)
        return np.sum(left * raised, axis=tuple(range(1, left.ndim)))

    def intrinsic_riemann(self) -> np.ndarray:
        """Rmbar from the Ricci identity on the frame covectors g(E_i, .).

        nabla^2 w(Z, Y; X) - nabla^2 w(Y, Z; X) = -Rmbar(Z, Y, X, w^#).
        """
        frame = np.swapaxes(self.metric_lower, 1, 2)
        first = self.covariant(frame, 1)
        second = self.covariant(first, 2)
        return -(second - np.swapaxes(second, 1, 2))


def gauss_codazzi_residual(surface: GraphSurface) -> GaussCodazziResidual:
    """Evaluate the Codazzi and Gauss equations at every node.

    Raises:
        UnsupportedConfigurationError: The surface lives on an axisymmetric grid.

    """
    calculus = ExtrinsicCalculus(surface)
    form = calculus.second_fundamental_form
    derivative = calculus.covariant(form, 2)
    codazzi = derivative - np.swapaxes(derivative, 1, 2) - calculus.normal_curvature

    intrinsic = calculus.intrinsic_riemann()
    gauss_rhs = (
        calculus.riemann
        + np.einsum("nzi,nyx->nzyxi", form, form)
        - np.einsum("nzx,nyi->nzyxi", form, form)
    )
    return GaussCodazziResidual(
        codazzi=float(np.max(np.abs(codazzi))),
        gauss=float(np.max(np.abs(intrinsic - gauss_rhs))),
        codazzi_scale=float(max(np.max(np.abs(derivative)), np.max(np.abs(calculus.normal_curvature)))),
        gauss_scale=float(np.max(np.abs(gauss_rhs))),
    )


def simons_balance(surface: GraphSurface) -> SimonsBalance:
    """Evaluate both sides of the Simons identity for the traceless second fundamental form.

    1/2 Lap|h0|^2 = <h0, Hess H> + |nabla h0|^2 + H tr h0^3 + H^2 |h0|^2 / (n-1) - |h0|^4
                    + h0_ij h0_pj Rm_kipk - h0_ij h0_kp Rm_kijp
                    + h0_ij (nabla_i V_j) + h0_ij (nabla_k T_kij),

    with frame sums over the surface, V_j = Rc(nu, E_j) and T_kij = Rm(E_k, E_i, nu, E_j).
    """
    calculus = ExtrinsicCalculus(surface)
    n = surface.dimension
    mean = surface.mean_curvature
    traceless = calculus.traceless
    up = calculus.metric_upper
    pi = calculus.projector

    norm_squared = calculus.inner(traceless, traceless)
    gradient = calculus.derivative(norm_squared)
    lhs = 0.5 * calculus.contract(calculus.covariant(gradient, 1), 1, 2)

    hessian_mean = calculus.covariant(calculus.derivative(mean), 1)
    derivative = calculus.covariant(traceless, 2)
    mixed = np.einsum("nij,njk->nik", traceless, np.einsum("njk,nkl->njl", up, traceless))
    cube = np.einsum("nij,njk,nki->n", mixed, up, np.einsum("nka,nab->nkb", traceless, up))

    riemann = calculus.riemann
    ricci_tangential = calculus.contract(riemann, 1, 4)
    raised = np.einsum("nia,nab,nbj->nij", up, traceless, up)
    curvature_first = np.einsum("nij,nip,njq,npq->n", ricci_tangential, raised, up, traceless)
    curvature_second = -np.einsum(
        "nkijp,nka,nib,njc,npd,nbc,nad->n", riemann, up, up, up, up, traceless, traceless, optimize=True
    )

    ricci = surface.curvature.ricci
    flux = np.einsum("nab,na,nbj->nj", ricci, surface.normal, pi)
    flux_term = calculus.inner(traceless, calculus.covariant(flux, 1))
    divergence = calculus.contract(calculus.covariant(calculus.normal_curvature, 3), 1, 2)
    divergence_term = calculus.inner(traceless, divergence)

    terms = (
        calculus.inner(traceless, hessian_mean),
        calculus.inner(derivative, derivative),
        mean * cube,
        mean**2 * norm_squared / (n - 1),
        -(norm_squared**2),
        curvature_first,
        curvature_second,
        flux_term,
        divergence_term,
    )
    rhs = np.sum(terms, axis=0)
    scale = max(float(np.max(np.abs(lhs))), *(float(np.max(np.abs(term))) for term in terms))
    return SimonsBalance(lhs=lhs, rhs=rhs, scale=scale)
