"""Spectral discretizations of the unit sphere S^{n-1}.

Two modes are supported:

- ``full2sphere`` (n = 3 only): Gauss-Legendre nodes in cos(theta) times uniform longitudes,
  with a real spherical-harmonic basis of degree below the number of colatitudes.
- ``axisymmetric`` (any n >= 3): Gauss-Jacobi nodes in z = cos(theta) for the weight
  (1 - z^2)^((n-3)/2), with a Gegenbauer basis C_l^((n-2)/2)(z). Functions depend on the
  colatitude only. Geometry is evaluated on one meridian, with the n - 2 rotation
  directions as the remaining chart coordinates.

Both bases are orthonormal under the node quadrature, so nodal values and coefficients
convert into each other exactly and derivatives are spectral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_gegenbauer, lpmv, roots_jacobi

from isofoliate.domain.enums import ErrorMessage, GridMode
from isofoliate.domain.errors import PreconditionError, UnsupportedConfigurationError

from .schwarzschild import unit_sphere_area

__all__ = [
    "DEFAULT_AXISYMMETRIC_NODES",
    "DEFAULT_COLATITUDES",
    "SphereGrid",
]

DEFAULT_COLATITUDES = 24
DEFAULT_AXISYMMETRIC_NODES = 96


@dataclass(frozen=True)
class SphereGrid:
    """Nodes, weights, and spectral basis on the unit sphere.

    Chart coordinates are (theta, phi) in full mode and (theta, psi_2, ..., psi_{n-1}) in
    axisymmetric mode, where the psi are rotations out of the meridian plane.

    Attributes:
        dimension: Ambient dimension n.
        mode: Discretization mode.
        colatitude: Colatitude theta of every node, shape ``(N,)``.
        directions: Unit vectors at the nodes, shape ``(N, n)``.
        frame: Chart derivatives of the unit vector, shape ``(N, n-1, n)``.
        frame_hessian: Second chart derivatives, shape ``(N, n-1, n-1, n)``.
        weights: Quadrature weights of the unit-sphere area, summing to omega_{n-1}.
        density: Unit-sphere area density sqrt(det) in the chart coordinates.
        basis: Orthonormal basis values, shape ``(N, K)``.
        basis_gradient: Chart derivatives of the basis, shape ``(N, n-1, K)``.
        basis_hessian: Second chart derivatives, shape ``(N, n-1, n-1, K)``.
        degrees: Degree l of every basis function.
        orders: Longitudinal order m of every basis function (0 in axisymmetric mode).

    """

    dimension: int
    mode: GridMode
    shape: tuple[int, ...]
    colatitude: np.ndarray
    directions: np.ndarray
    frame: np.ndarray
    frame_hessian: np.ndarray
    weights: np.ndarray
    density: np.ndarray
    basis: np.ndarray
    basis_gradient: np.ndarray
    basis_hessian: np.ndarray
    degrees: np.ndarray
    orders: np.ndarray

    @classmethod
    def full(cls, n_theta: int = DEFAULT_COLATITUDES, n_phi: int | None = None) -> SphereGrid:
        """Gauss-Legendre x uniform grid on S^2 with real spherical harmonics of degree < n_theta."""
        n_phi = 2 * n_theta if n_phi is None else n_phi
        x, w_x = np.polynomial.legendre.leggauss(n_theta)
        theta_1d = np.arccos(x)
        phi_1d = 2.0 * math.pi * np.arange(n_phi) / n_phi
        theta, phi = (grid.ravel() for grid in np.meshgrid(theta_1d, phi_1d, indexing="ij"))
        weights = np.repeat(w_x, n_phi) * (2.0 * math.pi / n_phi)

        st, ct, sp, cp = np.sin(theta), np.cos(theta), np.sin(phi), np.cos(phi)
        zero = np.zeros_like(theta)
        directions = np.stack([st * cp, st * sp, ct], axis=-1)
        d_theta = np.stack([ct * cp, ct * sp, -st], axis=-1)
        d_phi = np.stack([-st * sp, st * cp, zero], axis=-1)
        d_theta_phi = np.stack([-ct * sp, ct * cp, zero], axis=-1)
        d_phi_phi = np.stack([-st * cp, -st * sp, zero], axis=-1)
        frame = np.stack([d_theta, d_phi], axis=1)
        frame_hessian = np.stack(
            [np.stack([-directions, d_theta_phi], axis=1), np.stack([d_theta_phi, d_phi_phi], axis=1)],
            axis=1,
        )

        max_order = min(n_theta - 1, n_phi // 2 - 1)
        columns, gradients, hessians, degrees, orders = [], [], [], [], []
        cot = ct / st
        for degree in range(n_theta):
            for order in range(-min(degree, max_order), min(degree, max_order) + 1):
                m = abs(order)
                legendre = lpmv(m, degree, ct)
                previous = lpmv(m, degree - 1, ct) if degree - 1 >= m else zero
                d_legendre = (degree * ct * legendre - (degree + m) * previous) / st
                dd_legendre = -cot * d_legendre - (degree * (degree + 1) - m**2 / st**2) * legendre
                if order >= 0:
                    wave, d_wave = np.cos(m * phi), -m * np.sin(m * phi)
                else:
                    wave, d_wave = np.sin(m * phi), m * np.cos(m * phi)
                dd_wave = -(m**2) * wave
                columns.append(legendre * wave)
                gradients.append(np.stack([d_legendre * wave, legendre * d_wave], axis=-1))
                hessians.append(
                    np.stack(
                        [
                            np.stack([dd_legendre * wave, d_legendre * d_wave], axis=-1),
                            np.stack([d_legendre * d_wave, legendre * dd_wave], axis=-1),
                        ],
                        axis=-2,
                    )
                )
                degrees.append(degree)
                orders.append(order)

        basis, gradient, hessian = _normalize(
            np.stack(columns, axis=-1), np.stack(gradients, axis=-1), np.stack(hessians, axis=-1), weights
        )
        return cls(
            dimension=3,
            mode=GridMode.FULL,
            shape=(n_theta, n_phi),
            colatitude=theta,
            directions=directions,
            frame=frame,
            frame_hessian=frame_hessian,
            weights=weights,
            density=st,
            basis=basis,
            basis_gradient=gradient,
            basis_hessian=hessian,
            degrees=np.asarray(degrees),
            orders=np.asarray(orders),
        )

    @classmethod
    def axisymmetric(cls, n: int, n_nodes: int = DEFAULT_AXISYMMETRIC_NODES) -> SphereGrid:
        """Gauss-Jacobi grid in cos(theta) with Gegenbauer polynomials of degree < n_nodes."""
        exponent = (n - 3) / 2.0
        z, w_z = roots_jacobi(n_nodes, exponent, exponent)
        theta = np.arccos(z)
        weights = unit_sphere_area(n - 1) * w_z
        st, ct = np.sin(theta), np.cos(theta)
        count = theta.shape[0]
        rotations = n - 2

        directions = np.zeros((count, n))
        directions[:, 0], directions[:, -1] = st, ct
        frame = np.zeros((count, n - 1, n))
        frame[:, 0, 0], frame[:, 0, -1] = ct, -st
        frame_hessian = np.zeros((count, n - 1, n - 1, n))
        frame_hessian[:, 0, 0, :] = -directions
        for k in range(1, rotations + 1):
            frame[:, k, k] = st
            frame_hessian[:, 0, k, k] = ct
            frame_hessian[:, k, 0, k] = ct
            frame_hessian[:, k, k, 0] = -st

        parameter = (n - 2) / 2.0
        degrees = np.arange(n_nodes)
        values = np.stack([_gegenbauer(degree, parameter, z) for degree in degrees], axis=-1)
        d_z = 2.0 * parameter * np.stack([_gegenbauer(degree - 1, parameter + 1.0, z) for degree in degrees], axis=-1)
        dd_z = (
            4.0
            * parameter
            * (parameter + 1.0)
            * np.stack([_gegenbauer(degree - 2, parameter + 2.0, z) for degree in degrees], axis=-1)
        )
        gradient = np.zeros((count, n - 1, n_nodes))
        hessian = np.zeros((count, n - 1, n - 1, n_nodes))
        gradient[:, 0, :] = -st[:, None] * d_z
        hessian[:, 0, 0, :] = (st**2)[:, None] * dd_z - ct[:, None] * d_z

        basis, gradient, hessian = _normalize(values, gradient, hessian, weights)
        return cls(
            dimension=n,
            mode=GridMode.AXISYMMETRIC,
            shape=(n_nodes,),
            colatitude=theta,
            directions=directions,
            frame=frame,
            frame_hessian=frame_hessian,
            weights=weights,
            density=st**rotations,
            basis=basis,
            basis_gradient=gradient,
            basis_hessian=hessian,
            degrees=degrees,
            orders=np.zeros(n_nodes, dtype=int),
        )

    @classmethod
    def for_dimension(cls, n: int, resolution: int | None = None) -> SphereGrid:
        """The default grid for dimension n: full for n = 3, axisymmetric otherwise."""
        if n == 3:  # noqa: PLR2004
            return cls.full(resolution or DEFAULT_COLATITUDES)
        return cls.axisymmetric(n, resolution or DEFAULT_AXISYMMETRIC_NODES)

    @property
    def is_full(self) -> bool:
        """Whether the grid resolves longitude."""
        return self.mode is GridMode.FULL

    @property
    def size(self) -> int:
        """Number of nodes."""
        return self.colatitude.shape[0]

    def refined(self, resolution: int | None = None) -> SphereGrid:
        """A grid of the same mode with more colatitudes, 4/3 as many by default (24 x 48 -> 32 x 64).

        Raises:
            PreconditionError: The requested resolution is not finer than this grid.

        """
        current = self.shape[0]
        resolution = current * 4 // 3 if resolution is None else resolution
        if resolution <= current:
            raise PreconditionError(ErrorMessage.COARSER_REFINEMENT, resolution=resolution, current=current)
        if self.is_full:
            return SphereGrid.full(resolution)
        return SphereGrid.axisymmetric(self.dimension, resolution)

    def require_full(self) -> None:
        """Raise unless the grid is the full two-sphere grid."""
        if not self.is_full:
            raise UnsupportedConfigurationError(ErrorMessage.AXISYMMETRIC_UNSUPPORTED, mode=str(self.mode))

    def integrate(self, values: np.ndarray) -> float:
        """Integral over the unit sphere."""
        return float(np.dot(self.weights, values))

    def coefficients(self, values: np.ndarray) -> np.ndarray:
        """Project nodal values onto the basis."""
        return self.basis.T @ (self.weights * values)

    def nodal(self, coefficients: np.ndarray) -> np.ndarray:
        """Nodal values of a basis expansion."""
        return self.basis @ coefficients

    def derivatives(self, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Spectral chart derivatives f_a and f_ab of nodal values."""
        coefficients = self.coefficients(values)
        return self.basis_gradient @ coefficients, self.basis_hessian @ coefficients

    def transfer(self, values: np.ndarray, target: SphereGrid) -> np.ndarray:
        """Evaluate a function given on this grid at the nodes of another grid of the same mode."""
        coefficients = self.coefficients(values)
        lookup = {
            (int(degree), int(order)): index
            for index, (degree, order) in enumerate(zip(target.degrees, target.orders, strict=True))
        }
        moved = np.zeros(target.basis.shape[1])
        for index, (degree, order) in enumerate(zip(self.degrees, self.orders, strict=True)):
            position = lookup.get((int(degree), int(order)))
            if position is not None:
                moved[position] = coefficients[index]
        return target.nodal(moved)

    def mode_values(self, degree: int, order: int = 0) -> np.ndarray:
        """Nodal values of the basis function (l, m), scaled to unit sup norm."""
        index = np.flatnonzero((self.degrees == degree) & (self.orders == order))[0]
        column = self.basis[:, index]
        return column / np.max(np.abs(column))

    def laplace_beltrami(self, values: np.ndarray) -> np.ndarray:
        """Laplace-Beltrami of the unit sphere from chart derivatives."""
        first, second = self.derivatives(values)
        cot = np.cos(self.colatitude) / np.sin(self.colatitude)
        if self.is_full:
            return second[:, 0, 0] + cot * first[:, 0] + second[:, 1, 1] / np.sin(self.colatitude) ** 2
        return second[:, 0, 0] + (self.dimension - 2) * cot * first[:, 0]

    def gradient_norm(self, values: np.ndarray) -> np.ndarray:
        """Pointwise |grad f| on the unit sphere."""
        first, _ = self.derivatives(values)
        if self.is_full:
            return np.sqrt(first[:, 0] ** 2 + (first[:, 1] / np.sin(self.colatitude)) ** 2)
        return np.abs(first[:, 0])

    def hessian_norm(self, values: np.ndarray) -> np.ndarray:
        """Pointwise |Hess f| on the unit sphere in an orthonormal frame."""
        first, second = self.derivatives(values)
        st = np.sin(self.colatitude)
        cot = np.cos(self.colatitude) / st
        if self.is_full:
            mixed = (second[:, 0, 1] - cot * first[:, 1]) / st
            azimuthal = second[:, 1, 1] / st**2 + cot * first[:, 0]
            return np.sqrt(second[:, 0, 0] ** 2 + 2.0 * mixed**2 + azimuthal**2)
        return np.sqrt(second[:, 0, 0] ** 2 + (self.dimension - 2) * (cot * first[:, 0]) ** 2)


def _normalize(
    basis: np.ndarray,
    gradient: np.ndarray,
    hessian: np.ndarray,
    weights: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    scale = 1.0 / np.sqrt(np.einsum("i,ik,ik->k", weights, basis, basis))
    return basis * scale, gradient * scale, hessian * scale


def _gegenbauer(degree: int, parameter: float, z: np.ndarray) -> np.ndarray:
    if degree < 0:
        return np.zeros_like(z)
    return eval_gegenbauer(degree, parameter, z)
