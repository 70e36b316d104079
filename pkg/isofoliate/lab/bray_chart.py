"""Bray's volume-preserving charts of Schwarzschild and the effective volume comparison.

Outside the reference sphere S_r, Schwarzschild is written as

    g_m^c = u_c(s)^-2 ds^2 + u_c(s)^(2/(n-1)) s^2 g_{S^{n-1}},    s >= c,

and inside S_r it is compared with the cone alpha^-2 ds^2 + alpha^(2/(n-1)) s^2 g_{S^{n-1}},
whose volume density is exactly s^(n-1). A rotationally invariant isometry preserves the
area of spheres and radial arclength, which gives for s(rho)

    u_c(s) s^(n-1) = phi^(2(n-1)/(n-2)) rho^(n-1),    ds/drho = u_c(s) phi^(2/(n-2)),

with s(r) = c. The off-center check compares the boundary area of an off-center ball with
the centered sphere of the same Schwarzschild volume.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import OdeSolution, solve_ivp
from scipy.optimize import brentq

from isofoliate.domain.base import ReportModel
from isofoliate.domain.enums import ErrorMessage
from isofoliate.domain.errors import ChartError, IntegrationError, PreconditionError, UnsupportedConfigurationError
from isofoliate.domain.manifold import ManifoldSpec

from .fitting import loglog_slope, parallel_map
from .schwarzschild import (
    composite_gauss_legendre,
    conformal_factor,
    horizon_radius,
    schwarzschild_volume,
    sphere_area_schwarzschild,
    sphere_mean_curvature_schwarzschild,
    unit_sphere_area,
)

__all__ = [
    "ChartHeader",
    "ChartSolution",
    "DeficitSweep",
    "ExpansionErrors",
    "GainCheck",
    "OffCenterCheck",
    "QuadraticFormBounds",
    "cone_volume",
    "deficit_sweep",
    "effective_deficit",
    "expansion_errors",
    "exterior_chart_ode",
    "gain_check",
    "leading_gap",
    "quadratic_form_bounds",
    "solve_chart",
    "solve_matching",
    "volume_gap",
]

ODE_RTOL = 1e-10
ODE_ATOL = 1e-12
S_MAX_FACTOR = 1e3
TABLE_POINTS = 257
CAP_NODES = 256
BISECTION_XTOL = 1e-12


class ChartHeader(ReportModel):
    """Scalar data of a chart solution."""

    m: float
    n: int
    r: float
    alpha: float
    c: float
    volume_gap: float
    s_max: float
    u_at_s_max: float


@dataclass(frozen=True)
class ChartSolution:
    """Exterior chart data with the tabulated u_c on [c, s_max].

    The interior conformal factor w_c and the radius s0 are not constructed; ``interior``
    stays empty and ``s0`` unset.
    """

    m: float
    n: int
    r: float
    alpha: float
    c: float
    volume_gap: float
    s: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    interior: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    s0: float | None = None
    dense: OdeSolution | None = field(default=None, compare=False, repr=False)

    @property
    def s_max(self) -> float:
        """Upper end of the table."""
        return float(self.s[-1])

    def _u_of_rho(self, rho: float) -> float:
        s = float(self.dense(rho)[0]) if self.dense is not None else float(np.interp(rho, self.rho, self.s))
        return _area_density(self.m, self.n, rho) / s ** (self.n - 1)

    def u_at(self, s: float) -> float:
        """u_c(s); alpha on the cone part s <= c.

        Raises:
            PreconditionError: s beyond the table.

        """
        if s <= self.c:
            return self.alpha
        if s > self.s_max:
            raise PreconditionError(ErrorMessage.PRECONDITION, s=s, s_max=self.s_max)
        if self.dense is None:
            return float(np.interp(s, self.s, self.u))
        rho = brentq(lambda x: float(self.dense(x)[0]) - s, self.rho[0], self.rho[-1], xtol=BISECTION_XTOL * s)
        return self._u_of_rho(rho)

    def header(self) -> ChartHeader:
        """JSON header of the table."""
        return ChartHeader(
            m=self.m,
            n=self.n,
            r=self.r,
            alpha=self.alpha,
            c=self.c,
            volume_gap=self.volume_gap,
            s_max=self.s_max,
            u_at_s_max=float(self.u[-1]),
        )

    def write_table(self, path: Path) -> None:
        """Write the (s, u_c) table."""
        np.savetxt(path, np.column_stack([self.s, self.u]), fmt="%.17g", header="s u")


def _spec(m: float, n: int) -> ManifoldSpec:
    return ManifoldSpec(dimension=n, mass=m)


def _area_density(m: float, n: int, rho: float | np.ndarray) -> float | np.ndarray:
    """a(rho) = phi^(2(n-1)/(n-2)) rho^(n-1)."""
    return conformal_factor(m, n, rho) ** (2.0 * (n - 1) / (n - 2)) * rho ** (n - 1)


def solve_matching(m: float, n: int, r: float) -> tuple[float, float]:
    """Cone parameters whose sphere {c} has the area and mean curvature of S_r.

    alpha^n = (A / omega) (H / (n-1))^(n-1) and c = alpha (n-1) / H.

    Raises:
        PreconditionError: r <= r_h, where the mean curvature of S_r is not positive.

    """
    spec = _spec(m, n)
    mean = sphere_mean_curvature_schwarzschild(spec, r)
    if mean <= 0.0:
        raise PreconditionError(ErrorMessage.INSIDE_HORIZON, r=r, mean_curvature=mean)
    area = sphere_area_schwarzschild(spec, r)
    alpha = ((area / unit_sphere_area(n)) * (mean / (n - 1)) ** (n - 1)) ** (1.0 / n)
    return alpha, alpha * (n - 1) / mean


def exterior_chart_ode(
    m: float,
    n: int,
    r: float,
    alpha: float,
    c: float,
    s_max: float | None = None,
) -> ChartSolution:
    """Integrate s(rho) from s(r) = c until s = s_max and tabulate u_c.

    Raises:
        IntegrationError: The integrator failed, s_max was not reached, or s is not increasing.

    """
    s_max = S_MAX_FACTOR * c if s_max is None else s_max
    power = 2.0 / (n - 2)

    def rhs(rho: float, state: np.ndarray) -> np.ndarray:
        s = state[0]
        return np.array([_area_density(m, n, rho) / s ** (n - 1) * conformal_factor(m, n, rho) ** power])

    def reached(_: float, state: np.ndarray) -> float:
        return state[0] - s_max

    reached.terminal = True
    result = solve_ivp(
        rhs,
        (r, 4.0 * s_max + r),
        [c],
        method="RK45",
        rtol=ODE_RTOL,
        atol=ODE_ATOL * c,
        events=reached,
        dense_output=True,
    )
    if not result.success or not result.t_events[0].size:
        raise IntegrationError(ErrorMessage.INTEGRATION_FAILED, status=result.status, message=result.message)

    rho_end = float(result.t_events[0][0])
    rho = np.geomspace(r, rho_end, TABLE_POINTS)
    s = result.sol(rho)[0]
    if np.any(np.diff(s) <= 0.0):
        raise IntegrationError(ErrorMessage.INTEGRATION_FAILED, reason="s is not increasing along the table")
    u = _area_density(m, n, rho) / s ** (n - 1)
    return ChartSolution(
        m=m,
        n=n,
        r=r,
        alpha=alpha,
        c=c,
        volume_gap=volume_gap(m, n, r, alpha, c),
        s=s,
        rho=rho,
        u=u,
        dense=result.sol,
    )


def volume_gap(m: float, n: int, r: float, alpha: float, c: float) -> float:  # noqa: ARG001
    """Schwarzschild volume between the horizon and S_r minus the cone volume omega c^n / n.

    Raises:
        ChartError: The gap is not positive for m > 0.

    """
    if m == 0.0:
        return 0.0
    gap = schwarzschild_volume(m, n, r) - cone_volume(n, c)
    if gap <= 0.0:
        raise ChartError(ErrorMessage.NEGATIVE_GAP, gap=gap, r=r, c=c)
    return gap


def solve_chart(m: float, n: int, r: float, s_max: float | None = None) -> ChartSolution:
    """Matching, exterior integration, and volume gap for the reference sphere S_r."""
    alpha, c = solve_matching(m, n, r)
    return exterior_chart_ode(m, n, r, alpha, c, s_max)


class ExpansionErrors(ReportModel):
    """Errors of alpha and c^n against their leading expansions in m / r^(n-2)."""

    n: int
    radii: tuple[float, ...]
    alpha_errors: tuple[float, ...]
    c_errors: tuple[float, ...]
    alpha_slope: float
    c_slope: float
    predicted_slope: float


def expansion_errors(m: float, n: int, radii: tuple[float, ...]) -> ExpansionErrors:
    """Compare alpha and (c/r)^n with 1 - (n-1)/n m/r^(n-2) and 1 + (2n-2)/(n-2) m/r^(n-2)."""
    alpha_errors, c_errors = [], []
    for r in radii:
        alpha, c = solve_matching(m, n, r)
        ratio = m / r ** (n - 2)
        alpha_errors.append(abs(alpha - (1.0 - (n - 1) / n * ratio)))
        c_errors.append(abs((c / r) ** n - 1.0 - (2.0 * n - 2.0) / (n - 2) * ratio))
    return ExpansionErrors(
        n=n,
        radii=tuple(float(r) for r in radii),
        alpha_errors=tuple(alpha_errors),
        c_errors=tuple(c_errors),
        alpha_slope=loglog_slope(radii, alpha_errors).slope,
        c_slope=loglog_slope(radii, c_errors).slope,
        predicted_slope=-(2.0 * n - 4.0),
    )


class GainCheck(ReportModel):
    """Growth u_c(tau c) - alpha against its leading term."""

    tau: float
    gain: float
    leading: float
    relative_error: float
    delta: float


def gain_check(chart: ChartSolution, tau: float) -> GainCheck:
    """Evaluate u_c(tau c) - alpha, the leading term, and delta = gain / (m c^(2-n) (1 - 1/tau)^2)."""
    n, m, c = chart.n, chart.m, chart.c
    gain = chart.u_at(tau * c) - chart.alpha
    leading = (n - 1) * m / (2.0 * n * c ** (n - 2) * tau**n) * (2.0 * tau**n - n * tau**2 + (n - 2))
    return GainCheck(
        tau=tau,
        gain=gain,
        leading=leading,
        relative_error=abs(gain - leading) / abs(leading),
        delta=gain / (m / c ** (n - 2) * (1.0 - 1.0 / tau) ** 2),
    )


class QuadraticFormBounds(ReportModel):
    """Smallest eigenvalue margins of alpha^2 g^c <= ds^2 + s^2 g_S <= u^(-2/(n-1)) g^c on the table."""

    lower_margin: float
    upper_margin: float

    @property
    def holds(self) -> bool:
        """Whether both inequalities hold at every table node."""
        return self.lower_margin >= 0.0 and self.upper_margin >= 0.0


def quadratic_form_bounds(chart: ChartSolution) -> QuadraticFormBounds:
    """Check the metric sandwich in the orthonormal frame (ds, s dtheta) of the flat metric."""
    u, alpha, n = np.concatenate([[chart.alpha], chart.u]), chart.alpha, chart.n
    lower = np.minimum(1.0 - alpha**2 / u**2, 1.0 - alpha**2 * u ** (2.0 / (n - 1)))
    upper = u ** (-2.0 * n / (n - 1)) - 1.0
    return QuadraticFormBounds(lower_margin=float(np.min(lower)), upper_margin=float(np.min(upper)))


class OffCenterCheck(ReportModel):
    """Off-center ball B_{r'}(p) united with the horizon ball, against the centered S_r."""

    m: float
    n: int
    r: float
    offset: float
    tau: float
    ball_radius: float
    volume: float
    area_boundary: float
    area_sphere: float
    deficit: float
    eta: float
    ratio: float | None
    isoperimetric_ratio: float


def _sphere_integral(
    m: float,
    n: int,
    offset: float,
    radius: float,
    exponent: float,
    z_min: float = -1.0,
) -> float:
    """int over {z > z_min} of S_radius(offset e_n) of phi(|x|)^exponent dA_delta.

    z is the cosine of the angle to e_n measured from the center of the sphere.
    """
    if z_min >= 1.0:
        return 0.0
    x, w = np.polynomial.legendre.leggauss(CAP_NODES)
    lower = max(z_min, -1.0)
    half = 0.5 * (1.0 - lower)
    z = lower + half * (x + 1.0)
    weights = half * w * (1.0 - z**2) ** ((n - 3) / 2.0) * unit_sphere_area(n - 1)
    distance = np.sqrt(offset**2 + radius**2 + 2.0 * offset * radius * z)
    return float(radius ** (n - 1) * np.dot(weights, conformal_factor(m, n, distance) ** exponent))


def _ball_volume(m: float, n: int, offset: float, radius: float) -> float:
    """g_m-volume of B_radius(offset e_n), assumed disjoint from the horizon ball."""
    nodes, weights = composite_gauss_legendre(0.0, radius)
    exponent = 2.0 * n / (n - 2)
    shells = [_sphere_integral(m, n, offset, rho, exponent) for rho in nodes]
    return float(np.dot(weights, shells))


def effective_deficit(m: float, n: int, r: float, offset: float, tau: float) -> OffCenterCheck:
    """Area deficit of the off-center ball of the same Schwarzschild volume as B_r.

    For offset 0 the competitor is B_r itself. Otherwise the ball B_{r'}(offset e_n) must
    be disjoint from the horizon ball, and r' is found by bisection on its volume.

    |dOmega| counts the coordinate spheres only; the horizon area is left out, which keeps the
    deficit conservative.

    Raises:
        UnsupportedConfigurationError: The competitor ball meets the horizon ball.

    """
    r_h = horizon_radius(_spec(m, n))
    target = schwarzschild_volume(m, n, r)
    area_exponent = 2.0 * (n - 1) / (n - 2)
    area_sphere = sphere_area_schwarzschild(_spec(m, n), r)

    if offset == 0.0:
        ball_radius, area_boundary, eta = r, area_sphere, 0.0
    else:
        largest = offset - r_h
        if largest <= 0.0 or _ball_volume(m, n, offset, largest) <= target:
            raise UnsupportedConfigurationError(ErrorMessage.INTERSECTING_COMPETITOR, offset=offset, r=r)
        ball_radius = brentq(
            lambda radius: _ball_volume(m, n, offset, radius) - target,
            0.0,
            largest,
            xtol=BISECTION_XTOL * r,
        )
        area_boundary = _sphere_integral(m, n, offset, ball_radius, area_exponent)
        cap = ((tau * r) ** 2 - offset**2 - ball_radius**2) / (2.0 * offset * ball_radius)
        eta = _sphere_integral(m, n, offset, ball_radius, area_exponent, cap) / area_sphere

    deficit = area_boundary - area_sphere
    scale = eta * m * (1.0 - 1.0 / tau) ** 2 * r
    return OffCenterCheck(
        m=m,
        n=n,
        r=r,
        offset=offset,
        tau=tau,
        ball_radius=ball_radius,
        volume=target,
        area_boundary=area_boundary,
        area_sphere=area_sphere,
        deficit=deficit,
        eta=eta,
        ratio=deficit / scale if scale > 0.0 else None,
        isoperimetric_ratio=area_boundary ** (1.0 / (n - 1)) * target ** (-1.0 / n),
    )


class DeficitSweep(ReportModel):
    """Off-center checks over radii, relative offsets, and tau values."""

    checks: tuple[OffCenterCheck, ...]
    min_ratio: float | None
    all_positive: bool
    growth_exponents: tuple[float, ...]

    def ratio_floor(self, fraction: float) -> float | None:
        """``fraction`` times the smallest normalized deficit at the innermost radius."""
        measured = [check for check in self.checks if check.ratio is not None]
        if not measured:
            return None
        inner = min(check.r for check in measured)
        return fraction * min(check.ratio for check in measured if check.r == inner)


def deficit_sweep(
    m: float,
    n: int,
    radii: tuple[float, ...],
    offsets: tuple[float, ...],
    taus: tuple[float, ...],
    threads: int = 1,
) -> DeficitSweep:
    """Map effective_deficit over (r, |p|/r, tau) and fit deficit ~ r^k per shape.

    Args:
        m: Mass.
        n: Dimension.
        radii: Reference radii r.
        offsets: Offsets |p| as multiples of r.
        taus: Off-center parameters tau.
        threads: Worker threads.

    """
    shapes = [(offset, tau) for offset in offsets for tau in taus]
    cases = [(r, offset, tau) for offset, tau in shapes for r in radii]
    checks = parallel_map(lambda case: effective_deficit(m, n, case[0], case[1] * case[0], case[2]), cases, threads)
    ratios = [check.ratio for check in checks if check.ratio is not None]
    exponents = []
    if len(radii) >= 2:  # noqa: PLR2004
        for index in range(len(shapes)):
            block = checks[index * len(radii) : (index + 1) * len(radii)]
            if all(check.deficit > 0.0 for check in block):
                exponents.append(loglog_slope(radii, [check.deficit for check in block]).slope)
    return DeficitSweep(
        checks=tuple(checks),
        min_ratio=min(ratios) if ratios else None,
        all_positive=all(check.deficit > 0.0 for check in checks if check.offset > 0.0),
        growth_exponents=tuple(exponents),
    )


def cone_volume(n: int, c: float) -> float:
    """Volume omega c^n / n of (0, c] x S^{n-1} in the cone metric."""
    return unit_sphere_area(n) * c**n / n


def leading_gap(m: float, n: int, r: float) -> float:
    """Leading term (omega r^n / n) ((n-2)/2) m / r^(n-2) of the volume gap."""
    return unit_sphere_area(n) * r**n / n * (n - 2) / 2.0 * m / r ** (n - 2)

