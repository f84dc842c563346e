"""Gray-phonon Boltzmann transport in a nanowire constriction.

Solves the steady relaxation-time transport equation with the discrete
ordinate method on a 2D (length x width) domain between two black-body
reservoirs.  The formulation is deviational about the mean reservoir
temperature, which makes the problem linear: conductance is the primary
output and power-law channels are fitted from conductance curves.

The wire height enters through a Matthiessen boundary-scattering rate
1/Lambda_h = (1-p)/(1+p)/height merged into the effective mean free path;
a full 3D ordinate solve is out of scope.  Side walls reflect specularly
with probability p and diffusely (adiabatic, energy conserving) otherwise.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from . import _dom_kernels
from .constants import CONSTANTS
from .errors import NumericError, ValidityWarning
from .phonons import PowerLawChannel

#: Relative successive-Q convergence criterion.
Q_RTOL = 1e-8
#: Energy-conservation gate at convergence: max relative variation of the
#: axial flow along the wire.  Stricter than the successive-Q criterion,
#: which alone can pass prematurely when the iteration stalls.
CONSERVATION_RTOL = 1e-7
#: Default iteration cap (total sweeps, either solver method).
MAX_ITERATIONS = 10_000
#: Relative temperature difference beyond which the deviational
#: linearization degrades (reservoir emission itself stays exact).
LINEAR_SPAN = 0.2


@dataclass(frozen=True)
class WireGeometry:
    """Rectangular constriction wire; lengths in m, specularity in [0, 1]."""

    length: float = 500e-9
    width: float = 50e-9
    height: float = 5e-9
    specularity: float = 0.5

    def __post_init__(self) -> None:
        if min(self.length, self.width, self.height) <= 0.0:
            raise ValueError("all wire dimensions must be positive")
        if not 0.0 <= self.specularity <= 1.0:
            raise ValueError(f"specularity must lie in [0, 1], got {self.specularity}")

    @property
    def cross_section(self) -> float:
        """Cross-sectional area width*height in m^2."""
        return self.width * self.height


@dataclass(frozen=True)
class GrayMediumModel:
    """Frequency-integrated Debye medium.

    velocity in m/s, energy_coefficient a in J/(m^3 K^4) with u(T) = a T^4,
    mfp_bulk in m (math.inf for boundary-dominated sub-kelvin transport).
    """

    velocity: float
    energy_coefficient: float
    mfp_bulk: float = math.inf

    def __post_init__(self) -> None:
        if self.velocity <= 0.0:
            raise ValueError(f"velocity must be positive, got {self.velocity}")
        if self.energy_coefficient <= 0.0:
            raise ValueError("energy_coefficient must be positive")
        if self.mfp_bulk <= 0.0:
            raise ValueError(f"mfp_bulk must be positive, got {self.mfp_bulk}")

    @classmethod
    def from_velocity(cls, velocity: float, mfp_bulk: float = math.inf) -> "GrayMediumModel":
        """Debye coefficient a = pi^2 k_B^4 / (10 hbar^3 v^3): 3 polarizations,
        one group velocity."""
        a = math.pi**2 * CONSTANTS.k_B**4 / (10.0 * CONSTANTS.hbar**3 * velocity**3)
        return cls(velocity=velocity, energy_coefficient=a, mfp_bulk=mfp_bulk)

    def boundary_emission(self, T: float) -> float:
        """Black-body phonon flux a v T^4 / 4 in W/m^2."""
        return 0.25 * self.energy_coefficient * self.velocity * T**4


@dataclass(frozen=True)
class DomGrid:
    """Spatial cells and ordinate quadrature order.

    The ordinate set is product Gauss-Legendre in the polar cosine times
    uniform midpoint azimuth; its weights sum to 4 pi to round-off.
    """

    n_x: int = 60
    n_y: int = 16
    n_polar: int = 8
    n_azimuthal: int = 16

    def __post_init__(self) -> None:
        if self.n_x < 4 or self.n_y < 4:
            raise ValueError("need at least 4 cells in each spatial direction")
        if self.n_polar < 2 or self.n_azimuthal < 4:
            raise ValueError("ordinate quadrature is too coarse")
        if self.n_azimuthal % 2:
            raise ValueError("n_azimuthal must be even so eta-mirror ordinates exist")

    def ordinates(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Direction cosines (mu axial, eta transverse), weights, eta-mirror map."""
        xi, w_xi = np.polynomial.legendre.leggauss(self.n_polar)
        azimuth = 2.0 * np.pi * (np.arange(self.n_azimuthal) + 0.5) / self.n_azimuthal
        sin_theta = np.sqrt(1.0 - xi**2)
        mu = (sin_theta[:, None] * np.cos(azimuth)[None, :]).ravel()
        eta = (sin_theta[:, None] * np.sin(azimuth)[None, :]).ravel()
        w = np.repeat(w_xi, self.n_azimuthal) * (2.0 * np.pi / self.n_azimuthal)
        index = np.arange(mu.size).reshape(self.n_polar, self.n_azimuthal)
        mirror = index[:, ::-1].ravel().astype(np.int64)
        return mu, eta, w, mirror


@dataclass(frozen=True)
class DomSolution:
    """Converged steady solve."""

    Q: float                   # net heat flow hot -> cold, W
    flux_profile: np.ndarray   # axial flux at each cross-section, W/m^2
    iterations: int            # total ordinate sweeps performed
    residual: float            # max relative variation of Q along the wire


def effective_inverse_mfp(geom: WireGeometry, medium: GrayMediumModel) -> float:
    """1/Lambda_eff: bulk scattering plus the folded height boundary term."""
    inv = 0.0 if math.isinf(medium.mfp_bulk) else 1.0 / medium.mfp_bulk
    p = geom.specularity
    if p < 1.0:
        inv += (1.0 - p) / (1.0 + p) / geom.height
    return inv


def solve_steady(
    geom: WireGeometry,
    medium: GrayMediumModel,
    T_hot: float,
    T_cold: float,
    grid: DomGrid | None = None,
    *,
    scheme: str = "diamond",
    method: str = "auto",
    max_iterations: int = MAX_ITERATIONS,
    q_rtol: float = Q_RTOL,
) -> DomSolution:
    """Steady heat flow through the wire between reservoirs at T_hot/T_cold.

    scheme: 'diamond' (second-order diamond difference, default) or 'step'
    (donor cell).  method: 'source-iteration' is the plain lagged sweep
    iteration; 'auto' (default) starts with it and, when scattering is
    thick enough to stall the geometric convergence, finishes the same
    fixed point with restarted GMRES over the sweep operator.  Either way
    the result is certified by plain sweeps until the successive-Q
    relative change drops below q_rtol.  Raises NumericError with the
    recent Q history on non-convergence.
    """
    if grid is None:
        grid = DomGrid()
    if T_hot <= 0.0 or T_cold <= 0.0:
        raise ValueError("reservoir temperatures must be positive")
    if scheme not in ("diamond", "step"):
        raise ValueError(f"unknown scheme {scheme!r}")
    if method not in ("auto", "source-iteration"):
        raise ValueError(f"unknown method {method!r}")

    n_x, n_y = grid.n_x, grid.n_y
    if T_hot == T_cold:
        return DomSolution(
            Q=0.0, flux_profile=np.zeros(n_x + 1), iterations=0, residual=0.0
        )
    T_ref = 0.5 * (T_hot + T_cold)
    if abs(T_hot - T_cold) / T_ref > LINEAR_SPAN:
        warnings.warn(
            f"temperature span {abs(T_hot - T_cold):.3g} K exceeds "
            f"{LINEAR_SPAN:.0%} of T_ref = {T_ref:.3g} K; medium properties are "
            "frozen at T_ref",
            ValidityWarning,
            stacklevel=2,
        )

    mu, eta, w, mirror = grid.ordinates()
    emit = medium.energy_coefficient * medium.velocity / (4.0 * np.pi)
    b_hot = emit * (T_hot**4 - T_ref**4)
    b_cold = emit * (T_cold**4 - T_ref**4)
    inv_lambda = effective_inverse_mfp(geom, medium)
    dx = geom.length / n_x
    dy = geom.width / n_y
    diamond = scheme == "diamond"
    n_phi = n_x * n_y
    size = n_phi + n_x * mu.size
    sweeps = [0]

    def apply_sweep(state: np.ndarray, hot: float, cold: float):
        sweeps[0] += 1
        phi = state[:n_phi].reshape(n_x, n_y)
        wall = state[n_phi:].reshape(n_x, mu.size)
        phi2, wall2, q_edges = _dom_kernels.sweep(
            phi, wall, mu, eta, w, mirror, inv_lambda, dx, dy, hot, cold,
            geom.specularity, diamond,
        )
        return np.concatenate([phi2.ravel(), wall2.ravel()]), q_edges

    def q_of(q_edges: np.ndarray) -> float:
        return float(np.mean(q_edges)) * dy * geom.height

    def flux_residual(q_edges: np.ndarray) -> float:
        q_mean = float(np.mean(q_edges))
        return float(np.max(np.abs(q_edges - q_mean)) / max(abs(q_mean), 1e-300))

    constant, _ = apply_sweep(np.zeros(size), b_hot, b_cold)

    # Plain source iteration converges geometrically at rate ~1 - O(1/tau^2);
    # fast when the wire is optically thin, hopeless when thick.  The
    # conservation gate keeps a stalled iteration from passing the
    # successive-Q criterion prematurely.
    si_cap = max_iterations if method == "source-iteration" else min(600, max_iterations)
    state = constant.copy()
    q_history: list[float] = []
    q_prev = None
    converged = False
    while sweeps[0] < si_cap:
        state, q_edges = apply_sweep(state, b_hot, b_cold)
        q_now = q_of(q_edges)
        q_history.append(q_now)
        if (
            q_prev is not None
            and abs(q_now - q_prev) <= q_rtol * abs(q_now)
            and flux_residual(q_edges) <= CONSERVATION_RTOL
        ):
            converged = True
            break
        q_prev = q_now

    if not converged and method == "source-iteration":
        tail = ", ".join(f"{q:.6e}" for q in q_history[-8:])
        raise NumericError(
            f"source iteration hit its {si_cap}-sweep cap without meeting the "
            f"{q_rtol:.1e} successive-Q and {CONSERVATION_RTOL:.1e} conservation "
            f"criteria; last Q values [W]: {tail}"
        )
    if not converged:
        # Scattering-dominated regime.  Solve the same affine fixed point
        # z = A z + b as (I - A^s) z = sum_{j<s} A^j b with restarted GMRES,
        # warm started from the source-iteration state.  Applying the sweep
        # s times per Krylov vector compresses the eigenvalue cluster at
        # 1 - rho down to 1 - rho^s, which a restarted solver can handle.
        optical_depth = geom.length * inv_lambda
        s_steps = int(min(100, max(1, round(optical_depth / 2.0))))
        restart = 40
        for _ in range(2):
            def matvec(z: np.ndarray) -> np.ndarray:
                y = z
                for _ in range(s_steps):
                    y, _ = apply_sweep(y, 0.0, 0.0)
                return z - y

            rhs = np.zeros(size)
            for _ in range(s_steps):
                rhs, _ = apply_sweep(rhs, b_hot, b_cold)

            operator = LinearOperator((size, size), matvec=matvec, dtype=float)
            cycles = max(5, (max_iterations - sweeps[0]) // (restart * s_steps))
            state, _ = gmres(
                operator, rhs, x0=state, rtol=1e-11, atol=0.0,
                maxiter=cycles, restart=restart,
            )
            _, q_edges = apply_sweep(state, b_hot, b_cold)
            if flux_residual(q_edges) <= CONSERVATION_RTOL:
                break
            # One escalation: deeper preconditioning, longer recurrence.
            s_steps = min(200, 2 * s_steps)
            restart = 80

    # Certify the final state with plain sweeps against the convergence
    # criteria, and take Q from the last self-consistent pass.
    state, q_edges = apply_sweep(state, b_hot, b_cold)
    q_prev = q_of(q_edges)
    certified = False
    for _ in range(32):
        state, q_edges = apply_sweep(state, b_hot, b_cold)
        q_now = q_of(q_edges)
        if (
            abs(q_now - q_prev) <= q_rtol * max(abs(q_now), 1e-300)
            and flux_residual(q_edges) <= CONSERVATION_RTOL
        ):
            certified = True
            break
        q_prev = q_now
    if not certified:
        raise NumericError(
            f"transport solve not converged after {sweeps[0]} sweeps: "
            f"successive-Q change {abs(q_now - q_prev):.3e} W on Q = {q_now:.3e} W, "
            f"conservation residual {flux_residual(q_edges):.3e}; grid "
            f"{n_x}x{n_y}, optical depth {geom.length * inv_lambda:.3g}"
        )

    return DomSolution(
        Q=q_of(q_edges),
        flux_profile=q_edges * dy / geom.width,
        iterations=sweeps[0],
        residual=flux_residual(q_edges),
    )


@dataclass(frozen=True)
class ConductancePoint:
    """One row of a conductance curve."""

    T: float          # K
    G: float          # W/K
    residual: float   # conservation residual of the underlying solve


def conductance_curve(
    geom: WireGeometry,
    medium: GrayMediumModel,
    T_list: Sequence[float],
    grid: DomGrid | None = None,
    *,
    dT_fraction: float = 0.02,
    **solve_options,
) -> list[ConductancePoint]:
    """Small-signal conductance G(T) = Q/dT with dT = 0.02 T, sorted in T."""
    points = []
    for T in sorted(T_list):
        if T <= 0.0:
            raise ValueError(f"temperatures must be positive, got {T}")
        dT = dT_fraction * T
        sol = solve_steady(
            geom, medium, T + 0.5 * dT, T - 0.5 * dT, grid, **solve_options
        )
        points.append(ConductancePoint(T=T, G=sol.Q / dT, residual=sol.residual))
    return points


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares power law G = T^(n-1)/alpha fitted to a curve."""

    channel: PowerLawChannel
    log_rms: float   # rms of log-space residuals


def fit_power_law(curve: Sequence[ConductancePoint]) -> PowerLawFit:
    """Fit log G = (n-1) log T - log alpha to a conductance curve.

    Needs at least 5 points spanning a factor of 3 in temperature.
    """
    if len(curve) < 5:
        raise ValueError(f"need at least 5 points to fit, got {len(curve)}")
    T = np.array([p.T for p in curve])
    G = np.array([p.G for p in curve])
    if T.max() < 3.0 * T.min():
        raise ValueError(
            f"temperature span {T.min():.3g}-{T.max():.3g} K is below the "
            "factor-3 minimum for a trustworthy exponent"
        )
    if np.any(G <= 0.0):
        raise ValueError("conductances must be positive for a log-log fit")
    slope, intercept = np.polyfit(np.log(T), np.log(G), 1)
    predicted = slope * np.log(T) + intercept
    rms = float(np.sqrt(np.mean((np.log(G) - predicted) ** 2)))
    n = slope + 1.0
    # Exact power laws land on the channel bounds up to round-off.
    if 2.0 - 1e-9 <= n < 2.0:
        n = 2.0
    elif 5.0 < n <= 5.0 + 1e-9:
        n = 5.0
    try:
        channel = PowerLawChannel(alpha=math.exp(-intercept), n=n, label="fitted")
    except ValueError as exc:
        raise ValueError(f"fitted exponent n = {n:.4g} is outside the power-law "
                         f"channel range: {exc}") from exc
    return PowerLawFit(channel=channel, log_rms=rms)


def constriction_wire_count(junction_area_um2: float, geom: WireGeometry) -> int:
    """Number of parallel wires so the constriction totals 1/3 of the
    junction area, rounded down (at least 1)."""
    if junction_area_um2 <= 0.0:
        raise ValueError("junction area must be positive")
    total = junction_area_um2 * 1e-12 / 3.0  # m^2
    return max(1, int(total / geom.cross_section))
