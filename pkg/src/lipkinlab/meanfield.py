"""Mean-field energy landscape of the two-level boson environment.

In the condensate (coherent-state) limit the environment is described by a
single deformation parameter beta: each boson occupies the superposition
(s' + beta t')|0> up to normalization.  The energy per boson of the
resulting product state is the rational surface

    E(beta)/N = beta^2/(1+beta^2)^2 * ( 5 a - 4
                + 4 beta w (a - 1)
                + beta^2 [ a + w^2 (a - 1) ] ),

with a = alpha and w = omega.  All structural statements about the model
(phase boundaries, critical couplings, the energies at which the level
density is singular) reduce to the geometry of this surface, which is what
this module computes.

Landscape geometry in brief: beta = 0 is always stationary.  For
alpha > 4/5 it is a local minimum (the symmetric well); a deformed well at
beta > 0 exists below the spinodal line and becomes the global minimum
below the critical line alpha_c(omega) = (4+omega^2)/(5+omega^2).  For
omega > 0 the landscape is asymmetric and can carry one further shallow
well at beta < 0; its energy marks the first-order singularity of the
excited-state structure.

Couplings to the probe qubit enter through the quench term lam * n_t,
which adds lam * beta^2/(1+beta^2) to the surface.  Critical couplings are
the lam values at which the quenched environment energy reaches a singular
energy of the spectrum (0 for the cusp, the beta < 0 well energy for the
step).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

__all__ = [
    "MeanFieldPoint",
    "PhaseSpacePoint",
    "CriticalCouplings",
    "energy_surface",
    "quenched_surface",
    "minimize_surface",
    "critical_alpha",
    "antispinodal_alpha",
    "spinodal_alpha",
    "lambda_star",
    "energy_transfer",
    "critical_coupling_continuous",
    "first_order_critical_energy",
    "critical_coupling_first_order",
    "critical_couplings",
    "complex_surface",
    "write_phase_diagram_csv",
    "write_surface_csv",
]

# Scan bracket for the deformation parameter.  The surface flattens toward
# alpha + omega^2 (alpha - 1) as |beta| -> inf, so every well of interest
# for alpha in [0, 1], omega <= 2 lies well inside [-10, 10].
_BETA_LIMIT = 10.0
_SCAN_POINTS = 2001


@dataclass(frozen=True)
class MeanFieldPoint:
    """Equilibrium of the (possibly quenched) energy surface.

    beta_e is the global minimizer, energy_per_boson its surface value.
    phase is "symmetric" (beta_e = 0), "broken" (deformed global minimum,
    no symmetric well) or "coexistence" (deformed global minimum with a
    metastable symmetric well).  When a distinct metastable well exists its
    location and energy are reported in secondary_beta / secondary_energy.
    """

    beta_e: float
    energy_per_boson: float
    phase: str
    secondary_beta: Optional[float] = None
    secondary_energy: Optional[float] = None


@dataclass(frozen=True)
class PhaseSpacePoint:
    """Point on the condensate phase space, phi in [0, pi], xi in [0, 2 pi)."""

    phi: float
    xi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.phi <= np.pi:
            raise ValueError(f"phi must lie in [0, pi], got {self.phi}")
        if not 0.0 <= self.xi < 2.0 * np.pi:
            raise ValueError(f"xi must lie in [0, 2 pi), got {self.xi}")


@dataclass(frozen=True)
class CriticalCouplings:
    """Couplings at which the quenched environment hits singular energies.

    lambda_c2 drives the initial state onto the level-density cusp at
    E = 0 (continuous singularity), lambda_c1 onto the beta < 0 well energy
    e_c1_per_boson (step singularity; absent when the landscape has no such
    well).  lambda_star is the coupling at which the quenched Hamiltonian
    crosses its own ground-state transition.
    """

    lambda_star: float
    lambda_c2: float
    lambda_c1: Optional[float] = None
    e_c1_per_boson: Optional[float] = None


def energy_surface(alpha: float, omega: float, beta) -> np.ndarray | float:
    """Energy per boson of the condensate at deformation beta.

    Broadcasts over ``beta``; scalars in give scalars out.
    """
    b = np.asarray(beta, dtype=float)
    b2 = b * b
    bracket = (5.0 * alpha - 4.0) + 4.0 * b * omega * (alpha - 1.0) + b2 * (
        alpha + omega * omega * (alpha - 1.0)
    )
    out = b2 / (1.0 + b2) ** 2 * bracket
    return float(out) if np.isscalar(beta) else out


def quenched_surface(alpha: float, omega: float, lam: float, beta) -> np.ndarray | float:
    """Surface of the quenched Hamiltonian: adds the lam * n_t energy."""
    b = np.asarray(beta, dtype=float)
    out = np.asarray(energy_surface(alpha, omega, b)) + lam * b * b / (1.0 + b * b)
    return float(out) if np.isscalar(beta) else out


def _stationary_polish(alpha: float, omega: float, lam: float, beta0: float) -> float:
    """Newton-polish a nonzero stationary point of the quenched surface.

    The derivative of the quenched surface vanishes where
    beta * (c0 + c1 b + c2 b^2 + c3 b^3) = 0 with the cubic coefficients
    below, so golden-section results (accurate only to sqrt(eps) because
    the surface is flat at a minimum) can be sharpened to machine
    precision.  Falls back to the input if Newton wanders.
    """
    p0 = 5.0 * alpha - 4.0
    p1 = 4.0 * omega * (alpha - 1.0)
    p2 = alpha + omega * omega * (alpha - 1.0)
    c0 = 2.0 * p0 + 2.0 * lam
    c1 = 3.0 * p1
    c2 = 4.0 * p2 - 2.0 * p0 + 2.0 * lam
    c3 = -p1
    beta = beta0
    for _ in range(8):
        g = c0 + beta * (c1 + beta * (c2 + beta * c3))
        gp = c1 + beta * (2.0 * c2 + beta * 3.0 * c3)
        if gp == 0.0:
            break
        step = g / gp
        beta -= step
        if abs(step) < 1e-15 * max(1.0, abs(beta)):
            break
    if not np.isfinite(beta) or abs(beta - beta0) > 1e-3:
        return beta0
    return beta


def _local_minima_on_grid(
    f: Callable[[np.ndarray], np.ndarray],
    grid: np.ndarray,
    polish: Optional[Callable[[float], float]] = None,
) -> list[tuple[float, float]]:
    """Strict interior local minima of f on the grid, golden-refined.

    Returns (beta, energy) pairs.  Minimizers within 1e-7 of zero are
    snapped to the exactly stationary symmetric point (0, 0).
    """
    values = f(grid)
    minima: list[tuple[float, float]] = []
    interior = np.flatnonzero(
        (values[1:-1] < values[:-2]) & (values[1:-1] < values[2:])
    ) + 1
    for i in interior:
        res = minimize_scalar(
            lambda x: float(f(np.asarray(x))),
            bracket=(grid[i - 1], grid[i], grid[i + 1]),
            method="golden",
            options={"xtol": 1e-12},
        )
        beta, energy = float(res.x), float(res.fun)
        if abs(beta) <= 1e-7:
            beta, energy = 0.0, 0.0
        elif polish is not None:
            beta = polish(beta)
            energy = float(f(np.asarray(beta)))
        minima.append((beta, energy))
    # Merge refinements that converged to the same well.
    merged: list[tuple[float, float]] = []
    for beta, energy in sorted(minima):
        if merged and abs(beta - merged[-1][0]) < 1e-6:
            if energy < merged[-1][1]:
                merged[-1] = (beta, energy)
            continue
        merged.append((beta, energy))
    return merged


def _barrier_between(f: Callable[[np.ndarray], np.ndarray], b1: float, b2: float) -> float:
    """Highest surface value between two wells, on a fine grid."""
    lo, hi = sorted((b1, b2))
    grid = np.linspace(lo, hi, 2001)
    return float(np.max(f(grid)))


def minimize_surface(alpha: float, omega: float, lam: float = 0.0) -> MeanFieldPoint:
    """Global minimum of the (quenched) energy surface over [-10, 10].

    A 2001-point scan locates every well, each is refined by golden-section
    search, and the lowest is returned.  A metastable well is reported only
    if a barrier of at least 1e-10 per boson separates it from the global
    one.  At exact degeneracy (within 1e-13) the deformed well wins, so the
    phase label stays consistent at the critical line itself.
    """
    f = lambda b: np.asarray(quenched_surface(alpha, omega, lam, b))
    grid = np.linspace(-_BETA_LIMIT, _BETA_LIMIT, _SCAN_POINTS)
    polish = lambda b: _stationary_polish(alpha, omega, lam, b)
    wells = _local_minima_on_grid(f, grid, polish=polish)
    if not any(b == 0.0 for b, _ in wells):
        # beta = 0 is always stationary; keep it as a candidate even when
        # it is a maximum so that the symmetric phase is never missed.
        curvature = 5.0 * alpha - 4.0 + lam
        if curvature >= 0.0:
            wells.append((0.0, 0.0))
    if not wells:
        wells = [(0.0, 0.0)]

    e_min = min(e for _, e in wells)
    # Deterministic tie-break at degeneracy: the deformed well wins over
    # the symmetric one, and the positive branch over its omega = 0 mirror.
    candidates = [w for w in wells if w[1] <= e_min + 1e-13]
    beta_g, e_g = max(candidates, key=lambda w: (abs(w[0]), w[0]))
    wells_sorted = sorted(wells, key=lambda w: w[1])
    if beta_g == 0.0:
        e_g = 0.0

    secondary: Optional[tuple[float, float]] = None
    for beta, energy in wells_sorted:
        if abs(beta - beta_g) < 1e-6:
            continue
        barrier = _barrier_between(f, beta_g, beta)
        if barrier - energy > 1e-10:
            if secondary is None or energy < secondary[1]:
                secondary = (beta, energy)

    has_symmetric_well = any(abs(b) < 1e-6 for b, _ in wells)
    if beta_g == 0.0:
        phase = "symmetric"
    elif has_symmetric_well:
        phase = "coexistence"
    else:
        phase = "broken"
    return MeanFieldPoint(
        beta_e=beta_g,
        energy_per_boson=e_g,
        phase=phase,
        secondary_beta=None if secondary is None else secondary[0],
        secondary_energy=None if secondary is None else secondary[1],
    )


def critical_alpha(omega: float) -> float:
    """Ground-state critical line: (4 + omega^2) / (5 + omega^2)."""
    w2 = omega * omega
    return (4.0 + w2) / (5.0 + w2)


def antispinodal_alpha(omega: float) -> float:
    """Line where the symmetric well appears; omega-independent at 4/5."""
    return 0.8


def _bisect(f: Callable[[float], float], lo: float, hi: float, xtol: float = 1e-12) -> float:
    """Plain bisection; the bracket must change sign."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def _spinodal_residual(alpha: float, omega: float) -> float:
    """Residual of the implicit spinodal condition."""
    a_term = (4.0 - 3.0 * alpha + 2.0 * (alpha - 1.0) * omega * omega) ** 2
    b_term = 36.0 * omega * omega * (alpha - 1.0) ** 2
    x = b_term / a_term
    if x < 1e-8:
        # Series of (1 - (1+x)^{3/2}) / x around x = 0.
        ratio = -1.5 - 0.375 * x + x * x / 16.0
    else:
        ratio = (1.0 - (1.0 + x) ** 1.5) / x
    return 3.0 * alpha / (3.0 * alpha - 4.0) - ratio


def spinodal_alpha(omega: float) -> float:
    """Line where the deformed well appears, root of the implicit condition.

    Bracketed in (alpha_c(omega), 1); at omega = 0 the three landscape
    lines merge and the limit 4/5 is returned directly.
    """
    if omega == 0.0:
        return 0.8
    lo = critical_alpha(omega) + 1e-9
    hi = 1.0 - 1e-9
    return _bisect(lambda a: _spinodal_residual(a, omega), lo, hi)


def lambda_star(alpha: float, omega: float) -> float:
    """Coupling at which the quenched Hamiltonian reaches its own
    ground-state transition: (1 - alpha)(4 + omega^2) - alpha."""
    return (1.0 - alpha) * (4.0 + omega * omega) - alpha


def energy_transfer(lam: float, beta: float, n_bosons: int) -> float:
    """Energy pumped into the environment by the quench,
    lam * N * beta^2 / (1 + beta^2)."""
    b2 = beta * beta
    return lam * n_bosons * b2 / (1.0 + b2)


def critical_coupling_continuous(alpha: float, omega: float) -> float:
    """Coupling that parks the quenched initial state on the E = 0 cusp.

    The initial condensate keeps the zero-coupling deformation beta_e; its
    quenched energy per boson is E(beta_e)/N + lam beta_e^2/(1+beta_e^2),
    which is linear in lam, so the root is solved directly and its residual
    verified below 1e-10.
    """
    eq = minimize_surface(alpha, omega)
    if eq.beta_e == 0.0:
        raise ValueError(
            f"no deformed equilibrium at alpha={alpha}, omega={omega}; "
            "the continuous critical coupling needs the broken phase"
        )
    b2 = eq.beta_e**2
    lam = -eq.energy_per_boson * (1.0 + b2) / b2
    residual = eq.energy_per_boson + lam * b2 / (1.0 + b2)
    if abs(residual) > 1e-10:
        raise ArithmeticError(f"critical coupling residual {residual}")
    return lam


def first_order_critical_energy(alpha: float, omega: float) -> Optional[float]:
    """Energy per boson of the beta < 0 well, or None when absent.

    The well exists only for omega > 0 and only where the landscape still
    supports a metastable island on the negative half-line; it is required
    to be separated from beta = 0 by a barrier above 1e-10.
    """
    if omega <= 0.0:
        return None
    f = lambda b: np.asarray(energy_surface(alpha, omega, b))
    grid = np.linspace(-_BETA_LIMIT, -1e-6, _SCAN_POINTS)
    polish = lambda b: _stationary_polish(alpha, omega, 0.0, b)
    wells = [(b, e) for b, e in _local_minima_on_grid(f, grid, polish=polish) if b < 0.0]
    if not wells:
        return None
    beta_w, e_w = min(wells, key=lambda w: w[1])
    barrier = _barrier_between(f, beta_w, 0.0)
    if barrier - e_w <= 1e-10:
        return None
    return e_w


def critical_coupling_first_order(alpha: float, omega: float) -> Optional[float]:
    """Coupling that parks the quenched initial state on the step energy."""
    e_c1 = first_order_critical_energy(alpha, omega)
    if e_c1 is None:
        return None
    eq = minimize_surface(alpha, omega)
    if eq.beta_e == 0.0:
        return None
    b2 = eq.beta_e**2
    lam = (e_c1 - eq.energy_per_boson) * (1.0 + b2) / b2
    residual = eq.energy_per_boson + lam * b2 / (1.0 + b2) - e_c1
    if abs(residual) > 1e-10:
        raise ArithmeticError(f"first-order coupling residual {residual}")
    return lam


def critical_couplings(alpha: float, omega: float) -> CriticalCouplings:
    """All critical couplings of a broken-phase parameter point."""
    lam_c2 = critical_coupling_continuous(alpha, omega)
    lam_c1 = critical_coupling_first_order(alpha, omega)
    return CriticalCouplings(
        lambda_star=lambda_star(alpha, omega),
        lambda_c2=lam_c2,
        lambda_c1=lam_c1,
        e_c1_per_boson=first_order_critical_energy(alpha, omega),
    )


def complex_surface(alpha: float, omega: float, phi, xi) -> np.ndarray | float:
    """Energy per boson over the full condensate phase space.

    The condensate amplitude is z = tan(phi/2) e^{i xi}; in the large-N
    limit the energy per boson is

        H(phi, xi)/N = alpha sin^2(phi/2)
                       - (1 - alpha) [ sin^2(phi) cos^2(xi)
                                       + 4 omega sin^3(phi/2) cos(phi/2) cos(xi)
                                       + omega^2 sin^4(phi/2) ].

    Written in half-angle form the expression stays finite at phi = pi,
    where the condensate is the pure upper-level state with energy
    alpha - (1 - alpha) omega^2.  The xi = 0 and xi = pi sections reduce to
    energy_surface at beta = +-tan(phi/2).
    """
    p = np.asarray(phi, dtype=float)
    x = np.asarray(xi, dtype=float)
    s_half = np.sin(0.5 * p)
    c_half = np.cos(0.5 * p)
    s2 = s_half * s_half
    cos_xi = np.cos(x)
    interaction = (
        (np.sin(p) * cos_xi) ** 2
        + 4.0 * omega * s2 * s_half * c_half * cos_xi
        + (omega * s2) ** 2
    )
    out = alpha * s2 - (1.0 - alpha) * interaction
    if np.isscalar(phi) and np.isscalar(xi):
        return float(out)
    return out


def surface_at(alpha: float, omega: float, point: PhaseSpacePoint) -> float:
    """complex_surface evaluated at a validated phase-space point."""
    return float(complex_surface(alpha, omega, point.phi, point.xi))


def write_phase_diagram_csv(path, omega_values: Sequence[float]) -> None:
    """Phase-boundary table: one row per omega, plot-ready."""
    with open(path, "w", newline="") as fh:
        fh.write("# lipkinlab-phase-diagram v1\n")
        writer = csv.writer(fh)
        writer.writerow(["omega", "alpha_critical", "alpha_spinodal", "alpha_antispinodal"])
        for omega in omega_values:
            writer.writerow(
                [
                    f"{omega:.12g}",
                    f"{critical_alpha(omega):.12g}",
                    f"{spinodal_alpha(omega):.12g}",
                    f"{antispinodal_alpha(omega):.12g}",
                ]
            )


def write_surface_csv(path, alpha: float, omega: float, n_phi: int = 201, n_xi: int = 201) -> None:
    """Energy-per-boson grid over (phi, xi), long format, plot-ready."""
    phi = np.linspace(0.0, np.pi, n_phi)
    xi = np.linspace(0.0, 2.0 * np.pi, n_xi, endpoint=False)
    with open(path, "w", newline="") as fh:
        fh.write("# lipkinlab-surface v1\n")
        writer = csv.writer(fh)
        writer.writerow(["phi", "xi", "energy_per_boson"])
        for p in phi:
            row_e = complex_surface(alpha, omega, p, xi)
            for x, e in zip(xi, np.atleast_1d(row_e)):
                writer.writerow([f"{p:.12g}", f"{x:.12g}", f"{e:.12g}"])
