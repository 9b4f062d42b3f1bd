"""Polynomial time propagation for banded Hamiltonians.

Evolves states under exp(-i H t) for a real symmetric pentadiagonal H using
a Chebyshev expansion: H is mapped to H~ with spectrum inside [-1, 1] via a
rigorous Gershgorin enclosure, and

    exp(-i H dt) = exp(-i c dt) * sum_k a_k(x) T_k(H~),   x = half_width * dt,

with Bessel-function coefficients a_k(x) = (2 - delta_k0) (-i)^k J_k(x).
The series is truncated where the summed tail of |J_k| drops below the
requested local tolerance, which bounds the operator-norm error of a step
by that tolerance.  Per-step cost is one sparse matrix-vector product per
retained term and memory stays O(N), so boson numbers far beyond the reach
of full diagonalization are affordable.

The truncation order grows linearly with half_width * dt, so a caller
stepping a wide-spectrum matrix over a long horizon pays the same total
matvec budget however the horizon is split into steps; steps are capped at
x = 64 only to keep individual coefficient sets small.
"""

from __future__ import annotations

import numpy as np
from scipy.special import jv

from .model import BandedHamiltonian

__all__ = ["ChebyshevPropagator"]

_MAX_PHASE_PER_STEP = 64.0


def _coefficients(x: float, tol: float) -> np.ndarray:
    """Truncated Chebyshev coefficients of exp(-i x u) on u in [-1, 1]."""
    if x < 0.0:
        raise ValueError("negative phase span")
    k_star = int(np.ceil(x + 24.0 + 10.0 * x ** (1.0 / 3.0)))
    orders = np.arange(k_star + 1)
    bessel = jv(orders, x)
    tails = np.cumsum(np.abs(bessel[::-1]))[::-1]
    # Keep through the first order whose remaining tail is negligible.
    small = np.flatnonzero(2.0 * tails <= 0.25 * tol)
    if small.size == 0:
        raise ArithmeticError(f"Chebyshev series did not converge for x={x}")
    k_cut = int(small[0])
    k_cut = max(k_cut, 1)
    coeffs = (2.0 * (-1j) ** orders[:k_cut]) * bessel[:k_cut]
    coeffs[0] *= 0.5
    return coeffs


class ChebyshevPropagator:
    """exp(-i H dt) applier bound to one banded Hamiltonian.

    tol is the operator-norm error budget per step; coefficient sets are
    cached per distinct step size, so uniform grids pay the Bessel setup
    once.
    """

    def __init__(self, h: BandedHamiltonian, tol: float = 1e-9):
        lo, hi = h.gershgorin()
        pad = 1e-12 * max(1.0, abs(lo), abs(hi))
        self.center = 0.5 * (hi + lo)
        self.half_width = 0.5 * (hi - lo) + pad
        self.tol = tol
        self._diag = (h.diag - self.center) / self.half_width
        self._off1 = h.off1 / self.half_width
        self._off2 = h.off2 / self.half_width
        self._coeff_cache: dict[float, np.ndarray] = {}

    def _matvec(self, v: np.ndarray) -> np.ndarray:
        out = self._diag * v
        out[:-1] += self._off1 * v[1:]
        out[1:] += self._off1 * v[:-1]
        if self._off2.size:
            out[:-2] += self._off2 * v[2:]
            out[2:] += self._off2 * v[:-2]
        return out

    def _single_step(self, psi: np.ndarray, dt: float) -> np.ndarray:
        x = self.half_width * dt
        key = round(x, 12)
        coeffs = self._coeff_cache.get(key)
        if coeffs is None:
            coeffs = _coefficients(x, self.tol)
            self._coeff_cache[key] = coeffs
        t_prev = psi.astype(complex, copy=True)
        acc = coeffs[0] * t_prev
        if len(coeffs) > 1:
            t_cur = self._matvec(t_prev)
            acc += coeffs[1] * t_cur
            for ck in coeffs[2:]:
                t_next = 2.0 * self._matvec(t_cur) - t_prev
                acc += ck * t_next
                t_prev, t_cur = t_cur, t_next
        acc *= np.exp(-1j * self.center * dt)
        norm = np.linalg.norm(acc)
        if not np.isfinite(norm) or norm == 0.0:
            raise ArithmeticError("propagation lost the state norm")
        return acc / norm

    def step(self, psi: np.ndarray, dt: float) -> np.ndarray:
        """Advance psi by dt; long jumps are split to cap the series order."""
        if dt < 0.0:
            raise ValueError("propagation runs forward in time only")
        if dt == 0.0:
            return psi.astype(complex, copy=True)
        n_sub = max(1, int(np.ceil(self.half_width * dt / _MAX_PHASE_PER_STEP)))
        sub = dt / n_sub
        out = psi
        for _ in range(n_sub):
            out = self._single_step(out, sub)
        return out
