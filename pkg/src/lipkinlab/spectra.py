"""Exact spectra and decoherence signals of the coupled qubit-environment.

The environment starts in the ground state |g0> of H0.  A qubit prepared in
a superposition a|0> + b|1> and coupled through its excited-state
projector dephases according to the overlap amplitude

    r(t) = <g0| exp(-i H1 t) |g0>,      H1 = H0 + lam * n_t,

so everything reduces to spectral data of two banded matrices: expanding
|g0> in the eigenbasis of H1 gives r(t) = sum_k w_k exp(-i E_k t) with
weights w_k = |<k|g0>|^2.

Two evaluation strategies are provided.  The spectral route diagonalizes
H1 completely (memory O(N^2), the default up to N = 4000) and evaluates
the sum at arbitrary times for free.  The propagation route advances |g0>
with the Chebyshev propagator (memory O(N)) and reads the overlap off at
each requested time; intermediate states are checkpointed so local grid
refinements do not restart from zero.  Both follow the shift-omitted
matrix convention of the model module: |r| is unaffected, the phase of
r(t) is defined up to the uniform shift.

Revival extraction: |r(t)| starts at 1, collapses, and partially revives.
The quantity of interest is the height of the second maximum, i.e. the
first local maximum after the first interior local minimum of |r|.  The
scan requires a strict rise and fall over three consecutive samples and is
refined by local re-sampling around the detected peak.
"""

from __future__ import annotations

import bisect
import csv
import io
import json
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import eig_banded
from numpy.linalg import LinAlgError

from .model import BandedHamiltonian, ModelParams, build_matrix
from .propagation import ChebyshevPropagator

__all__ = [
    "EigensolverError",
    "HorizonError",
    "SpectrumResult",
    "QubitState",
    "DecoherenceSignal",
    "HorizonPolicy",
    "RmaxPoint",
    "RmaxResult",
    "eigensystem",
    "ground_state",
    "lowest_levels",
    "decoherence_factor",
    "spectral_weights",
    "reduced_density_matrix",
    "r_max",
    "r_max_adaptive",
]

logger = logging.getLogger(__name__)

SIGNAL_FORMAT = "lipkinlab-signal"
SIGNAL_VERSION = 1

# Largest boson number handled by full diagonalization when callers ask
# for the automatic strategy; above it the propagation route takes over.
SPECTRAL_LIMIT = 4000

_WEIGHT_DROP = 1e-14


class EigensolverError(RuntimeError):
    """Banded eigensolver failure, carrying the offending parameter point."""

    def __init__(self, message: str, params: Optional[ModelParams] = None):
        super().__init__(message if params is None else f"{message} at {params}")
        self.params = params


class HorizonError(RuntimeError):
    """No second maximum inside the sampled horizon; callers extend it."""


@dataclass(eq=False)
class SpectrumResult:
    """Eigenvalues (always complete), ground vector, vectors on demand."""

    params: ModelParams
    eigenvalues: np.ndarray
    ground_vector: np.ndarray
    eigenvectors: Optional[np.ndarray] = None

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])


def _fix_gauge(vec: np.ndarray) -> np.ndarray:
    """Deterministic sign: the largest-magnitude component is positive."""
    pivot = int(np.argmax(np.abs(vec)))
    return -vec if vec[pivot] < 0.0 else vec


def eigensystem(h: BandedHamiltonian, need_vectors: bool = False) -> SpectrumResult:
    """Complete eigensolution of a banded Hamiltonian.

    Eigenvalues are ascending.  With need_vectors the full orthonormal
    eigenvector matrix is returned (columns match eigenvalue order, memory
    O(N^2)); the ground vector is available either way.
    """
    bands = h.lower_bands()
    try:
        if need_vectors:
            values, vectors = eig_banded(bands, lower=True)
            ground = _fix_gauge(vectors[:, 0].copy())
            return SpectrumResult(h.params, values, ground, vectors)
        values = eig_banded(bands, lower=True, eigvals_only=True)
    except LinAlgError as exc:
        raise EigensolverError(f"banded eigensolver failed: {exc}", h.params) from exc
    return SpectrumResult(h.params, values, ground_state(h)[1], None)


def ground_state(h: BandedHamiltonian) -> tuple[float, np.ndarray]:
    """Ground energy and vector without the O(N^2) full solve."""
    try:
        values, vectors = eig_banded(
            h.lower_bands(), lower=True, select="i", select_range=(0, 0)
        )
    except LinAlgError as exc:
        raise EigensolverError(f"ground-state solve failed: {exc}", h.params) from exc
    return float(values[0]), _fix_gauge(vectors[:, 0].copy())


def lowest_levels(h: BandedHamiltonian, k: int) -> np.ndarray:
    """The k lowest eigenvalues, ascending."""
    if not 1 <= k <= h.dim:
        raise ValueError(f"need 1 <= k <= {h.dim}, got {k}")
    try:
        return eig_banded(
            h.lower_bands(), lower=True, eigvals_only=True,
            select="i", select_range=(0, k - 1),
        )
    except LinAlgError as exc:
        raise EigensolverError(f"partial eigensolve failed: {exc}", h.params) from exc


@dataclass(frozen=True)
class QubitState:
    """Probe qubit amplitudes; must be normalized to 1e-12."""

    amp0: complex
    amp1: complex

    def __post_init__(self) -> None:
        norm = abs(self.amp0) ** 2 + abs(self.amp1) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"qubit state not normalized: |a|^2+|b|^2 = {norm}")

    @classmethod
    def equal_superposition(cls) -> "QubitState":
        s = 1.0 / np.sqrt(2.0)
        return cls(amp0=s, amp1=s)


@dataclass(eq=False)
class DecoherenceSignal:
    """Sampled r(t) trace plus, when known, the spectral data behind it.

    method is "exact" for signals from this module; the approximate
    routes use "tda" and "tda2".  energies/weights are populated by the
    spectral strategy only.
    """

    times: np.ndarray
    values: np.ndarray
    params: Optional[ModelParams] = None
    coupling: Optional[float] = None
    method: str = "exact"
    energies: Optional[np.ndarray] = field(default=None, repr=False)
    weights: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.times.ndim != 1 or self.times.shape != self.values.shape:
            raise ValueError("times and values must be matching 1-d arrays")
        if self.times.size == 0:
            raise ValueError("empty signal")
        if not np.all(np.isfinite(self.times)) or np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be finite and strictly ascending")
        mags = np.abs(self.values)
        if not np.all(np.isfinite(mags)) or np.max(mags) > 1.0 + 1e-8:
            raise ValueError("|r(t)| must stay below 1 + 1e-8")
        if self.times[0] == 0.0 and abs(self.values[0] - 1.0) > 1e-8:
            raise ValueError("r(0) must equal 1")
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if np.any(w < 0.0) or abs(w.sum() - 1.0) > 1e-8:
                raise ValueError("spectral weights must be nonnegative and sum to 1")

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    def to_csv(self, path) -> None:
        """Versioned plot-ready table: t, Re r, Im r, |r|."""
        with open(path, "w", newline="") as fh:
            fh.write(f"# {SIGNAL_FORMAT} v{SIGNAL_VERSION}\n")
            fh.write(f"# method={self.method} {_params_comment(self.params, self.coupling)}\n")
            writer = csv.writer(fh)
            writer.writerow(["t", "re_r", "im_r", "abs_r"])
            for t, v in zip(self.times, self.values):
                writer.writerow(
                    [f"{t:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}", f"{abs(v):.17g}"]
                )

    @classmethod
    def from_csv(cls, path) -> "DecoherenceSignal":
        with open(path, "r", newline="") as fh:
            header = fh.readline().strip()
            if header != f"# {SIGNAL_FORMAT} v{SIGNAL_VERSION}":
                raise ValueError(f"unrecognized signal header: {header!r}")
            meta = fh.readline().strip()
            method, params, coupling = _parse_params_comment(meta)
            rows = list(csv.reader(fh))
        if not rows or rows[0] != ["t", "re_r", "im_r", "abs_r"]:
            raise ValueError("malformed signal table")
        data = np.array([[float(x) for x in row[:3]] for row in rows[1:]])
        return cls(
            times=data[:, 0],
            values=data[:, 1] + 1j * data[:, 2],
            params=params,
            coupling=coupling,
            method=method,
        )

    def to_json(self, path) -> None:
        payload = {
            "format": SIGNAL_FORMAT,
            "version": SIGNAL_VERSION,
            "method": self.method,
            "params": None if self.params is None else self.params.to_record(),
            "coupling": self.coupling,
            "times": self.times.tolist(),
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
        }
        with open(path, "w") as fh:
            json.dump(payload, fh)

    @classmethod
    def from_json(cls, path) -> "DecoherenceSignal":
        with open(path) as fh:
            payload = json.load(fh)
        if payload.get("format") != SIGNAL_FORMAT or payload.get("version") != SIGNAL_VERSION:
            raise ValueError("unrecognized signal payload")
        params = payload.get("params")
        return cls(
            times=np.asarray(payload["times"], dtype=float),
            values=np.asarray(payload["re"], dtype=float)
            + 1j * np.asarray(payload["im"], dtype=float),
            params=None if params is None else ModelParams.from_record(params),
            coupling=payload.get("coupling"),
            method=payload.get("method", "exact"),
        )


def _params_comment(params: Optional[ModelParams], coupling: Optional[float]) -> str:
    if params is None:
        return "coupling=%s" % ("" if coupling is None else f"{coupling:.17g}")
    rec = params.to_record()
    coup = "" if coupling is None else f" coupling={coupling:.17g}"
    return (
        f"alpha={rec['alpha']:.17g} omega={rec['omega']:.17g} "
        f"lambda={rec['lambda']:.17g} N={rec['N']}{coup}"
    )


def _parse_params_comment(line: str) -> tuple[str, Optional[ModelParams], Optional[float]]:
    method = "exact"
    fields: dict[str, str] = {}
    for token in line.lstrip("# ").split():
        if "=" in token:
            key, _, value = token.partition("=")
            fields[key] = value
    method = fields.pop("method", "exact")
    coupling = float(fields["coupling"]) if fields.get("coupling") else None
    params = None
    if {"alpha", "omega", "lambda", "N"} <= set(fields):
        params = ModelParams.from_record(
            {
                "alpha": float(fields["alpha"]),
                "omega": float(fields["omega"]),
                "lambda": float(fields["lambda"]),
                "N": int(fields["N"]),
            }
        )
    return method, params, coupling


def spectral_weights(params: ModelParams, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of H1 and weights of |g0> in its eigenbasis.

    Overlap weights below 1e-14 are dropped and the tiny deficit is
    renormalized away (and logged), which keeps later spectral sums short
    without touching the 1e-8 normalization contract.
    """
    if params.lam != 0.0:
        raise ValueError("params must describe H0, i.e. carry lam = 0")
    _, psi0 = ground_state(build_matrix(params))
    h1 = build_matrix(params.with_coupling(lam))
    spec = eigensystem(h1, need_vectors=True)
    overlaps = spec.eigenvectors.T @ psi0
    weights = overlaps * overlaps
    keep = weights >= _WEIGHT_DROP
    deficit = float(weights[~keep].sum())
    if deficit > 0.0:
        logger.debug(
            "dropped %d spectral weights totalling %.3e at %s, lam=%g",
            int((~keep).sum()), deficit, params, lam,
        )
    kept = weights[keep]
    return spec.eigenvalues[keep], kept / kept.sum()


class _SpectralEvaluator:
    """r(t) from an explicit (E_k, w_k) decomposition."""

    def __init__(self, energies: np.ndarray, weights: np.ndarray):
        self.energies = energies
        self.weights = weights

    def values(self, times: np.ndarray) -> np.ndarray:
        out = np.empty(times.shape, dtype=complex)
        chunk = max(1, 4_000_000 // max(1, self.energies.size))
        for i in range(0, times.size, chunk):
            block = times[i : i + chunk, None] * self.energies[None, :]
            out[i : i + chunk] = np.exp(-1j * block) @ self.weights
        return out


class _PropagationEvaluator:
    """r(t) by checkpointed Chebyshev propagation, memory O(N)."""

    def __init__(
        self,
        h1: BandedHamiltonian,
        psi0: np.ndarray,
        tol: float = 1e-9,
        checkpoint_every: int = 64,
    ):
        self.prop = ChebyshevPropagator(h1, tol=tol)
        self.psi0 = psi0.astype(complex)
        self._cp_times: list[float] = [0.0]
        self._cp_states: list[np.ndarray] = [self.psi0.copy()]
        self._cursor_t = 0.0
        self._cursor = self.psi0.copy()
        self._since_cp = 0
        self.checkpoint_every = checkpoint_every

    def values(self, times: np.ndarray) -> np.ndarray:
        out = np.empty(times.shape, dtype=complex)
        for i, t in enumerate(times):
            if t < self._cursor_t - 1e-12:
                j = bisect.bisect_right(self._cp_times, t + 1e-12) - 1
                self._cursor_t = self._cp_times[j]
                self._cursor = self._cp_states[j].copy()
            dt = t - self._cursor_t
            if dt > 1e-14:
                self._cursor = self.prop.step(self._cursor, dt)
                self._cursor_t = t
                self._since_cp += 1
                if (
                    self._since_cp >= self.checkpoint_every
                    and self._cursor_t > self._cp_times[-1]
                ):
                    self._cp_times.append(self._cursor_t)
                    self._cp_states.append(self._cursor.copy())
                    self._since_cp = 0
            out[i] = np.vdot(self.psi0, self._cursor)
        return out


def _make_evaluator(params: ModelParams, lam: float, method: str):
    if method == "auto":
        method = "spectral" if params.n_bosons <= SPECTRAL_LIMIT else "propagation"
    if method == "spectral":
        energies, weights = spectral_weights(params, lam)
        return _SpectralEvaluator(energies, weights), "spectral", (energies, weights)
    if method == "propagation":
        if params.lam != 0.0:
            raise ValueError("params must describe H0, i.e. carry lam = 0")
        _, psi0 = ground_state(build_matrix(params))
        h1 = build_matrix(params.with_coupling(lam))
        return _PropagationEvaluator(h1, psi0), "propagation", None
    raise ValueError(f"unknown method {method!r}; use auto, spectral or propagation")


def decoherence_factor(
    params: ModelParams,
    lam: float,
    times,
    method: str = "auto",
) -> DecoherenceSignal:
    """Sample r(t) = <g0| exp(-i H1 t) |g0> on the given times.

    params describes the unquenched environment (lam = 0 enforced); the
    qubit coupling is passed separately.  method selects the evaluation
    strategy: "spectral" (full diagonalization), "propagation"
    (Chebyshev), or "auto" which switches on boson number.
    """
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("times must be a nonempty 1-d array")
    if np.any(np.diff(t) <= 0) or t[0] < 0.0:
        raise ValueError("times must be strictly ascending and nonnegative")
    evaluator, used, spectral = _make_evaluator(params, lam, method)
    values = evaluator.values(t)
    energies = weights = None
    if spectral is not None:
        energies, weights = spectral
    return DecoherenceSignal(
        times=t,
        values=values,
        params=params,
        coupling=lam,
        method="exact",
        energies=energies,
        weights=weights,
    )


def reduced_density_matrix(state: QubitState, r: complex) -> np.ndarray:
    """Qubit density matrix after tracing out the environment.

    The off-diagonal coherence is multiplied by the decoherence factor
    r; |r| may not exceed 1 + 1e-8.
    """
    if abs(r) > 1.0 + 1e-8:
        raise ValueError(f"|r| = {abs(r)} exceeds 1")
    a, b = state.amp0, state.amp1
    return np.array(
        [
            [abs(a) ** 2, a * np.conj(b) * r],
            [np.conj(a) * b * np.conj(r), abs(b) ** 2],
        ],
        dtype=complex,
    )


@dataclass(frozen=True)
class RmaxPoint:
    """Second maximum of |r(t)|: height, position, sample index."""

    value: float
    time: float
    index: int


def _run_values(series: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Collapse consecutive equal samples into runs (starts, values)."""
    if series.size == 0:
        return np.empty(0, dtype=int), series
    change = np.flatnonzero(np.diff(series) != 0.0) + 1
    starts = np.concatenate([[0], change])
    return starts, series[starts]


def _first_min_run(values: np.ndarray) -> Optional[int]:
    hits = np.flatnonzero((values[1:-1] < values[:-2]) & (values[1:-1] < values[2:]))
    return int(hits[0]) + 1 if hits.size else None


def _first_max_run(values: np.ndarray, start: int) -> Optional[int]:
    if start < 1:
        start = 1
    seg = values[start - 1 :]
    hits = np.flatnonzero((seg[1:-1] > seg[:-2]) & (seg[1:-1] > seg[2:]))
    return int(hits[0]) + start if hits.size else None


def _beat_envelope(mags: np.ndarray, window: int) -> np.ndarray:
    """Running maximum over +-window samples; identity for window < 1."""
    if window < 1:
        return mags
    from scipy.ndimage import maximum_filter1d

    return maximum_filter1d(mags, size=2 * window + 1, mode="nearest")


def _beat_window_from_signal(signal: DecoherenceSignal) -> int:
    """Beat window in samples, estimated from the signal itself.

    The fast beat of |r| has period 2 pi / sigma_E with sigma_E the energy
    spread of the spectral weights.  When the signal carries its weights
    the spread is exact; otherwise it is read off the early quadratic
    decay |r|^2 = 1 - sigma^2 t^2.  Falls back to the raw three-sample
    rule (window 0) when neither route applies.
    """
    if signal.weights is not None and signal.energies is not None:
        mean = float(signal.weights @ signal.energies)
        var = float(signal.weights @ (signal.energies - mean) ** 2)
        sigma = np.sqrt(max(var, 0.0))
    elif signal.times[0] == 0.0 and signal.times.size > 4:
        mags = signal.magnitudes()
        drop = 1.0 - mags
        usable = np.flatnonzero((drop > 1e-6) & (drop < 0.2) & (signal.times > 0.0))
        if usable.size == 0:
            return 0
        k = int(usable[0])
        sigma = np.sqrt(2.0 * drop[k]) / signal.times[k]
    else:
        return 0
    if sigma <= 0.0:
        return 0
    dt = float(np.median(np.diff(signal.times)))
    beat = 2.0 * np.pi / sigma
    return int(np.clip(round(beat / dt), 0, max(1, signal.times.size // 16)))


def _scan_second_maximum(
    mags: np.ndarray, window: int
) -> Optional[tuple[int, int]]:
    """(envelope run start, raw peak index) of the second maximum."""
    env = _beat_envelope(mags, window)
    starts, values = _run_values(env)
    k_min = _first_min_run(values)
    if k_min is None:
        return None
    k_max = _first_max_run(values, start=k_min + 1)
    if k_max is None:
        return None
    j = int(starts[k_max])
    lo = max(0, j - window)
    hi = min(mags.size, j + window + 1)
    return j, lo + int(np.argmax(mags[lo:hi]))


def r_max(signal: DecoherenceSignal, beat_window: Optional[int] = None) -> RmaxPoint:
    """Second maximum of a sampled signal.

    The first trivial maximum is |r(0)| = 1.  The scan runs on the
    fast-beat envelope of |r| (running maximum over one beat period
    2 pi / sigma_E): near a critical coupling the raw trace rings through
    near-zeros on a sub-beat scale on its way down, and the raw
    three-sample rule would latch onto those micro-crests instead of the
    revival structure.  On the envelope, the first strict interior
    minimum followed by the first strict maximum (plateau runs compared
    as units, ties resolved toward earlier times) marks the second
    maximum; the returned value and time are those of the underlying raw
    peak.  Raises HorizonError when the structure is not inside the
    horizon.
    """
    mags = signal.magnitudes()
    if mags.size < 3:
        raise HorizonError("signal too short to contain a second maximum")
    window = _beat_window_from_signal(signal) if beat_window is None else beat_window
    found = _scan_second_maximum(mags, window)
    if found is None:
        raise HorizonError("horizon too short: no second maximum of |r|")
    _, idx = found
    return RmaxPoint(value=float(mags[idx]), time=float(signal.times[idx]), index=idx)


@dataclass(frozen=True)
class HorizonPolicy:
    """Sampling policy for revival extraction.

    The initial grid spans span_periods revival periods 2 pi / Delta1,
    where Delta1 is the mean spacing of the lowest ten H1 levels; when no
    second maximum is found the horizon is extended at constant spacing up
    to max_extensions times before giving up.  The detected peak is
    re-sampled refine_rounds times with refine_points intervals.
    """

    points: int = 2048
    span_periods: float = 2.0
    max_extensions: int = 6
    refine_rounds: int = 3
    refine_points: int = 64

    def __post_init__(self) -> None:
        if self.points < 16:
            raise ValueError("need at least 16 grid points")
        if self.span_periods <= 0.0:
            raise ValueError("span_periods must be positive")
        if self.max_extensions < 0 or self.refine_rounds < 0:
            raise ValueError("extension and refinement counts must be >= 0")
        if self.refine_points < 4:
            raise ValueError("need at least 4 refinement intervals")


@dataclass(frozen=True)
class RmaxResult:
    """Adaptive revival extraction outcome."""

    value: float
    time: float
    coupling: float
    params: ModelParams
    method: str
    extensions: int
    horizon: float


def spacing_scale(params: ModelParams, lam: float) -> float:
    """Mean spacing of the lowest ten H1 levels; sets the revival period."""
    h1 = build_matrix(params.with_coupling(lam))
    k = min(10, h1.dim)
    levels = lowest_levels(h1, k)
    spread = float(levels[-1] - levels[0])
    if spread <= 0.0 or k < 2:
        raise HorizonError("degenerate low spectrum; no revival scale")
    return spread / (k - 1)


def _energy_spread(params: ModelParams, lam: float) -> float:
    """Exact spread sqrt(<H1^2> - <H1>^2) of |g0| over the H1 spectrum."""
    _, psi0 = ground_state(build_matrix(params))
    h1 = build_matrix(params.with_coupling(lam))
    v = h1.matvec(psi0)
    mean = float(psi0 @ v)
    var = float(v @ v) - mean * mean
    return np.sqrt(max(var, 0.0))


def r_max_adaptive(
    params: ModelParams,
    lam: float,
    policy: HorizonPolicy | None = None,
    method: str = "auto",
) -> RmaxResult:
    """Locate and refine the second maximum of |r(t)|.

    Samples t in [0, span_periods * 2 pi / Delta1] on a uniform grid,
    extends the horizon at the same spacing while the second maximum has
    not appeared, then sharpens the peak on shrinking local grids.  The
    whole procedure is deterministic.
    """
    pol = policy or HorizonPolicy()
    delta1 = spacing_scale(params, lam)
    dt = pol.span_periods * 2.0 * np.pi / delta1 / pol.points
    sigma = _energy_spread(params, lam)
    window = 0
    if sigma > 0.0:
        window = int(np.clip(round(2.0 * np.pi / sigma / dt), 0, pol.points // 16))
    evaluator, used, _ = _make_evaluator(params, lam, method)

    times = dt * np.arange(pol.points + 1)
    mags = np.abs(evaluator.values(times))
    extensions = 0
    while True:
        found = _scan_second_maximum(mags, window)
        if found is not None:
            _, j = found
            break
        if extensions >= pol.max_extensions:
            raise HorizonError(
                f"no second maximum of |r| within {times[-1]:.6g} "
                f"({extensions} extensions used)"
            )
        extra = times[-1] + dt * np.arange(1, pol.points + 1)
        mags = np.concatenate([mags, np.abs(evaluator.values(extra))])
        times = np.concatenate([times, extra])
        extensions += 1

    lo = times[max(j - 1, 0)]
    hi = times[min(j + 1, times.size - 1)]
    best_value, best_time = float(mags[j]), float(times[j])
    for _ in range(pol.refine_rounds):
        local = np.linspace(lo, hi, pol.refine_points + 1)
        local_mags = np.abs(evaluator.values(local))
        jj = int(np.argmax(local_mags))
        best_value, best_time = float(local_mags[jj]), float(local[jj])
        if jj == 0 or jj == local_mags.size - 1:
            break
        lo, hi = local[jj - 1], local[jj + 1]
    return RmaxResult(
        value=best_value,
        time=best_time,
        coupling=lam,
        params=params,
        method=used,
        extensions=extensions,
        horizon=float(times[-1]),
    )
