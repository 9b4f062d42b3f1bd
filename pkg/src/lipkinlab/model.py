"""Model definition for the two-level boson environment coupled to a qubit.

The environment is a scalar two-level boson system: N bosons shared between
a lower level (annihilation operator s) and an upper level (t).  Its
Hamiltonian balances a one-body excitation term against a schematic
two-body interaction,

    H_env = alpha * n_t - (1 - alpha)/N * Q_w * Q_w,
    Q_w   = s' t + t' s + w * t' t,

with alpha in [0, 1] and a shape parameter w >= 0 that breaks the beta ->
-beta symmetry of the energy landscape.  A probe qubit couples through its
population: the branch of the wavefunction with the qubit excited evolves
under H1 = H_env + lam * n_t, the other branch under H0 = H_env.

Both H0 and H1 are instances of one generic one- plus two-body s-t
Hamiltonian,

    H = a n_t + b (t's + s't) + c t's s't + d (t's t's + s't s't)
      + e (t's n_t + n_t s't) + f n_t^2 + delta,

whose coefficients a..f, delta are produced by :func:`coefficients`.  The
uniform shift delta is dropped from the matrices built here; every
eigenvalue reported downstream therefore refers to that convention, and
callers needing the raw operator must add delta back themselves.

Basis convention: the fixed-N subspace is spanned by |N l>, l = 0..N, where
l counts upper-level (t) bosons.  In this basis the matrix is symmetric
pentadiagonal: the d-coupling moves two quanta at once, so storage is three
bands (diagonal, first and second superdiagonal).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "ModelParams",
    "STCoefficients",
    "BandedHamiltonian",
    "coefficients",
    "build_matrix",
]


@dataclass(frozen=True)
class ModelParams:
    """Parameter point of the model.

    Parameters
    ----------
    alpha : float
        Control parameter of the environment Hamiltonian, in [0, 1].
    omega : float
        Shape parameter w of the interaction operator, >= 0.  The
        mean-field guarantees used elsewhere assume w <= 2.
    lam : float
        Qubit-environment coupling.  lam = 0 describes the unperturbed
        environment H0; the excited qubit branch uses lam > 0.
    n_bosons : int
        Total boson number N >= 1.  The Hilbert-space dimension is N + 1.
    """

    alpha: float
    omega: float
    lam: float
    n_bosons: int

    def __post_init__(self) -> None:
        if not np.isfinite(self.alpha) or not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not np.isfinite(self.omega) or self.omega < 0.0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")
        if not np.isfinite(self.lam):
            raise ValueError(f"lam must be finite, got {self.lam}")
        if not isinstance(self.n_bosons, (int, np.integer)) or self.n_bosons < 1:
            raise ValueError(f"n_bosons must be a positive integer, got {self.n_bosons}")

    @property
    def dim(self) -> int:
        """Dimension of the fixed-N subspace."""
        return self.n_bosons + 1

    def with_coupling(self, lam: float) -> "ModelParams":
        """Same parameter point with the coupling replaced."""
        return replace(self, lam=lam)

    def to_record(self) -> dict:
        """Flat key-value record; keys are the conventional symbol names."""
        return {
            "alpha": float(self.alpha),
            "omega": float(self.omega),
            "lambda": float(self.lam),
            "N": int(self.n_bosons),
        }

    @classmethod
    def from_record(cls, record: dict) -> "ModelParams":
        """Inverse of :meth:`to_record`.  Unknown keys are rejected."""
        known = {"alpha", "omega", "lambda", "N"}
        unknown = set(record) - known
        if unknown:
            raise ValueError(f"unknown parameter keys: {sorted(unknown)}")
        missing = known - set(record)
        if missing:
            raise ValueError(f"missing parameter keys: {sorted(missing)}")
        return cls(
            alpha=float(record["alpha"]),
            omega=float(record["omega"]),
            lam=float(record["lambda"]),
            n_bosons=int(record["N"]),
        )


@dataclass(frozen=True)
class STCoefficients:
    """Coefficients of the generic s-t Hamiltonian.

    a multiplies n_t, b the one-body transfer t's + s't, c the
    number-conserving exchange t's s't, d the double transfer, e the
    transfer-times-occupation term, f the n_t^2 term.  delta is the uniform
    energy shift that the matrix builder omits.
    """

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float
    delta: float


def coefficients(params: ModelParams) -> STCoefficients:
    """Map a parameter point onto the generic s-t coefficient set.

    The coupling lam enters only the one-body coefficient a, because
    lam * n_t simply augments the excitation term of the environment.
    """
    alpha, omega, lam = params.alpha, params.omega, params.lam
    n = params.n_bosons
    shifted = (alpha - 1.0) / n
    return STCoefficients(
        a=alpha + lam - 2.0 * shifted,
        b=omega * shifted,
        c=2.0 * shifted,
        d=shifted,
        e=2.0 * omega * shifted,
        f=omega * omega * shifted,
        delta=alpha - 1.0,
    )


@dataclass(frozen=True)
class BandedHamiltonian:
    """Symmetric pentadiagonal matrix in the |N l> basis, shift omitted.

    diag has length N+1, off1 length N (first superdiagonal), off2 length
    N-1 (second superdiagonal).  For N = 1 off2 is empty.
    """

    params: ModelParams
    diag: np.ndarray
    off1: np.ndarray
    off2: np.ndarray
    coeffs: STCoefficients = field(repr=False)

    @property
    def dim(self) -> int:
        return self.diag.shape[0]

    def lower_bands(self) -> np.ndarray:
        """(3, N+1) band storage, lower form, for scipy.linalg.eig_banded."""
        d = self.dim
        bands = np.zeros((3, d))
        bands[0] = self.diag
        bands[1, : d - 1] = self.off1
        bands[2, : d - 2] = self.off2
        return bands

    def to_dense(self) -> np.ndarray:
        """Full symmetric matrix; for oracles and small N only."""
        d = self.dim
        m = np.diag(self.diag)
        idx = np.arange(d - 1)
        m[idx, idx + 1] = self.off1
        m[idx + 1, idx] = self.off1
        idx2 = np.arange(d - 2)
        m[idx2, idx2 + 2] = self.off2
        m[idx2 + 2, idx2] = self.off2
        return m

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """Pentadiagonal matrix-vector product, O(N) time and memory."""
        out = self.diag * v
        out[:-1] += self.off1 * v[1:]
        out[1:] += self.off1 * v[:-1]
        if self.off2.size:
            out[:-2] += self.off2 * v[2:]
            out[2:] += self.off2 * v[:-2]
        return out

    def gershgorin(self) -> tuple[float, float]:
        """Rigorous (lo, hi) enclosure of the spectrum from row sums."""
        d = self.dim
        radius = np.zeros(d)
        radius[: d - 1] += np.abs(self.off1)
        radius[1:] += np.abs(self.off1)
        if self.off2.size:
            radius[: d - 2] += np.abs(self.off2)
            radius[2:] += np.abs(self.off2)
        return float(np.min(self.diag - radius)), float(np.max(self.diag + radius))


def build_matrix(params: ModelParams) -> BandedHamiltonian:
    """Assemble the banded matrix of the s-t Hamiltonian at ``params``.

    Matrix elements in the |N l> basis (l = t-boson count):

        <l|H|l>   = a l + f l^2 + c l (1 + N - l)
        <l|H|l+1> = b sqrt((N-l)(l+1)) + e sqrt((l+1)(N-l)) l
        <l|H|l+2> = d sqrt((l+2)(l+1)) sqrt((N-l)(N-l-1))

    The uniform shift delta = alpha - 1 is not added; see the module
    docstring for the convention.
    """
    n = params.n_bosons
    cf = coefficients(params)
    l = np.arange(n + 1, dtype=float)
    diag = cf.a * l + cf.f * l * l + cf.c * l * (1.0 + n - l)
    l1 = l[:-1]
    off1 = np.sqrt((n - l1) * (l1 + 1.0)) * (cf.b + cf.e * l1)
    l2 = l[:-2]
    off2 = cf.d * np.sqrt((l2 + 2.0) * (l2 + 1.0) * (n - l2) * (n - l2 - 1.0))
    return BandedHamiltonian(params=params, diag=diag, off1=off1, off2=off2, coeffs=cf)
