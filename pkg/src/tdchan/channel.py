"""Transpose depolarizing channels on a d-dimensional system.

The family acts on a density matrix mu as

    Phi(mu) = t * mu^T + (1 - t) * tr(mu) * I / d,

with the real parameter t confined to -1/(d-1) <= t <= 1/(d+1); outside
that interval the map is no longer completely positive.  Every member is
a convex mixture of two extreme channels built from the transpose,

    Phi_plus(mu)  = (I tr(mu) + mu^T) / (d + 1),
    Phi_minus(mu) = (I tr(mu) - mu^T) / (d - 1),

whose Kraus operators are the symmetric and antisymmetric combinations
|i><j| +/- |j><i| with appropriate normalization.

The module also provides the two-copy application Phi (x) Phi, needed by
the entropy additivity checks, in a closed form that avoids building the
d^4 x d^4 superoperator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadDimension, DimensionMismatch, NotPSD, OutOfRange

# Validation tolerances for density matrices.  Module-level so callers
# (notably the CLI --tol flag) can tighten or relax them in one place.
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10


def t_range(d: int) -> tuple[float, float]:
    """Admissible parameter interval [-1/(d-1), 1/(d+1)] for dimension d."""
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise BadDimension(f"dimension must be an integer >= 2, got {d!r}")
    return (-1.0 / (d - 1), 1.0 / (d + 1))


@dataclass(frozen=True)
class Channel:
    """A transpose depolarizing channel with its derived constants.

    c1 = (1-t)^2 / d^2 and c2 = 2 t (1-t) / d show up throughout the
    two-copy output spectrum, so they are computed once at construction.
    """

    d: int
    t: float
    c1: float = field(init=False)
    c2: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "c1", (1.0 - self.t) ** 2 / self.d**2)
        object.__setattr__(self, "c2", 2.0 * self.t * (1.0 - self.t) / self.d)

    @property
    def ratio(self) -> float:
        """c2 / c1 = 2 t d / (1 - t); in [-2, 0] for t <= 0."""
        return 2.0 * self.t * self.d / (1.0 - self.t)


def new_channel(d: int, t: float) -> Channel:
    """Validated constructor.

    Raises
    ------
    BadDimension
        If d is not an integer >= 2.
    OutOfRange
        If t lies outside [-1/(d-1), 1/(d+1)].
    """
    lo, hi = t_range(d)
    t = float(t)
    if not (lo <= t <= hi):
        raise OutOfRange(f"t={t} outside [{lo}, {hi}] for d={d}")
    return Channel(int(d), t)


@dataclass(frozen=True)
class DensityMatrix:
    """State validated at construction: Hermitian, unit trace, PSD.

    Eigenvalues may dip to -1e-10 to tolerate floating point noise from
    upstream arithmetic.
    """

    mat: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.mat, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise BadDimension(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] < 2:
            raise BadDimension("dimension must be >= 2")
        object.__setattr__(self, "mat", m)
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise NotPSD("matrix is not Hermitian within 1e-12")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
            raise NotPSD("trace differs from 1 by more than 1e-12")
        if np.min(np.linalg.eigvalsh(m)) < PSD_TOL:
            raise NotPSD("matrix has an eigenvalue below -1e-10")

    @property
    def dim(self) -> int:
        return self.mat.shape[0]


def pure_state(vec: np.ndarray) -> DensityMatrix:
    """Projector |v><v| onto a (normalized) state vector."""
    v = np.asarray(vec, dtype=complex)
    nrm = np.linalg.norm(v)
    if not np.isfinite(nrm) or nrm == 0.0:
        raise OutOfRange("state vector must have a finite nonzero norm")
    v = v / nrm
    return DensityMatrix(np.outer(v, v.conj()))


def apply(ch: Channel, rho: DensityMatrix) -> DensityMatrix:
    """Apply the channel: t * rho^T + (1-t) * tr(rho) * I / d."""
    if rho.dim != ch.d:
        raise DimensionMismatch(f"state dimension {rho.dim} != channel dimension {ch.d}")
    out = ch.t * rho.mat.T + (1.0 - ch.t) * np.trace(rho.mat) * np.eye(ch.d) / ch.d
    return DensityMatrix(out)


def apply_raw(ch: Channel, mat: np.ndarray) -> np.ndarray:
    """Channel action on an arbitrary matrix, no validation (linear map)."""
    return ch.t * mat.T + (1.0 - ch.t) * np.trace(mat) * np.eye(ch.d) / ch.d


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators of one of the two extreme channels."""

    d: int
    sign: int
    operators: list[np.ndarray]

    def apply(self, mat: np.ndarray) -> np.ndarray:
        out = np.zeros_like(np.asarray(mat, dtype=complex))
        for k in self.operators:
            out += k @ mat @ k.conj().T
        return out


def kraus_set(d: int, sign: int) -> KrausSet:
    """Kraus operators of Phi_plus (sign=+1) or Phi_minus (sign=-1).

    The raw families |i><j| +/- |j><i| over all ordered pairs contain each
    operator twice (and zeros on the diagonal for the minus sign), so the
    returned set is deduplicated: d(d+1)/2 operators for plus, d(d-1)/2
    for minus.  Completeness sum_k K_k* K_k = I holds exactly.
    """
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise BadDimension(f"dimension must be an integer >= 2, got {d!r}")
    if sign not in (+1, -1):
        raise OutOfRange(f"sign must be +1 or -1, got {sign!r}")
    ops: list[np.ndarray] = []
    if sign == +1:
        diag_norm = np.sqrt(2.0 / (d + 1))
        pair_norm = 1.0 / np.sqrt(d + 1)
        for i in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, i] = diag_norm
            ops.append(e)
            for j in range(i + 1, d):
                e = np.zeros((d, d), dtype=complex)
                e[i, j] = pair_norm
                e[j, i] = pair_norm
                ops.append(e)
    else:
        pair_norm = 1.0 / np.sqrt(d - 1)
        for i in range(d):
            for j in range(i + 1, d):
                e = np.zeros((d, d), dtype=complex)
                e[i, j] = pair_norm
                e[j, i] = -pair_norm
                ops.append(e)
    return KrausSet(int(d), int(sign), ops)


def decompose(ch: Channel) -> tuple[float, float]:
    """Convex weights (w_plus, w_minus) of the extreme-channel mixture.

    With c = (d^2 - 1) / (2d):

        w_plus  =  c * (t + 1/(d-1)),
        w_minus = -c * (t - 1/(d+1)),

    both nonnegative on the admissible t interval and summing to one.
    """
    d, t = ch.d, ch.t
    c = (d * d - 1.0) / (2.0 * d)
    w_plus = c * (t + 1.0 / (d - 1))
    w_minus = -c * (t - 1.0 / (d + 1))
    return (w_plus, w_minus)


def channel_kraus(ch: Channel) -> list[np.ndarray]:
    """Kraus operators of the channel itself, via the convex decomposition."""
    w_plus, w_minus = decompose(ch)
    ops: list[np.ndarray] = []
    for w, sign in ((w_plus, +1), (w_minus, -1)):
        if w <= 0.0:
            continue
        ops.extend(np.sqrt(w) * k for k in kraus_set(ch.d, sign).operators)
    return ops


def apply_two_copies(ch: Channel, mat: np.ndarray) -> np.ndarray:
    """Action of Phi (x) Phi on a d^2 x d^2 matrix.

    Expanding both tensor factors of the channel gives, for X on the
    doubled system,

        t^2 X^T
        + t(1-t) [ (tr_2 X)^T (x) I/d  +  I/d (x) (tr_1 X)^T ]
        + (1-t)^2 tr(X) I/d^2,

    which only needs partial traces and transposes.
    """
    d = ch.d
    x = np.asarray(mat, dtype=complex)
    if x.shape != (d * d, d * d):
        raise DimensionMismatch(f"expected shape {(d * d, d * d)}, got {x.shape}")
    t = ch.t
    x4 = x.reshape(d, d, d, d)
    tr1 = np.einsum("ijik->jk", x4)
    tr2 = np.einsum("ijkj->ik", x4)
    eye = np.eye(d)
    out = t * t * x.T
    out += t * (1.0 - t) * (np.kron(tr2.T, eye) / d + np.kron(eye, tr1.T) / d)
    out += (1.0 - t) ** 2 * np.trace(x) * np.eye(d * d) / (d * d)
    return out
