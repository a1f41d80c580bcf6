"""Closed-form spectrum of the two-copy output on Schmidt-diagonal inputs.

For an input pure state with Schmidt coefficients lam on the doubled
system, the output of Phi (x) Phi splits into two eigenvalue families:

* d(d-1) "off-diagonal" eigenvalues, one per ordered pair (a, b) with
  a != b:

      gamma_ab = c1 + (c2 / 2) (lam_a + lam_b),

* d "secular" eigenvalues from the block on span{|aa>}: that block is
  diag(c1 + c2 lam) + t^2 sqrt(lam) sqrt(lam)^T, a diagonal plus
  rank-one matrix, so its eigenvalues are the roots g of

      1 + sum_a t^2 lam_a / (c1 + c2 lam_a - g) = 0

  together with the deflated values for zero-weight coordinates.

The off-diagonal family always carries total mass
(d-1)(1-t^2)/d regardless of lam; the secular family carries the rest.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import Channel, DensityMatrix
from .errors import ConvergenceFailure, OutOfRange, SumMismatch

SCHMIDT_SUM_TOL = 1e-12
ZERO_WEIGHT_TOL = 1e-14  # lam at or below this contributes a deflated root
POLE_MERGE_TOL = 1e-12  # poles closer than this are treated as one
BISECT_REL_TOL = 1e-14
BISECT_MAX_ITER = 200


@dataclass(frozen=True)
class SchmidtVector:
    """Schmidt coefficients: nonnegative, summing to one."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float).reshape(-1)
        object.__setattr__(self, "values", v)
        if v.size < 2:
            raise OutOfRange("need at least two Schmidt coefficients")
        if np.min(v) < 0.0:
            raise OutOfRange(f"negative Schmidt coefficient {np.min(v)}")
        if abs(float(np.sum(v)) - 1.0) > SCHMIDT_SUM_TOL:
            raise SumMismatch(f"coefficients sum to {np.sum(v)}, expected 1")

    @property
    def d(self) -> int:
        return self.values.size

    @staticmethod
    def uniform(d: int) -> "SchmidtVector":
        return SchmidtVector(np.full(d, 1.0 / d))

    @staticmethod
    def vertex(d: int, alpha: int = 0) -> "SchmidtVector":
        v = np.zeros(d)
        v[alpha] = 1.0
        return SchmidtVector(v)


@dataclass(frozen=True)
class Spectrum:
    """Both eigenvalue families plus the constants they were built from."""

    d: int
    t: float
    c1: float
    c2: float
    offdiag_pairs: list[tuple[int, int]]
    offdiag: np.ndarray
    secular: np.ndarray
    offdiag_sum: float = field(init=False)

    def __post_init__(self) -> None:
        # Analytic off-diagonal mass; lam-independent.
        object.__setattr__(
            self, "offdiag_sum", (self.d - 1) * (1.0 - self.t**2) / self.d
        )

    def all_eigenvalues(self) -> np.ndarray:
        """Concatenated families, sorted descending."""
        return np.sort(np.concatenate([self.offdiag, self.secular]))[::-1]


def _as_schmidt(ch: Channel, lam) -> SchmidtVector:
    """Coerce array-likes through the validated wrapper, then check length."""
    if not isinstance(lam, SchmidtVector):
        lam = SchmidtVector(np.asarray(lam, dtype=float))
    if lam.d != ch.d:
        raise OutOfRange(f"Schmidt vector has length {lam.d}, channel has d={ch.d}")
    return lam


def sigma12(ch: Channel, lam: "SchmidtVector | np.ndarray") -> DensityMatrix:
    """Materialize the two-copy output as a dense d^2 x d^2 density matrix.

    Diagonal entries c1 + (c2/2)(lam_a + lam_b) on |ab>, plus the
    t^2 sqrt(lam_a lam_b) coherences between |aa> and |bb>.
    """
    lam = _as_schmidt(ch, lam)
    d = ch.d
    v = lam.values
    m = np.zeros((d * d, d * d))
    for a in range(d):
        for b in range(d):
            m[a * d + b, a * d + b] = ch.c1 + 0.5 * ch.c2 * (v[a] + v[b])
    root = np.sqrt(v)
    for a in range(d):
        for b in range(d):
            m[a * d + a, b * d + b] += ch.t**2 * root[a] * root[b]
    return DensityMatrix(m)


def offdiag_eigenvalues(ch: Channel, lam: "SchmidtVector | np.ndarray") -> list[tuple[int, int, float]]:
    """The (a, b, gamma_ab) family over ordered pairs a != b, lexicographic."""
    lam = _as_schmidt(ch, lam)
    v = lam.values
    out = []
    for a in range(ch.d):
        for b in range(ch.d):
            if a == b:
                continue
            out.append((a, b, ch.c1 + 0.5 * ch.c2 * (v[a] + v[b])))
    return out


def _secular_value(g: float, poles: list[float], weights: list[float]) -> float:
    """f(g) = 1 + sum w / (p - g); strictly increasing between poles."""
    acc = 1.0
    for p, w in zip(poles, weights):
        acc += w / (p - g)
    return acc


def _bisect_root(a: float, b: float, poles: list[float], weights: list[float]) -> float:
    """Root of the secular function in (a, b), where f(a+) < 0 < f(b-).

    Plain bisection; the interval endpoints themselves are never
    evaluated (they may be poles).
    """
    lo, hi = a, b
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid  # interval exhausted at float resolution
        if hi - lo <= BISECT_REL_TOL * max(abs(lo), abs(hi)) + 1e-30:
            return mid
        if _secular_value(mid, poles, weights) < 0.0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceFailure(
        f"secular bisection did not converge in {BISECT_MAX_ITER} iterations"
    )


def secular_roots(ch: Channel, lam: "SchmidtVector | np.ndarray") -> np.ndarray:
    """All d eigenvalues of the diagonal-plus-rank-one block, descending.

    Strategy: coordinates with negligible weight deflate to exact roots at
    c1; remaining poles c1 + c2 lam_a are sorted and merged when closer
    than 1e-12 (a merged pole of multiplicity m keeps m-1 exact roots);
    one root is bracketed between consecutive distinct poles and one above
    the largest pole, each found by bisection.
    """
    lam = _as_schmidt(ch, lam)
    d, t = ch.d, ch.t
    if t == 0.0:
        # Constant output: every eigenvalue is 1/d^2.
        return np.full(d, 1.0 / d**2)
    v = lam.values
    roots: list[float] = []
    active = v[v > ZERO_WEIGHT_TOL]
    roots.extend([ch.c1] * (d - active.size))
    order = np.argsort(ch.c1 + ch.c2 * active, kind="stable")
    sorted_poles = (ch.c1 + ch.c2 * active)[order]
    sorted_lam = active[order]

    # Merge near-coincident poles, accumulating their weight t^2 sum(lam).
    poles: list[float] = []
    weights: list[float] = []
    i = 0
    while i < sorted_poles.size:
        j = i
        while j + 1 < sorted_poles.size and sorted_poles[j + 1] - sorted_poles[j] <= POLE_MERGE_TOL:
            j += 1
        group = sorted_poles[i : j + 1]
        pole = float(np.mean(group))
        weights.append(float(t * t * np.sum(sorted_lam[i : j + 1])))
        poles.append(pole)
        roots.extend([pole] * (j - i))  # multiplicity m leaves m-1 roots here
        i = j + 1

    if poles:
        for i in range(len(poles) - 1):
            roots.append(_bisect_root(poles[i], poles[i + 1], poles, weights))
        # Extreme root above the top pole, within total weight of it.
        top = poles[-1]
        width = max(sum(weights), 1e-300)
        hi = top + width * (1.0 + 1e-9)
        for _ in range(BISECT_MAX_ITER):
            if _secular_value(hi, poles, weights) >= 0.0:
                break
            width *= 2.0
            hi = top + width
        else:
            raise ConvergenceFailure("no sign change found above the top pole")
        roots.append(_bisect_root(top, hi, poles, weights))

    out = np.array(sorted(roots, reverse=True), dtype=float)
    return out


def full_spectrum(ch: Channel, lam: "SchmidtVector | np.ndarray") -> Spectrum:
    """Both families as a Spectrum record."""
    triples = offdiag_eigenvalues(ch, lam)
    return Spectrum(
        d=ch.d,
        t=ch.t,
        c1=ch.c1,
        c2=ch.c2,
        offdiag_pairs=[(a, b) for a, b, _ in triples],
        offdiag=np.array([g for _, _, g in triples]),
        secular=secular_roots(ch, lam),
    )
