"""Majorization order and the symmetric-polynomial route to it.

The secular eigenvalues scale to gamma_i = g_i / c1, and the Schmidt
coefficients transform to nu_a = 1 + (c2/c1) lam_a, which for t <= 0 live
in the box [1 + 2td/(1-t), 1].  The elementary symmetric polynomials of
the scaled roots are polynomials in nu:

    s_{d-k}(gamma) = phi_k(nu)
                   = s_{d-k}(nu) + (t^2/c2) sum_l s_{d-1-k}(nu \\ l)(nu_l - 1),

and Schur-concavity of every phi_k is what drives the entropy comparison
between Schmidt vectors: if lam majorizes lam', the secular part of the
output entropy can only grow.  The Schur criterion uses the exact partial
derivatives

    d phi_k / d nu_i = (1 + t^2/c2) s_{d-1-k}(nu \\ i)
                       + (t^2/c2) sum_{l != i} (nu_l - 1) s_{d-2-k}(nu \\ {i, l}).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import Channel
from .errors import BadK, BadLength, LengthMismatch, OutOfRange, SumMismatch, ZeroT
from .spectrum import SchmidtVector, secular_roots

MAJORIZE_SUM_TOL = 1e-10
DOMINANCE_SLACK = 1e-12


def _schmidt(lam) -> SchmidtVector:
    if isinstance(lam, SchmidtVector):
        return lam
    return SchmidtVector(np.asarray(lam, dtype=float))


@dataclass(frozen=True)
class NuVector:
    """Transformed coordinates nu with their box ratio c2/c1."""

    nu: np.ndarray
    ratio: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "nu", np.asarray(self.nu, dtype=float).reshape(-1))

    @property
    def n(self) -> int:
        return self.nu.size


@dataclass(frozen=True)
class GammaRoots:
    """Secular eigenvalues scaled by 1/c1."""

    d: int
    gamma: np.ndarray


def lambda_to_nu(ch: Channel, lam: "SchmidtVector | np.ndarray") -> NuVector:
    """nu_a = 1 + (c2/c1) lam_a; requires t <= 0 so the box is [1+c2/c1, 1]."""
    if ch.t > 0.0:
        raise OutOfRange(f"nu coordinates are defined for t <= 0, got t={ch.t}")
    lam = _schmidt(lam)
    if lam.d != ch.d:
        raise BadLength(f"Schmidt vector length {lam.d} != d={ch.d}")
    ratio = ch.ratio
    return NuVector(1.0 + ratio * lam.values, ratio)


def scaled_secular_roots(ch: Channel, lam: "SchmidtVector | np.ndarray") -> GammaRoots:
    """Secular roots divided by c1."""
    return GammaRoots(ch.d, secular_roots(ch, lam) / ch.c1)


def majorizes(x, y, slack: float = DOMINANCE_SLACK) -> bool:
    """True iff x majorizes y: sorted-descending prefix sums dominate.

    Requires equal lengths and equal totals (within 1e-10); the prefix
    comparison allows a 1e-12 slack for floating point noise.
    """
    xv = np.asarray(x, dtype=float).reshape(-1)
    yv = np.asarray(y, dtype=float).reshape(-1)
    if xv.size != yv.size:
        raise LengthMismatch(f"lengths {xv.size} and {yv.size} differ")
    if abs(float(np.sum(xv) - np.sum(yv))) > MAJORIZE_SUM_TOL:
        raise SumMismatch(f"totals {np.sum(xv)} and {np.sum(yv)} differ")
    cx = np.cumsum(np.sort(xv)[::-1])
    cy = np.cumsum(np.sort(yv)[::-1])
    return bool(np.all(cx >= cy - slack))


def t_transform(lam: "SchmidtVector | np.ndarray", i: int, j: int, eps: float) -> SchmidtVector:
    """Pinch mass from coordinate i toward j: the classic T-transform.

    lam_i' = lam_i - eps (lam_i - lam_j), lam_j' = lam_j + eps (lam_i - lam_j)
    with 0 <= eps <= 1/2 and lam_i >= lam_j.  The input majorizes the output.
    """
    v = _schmidt(lam).values.copy()
    if not (0 <= i < v.size and 0 <= j < v.size) or i == j:
        raise IndexError(f"bad index pair ({i}, {j}) for length {v.size}")
    if not (0.0 <= eps <= 0.5):
        raise OutOfRange(f"eps={eps} outside [0, 1/2]")
    if v[i] < v[j]:
        raise OutOfRange("requires lam_i >= lam_j")
    delta = eps * (v[i] - v[j])
    v[i] -= delta
    v[j] += delta
    return SchmidtVector(v)


def elem_sym(values, q: int) -> float:
    """Elementary symmetric polynomial s_q via the incremental product recurrence.

    s_0 = 1; q outside [0, len(values)] gives 0.  O(n q) time.
    """
    vals = np.asarray(values, dtype=float).reshape(-1)
    n = vals.size
    if q < 0 or q > n:
        return 0.0
    e = np.zeros(q + 1)
    e[0] = 1.0
    for m, x in enumerate(vals, start=1):
        top = min(m, q)
        for r in range(top, 0, -1):
            e[r] += x * e[r - 1]
    return float(e[q])


def _elem_sym_without(values: np.ndarray, skip: tuple[int, ...], q: int) -> float:
    keep = [values[m] for m in range(values.size) if m not in skip]
    return elem_sym(keep, q)


def _check_phi_args(nu: NuVector, k: int, ch: Channel) -> None:
    if ch.t == 0.0:
        raise ZeroT("phi_k needs t != 0 (c2 appears in a denominator)")
    if nu.n != ch.d:
        raise BadLength(f"nu has length {nu.n}, expected d={ch.d}")
    if not (0 <= k <= ch.d - 1):
        raise BadK(f"k={k} outside [0, {ch.d - 1}]")


def phi_k(nu: NuVector, k: int, ch: Channel) -> float:
    """s_{d-k}(nu) + (t^2/c2) sum_l s_{d-1-k}(nu \\ l)(nu_l - 1)."""
    _check_phi_args(nu, k, ch)
    d = ch.d
    coef = ch.t**2 / ch.c2
    v = nu.nu
    total = elem_sym(v, d - k)
    for l in range(d):
        total += coef * _elem_sym_without(v, (l,), d - 1 - k) * (v[l] - 1.0)
    return total


def sympol_defect(ch: Channel, lam: "SchmidtVector | np.ndarray", k: int) -> float:
    """|s_{d-k}(secular roots / c1) - phi_k(nu)|, absolute."""
    gamma = scaled_secular_roots(ch, lam).gamma
    lhs = elem_sym(gamma, ch.d - k)
    rhs = phi_k(lambda_to_nu(ch, lam), k, ch)
    return abs(lhs - rhs)


def partial_phi_k(nu: NuVector, k: int, i: int, ch: Channel) -> float:
    """Exact partial derivative of phi_k with respect to nu_i."""
    _check_phi_args(nu, k, ch)
    d = ch.d
    if not (0 <= i < d):
        raise IndexError(f"index i={i} outside [0, {d})")
    coef = ch.t**2 / ch.c2
    v = nu.nu
    total = (1.0 + coef) * _elem_sym_without(v, (i,), d - 1 - k)
    for l in range(d):
        if l == i:
            continue
        total += coef * (v[l] - 1.0) * _elem_sym_without(v, (i, l), d - 2 - k)
    return total


def schur_defect(nu: NuVector, k: int, i: int, j: int, ch: Channel) -> float:
    """(nu_i - nu_j)(d phi_k/d nu_i - d phi_k/d nu_j); <= 0 when Schur-concave."""
    if i == j:
        raise IndexError("need distinct indices")
    di = partial_phi_k(nu, k, i, ch)
    dj = partial_phi_k(nu, k, j, ch)
    return float((nu.nu[i] - nu.nu[j]) * (di - dj))
