"""Uniform order statistics under linear barriers.

Q_k(u, v) = P(xi_i >= (i - u)/v for all i) over the order statistics of k
uniforms.  Exact values come from the Daniels product formula at u = 1 and
from Steck's determinant for u < 1; constrained simplex volumes come from a
recursive polynomial integration.  Monte Carlo estimators cover the barrier
events, the Y_k region, and the exponential-sum integrals U_k and T(k, v, gamma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .rng import run_blocks

YK_MU = 1.0 / 7.0  # exponent in the strong-barrier term min(i, k-i)^mu
MAX_EXACT_K = 10  # recursive volume integration cap


@dataclass
class McEstimate:
    estimate: float
    std_error: float
    n_samples: int
    seed: int
    hits: int


@dataclass
class BarrierSpec:
    k: int
    v: float
    c_shift: float
    m_offset: int
    mu_exponent: float

    def __post_init__(self):
        if not 1 <= self.k <= math.ceil(self.v):
            raise ValueError(f"need 1 <= k <= ceil(v), got k={self.k}, v={self.v}")
        if self.c_shift <= 0:
            raise ValueError(f"c_shift must be > 0, got {self.c_shift}")
        if self.m_offset < 0:
            raise ValueError(f"m_offset must be >= 0, got {self.m_offset}")
        if not 0 < self.mu_exponent < 0.5:
            raise ValueError(f"mu_exponent must be in (0, 0.5), got {self.mu_exponent}")


def sample_ordered_uniforms(k: int, rng: np.random.Generator, method: str = "sort") -> np.ndarray:
    """One draw of the k uniform order statistics."""
    return _ordered_batch(rng, 1, k, method)[0]


def _ordered_batch(rng: np.random.Generator, n: int, k: int, method: str = "sort") -> np.ndarray:
    if method == "sort":
        return np.sort(rng.random((n, k)), axis=1)
    if method == "spacings":
        e = rng.standard_exponential((n, k + 1))
        cs = np.cumsum(e, axis=1)
        return cs[:, :k] / cs[:, k:]
    raise ValueError(f"unknown sampling method {method!r}")


def _as_fraction(x) -> Fraction:
    # Fraction(float) is exact for binary floats, so exactness is preserved
    return x if isinstance(x, Fraction) else Fraction(x)


def _all_exact(*vals) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in vals)


def _steck_determinant(lower: list[Fraction], k: int) -> Fraction:
    """P(xi_j >= lower_j for all j) by Steck's determinant (upper bounds = 1).

    M[i][j] = (1 - lower_j)_+^(j-i+1) / (j-i+1)! for j-i+1 >= 0, else 0;
    the probability is k! * det(M).
    """
    mat: list[list[Fraction]] = []
    for i in range(1, k + 1):
        row = []
        for j in range(1, k + 1):
            e = j - i + 1
            if e < 0:
                row.append(Fraction(0))
                continue
            c = 1 - lower[j - 1]
            if c <= 0:
                row.append(Fraction(0))
            elif e == 0:
                row.append(Fraction(1))
            else:
                row.append(c**e / Fraction(math.factorial(e)))
        mat.append(row)
    # fraction-exact Gaussian elimination
    det = Fraction(1)
    n = k
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if mat[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for r in range(col + 1, n):
            factor = mat[r][col] * inv
            if factor:
                for c2 in range(col, n):
                    mat[r][c2] -= factor * mat[col][c2]
    return det * math.factorial(k)


def qk_exact(u, v, k: int):
    """Q_k(u, v) = P(xi_i >= (i-u)/v for all i), exactly.

    Valid for k - v < u <= 1.  At u = 1 this is the Daniels product
    (w/v)(1 + 1/v)^(k-1) with w = u + v - k; for u < 1 the product formula
    is only an approximation, so the value comes from Steck's determinant.
    Returns a Fraction when u and v are ints or Fractions, else a float.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if v <= 0:
        raise ValueError(f"v must be > 0, got {v}")
    if not (k - v < u <= 1):
        raise ValueError(f"u = {u} outside validity range ({k - v}, 1]")
    exact = _all_exact(u, v)
    uf, vf = _as_fraction(u), _as_fraction(v)
    if uf == 1:
        w = uf + vf - k
        res = (w / vf) * (1 + 1 / vf) ** (k - 1)
    else:
        lower = [max(Fraction(0), (j - uf) / vf) for j in range(1, k + 1)]
        res = _steck_determinant(lower, k)
    return res if exact else float(res)


def qk_upper(u: float, w: float, k: int) -> float:
    """Order-of-magnitude upper bound (u+1)(w+1)/k for Q_k."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return (u + 1.0) * (w + 1.0) / k


def vol_sk_exact(u, v, k: int):
    """Volume of the barrier region inside the ordered simplex: Q_k(u, v)/k!."""
    return qk_exact(u, v, k) / math.factorial(k)


def vol_lower_barrier_exact(lower_bounds):
    """Volume of {0 <= xi_1 <= ... <= xi_k <= 1, xi_i >= a_i} by recursive
    polynomial integration: F_0 = 1, F_i(t) = integral_{a_i}^t F_{i-1}.

    Bounds must be ascending and inside [0, 1]; k <= 10.  Exact rationals
    in, exact rational out.
    """
    bounds = list(lower_bounds)
    k = len(bounds)
    if k < 1:
        raise ValueError("need at least one bound")
    if k > MAX_EXACT_K:
        raise ValueError(f"recursive integration capped at k <= {MAX_EXACT_K}, got {k}")
    exact = _all_exact(*bounds)
    a = [_as_fraction(x) for x in bounds]
    for i, x in enumerate(a):
        if not 0 <= x <= 1:
            raise ValueError(f"bound {bounds[i]} outside [0, 1]")
        if i and x < a[i - 1]:
            raise ValueError("bounds must be ascending")
    poly = [Fraction(1)]  # F_0
    for ai in a:
        anti = [Fraction(0)] + [c / (j + 1) for j, c in enumerate(poly)]
        shift = sum(c * ai**j for j, c in enumerate(anti))
        anti[0] = -shift
        poly = anti
    val = sum(c for c in poly)  # evaluate at t = 1
    return val if exact else float(val)


def _binom_se(hits: int, n: int) -> float:
    p = hits / n
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def qk_mc(u: float, v: float, k: int, n_samples: int, seed: int,
          threads: int = 1, method: str = "sort") -> McEstimate:
    """Monte Carlo Q_k(u, v) with binomial standard error."""
    thresholds = (np.arange(1, k + 1) - float(u)) / float(v)

    def block(rng, length):
        s = _ordered_batch(rng, length, k, method)
        return int(np.count_nonzero(np.all(s >= thresholds, axis=1)))

    hits = sum(run_blocks(n_samples, seed, 101, block, threads))
    return McEstimate(hits / n_samples, _binom_se(hits, n_samples), n_samples, seed, hits)


def barrier_thresholds(spec: BarrierSpec) -> tuple[np.ndarray, np.ndarray]:
    """(weak, strong) per-coordinate lower barriers for the two nested events.

    weak_i = (i-1)/v; strong_i = max(weak_i, (i + min(i, k-i)^mu - C)/v), with
    min(i, k-i)^mu evaluated as 0 when min(i, k-i) = 0 (i.e. at i = k).
    """
    i = np.arange(1, spec.k + 1, dtype=np.float64)
    weak = (i - 1.0) / spec.v
    m = np.minimum(i, spec.k - i)
    bump = np.where(m > 0, m, 1.0) ** spec.mu_exponent
    bump = np.where(m > 0, bump, 0.0)
    strong = np.maximum(weak, (i + bump - spec.c_shift) / spec.v)
    return weak, strong


def barrier_events_mc(spec: BarrierSpec, n_samples: int, seed: int,
                      threads: int = 1) -> tuple[McEstimate, McEstimate, McEstimate]:
    """Estimate P[B], P[B_strong], P[B_strong | B] for the barrier events.

    B_strong is computed as B intersected with the shifted barrier, so the
    containment B_strong <= B holds structurally sample by sample.  When no
    sample lands in B the conditional estimate is NaN with n_samples = 0.
    """
    weak, strong = barrier_thresholds(spec)

    def block(rng, length):
        s = _ordered_batch(rng, length, spec.k)
        in_b = np.all(s >= weak, axis=1)
        in_strong = in_b & np.all(s >= strong, axis=1)
        return int(np.count_nonzero(in_b)), int(np.count_nonzero(in_strong))

    pairs = run_blocks(n_samples, seed, 202, block, threads)
    b_hits = sum(p[0] for p in pairs)
    s_hits = sum(p[1] for p in pairs)
    p_b = McEstimate(b_hits / n_samples, _binom_se(b_hits, n_samples), n_samples, seed, b_hits)
    p_s = McEstimate(s_hits / n_samples, _binom_se(s_hits, n_samples), n_samples, seed, s_hits)
    if b_hits == 0:
        cond = McEstimate(math.nan, math.nan, 0, seed, 0)  # undefined conditional
    else:
        cond = McEstimate(s_hits / b_hits, _binom_se(s_hits, b_hits), b_hits, seed, s_hits)
    return p_b, p_s, cond


def yk_membership(xi, k: int, v_tilde: float, c_shift: float, m_offset: int) -> bool:
    """Does a sorted point of the simplex lie in the region Y_k(v_tilde, C)?

    Conditions: (ii) xi_{M+i^2} > i/v and xi_{k+1-(M+i^2)} < 1 - i/v for
    1 <= i <= floor(sqrt(k - M)) (empty when k <= M); (iii) the strong lower
    barrier v*xi_i >= max(i-1, i + min(i, k-i)^(1/7) - C) at every i.
    """
    xi = np.asarray(xi, dtype=np.float64)
    if xi.shape != (k,):
        raise ValueError(f"expected {k} coordinates, got shape {xi.shape}")
    if np.any(xi < 0) or np.any(xi > 1):
        raise ValueError("coordinates must lie in [0, 1]")
    if np.any(np.diff(xi) < 0):
        raise ValueError("coordinates must be sorted ascending")
    return bool(_yk_hits(xi[None, :], k, v_tilde, c_shift, m_offset)[0])


def _yk_hits(s: np.ndarray, k: int, v_tilde: float, c_shift: float, m_offset: int) -> np.ndarray:
    i = np.arange(1, k + 1, dtype=np.float64)
    m = np.minimum(i, k - i)
    bump = np.where(m > 0, m, 1.0) ** YK_MU
    bump = np.where(m > 0, bump, 0.0)
    lower = np.maximum(i - 1.0, i + bump - c_shift) / v_tilde
    ok = np.all(s >= lower, axis=1)
    top = int(math.isqrt(k - m_offset)) if k > m_offset else 0
    for ii in range(1, top + 1):
        idx = m_offset + ii * ii  # 1-based, <= k by construction
        ok &= s[:, idx - 1] > ii / v_tilde
        ok &= s[:, k - idx] < 1.0 - ii / v_tilde
    return ok


def vol_yk_mc(k: int, v_tilde: float, c_shift: float, m_offset: int,
              n_samples: int, seed: int, threads: int = 1) -> McEstimate:
    """Volume of Y_k(v_tilde, C): hit fraction of sorted samples over k!."""
    if not 1 <= k <= math.ceil(v_tilde):
        raise ValueError(f"need 1 <= k <= ceil(v_tilde), got k={k}, v_tilde={v_tilde}")

    def block(rng, length):
        s = _ordered_batch(rng, length, k)
        return int(np.count_nonzero(_yk_hits(s, k, v_tilde, c_shift, m_offset)))

    hits = sum(run_blocks(n_samples, seed, 303, block, threads))
    kfac = float(math.factorial(k))
    return McEstimate(hits / n_samples / kfac, _binom_se(hits, n_samples) / kfac,
                      n_samples, seed, hits)


_LOG_DOMAIN_V = 500.0


def _uk_integrand(s: np.ndarray, k: int, v: float) -> np.ndarray:
    """min over 0 <= j <= k of 2^-j (2^(v xi_1) + ... + 2^(v xi_j) + 1)."""
    n = s.shape[0]
    if v <= _LOG_DOMAIN_V:
        pw = np.exp2(v * s)
        cs = np.cumsum(pw, axis=1)
        sums = np.concatenate([np.zeros((n, 1)), cs], axis=1)  # j = 0 .. k
        weights = np.exp2(-np.arange(k + 1, dtype=np.float64))
        return np.min((sums + 1.0) * weights, axis=1)
    # log2-domain: S_j tracked as log2 of the partial sum
    log_pw = v * s
    log_cs = np.logaddexp2.accumulate(log_pw, axis=1)
    log_sums = np.logaddexp2(log_cs, 0.0)  # + 1
    log_vals = log_sums - np.arange(1, k + 1, dtype=np.float64)
    best = np.minimum(np.min(log_vals, axis=1), 0.0)  # j = 0 gives exactly 1
    return np.exp2(best)


def uk_mc(k: int, v: float, n_samples: int, seed: int, threads: int = 1) -> McEstimate:
    """U_k(v): mean of the capped exponential-sum integrand over the simplex.

    The j = 0 term caps the integrand at 1, so U_1(v) = 1 exactly for any v.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")

    def block(rng, length):
        vals = _uk_integrand(_ordered_batch(rng, length, k), k, v)
        return float(vals.sum()), float(np.square(vals).sum()), length

    parts = run_blocks(n_samples, seed, 404, block, threads)
    total = math.fsum(p[0] for p in parts)
    total_sq = math.fsum(p[1] for p in parts)
    mean = total / n_samples
    var = max(total_sq / n_samples - mean * mean, 0.0)
    kfac = float(math.factorial(k))
    return McEstimate(mean / kfac, math.sqrt(var / n_samples) / kfac,
                      n_samples, seed, n_samples)


def t_region_mc(k: int, v: float, gamma: float, n_samples: int, seed: int,
                threads: int = 1) -> McEstimate:
    """Volume of {xi in ordered simplex : sum_{i<=j} 2^(v xi_i) >= 2^(j-gamma), all j <= k}."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    rhs = np.arange(1, k + 1, dtype=np.float64) - gamma

    def block(rng, length):
        s = _ordered_batch(rng, length, k)
        log_cs = np.logaddexp2.accumulate(v * s, axis=1)
        return int(np.count_nonzero(np.all(log_cs >= rhs, axis=1)))

    hits = sum(run_blocks(n_samples, seed, 505, block, threads))
    kfac = float(math.factorial(k))
    return McEstimate(hits / n_samples / kfac, _binom_se(hits, n_samples) / kfac,
                      n_samples, seed, hits)
