"""The Poisson-type sum controlling the phase transition,

    Sigma(lam, v) = sum_{1 <= k <= v} (lam^k / k!) * (v - k + 1) / v,

its exact rearrangement, partial Poisson mass, the predictor exponents
G(delta) and E(y; delta), and the five-regime envelope classifier driven by
theta = lam - v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

LOG2 = math.log(2.0)
LOG4 = math.log(4.0)
EXACT_V_CAP = 200
FLOAT_DIRECT_LAMBDA = 700.0
FLOAT_DIRECT_V = 170


@dataclass
class PoissonParams:
    lam: float
    v: int
    theta: float


def poisson_params(loglog_y: float, delta: float) -> PoissonParams:
    """lam = 2*delta*loglog y, v = floor(loglog y / log 2)."""
    if loglog_y < LOG2:
        raise ValueError(f"loglog_y = {loglog_y} gives v = 0; need loglog_y >= log 2")
    if not 0 < delta <= 1:
        raise ValueError(f"delta must be in (0, 1], got {delta}")
    lam = 2.0 * delta * loglog_y
    v = int(math.floor(loglog_y / LOG2))
    return PoissonParams(lam, v, lam - v)


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def poisson_sum(lam, v: int):
    """Sigma(lam, v).  Exact Fraction for rational lam with v <= 200;
    float otherwise (inf when the true value overflows float64)."""
    if v < 1:
        raise ValueError(f"v must be >= 1, got {v}")
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    if _is_exact(lam) and v <= EXACT_V_CAP:
        lam_f = Fraction(lam)
        total = Fraction(0)
        term = Fraction(1)
        for k in range(1, v + 1):
            term = term * lam_f / k
            total += term * Fraction(v - k + 1, v)
        return total
    lam = float(lam)
    if lam <= FLOAT_DIRECT_LAMBDA and v <= FLOAT_DIRECT_V:
        total = 0.0
        term = 1.0
        for k in range(1, v + 1):
            term = term * lam / k
            total += term * (v - k + 1) / v
        return total
    log_val = poisson_sum_log(lam, v)
    return math.exp(log_val) if log_val < 709 else math.inf


def poisson_sum_log(lam: float, v: int) -> float:
    """log of Sigma(lam, v), evaluated with log-factorials (safe for lam ~ 1e4)."""
    if v < 1:
        raise ValueError(f"v must be >= 1, got {v}")
    lam = float(lam)
    if lam <= 0:
        return -math.inf
    log_lam = math.log(lam)
    logs = []
    lg = 0.0  # lgamma(k+1) accumulated incrementally
    for k in range(1, v + 1):
        lg += math.log(k)
        logs.append(k * log_lam - lg + math.log((v - k + 1) / v))
    m = max(logs)
    return m + math.log(math.fsum(math.exp(l - m) for l in logs))


def key_identity_rhs(lam, v: int):
    """Exact rearrangement of Sigma(lam, v):

        ((v - lam + 1)/v) * sum_{1<=k<=v} lam^k/k!  +  (lam/v) * (lam^v/v! - 1).

    Agrees with poisson_sum identically (pre-truncation form)."""
    if v < 1:
        raise ValueError(f"v must be >= 1, got {v}")
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    if _is_exact(lam) and v <= EXACT_V_CAP:
        lam_f = Fraction(lam)
        s = Fraction(0)
        term = Fraction(1)
        for k in range(1, v + 1):
            term = term * lam_f / k
            s += term
        top = term  # lam^v / v!
        return (v - lam_f + 1) / v * s + lam_f / v * (top - 1)
    lam = float(lam)
    if lam > FLOAT_DIRECT_LAMBDA or v > FLOAT_DIRECT_V:
        raise ValueError(
            "float path of key_identity_rhs is limited to lam <= 700, v <= 170; "
            "pass Fraction inputs or use poisson_sum_log"
        )
    s = 0.0
    term = 1.0
    for k in range(1, v + 1):
        term = term * lam / k
        s += term
    return (v - lam + 1) / v * s + lam / v * (term - 1.0)


def partial_poisson(lam: float, z: float) -> float:
    """sum_{0 <= k <= lam + z} lam^k/k!, divided by e^lam.

    Inclusive upper index floor(lam + z); direct summation in a window around
    the mode with negligible truncated mass (relative error well under 1e-9).
    """
    lam = float(lam)
    if not 0 < lam <= 1e6:
        raise ValueError(f"lam must be in (0, 1e6], got {lam}")
    k_top = math.floor(lam + z)
    if k_top < 0:
        return 0.0
    mode = min(k_top, int(lam))
    # normalized term at the mode: lam^m e^-lam / m!
    log_t = mode * math.log(lam) - lam - math.lgamma(mode + 1)
    t_mode = math.exp(log_t)
    terms = [t_mode]
    t = t_mode
    k = mode
    while k >= 1:
        t *= k / lam
        k -= 1
        terms.append(t)
        if t < t_mode * 1e-18 and len(terms) > 3:
            break
    t = t_mode
    k = mode
    while k < k_top:
        t *= lam / (k + 1)
        k += 1
        terms.append(t)
        if t < t_mode * 1e-18:
            break
    return math.fsum(terms)


def g_exponent(delta: float) -> float:
    """Exponent G(delta) of (log y) in the predictor; branches at 1/log 4."""
    if not 0 < delta <= 1:
        raise ValueError(f"delta must be in (0, 1], got {delta}")
    if delta <= 1 / LOG4:
        return 1.0 - delta
    return delta - (1.0 + math.log(delta * LOG2)) / LOG2


def e_factor(loglog_y: float, delta: float) -> float:
    """Correction factor E(y; delta); the argument is loglog y."""
    if loglog_y <= 0:
        raise ValueError(f"loglog_y must be > 0, got {loglog_y}")
    if not 0 < delta <= 1:
        raise ValueError(f"delta must be in (0, 1], got {delta}")
    if delta <= 1 / LOG4:
        return max(1 / LOG4 - delta, 1.0 / math.sqrt(loglog_y))
    gap = (delta - 1 / LOG4) ** 2
    return 1.0 / (loglog_y**1.5 * max(gap, 1.0 / loglog_y))


def main_term(x: float, y: float, delta: float) -> float:
    """Predictor x / (log x)^(1-delta) * (log y)^(-G(delta)) * E(y; delta).

    Meaningful for y >= 16 or so; anything with loglog y > 0 is accepted."""
    if not (x >= y > math.e):
        raise ValueError(f"need x >= y > e, got x={x}, y={y}")
    ll_y = math.log(math.log(y))
    return (
        x
        * math.log(x) ** (delta - 1.0)
        * math.log(y) ** (-g_exponent(delta))
        * e_factor(ll_y, delta)
    )


def prop14_rhs(x: float, y: float, delta: float) -> float:
    """x / ((log x)^(1-delta) (log y)^(1+delta)) times Sigma(2 delta loglog y, v)."""
    if not (x >= y > math.e):
        raise ValueError(f"need x >= y > e, got x={x}, y={y}")
    params = poisson_params(math.log(math.log(y)), delta)
    sigma = poisson_sum(params.lam, params.v)
    return (
        x * math.log(x) ** (delta - 1.0) * math.log(y) ** (-1.0 - delta) * float(sigma)
    )


@dataclass
class RegimeReport:
    regime: str  # "i" .. "v"
    lam: float
    v: int
    theta: float
    log_exact_sum: float
    log_envelope: float
    ratio: float  # exact / envelope
    log_last_term: float  # a_v = lam^v / (v! * v)


def classify_regime(lam: float, v: int, epsilon: float) -> RegimeReport:
    """Pick the envelope regime for Sigma(lam, v) from theta = lam - v.

    Regimes: (i) theta < 0, |theta| >= eps*lam -> e^lam; (ii) theta > 0,
    theta >= eps*lam -> lam^v/(v+1)!; (iii) |theta| <= sqrt(lam) -> lam^v/v!;
    (iv) theta <= -sqrt(lam), |theta| < eps*lam -> |theta| e^lam / lam;
    (v) theta >= sqrt(lam), theta < eps*lam -> (lam^v/v!) (v/theta^2).
    Boundary ties resolve (iii) first, then (iv)/(v), then (i)/(ii).
    The analysis takes epsilon in (0, 0.2); values up to 1 are accepted.
    """
    if v < 1:
        raise ValueError(f"v must be >= 1, got {v}")
    if lam <= 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    theta = lam - v
    root = math.sqrt(lam)
    log_lam = math.log(lam)
    if abs(theta) <= root:
        regime = "iii"
        log_env = v * log_lam - math.lgamma(v + 1)
    elif theta <= -root and abs(theta) < epsilon * lam:
        regime = "iv"
        log_env = math.log(abs(theta)) + lam - log_lam
    elif theta >= root and theta < epsilon * lam:
        regime = "v"
        log_env = v * log_lam - math.lgamma(v + 1) + math.log(v) - 2 * math.log(theta)
    elif theta < 0:
        regime = "i"
        log_env = lam
    else:
        regime = "ii"
        log_env = v * log_lam - math.lgamma(v + 2)
    log_exact = poisson_sum_log(lam, v)
    log_a_v = v * log_lam - math.lgamma(v + 1) - math.log(v)
    return RegimeReport(
        regime, lam, v, theta, log_exact, log_env,
        math.exp(log_exact - log_env), log_a_v,
    )


def h_k(lam, k: int) -> int:
    """min{n >= 0 : lam^(k-n)/(k-n)! <= (1/2) lam^k/k!}, via ratio products.

    The defining ratio lam^(k-n) k! / ((k-n)! lam^k) is the product of
    (k-i+1)/lam for i = 1..n; no factorial is ever materialized.  Exact
    comparisons when lam is an int or Fraction.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if lam <= 0:
        raise ValueError(f"lam must be > 0, got {lam}")
    exact = _is_exact(lam)
    prod = Fraction(1) if exact else 1.0
    half = Fraction(1, 2) if exact else 0.5
    for n in range(1, k + 1):
        prod = prod * (k - n + 1) / lam
        if prod <= half:
            return n
    raise ValueError(f"no n <= k = {k} satisfies the halving condition at lam = {lam}")


def v_sequence(lam, v: int) -> list[int]:
    """v_0 = v, v_{j+1} = v_j - h_{v_j}, stopping once v_{J+1} <= v/100.

    Intended for regime-v style inputs (v < lam), where each step is >= 1."""
    if v < 1:
        raise ValueError(f"v must be >= 1, got {v}")
    seq = [v]
    cutoff = v / 100.0
    while seq[-1] > cutoff:
        step = h_k(lam, seq[-1])
        assert step >= 1
        seq.append(seq[-1] - step)
    return seq
