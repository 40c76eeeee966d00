"""Exact small-instance engine for the discrepancy framework.

The k-wise discrepancy of a solution is the elementary symmetric sum of the
normalized indicator values across the m constraints; because all lists
share a common density, it collapses to a function of the satisfied count.
All identities come in two independently computed routes, and every checker
raises IdentityViolationError (with the instance attached) on disagreement.
Exact arithmetic lives in Q(r); the canonical square-root weights leave
Q(r), so those paths run in high-precision floats instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import mpmath
import numpy as np

from .codes import (
    InputLists,
    MdsCode,
    SatisfactionProfile,
    brute_force_opi,
    dual_codewords,
    enumeration_budget,
    lists_to_json,
)
from .errors import BudgetExceededError, DomainError, IdentityViolationError
from .quadext import QuadExt, beta_abs_of, beta_of, r_of, sqrt_rho_one_minus_rho, zero

TWO_ROUTE_TOL = 1e-9


def _comb0(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def _half(v: int) -> int | None:
    """v/2 when v is an even nonnegative integer, else None."""
    return v // 2 if v >= 0 and v % 2 == 0 else None


# ---------- pointwise discrepancy ----------

def normalized_indicator_value(in_set: bool, rho: Fraction) -> QuadExt:
    """r for members, -1/r = -(rho/(1-rho)) r for non-members."""
    rho = Fraction(rho)
    r = r_of(rho)
    return r if in_set else QuadExt.of(0, -rho / (1 - rho), r.r_sq)


def indicator_values(code: MdsCode, lists: InputLists, x) -> list[QuadExt]:
    p = code.p
    res = [sum(code.B[i][j] * x[j] for j in range(code.n)) % p for i in range(code.m)]
    return [
        normalized_indicator_value(res[i] in lists.sets[i], lists.rho)
        for i in range(code.m)
    ]


def discrepancy_by_subsets(code: MdsCode, lists: InputLists, x, k: int,
                           budget: int | None = None) -> QuadExt:
    """q_k(x) as the literal sum over k-subsets of indicator products."""
    if math.comb(code.m, k) > enumeration_budget(budget):
        raise BudgetExceededError(f"C({code.m},{k}) exceeds budget")
    g = indicator_values(code, lists, x)
    total = zero(lists.rho)
    for subset in combinations(range(code.m), k):
        prod = QuadExt.of(1, 0, total.r_sq)
        for i in subset:
            prod = prod * g[i]
        total = total + prod
    return total


def elementary_symmetric_newton(values: list[QuadExt], k: int) -> QuadExt:
    """e_k via Newton's identities from power sums; independent oracle."""
    if not values:
        raise DomainError("need at least one value")
    r_sq = values[0].r_sq
    power = [QuadExt.of(len(values), 0, r_sq)]
    for j in range(1, k + 1):
        power.append(sum((v**j for v in values), QuadExt.of(0, 0, r_sq)))
    e = [QuadExt.of(1, 0, r_sq)]
    for j in range(1, k + 1):
        acc = QuadExt.of(0, 0, r_sq)
        for i in range(1, j + 1):
            term = e[j - i] * power[i]
            acc = acc + (term if i % 2 == 1 else -term)
        e.append(acc * Fraction(1, j))
    return e[k]


def discrepancy_from_count(m: int, rho: Fraction, sat: int, k: int) -> QuadExt:
    """q_k of any solution satisfying exactly `sat` constraints.

    With a common list density the multiset of indicator values depends on
    the solution only through its satisfied count, so
    q_k = r^k sum_a C(sat,a) C(m-sat,k-a) (-rho/(1-rho))^(k-a).
    """
    rho = Fraction(rho)
    c = -rho / (1 - rho)
    val = Fraction(0)
    for a in range(max(0, k - (m - sat)), min(sat, k) + 1):
        val += math.comb(sat, a) * math.comb(m - sat, k - a) * c ** (k - a)
    return r_of(rho) ** k * val


# ---------- expected discrepancy, two routes ----------

def expected_discrepancy_exact(code: MdsCode, lists: InputLists,
                               profile: SatisfactionProfile | None = None,
                               budget: int | None = None) -> list[QuadExt]:
    """E[q_t] over uniform solutions for every t, from the exact histogram."""
    if profile is None:
        profile = brute_force_opi(code, lists, budget)
    m, rho = code.m, lists.rho
    scale = Fraction(1, profile.total)
    out = []
    for t in range(m + 1):
        acc = zero(rho)
        for s, cnt in enumerate(profile.histogram):
            if cnt:
                acc = acc + discrepancy_from_count(m, rho, s, t) * Fraction(cnt)
        out.append(acc * scale)
    return out


def expected_discrepancy_fourier(code: MdsCode, lists: InputLists,
                                 budget: int | None = None) -> np.ndarray:
    """E[q_t] for every t as the dual-code sum of products of normalized
    indicator Fourier coefficients (complex arithmetic)."""
    from .leakage import indicator_spectrum

    p, m = code.p, code.m
    scale = 1.0 / math.sqrt(float(lists.rho) * float(1 - lists.rho))
    ghat = np.ones((m, p), dtype=np.complex128)
    for i, s in enumerate(lists.sets):
        spec = indicator_spectrum(s, p)
        ghat[i, 1:] = spec.coeffs[1:] * scale  # ghat at 0 set to 1: skips the factor
    out = np.zeros(m + 1, dtype=np.complex128)
    for Y in dual_codewords(code, budget):
        w = (Y != 0).sum(axis=0)
        prod = np.prod(ghat[np.arange(m)[:, None], Y], axis=0)
        out += np.bincount(w, weights=prod.real, minlength=m + 1) + 1j * np.bincount(
            w, weights=prod.imag, minlength=m + 1
        )
    return out


def expected_discrepancy_all(code: MdsCode, lists: InputLists,
                             profile: SatisfactionProfile | None = None,
                             budget: int | None = None,
                             rel_tol: float = TWO_ROUTE_TOL) -> list[QuadExt]:
    """Both routes for E[q_t], t = 0..m, with agreement asserted.

    Returns the exact values.  Below the dual distance the exact route must
    be identically zero and the dual route has no codewords to sum.
    """
    exact = expected_discrepancy_exact(code, lists, profile, budget)
    fourier = expected_discrepancy_fourier(code, lists, budget)
    for t in range(code.m + 1):
        ex = exact[t].to_float()
        fo = fourier[t]
        if abs(fo.imag) > rel_tol * max(1.0, abs(ex)):
            raise IdentityViolationError(
                f"dual sum at weight {t} has imaginary residue {fo.imag}",
                instance=lists_to_json(lists),
            )
        if abs(fo.real - ex) > rel_tol * max(1.0, abs(ex), abs(fo.real)):
            raise IdentityViolationError(
                f"expected discrepancy routes disagree at weight {t}: "
                f"exact {ex} vs dual sum {fo.real}",
                instance=lists_to_json(lists),
            )
        if 0 < t < code.d_perp and not exact[t].real_is_zero():
            raise IdentityViolationError(
                f"expected discrepancy nonzero below the dual distance (t={t})",
                instance=lists_to_json(lists),
            )
    return exact


def expected_discrepancy_uniform(code: MdsCode, lists: InputLists, t: int,
                                 profile: SatisfactionProfile | None = None,
                                 budget: int | None = None) -> QuadExt:
    return expected_discrepancy_all(code, lists, profile, budget)[t]


# ---------- symmetric-difference counts ----------

def count_sym_diff(k_list, t: int, m: int, budget: int | None = None) -> int:
    """Number of subset tuples (|T_i| = k_i) whose odd-multiplicity set is
    exactly {1..t}, by explicit enumeration over bitmasks.

    The largest factor is folded last through a hash count, so memory stays
    at the product of the remaining factors.
    """
    total = math.prod(math.comb(m, k) for k in k_list)
    if total > enumeration_budget(budget):
        raise BudgetExceededError(f"{total} tuples exceed budget")
    target = (1 << t) - 1
    masks_per_k = []
    for k in k_list:
        masks = []
        for subset in combinations(range(m), k):
            mask = 0
            for i in subset:
                mask |= 1 << i
            masks.append(mask)
        masks_per_k.append(masks)

    from collections import Counter

    masks_per_k.sort(key=len)
    tail = Counter(masks_per_k[-1])
    acc = [0]
    for masks in masks_per_k[:-1]:
        acc = [a ^ mk for a in acc for mk in masks]
    return sum(tail[a ^ target] for a in acc if (a ^ target) in tail)


def kravchuk_value(m: int, k: int, t: int) -> int:
    """Integer value sum_j (-1)^j C(t,j) C(m-t,k-j) of the balanced family."""
    return sum((-1) ** j * _comb0(t, j) * _comb0(m - t, k - j) for j in range(k + 1))


def count_sym_diff_zero_closed(k_list, m: int) -> int:
    """Closed form for t = 0: 2^-m sum_t C(m,t) prod K_{k_i}(t); zero when
    the k_i sum is odd."""
    if sum(k_list) % 2 == 1:
        return 0
    acc = Fraction(0)
    for t in range(m + 1):
        prod = Fraction(math.comb(m, t))
        for k in k_list:
            prod *= kravchuk_value(m, k, t)
        acc += prod
    acc /= Fraction(2) ** m
    if acc.denominator != 1:
        raise IdentityViolationError("closed-form count is not an integer")
    return int(acc)


def weighted_pair_count(k: int, kp: int, t: int, m: int, rho: Fraction) -> QuadExt:
    """sum_j beta^j C(t,j) C(t-j, (t+k-k'-j)/2) C(m-t, (k+k'-t-j)/2), with
    binomials vanishing on negative or non-integer arguments."""
    return _pair_count(k, kp, t, m, beta_of(rho))


def weighted_pair_count_abs(k: int, kp: int, t: int, m: int, rho: Fraction) -> QuadExt:
    """Same sum with |beta|: the cancellation-free majorant."""
    return _pair_count(k, kp, t, m, beta_abs_of(rho))


def _pair_count(k: int, kp: int, t: int, m: int, beta: QuadExt) -> QuadExt:
    acc = QuadExt.of(0, 0, beta.r_sq)
    if k < 0 or kp < 0 or t < 0 or t > m:
        return acc
    beta_pow = QuadExt.of(1, 0, beta.r_sq)
    for j in range(t + 1):
        mid = _half(t + k - kp - j)
        outer = _half(k + kp - t - j)
        if mid is not None and outer is not None:
            c = _comb0(t, j) * _comb0(t - j, mid) * _comb0(m - t, outer)
            if c:
                acc = acc + beta_pow * Fraction(c)
        beta_pow = beta_pow * beta
    return acc


def weighted_pair_count_brute(k: int, kp: int, t: int, m: int, rho: Fraction,
                              budget: int | None = None) -> QuadExt:
    """Enumeration oracle: sum beta^(t - |T xor T'|) over pairs with
    T xor T' inside {1..t} inside T union T'."""
    if math.comb(m, k) * math.comb(m, kp) > enumeration_budget(budget):
        raise BudgetExceededError("pair enumeration exceeds budget")
    beta = beta_of(rho)
    target = (1 << t) - 1
    acc = QuadExt.of(0, 0, beta.r_sq)

    def mask_of(subset):
        out = 0
        for i in subset:
            out |= 1 << i
        return out

    masks_k = [mask_of(s) for s in combinations(range(m), k)]
    masks_kp = [mask_of(s) for s in combinations(range(m), kp)]
    for a in masks_k:
        for b in masks_kp:
            diff = a ^ b
            if diff & ~target:
                continue
            if target & ~(a | b):
                continue
            acc = acc + beta ** (t - bin(diff).count("1"))
    return acc


def weighted_triple_count(k: int, kp: int, s: int, m: int, rho: Fraction) -> QuadExt:
    """(k+1) N(k+1,k';s) + beta k N(k,k';s) + (m-k+1) N(k-1,k';s); the k-1
    term is vacuous at k = 0."""
    if not 0 <= k < m:
        raise DomainError("need 0 <= k < m")
    beta = beta_of(rho)
    acc = _pair_count(k + 1, kp, s, m, beta) * Fraction(k + 1)
    acc = acc + beta * _pair_count(k, kp, s, m, beta) * Fraction(k)
    if k >= 1:
        acc = acc + _pair_count(k - 1, kp, s, m, beta) * Fraction(m - k + 1)
    return acc


# ---------- the sampled-satisfaction expansion ----------

@dataclass(frozen=True)
class SamplerSpec:
    """Window weights for the squared-combination sampler.

    In "canonical" mode u_k = C(m,k)^(-1/2) on [ell-sigma, ell] (irrational, so
    that path runs in high-precision floats); "rational_test" mode takes
    explicit rational weights and keeps every identity exact.
    """

    ell: int
    sigma: int
    weight_mode: str = "canonical"
    rational_weights: tuple[Fraction, ...] | None = None  # indexed from ell-sigma

    def __post_init__(self):
        if self.sigma < 0 or self.sigma > self.ell:
            raise DomainError("need 0 <= sigma <= ell")
        if self.weight_mode not in ("canonical", "rational_test"):
            raise DomainError(f"unknown weight mode {self.weight_mode!r}")
        if self.weight_mode == "rational_test":
            if self.rational_weights is None:
                object.__setattr__(
                    self, "rational_weights",
                    tuple(Fraction(1) for _ in range(self.sigma + 1)),
                )
            elif len(self.rational_weights) != self.sigma + 1:
                raise DomainError("need sigma + 1 rational weights")

    @property
    def window(self) -> range:
        return range(self.ell - self.sigma, self.ell + 1)


def make_sampler(ell: int, sigma: int | None = None, weight_mode: str = "canonical",
                 rational_weights=None) -> SamplerSpec:
    # the asymptotic window width floor(log log ell) is 0 or 1 at desk scale
    if sigma is None:
        sigma = min(2, ell)
    if rational_weights is not None:
        rational_weights = tuple(Fraction(v) for v in rational_weights)
    return SamplerSpec(ell, sigma, weight_mode, rational_weights)


def _window_tables(m: int, rho: Fraction, spec: SamplerSpec, u: dict):
    """T0[t] = sum u_k u_k' N(k,k';t) and T1[t] likewise with the triple
    count, over the weight window."""
    beta = beta_of(rho)
    t_hi = min(m, 2 * spec.ell + 1)
    T0 = [QuadExt.of(0, 0, beta.r_sq) for _ in range(m + 1)]
    T1 = [QuadExt.of(0, 0, beta.r_sq) for _ in range(m + 1)]
    for k in spec.window:
        for kp in spec.window:
            w = u[k] * u[kp]
            for t in range(t_hi + 1):
                T0[t] = T0[t] + _pair_count(k, kp, t, m, beta) * w
                T1[t] = T1[t] + weighted_triple_count(k, kp, t, m, rho) * w
    return T0, T1


def expected_sampled_satisfaction(code: MdsCode, lists: InputLists, spec: SamplerSpec,
                                  profile: SatisfactionProfile | None = None,
                                  budget: int | None = None,
                                  precision_digits: int = 60) -> dict:
    """E[s] under the squared-window-combination sampler, computed two ways.

    Route one enumerates solutions directly; route two expands through the
    weighted counts and the uniform expected discrepancies.  Agreement is
    exact (cross-multiplied in Q(r)) in rational_test mode and 1e-9
    relative in canonical mode.
    """
    if profile is None:
        profile = brute_force_opi(code, lists, budget)
    m, rho = code.m, lists.rho
    if spec.ell >= m:
        raise DomainError("window cutoff must stay below the code length")
    exact_eq = expected_discrepancy_all(code, lists, profile, budget)

    if spec.weight_mode == "rational_test":
        u = {k: spec.rational_weights[i] for i, k in enumerate(spec.window)}
        wvals = [
            sum(
                (discrepancy_from_count(m, rho, s, k) * u[k] for k in spec.window),
                zero(rho),
            )
            for s in range(m + 1)
        ]
        direct_num = zero(rho)
        direct_den = zero(rho)
        for s, cnt in enumerate(profile.histogram):
            if cnt:
                sq = wvals[s] * wvals[s] * Fraction(cnt)
                direct_num = direct_num + sq * Fraction(s, m)
                direct_den = direct_den + sq
        T0, T1 = _window_tables(m, rho, spec, u)
        exp_den = sum((exact_eq[t] * T0[t] for t in range(m + 1)), zero(rho))
        exp_num1 = sum((exact_eq[t] * T1[t] for t in range(m + 1)), zero(rho))
        exp_snum = rho * exp_den + sqrt_rho_one_minus_rho(rho) * exp_num1 * Fraction(1, m)
        total = Fraction(profile.total)
        # real_equals: exact, and tolerant of the non-unique representation
        # when r_sq happens to be a rational square (exactly balanced lists)
        if not direct_num.real_equals(exp_snum * total) or not direct_den.real_equals(
            exp_den * total
        ):
            raise IdentityViolationError(
                "direct and expanded sampled satisfaction disagree",
                instance=lists_to_json(lists),
            )
        value = direct_num.to_float() / direct_den.to_float()
        return {
            "value": value,
            "mode": "rational_test",
            "exact_pair": (direct_num, direct_den),
            "max_rel_residual": 0.0,
        }

    with mpmath.workdps(precision_digits):
        rho_f = mpmath.mpf(rho.numerator) / rho.denominator
        sq = mpmath.sqrt(rho_f * (1 - rho_f))
        r_f = mpmath.sqrt((1 - rho_f) / rho_f)

        def to_mp(qe: QuadExt):
            return (
                mpmath.mpf(qe.a.numerator) / qe.a.denominator
                + (mpmath.mpf(qe.b.numerator) / qe.b.denominator) * r_f
            )

        u = {k: 1 / mpmath.sqrt(mpmath.binomial(m, k)) for k in spec.window}
        wvals = [
            sum(to_mp(discrepancy_from_count(m, rho, s, k)) * u[k] for k in spec.window)
            for s in range(m + 1)
        ]
        direct_num = mpmath.mpf(0)
        direct_den = mpmath.mpf(0)
        for s, cnt in enumerate(profile.histogram):
            if cnt:
                term = wvals[s] ** 2 * cnt
                direct_num += term * mpmath.mpf(s) / m
                direct_den += term
        eq_mp = [to_mp(v) for v in exact_eq]
        t_hi = min(m, 2 * spec.ell + 1)
        beta = beta_of(rho)
        exp_den = mpmath.mpf(0)
        exp_num1 = mpmath.mpf(0)
        for t in range(t_hi + 1):
            if not eq_mp[t]:
                continue
            T0 = mpmath.mpf(0)
            T1 = mpmath.mpf(0)
            for k in spec.window:
                for kp in spec.window:
                    w = u[k] * u[kp]
                    T0 += to_mp(_pair_count(k, kp, t, m, beta)) * w
                    T1 += to_mp(weighted_triple_count(k, kp, t, m, rho)) * w
            exp_den += eq_mp[t] * T0
            exp_num1 += eq_mp[t] * T1
        exp_snum = rho_f * exp_den + sq * exp_num1 / m
        total = profile.total
        res1 = abs(direct_num / total - exp_snum) / max(1, abs(exp_snum))
        res2 = abs(direct_den / total - exp_den) / max(1, abs(exp_den))
        residual = float(max(res1, res2))
        if residual > TWO_ROUTE_TOL:
            raise IdentityViolationError(
                f"sampled-satisfaction routes disagree (rel {residual})",
                instance=lists_to_json(lists),
            )
        return {
            "value": float(direct_num / direct_den),
            "mode": "canonical",
            "max_rel_residual": residual,
        }


def quadratic_form_satisfaction(m: int, ell: int, u) -> Fraction:
    """1/2 + <w, A w> / (2m <w, w>) under w_k = C(m,k)^(1/2) u_k, evaluated
    exactly: the square roots cancel since C(m,k) k C(m,k-1)(m+1-k) is the
    square of k C(m,k)."""
    u = [Fraction(v) for v in u]
    if len(u) != ell + 1:
        raise DomainError("need ell + 1 weights")
    num = Fraction(0)
    den = Fraction(0)
    for k in range(ell + 1):
        den += u[k] ** 2 * math.comb(m, k)
        if k >= 1:
            num += 2 * u[k] * u[k - 1] * k * math.comb(m, k)
    if den == 0:
        raise DomainError("zero weight vector")
    return Fraction(1, 2) + num / (2 * m * den)


# ---------- window sums and rate checks ----------

def leading_term_sums(m: int, ell: int, sigma: int, rho: Fraction,
                      precision_digits: int = 60):
    """The weight-zero window sums of the expansion: the denominator sum is
    exactly sigma + 1; the numerator sum is returned as a high-precision
    float (its terms carry sqrt binomial ratios)."""
    if not 0 <= sigma <= ell <= m:
        raise DomainError("need 0 <= sigma <= ell <= m")
    rho = Fraction(rho)
    beta = beta_of(rho)
    window = range(ell - sigma, ell + 1)
    den = Fraction(0)
    for k in window:
        for kp in window:
            n0 = _pair_count(k, kp, 0, m, beta)
            if k == kp:
                if n0.b != 0:
                    raise IdentityViolationError("diagonal weight-zero count left Q")
                den += n0.a / math.comb(m, k)
            elif not n0.is_zero():
                raise IdentityViolationError("off-diagonal weight-zero count nonzero")
    with mpmath.workdps(precision_digits):
        r_f = mpmath.sqrt(mpmath.mpf(beta.r_sq.numerator) / beta.r_sq.denominator)
        num = mpmath.mpf(0)
        for k in window:
            for kp in window:
                n1 = weighted_triple_count(k, kp, 0, m, rho)
                if n1.is_zero():
                    continue
                val = (
                    mpmath.mpf(n1.a.numerator) / n1.a.denominator
                    + (mpmath.mpf(n1.b.numerator) / n1.b.denominator) * r_f
                )
                num += val / mpmath.sqrt(mpmath.binomial(m, k) * mpmath.binomial(m, kp))
        return den, num


def window_domination_report(m: int, ell: int, sigma: int, t: int, rho: Fraction) -> dict:
    """Compare every window pair count against the cancellation-free count
    at the window top; report the smallest admissible per-step constant."""
    if not 0 <= sigma <= ell <= m:
        raise DomainError("need 0 <= sigma <= ell <= m")
    rho = Fraction(rho)
    top = weighted_pair_count_abs(ell, ell - (t % 2), t, m, rho).to_float()
    base = top / math.comb(m, ell)
    if base <= 0:
        raise DomainError("cancellation-free majorant vanished")
    worst = 0.0
    worst_pair = None
    for k in range(ell - sigma, ell + 1):
        for kp in range(ell - sigma, ell + 1):
            lhs = abs(weighted_pair_count(k, kp, t, m, rho).to_float())
            lhs /= math.sqrt(math.comb(m, k) * math.comb(m, kp))
            ratio = lhs / base
            if ratio > worst:
                worst, worst_pair = ratio, (k, kp)
    c = worst ** (1.0 / max(sigma, 1)) if worst > 1.0 else 1.0
    return {
        "m": m, "ell": ell, "sigma": sigma, "t": t, "rho": float(rho),
        "max_ratio": worst,
        "worst_pair": worst_pair,
        "smallest_admissible_C": c,
        "all_bounded": math.isfinite(worst),
    }


def count_rate_report(m: int, mu: float, delta: float, slack: float | None = None) -> dict:
    """Finite-m rate of the top-of-window pair count against its limit.

    Checks the partition identity N(l,l;t) C(m,t) = C(l,t/2) C(m-l,t/2) C(m,l)
    exactly on the grid, locates the maximizing even weight, and compares
    the rate with the limiting exponent within the default slack 5 log(m)/m.
    """
    from .rates import pair_count_exponent

    ell = math.floor((mu + delta) * m)
    if slack is None:
        slack = 5.0 * math.log(m) / m
    t_lo = math.ceil(2 * mu * m - 1e-9)
    if t_lo % 2:
        t_lo += 1
    rates = {}
    for t in range(t_lo, 2 * ell + 1, 2):
        half_t = t // 2
        n_val = math.comb(t, half_t) * _comb0(m - t, ell - half_t)
        lhs = n_val * math.comb(m, t)
        rhs = math.comb(ell, half_t) * _comb0(m - ell, half_t) * math.comb(m, ell)
        if lhs != rhs:
            raise IdentityViolationError(f"partition identity fails at t={t}")
        if n_val:
            rates[t] = (math.log(n_val) - math.log(math.comb(m, ell))) / m
    argmax_t = max(rates, key=rates.__getitem__)
    bound = pair_count_exponent(mu, delta)
    return {
        "m": m, "mu": mu, "delta": delta, "ell": ell,
        "max_rate": rates[argmax_t],
        "argmax_t": argmax_t,
        "limit_exponent": bound,
        "slack": slack,
        "within_slack": rates[argmax_t] <= bound + slack,
        "argmax_at_floor": argmax_t == t_lo,
    }
