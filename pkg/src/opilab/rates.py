"""Asymptotic rate functions and the nested optimizations behind the
improvement and saturation thresholds.

Everything here is double precision.  Feasibility predicates are open
strict inequalities in the underlying analysis, so they are certified with
an explicit margin (FEAS_MARGIN) rather than at equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

LOG2 = math.log(2.0)
LOG_2_OVER_PI = math.log(2.0 / math.pi)
FEAS_MARGIN = 1e-9
BOUND_KINDS = ("green", "avg", "best", "biased")
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_EDGE_EPS = 1e-12  # tolerated float spill at domain boundaries


def binary_entropy(x: float) -> float:
    """-x log x - (1-x) log(1-x), natural log, H(0) = H(1) = 0."""
    if x < 0.0:
        if x < -_EDGE_EPS:
            raise DomainError(f"entropy argument {x} below 0")
        x = 0.0
    if x > 1.0:
        if x > 1.0 + _EDGE_EPS:
            raise DomainError(f"entropy argument {x} above 1")
        x = 1.0
    out = 0.0
    if x > 1e-300:
        out -= x * math.log(x)
    y = 1.0 - x
    if y > 1e-300:
        out -= y * math.log(y)
    return out


def semicircle_law(rho: float, mu_arg: float) -> float:
    """(sqrt(mu(1-rho)) + sqrt(rho(1-mu)))^2 for mu + rho <= 1, else 1."""
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho={rho} outside (0, 1)")
    if not -_EDGE_EPS <= mu_arg <= 1.0 + _EDGE_EPS:
        raise DomainError(f"mu={mu_arg} outside [0, 1]")
    mu_arg = min(max(mu_arg, 0.0), 1.0)
    if mu_arg + rho >= 1.0:
        return 1.0
    return (math.sqrt(mu_arg * (1.0 - rho)) + math.sqrt(rho * (1.0 - mu_arg))) ** 2


def pair_count_exponent(mu: float, delta: float) -> float:
    """Exponential rate of the weighted subset-pair count in the balanced
    master expansion: (mu+d)H(mu/(mu+d)) + (1-mu-d)H(mu/(1-mu-d)) - H(2mu)."""
    if delta < -_EDGE_EPS or mu < 0.0:
        raise DomainError("mu and delta must be nonnegative")
    if mu + delta > 0.5 + _EDGE_EPS:
        raise DomainError("need mu + delta <= 1/2")
    delta = max(delta, 0.0)
    s = mu + delta
    first = s * binary_entropy(mu / s) if s > 0 else 0.0
    return first + (1.0 - s) * binary_entropy(mu / (1.0 - s)) - binary_entropy(2.0 * mu)


def dual_sum_exponent_avg(mu: float) -> float:
    """Decay rate of the dual Fourier sum with linearly many cyclic buckets."""
    return (1.0 - 2.0 * mu) * LOG2 + 2.0 * mu * (4.0 * mu - 1.0) * LOG_2_OVER_PI


def dual_sum_exponent_green(mu: float) -> float:
    """Decay rate with a single bucket (the off-the-shelf split)."""
    return (1.0 - 2.0 * mu) * LOG2 + (6.0 * mu - 2.0) * LOG_2_OVER_PI


def _edge_ratio(num: float, den: float) -> float:
    """num/den clamped into [0, 1] only against absolute float noise."""
    if num < 0.0:
        if num < -_EDGE_EPS:
            raise DomainError(f"ratio numerator {num} below 0")
        return 0.0
    if num > den:
        if num > den + _EDGE_EPS:
            raise DomainError(f"ratio {num}/{den} above 1")
        return 1.0
    if den == 0.0:
        return 0.0  # num is 0 too at this point
    return num / den


def dual_sum_exponent_best(mu: float, lam: float) -> float:
    """Decay rate with exponentially many random buckets of hit density lam."""
    a1 = 4.0 * mu - 1.0
    if a1 <= 0.0:
        raise DomainError("need mu > 1/4 for the random-bucket trade-off")
    a2 = 2.0 - 4.0 * mu
    t1 = a1 * binary_entropy(_edge_ratio(lam, a1))
    t2 = a2 * binary_entropy(_edge_ratio(2.0 * mu - lam, a2)) if a2 > _EDGE_EPS else 0.0
    return (1.0 - 2.0 * mu) * LOG2 + binary_entropy(2.0 * mu) - t1 - t2 + lam * LOG_2_OVER_PI


def lambda_star(mu: float) -> float:
    """Closed-form minimizer of the random-bucket exponent in lam."""
    if not 0.25 < mu <= 0.5:
        raise DomainError("need 1/4 < mu <= 1/2")
    c = 2.0 / math.pi
    a_coef = c + (1.0 - c) * (6.0 * mu - 1.0)
    disc = a_coef * a_coef - 8.0 * (1.0 - c) * mu * (4.0 * mu - 1.0)
    if disc < 0.0:
        raise DomainError(f"negative discriminant at mu={mu}")
    return (a_coef - math.sqrt(disc)) / (2.0 * (1.0 - c))


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-10):
    """Scalar maximizer of a unimodal f on [lo, hi]."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def pair_count_exponent_biased(mu: float, delta: float, tau: float, rho: float):
    """Exponential rate of the weighted pair count for general list density.

    Returns (value, gamma_star, at_endpoint); the inner concave maximization
    over gamma is solved by a 256-point scan refined by golden section and
    can be cross-checked against the stationarity relation
    1 = (|beta|/2) ((1-y)/y) sqrt(x/(1-x)).
    """
    if not 0.0 < rho < 1.0:
        raise DomainError("rho outside (0, 1)")
    if tau < -_EDGE_EPS or tau > delta + _EDGE_EPS:
        raise DomainError("need 0 <= tau <= delta")
    tau = min(max(tau, 0.0), delta)
    w = 1.0 - 2.0 * mu - 2.0 * tau
    if w <= 0.0:
        raise DomainError("need mu + tau < 1/2")
    base = 2.0 * (mu + tau) * LOG2 - binary_entropy(mu + delta)
    beta_abs = abs(1.0 - 2.0 * rho) / math.sqrt(rho * (1.0 - rho))
    # Both entropy arguments must land in [0, 1], which confines gamma to
    # [2(delta - tau - w), 2(delta - tau)] intersected with [0, 2(mu + tau)];
    # the interval is never empty since delta + mu <= 1.
    gamma_lo = max(0.0, 2.0 * (delta - tau - w))
    gamma_hi = min(2.0 * (mu + tau), 2.0 * (delta - tau))

    def objective(g: float) -> float:
        v = 2.0 * (mu + tau) * binary_entropy(_edge_ratio(g, 2.0 * (mu + tau)))
        v += w * binary_entropy(_edge_ratio(delta - tau - g / 2.0, w))
        if g > 0.0:
            if beta_abs == 0.0:
                return -math.inf
            v += g * math.log(beta_abs / 2.0)
        return v

    if gamma_hi <= gamma_lo + _EDGE_EPS or (beta_abs == 0.0 and gamma_lo <= 0.0):
        # gamma pinned: empty interior, or zero bias weight kills any g > 0.
        return base + objective(gamma_lo), gamma_lo, True

    grid = 256
    best_i, best_v = 0, objective(gamma_lo)
    for i in range(1, grid + 1):
        g = gamma_lo + (gamma_hi - gamma_lo) * i / grid
        v = objective(g)
        if v > best_v:
            best_i, best_v = i, v
    lo = gamma_lo + (gamma_hi - gamma_lo) * max(best_i - 1, 0) / grid
    hi = gamma_lo + (gamma_hi - gamma_lo) * min(best_i + 1, grid) / grid
    g_star, v_star = golden_section_max(objective, lo, hi)
    if v_star < best_v:
        g_star = gamma_lo + (gamma_hi - gamma_lo) * best_i / grid
        v_star = best_v
    at_end = abs(g_star - gamma_lo) < 1e-9 or abs(g_star - gamma_hi) < 1e-9
    return base + v_star, g_star, at_end


def stationarity_residual(mu: float, delta: float, tau: float, rho: float, gamma: float) -> float:
    """1 - (|beta|/2)((1-y)/y) sqrt(x/(1-x)) at the given gamma."""
    x = (delta - tau - gamma / 2.0) / (1.0 - 2.0 * mu - 2.0 * tau)
    y = gamma / (2.0 * (mu + tau))
    beta_abs = abs(1.0 - 2.0 * rho) / math.sqrt(rho * (1.0 - rho))
    return 1.0 - (beta_abs / 2.0) * ((1.0 - y) / y) * math.sqrt(x / (1.0 - x))


def dual_sum_exponent_biased(mu: float, tau: float, rho: float) -> float:
    """(2mu-1)log rho + (mu+tau)log(rho/(1-rho))
    + 2(mu+tau)(4mu-1)log(|sin(rho pi)|/(rho pi))."""
    if not 0.0 < rho < 1.0:
        raise DomainError("rho outside (0, 1)")
    sinc = math.sin(rho * math.pi) / (rho * math.pi)
    return (
        (2.0 * mu - 1.0) * math.log(rho)
        + (mu + tau) * math.log(rho / (1.0 - rho))
        + 2.0 * (mu + tau) * (4.0 * mu - 1.0) * math.log(abs(sinc))
    )


def _total_exponent(mu: float, delta: float, rho: float, kind: str) -> float:
    if kind == "green":
        return pair_count_exponent(mu, delta) + dual_sum_exponent_green(mu)
    if kind == "avg":
        return pair_count_exponent(mu, delta) + dual_sum_exponent_avg(mu)
    if kind == "best":
        if mu <= 0.25:
            return math.inf
        return pair_count_exponent(mu, delta) + dual_sum_exponent_best(mu, lambda_star(mu))
    if kind == "biased":
        # tau_star = 0 throughout the regime where the bound is nonvacuous.
        value, _, _ = pair_count_exponent_biased(mu, delta, 0.0, rho)
        return value + dual_sum_exponent_biased(mu, 0.0, rho)
    raise DomainError(f"unknown bound kind {kind!r}")


def feasible(mu: float, delta: float, rho: float, bound_kind: str,
             margin: float = FEAS_MARGIN) -> bool:
    """True iff the exponent sum for the given bound sits strictly below
    -margin, i.e. the correction terms decay exponentially."""
    if bound_kind not in BOUND_KINDS:
        raise DomainError(f"unknown bound kind {bound_kind!r}")
    if bound_kind != "biased" and abs(rho - 0.5) > 1e-12:
        raise DomainError(f"bound kind {bound_kind!r} is for rho = 1/2")
    if delta < -_EDGE_EPS or delta > delta_cap(mu, rho, bound_kind) + _EDGE_EPS:
        raise DomainError(f"delta={delta} outside [0, cap]")
    return _total_exponent(mu, max(delta, 0.0), rho, bound_kind) < -margin


def delta_cap(mu: float, rho: float, bound_kind: str) -> float:
    cap = 0.5 - mu if bound_kind != "biased" else 1.0 - rho - mu
    return max(cap, 0.0)


def delta_max(mu: float, rho: float, bound_kind: str, scan: int = 256,
              tol: float = 1e-6) -> float:
    """Largest feasible delta in [0, cap]; 0 when no positive delta works.

    Feasibility must form a prefix interval in delta on the scan grid (the
    pair-count exponent increases with delta); any violation aborts.
    """
    cap = delta_cap(mu, rho, bound_kind)
    if cap <= 0.0:
        return 0.0
    flags = [feasible(mu, cap * i / scan, rho, bound_kind) for i in range(scan + 1)]
    if not flags[0]:
        if any(flags):
            raise _scan_violation(mu, rho, bound_kind, flags)
        return 0.0
    if all(flags):
        return cap
    first_bad = flags.index(False)
    if any(flags[first_bad:]):
        raise _scan_violation(mu, rho, bound_kind, flags)
    lo = cap * (first_bad - 1) / scan
    hi = cap * first_bad / scan
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if feasible(mu, mid, rho, bound_kind):
            lo = mid
        else:
            hi = mid
    return lo


def _scan_violation(mu, rho, kind, flags):
    from .errors import IdentityViolationError

    return IdentityViolationError(
        f"feasibility is not an interval in delta at mu={mu} rho={rho} kind={kind}: {flags}"
    )


@dataclass(frozen=True)
class ThresholdResult:
    bound_kind: str
    rho: float
    two_mu0: float | None
    two_mu1: float | None
    witness: dict
    status: str  # "ok" or "no finite threshold"


def _mu_cap(rho: float, bound_kind: str) -> float:
    if bound_kind == "biased":
        return min(0.5, 1.0 - rho)
    return 0.5


def _bisect_threshold(pred, lo: float, hi: float, tol: float) -> float | None:
    """Smallest point where pred flips to True on [lo, hi]; None if never.

    Asserts a single False->True transition on a coarse scan first.
    """
    grid = 128
    flags = [pred(lo + (hi - lo) * i / grid) for i in range(grid + 1)]
    if not any(flags):
        return None
    first = flags.index(True)
    if not all(flags[first:]):
        from .errors import IdentityViolationError

        raise IdentityViolationError("threshold predicate is not monotone in mu")
    if first == 0:
        return lo
    a = lo + (hi - lo) * (first - 1) / grid
    b = lo + (hi - lo) * first / grid
    while b - a > tol:
        mid = (a + b) / 2.0
        if pred(mid):
            b = mid
        else:
            a = mid
    return b


def thresholds(rho: float, bound_kind: str, tol: float = 1e-4) -> ThresholdResult:
    """Improvement threshold (smallest rate with a feasible delta > 0) and
    saturation threshold (smallest rate feasible at delta = cap), as rates
    2*mu, each located by bisection."""
    if bound_kind not in BOUND_KINDS:
        raise DomainError(f"unknown bound kind {bound_kind!r}")
    mu_hi = _mu_cap(rho, bound_kind)
    if mu_hi <= 0.0:
        return ThresholdResult(bound_kind, rho, None, None, {}, "no finite threshold")

    def pred0(mu: float) -> bool:
        return feasible(mu, 0.0, rho, bound_kind)

    def pred1(mu: float) -> bool:
        return feasible(mu, delta_cap(mu, rho, bound_kind), rho, bound_kind)

    lo = 1e-6
    hi = mu_hi - 1e-6  # stay off the degenerate mu = cap endpoint
    mu0 = _bisect_threshold(pred0, lo, hi, tol / 2.0)
    mu1 = _bisect_threshold(pred1, lo, hi, tol / 2.0)
    if mu0 is None and mu1 is None:
        return ThresholdResult(bound_kind, rho, None, None, {}, "no finite threshold")
    witness = {}
    if mu1 is not None:
        witness = {
            "delta": delta_cap(mu1, rho, bound_kind),
            "lambda": lambda_star(mu1) if bound_kind == "best" and mu1 > 0.25 else 0.0,
            "gamma": (
                pair_count_exponent_biased(mu1, delta_cap(mu1, rho, "biased"), 0.0, rho)[1]
                if bound_kind == "biased"
                else 0.0
            ),
        }
    return ThresholdResult(
        bound_kind, rho,
        2.0 * mu0 if mu0 is not None else None,
        2.0 * mu1 if mu1 is not None else None,
        witness, "ok",
    )


# ---------- tau monotonicity analysis ----------

def tau_derivative_factor(rho: float, x: float) -> float:
    """f_rho(x) = (|1-2rho|/sqrt(rho(1-rho)) sqrt(x/(1-x)) + 2)^2
    * (rho/(1-rho)) x(1-x)."""
    if not 0.0 < x < 1.0:
        raise DomainError("x outside (0, 1)")
    beta_abs = abs(1.0 - 2.0 * rho) / math.sqrt(rho * (1.0 - rho))
    return (beta_abs * math.sqrt(x / (1.0 - x)) + 2.0) ** 2 * (rho / (1.0 - rho)) * x * (1.0 - x)


def biased_mu_floor(rho: float) -> float:
    """Smallest half-rate at which the biased bound is nonvacuous (numeric
    fit to the phase-diagram boundary): 0.31 + (rho - 0.5)/12."""
    return 0.31 + (rho - 0.5) / 12.0


def x_cap(rho: float, mu: float) -> float:
    """(1-rho-mu)/(1-2mu), the largest entropy argument reached along the
    optimal path when rho > 1/2."""
    return (1.0 - rho - mu) / (1.0 - 2.0 * mu)


def f_bar(rho: float) -> float:
    """|sin(rho pi)/(rho pi)|^(2(4 mu_bar - 1)) f_rho(x_cap(rho, mu_bar))."""
    mb = biased_mu_floor(rho)
    sinc = abs(math.sin(rho * math.pi) / (rho * math.pi))
    return sinc ** (2.0 * (4.0 * mb - 1.0)) * tau_derivative_factor(rho, x_cap(rho, mb))


def f_bar_max(lo: float = 0.5, hi: float = 0.67, scan: int = 512):
    """(rho_star, f_bar(rho_star)) over [lo, hi]."""
    best_i = max(range(scan + 1), key=lambda i: f_bar(lo + (hi - lo) * i / scan))
    a = lo + (hi - lo) * max(best_i - 1, 0) / scan
    b = lo + (hi - lo) * min(best_i + 1, scan) / scan
    return golden_section_max(f_bar, a, b)


def tau_star_analysis(rho: float, grid: int = 400) -> dict:
    """Grid study of f_rho plus the f_bar certificate quantities."""
    xs = [(i + 1) / (grid + 2) for i in range(grid + 1)]
    curve = [(x, tau_derivative_factor(rho, x)) for x in xs]
    argmax_expected = 1.0 - rho if rho <= 0.5 else rho
    grid_best = max(curve, key=lambda t: t[1])
    report = {
        "rho": rho,
        "f_rho_curve": curve,
        "argmax_expected": argmax_expected,
        "max_location": grid_best[0],
        "argmax_certified": abs(grid_best[0] - argmax_expected) <= 2.0 / grid,
        "f_rho_at_expected": tau_derivative_factor(rho, argmax_expected),
    }
    if rho > 0.5:
        report["mu_floor"] = biased_mu_floor(rho)
        report["g_rho"] = x_cap(rho, biased_mu_floor(rho))
        report["f_bar"] = f_bar(rho)
    return report


def improvement_possible(rho: float, scan: int = 400, margin: float = FEAS_MARGIN) -> bool:
    """Whether the biased bound admits any mu with a feasible delta > 0.

    At delta = 0 the inner maximization is pinned at gamma = 0, so the
    exponent sum collapses to 2 mu log 2 - H(mu) + the dual-sum rate.
    """
    mu_hi = min(0.5, 1.0 - rho)

    def expo(mu: float) -> float:
        value, _, _ = pair_count_exponent_biased(mu, 0.0, 0.0, rho)
        return value + dual_sum_exponent_biased(mu, 0.0, rho)

    mus = [mu_hi * (i + 1) / (scan + 2) for i in range(scan + 1)]
    vals = [expo(mu) for mu in mus]
    i = min(range(len(vals)), key=vals.__getitem__)
    lo = mus[max(i - 1, 0)]
    hi = mus[min(i + 1, len(mus) - 1)]
    _, neg = golden_section_max(lambda mu: -expo(mu), lo, hi)
    return min(vals[i], -neg) < -margin


def improvement_density_boundary(tol: float = 5e-4) -> float:
    """Largest list density at which the biased bound still improves on the
    baseline curve, located by bisection of improvement_possible."""
    lo, hi = 0.5, 0.9
    if not improvement_possible(lo):
        raise DomainError("no improvement even at rho = 1/2")
    while improvement_possible(hi):
        hi += 0.05
        if hi >= 0.99:
            raise DomainError("improvement persists to rho ~ 1")
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if improvement_possible(mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


# ---------- figure data ----------

def _improved_curve_value(two_mu: float, kind: str) -> float:
    mu = two_mu / 2.0
    dm = delta_max(mu, 0.5, kind)
    return semicircle_law(0.5, mu + dm)


def curve_series(figure_id: int, grid_size: int, rho: float | None = None):
    """Columnar data behind the four figures; returns (header, rows)."""
    if figure_id == 1:
        header = ["two_mu", "scl", "green", "avg", "best"]
        rows = []
        for i in range(grid_size):
            two_mu = i / (grid_size - 1) if grid_size > 1 else 0.5
            mu = two_mu / 2.0
            rows.append([
                two_mu,
                semicircle_law(0.5, mu),
                _improved_curve_value(two_mu, "green"),
                _improved_curve_value(two_mu, "avg"),
                _improved_curve_value(two_mu, "best"),
            ])
        return header, rows
    if figure_id == 2:
        header = ["rho", "two_mu0_biased", "two_mu1_biased_raw", "two_mu1_biased_repaired"]
        rows = []
        running_min = math.inf
        for i in range(grid_size):
            r = 0.05 + (0.80 - 0.05) * i / (grid_size - 1) if grid_size > 1 else 0.5
            res = thresholds(r, "biased")
            if res.two_mu0 is None or res.two_mu1 is None:
                continue
            running_min = min(running_min, res.two_mu1)
            rows.append([r, res.two_mu0, res.two_mu1, running_min])
        return header, rows
    if figure_id == 3:
        if rho is None:
            raise DomainError("figure 3 needs a density rho")
        header = ["rho", "two_mu", "scl_rho", "improved", "delta_star", "tau_star", "gamma_star"]
        rows = []
        for i in range(grid_size):
            two_mu = i / (grid_size - 1) if grid_size > 1 else 0.5
            mu = two_mu / 2.0
            dm = delta_max(mu, rho, "biased") if mu < min(0.5, 1.0 - rho) else 0.0
            tau_s, gamma_s = 0.0, 0.0
            if dm > 0.0:
                tau_s = _tau_argmax(mu, dm, rho)
                _, gamma_s, _ = pair_count_exponent_biased(mu, dm, tau_s, rho)
            rows.append([
                rho, two_mu, semicircle_law(rho, mu),
                semicircle_law(rho, mu + dm), dm, tau_s, gamma_s,
            ])
        return header, rows
    if figure_id == 4:
        if rho is not None:
            header = ["x_or_rho", "f_rho_at_x"]
            rows = [
                [x, tau_derivative_factor(rho, x)]
                for x in ((i + 1) / (grid_size + 1) for i in range(grid_size))
            ]
            return header, rows
        header = ["x_or_rho", "f_bar"]
        rows = []
        for i in range(grid_size):
            r = 0.5 + (0.67 - 0.5) * i / (grid_size - 1) if grid_size > 1 else 0.56
            rows.append([r, f_bar(r)])
        return header, rows
    raise DomainError(f"unknown figure id {figure_id}")


def _tau_argmax(mu: float, delta: float, rho: float, scan: int = 64) -> float:
    def total(tau: float) -> float:
        value, _, _ = pair_count_exponent_biased(mu, delta, tau, rho)
        return value + dual_sum_exponent_biased(mu, tau, rho)

    hi = min(delta, (1.0 - 2.0 * mu) / 2.0 - 1e-9)
    if hi <= 0.0:
        return 0.0
    taus = [hi * i / scan for i in range(scan + 1)]
    vals = [total(t) for t in taus]
    i = max(range(len(vals)), key=vals.__getitem__)
    if i == 0:
        return 0.0
    lo = taus[max(i - 1, 0)]
    up = taus[min(i + 1, scan)]
    t_star, _ = golden_section_max(total, lo, up)
    return t_star
