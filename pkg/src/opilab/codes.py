"""Prime-field arithmetic, MDS code construction, dual enumeration, and the
brute-force satisfaction oracle.

Everything here is exact: matrices are tuples of ints reduced mod p, the
oracle histogram is computed over the full solution space, and moment
comparisons use rational arithmetic.  Enumerations are chunked through
numpy for speed but their results do not depend on the chunking.
"""

from __future__ import annotations

import json
import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError, DomainError

DEFAULT_ENUM_BUDGET = 10_000_000
_CHUNK = 1 << 16

# Witnesses making Miller-Rabin deterministic below 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def enumeration_budget(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    env = os.environ.get("OPILAB_BUDGET")
    return int(env) if env else DEFAULT_ENUM_BUDGET


def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin for the desk-scale range."""
    if p < 2:
        return False
    for w in _MR_WITNESSES:
        if p == w:
            return True
        if p % w == 0:
            return False
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldCtx:
    """The prime field F_p."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)


def _nullspace_mod_p(rows: list[list[int]], width: int, p: int) -> list[tuple[int, ...]]:
    """Basis of {y : M y = 0} for M given as rows of length `width`, mod p."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    pivots = []
    rank = 0
    for col in range(width):
        piv = next((r for r in range(rank, nrows) if mat[r][col] % p), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], p - 2, p)
        mat[rank] = [v * inv % p for v in mat[rank]]
        for r in range(nrows):
            if r != rank and mat[r][col] % p:
                f = mat[r][col]
                mat[r] = [(v - f * w) % p for v, w in zip(mat[r], mat[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        y = [0] * width
        y[fc] = 1
        for r, pc in enumerate(pivots):
            y[pc] = (-mat[r][fc]) % p
        basis.append(tuple(y))
    return basis


def _det_mod_p(rows: list[list[int]], p: int) -> int:
    mat = [list(r) for r in rows]
    n = len(mat)
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if mat[r][col] % p), None)
        if piv is None:
            return 0
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det % p
        det = det * mat[col][col] % p
        inv = pow(mat[col][col], p - 2, p)
        for r in range(col + 1, n):
            if mat[r][col] % p:
                f = mat[r][col] * inv % p
                mat[r] = [(v - f * w) % p for v, w in zip(mat[r], mat[col])]
    return det


def _mds_check(B, p: int, exhaustive_cutoff: int = 12, samples: int = 200, seed: int = 0):
    """Every n-row minor of the m x n matrix B must be invertible mod p.

    Exhaustive up to `exhaustive_cutoff` rows, seeded random sampling above.
    """
    m, n = len(B), len(B[0])
    import itertools

    if m <= exhaustive_cutoff:
        rowsets = itertools.combinations(range(m), n)
    else:
        rng = random.Random(seed)
        rowsets = (tuple(sorted(rng.sample(range(m), n))) for _ in range(samples))
    for rows in rowsets:
        if _det_mod_p([list(B[i]) for i in rows], p) == 0:
            raise DomainError(f"rows {rows} are dependent: matrix is not MDS")


@dataclass(frozen=True)
class MdsCode:
    """Length-m dimension-n MDS code over F_p, columnspan of the m x n matrix B."""

    ctx: FieldCtx
    m: int
    n: int
    B: tuple[tuple[int, ...], ...]
    eval_points: tuple[int, ...] | None
    dual_basis: tuple[tuple[int, ...], ...]

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def dual_dim(self) -> int:
        return self.m - self.n

    @property
    def d_perp(self) -> int:
        # Singleton equality on the dual of an MDS code.
        return self.n + 1


def make_code(ctx: FieldCtx, B, eval_points=None) -> MdsCode:
    """Build an MdsCode from an explicit generator matrix, verifying MDS."""
    p = ctx.p
    B = tuple(tuple(v % p for v in row) for row in B)
    m, n = len(B), len(B[0])
    if not 1 <= n <= m:
        raise DomainError(f"need 1 <= n <= m, got n={n} m={m}")
    if any(len(row) != n for row in B):
        raise DomainError("ragged generator matrix")
    # Alphabet-size bound for nontrivial MDS codes.
    if 2 <= n <= m - 2 and p < max(m - n + 1, n - 1):
        raise DomainError(f"no [{m},{n}] MDS code exists over F_{p}")
    _mds_check(B, p)
    dual = _nullspace_mod_p([[B[i][j] for i in range(m)] for j in range(n)], m, p)
    if len(dual) != m - n:
        raise DomainError("dual dimension mismatch")
    for y in dual:
        for j in range(n):
            if sum(B[i][j] * y[i] for i in range(m)) % p:
                raise DomainError("dual basis fails B^T y = 0")
    return MdsCode(ctx, m, n, B, tuple(eval_points) if eval_points else None, tuple(dual))


def make_rs_code(ctx: FieldCtx, m: int, n: int, eval_points=None) -> MdsCode:
    """Reed-Solomon code on distinct evaluation points; B[i][j] = a_i^j.

    Defaults to consecutive points 0..m-1; any distinct choice is as good.
    """
    p = ctx.p
    if eval_points is None:
        eval_points = list(range(m))
    pts = [a % p for a in eval_points]
    if len(pts) != m:
        raise DomainError(f"need {m} evaluation points, got {len(pts)}")
    if len(set(pts)) != m:
        raise DomainError("duplicate evaluation points")
    if not 1 <= n <= m:
        raise DomainError(f"need 1 <= n <= m, got n={n} m={m}")
    if m > p:
        raise DomainError(f"m={m} exceeds field size p={p}")
    B = [[pow(a, j, p) for j in range(n)] for a in pts]
    return make_code(ctx, B, eval_points=pts)


@dataclass(frozen=True)
class InputLists:
    """Constraint sets S_1..S_m, all of the same size rho*p."""

    p: int
    sets: tuple[tuple[int, ...], ...]
    rho: Fraction

    @property
    def m(self) -> int:
        return len(self.sets)


def make_lists(p: int, sets) -> InputLists:
    canon = []
    size = None
    for s in sets:
        t = tuple(sorted(set(int(v) for v in s)))
        if len(t) != len(list(s)):
            raise DomainError("list elements must be distinct")
        if not t:
            raise DomainError("empty constraint set (rho must be positive)")
        if t[0] < 0 or t[-1] >= p:
            raise DomainError("list element outside [0, p)")
        if size is None:
            size = len(t)
        elif len(t) != size:
            raise DomainError("all lists must share a common size")
        canon.append(t)
    return InputLists(p, tuple(canon), Fraction(size, p))


def random_lists(p: int, m: int, size: int, seed: int) -> InputLists:
    rng = random.Random(seed)
    return make_lists(p, [rng.sample(range(p), size) for _ in range(m)])


def lists_to_json(lists: InputLists) -> str:
    return json.dumps({"p": lists.p, "sets": [list(s) for s in lists.sets]})


def lists_from_json(text: str) -> InputLists:
    obj = json.loads(text)
    return make_lists(int(obj["p"]), obj["sets"])


def code_to_json(code: MdsCode) -> str:
    if code.eval_points is None:
        raise DomainError("only Reed-Solomon codes have a JSON form")
    return json.dumps(
        {"p": code.p, "m": code.m, "n": code.n, "eval_points": list(code.eval_points)}
    )


def code_from_json(text: str) -> MdsCode:
    obj = json.loads(text)
    return make_rs_code(FieldCtx(int(obj["p"])), int(obj["m"]), int(obj["n"]),
                        obj["eval_points"])


def _digit_block(p: int, n: int, start: int, stop: int) -> np.ndarray:
    """Columns start..stop of the lexicographic enumeration of F_p^n."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((n, stop - start), dtype=np.int64)
    for row in range(n):
        out[row] = (idx // p ** (n - 1 - row)) % p
    return out


def _index_to_vector(p: int, n: int, idx: int) -> tuple[int, ...]:
    digits = []
    for row in range(n):
        digits.append(idx // p ** (n - 1 - row) % p)
    return tuple(digits)


@dataclass(frozen=True)
class SatisfactionProfile:
    """Exact histogram of the satisfied-constraint count over all solutions."""

    m: int
    p: int
    n: int
    histogram: tuple[int, ...]  # index t -> #{x : exactly t constraints satisfied}
    best_x: tuple[int, ...]
    s_max: Fraction

    @property
    def total(self) -> int:
        return self.p ** self.n


def brute_force_opi(code: MdsCode, lists: InputLists, budget: int | None = None) -> SatisfactionProfile:
    """Enumerate all p^n solutions; ties in the argmax go to the
    lexicographically smallest x."""
    p, m, n = code.p, code.m, code.n
    if lists.p != p or lists.m != m:
        raise DomainError("lists do not match the code")
    total = p ** n
    if total > enumeration_budget(budget):
        raise BudgetExceededError(f"p^n = {total} exceeds budget")
    member = np.zeros((m, p), dtype=bool)
    for i, s in enumerate(lists.sets):
        member[i, list(s)] = True
    Bmat = np.array(code.B, dtype=np.int64)
    hist = np.zeros(m + 1, dtype=np.int64)
    best_count, best_idx = -1, -1
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        X = _digit_block(p, n, start, stop)
        vals = (Bmat @ X) % p
        sat = member[np.arange(m)[:, None], vals].sum(axis=0)
        hist += np.bincount(sat, minlength=m + 1)
        loc = int(np.argmax(sat))
        if sat[loc] > best_count:
            best_count = int(sat[loc])
            best_idx = start + loc
    return SatisfactionProfile(
        m=m, p=p, n=n,
        histogram=tuple(int(v) for v in hist),
        best_x=_index_to_vector(p, n, best_idx),
        s_max=Fraction(best_count, m),
    )


def dual_codewords(code: MdsCode, budget: int | None = None):
    """Yield chunks of dual codewords as (m x chunk) arrays, all p^{m-n} of them."""
    p, m = code.p, code.m
    k = code.dual_dim
    total = p ** k
    if total > enumeration_budget(budget):
        raise BudgetExceededError(f"p^(m-n) = {total} exceeds budget")
    D = np.array(code.dual_basis, dtype=np.int64)  # k x m
    if k == 0:
        yield np.zeros((m, 1), dtype=np.int64)
        return
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        C = _digit_block(p, k, start, stop)
        yield (D.T @ C) % p


def enumerate_dual_by_weight(code: MdsCode, t: int, budget: int | None = None):
    """All dual codewords of Hamming weight exactly t."""
    out = []
    for Y in dual_codewords(code, budget):
        w = (Y != 0).sum(axis=0)
        sel = Y[:, w == t]
        out.extend(tuple(int(v) for v in sel[:, j]) for j in range(sel.shape[1]))
    return out


def min_dual_weight(code: MdsCode, budget: int | None = None) -> int:
    best = code.m + 1
    for Y in dual_codewords(code, budget):
        w = (Y != 0).sum(axis=0)
        nz = w[w > 0]
        if nz.size:
            best = min(best, int(nz.min()))
    return best


def binomial_moment(m: int, rho: Fraction, j: int) -> Fraction:
    """Exact j-th moment of Bin(m, rho)."""
    weights = binomial_weights(m, rho)
    return sum(w * Fraction(t) ** j for t, w in enumerate(weights))


def binomial_weights(m: int, rho: Fraction) -> list[Fraction]:
    rho = Fraction(rho)
    return [math.comb(m, t) * rho**t * (1 - rho) ** (m - t) for t in range(m + 1)]


def profile_moment(profile: SatisfactionProfile, j: int) -> Fraction:
    tot = profile.total
    return sum(Fraction(c, tot) * Fraction(t) ** j for t, c in enumerate(profile.histogram))


def moments_match_check(code: MdsCode, lists: InputLists, order: int,
                        profile: SatisfactionProfile | None = None,
                        budget: int | None = None) -> bool:
    """True iff the count of satisfied constraints matches Bin(m, rho)
    moments exactly up to `order` (rational arithmetic on both sides)."""
    if profile is None:
        profile = brute_force_opi(code, lists, budget)
    for j in range(order + 1):
        if profile_moment(profile, j) != binomial_moment(code.m, lists.rho, j):
            return False
    return True
