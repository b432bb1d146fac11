"""Seeded property suites for the SPDP toolkit.

Every suite returns a :class:`SuiteResult`; a failing check records the
offending instance verbatim so it can be replayed.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import GFP, MULTILINEAR, QQ, Polynomial, format_polynomial, mask_of
from .core import BlockPartition, SpdpParams, blocked_matrix, build_matrix, rank
from .families import (Rng, diagonal_marker, permanent, permanent_lower_bound, perm_var,
                       sub_permanent_generators)
from .linalg import sparse_rank
from .localwidth import (count_profiles, default_model, enumerate_histograms,
                         realized_profiles, round_transitions, width_for)

SUITES = ("monotonicity", "invariance", "blocked", "permanent", "profiles", "oracle")


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str, **instance):
        self.failures.append({"message": message, **instance})

    def to_dict(self) -> dict:
        return {"suite": self.name, "checks": self.checks, "passed": self.passed,
                "failures": self.failures, "details": self.details}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# -----------------------------
# Random instances
# -----------------------------

def random_multilinear(n: int, rng: Rng, max_terms: int = 8, max_degree: int = 4,
                       coeff: int = 3) -> Polynomial:
    """A few random squarefree terms with small nonzero integer coefficients."""
    terms = {}
    for _ in range(1 + rng.below(max_terms)):
        deg = rng.below(min(max_degree, n) + 1)
        key = mask_of(rng.sample(n, deg))
        c = 1 + rng.below(coeff)
        terms[key] = terms.get(key, 0) + (c if rng.bit() else -c)
    return Polynomial(n, terms, MULTILINEAR)


def random_instance(seed: int, max_n: int = 8, max_kappa: int = 3, max_ell: int = 3):
    """``(p, kappa, ell)`` drawn from ``seed``; ``n`` in ``1..max_n``."""
    rng = Rng(seed)
    n = 1 + rng.below(max_n)
    p = random_multilinear(n, rng)
    return p, rng.below(max_kappa + 1), rng.below(max_ell + 1)


def random_partition(n: int, rng: Rng) -> BlockPartition:
    labels = [rng.below(max(1, n // 2) + 1) for _ in range(n)]
    blocks = {}
    for i, b in enumerate(labels):
        blocks.setdefault(b, []).append(i)
    return BlockPartition(n, tuple(tuple(b) for b in blocks.values()))


def _instance(p, kappa, ell, **extra) -> dict:
    return {"poly": format_polynomial(p), "n": p.n, "kappa": kappa, "ell": ell, **extra}


def dense_rank(rows) -> int:
    """Plain Gauss-Jordan over Fractions on dense lists (independent of the sparse path)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    r, ncols = 0, len(m[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


# -----------------------------
# Structural properties
# -----------------------------

def check_ell_monotone(p, kappa, ell, res: SuiteResult):
    """Raising the shift bound never lowers the rank."""
    g0 = rank(build_matrix(p, SpdpParams(kappa, ell))).gamma
    g1 = rank(build_matrix(p, SpdpParams(kappa, ell + 1))).gamma
    res.checks += 1
    if g0 > g1:
        res.fail("rank decreased when ell grew", **_instance(p, kappa, ell, gamma=g0, gamma_next=g1))


def check_deletion(p, kappa, ell, rng: Rng, res: SuiteResult):
    """Deleting rows or columns never raises the rank."""
    M = build_matrix(p, SpdpParams(kappa, ell))
    g = rank(M).gamma
    rows = [i for i in range(M.nrows) if rng.bit()]
    cols = [j for j in range(M.ncols) if rng.bit()]
    gs = rank(M.submatrix(rows, cols)).gamma
    res.checks += 1
    if gs > g:
        res.fail("submatrix rank exceeds full rank",
                 **_instance(p, kappa, ell, rows=rows, cols=cols, gamma=g, gamma_sub=gs))


def check_permutation(p, kappa, ell, rng: Rng, res: SuiteResult):
    perm = rng.shuffle(range(p.n))
    g = rank(build_matrix(p, SpdpParams(kappa, ell))).gamma
    gp = rank(build_matrix(p.permute(perm), SpdpParams(kappa, ell))).gamma
    res.checks += 1
    if g != gp:
        res.fail("rank changed under a variable permutation",
                 **_instance(p, kappa, ell, perm=perm, gamma=g, gamma_perm=gp))


def check_blocked(p, kappa, ell, rng: Rng, res: SuiteResult):
    B = random_partition(p.n, rng)
    M = build_matrix(p, SpdpParams(kappa, ell))
    g = rank(M).gamma
    gb = rank(blocked_matrix(M, B)).gamma
    res.checks += 1
    if gb > g:
        res.fail("blocked rank exceeds full rank",
                 **_instance(p, kappa, ell, blocks=[list(b) for b in B.blocks], gamma=g, gamma_blocked=gb))


def check_fields(p, kappa, ell, res: SuiteResult):
    M = build_matrix(p, SpdpParams(kappa, ell))
    gq = rank(M).gamma
    gp = rank(M, GFP).gamma
    res.checks += 1
    if gq != gp:
        res.fail("rational and GF(p) ranks differ", **_instance(p, kappa, ell, gamma_q=gq, gamma_p=gp))


def check_all(p, kappa, ell, seed: int, res: SuiteResult):
    """Every structural property on one instance (used by the acceptance run)."""
    rng = Rng(seed ^ 0xC0FFEE)
    check_ell_monotone(p, kappa, min(ell, 2), res)
    check_deletion(p, kappa, ell, rng, res)
    check_permutation(p, kappa, ell, rng, res)
    check_blocked(p, kappa, ell, rng, res)
    check_fields(p, kappa, ell, res)


# -----------------------------
# Suites
# -----------------------------

def suite_monotonicity(cases: int = 100, seed: int = 0) -> SuiteResult:
    res = SuiteResult("monotonicity")
    for k in range(cases):
        p, kappa, ell = random_instance(seed * 100_003 + k, max_ell=2)
        check_ell_monotone(p, kappa, ell, res)
        check_deletion(p, kappa, ell, Rng(seed + k), res)
    return res


def suite_invariance(cases: int = 100, seed: int = 0) -> SuiteResult:
    res = SuiteResult("invariance")
    for k in range(cases):
        p, kappa, ell = random_instance(seed * 100_003 + k)
        check_permutation(p, kappa, ell, Rng(seed + k), res)
    return res


def suite_blocked(cases: int = 100, seed: int = 0) -> SuiteResult:
    res = SuiteResult("blocked")
    for k in range(cases):
        p, kappa, ell = random_instance(seed * 100_003 + k)
        check_blocked(p, kappa, ell, Rng(seed + k), res)
    return res


def check_permanent(d: int, res: SuiteResult):
    """Rank bound at ``kappa = floor(d/2)``, ``ell = 0`` plus the marker-monomial argument."""
    kappa = d // 2
    P = permanent(d)
    g = rank(build_matrix(P, SpdpParams(kappa, 0))).gamma
    bound = permanent_lower_bound(d)
    res.checks += 1
    res.details[f"d={d}"] = {"kappa": kappa, "gamma": g, "bound": bound, "excess": g - bound}
    if g < bound:
        res.fail("permanent rank below C(d, floor(d/2))", d=d, gamma=g, bound=bound)
    gens = sub_permanent_generators(d, kappa)
    markers = [diagonal_marker(d, R) for R, _ in gens]
    for R, q in gens:
        res.checks += 1
        minor = [i for i in range(d) if i not in R]
        expected = {mask_of(perm_var(d, i, s) for i, s in zip(minor, sigma)): 1
                    for sigma in itertools.permutations(minor)}
        if dict(q.terms) != expected:
            res.fail("derivative is not the complementary sub-permanent", d=d, R=list(R))
        for R2, m in zip((r for r, _ in gens), markers):
            has = q.coefficient(m) != 0
            if has != (R2 == R):
                res.fail("marker monomial not unique to its derivative", d=d, R=list(R), R2=list(R2))
    # marker columns of the generator rows form an identity block
    sub = [[q.coefficient(m) for m in markers] for _, q in gens]
    res.checks += 1
    if dense_rank(sub) != len(gens):
        res.fail("marker submatrix is singular", d=d)


def suite_permanent(cases: int = 4, seed: int = 0) -> SuiteResult:
    res = SuiteResult("permanent")
    for d in range(2, 2 + min(cases, 4)):
        check_permanent(d, res)
    return res


def suite_profiles(cases: int = 0, seed: int = 0) -> SuiteResult:
    res = SuiteResult("profiles")
    for R in range(9):
        for S in range(1, 5):
            res.checks += 1
            brute = sum(1 for _ in enumerate_histograms(R, S))
            if brute != count_profiles(R, S):
                res.fail("profile count disagrees with enumeration", R=R, S_prime=S,
                         formula=count_profiles(R, S), enumerated=brute)
    model = default_model()
    for n in (2 ** 8, 2 ** 10):
        R = width_for(n)
        counts = [len(realized_profiles(model, k, R)) for k in range(2, 9)]
        res.details[f"R={R}"] = counts
        res.checks += 1
        if len(set(counts)) != 1:
            res.fail("realized profile count depends on kappa", R=R, counts=counts)
        if counts[0] > count_profiles(R, model.S_prime):
            res.fail("realized profiles exceed the histogram count", R=R, counts=counts)
    for R in range(1, 5):
        T = round_transitions(model, R)
        for k in range(1, 5):
            res.checks += 1
            got = len(realized_profiles(model, k, R))
            if got > min(count_profiles(R, model.S_prime), T ** k):
                res.fail("realized profiles exceed min(count_profiles, T^kappa)", R=R, kappa=k, realized=got)
    return res


def suite_oracle(cases: int = 50, seed: int = 0) -> SuiteResult:
    """Sparse QQ, sparse GF(p) and dense Fraction ranks agree."""
    res = SuiteResult("oracle")
    for k in range(cases):
        p, kappa, ell = random_instance(seed * 100_003 + k, max_n=6, max_kappa=2, max_ell=2)
        M = build_matrix(p, SpdpParams(kappa, ell))
        gq = sparse_rank(M.rows, QQ)
        gp = sparse_rank(M.to_field(GFP).rows, GFP)
        gd = dense_rank(M.to_dense())
        res.checks += 1
        if not gq == gp == gd:
            res.fail("rank routines disagree", **_instance(p, kappa, ell, sparse_q=gq, sparse_p=gp, dense=gd))
    return res


_RUNNERS = {
    "monotonicity": suite_monotonicity,
    "invariance": suite_invariance,
    "blocked": suite_blocked,
    "permanent": suite_permanent,
    "profiles": suite_profiles,
    "oracle": suite_oracle,
}

DEFAULT_CASES = {"monotonicity": 100, "invariance": 100, "blocked": 100, "permanent": 4,
                 "profiles": 0, "oracle": 50}


def run_suite(name: str, cases: int = None, seed: int = 0) -> SuiteResult:
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return _RUNNERS[name](DEFAULT_CASES[name] if cases is None else cases, seed)
