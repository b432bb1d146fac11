"""Explicit polynomial families: permanents, diagonal powers, random CNF sums.

Random families draw from numpy's PCG64 raw 64-bit stream; bounded integers
are produced here by rejection sampling, so fixtures depend only on the PCG64
bit stream and not on numpy's higher-level sampling code.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from .algebra import MULTILINEAR, QQ, STANDARD, Polynomial, derive_mask, mask_of, parse_polynomial
from .errors import BudgetExceededError

MAX_PERMANENT = 7
KINDS = ("permanent", "diagonal_power", "random_deg3", "goldreich_like", "toy_example", "custom")


class Rng:
    """Seeded 64-bit generator with portable bounded sampling."""

    def __init__(self, seed: int):
        self._bits = np.random.PCG64(int(seed))

    def u64(self) -> int:
        return int(self._bits.random_raw())

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)``."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.u64()
            if x < limit:
                return x % bound

    def bit(self) -> int:
        return self.u64() >> 63

    def sample(self, population: int, k: int) -> list:
        """``k`` distinct values from ``range(population)``, in draw order."""
        if k > population:
            raise ValueError("sample larger than population")
        pool = list(range(population))
        for i in range(k):
            j = i + self.below(population - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]

    def shuffle(self, items: list) -> list:
        items = list(items)
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items


# -----------------------------
# Family specs
# -----------------------------

@dataclass(frozen=True)
class FamilySpec:
    """``kind`` plus its size parameters; together with ``seed`` they fix the polynomial."""

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params), "seed": self.seed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "FamilySpec":
        return cls(d["kind"], dict(d.get("params", {})), int(d.get("seed", 0)))

    @classmethod
    def from_json(cls, text: str) -> "FamilySpec":
        return cls.from_dict(json.loads(text))

    def __hash__(self):
        return hash(self.to_json())

    @property
    def label(self) -> str:
        return {
            "permanent": f"perm_{self.params.get('d')}x{self.params.get('d')}",
            "diagonal_power": f"Diagonal (sum x_i^{self.params.get('e', 4)})",
            "random_deg3": "RandDeg3",
            "goldreich_like": "Goldreich-like",
            "toy_example": "toy x1*x2 + x2*x3",
            "custom": "custom",
        }[self.kind]

    def input_size(self) -> int:
        """Number of variables of the family (``d^2`` for permanents)."""
        if self.kind == "permanent":
            return self.params["d"] ** 2
        if self.kind == "toy_example":
            return 3
        if self.kind == "custom":
            return parse_polynomial(self.params["poly"]).n
        return self.params["n"]


def build_family(spec: FamilySpec, field_=QQ) -> Polynomial:
    """Instantiate the polynomial described by ``spec``."""
    k, prm = spec.kind, spec.params
    if k == "permanent":
        return permanent(prm["d"], field_)
    if k == "diagonal_power":
        return diagonal_power(prm["n"], prm.get("e", 4), field_)
    if k == "random_deg3":
        return random_deg3(prm["n"], prm.get("clauses", prm["n"]), spec.seed, field_)
    if k == "goldreich_like":
        return goldreich_like(prm["n"], prm.get("locality", 5), spec.seed,
                              prm.get("count"), field_)
    if k == "toy_example":
        return toy_example(field_)
    return parse_polynomial(prm["poly"], prm.get("n"), prm.get("mode", MULTILINEAR), field_)


# -----------------------------
# Algebraic families
# -----------------------------

def perm_var(d: int, i: int, j: int) -> int:
    """Index of ``x_{i,j}`` (0-based row/column) in a ``d x d`` variable matrix."""
    return i * d + j


def permanent(d: int, field_=QQ) -> Polynomial:
    """``Perm_d = sum over permutations pi of prod_i x_{i, pi(i)}`` (multilinear)."""
    if d < 1:
        raise ValueError("matrix dimension must be >= 1")
    if d > MAX_PERMANENT:
        raise BudgetExceededError(f"permanent of size {d} has {d}! terms; cap is d <= {MAX_PERMANENT}")
    one = field_.one
    terms = {mask_of(perm_var(d, i, pi[i]) for i in range(d)): one
             for pi in itertools.permutations(range(d))}
    return Polynomial(d * d, terms, MULTILINEAR, field_)


def sub_permanent_generators(d: int, kappa: int, field_=QQ) -> list:
    """``d_R Perm_d`` for every ``R`` of size ``kappa``, differentiating ``x_{i,i}`` (i in R).

    Each result is the permanent of the minor on rows/columns outside ``R``.
    Returned as ``[(R, polynomial), ...]`` in lexicographic order of ``R``.
    """
    if not 0 <= kappa <= d:
        raise ValueError("need 0 <= kappa <= d")
    P = permanent(d, field_)
    out = []
    for R in itertools.combinations(range(d), kappa):
        out.append((R, derive_mask(P, mask_of(perm_var(d, i, i) for i in R))))
    return out


def diagonal_marker(d: int, R: Sequence[int]) -> int:
    """Bitmask of ``prod_{i not in R} x_{i,i}``."""
    return mask_of(perm_var(d, i, i) for i in range(d) if i not in set(R))


def permanent_lower_bound(d: int) -> int:
    """``C(d, floor(d/2))``, the guaranteed rank at ``kappa = floor(d/2)``, ``ell = 0``."""
    return comb(d, d // 2)


def diagonal_power(n: int, e: int = 4, field_=QQ) -> Polynomial:
    """``sum_i x_i^e`` in the standard ring."""
    if e < 1:
        raise ValueError("exponent must be >= 1")
    terms = {}
    for i in range(n):
        exps = [0] * n
        exps[i] = e
        terms[tuple(exps)] = 1
    return Polynomial(n, terms, STANDARD, field_)


def toy_example(field_=QQ) -> Polynomial:
    """``x1*x2 + x2*x3``."""
    return Polynomial(3, {0b011: 1, 0b110: 1}, MULTILINEAR, field_)


# -----------------------------
# Boolean families
# -----------------------------

def clause_polynomial(n: int, clause: Sequence[int], field_=QQ) -> Polynomial:
    """Arithmetize ``l1 or l2 or ...`` as ``1 - prod(1 - lit)``.

    Literals are signed 1-based variable numbers (DIMACS style): ``+i`` is
    ``x_i``, ``-i`` is ``1 - x_i``.
    """
    one = Polynomial.constant(n, 1, MULTILINEAR, field_)
    prod = one
    for lit in clause:
        x = Polynomial.variable(n, abs(lit) - 1, MULTILINEAR, field_)
        prod = prod * (one - x if lit > 0 else x)
    return one - prod


def cnf_polynomial(n: int, clauses: Sequence[Sequence[int]], field_=QQ) -> Polynomial:
    """Sum of arithmetized clauses."""
    total = Polynomial.zero(n, MULTILINEAR, field_)
    for c in clauses:
        total = total + clause_polynomial(n, c, field_)
    return total


def random_deg3_clauses(n: int, clause_count: int, seed: int, planted=None) -> list:
    """Random width-3 clauses over ``n`` variables.

    With a ``planted`` 0/1 assignment, clauses falsified by it are redrawn so
    the planted assignment satisfies the formula.
    """
    if n < 3 and clause_count:
        raise ValueError("width-3 clauses need n >= 3")
    rng = Rng(seed)
    out = []
    while len(out) < clause_count:
        vs = sorted(rng.sample(n, 3))
        lits = [v + 1 if rng.bit() else -(v + 1) for v in vs]
        if planted is not None and not any(
                (planted[abs(l) - 1] == 1) == (l > 0) for l in lits):
            continue
        out.append(lits)
    return out


def random_deg3(n: int, clause_count: int, seed: int, field_=QQ) -> Polynomial:
    """Sum of arithmetized random 3-clauses (multilinear, degree <= 3)."""
    return cnf_polynomial(n, random_deg3_clauses(n, clause_count, seed), field_)


def xor_and_value(bits: Sequence[int]) -> int:
    """XOR-AND predicate ``b1 ^ ... ^ b_{k-2} ^ (b_{k-1} & b_k)``."""
    acc = 0
    for b in bits[:-2]:
        acc ^= b
    return acc ^ (bits[-2] & bits[-1])


def xor_and_polynomial(n: int, variables: Sequence[int], field_=QQ) -> Polynomial:
    """Multilinear form of the XOR-AND predicate on the given 0-based variables."""
    if len(variables) < 2:
        raise ValueError("XOR-AND needs at least two inputs")
    xs = [Polynomial.variable(n, v, MULTILINEAR, field_) for v in variables]
    acc = xs[-2] * xs[-1]
    for x in xs[:-2]:
        acc = acc + x - (acc * x).scale(2)
    return acc


def goldreich_tuples(n: int, locality: int, seed: int, count: int = None) -> list:
    """Seeded random variable tuples (0-based), one per predicate."""
    if count is None:
        count = n
    if count and locality > n:
        raise ValueError("locality exceeds number of variables")
    rng = Rng(seed)
    return [tuple(rng.sample(n, locality)) for _ in range(count)]


def goldreich_like(n: int, locality: int = 5, seed: int = 0, count: int = None,
                   field_=QQ) -> Polynomial:
    """Sum of XOR-AND predicates on ``count`` (default ``n``) random ``locality``-tuples."""
    total = Polynomial.zero(n, MULTILINEAR, field_)
    for tup in goldreich_tuples(n, locality, seed, count):
        total = total + xor_and_polynomial(n, tup, field_)
    return total


def planted_assignment(n: int, seed: int) -> list:
    rng = Rng(seed ^ 0x5EED)
    return [rng.bit() for _ in range(n)]
