"""SPDP matrices: ambient basis, generating family, blocked restriction, rank.

Row ``(S, m)`` of the matrix holds the coefficients of ``m * d_S p`` in the
ambient basis of all monomials of degree ``<= D = max(0, deg p - kappa + ell)``.
Rows are ordered by the shift ``m`` (graded lex) and then by ``S`` (size,
then lex); columns follow the graded-lex order of the basis.
"""

from __future__ import annotations

import io
import itertools
import json
import os
from fractions import Fraction
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Iterator, NamedTuple

from .algebra import (
    MULTILINEAR,
    QQ,
    Monomial,
    Polynomial,
    count_monomials,
    derive_mask,
    derive_multi,
    field_from_name,
    grlex_key,
    mask_of,
    monomial_keys,
    multiply_key,
)
from .errors import BudgetExceededError
from .linalg import sparse_rank

EXACT = "exact"
CUMULATIVE = "cumulative"
CONVENTIONS = (EXACT, CUMULATIVE)

DEFAULT_BUDGET = 5_000_000


def default_budget() -> int:
    """Column cap; the ``SPDP_BUDGET`` environment variable overrides it."""
    env = os.environ.get("SPDP_BUDGET")
    if env:
        return int(float(env))
    return DEFAULT_BUDGET


@dataclass(frozen=True)
class SpdpParams:
    """Derivative order ``kappa``, shift degree bound ``ell`` and row conventions.

    ``convention`` is ``"exact"`` (|S| = kappa) or ``"cumulative"`` (|S| <= kappa).
    The ring mode is taken from the polynomial: set derivatives in multilinear
    mode, multi-index derivatives in standard mode.
    """

    kappa: int
    ell: int
    convention: str = EXACT
    drop_zero_rows: bool = False
    budget: int = None

    def __post_init__(self):
        if self.kappa < 0 or self.ell < 0:
            raise ValueError("kappa and ell must be non-negative")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}")

    @property
    def cap(self) -> int:
        return self.budget if self.budget is not None else default_budget()

    def to_dict(self) -> dict:
        return {"kappa": self.kappa, "ell": self.ell, "convention": self.convention,
                "drop_zero_rows": self.drop_zero_rows}


@dataclass(frozen=True)
class AmbientBasis:
    n: int
    mode: str
    D: int
    monomials: tuple
    index: dict = dc_field(compare=False, repr=False)

    def __len__(self):
        return len(self.monomials)

    @property
    def N(self) -> int:
        return len(self.monomials)

    def monomial(self, j: int) -> Monomial:
        return Monomial(self.n, self.monomials[j], self.mode)


def ambient_degree(p: Polynomial, params: SpdpParams) -> int:
    """``D = max(0, deg p - kappa + ell)``.

    Under the cumulative convention the smallest support is empty, so the
    cutoff is ``deg p + ell`` to hold the undifferentiated rows.
    """
    k = 0 if params.convention == CUMULATIVE else params.kappa
    return max(0, p.degree - k + params.ell)


def ambient_basis(p: Polynomial, params: SpdpParams) -> AmbientBasis:
    """All monomials of degree <= D in graded-lex order (multilinear or standard)."""
    D = ambient_degree(p, params)
    size = count_monomials(p.n, D, p.mode)
    if size > params.cap:
        raise BudgetExceededError(
            f"ambient basis has {size} monomials, above the cap of {params.cap}")
    mons = tuple(monomial_keys(p.n, D, p.mode))
    return AmbientBasis(p.n, p.mode, D, mons, {k: j for j, k in enumerate(mons)})


# -----------------------------
# Generating family
# -----------------------------

class Generator(NamedTuple):
    S: tuple          # sorted variable indices (repeats allowed in standard mode)
    m: Monomial
    poly: Polynomial


def derivative_supports(n: int, kappa: int, mode: str = MULTILINEAR,
                        convention: str = EXACT) -> list:
    """Derivative index tuples ordered by size then lex."""
    sizes = range(kappa + 1) if convention == CUMULATIVE else (kappa,)
    out = []
    for k in sizes:
        if mode == MULTILINEAR:
            out.extend(itertools.combinations(range(n), k))
        else:
            out.extend(itertools.combinations_with_replacement(range(n), k))
    return out


def shift_monomials(n: int, ell: int, mode: str = MULTILINEAR) -> list:
    return list(monomial_keys(n, ell, mode))


def _derivative(p: Polynomial, S: tuple) -> Polynomial:
    if p.mode == MULTILINEAR:
        return derive_mask(p, mask_of(S))
    alpha = [0] * p.n
    for i in S:
        alpha[i] += 1
    return derive_multi(p, alpha)


def generators(p: Polynomial, params: SpdpParams) -> Iterator[Generator]:
    """Stream ``(S, m, m * d_S p)`` in canonical row order.

    Zero generators are kept unless ``params.drop_zero_rows`` is set, so the
    default row count is ``#supports * #shifts``.
    """
    supports = derivative_supports(p.n, params.kappa, p.mode, params.convention)
    derivs = [(S, _derivative(p, S)) for S in supports]
    for key in shift_monomials(p.n, params.ell, p.mode):
        m = Monomial(p.n, key, p.mode)
        for S, d in derivs:
            if params.drop_zero_rows and d.is_zero():
                continue
            yield Generator(S, m, multiply_key(d, key))


# -----------------------------
# Matrices
# -----------------------------

@dataclass
class SpdpMatrix:
    """Sparse coefficient matrix with ``(S, m)`` row labels.

    ``columns`` lists the monomial keys of the retained columns (the whole
    ambient basis unless a blocked restriction dropped some).
    """

    labels: list
    rows: list
    columns: tuple
    basis: AmbientBasis
    params: SpdpParams
    field: object = QQ

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.columns)

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def to_dense(self) -> list:
        z = self.field.zero
        out = []
        for r in self.rows:
            line = [z] * self.ncols
            for j, v in r.items():
                line[j] = v
            out.append(line)
        return out

    def submatrix(self, row_indices: Iterable[int] = None,
                  col_indices: Iterable[int] = None) -> "SpdpMatrix":
        """Keep the given rows/columns (``None`` keeps all); columns renumber densely."""
        ri = range(self.nrows) if row_indices is None else list(row_indices)
        if col_indices is None:
            rows = [dict(self.rows[i]) for i in ri]
            cols = self.columns
        else:
            ci = list(col_indices)
            remap = {old: new for new, old in enumerate(ci)}
            rows = [{remap[j]: v for j, v in self.rows[i].items() if j in remap} for i in ri]
            cols = tuple(self.columns[j] for j in ci)
        return SpdpMatrix([self.labels[i] for i in ri], rows, cols, self.basis,
                          self.params, self.field)

    def to_field(self, field) -> "SpdpMatrix":
        conv = field.convert
        rows = []
        for r in self.rows:
            nr = {}
            for j, v in r.items():
                v = conv(v)
                if not field.is_zero(v):
                    nr[j] = v
            rows.append(nr)
        return SpdpMatrix(list(self.labels), rows, self.columns, self.basis, self.params, field)


def build_matrix(p: Polynomial, params: SpdpParams) -> SpdpMatrix:
    """Assemble ``M_{kappa,ell}(p)`` over ``p.field``."""
    basis = ambient_basis(p, params)
    index = basis.index
    labels, rows = [], []
    for g in generators(p, params):
        row = {}
        for key, c in g.poly.terms.items():
            # degree bound guarantees membership
            row[index[key]] = c
        labels.append((g.S, g.m))
        rows.append(row)
    return SpdpMatrix(labels, rows, basis.monomials, basis, params, p.field)


@dataclass(frozen=True)
class RankReport:
    gamma: int
    ambient_dim: int
    codim: int
    field: str
    rows: int
    cols: int

    def to_dict(self) -> dict:
        return {"gamma": self.gamma, "ambient_dim": self.ambient_dim, "codim": self.codim,
                "rows": self.rows, "cols": self.cols, "field": self.field}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RankReport":
        d = json.loads(text)
        return cls(d["gamma"], d["ambient_dim"], d["codim"], d["field"], d["rows"], d["cols"])


def rank(M: SpdpMatrix, field=None) -> RankReport:
    """Exact rank and codimension; ``field`` converts entries first (e.g. QQ -> GF(p))."""
    if field is not None and field != M.field:
        M = M.to_field(field)
    gamma = sparse_rank(M.rows, M.field)
    N = M.ncols
    return RankReport(gamma, N, N - gamma, str(M.field), M.nrows, M.ncols)


def codimension(p: Polynomial, params: SpdpParams, field=None) -> RankReport:
    return rank(build_matrix(p, params), field)


def spdp_rank(p: Polynomial, kappa: int, ell: int, convention: str = EXACT,
              field=None) -> int:
    """Shorthand for ``Gamma_{kappa,ell}(p)``."""
    return codimension(p, SpdpParams(kappa, ell, convention), field).gamma


# -----------------------------
# Blocked variant
# -----------------------------

@dataclass(frozen=True)
class BlockPartition:
    """Disjoint blocks covering ``range(n)``."""

    n: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen = [i for b in blocks for i in b]
        if sorted(seen) != list(range(self.n)):
            raise ValueError("blocks must be disjoint and cover range(n)")
        if any(not b for b in blocks):
            raise ValueError("empty block")

    @classmethod
    def singletons(cls, n: int) -> "BlockPartition":
        return cls(n, tuple((i,) for i in range(n)))

    @classmethod
    def contiguous(cls, n: int, size: int) -> "BlockPartition":
        return cls(n, tuple(tuple(range(i, min(i + size, n))) for i in range(0, n, size)))

    @property
    def max_block_size(self) -> int:
        return max(len(b) for b in self.blocks)

    def block_of(self, i: int) -> int:
        for j, b in enumerate(self.blocks):
            if i in b:
                return j
        raise IndexError(i)

    def block_support(self, indices: Iterable[int]) -> set:
        lookup = {i: j for j, b in enumerate(self.blocks) for i in b}
        return {lookup[i] for i in indices}


def block_local_rows(B: BlockPartition) -> Callable:
    """Default admissibility: the derivative support touches at most one block."""
    def ok(label) -> bool:
        S, _ = label
        return len(B.block_support(S)) <= 1
    return ok


def blocked_matrix(M: SpdpMatrix, B: BlockPartition, row_ok: Callable = None,
                   col_ok: Callable = None) -> SpdpMatrix:
    """Submatrix of admissible rows (``row_ok(label)``) and columns (``col_ok(key)``)."""
    row_ok = row_ok or block_local_rows(B)
    ri = [i for i, lab in enumerate(M.labels) if row_ok(lab)]
    ci = None if col_ok is None else [j for j, k in enumerate(M.columns) if col_ok(k)]
    return M.submatrix(ri, ci)


def keep_all(_label) -> bool:
    return True


def keep_none(_label) -> bool:
    return False


# -----------------------------
# Triplet export
# -----------------------------

def write_triplets(M: SpdpMatrix, fh=None) -> str:
    """``spdp <rows> <cols> <field>`` header, then ``row col value`` per nonzero."""
    out = io.StringIO() if fh is None else fh
    out.write(f"spdp {M.nrows} {M.ncols} {M.field}\n")
    for i, r in enumerate(M.rows):
        for j in sorted(r):
            out.write(f"{i} {j} {r[j]}\n")
    return out.getvalue() if fh is None else ""


def read_triplets(text: str):
    """Inverse of :func:`write_triplets`: returns ``(nrows, ncols, field, rows)``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 4 or head[0] != "spdp":
        raise ValueError("missing 'spdp <rows> <cols> <field>' header")
    nrows, ncols = int(head[1]), int(head[2])
    field = field_from_name(head[3])
    rows = [dict() for _ in range(nrows)]
    for ln in lines[1:]:
        i, j, v = ln.split()
        rows[int(i)][int(j)] = field.convert(_parse_number(v))
    return nrows, ncols, field, rows


def _parse_number(s: str):
    return Fraction(s)


def labels_text(M: SpdpMatrix) -> list:
    """Human-readable row labels, e.g. ``"d{x1} * x2"``."""
    out = []
    for S, m in M.labels:
        ds = ",".join(f"x{i + 1}" for i in S)
        out.append(f"d{{{ds}}} * {m}")
    return out


def column_labels(M: SpdpMatrix) -> list:
    return [str(Monomial(M.basis.n, k, M.basis.mode)) for k in M.columns]


def sort_rows_key(label) -> tuple:
    S, m = label
    return (grlex_key(m.key), len(S), S)
