"""Exact fields and sparse polynomials in two ring modes.

``multilinear`` mode works in F[x]/(x_i^2 - x_i): a monomial is a bitmask of
its support and products take the union of supports.  ``standard`` mode is
the ordinary polynomial ring: a monomial is a tuple of ``n`` exponents.

Variables are 0-based in the Python API and 1-based (``x1``, ``x2``, ...) in
the text format.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import IncompatibleRingError, InvalidVariableError, ParseError

MULTILINEAR = "multilinear"
STANDARD = "standard"
MODES = (MULTILINEAR, STANDARD)

# 2^62 - 57, the largest prime below 2^62.
DEFAULT_PRIME = 4611686018427387847

Key = Union[int, tuple]


# -----------------------------
# Fields
# -----------------------------

@dataclass(frozen=True)
class Rationals:
    """Arbitrary-precision rationals backed by :class:`fractions.Fraction`."""

    name = "QQ"
    characteristic = 0

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def convert(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, float):
            raise TypeError("floating-point coefficients are not exact")
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / a

    def is_zero(self, a) -> bool:
        return a == 0

    def __str__(self):
        return "QQ"


@dataclass(frozen=True)
class PrimeField:
    """GF(p) with elements stored as ints in ``[0, p)``."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("modulus must be a prime >= 2")

    @property
    def name(self) -> str:
        return f"GF({self.p})"

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def convert(self, x) -> int:
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator vanishes mod {self.p}")
            return x.numerator * pow(den, -1, self.p) % self.p
        if isinstance(x, float):
            raise TypeError("floating-point coefficients are not exact")
        return self.convert(Fraction(x))

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def __str__(self):
        return self.name


QQ = Rationals()
GFP = PrimeField(DEFAULT_PRIME)


def field_from_name(name: str):
    """Resolve ``"q"``/``"QQ"``, ``"gfp"`` or ``"GF(p)"``/``"gfp:p"``."""
    s = name.strip()
    if s.lower() in ("q", "qq", "rational", "rationals"):
        return QQ
    if s.lower() in ("gfp", "gf", "fp"):
        return GFP
    m = re.fullmatch(r"(?:GF\((\d+)\)|gfp:(\d+))", s, flags=re.IGNORECASE)
    if m:
        return PrimeField(int(m.group(1) or m.group(2)))
    raise ValueError(f"unknown field {name!r}")


# -----------------------------
# Monomials
# -----------------------------

def key_degree(key: Key) -> int:
    if isinstance(key, int):
        return key.bit_count()
    return sum(key)


def key_indices(key: Key) -> tuple:
    """Variable indices of a monomial, repeated by exponent, ascending."""
    if isinstance(key, int):
        out = []
        i = 0
        while key:
            if key & 1:
                out.append(i)
            key >>= 1
            i += 1
        return tuple(out)
    return tuple(i for i, e in enumerate(key) for _ in range(e))


def grlex_key(key: Key) -> tuple:
    """Sort key: total degree first, then lexicographic on the index tuple.

    This reproduces the order of ``itertools.combinations`` (multilinear) and
    ``itertools.combinations_with_replacement`` (standard) within a degree.
    """
    return (key_degree(key), key_indices(key))


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def monomial_keys(n: int, max_degree: int, mode: str = MULTILINEAR,
                  min_degree: int = 0) -> Iterator[Key]:
    """All monomials with ``min_degree <= deg <= max_degree`` in grlex order."""
    if mode == MULTILINEAR:
        for d in range(max(0, min_degree), min(max_degree, n) + 1):
            for combo in itertools.combinations(range(n), d):
                yield mask_of(combo)
    elif mode == STANDARD:
        for d in range(max(0, min_degree), max_degree + 1):
            for combo in itertools.combinations_with_replacement(range(n), d):
                exps = [0] * n
                for i in combo:
                    exps[i] += 1
                yield tuple(exps)
    else:
        raise ValueError(f"unknown mode {mode!r}")


def count_monomials(n: int, max_degree: int, mode: str = MULTILINEAR) -> int:
    if max_degree < 0:
        return 0
    if mode == MULTILINEAR:
        return sum(comb(n, j) for j in range(min(max_degree, n) + 1))
    return comb(n + max_degree, max_degree)


@dataclass(frozen=True)
class Monomial:
    """A monomial over ``n`` variables.

    ``key`` is a support bitmask in multilinear mode and an exponent tuple in
    standard mode.
    """

    n: int
    key: Key
    mode: str = MULTILINEAR

    def __post_init__(self):
        if self.mode == MULTILINEAR:
            if not isinstance(self.key, int) or self.key < 0 or self.key >> self.n:
                raise InvalidVariableError(f"bad multilinear monomial {self.key!r} for n={self.n}")
        elif self.mode == STANDARD:
            if len(self.key) != self.n or any(e < 0 for e in self.key):
                raise InvalidVariableError(f"bad exponent vector {self.key!r} for n={self.n}")
        else:
            raise ValueError(f"unknown mode {self.mode!r}")

    @classmethod
    def one(cls, n: int, mode: str = MULTILINEAR) -> "Monomial":
        return cls(n, 0 if mode == MULTILINEAR else (0,) * n, mode)

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int], mode: str = MULTILINEAR) -> "Monomial":
        """Product of the listed variables; repeats square in standard mode."""
        idx = list(indices)
        for i in idx:
            if not 0 <= i < n:
                raise InvalidVariableError(f"variable index {i} out of range for n={n}")
        if mode == MULTILINEAR:
            return cls(n, mask_of(idx), mode)
        exps = [0] * n
        for i in idx:
            exps[i] += 1
        return cls(n, tuple(exps), mode)

    @property
    def degree(self) -> int:
        return key_degree(self.key)

    @property
    def indices(self) -> tuple:
        return key_indices(self.key)

    def sort_key(self):
        return grlex_key(self.key)

    def __str__(self):
        return _format_key(self.key) or "1"


def _format_key(key: Key) -> str:
    if isinstance(key, int):
        return "*".join(f"x{i + 1}" for i in key_indices(key))
    parts = []
    for i, e in enumerate(key):
        if e == 1:
            parts.append(f"x{i + 1}")
        elif e > 1:
            parts.append(f"x{i + 1}^{e}")
    return "*".join(parts)


# -----------------------------
# Polynomials
# -----------------------------

class Polynomial:
    """Immutable sparse polynomial: monomial key -> nonzero field coefficient."""

    __slots__ = ("n", "mode", "field", "_terms", "_degree", "_hash")

    def __init__(self, n: int, terms: Mapping = None, mode: str = MULTILINEAR,
                 field=QQ, *, _trusted: bool = False):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.n = n
        self.mode = mode
        self.field = field
        if _trusted:
            clean = dict(terms or {})
        else:
            clean = {}
            conv = field.convert
            for key, c in (terms or {}).items():
                key = _check_key(key, n, mode)
                c = conv(c)
                if key in clean:
                    c = field.add(clean[key], c)
                if field.is_zero(c):
                    clean.pop(key, None)
                else:
                    clean[key] = c
        self._terms = clean
        self._degree = max((key_degree(k) for k in clean), default=0)
        self._hash = None

    # -- constructors --

    @classmethod
    def zero(cls, n: int, mode: str = MULTILINEAR, field=QQ) -> "Polynomial":
        return cls(n, {}, mode, field, _trusted=True)

    @classmethod
    def constant(cls, n: int, c, mode: str = MULTILINEAR, field=QQ) -> "Polynomial":
        return cls(n, {Monomial.one(n, mode).key: c}, mode, field)

    @classmethod
    def variable(cls, n: int, i: int, mode: str = MULTILINEAR, field=QQ) -> "Polynomial":
        return cls(n, {Monomial.from_indices(n, [i], mode).key: 1}, mode, field)

    @classmethod
    def from_monomial(cls, m: Monomial, c=1, field=QQ) -> "Polynomial":
        return cls(m.n, {m.key: c}, m.mode, field)

    @classmethod
    def from_index_terms(cls, n: int, terms: Iterable, mode: str = MULTILINEAR,
                         field=QQ) -> "Polynomial":
        """Build from ``(coefficient, [variable indices])`` pairs.

        In multilinear mode repeated indices collapse (x*x = x).
        """
        acc = {}
        for c, idx in terms:
            key = Monomial.from_indices(n, idx, mode).key
            acc[key] = field.add(acc.get(key, field.zero), field.convert(c))
        return cls(n, acc, mode, field)

    # -- accessors --

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    @property
    def degree(self) -> int:
        """Maximum total degree of a stored term; 0 for the zero polynomial."""
        return self._degree

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]))

    def monomials(self) -> list:
        return [Monomial(self.n, k, self.mode) for k, _ in self.sorted_terms()]

    def coefficient(self, m) -> object:
        key = m.key if isinstance(m, Monomial) else m
        return self._terms.get(key, self.field.zero)

    def variables(self) -> set:
        """Indices of variables that occur in some term."""
        out = set()
        for k in self._terms:
            out.update(key_indices(k))
        return out

    # -- arithmetic --

    def _check_compatible(self, other: "Polynomial"):
        if (self.n, self.mode) != (other.n, other.mode):
            raise IncompatibleRingError(
                f"ring mismatch: ({self.n}, {self.mode}) vs ({other.n}, {other.mode})")
        if self.field != other.field:
            raise IncompatibleRingError(f"field mismatch: {self.field} vs {other.field}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check_compatible(other)
            return other
        if isinstance(other, Monomial):
            return Polynomial.from_monomial(other, 1, self.field)
        return Polynomial.constant(self.n, other, self.mode, self.field)

    def __add__(self, other):
        other = self._coerce(other)
        f = self.field
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = f.add(out[k], c) if k in out else c
            if f.is_zero(v):
                out.pop(k, None)
            else:
                out[k] = v
        return Polynomial(self.n, out, self.mode, f, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return Polynomial(self.n, {k: f.neg(c) for k, c in self._terms.items()},
                          self.mode, f, _trusted=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        f = self.field
        c = f.convert(c)
        if f.is_zero(c):
            return Polynomial.zero(self.n, self.mode, f)
        return Polynomial(self.n, {k: f.mul(v, c) for k, v in self._terms.items()},
                          self.mode, f, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return multiply(self, other)
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check_compatible(other)
        f = self.field
        out = {}
        combine = _mul_keys_ml if self.mode == MULTILINEAR else _mul_keys_std
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = combine(k1, k2)
                v = f.mul(c1, c2)
                if k in out:
                    v = f.add(out[k], v)
                out[k] = v
        out = {k: v for k, v in out.items() if not f.is_zero(v)}
        return Polynomial(self.n, out, self.mode, f, _trusted=True)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        out = Polynomial.constant(self.n, 1, self.mode, self.field)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (self.n == other.n and self.mode == other.mode
                    and self.field == other.field and self._terms == other._terms)
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.n, other, self.mode, self.field)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.mode, self.field, frozenset(self._terms.items())))
        return self._hash

    # -- conversions --

    def to_field(self, field) -> "Polynomial":
        """Map coefficients into ``field`` (e.g. reduce rationals mod p)."""
        return Polynomial(self.n, dict(self._terms), self.mode, field)

    def with_n(self, n: int) -> "Polynomial":
        """Same terms viewed over ``n >= max used index + 1`` variables."""
        if self.mode == MULTILINEAR:
            for k in self._terms:
                if k >> n:
                    raise InvalidVariableError(f"term uses a variable >= {n}")
            return Polynomial(n, dict(self._terms), self.mode, self.field, _trusted=True)
        out = {}
        for k, c in self._terms.items():
            if any(k[n:]):
                raise InvalidVariableError(f"term uses a variable >= {n}")
            out[tuple(k[:n]) + (0,) * (n - len(k))] = c
        return Polynomial(n, out, self.mode, self.field, _trusted=True)

    def substitute(self, mapping: Sequence[int], n: int = None) -> "Polynomial":
        """Rename variables: ``x_i -> x_{mapping[i]}`` over ``n`` new variables.

        Non-injective maps identify variables; in multilinear mode the result
        is reduced modulo the Boolean ideal.
        """
        n_new = self.n if n is None else n
        if len(mapping) != self.n:
            raise ValueError("mapping must have one entry per variable")
        for j in mapping:
            if not 0 <= j < n_new:
                raise InvalidVariableError(f"target index {j} out of range for n={n_new}")
        f = self.field
        out = {}
        for k, c in self._terms.items():
            if self.mode == MULTILINEAR:
                nk = mask_of(mapping[i] for i in key_indices(k))
            else:
                exps = [0] * n_new
                for i, e in enumerate(k):
                    if e:
                        exps[mapping[i]] += e
                nk = tuple(exps)
            out[nk] = f.add(out[nk], c) if nk in out else c
        out = {k: v for k, v in out.items() if not f.is_zero(v)}
        return Polynomial(n_new, out, self.mode, f, _trusted=True)

    def permute(self, perm: Sequence[int]) -> "Polynomial":
        """Apply a variable permutation (``x_i -> x_{perm[i]}``)."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("not a permutation of range(n)")
        return self.substitute(perm)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r}, n={self.n}, mode={self.mode!r}, field={self.field})"


def _check_key(key, n, mode):
    if mode == MULTILINEAR:
        if isinstance(key, Monomial):
            key = key.key
        if not isinstance(key, int):
            raise InvalidVariableError(f"multilinear monomials are bitmasks, got {key!r}")
        if key < 0 or key >> n:
            raise InvalidVariableError(f"monomial {key:#b} uses a variable >= {n}")
        return key
    if isinstance(key, Monomial):
        key = key.key
    key = tuple(key)
    if len(key) != n or any(e < 0 for e in key):
        raise InvalidVariableError(f"bad exponent vector {key!r} for n={n}")
    return key


def _mul_keys_ml(a: int, b: int) -> int:
    return a | b


def _mul_keys_std(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


# -----------------------------
# Core operations
# -----------------------------

def reduce_boolean(p: Polynomial) -> Polynomial:
    """Multilinear representative modulo (x_i^2 - x_i): every exponent >= 1 becomes 1."""
    if p.mode == MULTILINEAR:
        return p
    f = p.field
    out = {}
    for k, c in p.terms.items():
        nk = mask_of(i for i, e in enumerate(k) if e)
        out[nk] = f.add(out[nk], c) if nk in out else c
    out = {k: v for k, v in out.items() if not f.is_zero(v)}
    return Polynomial(p.n, out, MULTILINEAR, f, _trusted=True)


def derive(p: Polynomial, S: Iterable[int]) -> Polynomial:
    """Iterated partial derivative ``prod_{i in S} d/dx_i`` applied to ``p``.

    In multilinear mode a repeated index gives 0.  In standard mode repeats
    are allowed and act as a multi-index.
    """
    idx = list(S)
    for i in idx:
        if not isinstance(i, int) or not 0 <= i < p.n:
            raise InvalidVariableError(f"variable index {i!r} out of range for n={p.n}")
    if p.mode == MULTILINEAR:
        if len(set(idx)) != len(idx):
            return Polynomial.zero(p.n, p.mode, p.field)
        return derive_mask(p, mask_of(idx))
    alpha = [0] * p.n
    for i in idx:
        alpha[i] += 1
    return derive_multi(p, alpha)


def derive_mask(p: Polynomial, mask: int) -> Polynomial:
    """Set derivative for a multilinear polynomial given as a support mask."""
    out = {}
    for k, c in p.terms.items():
        if k & mask == mask:
            out[k ^ mask] = c
    return Polynomial(p.n, out, p.mode, p.field, _trusted=True)


def derive_multi(p: Polynomial, alpha: Sequence[int]) -> Polynomial:
    """Multi-index derivative ``d^alpha``; falling factorials enter the coefficients."""
    if len(alpha) != p.n:
        raise InvalidVariableError(f"multi-index length {len(alpha)} != n={p.n}")
    if p.mode == MULTILINEAR:
        if any(a > 1 for a in alpha):
            return Polynomial.zero(p.n, p.mode, p.field)
        return derive_mask(p, mask_of(i for i, a in enumerate(alpha) if a))
    f = p.field
    active = [(i, a) for i, a in enumerate(alpha) if a]
    out = {}
    for k, c in p.terms.items():
        factor = 1
        exps = list(k)
        for i, a in active:
            e = exps[i]
            if e < a:
                factor = 0
                break
            for t in range(a):
                factor *= e - t
            exps[i] = e - a
        if factor == 0:
            continue
        v = f.mul(c, f.convert(factor))
        if f.is_zero(v):
            continue
        out[tuple(exps)] = v
    return Polynomial(p.n, out, p.mode, f, _trusted=True)


def multiply(p: Polynomial, m: Monomial) -> Polynomial:
    """``m * p``; in multilinear mode the product is reduced (x*x = x)."""
    if m.n != p.n or m.mode != p.mode:
        raise IncompatibleRingError(
            f"monomial ring ({m.n}, {m.mode}) does not match polynomial ring ({p.n}, {p.mode})")
    return multiply_key(p, m.key)


def multiply_key(p: Polynomial, key: Key) -> Polynomial:
    f = p.field
    if p.mode == MULTILINEAR:
        if key == 0:
            return p
        out = {}
        for k, c in p.terms.items():
            nk = k | key
            if nk in out:
                v = f.add(out[nk], c)
                if f.is_zero(v):
                    del out[nk]
                else:
                    out[nk] = v
            else:
                out[nk] = c
        return Polynomial(p.n, out, p.mode, f, _trusted=True)
    if not any(key):
        return p
    out = {tuple(a + b for a, b in zip(k, key)): c for k, c in p.terms.items()}
    return Polynomial(p.n, out, p.mode, f, _trusted=True)


def evaluate(p: Polynomial, point: Sequence) -> object:
    """Value of ``p`` at ``point`` (a length-``n`` sequence of field values)."""
    if len(point) != p.n:
        raise ValueError(f"point has length {len(point)}, expected {p.n}")
    f = p.field
    xs = [f.convert(v) for v in point]
    total = f.zero
    for k, c in p.terms.items():
        term = c
        if p.mode == MULTILINEAR:
            for i in key_indices(k):
                term = f.mul(term, xs[i])
        else:
            for i, e in enumerate(k):
                for _ in range(e):
                    term = f.mul(term, xs[i])
        total = f.add(total, term)
    return total


# -----------------------------
# Text format
# -----------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>x(?P<idx>\d+)(?:\^(?P<exp>\d+))?)|(?P<op>[+\-*]))")


def parse_polynomial(text: str, n: int = None, mode: str = MULTILINEAR,
                     field=QQ) -> Polynomial:
    """Parse e.g. ``"x1*x2 + x2*x3"`` or ``"3*x1^2 - 1/2*x2 + 4"``.

    ``n`` defaults to the largest variable index used.  Exponents above 1 are
    reduced in multilinear mode.
    """
    tokens = []
    pos = 0
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial text")
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {s[pos:pos + 10]!r}")
        pos = m.end()
        if m.group("num"):
            tokens.append(("num", Fraction(m.group("num"))))
        elif m.group("var"):
            i = int(m.group("idx"))
            if i < 1:
                raise ParseError("variables are numbered from x1")
            e = int(m.group("exp") or 1)
            tokens.append(("var", (i - 1, e)))
        else:
            tokens.append(("op", m.group("op")))
        while pos < len(s) and s[pos].isspace():
            pos += 1

    terms = []  # (coefficient, [(index, exp)])
    i = 0
    expect_term = True
    sign = 1
    while i < len(tokens):
        kind, val = tokens[i]
        if expect_term:
            if kind == "op" and val in "+-":
                if val == "-":
                    sign = -sign
                i += 1
                continue
            coeff = Fraction(sign)
            factors = []
            while True:
                if i >= len(tokens):
                    raise ParseError("expression ends with '*'")
                kind, val = tokens[i]
                if kind == "num":
                    coeff *= val
                elif kind == "var":
                    factors.append(val)
                else:
                    raise ParseError(f"unexpected operator {val!r}")
                i += 1
                if i < len(tokens) and tokens[i] == ("op", "*"):
                    i += 1
                    continue
                break
            terms.append((coeff, factors))
            expect_term = False
            sign = 1
        else:
            if kind != "op" or val not in "+-":
                raise ParseError(f"expected '+' or '-', got {val!r}")
            expect_term = True
    if expect_term:
        raise ParseError("expression ends with an operator")

    used = [idx for _, fs in terms for idx, _ in fs]
    if n is None:
        n = max(used, default=-1) + 1
    elif used and max(used) >= n:
        raise InvalidVariableError(f"x{max(used) + 1} exceeds n={n}")
    acc = {}
    for coeff, fs in terms:
        if mode == MULTILINEAR:
            key = mask_of(idx for idx, _ in fs)
        else:
            exps = [0] * n
            for idx, e in fs:
                exps[idx] += e
            key = tuple(exps)
        c = field.convert(coeff)
        acc[key] = field.add(acc[key], c) if key in acc else c
    return Polynomial(n, acc, mode, field)


def format_polynomial(p: Polynomial) -> str:
    """Canonical text form: graded-lex ascending, ``-`` for negative terms.

    Over GF(p) coefficients print as their representative in ``[0, p)``.
    """
    if p.is_zero():
        return "0"
    parts = []
    for k, c in p.sorted_terms():
        neg = isinstance(c, Fraction) and c < 0
        mag = -c if neg else c
        mono = _format_key(k)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def boolean_points(n: int) -> Iterator[tuple]:
    """All points of {0,1}^n in lexicographic order."""
    return itertools.product((0, 1), repeat=n)
