"""A concrete local-width model plus the counting and bound calculators around it.

Model
    Interfaces carry words over a finite alphabet.  A length-``kappa`` window
    is ``kappa`` rounds; in each round every block may run one primitive step
    that appends a symbol to some of its interfaces.  Steps on different
    blocks have disjoint support and commute, so grouping them into rounds is
    the canonical form of a window.  Local words are reduced by a
    length-decreasing rewrite system that must be confluent and have normal
    forms of length at most ``q``.

Profiles
    The profile of a window is the histogram of normal forms over its live
    interfaces.  It ignores interface identities.

All asymptotic constants (``c_gate``, local dimensions, coordinate factor
``B``) are explicit arguments.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass
from math import comb, log2
from typing import Mapping, Sequence

from .algebra import MULTILINEAR, STANDARD, Polynomial, count_monomials
from .errors import NonConfluentError, ParseError


# -----------------------------
# Rewriting
# -----------------------------

def rewrite_once(word: str, rules: Sequence[tuple]) -> str:
    """Apply the first rule (in rule order) at its leftmost occurrence; unchanged if irreducible."""
    for lhs, rhs in rules:
        i = word.find(lhs)
        if i >= 0:
            return word[:i] + rhs + word[i + len(lhs):]
    return word


def reduce_word(word: str, rules: Sequence[tuple]) -> str:
    while True:
        nxt = rewrite_once(word, rules)
        if nxt == word:
            return word
        word = nxt


def is_irreducible(word: str, rules: Sequence[tuple]) -> bool:
    return not any(lhs in word for lhs, _ in rules)


def critical_pairs(rules: Sequence[tuple]) -> list:
    """All ``(overlap word, reduct 1, reduct 2)`` from overlapping or nested left sides."""
    out = []
    for (l1, r1), (l2, r2) in itertools.product(rules, repeat=2):
        # suffix of l1 overlaps prefix of l2
        for k in range(1, min(len(l1), len(l2))):
            if l1[-k:] == l2[:k]:
                w = l1 + l2[k:]
                out.append((w, r1 + l2[k:], l1[:-k] + r2))
        # l2 occurs inside l1
        if (l1, r1) != (l2, r2):
            start = l1.find(l2)
            while start >= 0:
                out.append((l1, r1, l1[:start] + r2 + l1[start + len(l2):]))
                start = l1.find(l2, start + 1)
    return out


def irreducible_words(alphabet: Sequence[str], rules: Sequence[tuple], max_len: int) -> list:
    """Irreducible words of length <= max_len, shortest first then lexicographic."""
    layer = [""]
    out = [""]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for a in alphabet:
                v = w + a
                if is_irreducible(v, rules):
                    nxt.append(v)
        out.extend(nxt)
        layer = nxt
        if not layer:
            break
    return out


@dataclass(frozen=True)
class LocalModel:
    """Alphabet, rewrite rules, normal-form bound ``q``, step fan-out ``b``, width ``R``.

    Construction fails with :class:`NonConfluentError` if a critical pair does
    not join, and with ``ValueError`` if a rule is not length-reducing or an
    irreducible word longer than ``q`` exists.
    """

    alphabet: tuple
    rules: tuple
    q: int
    b: int = 2
    R: int = 4

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "rules", tuple((str(l), str(r)) for l, r in self.rules))
        if len(set(self.alphabet)) != len(self.alphabet) or any(len(a) != 1 for a in self.alphabet):
            raise ValueError("alphabet symbols must be distinct single characters")
        if self.q < 0 or self.b < 1 or self.R < 0:
            raise ValueError("need q >= 0, b >= 1, R >= 0")
        letters = set(self.alphabet)
        for lhs, rhs in self.rules:
            if not lhs or not set(lhs + rhs) <= letters:
                raise ValueError(f"rule {lhs!r} -> {rhs!r} uses symbols outside the alphabet")
            if len(rhs) >= len(lhs):
                raise ValueError(f"rule {lhs!r} -> {rhs!r} is not length-reducing")
        for w, a, b in critical_pairs(self.rules):
            na, nb = reduce_word(a, self.rules), reduce_word(b, self.rules)
            if na != nb:
                raise NonConfluentError(
                    f"critical pair on {w!r} does not join: {na!r} vs {nb!r}", (w, na, nb))
        longer = [w for w in irreducible_words(self.alphabet, self.rules, self.q + 1)
                  if len(w) > self.q]
        if longer:
            raise ValueError(f"irreducible word {longer[0]!r} is longer than q={self.q}")

    @property
    def S_prime(self) -> int:
        """``|Sigma^{<=q}| = sum_t |Sigma|^t``."""
        return words_up_to(len(self.alphabet), self.q)

    def normal_form(self, word: str) -> str:
        return reduce_word(word, self.rules)

    def normal_forms(self) -> list:
        """Every irreducible word (the realizable local types)."""
        return irreducible_words(self.alphabet, self.rules, self.q)

    def type_changes(self, word: str) -> int:
        """Number of times the running normal form changes while reading ``word``."""
        state, changes = "", 0
        for a in word:
            nxt = self.normal_form(state + a)
            if nxt != state:
                changes += 1
            state = nxt
        return changes

    def to_dict(self) -> dict:
        return {"alphabet": list(self.alphabet), "rules": [list(r) for r in self.rules],
                "q": self.q, "b": self.b, "R": self.R}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: Mapping) -> "LocalModel":
        try:
            return cls(tuple(d["alphabet"]), tuple(tuple(r) for r in d["rules"]),
                       int(d["q"]), int(d.get("b", 2)), int(d.get("R", 4)))
        except KeyError as exc:
            raise ParseError(f"model definition lacks {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "LocalModel":
        return cls.from_dict(json.loads(text))

    def with_width(self, R: int) -> "LocalModel":
        return LocalModel(self.alphabet, self.rules, self.q, self.b, R)


def default_model(R: int = 4) -> LocalModel:
    """Free left-regular band on {a, b}: idempotent letters plus ``xyx -> xy``."""
    return LocalModel(("a", "b"), (("aa", "a"), ("bb", "b"), ("aba", "ab"), ("bab", "ba")),
                      q=2, b=2, R=R)


def words_up_to(sigma: int, q: int) -> int:
    return sum(sigma ** t for t in range(q + 1))


# -----------------------------
# Windows and profiles
# -----------------------------

@dataclass(frozen=True)
class Profile:
    """Histogram of normal forms, stored as sorted ``(word, count)`` pairs without zeros."""

    counts: tuple

    @classmethod
    def from_counter(cls, c: Mapping) -> "Profile":
        return cls(tuple(sorted((w, k) for w, k in c.items() if k)))

    @property
    def total(self) -> int:
        return sum(k for _, k in self.counts)

    def as_dict(self) -> dict:
        return dict(self.counts)

    def __getitem__(self, word: str) -> int:
        return self.as_dict().get(word, 0)


@dataclass(frozen=True)
class Window:
    """``kappa`` rounds over interfaces grouped into blocks.

    ``steps[t]`` is a tuple of ``(interface, symbol)`` updates applied in
    round ``t``; each interface is updated at most once per round.
    """

    blocks: tuple
    steps: tuple

    @property
    def kappa(self) -> int:
        return len(self.steps)

    @property
    def live(self) -> tuple:
        return tuple(i for b in self.blocks for i in b)

    def words(self) -> dict:
        out = {i: "" for i in self.live}
        for step in self.steps:
            for i, a in step:
                out[i] += a
        return out

    def validate(self, model: LocalModel):
        live = self.live
        if len(set(live)) != len(live):
            raise ValueError("interface listed in two blocks")
        if len(live) > model.R:
            raise ValueError(f"{len(live)} live interfaces exceed width R={model.R}")
        block_of = {i: j for j, b in enumerate(self.blocks) for i in b}
        for step in self.steps:
            touched = Counter()
            ids = [i for i, _ in step]
            if len(set(ids)) != len(ids):
                raise ValueError("interface updated twice in one round")
            for i, a in step:
                if i not in block_of:
                    raise ValueError(f"interface {i} is not live")
                if a not in model.alphabet:
                    raise ValueError(f"symbol {a!r} not in alphabet")
                touched[block_of[i]] += 1
            if any(v > model.b for v in touched.values()):
                raise ValueError(f"a step touches more than b={model.b} interfaces of a block")

    def relabel(self, mapping: Mapping) -> "Window":
        """Rename interfaces (e.g. a permutation inside each block)."""
        blocks = tuple(tuple(mapping.get(i, i) for i in b) for b in self.blocks)
        steps = tuple(tuple((mapping.get(i, i), a) for i, a in s) for s in self.steps)
        return Window(blocks, steps)


def make_blocks(R: int, b: int) -> tuple:
    """Interfaces ``0..R-1`` in consecutive blocks of size ``b``."""
    return tuple(tuple(range(i, min(i + b, R))) for i in range(0, R, b))


def profile_of(window: Window, model: LocalModel) -> Profile:
    """Histogram of normal forms of the live interfaces' words."""
    return Profile.from_counter(Counter(model.normal_form(w) for w in window.words().values()))


def random_window(model: LocalModel, kappa: int, rng, R: int = None) -> Window:
    """Uniform random window: each interface independently gets a symbol or nothing per round."""
    R = model.R if R is None else R
    blocks = make_blocks(R, model.b)
    choices = (None,) + model.alphabet
    steps = []
    for _ in range(kappa):
        step = []
        for i in range(R):
            a = choices[rng.below(len(choices))]
            if a is not None:
                step.append((i, a))
        steps.append(tuple(step))
    return Window(blocks, tuple(steps))


def block_states(model: LocalModel, size: int, kappa: int) -> set:
    """Anonymous states (sorted normal-form tuples) of one block after ``kappa`` rounds."""
    choices = ("",) + model.alphabet
    states = {("",) * size}
    for _ in range(kappa):
        nxt = set()
        for st in states:
            for upd in itertools.product(choices, repeat=size):
                nxt.add(tuple(sorted(model.normal_form(w + a) for w, a in zip(st, upd))))
        states = nxt
    return states


def realized_profiles(model: LocalModel, kappa: int, R: int = None) -> set:
    """Every profile reachable by some length-``kappa`` window with ``R`` live interfaces.

    Blocks evolve independently, so the profile set is the sumset of the
    per-block histogram sets.
    """
    R = model.R if R is None else R
    forms = model.normal_forms()
    pos = {w: j for j, w in enumerate(forms)}
    acc = {(0,) * len(forms)}
    cache = {}
    for blk in make_blocks(R, model.b):
        size = len(blk)
        if size not in cache:
            hs = set()
            for st in block_states(model, size, kappa):
                h = [0] * len(forms)
                for w in st:
                    h[pos[w]] += 1
                hs.add(tuple(h))
            cache[size] = hs
        acc = {tuple(x + y for x, y in zip(a, h)) for a in acc for h in cache[size]}
    return {Profile.from_counter(dict(zip(forms, h))) for h in acc}


def round_transitions(model: LocalModel, R: int = None) -> int:
    """Distinct single-round operations: each interface gets a symbol or nothing."""
    R = model.R if R is None else R
    return (len(model.alphabet) + 1) ** R


# -----------------------------
# Counting and bounds
# -----------------------------

def count_profiles(R: int, S_prime: int) -> int:
    """Weak compositions of ``R`` into ``S'`` parts: ``C(R + S' - 1, S' - 1)``."""
    if R < 0 or S_prime < 1:
        raise ValueError("need R >= 0 and S' >= 1")
    return comb(R + S_prime - 1, S_prime - 1)


def enumerate_histograms(R: int, S_prime: int):
    """All length-``S'`` non-negative integer vectors summing to ``R`` (brute force)."""
    for h in itertools.product(range(R + 1), repeat=S_prime):
        if sum(h) == R:
            yield h


def constant_type_profile_bound(R: int, q: int, S_prime: int) -> int:
    """The looser ``C(qR + S', S')`` form of the profile count."""
    return comb(q * R + S_prime, S_prime)


def count_kappa_step_sequences(T_step: int, kappa: int) -> int:
    """Ordered ``kappa``-step count ``T_step ** kappa``."""
    if T_step < 1 or kappa < 0:
        raise ValueError("need T_step >= 1 and kappa >= 0")
    return T_step ** kappa


def single_step_transitions(R: int, b: int, sigma: int) -> int:
    """Choices of at most ``b`` of ``R`` interfaces with a symbol each."""
    return sum(comb(R, j) * sigma ** j for j in range(b + 1))


def circuit_rank_bound(s: int, n: int, kappa: int, ell: int, c_gate: int = 2) -> int:
    """``s ** (c_gate * kappa) * C(n + ell, ell)``."""
    if s < 1 or n < 0 or kappa < 0 or ell < 0:
        raise ValueError("need s >= 1 and n, kappa, ell >= 0")
    return s ** (c_gate * kappa) * comb(n + ell, ell)


def profile_subspace_dim(profile, local_dims) -> int:
    """``prod_sigma C(h(sigma) + d_sigma - 1, d_sigma - 1)``.

    ``profile`` is a :class:`Profile` or mapping; ``local_dims`` is a mapping
    from word to dimension or one int used for every type.
    """
    counts = profile.as_dict() if isinstance(profile, Profile) else dict(profile)
    out = 1
    for w, h in counts.items():
        d = local_dims if isinstance(local_dims, int) else local_dims[w]
        if d < 1:
            raise ValueError("local dimensions must be positive")
        out *= comb(h + d - 1, d - 1)
    return out


def monomial_coordinate_budget(n: int, kappa: int, ell: int, B: int = 1,
                               mode: str = MULTILINEAR) -> int:
    """``|M_{<=ell}| * C(n, kappa) * B**kappa``."""
    return count_monomials(n, ell, mode) * comb(n, kappa) * B ** kappa


def width_for(n: int, C: float = 1.0, c: float = 1.0) -> int:
    """``R = floor(C * (log2 n) ** c)``, at least 1."""
    return max(1, int(C * log2(n) ** c))


# -----------------------------
# Block-local polynomials for profile subspaces
# -----------------------------

def type_variables(model: LocalModel, local_dims) -> dict:
    """Variable index of ``(type, state)`` for ``state`` in ``1..d-1`` of each normal form."""
    out = {}
    for w in model.normal_forms():
        d = local_dims if isinstance(local_dims, int) else local_dims[w]
        for j in range(1, d):
            out[(w, j)] = len(out)
    return out


def window_polynomial(window: Window, model: LocalModel, local_dims) -> Polynomial:
    """Anonymous product of per-interface local basis vectors (standard ring).

    An interface of type ``sigma`` in local state ``j`` (its raw word length
    mod ``d_sigma``) contributes the variable ``y_{sigma, j}``, or 1 when
    ``j = 0``.  Interfaces of one type share variables, so the product only
    depends on how many interfaces of each type sit in each local state.
    """
    var = type_variables(model, local_dims)
    n = max(len(var), 1)
    exps = [0] * n
    for w in window.words().values():
        sigma = model.normal_form(w)
        d = local_dims if isinstance(local_dims, int) else local_dims[sigma]
        j = len(w) % d
        if j:
            exps[var[(sigma, j)]] += 1
    return Polynomial(n, {tuple(exps): 1}, STANDARD)
