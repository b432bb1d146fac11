"""Circuit -> Tseitin CNF -> restriction -> local window -> profile merge -> SPDP rank.

Each stage is a plain function.  :func:`run_pipeline` chains them and records
a :class:`PipelineRun` whose JSON is byte-identical for identical inputs.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import deque
from dataclasses import asdict, dataclass, field, replace
from typing import Mapping, Sequence

from . import __version__
from .algebra import MULTILINEAR, QQ, Polynomial, field_from_name
from .core import EXACT, SpdpParams, codimension
from .errors import CircuitError, ParseError, SpdpError, StageError
from .families import (FamilySpec, Rng, diagonal_power, goldreich_tuples, permanent,
                       planted_assignment, random_deg3_clauses, xor_and_value,
                       clause_polynomial)

OPS = ("INPUT", "AND", "OR", "NOT", "XOR")


# -----------------------------
# Circuits
# -----------------------------

@dataclass(frozen=True)
class Gate:
    id: str
    op: str
    inputs: tuple = ()


@dataclass
class Circuit:
    """Boolean circuit over AND/OR (fan-in >= 2), binary XOR and NOT.

    ``gates`` lists every node, inputs included.  Input order defines the
    input numbering used by :meth:`evaluate` and by :func:`tseitin`.
    """

    gates: list
    output: str

    def __post_init__(self):
        self.gates = [g if isinstance(g, Gate) else Gate(g[0], g[1], tuple(g[2])) for g in self.gates]
        self.validate()

    @property
    def inputs(self) -> list:
        return [g.id for g in self.gates if g.op == "INPUT"]

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def size(self) -> int:
        """Number of nodes, inputs included."""
        return len(self.gates)

    def validate(self):
        ids = [g.id for g in self.gates]
        if len(set(ids)) != len(ids):
            raise CircuitError("duplicate gate id")
        known = set(ids)
        for g in self.gates:
            if g.op not in OPS:
                raise CircuitError(f"gate {g.id}: unknown op {g.op}")
            arity = len(g.inputs)
            if (g.op == "INPUT" and arity) or (g.op == "NOT" and arity != 1) \
                    or (g.op == "XOR" and arity != 2) or (g.op in ("AND", "OR") and arity < 2):
                raise CircuitError(f"gate {g.id}: wrong arity {arity} for {g.op}")
            for i in g.inputs:
                if i not in known:
                    raise CircuitError(f"gate {g.id}: undefined input {i}")
        if self.output not in known:
            raise CircuitError(f"undefined output {self.output}")
        self.topological_order()

    def topological_order(self) -> list:
        by_id = {g.id: g for g in self.gates}
        state, order = {}, []
        for root in by_id:
            if root in state:
                continue
            stack = [(root, False)]
            while stack:
                gid, done = stack.pop()
                if done:
                    state[gid] = 2
                    order.append(by_id[gid])
                    continue
                if state.get(gid) == 2:
                    continue
                if state.get(gid) == 1:
                    raise CircuitError(f"cycle through gate {gid}")
                state[gid] = 1
                stack.append((gid, True))
                for i in by_id[gid].inputs:
                    if state.get(i) == 1:
                        raise CircuitError(f"cycle through gate {i}")
                    if state.get(i) != 2:
                        stack.append((i, False))
        return order

    def evaluate(self, bits: Sequence[int]) -> dict:
        """Value of every gate given input bits (in input order)."""
        if len(bits) != self.n_inputs:
            raise ValueError("wrong number of input bits")
        val = dict(zip(self.inputs, (int(b) for b in bits)))
        for g in self.topological_order():
            if g.op == "INPUT":
                continue
            xs = [val[i] for i in g.inputs]
            if g.op == "AND":
                val[g.id] = int(all(xs))
            elif g.op == "OR":
                val[g.id] = int(any(xs))
            elif g.op == "NOT":
                val[g.id] = 1 - xs[0]
            else:
                val[g.id] = xs[0] ^ xs[1]
        return val

    def __call__(self, bits: Sequence[int]) -> int:
        return self.evaluate(bits)[self.output]

    def to_polynomial(self, field_=QQ) -> Polynomial:
        """Multilinear arithmetization of the output over the inputs."""
        n = self.n_inputs
        val = {gid: Polynomial.variable(n, i, MULTILINEAR, field_) for i, gid in enumerate(self.inputs)}
        one = Polynomial.constant(n, 1, MULTILINEAR, field_)
        for g in self.topological_order():
            if g.op == "INPUT":
                continue
            xs = [val[i] for i in g.inputs]
            if g.op == "AND":
                acc = xs[0]
                for x in xs[1:]:
                    acc = acc * x
            elif g.op == "OR":
                acc = xs[0]
                for x in xs[1:]:
                    acc = acc + x - acc * x
            elif g.op == "NOT":
                acc = one - xs[0]
            else:
                acc = xs[0] + xs[1] - (xs[0] * xs[1]).scale(2)
            val[g.id] = acc
        return val[self.output]

    def to_text(self) -> str:
        lines = []
        for g in self.gates:
            lines.append(f"{g.id} = {g.op}" + "".join(" " + i for i in g.inputs))
        lines.append(f"output {self.output}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Circuit":
        """Read the gate DSL: ``g5 = AND g1 g2`` per line, ``output g5``, ``#`` comments.

        Without an ``output`` line the last gate is the output.
        """
        gates, output = [], None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.split()
            if toks[0] == "output" and len(toks) == 2:
                output = toks[1]
                continue
            if len(toks) < 3 or toks[1] != "=" or toks[2].upper() not in OPS:
                raise ParseError(f"line {lineno}: cannot parse {raw!r}")
            gates.append(Gate(toks[0], toks[2].upper(), tuple(toks[3:])))
        if not gates:
            raise ParseError("circuit has no gates")
        try:
            return cls(gates, output or gates[-1].id)
        except CircuitError as exc:
            raise ParseError(str(exc)) from None


class CircuitBuilder:
    """Small helper that names gates ``g1, g2, ...`` in creation order."""

    def __init__(self):
        self.gates = []

    def add(self, op: str, *inputs: str) -> str:
        gid = f"g{len(self.gates) + 1}"
        self.gates.append(Gate(gid, op, tuple(inputs)))
        return gid

    def balanced(self, op: str, ids: Sequence[str]) -> str:
        """Binary tree of ``op`` over ``ids``."""
        layer = list(ids)
        if not layer:
            raise CircuitError("empty fan-in")
        while len(layer) > 1:
            nxt = [self.add(op, layer[i], layer[i + 1]) for i in range(0, len(layer) - 1, 2)]
            if len(layer) % 2:
                nxt.append(layer[-1])
            layer = nxt
        return layer[0]

    def build(self, output: str) -> Circuit:
        return Circuit(self.gates, output)


# -----------------------------
# CNF
# -----------------------------

@dataclass
class Cnf:
    """Clauses are tuples of nonzero ints; ``-v`` is the negation of variable ``v``."""

    n_vars: int
    clauses: list
    names: dict = field(default_factory=dict)

    def __post_init__(self):
        self.clauses = [tuple(c) for c in self.clauses]
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise ValueError(f"literal {lit} out of range 1..{self.n_vars}")

    @property
    def has_empty_clause(self) -> bool:
        return any(not c for c in self.clauses)

    def evaluate(self, bits: Sequence[int]) -> bool:
        """Truth value under a full assignment ``bits[v-1]``."""
        return all(any((bits[abs(l) - 1] == 1) == (l > 0) for l in c) for c in self.clauses)

    def variables(self) -> list:
        return sorted({abs(l) for c in self.clauses for l in c})

    def to_dimacs(self) -> str:
        out = io.StringIO()
        for v in sorted(self.names):
            out.write(f"c var {v} {self.names[v]}\n")
        out.write(f"p cnf {self.n_vars} {len(self.clauses)}\n")
        for c in self.clauses:
            out.write(" ".join(str(l) for l in c) + (" 0\n" if c else "0\n"))
        return out.getvalue()

    @classmethod
    def from_dimacs(cls, text: str) -> "Cnf":
        n_vars, declared, names, clauses, cur = None, None, {}, [], []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("c"):
                toks = line.split()
                if len(toks) == 4 and toks[1] == "var":
                    names[int(toks[2])] = toks[3]
                continue
            if line.startswith("p"):
                toks = line.split()
                if len(toks) != 4 or toks[1] != "cnf":
                    raise ParseError(f"line {lineno}: bad problem line")
                n_vars, declared = int(toks[2]), int(toks[3])
                continue
            try:
                nums = [int(t) for t in line.split()]
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer literal") from None
            for x in nums:
                if x == 0:
                    clauses.append(tuple(cur))
                    cur = []
                else:
                    cur.append(x)
        if cur:
            clauses.append(tuple(cur))
        if n_vars is None:
            raise ParseError("missing 'p cnf' line")
        if declared != len(clauses):
            raise ParseError(f"header declares {declared} clauses, found {len(clauses)}")
        try:
            return cls(n_vars, clauses, names)
        except ValueError as exc:
            raise ParseError(str(exc)) from None


def tseitin(circuit: Circuit) -> Cnf:
    """Variables ``1..n_inputs`` are the inputs; each non-input gate gets the next variable."""
    var = {gid: i + 1 for i, gid in enumerate(circuit.inputs)}
    clauses = []
    for g in circuit.topological_order():
        if g.op == "INPUT":
            continue
        v = var[g.id] = len(var) + 1
        xs = [var[i] for i in g.inputs]
        if g.op == "AND":
            clauses += [(-v, a) for a in xs] + [(v,) + tuple(-a for a in xs)]
        elif g.op == "OR":
            clauses += [(v, -a) for a in xs] + [(-v,) + tuple(xs)]
        elif g.op == "NOT":
            a = xs[0]
            clauses += [(-v, -a), (v, a)]
        else:
            a, b = xs
            clauses += [(-v, a, b), (-v, -a, -b), (v, -a, b), (v, a, -b)]
    clauses.append((var[circuit.output],))
    names = {v: gid for gid, v in var.items()}
    return Cnf(len(var), clauses, names)


# -----------------------------
# Restriction and unit propagation
# -----------------------------

@dataclass
class Restricted:
    cnf: Cnf
    conflict: bool
    assignment: dict      # original variable -> bool (restriction plus forced units)
    var_map: dict         # original variable -> new variable


def restrict_prune(cnf: Cnf, restriction: Mapping = None) -> Restricted:
    """Apply a partial assignment, unit-propagate to a fixpoint, renumber densely.

    On conflict (inconsistent units or an emptied clause) the result CNF is a
    single empty clause over zero variables.
    """
    assign = {}
    for v, b in (restriction or {}).items():
        assign[int(v)] = bool(b)
    clauses = list(cnf.clauses)
    while True:
        nxt, units = [], []
        for c in clauses:
            lits = []
            sat = False
            for l in c:
                val = assign.get(abs(l))
                if val is None:
                    lits.append(l)
                elif val == (l > 0):
                    sat = True
                    break
            if sat:
                continue
            if not lits:
                return Restricted(Cnf(0, [()]), True, assign, {})
            if len(lits) == 1:
                units.append(lits[0])
            else:
                nxt.append(tuple(lits))
        clauses = nxt
        if not units:
            break
        for l in units:
            prev = assign.get(abs(l))
            if prev is not None and prev != (l > 0):
                return Restricted(Cnf(0, [()]), True, assign, {})
            assign[abs(l)] = l > 0
    live = sorted({abs(l) for c in clauses for l in c})
    var_map = {v: i + 1 for i, v in enumerate(live)}
    new = [tuple(var_map[abs(l)] * (1 if l > 0 else -1) for l in c) for c in clauses]
    names = {var_map[v]: cnf.names.get(v, f"v{v}") for v in live}
    return Restricted(Cnf(len(live), new, names), False, assign, var_map)


def random_restriction(variables: Sequence[int], values: Mapping, density: float, seed: int) -> dict:
    """Fix each listed variable to ``values[v]`` independently with probability ``density``."""
    rng = Rng(seed)
    scale = 1 << 53
    return {v: bool(values[v]) for v in variables if rng.below(scale) < density * scale}


# -----------------------------
# Windows and profiles
# -----------------------------

@dataclass
class WindowSelection:
    window_size: int
    seed: int
    pivot: int
    variables: tuple          # sorted CNF variables in the window
    clauses: tuple            # window clauses restricted to window variables
    signatures: dict          # variable -> sorted tuple of (width, polarity)

    @property
    def live_vars(self) -> int:
        return len(self.variables)


def window_budget(n: int, c_w: float) -> int:
    """``ceil(c_w * log2 n)``, at least 1."""
    return max(1, math.ceil(c_w * math.log2(max(n, 2))))


SIGNATURES = ("set", "multiset")
WINDOW_CLAUSES = ("induced", "touching")


def extract_window(cnf: Cnf, kappa_win: int, seed: int, clauses: str = "induced",
                   signature: str = "set") -> WindowSelection:
    """BFS over the variable-clause incidence graph from a seeded pivot, ``kappa_win`` variables.

    ``clauses="induced"`` keeps the clauses whose variables all lie in the
    window; ``"touching"`` keeps every clause meeting the window, cut down to
    its window literals.
    """
    if clauses not in WINDOW_CLAUSES:
        raise ValueError(f"window clauses must be one of {WINDOW_CLAUSES}")
    live = cnf.variables()
    if not live or kappa_win < 1:
        return WindowSelection(kappa_win, seed, 0, (), (), {})
    occ = {}
    for ci, c in enumerate(cnf.clauses):
        for l in c:
            occ.setdefault(abs(l), []).append(ci)
    pivot = live[Rng(seed).below(len(live))]
    chosen, seen = [pivot], {pivot}
    queue = deque([pivot])
    while queue and len(chosen) < kappa_win:
        v = queue.popleft()
        for ci in occ[v]:
            for l in cnf.clauses[ci]:
                u = abs(l)
                if u not in seen and len(chosen) < kappa_win:
                    seen.add(u)
                    chosen.append(u)
                    queue.append(u)
    return window_on(cnf, chosen, clauses, signature, kappa_win, seed, pivot)


def window_on(cnf: Cnf, variables, clauses: str = "induced", signature: str = "set",
              kappa_win: int = None, seed: int = 0, pivot: int = 0) -> WindowSelection:
    """Window on an explicit variable set (the BFS step of :func:`extract_window` skipped)."""
    win = set(variables)
    kept = []
    for c in cnf.clauses:
        inner = tuple(l for l in c if abs(l) in win)
        if inner and (clauses == "touching" or len(inner) == len(c)):
            kept.append(inner)
    size = len(win) if kappa_win is None else kappa_win
    return WindowSelection(size, seed, pivot, tuple(sorted(win)), tuple(kept),
                           incidence_signatures(win, kept, signature))


def incidence_signatures(variables, clauses, kind: str = "set") -> dict:
    """Per variable, its ``(clause width, polarity)`` occurrences as a sorted set or multiset."""
    if kind not in SIGNATURES:
        raise ValueError(f"signature must be one of {SIGNATURES}")
    sig = {v: [] for v in variables}
    for c in clauses:
        for l in c:
            sig[abs(l)].append((len(c), 1 if l > 0 else -1))
    if kind == "set":
        return {v: tuple(sorted(set(s))) for v, s in sig.items()}
    return {v: tuple(sorted(s)) for v, s in sig.items()}


def canonicalize_profiles(sel: WindowSelection, cnf: Cnf = None):
    """``(P, {variable: class})``; classes are numbered in sorted signature order."""
    distinct = sorted(set(sel.signatures.values()))
    cls = {s: i for i, s in enumerate(distinct)}
    return len(distinct), {v: cls[s] for v, s in sel.signatures.items()}


def window_polynomial(sel: WindowSelection, cnf: Cnf = None, compress: bool = True,
                      field_=QQ) -> Polynomial:
    """Sum of arithmetized window clauses.

    Uncompressed, variable ``i`` is the ``i``-th window variable.  Compressed,
    every variable is replaced by its profile class (one variable per class)
    and the product is reduced with ``x^2 = x``.
    """
    if not sel.variables:
        return Polynomial.zero(0, MULTILINEAR, field_)
    if compress:
        P, cls = canonicalize_profiles(sel)
        local = {v: cls[v] + 1 for v in sel.variables}
        n = P
    else:
        local = {v: i + 1 for i, v in enumerate(sel.variables)}
        n = len(sel.variables)
    total = Polynomial.zero(n, MULTILINEAR, field_)
    for c in sel.clauses:
        lits = [local[abs(l)] * (1 if l > 0 else -1) for l in c]
        total = total + clause_polynomial(n, lits, field_)
    return total


# -----------------------------
# Families as circuits
# -----------------------------

def randdeg3_circuit(n: int, clause_count: int, seed: int):
    """AND of planted-satisfiable random 3-clauses; returns ``(circuit, planted bits)``."""
    planted = planted_assignment(n, seed)
    clauses = random_deg3_clauses(n, clause_count, seed, planted)
    cb = CircuitBuilder()
    xs = [cb.add("INPUT") for _ in range(n)]
    negs = {}
    outs = []
    for c in clauses:
        lits = []
        for l in c:
            v = abs(l) - 1
            if l > 0:
                lits.append(xs[v])
            else:
                if v not in negs:
                    negs[v] = cb.add("NOT", xs[v])
                lits.append(negs[v])
        outs.append(cb.balanced("OR", lits))
    return cb.build(cb.balanced("AND", outs)), planted


def goldreich_circuit(n: int, locality: int, seed: int, count: int = None):
    """AND over XOR-AND predicates, each required to equal its value on the planted input."""
    planted = planted_assignment(n, seed)
    cb = CircuitBuilder()
    xs = [cb.add("INPUT") for _ in range(n)]
    outs = []
    for tup in goldreich_tuples(n, locality, seed, count):
        acc = cb.add("AND", xs[tup[-2]], xs[tup[-1]])
        for v in tup[:-2]:
            acc = cb.add("XOR", xs[v], acc)
        if xor_and_value([planted[v] for v in tup]) == 0:
            acc = cb.add("NOT", acc)
        outs.append(acc)
    return cb.build(cb.balanced("AND", outs)), planted


def family_circuit(spec: FamilySpec):
    prm = spec.params
    if spec.kind == "random_deg3":
        return randdeg3_circuit(prm["n"], prm.get("clauses", prm["n"]), spec.seed)
    if spec.kind == "goldreich_like":
        return goldreich_circuit(prm["n"], prm.get("locality", 5), spec.seed, prm.get("count"))
    raise ValueError(f"family {spec.kind} has no circuit form")


# -----------------------------
# Runs
# -----------------------------

@dataclass(frozen=True)
class PipelineParams:
    """Knobs of one run.  ``kappa=None`` means ``max(1, floor(log2(n)/4 + 1/2))``."""

    c_w: float = 3.0
    density: float = 0.7
    kappa: int = None
    ell: int = 2
    convention: str = EXACT
    field: str = "QQ"
    compress: bool = True
    signature: str = "set"
    window_clauses: str = "induced"
    budget: int = None

    def kappa_for(self, n: int) -> int:
        if self.kappa is not None:
            return self.kappa
        return max(1, math.floor(math.log2(max(n, 2)) / 4 + 0.5))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: Mapping) -> "PipelineParams":
        known = {k: d[k] for k in cls.__dataclass_fields__ if k in d}
        return cls(**known)


def collapse_threshold(n: int) -> int:
    """``ceil(sqrt(n))`` computed exactly."""
    r = math.isqrt(n)
    return r if r * r == n else r + 1


@dataclass
class PipelineRun:
    family: str
    spec: dict
    n: int
    live_vars: int
    profiles: int
    gamma: int
    threshold: int
    passed: bool
    kappa: int
    ell: int
    kappa_win: int
    seed: int
    params: dict
    stages: dict
    version: str = __version__

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PipelineRun":
        d = json.loads(text)
        d["passed"] = d.pop("pass")
        return cls(**d)


CSV_COLUMNS = ("family", "n", "live_vars", "profiles", "rank", "threshold", "pass")


def runs_to_csv(runs: Sequence[PipelineRun]) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in runs:
        w.writerow([r.family, r.n, r.live_vars, r.profiles, r.gamma, r.threshold,
                    "true" if r.passed else "false"])
    return out.getvalue()


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except (SpdpError, ValueError, KeyError, IndexError) as exc:
        raise StageError(name, exc) from exc


def _algebraic_window(spec: FamilySpec, kappa_win: int, seed: int, field_):
    """Seeded variable window for non-CNF controls; other variables are set to 0."""
    if spec.kind == "permanent":
        p = permanent(spec.params["d"], field_)
    elif spec.kind == "diagonal_power":
        p = diagonal_power(spec.params["n"], spec.params.get("e", 4), field_)
    else:
        raise ValueError(f"no algebraic window for {spec.kind}")
    n = p.n
    k = min(kappa_win, n)
    keep = sorted(Rng(seed).sample(n, k))
    return p, _restrict_to(p, keep), keep


def _restrict_to(p: Polynomial, keep: Sequence[int]) -> Polynomial:
    """Drop every term that uses a variable outside ``keep`` and renumber ``keep`` densely."""
    pos = {v: i for i, v in enumerate(keep)}
    terms = {}
    if p.mode == MULTILINEAR:
        for key, c in p.terms.items():
            idx = [i for i in range(p.n) if key >> i & 1]
            if all(i in pos for i in idx):
                nk = 0
                for i in idx:
                    nk |= 1 << pos[i]
                terms[nk] = c
    else:
        for key, c in p.terms.items():
            if all(e == 0 or i in pos for i, e in enumerate(key)):
                terms[tuple(key[v] for v in keep)] = c
    return Polynomial(len(keep), terms, p.mode, p.field)


def run_pipeline(spec, params: PipelineParams = PipelineParams(), seed: int = 0) -> PipelineRun:
    """Run every stage for a :class:`FamilySpec` (or a bare :class:`Circuit`)."""
    field_ = field_from_name(params.field)
    stages = {}
    if isinstance(spec, Circuit):
        circuit, planted = spec, None
        label, spec_dict, n = "circuit", {"circuit": spec.to_text()}, spec.n_inputs
    else:
        label, spec_dict, n = spec.label, spec.to_dict(), spec.input_size()
    kappa_win = window_budget(n, params.c_w)
    kappa = params.kappa_for(n)

    if isinstance(spec, FamilySpec) and spec.kind in ("permanent", "diagonal_power"):
        _, p, keep = _stage("window", _algebraic_window, spec, kappa_win, seed, field_)
        live, P = len(keep), len(keep)
        stages["window"] = {"variables": [v + 1 for v in keep]}
    else:
        if isinstance(spec, FamilySpec):
            circuit, planted = _stage("circuit", family_circuit, spec)
        cnf = _stage("tseitin", tseitin, circuit)
        stages["tseitin"] = {"vars": cnf.n_vars, "clauses": len(cnf.clauses)}
        restriction = {}
        if planted is not None:
            values = {i + 1: b for i, b in enumerate(planted)}
            restriction = random_restriction(range(1, circuit.n_inputs + 1), values,
                                             params.density, seed)
        res = _stage("restrict", restrict_prune, cnf, restriction)
        stages["restrict"] = {"fixed": len(restriction), "vars": res.cnf.n_vars,
                              "clauses": len(res.cnf.clauses), "conflict": res.conflict}
        sel = _stage("window", extract_window, res.cnf, kappa_win, seed,
                     params.window_clauses, params.signature)
        stages["window"] = {"pivot": sel.pivot, "variables": list(sel.variables),
                            "clauses": len(sel.clauses)}
        P, _ = canonicalize_profiles(sel)
        live = sel.live_vars
        p = _stage("polynomial", window_polynomial, sel, res.cnf, params.compress, field_)
        if not params.compress:
            P = live
    stages["polynomial"] = {"n": p.n, "terms": len(p.terms), "degree": p.degree if not p.is_zero() else -1}
    spdp = SpdpParams(kappa, params.ell, params.convention, drop_zero_rows=True,
                      budget=params.budget)
    report = _stage("rank", codimension, p, spdp, field_)
    gamma = report.gamma
    stages["rank"] = {"ambient_dim": report.ambient_dim, "codim": report.codim}
    threshold = collapse_threshold(n)
    return PipelineRun(label, spec_dict, n, live, P, gamma, threshold, gamma < threshold,
                       kappa, params.ell, kappa_win, seed, params.to_dict(), stages)


# -----------------------------
# Manifests
# -----------------------------

# Each entry is a family spec plus optional "pipeline" overrides of PipelineParams.
MANIFESTS = {
    "table1_scaled": [
        {"kind": "random_deg3", "params": {"n": 256}, "seed": 28},
        {"kind": "random_deg3", "params": {"n": 1024}, "seed": 3},
        {"kind": "goldreich_like", "params": {"n": 256, "locality": 5}, "seed": 1,
         "pipeline": {"density": 0.5}},
        {"kind": "goldreich_like", "params": {"n": 1024, "locality": 5}, "seed": 2,
         "pipeline": {"density": 0.1}},
        {"kind": "diagonal_power", "params": {"n": 1024, "e": 4}, "seed": 1},
        {"kind": "permanent", "params": {"d": 3}, "seed": 1},
    ],
}

EXPECTED_PATTERN = {"table1_scaled": (True, True, True, True, False, False)}


def load_manifest(source) -> list:
    """``[(FamilySpec, overrides)]`` from a bundled name, JSON text, or a parsed list."""
    if isinstance(source, str) and source in MANIFESTS:
        items = MANIFESTS[source]
    elif isinstance(source, str):
        try:
            items = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ParseError(f"manifest is neither a bundled name nor JSON: {exc}") from None
    else:
        items = source
    if isinstance(items, dict):
        items = items.get("runs", [])
    out = []
    for d in items:
        try:
            out.append((FamilySpec.from_dict(d), dict(d.get("pipeline", {}))))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad manifest entry {d!r}: {exc}") from None
    return out


def run_manifest(source, params: PipelineParams = PipelineParams(), seed: int = None) -> list:
    """Run each entry; the run seed defaults to the family's own seed."""
    runs = []
    for spec, overrides in load_manifest(source):
        prm = replace(params, **overrides) if overrides else params
        runs.append(run_pipeline(spec, prm, spec.seed if seed is None else seed))
    return runs
