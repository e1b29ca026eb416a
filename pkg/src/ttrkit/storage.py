"""Checking that a term behaves as a storage operator.

A closed term ``T`` is a storage operator for integers when, for every
``θ`` β-equivalent to the numeral ``n``, ``(T)θ f`` head-reduces to
``(f)σ(τ)``.  Here ``τ`` depends only on ``n`` and ``σ`` substitutes its
free variables other than ``f``.  The module offers two checks:

- Randomized: :func:`verify_storage` runs ``(T)θ f`` for seeded
  β-equivalent variants ``θ`` (from :func:`gen_theta_variants`) and
  matches each output against the skeleton produced by the canonical
  numeral.
- Symbolic, for recursive integers: :func:`symbolic_run` reduces
  ``(T)x_n f`` with ``x_n`` an opaque constant.  Whenever a constant
  reaches head position, it is unfolded one level by introducing a fresh
  constant.  :func:`build_special_application`, :func:`special_substitute`
  and :func:`check_simulation` then replay the symbolic trace against any
  concrete ``θ``.  They predict its exact output and step count.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Iterable

from . import lambda_core as lc
from .encodings import NotANumeral, NumeralKind, decode, numeral, successor
from .lambda_core import Abs, App, BoundVar, Equiv, FreeVar, SymConst, Term

# ---------------------------------------------------------------------------
# Variants of a numeral
# ---------------------------------------------------------------------------


_JUNK: tuple[Term, ...] = (
    lc.parse_term(r"\w. w w"),
    lc.parse_term(r"\a. \b. b"),
    lc.parse_term(r"\a. a"),
    numeral(NumeralKind.RECURSIVE, 1),
)


class VariantError(RuntimeError):
    """A generated variant failed its β-equivalence check (an internal error)."""


def _identity_redex(t: Term, rng: random.Random) -> Term:
    return App(Abs(BoundVar(0), "z"), t)


def _dropping_redex(t: Term, rng: random.Random) -> Term:
    # t is closed, so it can sit under a binder unchanged
    return App(Abs(t, "z"), rng.choice(_JUNK))


def _padding(t: Term, rng: random.Random) -> Term:
    """``λf.λx.(λw.w)((t)f x)``."""
    body = App(Abs(BoundVar(0), "w"), App(App(t, BoundVar(1)), BoundVar(0)))
    return Abs(Abs(body, "x"), "f")


def gen_theta_variants(kind: NumeralKind, n: int, seed: int, count: int) -> list[Term]:
    """``count`` pairwise distinct closed terms β-equivalent to the numeral ``n``.

    The first is the numeral itself.  The others wrap it (or, for ``n ≥ 1``,
    a successor applied to a variant of ``n - 1``) in identity redexes,
    argument-dropping redexes and body padding.  The same arguments always
    produce the same list.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = random.Random(f"{kind.value}/{n}/{seed}")
    target = numeral(kind, n)
    out = [target]
    seen = {target}
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 1000 * count:
            raise VariantError("could not generate enough distinct variants")
        t = _random_variant(kind, n, rng, depth=2)
        if t in seen:
            continue
        if lc.beta_equiv(t, target) is not Equiv.EQUAL:
            raise VariantError(f"variant {lc.print_term(t)} is not β-equivalent to {n}")
        seen.add(t)
        out.append(t)
    return out


def _random_variant(kind: NumeralKind, n: int, rng: random.Random, depth: int) -> Term:
    base_choices = ["canonical"]
    if n >= 1 and depth > 0:
        base_choices += ["successor"]
        if kind is NumeralKind.RECURSIVE:
            base_choices += ["inner"]
    base = rng.choice(base_choices)
    if base == "successor":
        t: Term = App(successor(kind), _random_variant(kind, n - 1, rng, depth - 1))
    elif base == "inner":
        inner = _random_variant(kind, n - 1, rng, depth - 1)
        t = Abs(Abs(App(BoundVar(1), inner), "x"), "f")
    else:
        t = numeral(kind, n)
    wrappers = (_identity_redex, _dropping_redex, _padding)
    for _ in range(rng.randint(1 if base == "canonical" else 0, 2)):
        t = rng.choice(wrappers)(t, rng)
    return t


# ---------------------------------------------------------------------------
# Randomized verification
# ---------------------------------------------------------------------------


def match_holes(pattern: Term, term: Term, holes: Iterable[str]) -> dict[str, Term] | None:
    """First-order matching of ``pattern`` against ``term``.

    Only the free variables in ``holes`` may be instantiated.  Repeated
    holes must match α-equal subterms, and a hole cannot capture a bound
    variable.
    """
    holes = frozenset(holes)
    sigma: dict[str, Term] = {}

    def go(p: Term, t: Term, depth: int) -> bool:
        if type(p) is FreeVar and p.name in holes:
            if t.loose > depth:
                return False
            t0 = lc.shift(t, -depth) if depth else t
            if p.name in sigma:
                return sigma[p.name] == t0
            sigma[p.name] = t0
            return True
        if type(p) is not type(t):
            return False
        match p:
            case Abs():
                return go(p.body, t.body, depth + 1)
            case App():
                return go(p.fn, t.fn, depth) and go(p.arg, t.arg, depth)
        return p == t

    return sigma if go(pattern, term, 0) else None


@dataclass(frozen=True)
class VariantRecord:
    theta: Term
    sigma: dict[str, Term]
    steps: int
    matched: bool
    reason: str = ""


@dataclass(frozen=True)
class StorageCase:
    n: int
    tau_skeleton: Term | None
    holes: tuple[str, ...]
    tau_decodes_to: int | None
    steps: int | None
    variants: tuple[VariantRecord, ...]
    reason: str = ""

    @property
    def passed(self) -> bool:
        return not self.reason and all(v.matched for v in self.variants)


@dataclass(frozen=True)
class StorageReport:
    operator: str
    kind: NumeralKind
    cases: tuple[StorageCase, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def reason(self) -> str:
        for c in self.cases:
            if c.reason:
                return f"n={c.n}: {c.reason}"
            for i, v in enumerate(c.variants):
                if not v.matched:
                    return f"n={c.n}, variant {i}: {v.reason}"
        return ""

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else f"fail ({self.reason})"

    def records(self) -> list[dict]:
        out = []
        for c in self.cases:
            for i, v in enumerate(c.variants):
                out.append(
                    {
                        "operator": self.operator,
                        "kind": self.kind.value,
                        "n": c.n,
                        "variant": i,
                        "theta": lc.print_term(v.theta),
                        "tau_skeleton": None if c.tau_skeleton is None else lc.print_term(c.tau_skeleton),
                        "tau_decodes_to": c.tau_decodes_to,
                        "sigma": {h: lc.print_term(u) for h, u in sorted(v.sigma.items())},
                        "steps": v.steps,
                        "matched": v.matched,
                        "reason": v.reason or c.reason,
                    }
                )
            if not c.variants:
                out.append({"operator": self.operator, "kind": self.kind.value, "n": c.n, "matched": False, "reason": c.reason})
        return out

    def to_jsonl(self) -> str:
        lines = [json.dumps(r, ensure_ascii=False, sort_keys=True) for r in self.records()]
        lines.append(json.dumps({"operator": self.operator, "kind": self.kind.value, "verdict": self.verdict}, ensure_ascii=False))
        return "\n".join(lines) + "\n"

    def table(self) -> str:
        rows = [("n", "tau", "value", "variants", "steps", "result")]
        for c in self.cases:
            steps = sorted({v.steps for v in c.variants})
            span = "-" if not steps else (str(steps[0]) if len(steps) == 1 else f"{steps[0]}..{steps[-1]}")
            tau = "-" if c.tau_skeleton is None else lc.print_term(c.tau_skeleton)
            if len(tau) > 40:
                tau = tau[:37] + "..."
            matched = sum(v.matched for v in c.variants)
            rows.append(
                (str(c.n), tau, str(c.tau_decodes_to), f"{matched}/{len(c.variants)}", span, "ok" if c.passed else "FAIL")
            )
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
        lines.append(f"{self.operator} [{self.kind.value}]: {self.verdict}")
        return "\n".join(lines) + "\n"


def _fresh_f(t: Term) -> FreeVar:
    return FreeVar(lc.fresh_name("f", lc.free_vars(t)))


def _run_output(t: Term, theta: Term, f: FreeVar, fuel: int) -> tuple[Term | None, int, str]:
    """``(u, steps, "")`` when ``(T)θ f`` head-reduces to ``(f)u``; otherwise a reason."""
    hnf, steps = lc.head_normal_form(App(App(t, theta), f), fuel)
    if hnf is None:
        return None, steps, f"fuel exhausted after {steps} steps"
    d = lc.decompose(hnf)
    if d.binders or d.head != f:
        return None, steps, "f not in head position"
    if len(d.args) != 1:
        return None, steps, f"f applied to {len(d.args)} arguments"
    return d.args[0], steps, ""


def verify_storage(
    t: Term,
    kind: NumeralKind,
    n_range: Iterable[int],
    variants_per_n: int = 5,
    fuel: int = lc.DEFAULT_FUEL,
    seed: int = 0,
    name: str = "T",
) -> StorageReport:
    """Run ``(T)θ f`` for the numeral and its variants at each ``n`` and compare the outputs."""
    f = _fresh_f(t)
    cases = []
    for n in n_range:
        u0, steps0, reason = _run_output(t, numeral(kind, n), f, fuel)
        if u0 is None:
            cases.append(StorageCase(n, None, (), None, steps0, (), reason))
            continue
        holes = tuple(sorted(lc.free_vars(u0) - {f.name}))
        value = None
        try:
            value = decode(kind, lc.normalize_left(u0, fuel))
        except (NotANumeral, lc.FuelExhausted):
            reason = "τ is not β-equivalent to a numeral"
        if value is not None and value != n:
            reason = f"τ is the numeral {value}, not {n}"
        records = []
        for theta in gen_theta_variants(kind, n, seed, variants_per_n):
            u, steps, why = _run_output(t, theta, f, fuel)
            if u is None:
                records.append(VariantRecord(theta, {}, steps, False, why))
                continue
            sigma = match_holes(u0, u, holes)
            if sigma is None:
                records.append(VariantRecord(theta, {}, steps, False, "output does not match τ: it depends on θ"))
            else:
                records.append(VariantRecord(theta, sigma, steps, True))
        cases.append(StorageCase(n, u0, holes, value, steps0, tuple(records), reason))
    return StorageReport(name, kind, tuple(cases))


# ---------------------------------------------------------------------------
# Symbolic verification for recursive integers
# ---------------------------------------------------------------------------


class SymbolicError(RuntimeError):
    """The symbolic construction cannot proceed; the message says why."""


@dataclass(frozen=True)
class ConstantRecord:
    """Level ``m`` and argument tuples recorded for levels ``m, m+1, …, n-1``."""

    level: int
    args: tuple[tuple[Term, ...], ...]


@dataclass(frozen=True)
class TraceNode:
    u: Term
    v: Term
    steps: int
    head: str  # constant name, or the name of f for the last node


@dataclass
class SymbolicTrace:
    n: int
    operator: Term
    f: FreeVar
    nodes: list[TraceNode] = field(default_factory=list)
    registry: dict[str, ConstantRecord] = field(default_factory=dict)
    tau: Term | None = None
    tau_value: int | None = None
    arity: int = 3

    @property
    def start_constant(self) -> str:
        return f"x{self.n}"

    @property
    def symbolic_steps(self) -> int:
        return sum(node.steps for node in self.nodes)


def symbolic_run(t: Term, n: int, fuel: int = lc.DEFAULT_FUEL, arity: int = 3) -> SymbolicTrace:
    """Reduce ``(T)x_n f`` symbolically; raise :class:`SymbolicError` on any failed shape check.

    A head normal form ``(x_m)u1 … u_k`` (``k = arity``) continues with
    ``(u1)x_{m-1} u3 … u_k`` when ``m ≠ 0`` and with ``(u2)u3 … u_k`` when
    ``m = 0``.  Here ``x_{m-1}`` is a new constant recording ``u1 … u_k``.
    The run ends at ``(f)τ``.  ``arity`` is 3 for the negation translation
    of the recursive integers.  A Gödel family with ``j`` members gives
    ``2 + j``.
    """
    if arity < 2:
        raise ValueError("arity must be at least 2")
    f = _fresh_f(t)
    tr = SymbolicTrace(n, t, f, arity=arity)
    start = SymConst(tr.start_constant)
    tr.registry[start.name] = ConstantRecord(n, ())
    keys: dict[tuple, str] = {(n, ()): start.name}
    u = App(App(t, start), f)
    remaining = fuel
    while True:
        hnf, steps = lc.head_normal_form(u, remaining)
        if hnf is None:
            raise SymbolicError(f"fuel exhausted after {fuel} steps in total")
        remaining -= steps
        d = lc.decompose(hnf)
        if d.binders:
            raise SymbolicError(f"head normal form starts with λ: {lc.print_term(hnf)}")
        if d.head == f:
            if len(d.args) != 1:
                raise SymbolicError(f"f applied to {len(d.args)} arguments")
            tr.nodes.append(TraceNode(u, hnf, steps, f.name))
            tr.tau = d.args[0]
            break
        if type(d.head) is not SymConst or d.head.name not in tr.registry:
            raise SymbolicError(f"head {lc.print_term(d.head)} is neither f nor a registered constant")
        if len(d.args) != arity:
            raise SymbolicError(
                f"constant {d.head.name} applied to {len(d.args)} arguments; the typing forces exactly {arity}"
            )
        tr.nodes.append(TraceNode(u, hnf, steps, d.head.name))
        rec = tr.registry[d.head.name]
        if rec.level != 0:
            new_rec = ConstantRecord(rec.level - 1, (d.args,) + rec.args)
            key = (new_rec.level, new_rec.args)
            if key in keys:
                raise SymbolicError(f"constant for level {new_rec.level} reused: the reduction would loop")
            name = f"x{new_rec.level}_{len(tr.registry)}"
            keys[key] = name
            tr.registry[name] = new_rec
            u = lc.apply(d.args[0], SymConst(name), *d.args[2:])
        else:
            u = lc.apply(d.args[1], *d.args[2:])
    if lc.constants(tr.tau):
        raise SymbolicError("τ still contains a symbolic constant: the output depends on the input term")
    try:
        tr.tau_value = decode(NumeralKind.RECURSIVE, lc.normalize_left(tr.tau, remaining))
    except (NotANumeral, lc.FuelExhausted):
        raise SymbolicError("τ is not β-equivalent to a recursive numeral") from None
    return tr


@dataclass(frozen=True)
class SpecialApplication:
    """``entries[m]`` for ``m = 0..n``; ``entries[m]`` has free variables among ``f_j, x_j`` (``j ≥ m``)."""

    n: int
    entries: tuple[Term, ...]
    hnf_steps: tuple[int, ...]

    def binder_names(self, m: int) -> tuple[str, str]:
        return special_binder_names(m)


def special_binder_names(m: int) -> tuple[str, str]:
    return f"f_{m}", f"x_{m}"


class SpecialApplicationError(ValueError):
    """The input is not β-equivalent to the requested recursive numeral."""


def build_special_application(theta_n: Term, n: int, fuel: int = lc.DEFAULT_FUEL) -> SpecialApplication:
    """Peel ``θ_n`` one level at a time.

    ``entries[m]`` is the body of the head normal form of ``entries[m+1]``.
    That form is ``λf_m.λx_m.(f_m)entries[m]``, with its binders named
    ``f_m, x_m``.
    """
    entries: list[Term] = [theta_n]
    steps: list[int] = []
    for m in range(n - 1, -1, -1):
        hnf, k = lc.head_normal_form(entries[-1], fuel)
        if hnf is None:
            raise SpecialApplicationError(f"entry {m + 1} has no head normal form within the fuel")
        if not (type(hnf) is Abs and type(hnf.body) is Abs and type(hnf.body.body) is App
                and hnf.body.body.fn == BoundVar(1)):
            raise SpecialApplicationError(f"entry {m + 1} does not head-reduce to λf.λx.(f)t: {lc.print_term(hnf)}")
        fn, xn = special_binder_names(m)
        inner = hnf.body.body.arg  # under two binders: index 1 = f_m, index 0 = x_m
        body = lc.instantiate(lc.instantiate(inner, FreeVar(xn)), FreeVar(fn))
        entries.append(body)
        steps.append(k)
    hnf0, k0 = lc.head_normal_form(entries[-1], fuel)
    if hnf0 is None or hnf0 != numeral(NumeralKind.RECURSIVE, 0):
        raise SpecialApplicationError("entry 0 does not head-reduce to 0̄")
    steps.append(k0)
    entries.reverse()
    steps.reverse()
    return SpecialApplication(n, tuple(entries), tuple(steps))


def special_substitute(t: Term, sa: SpecialApplication, registry: dict[str, ConstantRecord]) -> Term:
    """``S_θ(t)``: replace each constant ``x_m`` by ``entries[m]`` with its recorded arguments plugged in.

    The first two recorded arguments at level ``j`` are substituted for
    ``f_j`` and ``x_j``.  Terms without constants are returned unchanged.
    """
    memo: dict[str, Term] = {}

    def image(name: str) -> Term:
        if name in memo:
            return memo[name]
        rec = registry[name]
        bindings: dict[str, Term] = {}
        for j, args in enumerate(rec.args):
            fn, xn = special_binder_names(rec.level + j)
            bindings[fn] = go(args[0])
            bindings[xn] = go(args[1])
        out = lc.substitute(sa.entries[rec.level], bindings) if bindings else sa.entries[rec.level]
        memo[name] = out
        return out

    def go(u: Term) -> Term:
        if not u.has_const:
            return u
        return lc.replace_constants(u, {c: image(c) for c in lc.constants(u)})

    return go(t)


@dataclass(frozen=True)
class SimulationResult:
    passed: bool
    reason: str
    predicted_steps: int
    concrete_steps: int | None
    output: Term | None


def check_simulation(trace: SymbolicTrace, sa: SpecialApplication, fuel: int = lc.DEFAULT_FUEL) -> SimulationResult:
    """Replay ``trace`` against the concrete input ``sa.entries[n]``.

    Checks that the images of ``U_1`` and of every ``V_i`` under ``S_θ``
    have a common head reduct.  Then checks that ``(T)θ f`` head-reduces to
    ``(f)S_θ(τ)`` in exactly the predicted number of steps.
    """
    if sa.n != trace.n:
        raise ValueError(f"special application for {sa.n}, trace for {trace.n}")
    reg = trace.registry
    s_u1 = special_substitute(trace.nodes[0].u, sa, reg)
    for i, node in enumerate(trace.nodes):
        s_v = special_substitute(node.v, sa, reg)
        if lc.common_reduct(s_u1, s_v, fuel) is None:
            return SimulationResult(False, f"node {i + 1}: no common head reduct", 0, None, None)
    predicted = trace.symbolic_steps
    for node in trace.nodes[:-1]:
        predicted += sa.hnf_steps[reg[node.head].level] + 2
    assert trace.tau is not None
    expected = App(trace.f, special_substitute(trace.tau, sa, reg))
    hnf, steps = lc.head_normal_form(App(App(trace.operator, sa.entries[trace.n]), trace.f), fuel)
    if hnf is None:
        return SimulationResult(False, "concrete run exhausted its fuel", predicted, steps, None)
    if hnf != expected:
        return SimulationResult(False, "concrete output differs from (f)S(τ)", predicted, steps, hnf)
    if steps != predicted:
        return SimulationResult(False, f"concrete run took {steps} steps, predicted {predicted}", predicted, steps, hnf)
    return SimulationResult(True, "", predicted, steps, hnf)
