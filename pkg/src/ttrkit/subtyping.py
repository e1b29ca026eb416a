"""Derivations of the subtyping relation ``A ⊆ B`` and its weak variant ``A ⊆₀ B``.

A :class:`SubDerivation` is an explicit proof tree.  Every node stores its
conclusion and whatever instantiation data its rule needs, so
:func:`check_sub` only ever performs local checks.  Nothing here searches
for derivations.  The constructors in this module build proof trees whose
conclusions are computed from their premises.

Rules (premise count in brackets):

- ``ax`` [0]: ``A ⊆ A``
- ``arrow`` [2]: from ``A ⊆ A'`` and ``B ⊆ B'`` infer ``A' → B ⊆ A → B'``
- ``forall_ig`` / ``forall_ig0`` [1]: from ``A[G/v] ⊆ B`` infer ``∀v A ⊆ B``.
  The weak form only allows a term, or a predicate applied to exactly the
  parameters.
- ``forall_id`` [1]: from ``A ⊆ B`` infer ``A ⊆ ∀v B`` when ``v`` is not free in ``A``
- ``eq`` [1]: from ``A ⊆ B[v/y]`` infer ``A ⊆ B[w/y]`` when ``v = w`` is an
  instance of an equation
- ``tr`` [2]: transitivity
- ``mu_d`` [0]: unfolding ``⊆`` fixed point
- ``mu_prime_g`` [0]: fixed point ``⊆`` unfolding
- ``mu_g`` [1]: from ``D[E/C(x⃗)] ⊆ E`` infer ``μC x⃗ D <t⃗> ⊆ E[t⃗/x⃗]``
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Union

from .formulas import (
    Arrow,
    Binder,
    EquationSystem,
    FoTerm,
    FoVar,
    ForallFo,
    ForallSo,
    Formula,
    FormulaError,
    GodelConfig,
    GodelConfigError,
    Mu,
    PSym,
    PVar,
    _Fresh,
    all_names,
    alpha_eq,
    fv2,
    fv_fo,
    godel,
    match_equation,
    print_formula,
    print_term,
    rename_pred,
    rep_formula,
    subst_fo,
    subst_so,
    subst_term,
    term_vars,
    unfold,
)


class Mode(enum.Enum):
    FULL = "full"
    ZERO = "zero"


RULES: dict[str, int] = {
    "ax": 0,
    "arrow": 2,
    "forall_ig": 1,
    "forall_ig0": 1,
    "forall_id": 1,
    "eq": 1,
    "tr": 2,
    "mu_d": 0,
    "mu_prime_g": 0,
    "mu_g": 1,
}


@dataclass(frozen=True)
class TermInst:
    """Instantiation of a first-order quantifier by a term."""

    term: FoTerm


@dataclass(frozen=True)
class FormulaInst:
    """A formula with parameters ``params``.

    Instantiates a second-order quantifier, or gives the ``E`` of ``mu_g``.
    """

    params: tuple[str, ...]
    formula: Formula


@dataclass(frozen=True)
class EqInst:
    """``context`` with the hole variable ``hole``; ``source = target`` is an equation instance."""

    context: Formula
    hole: str
    source: FoTerm
    target: FoTerm


Inst = Union[TermInst, FormulaInst, EqInst, None]


@dataclass(frozen=True)
class SubDerivation:
    rule: str
    left: Formula
    right: Formula
    premises: tuple["SubDerivation", ...] = ()
    inst: Inst = None

    @property
    def conclusion(self) -> tuple[Formula, Formula]:
        return self.left, self.right

    def nodes(self) -> Iterator["SubDerivation"]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    def rules_used(self) -> set[str]:
        return {n.rule for n in self.nodes()}

    def __str__(self) -> str:
        return f"{print_formula(self.left)} ⊆ {print_formula(self.right)}"


class DerivationError(ValueError):
    """A node fails its rule; ``path`` locates it (``root/0/1`` = second premise of the first premise)."""

    def __init__(self, path: str, rule: str, message: str):
        super().__init__(f"{path} [{rule}]: {message}")
        self.path = path
        self.rule = rule
        self.message = message


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------


def is_weak_instance(binder: Binder, inst: Inst) -> bool:
    """Whether ``inst`` is allowed by the weak rule for a quantifier over ``binder``."""
    if binder.arity is None:
        return isinstance(inst, TermInst)
    if not isinstance(inst, FormulaInst) or len(inst.params) != binder.arity:
        return False
    g = inst.formula
    return type(g) in (PVar, PSym) and g.args == tuple(FoVar(p) for p in inst.params)


def instantiate(quantified: Formula, inst: Inst) -> Formula:
    """Body of a ``∀`` with its bound variable replaced according to ``inst``."""
    match quantified:
        case ForallFo(v, body):
            if not isinstance(inst, TermInst):
                raise FormulaError("a first-order quantifier needs a term")
            return subst_fo(body, {v: inst.term})
        case ForallSo(v, ar, body):
            if not isinstance(inst, FormulaInst):
                raise FormulaError("a second-order quantifier needs a formula")
            if len(inst.params) != ar:
                raise FormulaError(f"{v} has arity {ar}, instantiation has {len(inst.params)} parameters")
            return subst_so(body, v, inst.params, inst.formula)
    raise FormulaError(f"not a universally quantified formula: {print_formula(quantified)}")


def check_sub(
    d: SubDerivation, eqs: EquationSystem | None = None, mode: Mode = Mode.FULL
) -> tuple[Formula, Formula]:
    """Verify every node of ``d``; return its conclusion or raise :class:`DerivationError`."""
    _check(d, eqs or EquationSystem(), mode, "root")
    return d.left, d.right


def _check(d: SubDerivation, eqs: EquationSystem, mode: Mode, path: str) -> None:
    def fail(msg: str) -> DerivationError:
        return DerivationError(path, d.rule, msg)

    def same(a: Formula, b: Formula, what: str) -> None:
        if not alpha_eq(a, b):
            raise fail(f"{what}: expected {print_formula(b)}, found {print_formula(a)}")

    if d.rule not in RULES:
        raise fail("unknown rule")
    if len(d.premises) != RULES[d.rule]:
        raise fail(f"expects {RULES[d.rule]} premises, has {len(d.premises)}")
    for i, p in enumerate(d.premises):
        _check(p, eqs, mode, f"{path}/{i}")
    ps = d.premises
    a, b = d.left, d.right

    match d.rule:
        case "ax":
            if not alpha_eq(a, b):
                raise fail(f"conclusion sides differ: {print_formula(a)} vs {print_formula(b)}")
        case "arrow":
            if type(a) is not Arrow or type(b) is not Arrow:
                raise fail("both sides must be arrows")
            same(ps[0].left, b.left, "first premise left")
            same(ps[0].right, a.left, "first premise right")
            same(ps[1].left, a.right, "second premise left")
            same(ps[1].right, b.right, "second premise right")
        case "forall_ig" | "forall_ig0":
            if type(a) not in (ForallFo, ForallSo):
                raise fail("left side must be universally quantified")
            binder = Binder(a.var, None if type(a) is ForallFo else a.arity)
            weak = is_weak_instance(binder, d.inst)
            if d.rule == "forall_ig0" and not weak:
                raise fail("weak instantiation must be a term or a predicate applied to its parameters")
            if d.rule == "forall_ig" and mode is Mode.ZERO:
                raise fail("full instantiation is not allowed in zero mode")
            try:
                expected = instantiate(a, d.inst)
            except FormulaError as exc:
                raise fail(str(exc)) from None
            same(ps[0].left, expected, "premise left (instantiated body)")
            same(ps[0].right, b, "premise right")
        case "forall_id":
            if type(b) not in (ForallFo, ForallSo):
                raise fail("right side must be universally quantified")
            v = b.var
            free = fv_fo(a) if type(b) is ForallFo else fv2(a)
            if v in free:
                raise fail(f"{v} is free in the left side")
            same(ps[0].left, a, "premise left")
            same(ps[0].right, b.body, "premise right")
        case "eq":
            inst = d.inst
            if not isinstance(inst, EqInst):
                raise fail("missing equation instance")
            if match_equation(inst.source, inst.target, eqs) is None:
                raise fail(f"{print_term(inst.source)} = {print_term(inst.target)} is not an equation instance")
            same(ps[0].left, a, "premise left")
            same(ps[0].right, subst_fo(inst.context, {inst.hole: inst.source}), "premise right")
            same(b, subst_fo(inst.context, {inst.hole: inst.target}), "conclusion right")
        case "tr":
            same(ps[0].left, a, "first premise left")
            same(ps[1].right, b, "second premise right")
            same(ps[1].left, ps[0].right, "middle formula")
        case "mu_d":
            if type(b) is not Mu:
                raise fail("right side must be a fixed point")
            same(a, unfold(b), "left side (unfolding)")
        case "mu_prime_g":
            if mode is Mode.ZERO:
                raise fail("not allowed in zero mode")
            if type(a) is not Mu:
                raise fail("left side must be a fixed point")
            same(b, unfold(a), "right side (unfolding)")
        case "mu_g":
            if type(a) is not Mu:
                raise fail("left side must be a fixed point")
            inst = d.inst
            if not isinstance(inst, FormulaInst):
                raise fail("missing the formula E")
            if inst.params != a.params:
                raise fail("parameters of E must be those of the fixed point")
            e = inst.formula
            same(ps[0].left, subst_so(a.body, a.symbol, a.params, e), "premise left D[E/C]")
            same(ps[0].right, e, "premise right E")
            same(b, subst_fo(e, dict(zip(a.params, a.over))), "right side E[t/x]")


def uses_only_zero_rules(d: SubDerivation) -> bool:
    return not ({"forall_ig", "mu_prime_g"} & d.rules_used())


# ---------------------------------------------------------------------------
# Constructors (conclusions computed from the premises)
# ---------------------------------------------------------------------------


def ax(a: Formula) -> SubDerivation:
    return SubDerivation("ax", a, a)


def arrow(d1: SubDerivation, d2: SubDerivation) -> SubDerivation:
    """From ``A ⊆ A'`` and ``B ⊆ B'`` build ``A' → B ⊆ A → B'``."""
    return SubDerivation("arrow", Arrow(d1.right, d2.left), Arrow(d1.left, d2.right), (d1, d2))


def forall_left(quantified: Formula, inst: Inst, premise: SubDerivation) -> SubDerivation:
    """``∀v A ⊆ B`` from ``A[G/v] ⊆ B``; the weak rule is used whenever it applies."""
    if type(quantified) not in (ForallFo, ForallSo):
        raise FormulaError("forall_left needs a quantified formula")
    binder = Binder(quantified.var, None if type(quantified) is ForallFo else quantified.arity)
    rule = "forall_ig0" if is_weak_instance(binder, inst) else "forall_ig"
    return SubDerivation(rule, quantified, premise.right, (premise,), inst)


def inst_term(t: FoTerm) -> TermInst:
    return TermInst(t)


def inst_formula(params: tuple[str, ...] | list[str], g: Formula) -> FormulaInst:
    return FormulaInst(tuple(params), g)


def inst_var(binder: Binder, name: str | None = None) -> Inst:
    """Weak instantiation of ``binder`` by the variable ``name`` (default: itself)."""
    name = name or binder.name
    if binder.arity is None:
        return TermInst(FoVar(name))
    params = tuple(f"p{i + 1}" for i in range(binder.arity))
    return FormulaInst(params, PVar(name, tuple(FoVar(p) for p in params)))


def forall_right(premise: SubDerivation, var: str, arity: int | None = None) -> SubDerivation:
    """``A ⊆ ∀v B`` from ``A ⊆ B`` (``arity=None`` for a first-order variable)."""
    body = premise.right
    b = ForallFo(var, body) if arity is None else ForallSo(var, arity, body)
    return SubDerivation("forall_id", premise.left, b, (premise,))


def eq_rule(
    premise: SubDerivation, context: Formula, hole: str, source: FoTerm, target: FoTerm
) -> SubDerivation:
    """Rewrite the position ``hole`` of ``context`` from ``source`` to ``target``."""
    return SubDerivation(
        "eq", premise.left, subst_fo(context, {hole: target}), (premise,), EqInst(context, hole, source, target)
    )


def tr(*ds: SubDerivation) -> SubDerivation:
    """Chain ``A ⊆ D1``, ``D1 ⊆ D2``, … by transitivity (left-nested)."""
    out = ds[0]
    for d in ds[1:]:
        out = SubDerivation("tr", out.left, d.right, (out, d))
    return out


def mu_d(m: Mu) -> SubDerivation:
    return SubDerivation("mu_d", unfold(m), m)


def mu_prime_g(m: Mu) -> SubDerivation:
    return SubDerivation("mu_prime_g", m, unfold(m))


def mu_g(m: Mu, e: Formula, premise: SubDerivation) -> SubDerivation:
    """``μC x⃗ D <t⃗> ⊆ E[t⃗/x⃗]`` from ``D[E/C(x⃗)] ⊆ E``."""
    right = subst_fo(e, dict(zip(m.params, m.over)))
    return SubDerivation("mu_g", m, right, (premise,), FormulaInst(m.params, e))


def instantiate_prefix(a: Formula, insts: list[Inst], premise: SubDerivation) -> SubDerivation:
    """Peel ``len(insts)`` quantifiers of ``a`` on the left, instantiating each in turn.

    ``premise`` must start from the fully instantiated body.
    """
    chain = []
    cur = a
    for inst in insts:
        chain.append((cur, inst))
        cur = instantiate(cur, inst)
    out = premise
    for quantified, inst in reversed(chain):
        out = forall_left(quantified, inst, out)
    return out


# ---------------------------------------------------------------------------
# Substitution through a derivation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _FoSub:
    mapping: dict

    def formula(self, a: Formula) -> Formula:
        return subst_fo(a, self.mapping)

    def term(self, t: FoTerm) -> FoTerm:
        return subst_term(t, self.mapping)

    @property
    def targets_fo(self) -> set[str]:
        return set(self.mapping)

    @property
    def target_so(self) -> str | None:
        return None

    @property
    def free_fo(self) -> set[str]:
        out: set[str] = set()
        for t in self.mapping.values():
            out |= term_vars(t)
        return out

    @property
    def free_so(self) -> set[str]:
        return set()

    def without(self, names: set[str]) -> "_FoSub":
        return _FoSub({k: v for k, v in self.mapping.items() if k not in names})


@dataclass(frozen=True)
class _SoSub:
    name: str
    params: tuple[str, ...]
    g: Formula

    def formula(self, a: Formula) -> Formula:
        return subst_so(a, self.name, self.params, self.g)

    def term(self, t: FoTerm) -> FoTerm:
        return t

    @property
    def targets_fo(self) -> set[str]:
        return set()

    @property
    def target_so(self) -> str | None:
        return self.name

    @property
    def free_fo(self) -> set[str]:
        return fv_fo(self.g) - set(self.params)

    @property
    def free_so(self) -> set[str]:
        return fv2(self.g)

    def without(self, names: set[str]) -> "_SoSub":
        return self


_Sub = Union[_FoSub, _SoSub]


def _names_of_derivation(d: SubDerivation) -> set[str]:
    out: set[str] = set()
    for n in d.nodes():
        out |= all_names(n.left) | all_names(n.right)
        match n.inst:
            case TermInst(t):
                out |= term_vars(t)
            case FormulaInst(params, g):
                out |= set(params) | all_names(g)
            case EqInst(ctx, hole, s, t):
                out |= all_names(ctx) | {hole} | term_vars(s) | term_vars(t)
    return out


def _map_inst(inst: Inst, s: _Sub, fresh: _Fresh) -> Inst:
    match inst:
        case TermInst(t):
            return TermInst(s.term(t))
        case FormulaInst(params, g):
            clash = set(params) & s.free_fo
            if clash:
                ren = {p: fresh(p) for p in clash}
                g = subst_fo(g, {p: FoVar(q) for p, q in ren.items()})
                params = tuple(ren.get(p, p) for p in params)
            inner = s.without(set(params)) if isinstance(s, _FoSub) else s
            return FormulaInst(params, inner.formula(g))
    return inst


def _subst_deriv(d: SubDerivation, s: _Sub, fresh: _Fresh) -> SubDerivation:
    prem = d.premises
    match d.rule:
        case "forall_id":
            b = d.right
            v = b.var
            is_fo = type(b) is ForallFo
            conflict = (v in s.targets_fo or v in s.free_fo) if is_fo else (v == s.target_so or v in s.free_so)
            if conflict:
                v2 = fresh(v)
                if is_fo:
                    ren: _Sub = _FoSub({v: FoVar(v2)})
                    new_b: Formula = ForallFo(v2, subst_fo(b.body, {v: FoVar(v2)}))
                else:
                    params = tuple(f"p{i + 1}" for i in range(b.arity))
                    ren = _SoSub(v, params, PVar(v2, tuple(FoVar(p) for p in params)))
                    new_b = ForallSo(v2, b.arity, rename_pred(b.body, v, v2))
                p0 = _subst_deriv(prem[0], ren, fresh)
                d = SubDerivation(d.rule, d.left, new_b, (p0,), d.inst)
                prem = d.premises
            return SubDerivation(
                d.rule, s.formula(d.left), s.formula(d.right), (_subst_deriv(prem[0], s, fresh),), d.inst
            )
        case "mu_g":
            m = d.left
            assert isinstance(m, Mu) and isinstance(d.inst, FormulaInst)
            clash = [x for x in m.params if x in s.targets_fo or x in s.free_fo]
            e = d.inst.formula
            if clash:
                ren_map = {x: fresh(x) for x in clash}
                fo_ren = {x: FoVar(y) for x, y in ren_map.items()}
                xs = tuple(ren_map.get(x, x) for x in m.params)
                m = Mu(m.symbol, xs, subst_fo(m.body, fo_ren), m.over)
                e = subst_fo(e, fo_ren)
                p0 = _subst_deriv(prem[0], _FoSub(fo_ren), fresh)
            else:
                p0 = prem[0]
            new_m = s.formula(m)
            assert isinstance(new_m, Mu)
            if new_m.params != m.params:
                # the substitution renamed the parameters; rename E and the premise alike
                fo_ren = {x: FoVar(y) for x, y in zip(m.params, new_m.params)}
                e = subst_fo(e, fo_ren)
                p0 = _subst_deriv(p0, _FoSub(fo_ren), fresh)
            inner = s.without(set(new_m.params)) if isinstance(s, _FoSub) else s
            new_e = inner.formula(e)
            return SubDerivation(
                "mu_g",
                new_m,
                s.formula(d.right),
                (_subst_deriv(p0, inner, fresh),),
                FormulaInst(new_m.params, new_e),
            )
        case "eq":
            inst = d.inst
            assert isinstance(inst, EqInst)
            ctx, hole = inst.context, inst.hole
            if hole in s.targets_fo or hole in s.free_fo:
                h2 = fresh(hole)
                ctx = subst_fo(ctx, {hole: FoVar(h2)})
                hole = h2
            inner = s.without({hole}) if isinstance(s, _FoSub) else s
            new_inst = EqInst(inner.formula(ctx), hole, s.term(inst.source), s.term(inst.target))
            return SubDerivation(
                "eq", s.formula(d.left), s.formula(d.right), (_subst_deriv(prem[0], s, fresh),), new_inst
            )
    return SubDerivation(
        d.rule,
        s.formula(d.left),
        s.formula(d.right),
        tuple(_subst_deriv(p, s, fresh) for p in prem),
        _map_inst(d.inst, s, fresh),
    )


def subst_derivation(
    d: SubDerivation,
    var: str,
    replacement: FoTerm | Formula,
    params: tuple[str, ...] = (),
) -> SubDerivation:
    """Substitute ``replacement`` for the free variable ``var`` throughout ``d``.

    A first-order term replaces a first-order variable.  A formula with
    parameters ``params`` replaces a predicate variable or symbol.
    Eigenvariables that would clash are renamed apart.
    """
    if isinstance(replacement, Formula):
        s: _Sub = _SoSub(var, tuple(params), replacement)
        extra = all_names(replacement) | set(params)
    else:
        s = _FoSub({var: replacement})
        extra = term_vars(replacement)
    fresh = _Fresh(_names_of_derivation(d) | extra | {var})
    return _subst_deriv(d, s, fresh)


def subst_derivation_fo(d: SubDerivation, mapping: dict[str, FoTerm]) -> SubDerivation:
    """Simultaneous first-order substitution throughout ``d``."""
    extra: set[str] = set(mapping)
    for t in mapping.values():
        extra |= term_vars(t)
    return _subst_deriv(d, _FoSub(dict(mapping)), _Fresh(_names_of_derivation(d) | extra))


# ---------------------------------------------------------------------------
# Monotonicity, μ'g elimination and representatives
# ---------------------------------------------------------------------------


def monotonicity(
    context: Formula,
    var: str,
    params: tuple[str, ...],
    d_ab: SubDerivation,
    positive: bool = True,
) -> SubDerivation:
    """From ``A ⊆ B`` build ``D[A/P] ⊆ D[B/P]`` (or the reverse when ``positive`` is false).

    ``P`` is ``var``, which must occur only positively (resp. negatively)
    in ``context``.  Neither ``A`` nor ``B`` may contain ``P`` free.  The
    result uses only ``ax``, ``arrow``, weak instantiation, ``forall_id``,
    ``tr``, ``mu_d``, ``mu_g`` and substituted copies of ``d_ab``.  So it is a
    zero-mode derivation whenever ``d_ab`` is one.
    """
    a, b = d_ab.left, d_ab.right
    if var in fv2(a) | fv2(b):
        raise FormulaError(f"{var} must not occur free in the substituted formulas")
    avoid_fo = (fv_fo(a) | fv_fo(b)) - set(params)
    avoid_so = fv2(a) | fv2(b)
    fresh = _Fresh(all_names(context) | all_names(a) | all_names(b) | set(params) | {var})

    def go(dd: Formula, pos: bool) -> SubDerivation:
        if var not in fv2(dd):
            return ax(dd)
        match dd:
            case PVar(n, args) | PSym(n, args) if n == var:
                if not pos:
                    raise FormulaError(f"{var} occurs with the wrong polarity")
                return subst_derivation_fo(d_ab, dict(zip(params, args)))
            case Arrow(l, r):
                return arrow(go(l, not pos), go(r, pos))
            case ForallFo(v, body):
                if v in avoid_fo:
                    v2 = fresh(v)
                    body = subst_fo(body, {v: FoVar(v2)})
                    v = v2
                inner = go(body, pos)
                return forall_right(forall_left(ForallFo(v, inner.left), TermInst(FoVar(v)), inner), v)
            case ForallSo(v, ar, body):
                if v in avoid_so:
                    v2 = fresh(v)
                    body = rename_pred(body, v, v2)
                    v = v2
                inner = go(body, pos)
                q = ForallSo(v, ar, inner.left)
                return forall_right(forall_left(q, inst_var(Binder(v, ar)), inner), v, ar)
            case Mu(c, ys, body, over):
                if c in avoid_so:
                    c2 = fresh(c)
                    body = rename_pred(body, c, c2)
                    c = c2
                clash = [y for y in ys if y in avoid_fo]
                if clash:
                    ren = {y: fresh(y) for y in clash}
                    body = subst_fo(body, {y: FoVar(z) for y, z in ren.items()})
                    ys = tuple(ren.get(y, y) for y in ys)
                lo, hi = (a, b) if pos else (b, a)
                # conclusion: μ c ys body[lo] <over> ⊆ μ c ys body[hi] <over>
                e = Mu(c, ys, subst_so(body, var, params, hi), tuple(FoVar(y) for y in ys))
                body_e = subst_so(body, c, ys, e)
                inner = go(body_e, pos)
                premise = tr(inner, mu_d(e))
                m = Mu(c, ys, subst_so(body, var, params, lo), over)
                return mu_g(m, e, premise)
        raise FormulaError(f"cannot build monotonicity derivation through {print_formula(dd)}")

    return go(context, positive)


def eliminate_mu_prime(d: SubDerivation) -> SubDerivation:
    """Replace every ``mu_prime_g`` node by an equivalent ``mu_g``-based derivation."""
    if d.rule == "mu_prime_g":
        m = d.left
        assert isinstance(m, Mu)
        return unfold_left(m)
    if not any(n.rule == "mu_prime_g" for n in d.nodes()):
        return d
    return SubDerivation(d.rule, d.left, d.right, tuple(eliminate_mu_prime(p) for p in d.premises), d.inst)


def unfold_left(m: Mu) -> SubDerivation:
    """``M ⊆ unfold(M)`` without the ``mu_prime_g`` rule.

    Let ``M_x = μC x⃗ D <x⃗>`` and ``E = D[M_x/C]``.  Monotonicity applied to
    ``E ⊆ M_x`` (``mu_d``) gives ``D[E/C] ⊆ D[M_x/C] = E``, and ``mu_g``
    concludes.
    """
    m_x = Mu(m.symbol, m.params, m.body, tuple(FoVar(x) for x in m.params))
    e = unfold(m_x)
    premise = monotonicity(m.body, m.symbol, m.params, mu_d(m_x), positive=True)
    return mu_g(m, e, premise)


def rep_witnesses(a: Formula) -> tuple[SubDerivation, SubDerivation]:
    """Zero-mode derivations of ``A ⊆ Rep(A)`` and ``Rep(A) ⊆ A`` for an arrow type ``A``."""
    match a:
        case Arrow():
            return ax(a), ax(a)
        case ForallFo(v, body) | ForallSo(v, _, body):
            arity = None if type(a) is ForallFo else a.arity
            binder = Binder(v, arity)
            to_rep, from_rep = rep_witnesses(body)
            r = binder.wrap(to_rep.right)
            d1 = forall_right(forall_left(a, inst_var(binder), to_rep), v, arity)
            d2 = forall_right(forall_left(r, inst_var(binder), from_rep), v, arity)
            return d1, d2
        case Mu(c, xs, body, over):
            to_rep, from_rep = rep_witnesses(body)
            inner = Mu(c, xs, body, tuple(FoVar(x) for x in xs))
            fo = dict(zip(xs, over))

            def lift(dd: SubDerivation) -> SubDerivation:
                return subst_derivation_fo(subst_derivation(dd, c, inner, xs), fo)

            d1 = tr(unfold_left(a), lift(to_rep))
            d2 = tr(lift(from_rep), mu_d(a))
            return d1, d2
    raise FormulaError(f"not an arrow type: {print_formula(a)}")


# ---------------------------------------------------------------------------
# Gödel lifting
# ---------------------------------------------------------------------------


class GodelLiftError(ValueError):
    """The derivation cannot be transported through the given Gödel transformation."""


def _uniform_member_atoms(cfg: GodelConfig, x: str, inst: FormulaInst) -> list[FormulaInst]:
    """For ``∀X`` weakly instantiated by ``Y(p⃗)``, the matching instances ``Y_i(p⃗)`` of ``X_i``."""
    g = inst.formula
    if type(g) is PSym:
        raise GodelLiftError(
            f"instantiation of {x} by the predicate symbol {g.name} has no image under the transformation"
        )
    assert type(g) is PVar
    ex, ey = cfg.entry(x), cfg.entry(g.name)
    if len(ex.family) != len(ey.family):
        raise GodelLiftError(f"families of {x} and {g.name} have different sizes")
    # F_Y must be F_X with the families and parameters renamed.
    renamed = ex.formula
    tmp = [f"\x00{i}" for i in range(len(ex.family))]
    for old, t in zip(ex.family, tmp):
        renamed = rename_pred(renamed, old, t)
    for t, new in zip(tmp, ey.family):
        renamed = rename_pred(renamed, t, new)
    renamed = subst_fo(renamed, {p: FoVar(q) for p, q in zip(ex.params, ey.params)})
    if not alpha_eq(renamed, ey.formula):
        raise GodelLiftError(f"the formulas for {x} and {g.name} do not have the same shape")
    return [FormulaInst(inst.params, PVar(m, g.args)) for m in ey.family]


def godel_lift(d: SubDerivation, cfg: GodelConfig) -> SubDerivation:
    """Transport a zero-mode derivation of ``A ⊆₀ B`` to ``A* ⊆₀ B*``."""
    try:
        return _lift(d, cfg)
    except GodelConfigError as exc:
        raise GodelLiftError(str(exc)) from None


def _lift(d: SubDerivation, cfg: GodelConfig) -> SubDerivation:
    left, right = godel(d.left, cfg), godel(d.right, cfg)
    prem = tuple(_lift(p, cfg) for p in d.premises)
    match d.rule:
        case "forall_ig":
            raise GodelLiftError("full instantiation cannot be lifted; zero-mode derivation required")
        case "mu_prime_g":
            raise GodelLiftError("mu_prime_g cannot appear in a zero-mode derivation")
        case "forall_ig0" if type(d.left) is ForallSo:
            assert isinstance(d.inst, FormulaInst)
            insts = _uniform_member_atoms(cfg, d.left.var, d.inst)
            return instantiate_prefix(left, insts, prem[0])
        case "forall_id" if type(d.right) is ForallSo:
            out = prem[0]
            fam = cfg.entry(d.right.var).family
            for member in reversed(fam):
                out = forall_right(out, member, d.right.arity)
            return out
        case "eq":
            inst = d.inst
            assert isinstance(inst, EqInst)
            return SubDerivation(
                "eq", left, right, prem, EqInst(godel(inst.context, cfg), inst.hole, inst.source, inst.target)
            )
        case "mu_g":
            inst = d.inst
            assert isinstance(inst, FormulaInst)
            return SubDerivation("mu_g", left, right, prem, FormulaInst(inst.params, godel(inst.formula, cfg)))
    return SubDerivation(d.rule, left, right, prem, d.inst)
