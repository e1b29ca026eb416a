"""Typing derivations for AF2, TTR, its propositional fragment TTR◇, and TTR₀.

A derivation node stores its judgment ``Γ ⊢ t : A``, the rule name, its
premises and any instantiation data.  :func:`check_typing` checks every
node locally.  The small constructors build nodes bottom-up and compute
each conclusion from the premises.

Rules:

- ``r1_axiom``: ``Γ ⊢ x : A`` when ``x : A`` is in ``Γ``
- ``r2_abs``: from ``Γ, x : B ⊢ t : C`` infer ``Γ ⊢ λx t : B → C``
- ``r3_app``: application
- ``r4_gen_fo`` / ``r5_inst_fo``: introduce / instantiate ``∀x``
- ``r6_gen_so`` / ``r7_inst_so``: introduce / instantiate ``∀X``
- ``r8_eq``: rewrite a first-order position using an equation
- ``sub``: subsumption along an embedded subtyping derivation
- ``y_fix``: the fixed-point rule for ``(Y)t``
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Union

from . import lambda_core as lc
from .encodings import builtin
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
    alpha_eq,
    alpha_key,
    erase_diamond,
    fv2,
    fv_fo,
    godel,
    is_propositional,
    match_equation,
    print_formula,
    print_term,
    subformulas,
    subst_fo,
)
from .subtyping import (
    DerivationError,
    EqInst,
    FormulaInst,
    Mode,
    SubDerivation,
    TermInst,
    check_sub,
    godel_lift,
    instantiate,
)
from . import subtyping as st


class System(enum.Enum):
    AF2 = "AF2"
    TTR = "TTR"
    TTR_DIAMOND = "TTRdiamond"
    TTR_ZERO = "TTRzero"

    @classmethod
    def parse(cls, text: str) -> "System":
        for s in cls:
            if s.value.lower() == text.strip().lower():
                return s
        raise ValueError(f"unknown system {text!r}; expected one of {', '.join(s.value for s in cls)}")


TYPING_RULES: dict[str, int] = {
    "r1_axiom": 0,
    "r2_abs": 1,
    "r3_app": 2,
    "r4_gen_fo": 1,
    "r5_inst_fo": 1,
    "r6_gen_so": 1,
    "r7_inst_so": 1,
    "r8_eq": 1,
    "sub": 1,
    "y_fix": 1,
}

Context = tuple[tuple[str, Formula], ...]


@dataclass(frozen=True)
class Judgment:
    context: Context
    subject: lc.Term
    type: Formula

    def lookup(self, x: str) -> Formula | None:
        for name, a in self.context:
            if name == x:
                return a
        return None

    def __str__(self) -> str:
        ctx = ", ".join(f"{x} : {print_formula(a)}" for x, a in self.context)
        return f"{ctx} ⊢ {lc.print_term(self.subject)} : {print_formula(self.type)}"


TypingInst = Union[str, TermInst, FormulaInst, EqInst, SubDerivation, None]


@dataclass(frozen=True)
class TypingDerivation:
    rule: str
    judgment: Judgment
    premises: tuple["TypingDerivation", ...] = ()
    inst: TypingInst = None

    @property
    def context(self) -> Context:
        return self.judgment.context

    @property
    def subject(self) -> lc.Term:
        return self.judgment.subject

    @property
    def type(self) -> Formula:
        return self.judgment.type

    def nodes(self) -> Iterator["TypingDerivation"]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    def rules_used(self) -> set[str]:
        return {n.rule for n in self.nodes()}

    def size(self) -> int:
        return sum(1 for _ in self.nodes())


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------


def _ctx_key(ctx: Context) -> dict[str, tuple]:
    return {x: alpha_key(a) for x, a in ctx}


def _formulas_of(d: TypingDerivation) -> Iterator[Formula]:
    for n in d.nodes():
        yield n.type
        for _, a in n.context:
            yield a
        if isinstance(n.inst, SubDerivation):
            for s in n.inst.nodes():
                yield s.left
                yield s.right


def check_typing(
    d: TypingDerivation, eqs: EquationSystem | None = None, system: System = System.TTR
) -> Judgment:
    """Verify ``d`` in ``system``; return the root judgment or raise :class:`DerivationError`."""
    eqs = eqs or EquationSystem()
    if system is System.TTR_DIAMOND:
        for a in _formulas_of(d):
            if not is_propositional(a):
                raise DerivationError("root", d.rule, f"first-order syntax in a TTR◇ derivation: {print_formula(a)}")
    if system is System.AF2:
        for a in _formulas_of(d):
            if any(type(s) is Mu for s in subformulas(a)):
                raise DerivationError("root", d.rule, "fixed points are not formulas of AF2")
    _check(d, eqs, system, "root")
    return d.judgment


_FORBIDDEN = {
    System.AF2: {"sub", "y_fix"},
    System.TTR: set(),
    System.TTR_DIAMOND: {"r4_gen_fo", "r5_inst_fo", "r8_eq"},
    System.TTR_ZERO: {"r5_inst_fo", "r7_inst_so", "r8_eq"},
}


def _check(d: TypingDerivation, eqs: EquationSystem, system: System, path: str) -> None:
    def fail(msg: str) -> DerivationError:
        return DerivationError(path, d.rule, msg)

    def same(a: Formula, b: Formula, what: str) -> None:
        if not alpha_eq(a, b):
            raise fail(f"{what}: expected {print_formula(b)}, found {print_formula(a)}")

    rule = d.rule
    if rule not in TYPING_RULES:
        raise fail("unknown rule")
    if rule in _FORBIDDEN[system]:
        raise fail(f"rule not available in {system.value}")
    if len(d.premises) != TYPING_RULES[rule]:
        raise fail(f"expects {TYPING_RULES[rule]} premises, has {len(d.premises)}")
    names = [x for x, _ in d.context]
    if len(set(names)) != len(names):
        raise fail("context variables must be distinct")
    for i, p in enumerate(d.premises):
        _check(p, eqs, system, f"{path}/{i}")

    j = d.judgment
    ps = d.premises
    ctx = _ctx_key(j.context)

    def same_context(p: TypingDerivation) -> None:
        if _ctx_key(p.context) != ctx:
            raise fail("premise context differs from the conclusion context")

    def same_subject(p: TypingDerivation) -> None:
        if p.subject != j.subject:
            raise fail("premise subject differs from the conclusion subject")

    match rule:
        case "r1_axiom":
            if type(j.subject) is not lc.FreeVar:
                raise fail("subject must be a variable")
            a = j.lookup(j.subject.name)
            if a is None:
                raise fail(f"{j.subject.name} is not in the context")
            same(j.type, a, "type of the variable")
        case "r2_abs":
            x = d.inst
            if not isinstance(x, str):
                raise fail("missing the bound variable name")
            if type(j.subject) is not lc.Abs:
                raise fail("subject must be an abstraction")
            if type(j.type) is not Arrow:
                raise fail("type must be an arrow")
            if x in ctx:
                raise fail(f"{x} already occurs in the context")
            if x in lc.free_vars(j.subject):
                raise fail(f"{x} is free in the abstraction")
            p = ps[0]
            expected_ctx = dict(ctx)
            expected_ctx[x] = alpha_key(j.type.left)
            if _ctx_key(p.context) != expected_ctx:
                raise fail(f"premise context must be the conclusion context plus {x} : {print_formula(j.type.left)}")
            if p.subject != lc.open_abs(j.subject, x):
                raise fail("premise subject must be the body of the abstraction")
            same(p.type, j.type.right, "premise type")
        case "r3_app":
            if type(j.subject) is not lc.App:
                raise fail("subject must be an application")
            pf, pa = ps
            same_context(pf)
            same_context(pa)
            if pf.subject != j.subject.fn or pa.subject != j.subject.arg:
                raise fail("premise subjects must be the function and the argument")
            if type(pf.type) is not Arrow:
                raise fail("function premise must have an arrow type")
            same(pa.type, pf.type.left, "argument type")
            same(j.type, pf.type.right, "result type")
        case "r4_gen_fo":
            if type(j.type) is not ForallFo:
                raise fail("type must be a first-order universal")
            same_context(ps[0])
            same_subject(ps[0])
            x = j.type.var
            if any(x in fv_fo(a) for _, a in j.context):
                raise fail(f"variable occurs in context: {x}")
            same(ps[0].type, j.type.body, "premise type")
        case "r5_inst_fo":
            same_context(ps[0])
            same_subject(ps[0])
            if type(ps[0].type) is not ForallFo or not isinstance(d.inst, TermInst):
                raise fail("premise must be a first-order universal instantiated by a term")
            same(j.type, instantiate(ps[0].type, d.inst), "instantiated type")
        case "r6_gen_so":
            if type(j.type) is not ForallSo:
                raise fail("type must be a second-order universal")
            same_context(ps[0])
            same_subject(ps[0])
            x = j.type.var
            if any(x in fv2(a) for _, a in j.context):
                raise fail(f"variable occurs in context: {x}")
            same(ps[0].type, j.type.body, "premise type")
        case "r7_inst_so":
            same_context(ps[0])
            same_subject(ps[0])
            if type(ps[0].type) is not ForallSo or not isinstance(d.inst, FormulaInst):
                raise fail("premise must be a second-order universal instantiated by a formula")
            try:
                expected = instantiate(ps[0].type, d.inst)
            except FormulaError as exc:
                raise fail(str(exc)) from None
            same(j.type, expected, "instantiated type")
        case "r8_eq":
            same_context(ps[0])
            same_subject(ps[0])
            inst = d.inst
            if not isinstance(inst, EqInst):
                raise fail("missing the equation instance")
            if match_equation(inst.source, inst.target, eqs) is None:
                raise fail(f"{print_term(inst.source)} = {print_term(inst.target)} is not an equation instance")
            same(ps[0].type, subst_fo(inst.context, {inst.hole: inst.source}), "premise type")
            same(j.type, subst_fo(inst.context, {inst.hole: inst.target}), "conclusion type")
        case "sub":
            same_context(ps[0])
            same_subject(ps[0])
            sd = d.inst
            if not isinstance(sd, SubDerivation):
                raise fail("missing the subtyping derivation")
            if system is System.TTR_DIAMOND and "eq" in sd.rules_used():
                raise fail("equational rewriting is not available in TTR◇")
            mode = Mode.ZERO if system is System.TTR_ZERO else Mode.FULL
            try:
                check_sub(sd, eqs, mode)
            except DerivationError as exc:
                raise DerivationError(f"{path}/sub:{exc.path}", exc.rule, exc.message) from None
            same(sd.left, ps[0].type, "subtyping left side")
            same(j.type, sd.right, "subtyping right side")
        case "y_fix":
            same_context(ps[0])
            if type(j.subject) is not lc.App or j.subject.fn != builtin("Y"):
                raise fail("subject must be (Y)t with Y Turing's fixed-point combinator")
            if ps[0].subject != j.subject.arg:
                raise fail("premise subject must be the argument of Y")
            try:
                expected = y_fix_premise_type(j.type)
            except FormulaError as exc:
                raise fail(str(exc)) from None
            same(ps[0].type, expected, "premise type")


def _split_fo_prefix(a: Formula) -> tuple[list[str], Formula]:
    names = []
    while type(a) is ForallFo:
        names.append(a.var)
        a = a.body
    return names, a


def _wrap_fo(names: list[str], a: Formula) -> Formula:
    for v in reversed(names):
        a = ForallFo(v, a)
    return a


def y_fix_premise_type(conclusion: Formula) -> Formula:
    """For ``∀x⃗[μC x⃗ D <x⃗> → E]``, the premise type ``∀x⃗[C(x⃗) → E] → ∀x⃗[D → E]``."""
    xs, core = _split_fo_prefix(conclusion)
    if type(core) is not Arrow or type(core.left) is not Mu:
        raise FormulaError("conclusion must be ∀x⃗[μC x⃗ D <x⃗> → E]")
    m, e = core.left, core.right
    if m.over != tuple(FoVar(x) for x in xs):
        raise FormulaError("the fixed point must be taken over the quantified variables, in order")
    c = m.symbol
    if c in fv2(e):
        raise FormulaError(f"{c} is free in the result type")
    d = subst_fo(m.body, {y: FoVar(x) for y, x in zip(m.params, xs)})
    atom = PSym(c, tuple(FoVar(x) for x in xs))
    return Arrow(_wrap_fo(xs, Arrow(atom, e)), _wrap_fo(xs, Arrow(d, e)))


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def axiom(context: Context | list, x: str) -> TypingDerivation:
    ctx = tuple(context)
    for name, a in ctx:
        if name == x:
            return TypingDerivation("r1_axiom", Judgment(ctx, lc.FreeVar(x), a))
    raise KeyError(f"{x} is not in the context")


def lam(x: str, d: TypingDerivation) -> TypingDerivation:
    """Discharge ``x`` from the premise context."""
    b = d.judgment.lookup(x)
    if b is None:
        raise KeyError(f"{x} is not in the premise context")
    ctx = tuple((y, a) for y, a in d.context if y != x)
    subject = lc.abstract(d.subject, x)
    return TypingDerivation("r2_abs", Judgment(ctx, subject, Arrow(b, d.type)), (d,), x)


def app(df: TypingDerivation, da: TypingDerivation) -> TypingDerivation:
    if type(df.type) is not Arrow:
        raise FormulaError(f"function type is not an arrow: {print_formula(df.type)}")
    j = Judgment(df.context, lc.App(df.subject, da.subject), df.type.right)
    return TypingDerivation("r3_app", j, (df, da))


def apps(df: TypingDerivation, *das: TypingDerivation) -> TypingDerivation:
    for da in das:
        df = app(df, da)
    return df


def gen_fo(d: TypingDerivation, x: str) -> TypingDerivation:
    return TypingDerivation("r4_gen_fo", Judgment(d.context, d.subject, ForallFo(x, d.type)), (d,))


def inst_fo(d: TypingDerivation, t: FoTerm) -> TypingDerivation:
    inst = TermInst(t)
    return TypingDerivation("r5_inst_fo", Judgment(d.context, d.subject, instantiate(d.type, inst)), (d,), inst)


def gen_so(d: TypingDerivation, x: str, arity: int = 0) -> TypingDerivation:
    return TypingDerivation("r6_gen_so", Judgment(d.context, d.subject, ForallSo(x, arity, d.type)), (d,))


def inst_so(d: TypingDerivation, params: tuple[str, ...], g: Formula) -> TypingDerivation:
    inst = FormulaInst(tuple(params), g)
    return TypingDerivation("r7_inst_so", Judgment(d.context, d.subject, instantiate(d.type, inst)), (d,), inst)


def eq_typing(d: TypingDerivation, context: Formula, hole: str, source: FoTerm, target: FoTerm) -> TypingDerivation:
    inst = EqInst(context, hole, source, target)
    j = Judgment(d.context, d.subject, subst_fo(context, {hole: target}))
    return TypingDerivation("r8_eq", j, (d,), inst)


def subsume(d: TypingDerivation, sd: SubDerivation) -> TypingDerivation:
    return TypingDerivation("sub", Judgment(d.context, d.subject, sd.right), (d,), sd)


def y_fix(d: TypingDerivation) -> TypingDerivation:
    """``(Y)t : ∀x⃗[μC x⃗ D <x⃗> → E]`` from ``t : ∀x⃗[C(x⃗) → E] → ∀y⃗[D' → E']``.

    ``C`` is read off the premise; the two prefixes may use different names.
    """
    if type(d.type) is not Arrow:
        raise FormulaError("premise of the fixed-point rule must be an arrow")
    xs, lcore = _split_fo_prefix(d.type.left)
    ys, rcore = _split_fo_prefix(d.type.right)
    if len(xs) != len(ys) or type(lcore) is not Arrow or type(rcore) is not Arrow:
        raise FormulaError("premise must be ∀x⃗[C(x⃗) → E] → ∀x⃗[D → E]")
    atom = lcore.left
    if type(atom) is not PSym:
        raise FormulaError("premise must start with a predicate symbol atom")
    d_body = subst_fo(rcore.left, {y: FoVar(x) for y, x in zip(ys, xs)})
    m = Mu(atom.name, tuple(xs), d_body, tuple(FoVar(x) for x in xs))
    conclusion = _wrap_fo(xs, Arrow(m, lcore.right))
    subject = lc.App(builtin("Y"), d.subject)
    return TypingDerivation("y_fix", Judgment(d.context, subject, conclusion), (d,))


def weaken(d: TypingDerivation, extra: Context | list) -> TypingDerivation:
    """Add ``extra`` context entries to every node.

    The caller keeps names apart; the result is re-checked like any other
    derivation.
    """
    extra = tuple(extra)
    if not extra:
        return d
    return TypingDerivation(
        d.rule,
        Judgment(extra + d.context, d.subject, d.type),
        tuple(weaken(p, extra) for p in d.premises),
        d.inst,
    )


# ---------------------------------------------------------------------------
# Erasure of first-order information
# ---------------------------------------------------------------------------


def erase_sub(sd: SubDerivation) -> SubDerivation:
    """The erased subtyping derivation: first-order nodes become identity steps and are removed."""
    prem = tuple(erase_sub(p) for p in sd.premises)
    match sd.rule:
        case "forall_ig" | "forall_ig0" if type(sd.left) is ForallFo:
            return prem[0]
        case "forall_id" if type(sd.right) is ForallFo:
            return prem[0]
        case "eq":
            return prem[0]
    inst = sd.inst
    if isinstance(inst, FormulaInst):
        inst = FormulaInst((), erase_diamond(inst.formula))
    rule = sd.rule
    if rule == "forall_ig" and st.is_weak_instance(Binder(sd.left.var, 0), inst):
        rule = "forall_ig0"
    return SubDerivation(rule, erase_diamond(sd.left), erase_diamond(sd.right), prem, inst)


def erase_derivation(d: TypingDerivation) -> TypingDerivation:
    """Map a TTR derivation to a TTR◇ derivation of the erased judgment."""
    prem = tuple(erase_derivation(p) for p in d.premises)
    if d.rule in ("r4_gen_fo", "r5_inst_fo", "r8_eq"):
        return prem[0]
    inst = d.inst
    if isinstance(inst, FormulaInst):
        inst = FormulaInst((), erase_diamond(inst.formula))
    elif isinstance(inst, SubDerivation):
        inst = erase_sub(inst)
    j = Judgment(
        tuple((x, erase_diamond(a)) for x, a in d.context),
        d.subject,
        erase_diamond(d.type),
    )
    return TypingDerivation(d.rule, j, prem, inst)


# ---------------------------------------------------------------------------
# Gödel lifting
# ---------------------------------------------------------------------------


def godel_lift_typing(d: TypingDerivation, cfg: GodelConfig) -> TypingDerivation:
    """Transport a TTR₀ derivation of ``Γ ⊢ t : A`` to one of ``Γ* ⊢ t : A*``."""
    try:
        return _lift(d, cfg)
    except GodelConfigError as exc:
        raise st.GodelLiftError(str(exc)) from None


def _lift(d: TypingDerivation, cfg: GodelConfig) -> TypingDerivation:
    if d.rule in ("r5_inst_fo", "r7_inst_so", "r8_eq"):
        raise st.GodelLiftError(f"rule {d.rule} does not belong to TTR₀")
    prem = tuple(_lift(p, cfg) for p in d.premises)
    ctx = tuple((x, godel(a, cfg)) for x, a in d.context)
    if d.rule == "r6_gen_so":
        assert type(d.type) is ForallSo
        out = prem[0]
        for member in reversed(cfg.entry(d.type.var).family):
            out = gen_so(out, member, d.type.arity)
        return out
    inst = d.inst
    if isinstance(inst, SubDerivation):
        inst = godel_lift(inst, cfg)
    return TypingDerivation(d.rule, Judgment(ctx, d.subject, godel(d.type, cfg)), prem, inst)


def pred_var_arities(d: TypingDerivation) -> dict[str, int]:
    """Arities of all predicate variables appearing anywhere in ``d``."""
    from .formulas import pred_var_arities as pva

    out: dict[str, int] = {}
    for a in _formulas_of(d):
        for k, v in pva(a).items():
            out.setdefault(k, v)
    for n in d.nodes():
        if isinstance(n.inst, FormulaInst):
            for k, v in pva(n.inst.formula).items():
                out.setdefault(k, v)
        if isinstance(n.inst, SubDerivation):
            for s in n.inst.nodes():
                if isinstance(s.inst, (FormulaInst, EqInst)):
                    f = s.inst.formula if isinstance(s.inst, FormulaInst) else s.inst.context
                    for k, v in pva(f).items():
                        out.setdefault(k, v)
    return out
