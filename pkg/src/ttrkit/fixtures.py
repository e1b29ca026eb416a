"""The built-in corpus of typing derivations.

Every fixture is assembled with the constructors of
:mod:`ttrkit.typing_rules`, so conclusions are computed rather than
asserted.  The checker then confirms them.  Fixtures cover propositional
and first-order recursive integers, the storage operators ``T1_rec`` and
``T2_rec``, and a self-application term typed with a fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from . import lambda_core as lc
from . import subtyping as st
from . import typing_rules as ty
from .encodings import builtin
from .formulas import (
    BOT,
    Arrow,
    EquationSystem,
    FnApp,
    FoTerm,
    FoVar,
    ForallSo,
    Formula,
    GodelConfig,
    Mu,
    PVar,
    Signature,
    arrows,
    godel,
    neg,
    parse_equations,
    parse_fo_term,
    parse_formula,
    subst_so,
    unfold,
)
from .typing_rules import System, TypingDerivation, axiom, app, apps, gen_fo, gen_so, lam, subsume, weaken

SIG = Signature.arithmetic()
SIG_N = Signature.arithmetic(N=1)
SIG_EQ = Signature({"0": 0, "s": 1, "p": 1}, {})

NR_BODY = "!X. (!y. N(y) -> X(s(y))) -> X(0) -> X(z)"
NR_STAR_BODY = "!X. (!y. N(y) -> ~X(s(y))) -> ~X(0) -> ~X(z)"


def F(text: str, sig: Signature = SIG) -> Formula:
    return parse_formula(text, sig)


def nr(t: str) -> Formula:
    """``N^r[t]``: the recursive integers as a least fixed point."""
    return F(f"mu N z . {NR_BODY} <{t}>")


def nnr(t: str) -> Formula:
    return neg(neg(nr(t)))


def nr_star(t: str) -> Formula:
    """``N^r*[t]``: the Gödel transform of ``N^r[t]`` with ``F_X = ¬X``."""
    return F(f"mu N z . {NR_STAR_BODY} <{t}>")


NRP = F("mu N . !X. (N -> X) -> X -> X <>")
"""Propositional recursive integers."""

B_REMARK = F("mu C . (!X. X) -> C <>")


@dataclass(frozen=True)
class Fixture:
    name: str
    system: System
    derivation: TypingDerivation
    equations: EquationSystem = EquationSystem()
    signature: Signature = field(default_factory=lambda: SIG)
    description: str = ""


# ---------------------------------------------------------------------------
# Propositional recursive integers
# ---------------------------------------------------------------------------


def prop_zero() -> TypingDerivation:
    """``⊢ λf.λx.x : N^r`` in five nodes."""
    ctx = (("f", Arrow(NRP, PVar("X"))), ("x", PVar("X")))
    d = lam("f", lam("x", axiom(ctx, "x")))
    d = gen_so(d, "X")
    return subsume(d, st.mu_d(NRP))


def prop_succ() -> TypingDerivation:
    """``⊢ s̄ : N^r → N^r``."""
    ctx = (("n", NRP), ("f", Arrow(NRP, PVar("X"))), ("x", PVar("X")))
    d = lam("f", lam("x", app(axiom(ctx, "f"), axiom(ctx, "n"))))
    d = subsume(gen_so(d, "X"), st.mu_d(NRP))
    return lam("n", d)


def prop_delta() -> TypingDerivation:
    """``⊢ δ : ¬¬N^r``."""
    ctx = (("k", neg(NRP)),)
    return lam("k", app(axiom(ctx, "k"), weaken(prop_zero(), ctx)))


def prop_redex_zero() -> TypingDerivation:
    """``⊢ (λz.z)0̄ : N^r``; it reduces to the subject of :func:`prop_zero`."""
    ident = lam("z", axiom((("z", NRP),), "z"))
    return app(ident, prop_zero())


# ---------------------------------------------------------------------------
# AF2
# ---------------------------------------------------------------------------


def af2_identity() -> TypingDerivation:
    return gen_so(lam("x", axiom((("x", PVar("X")),), "x")), "X")


def af2_church_two() -> TypingDerivation:
    """``⊢ λf.λx.(f)(f)x : ∀X((X → X) → X → X)``."""
    X = PVar("X")
    ctx = (("f", Arrow(X, X)), ("x", X))
    f = axiom(ctx, "f")
    return gen_so(lam("f", lam("x", app(f, app(f, axiom(ctx, "x"))))), "X")


def af2_first_order() -> TypingDerivation:
    """``⊢ λx.x : ∀y∀X(X(y) → X(s(y)) → ...)`` style: identity on a first-order atom, instantiated."""
    A = F("X(y)")
    d = gen_so(gen_fo(lam("x", axiom((("x", A),), "x")), "y"), "X", 1)
    d = ty.inst_so(d, ("q",), F("X(s(q))"))
    return ty.inst_fo(d, FnApp("0"))


# ---------------------------------------------------------------------------
# First-order recursive integers
# ---------------------------------------------------------------------------


def zero_rec() -> TypingDerivation:
    """``⊢ 0̄ : N^r[0]``."""
    m = nr("0")
    body = unfold(m)
    assert type(body) is ForallSo
    step, base = body.body.left, body.body.right.left
    ctx = (("f", step), ("x", base))
    d = gen_so(lam("f", lam("x", axiom(ctx, "x"))), "X", 1)
    return subsume(d, st.mu_d(m))


def _step_type(var: str, pv: str = "X") -> Formula:
    """``∀var(N^r[var] → X(s var))``."""
    return F(f"!{var}. ({_nr_text(var)}) -> {pv}(s({var}))")


def _nr_text(t: str) -> str:
    return f"mu N z . {NR_BODY} <{t}>"


def _succ_body(
    arg_ctx: tuple, arg: TypingDerivation, y: str, fn: str = "f", xn: str = "x", pv: str = "X"
) -> TypingDerivation:
    """``λf.λx.(f)u : N^r[s y]`` given ``u : N^r[y]`` typed in ``arg_ctx``.

    ``pv`` names the generalized predicate variable; it must differ from
    any variable generalized inside ``arg``.
    """
    ctx = arg_ctx + ((fn, _step_type("w", pv)), (xn, F(f"{pv}(0)")))
    f = axiom(ctx, fn)
    f_at_y = subsume(f, st.forall_left(f.type, st.inst_term(_term(y)), st.ax(Arrow(nr(y), F(f"{pv}(s({y}))")))))
    d = lam(fn, lam(xn, app(f_at_y, _reweaken(arg, ctx))))
    d = gen_so(d, pv, 1)
    return subsume(d, st.mu_d(nr(f"s({y})")))


def _term(text: str, sig: Signature = SIG) -> FoTerm:
    return parse_fo_term(text, sig)


def _reweaken(d: TypingDerivation, ctx: tuple) -> TypingDerivation:
    """``d`` with its context extended to ``ctx`` (entries already present are kept)."""
    have = {x for x, _ in d.context}
    extra = tuple((x, a) for x, a in ctx if x not in have)
    return weaken(d, extra) if extra else d


def succ_rec() -> TypingDerivation:
    """``⊢ s̄ : ∀y(N^r[y] → N^r[s y])``."""
    nctx = (("n", nr("y")),)
    d = _succ_body(nctx, axiom(nctx, "n"), "y")
    return gen_fo(lam("n", d), "y")


def one_rec() -> TypingDerivation:
    """``⊢ 1̄ : N^r[s 0]``."""
    return _succ_body((), zero_rec(), "0", "g", "e", "Z")


def succ_zero_app() -> TypingDerivation:
    """``⊢ (s̄)0̄ : N^r[s 0]``; its head reduct is the subject of :func:`one_rec`."""
    s = succ_rec()
    s0 = subsume(s, st.forall_left(s.type, st.inst_term(FnApp("0")), st.ax(Arrow(nr("0"), nr("s(0)")))))
    return app(s0, zero_rec())


def delta_rec() -> TypingDerivation:
    """``⊢ δ : ¬¬N^r[0]``."""
    ctx = (("k", neg(nr("0"))),)
    return lam("k", app(axiom(ctx, "k"), weaken(zero_rec(), ctx)))


def succ_inst(t: str) -> TypingDerivation:
    """``⊢ s̄ : N^r[t] → N^r[s t]`` by a weak instantiation inside a subsumption."""
    s = succ_rec()
    return subsume(s, st.forall_left(s.type, st.inst_term(_term(t)), st.ax(Arrow(nr(t), nr(f"s({t})")))))


def g_rec() -> TypingDerivation:
    """``⊢ G : ∀w(¬¬N^r[w] → ¬¬N^r[s w])``."""
    ctx = (("a", nnr("w")), ("b", neg(nr("s(w)"))), ("c", nr("w")))
    s_at_w = weaken(succ_inst("w"), ctx)
    inner = lam("c", app(axiom(ctx, "b"), app(s_at_w, axiom(ctx, "c"))))
    d = lam("a", lam("b", app(axiom(ctx[:2], "a"), inner)))
    return gen_fo(d, "w")


def _g_at(t: str, ctx: tuple) -> TypingDerivation:
    g = g_rec()
    g = subsume(g, st.forall_left(g.type, st.inst_term(_term(t)), st.ax(Arrow(nnr(t), nnr(f"s({t})")))))
    return weaken(g, ctx)


def h_rec() -> TypingDerivation:
    """``⊢ H : ∀x(N(x) → ¬¬N^r[x]) → ∀v(Φ*(N, v) → ¬¬N^r[v])`` with ``N`` a predicate symbol."""
    hyp = F("!x. N(x) -> " + f"~~({_nr_text('x')})", SIG_N)
    phi = F(NR_STAR_BODY.replace("X(z)", "X(v)"), SIG_N)
    ctx = (("h", hyp), ("p", phi), ("q", F("N(u)", SIG_N)))
    h = axiom(ctx, "h")
    h_u = subsume(h, st.forall_left(hyp, st.inst_term(FoVar("u")), st.ax(Arrow(F("N(u)", SIG_N), nnr("u")))))
    step = gen_fo(lam("q", app(_g_at("u", ctx), app(h_u, axiom(ctx, "q")))), "u")
    ctx2 = ctx[:2]
    p = ty.inst_so(axiom(ctx2, "p"), ("p1",), neg(nr("p1")))
    body = apps(p, step, weaken(delta_rec(), ctx2))
    return lam("h", gen_fo(lam("p", body), "v"))


def t1_rec() -> TypingDerivation:
    """``⊢ T1 : ∀x(N^r*[x] → ¬¬N^r[x])`` by the fixed-point rule."""
    return ty.y_fix(h_rec())


def tau_var() -> TypingDerivation:
    """``⊢ τ : P → ¬¬N^r[0]`` for a free proposition ``P``."""
    ctx = (("d", PVar("P")), ("g", neg(nr("0"))))
    return lam("d", lam("g", app(axiom(ctx, "g"), weaken(zero_rec(), ctx))))


def _r_formula() -> Formula:
    y_type = f"P -> (P -> ~~({_nr_text('0')})) -> P -> ~~({_nr_text('y')})"
    return F(f"!P. !y. ({y_type}) -> P -> ~~({_nr_text('s(y)')})")


R = _r_formula()


def rho_rec() -> TypingDerivation:
    """``⊢ ρ : R`` where ``R = ∀P∀y((P → (P → ¬¬N^r[0]) → P → ¬¬N^r[y]) → P → ¬¬N^r[s y])``.

    The proposition is called ``P`` so that it stays apart from the ``∀X``
    generalized inside the typing of ``0̄``.
    """
    X = PVar("P")
    y_type = Arrow(X, Arrow(Arrow(X, nnr("0")), Arrow(X, nnr("m"))))
    ctx = (("y", y_type), ("z", X))
    tau = weaken(tau_var(), ctx)
    inner = apps(axiom(ctx, "y"), axiom(ctx, "z"), tau, axiom(ctx, "z"))
    d = app(_g_at("m", ctx), inner)
    d = lam("y", lam("z", d))
    return gen_so(gen_fo(d, "m"), "P")


def _f_of(t: str) -> Formula:
    """``F[t] = R → (R → ¬¬N^r[0]) → R → ¬¬N^r[t]``."""
    return Arrow(R, Arrow(Arrow(R, nnr("0")), Arrow(R, nnr(t))))


def nr_star_sub_f() -> st.SubDerivation:
    """``N^r*[x] ⊆ F[x]`` for the two-variable Gödel configuration ``F_X = X, X' → ⊥``."""
    m = nr_star2("x")
    e = _f_of("z")
    start = subst_so(m.body, m.symbol, m.params, e)
    d_r = st.forall_left(R, st.FormulaInst((), R), st.ax(st.instantiate(R, st.FormulaInst((), R))))
    tail = Arrow(Arrow(R, nnr("0")), Arrow(R, nnr("z")))
    core = st.arrow(d_r, st.ax(tail))
    premise = st.instantiate_prefix(
        start,
        [st.FormulaInst(("p1",), R), st.FormulaInst(("p1",), neg(nr("p1")))],
        core,
    )
    return st.mu_g(m, e, premise)


GODEL_PAIR = GodelConfig.uniform({"X": 1}, ("", "'"), lambda atoms, _: arrows(atoms[0], atoms[1], BOT))
"""``V_X = {X, X'}`` and ``F_X = X(x), X'(x) → ⊥``."""


def nr_star2(t: str) -> Mu:
    """``N^r*[t]`` for :data:`GODEL_PAIR`."""
    m = godel(nr(t), GODEL_PAIR)
    assert type(m) is Mu
    return m


def t2_rec() -> TypingDerivation:
    """``⊢ T2 : ∀x(N^r*[x] → ¬¬N^r[x])``, with ``N^r*`` from ``F_X = X, X' → ⊥``."""
    ctx = (("v", nr_star2("x")),)
    nu = subsume(axiom(ctx, "v"), nr_star_sub_f())
    rho = weaken(rho_rec(), ctx)
    tau_d = weaken(ty.inst_so(gen_so(tau_var(), "P"), (), R), ctx)
    body = apps(nu, rho, tau_d, rho)
    return gen_fo(lam("v", body), "x")


# ---------------------------------------------------------------------------
# Fixed-point type for a self-application term
# ---------------------------------------------------------------------------


def _bot_all_sub_b() -> st.SubDerivation:
    """``∀X X ⊆ B``."""
    all_x = F("!X. X")
    return st.forall_left(all_x, st.FormulaInst((), B_REMARK), st.ax(B_REMARK))


def _fn_sub_b() -> st.SubDerivation:
    """``B → B ⊆ B``: contravariance into ``∀X X → B`` then fold."""
    return st.tr(st.arrow(_bot_all_sub_b(), st.ax(B_REMARK)), st.mu_d(B_REMARK))


def _to_b(d: TypingDerivation) -> TypingDerivation:
    return subsume(d, _fn_sub_b())


def remark_omega(ctx: tuple = ()) -> TypingDerivation:
    """``⊢ λz.(z)z : (B → B) → B``."""
    bb = Arrow(B_REMARK, B_REMARK)
    c = ctx + (("z", bb),)
    return lam("z", app(axiom(c, "z"), _to_b(axiom(c, "z"))))


def remark_identity(ctx: tuple = ()) -> TypingDerivation:
    c = ctx + (("i", B_REMARK),)
    return lam("i", axiom(c, "i"))


def remark_k(ctx: tuple = ()) -> TypingDerivation:
    """``⊢ λa.λb.a : B → B`` (the inner ``λb.a : B → B`` folded into ``B``)."""
    c = ctx + (("a", B_REMARK), ("b", B_REMARK))
    return lam("a", _to_b(lam("b", axiom(c, "a"))))


def remark_term() -> TypingDerivation:
    """``⊢ λx.(λy.((x)(y)I)(y)K)ω : (B → B → B) → B`` with ``B = μC(∀X X → C)``."""
    bbb = Arrow(B_REMARK, Arrow(B_REMARK, B_REMARK))
    yt = Arrow(Arrow(B_REMARK, B_REMARK), B_REMARK)
    ctx = (("x", bbb), ("y", yt))
    y = axiom(ctx, "y")
    body = apps(axiom(ctx, "x"), app(y, remark_identity(ctx)), app(y, remark_k(ctx)))
    d = app(lam("y", body), remark_omega(ctx[:1]))
    return lam("x", d)


def remark_normal_form() -> TypingDerivation:
    """``⊢ λx.(x)I(λb.K) : (B → B → B) → B`` for the normal form of the self-application term."""
    bbb = Arrow(B_REMARK, Arrow(B_REMARK, B_REMARK))
    ctx = (("x", bbb),)
    c2 = ctx + (("e", B_REMARK),)
    ident = _to_b(remark_identity(ctx))
    const = _to_b(lam("e", _to_b(remark_k(c2))))
    return lam("x", apps(axiom(ctx, "x"), ident, const))


# ---------------------------------------------------------------------------
# Equational rewriting
# ---------------------------------------------------------------------------


EQ_PRED = parse_equations("p(s(x)) = x", SIG_EQ)


def zero_rec_eq() -> TypingDerivation:
    """``⊢ 0̄ : N^r[p(s 0)]`` from ``⊢ 0̄ : N^r[0]`` and the equation ``p(s x) = x``."""
    ctx_formula = F(f"mu N z . {NR_BODY} <h>", SIG_EQ)
    return ty.eq_typing(zero_rec(), ctx_formula, "h", FnApp("0"), _term("p(s(0))", SIG_EQ))


def succ_r5() -> TypingDerivation:
    """``⊢ s̄ : N^r[0] → N^r[s 0]`` using the first-order instantiation rule."""
    return ty.inst_fo(succ_rec(), FnApp("0"))


# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def corpus() -> dict[str, Fixture]:
    items = [
        Fixture("prop_zero", System.TTR_ZERO, prop_zero(), description="0̄ : N^r (propositional)"),
        Fixture("prop_succ", System.TTR_ZERO, prop_succ(), description="s̄ : N^r → N^r"),
        Fixture("prop_delta", System.TTR_ZERO, prop_delta(), description="δ : ¬¬N^r"),
        Fixture("prop_redex_zero", System.TTR_ZERO, prop_redex_zero(), description="(λz.z)0̄ : N^r"),
        Fixture("af2_identity", System.AF2, af2_identity(), description="λx.x : ∀X(X → X)"),
        Fixture("af2_church_two", System.AF2, af2_church_two(), description="Church 2 : ∀X((X → X) → X → X)"),
        Fixture("af2_first_order", System.AF2, af2_first_order(), description="instantiation of ∀X∀y(X(y) → X(y))"),
        Fixture("zero_rec", System.TTR_ZERO, zero_rec(), description="0̄ : N^r[0]"),
        Fixture("succ_rec", System.TTR_ZERO, succ_rec(), description="s̄ : ∀y(N^r[y] → N^r[s y])"),
        Fixture("one_rec", System.TTR_ZERO, one_rec(), description="1̄ : N^r[s 0]"),
        Fixture("succ_zero_app", System.TTR_ZERO, succ_zero_app(), description="(s̄)0̄ : N^r[s 0]"),
        Fixture("delta_rec", System.TTR_ZERO, delta_rec(), description="δ : ¬¬N^r[0]"),
        Fixture("g_rec", System.TTR_ZERO, g_rec(), description="G : ∀w(¬¬N^r[w] → ¬¬N^r[s w])"),
        Fixture("tau_var", System.TTR_ZERO, tau_var(), description="τ : X → ¬¬N^r[0]"),
        Fixture("rho_rec", System.TTR_ZERO, rho_rec(), description="ρ : R"),
        Fixture("h_rec", System.TTR, h_rec(), signature=SIG_N, description="H, the body of T1"),
        Fixture("t1_rec", System.TTR, t1_rec(), signature=SIG_N, description="T1 : ∀x(N^r*[x] → ¬¬N^r[x])"),
        Fixture("t2_rec", System.TTR, t2_rec(), description="T2 : ∀x(N^r*[x] → ¬¬N^r[x])"),
        Fixture("remark_term", System.TTR_DIAMOND, remark_term(), description="self-application term : (B → B → B) → B"),
        Fixture("remark_normal_form", System.TTR_DIAMOND, remark_normal_form(), description="its normal form, same type"),
        Fixture("zero_rec_eq", System.TTR, zero_rec_eq(), EQ_PRED, SIG_EQ, description="0̄ : N^r[p(s 0)] by an equation"),
        Fixture("succ_r5", System.TTR, succ_r5(), description="s̄ : N^r[0] → N^r[s 0] by ∀-elimination"),
    ]
    return {f.name: f for f in items}


CONSERVATION_PAIRS: tuple[tuple[str, str], ...] = (
    ("prop_redex_zero", "prop_zero"),
    ("succ_zero_app", "one_rec"),
    ("remark_term", "remark_normal_form"),
)
"""``(a, b)``: the subject of ``b`` is a β-reduct of the subject of ``a``, at the same type."""


def expected_subject(name: str) -> lc.Term | None:
    """The named closed term a fixture is meant to type, when it has one."""
    return {
        "prop_zero": lc.parse_term(r"\f. \x. x"),
        "zero_rec": lc.parse_term(r"\f. \x. x"),
        "succ_rec": builtin("s_rec"),
        "prop_succ": builtin("s_rec"),
        "delta_rec": builtin("delta"),
        "prop_delta": builtin("delta"),
        "g_rec": builtin("G"),
        "h_rec": builtin("H"),
        "t1_rec": builtin("T1_rec"),
        "tau_var": builtin("tau"),
        "rho_rec": builtin("rho"),
        "t2_rec": builtin("T2_rec"),
        "remark_term": builtin("remark_term"),
    }.get(name)
