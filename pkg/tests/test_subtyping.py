from __future__ import annotations

import random

import pytest
from hypothesis import given

from generators import EQS, DerivationGen, derivation_arities, formula, seeds, uniform_config
from ttrkit import subtyping as st
from ttrkit.fixtures import GODEL_PAIR, _f_of, nr, nr_star2, nr_star_sub_f
from ttrkit.formulas import (
    BOT,
    Arrow,
    FnApp,
    ForallSo,
    FoVar,
    GodelConfig,
    PSym,
    PVar,
    Signature,
    alpha_eq,
    godel,
    parse_equations,
    parse_formula,
    subst_fo,
    subst_so,
    unfold,
)

S = Signature({"0": 0, "s": 1, "p": 1}, {"Q": 0})
E = parse_equations("p(s(x)) = x", S)


def F(text: str):
    return parse_formula(text, S)


NR_PROP = F("mu N . !X ((N -> X) -> (X -> X)) <>")
FULL, ZERO = st.Mode.FULL, st.Mode.ZERO


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------


def test_mu_d_node_verifies():
    left, right = st.check_sub(st.mu_d(NR_PROP))
    assert alpha_eq(left, F("!X ((mu N . !X ((N -> X) -> (X -> X)) <> -> X) -> (X -> X))"))
    assert right == NR_PROP


def test_ax_with_different_sides():
    with pytest.raises(st.DerivationError, match="conclusion sides differ"):
        st.check_sub(st.SubDerivation("ax", F("X"), F("Y")))


def test_nr_star_is_below_f():
    d = nr_star_sub_f()
    left, right = st.check_sub(d)
    assert alpha_eq(left, nr_star2("x"))
    assert alpha_eq(right, _f_of("x"))


def test_premise_counts_are_enforced():
    d = st.SubDerivation("arrow", F("X -> Y"), F("X -> Y"), (st.ax(F("X")),))
    with pytest.raises(st.DerivationError, match="premise"):
        st.check_sub(d)


def test_arrow_rule_is_contravariant():
    d1 = st.mu_d(NR_PROP)  # unfold ⊆ N^r
    d = st.arrow(d1, st.ax(F("Y")))
    left, right = st.check_sub(d)
    assert left == Arrow(NR_PROP, PVar("Y"))
    wrong = st.SubDerivation("arrow", right, left, d.premises)
    with pytest.raises(st.DerivationError):
        st.check_sub(wrong)


def test_zero_mode_forbids_full_instantiation_and_mu_prime():
    a = F("!X. X -> X")
    strong = st.forall_left(a, st.FormulaInst((), F("Y -> Y")), st.ax(F("(Y -> Y) -> Y -> Y")))
    assert strong.rule == "forall_ig"
    st.check_sub(strong, mode=FULL)
    with pytest.raises(st.DerivationError, match="zero mode"):
        st.check_sub(strong, mode=ZERO)
    weak = st.forall_left(a, st.FormulaInst((), PVar("Y")), st.ax(F("Y -> Y")))
    assert weak.rule == "forall_ig0"
    st.check_sub(weak, mode=ZERO)
    with pytest.raises(st.DerivationError, match="zero mode"):
        st.check_sub(st.mu_prime_g(NR_PROP), mode=ZERO)


def test_forall_id_side_condition():
    d = st.forall_right(st.ax(F("X")), "X", 0)
    with pytest.raises(st.DerivationError):
        st.check_sub(d)
    st.check_sub(st.forall_right(st.ax(F("X")), "Y", 0))


def test_eq_rule():
    d = st.eq_rule(st.ax(F("Z(p(s(x)))")), F("Z(h)"), "h", F("Z(p(s(x)))").args[0], FoVar("x"))
    left, right = st.check_sub(d, E)
    assert right == F("Z(x)")
    with pytest.raises(st.DerivationError):
        st.check_sub(d, parse_equations("p(x) = x", S))


def test_mu_g_rule():
    m = NR_PROP
    e = F("!X ((Q -> X) -> (X -> X))")  # the premise must end in E, not in the body instance
    premise = st.ax(subst_so(m.body, "N", (), e))
    bad = st.mu_g(m, e, premise)
    with pytest.raises(st.DerivationError):
        st.check_sub(bad)
    # μC.C ⊆ E for any E
    m2 = F("mu C . C <>")
    st.check_sub(st.mu_g(m2, F("Y"), st.ax(F("Y"))))


def test_tr_rule_chains():
    d = st.tr(st.mu_prime_g(NR_PROP), st.mu_d(NR_PROP))
    assert st.check_sub(d) == (NR_PROP, NR_PROP)
    with pytest.raises(st.DerivationError):
        st.check_sub(st.SubDerivation("tr", NR_PROP, NR_PROP, (st.mu_d(NR_PROP), st.mu_d(NR_PROP))))


def test_error_names_the_path():
    inner = st.SubDerivation("ax", F("X"), F("Y"))
    d = st.tr(st.ax(F("X")), inner)
    with pytest.raises(st.DerivationError) as exc:
        st.check_sub(d)
    assert exc.value.rule == "ax" and exc.value.path != "root"


# ---------------------------------------------------------------------------
# Substitution through derivations
# ---------------------------------------------------------------------------


def test_subst_derivation_symbol_for_free_variable():
    m = F("mu N . !Y. (N -> X) -> Y -> Y <>")
    d = st.mu_d(m)
    out = st.subst_derivation(d, "X", PSym("Q"))
    assert out.rule == "mu_d" and not out.premises
    left, right = st.check_sub(out)
    assert right == F("mu N . !Y. (N -> Q) -> Y -> Y <>")


def test_subst_derivation_through_eq_node():
    src = F("Z(p(s(x)))").args[0]
    d = st.eq_rule(st.ax(F("Z(p(s(x)))")), F("Z(h)"), "h", src, FoVar("x"))
    s0 = FnApp("s", (FnApp("0"),))
    out = st.subst_derivation(d, "x", s0)
    left, right = st.check_sub(out, E)
    assert left == subst_fo(d.left, {"x": s0}) and right == PVar("Z", (s0,))


def test_identity_substitution_keeps_the_tree():
    d = nr_star_sub_f()
    out = st.subst_derivation(d, "zz", FoVar("zz"))
    assert [n.rule for n in out.nodes()] == [n.rule for n in d.nodes()]
    assert out == d


@given(seeds)
def test_substitution_preserves_verification(seed):
    rng = random.Random(seed)
    d = DerivationGen(rng).derivation(4)
    st.check_sub(d, EQS)
    g = formula(rng, 2, fo=("x", "y", "p1"))
    out = st.subst_derivation(d, "X", g, ("p1",))
    left, right = st.check_sub(out, EQS)
    assert alpha_eq(left, subst_so(d.left, "X", ("p1",), g))
    assert alpha_eq(right, subst_so(d.right, "X", ("p1",), g))
    assert [n.rule for n in out.nodes()] == [n.rule for n in d.nodes()]
    t = FnApp("s", (FoVar("y"),))
    out = st.subst_derivation(d, "x", t)
    left, right = st.check_sub(out, EQS)
    assert alpha_eq(left, subst_fo(d.left, {"x": t}))


# ---------------------------------------------------------------------------
# μ'g elimination
# ---------------------------------------------------------------------------


def _no_mu_prime(d: st.SubDerivation) -> bool:
    return all(n.rule != "mu_prime_g" for n in d.nodes())


def test_eliminate_single_mu_prime():
    d = st.mu_prime_g(NR_PROP)
    out = st.eliminate_mu_prime(d)
    assert _no_mu_prime(out)
    assert out.rule == "mu_g"
    left, right = st.check_sub(out)
    assert left == NR_PROP and alpha_eq(right, unfold(NR_PROP))


def test_eliminate_without_mu_prime_is_identity():
    d = st.tr(st.mu_d(NR_PROP), st.ax(NR_PROP))
    assert st.eliminate_mu_prime(d) == d


def test_eliminate_nested_mu_prime():
    d = st.tr(st.tr(st.mu_prime_g(NR_PROP), st.mu_d(NR_PROP)), st.mu_prime_g(NR_PROP))
    out = st.eliminate_mu_prime(d)
    assert _no_mu_prime(out)
    assert st.check_sub(out)[0] == NR_PROP


@given(seeds)
def test_eliminate_mu_prime_on_random_derivations(seed):
    d = DerivationGen(random.Random(seed)).derivation(4)
    out = st.eliminate_mu_prime(d)
    assert _no_mu_prime(out)
    left, right = st.check_sub(out, EQS)
    assert alpha_eq(left, d.left) and alpha_eq(right, d.right)


# ---------------------------------------------------------------------------
# Gödel lifting
# ---------------------------------------------------------------------------


NEG = GodelConfig.negation({"X": 0})


def test_lift_mu_d():
    out = st.godel_lift(st.mu_d(NR_PROP), NEG)
    assert out.rule == "mu_d"
    star = godel(NR_PROP, NEG)
    left, right = st.check_sub(out, mode=ZERO)
    assert alpha_eq(left, F("!X. (mu N . !X. (N -> ~X) -> ~X -> ~X <> -> ~X) -> ~X -> ~X"))
    assert right == star


def test_lift_without_predicate_variables():
    m = F("mu N . Q -> N <>")
    d = st.tr(st.ax(unfold(m)), st.mu_d(m))
    out = st.godel_lift(d, NEG)
    assert (out.left, out.right) == (d.left, d.right)


def test_lift_forall_id_over_a_pair():
    cfg = GodelConfig.uniform({"X": 0, "Y": 0}, ("1", "2"), lambda atoms, _: Arrow(atoms[0], Arrow(atoms[1], BOT)))
    d = st.forall_right(st.ax(F("Y -> Y")), "X", 0)
    out = st.godel_lift(d, cfg)
    assert [n.rule for n in out.nodes()][:2] == ["forall_id", "forall_id"]
    assert isinstance(out.right, ForallSo) and isinstance(out.right.body, ForallSo)
    st.check_sub(out, mode=ZERO)


def test_lift_rejects_full_mode_rules():
    with pytest.raises(st.GodelLiftError):
        st.godel_lift(st.mu_prime_g(NR_PROP), NEG)


def test_lift_with_the_pair_configuration():
    out = st.godel_lift(st.mu_d(nr("x")), GODEL_PAIR)
    left, right = st.check_sub(out, mode=ZERO)
    assert alpha_eq(right, godel(nr("x"), GODEL_PAIR))


@given(seeds)
def test_lift_random_zero_derivations(seed):
    rng = random.Random(seed)
    d = DerivationGen(rng, zero=True, psym_inst=False).derivation(4)
    cfg = uniform_config(rng, derivation_arities(d))
    out = st.godel_lift(d, cfg)
    left, right = st.check_sub(out, mode=ZERO)
    assert alpha_eq(left, godel(d.left, cfg)) and alpha_eq(right, godel(d.right, cfg))


# ---------------------------------------------------------------------------
# Rep witnesses and generated derivations
# ---------------------------------------------------------------------------


def test_rep_witnesses_for_recursive_integers():
    from ttrkit.formulas import rep_formula

    d1, d2 = st.rep_witnesses(NR_PROP)
    assert st.check_sub(d1, mode=ZERO) == (NR_PROP, rep_formula(NR_PROP))
    l2, r2 = st.check_sub(d2, mode=ZERO)
    assert alpha_eq(l2, rep_formula(NR_PROP)) and r2 == NR_PROP


@given(seeds)
def test_generated_derivations_verify(seed):
    rng = random.Random(seed)
    st.check_sub(DerivationGen(rng).derivation(5), EQS, FULL)
    z = DerivationGen(rng, zero=True).derivation(5)
    st.check_sub(z, EQS, ZERO)
    assert st.uses_only_zero_rules(z)
