"""Property-based tests of the structural facts the checker relies on."""

from __future__ import annotations

import random
from collections import Counter

from hypothesis import given, settings

from checks import step_accounting_case, subtyping_consequences
from generators import (
    EQS,
    PRED_SYMS,
    PRED_VARS,
    DerivationGen,
    arrow_formula,
    derivation_arities,
    formula,
    random_config,
    seeds,
    uniform_config,
)
from ttrkit import subtyping as st
from ttrkit.formulas import (
    PSym,
    PVar,
    alpha_eq,
    erase_diamond,
    forall_polarity,
    fv2,
    godel,
    polarity,
    rep,
    rep_formula,
    subst_so,
)

NAMES = list(PRED_VARS) + list(PRED_SYMS)


def _implies_polarity(before: tuple[bool, bool], after: tuple[bool, bool]) -> bool:
    """Positive stays positive and negative stays negative."""
    return (not before[0] or after[0]) and (not before[1] or after[1])


# ---------------------------------------------------------------------------
# Head reduction
# ---------------------------------------------------------------------------


@settings(max_examples=300)
@given(seeds)
def test_step_accounting(seed):
    bad, _ = step_accounting_case(random.Random(seed))
    assert bad == ()


# ---------------------------------------------------------------------------
# Polarity under substitution, Rep, Gödel and erasure
# ---------------------------------------------------------------------------


@given(seeds)
def test_polarity_composes_under_substitution(seed):
    """The sign of X' in A[B/X] is the product of the signs of X in A and X' in B."""
    rng = random.Random(seed)
    a = formula(rng, 4)
    b = formula(rng, 3)
    x, x2 = "Y", "Z"  # both of arity 0
    if x2 in fv2(a):
        return
    out = subst_so(a, x, (), b)
    xa_pos, xa_neg = polarity(x, a)
    xb_pos, xb_neg = polarity(x2, b)
    o_pos, o_neg = polarity(x2, out)
    if xa_pos and xb_pos:
        assert o_pos
    if xa_pos and xb_neg:
        assert o_neg
    if xa_neg and xb_pos:
        assert o_neg
    if xa_neg and xb_neg:
        assert o_pos


@given(seeds)
def test_rep_preserves_polarity(seed):
    a = arrow_formula(random.Random(seed))
    r = rep_formula(a)
    for name in NAMES:
        assert _implies_polarity(polarity(name, a), polarity(name, r))


@given(seeds)
def test_rep_commutes_with_substitution(seed):
    rng = random.Random(seed)
    a = arrow_formula(rng)
    g = formula(rng, 2, mu=False)
    lhs = rep_formula(subst_so(a, "Y", (), g))
    rhs = subst_so(rep_formula(a), "Y", (), g)
    assert alpha_eq(lhs, rhs)


@given(seeds)
def test_rep_sides_have_dual_quantifier_polarity(seed):
    a = arrow_formula(random.Random(seed))
    r = rep(a)
    pos, neg = forall_polarity(a)
    g_pos, g_neg = forall_polarity(r.left)
    d_pos, d_neg = forall_polarity(r.right)
    if neg:
        assert g_pos and d_neg
    if pos:
        assert g_neg and d_pos


@given(seeds)
def test_godel_preserves_symbol_polarity(seed):
    rng = random.Random(seed)
    a = formula(rng, 5)
    g = godel(a, random_config(rng))
    for c in PRED_SYMS:
        assert _implies_polarity(polarity(c, a), polarity(c, g))


@given(seeds)
def test_erasure_preserves_quantifier_polarity(seed):
    a = formula(random.Random(seed), 5)
    assert _implies_polarity(forall_polarity(a), forall_polarity(erase_diamond(a)))


@given(seeds)
def test_erasure_commutes_with_godel(seed):
    rng = random.Random(seed)
    a = formula(rng, 5)
    cfg = random_config(rng)
    assert alpha_eq(erase_diamond(godel(a, cfg)), godel(erase_diamond(a), cfg.erased()))


# ---------------------------------------------------------------------------
# Generated derivations
# ---------------------------------------------------------------------------


@given(seeds)
def test_subtyping_consequences_hold(seed):
    rng = random.Random(seed)
    used: Counter = Counter()
    for zero in (False, True):
        d = DerivationGen(rng, zero=zero).derivation(5)
        st.check_sub(d, EQS, st.Mode.ZERO if zero else st.Mode.FULL)
        for node in d.nodes():
            assert subtyping_consequences(node.left, node.right, used) == []


@given(seeds)
def test_weak_substitution_stays_in_zero_mode(seed):
    rng = random.Random(seed)
    d = DerivationGen(rng, zero=True).derivation(4)
    for g in (PVar("Z"), PSym("Q")):
        out = st.subst_derivation(d, "Y", g)
        st.check_sub(out, EQS, st.Mode.ZERO)
        assert [n.rule for n in out.nodes()] == [n.rule for n in d.nodes()]


@given(seeds)
def test_lift_uses_the_same_rules(seed):
    rng = random.Random(seed)
    d = DerivationGen(rng, zero=True, psym_inst=False).derivation(4)
    cfg = uniform_config(rng, derivation_arities(d))
    out = st.godel_lift(d, cfg)
    assert {n.rule for n in out.nodes()} == {n.rule for n in d.nodes()}
