"""Acceptance criteria 1–9.

Each test records one PASS/FAIL line through the ``criterion`` fixture; the
lines are repeated in the terminal summary under "acceptance criteria".
"""

from __future__ import annotations

import random
from collections import Counter

from checks import step_accounting_case, subtyping_consequences, typing_mutants
from generators import EQS, DerivationGen, arrow_formula, formula, random_config
from ttrkit import lambda_core as lc
from ttrkit import storage as sg
from ttrkit import subtyping as st
from ttrkit import typing_rules as ty
from ttrkit.encodings import NumeralKind, builtin, iterated_successor, numeral
from ttrkit.fixtures import B_REMARK, _f_of, corpus, nnr, nr_star, nr_star2, nr_star_sub_f
from ttrkit.formulas import (
    BOT,
    Arrow,
    ForallFo,
    GodelConfig,
    Signature,
    alpha_eq,
    erase_diamond,
    godel,
    parse_formula,
    polarity,
    rep_formula,
)

CH, REC = NumeralKind.CHURCH, NumeralKind.RECURSIVE
OPERATORS = [("T1_church", CH), ("T2_church", CH), ("T1_rec", REC), ("T2_rec", REC)]
F = lc.FreeVar("f")
CORPUS = corpus()
SEED = 20240


# ---------------------------------------------------------------------------
# 1. Reduction fixtures
# ---------------------------------------------------------------------------


def test_criterion_1_reduction_fixtures(criterion):
    bad = []
    for op, kind in OPERATORS:
        t = builtin(op)
        for n in range(51):
            tr = lc.head_reduce(lc.apply(t, numeral(kind, n), F))
            if not (tr.terminated and tr.final == lc.App(F, iterated_successor(kind, n))):
                bad.append(f"{op} n={n}")
    criterion(1, not bad, f"4 operators x n=0..50 reduce to (f)(s)^n 0; mismatches: {bad[:5] or 'none'}")
    assert not bad


# ---------------------------------------------------------------------------
# 2. Randomized storage verification
# ---------------------------------------------------------------------------


def test_criterion_2_storage_verification(criterion):
    failing = []
    for op, kind in OPERATORS:
        rep = sg.verify_storage(builtin(op), kind, range(26), 5, seed=SEED, name=op)
        if not rep.passed:
            failing.append(f"{op}: {rep.reason}")
    bad = sg.verify_storage(lc.parse_term(r"\n. \f. f n"), REC, range(26), 5, seed=SEED)
    caught = [
        c.n
        for c in bad.cases
        if c.n >= 1 and len({v.theta for v in c.variants}) >= 2 and not c.passed
    ]
    ok = not failing and not bad.passed and bool(caught)
    criterion(
        2,
        ok,
        f"operators pass on n=0..25 x 5 variants ({failing or 'all pass'}); "
        f"λn.λf.(f)n rejected at n={caught[:3]}... ({bad.reason})",
    )
    assert ok


# ---------------------------------------------------------------------------
# 3. Symbolic verification
# ---------------------------------------------------------------------------


def test_criterion_3_symbolic_verification(criterion):
    # T2 works with the two-member Gödel family, so its constants take 2 + 2 arguments
    arity = {"T1_rec": 3, "T2_rec": 4}
    problems = []
    sims = 0
    for op in ("T1_rec", "T2_rec"):
        t = builtin(op)
        for n in range(26):
            try:
                trace = sg.symbolic_run(t, n, arity=arity[op])
            except sg.SymbolicError as exc:
                problems.append(f"{op} n={n}: {exc}")
                continue
            if trace.tau_value != n:
                problems.append(f"{op} n={n}: τ is {trace.tau_value}")
            for theta in sg.gen_theta_variants(REC, n, SEED, 5):
                res = sg.check_simulation(trace, sg.build_special_application(theta, n))
                sims += 1
                if not res.passed:
                    problems.append(f"{op} n={n}: {res.reason}")
    criterion(3, not problems, f"T1_rec/T2_rec symbolic runs n=0..25, {sims} simulations; problems: {problems[:3] or 'none'}")
    assert not problems


# ---------------------------------------------------------------------------
# 4. Head-reduction step accounting
# ---------------------------------------------------------------------------


def test_criterion_4_step_accounting(criterion):
    failures = Counter()
    applied = 0
    total = 1200
    for i in range(total):
        bad, terminated = step_accounting_case(random.Random(SEED + i))
        failures.update(bad)
        applied += terminated
    ok = not failures and applied >= 1000
    criterion(
        4,
        ok,
        f"{total} solvable terms, {applied} with a solvable application; failures: {dict(failures) or 'none'}",
    )
    assert ok


# ---------------------------------------------------------------------------
# 5. Typing fixtures for the storage operators
# ---------------------------------------------------------------------------


def test_criterion_5_typing_fixtures(criterion):
    notes = []
    ok = True
    for name, op in (("t1_rec", "T1_rec"), ("t2_rec", "T2_rec")):
        fx = CORPUS[name]
        d = fx.derivation
        j = ty.check_typing(d, fx.equations, fx.system)
        if not (j.context == () and j.subject == builtin(op)):
            ok = False
            notes.append(f"{name}: wrong subject")
        want_left = nr_star("x") if name == "t1_rec" else nr_star2("x")
        if not (type(j.type) is ForallFo and alpha_eq(j.type.body.left, want_left) and alpha_eq(j.type.body.right, nnr("x"))):
            ok = False
            notes.append(f"{name}: unexpected type")
        mutants = survivors = 0
        for m, where in typing_mutants(d):
            mutants += 1
            try:
                ty.check_typing(m, fx.equations, fx.system)
                survivors += 1
                notes.append(f"{name}: mutant at {where} verifies")
            except st.DerivationError:
                pass
        ok &= mutants > 0 and survivors == 0
        notes.append(f"{name}: {mutants} mutants rejected" if not survivors else "")
    ok &= any(n.rule == "y_fix" for n in CORPUS["t1_rec"].derivation.nodes())
    sub = nr_star_sub_f()
    ok &= any(
        isinstance(n.inst, st.SubDerivation) and any(s == sub for s in n.inst.nodes())
        for n in CORPUS["t2_rec"].derivation.nodes()
    )
    ok &= alpha_eq(sub.left, nr_star2("x")) and alpha_eq(sub.right, _f_of("x"))
    criterion(5, ok, "; ".join(x for x in notes if x))
    assert ok


# ---------------------------------------------------------------------------
# 6. The self-application example
# ---------------------------------------------------------------------------


def test_criterion_6_remark_fixture(criterion):
    fx = CORPUS["remark_term"]
    # [PAPER] the type and the fixed point B
    j = ty.check_typing(fx.derivation, system=ty.System.TTR_DIAMOND)
    want = Arrow(Arrow(B_REMARK, Arrow(B_REMARK, B_REMARK)), B_REMARK)
    ok = j.subject == builtin("remark_term") and alpha_eq(j.type, want) and alpha_eq(
        B_REMARK, parse_formula("mu C . (!X. X) -> C <>")
    )
    criterion(6, ok, "remark term : (B → (B → B)) → B with B = μC((∀X X) → C), checked in TTR◇")
    assert ok


# ---------------------------------------------------------------------------
# 7. Gödel transformation
# ---------------------------------------------------------------------------


def test_criterion_7_godel(criterion):
    # [PAPER] N[x] and its negation translation
    sig = Signature.arithmetic()
    n_x = parse_formula("!X. (!y. X(y) -> X(s(y))) -> X(0) -> X(x)", sig)
    n_star = parse_formula("!X. (!y. ~X(y) -> ~X(s(y))) -> ~X(0) -> ~X(x)", sig)
    exact = alpha_eq(godel(n_x, GodelConfig.negation({"X": 1})), n_star)

    polarity_bad = erase_bad = 0
    total = 1200
    for i in range(total):
        rng = random.Random(SEED + i)
        a = formula(rng, 5)
        cfg = random_config(rng)
        g = godel(a, cfg)
        for c in ("P", "Q"):
            pos, neg = polarity(c, a)
            gpos, gneg = polarity(c, g)
            if (pos and not gpos) or (neg and not gneg):
                polarity_bad += 1
        if not alpha_eq(erase_diamond(g), godel(erase_diamond(a), cfg.erased())):
            erase_bad += 1

    lifted = 0
    lift_bad = []
    pair = lambda ar: GodelConfig.uniform(ar, ("", "'"), lambda atoms, _: Arrow(atoms[0], Arrow(atoms[1], BOT)))  # noqa: E731
    for name, fx in sorted(CORPUS.items()):
        if fx.system is not ty.System.TTR_ZERO:
            continue
        ar = ty.pred_var_arities(fx.derivation)
        for cfg in (GodelConfig.negation(ar), pair(ar)):
            try:
                out = ty.godel_lift_typing(fx.derivation, cfg)
                j = ty.check_typing(out, system=ty.System.TTR_ZERO)
                assert alpha_eq(j.type, godel(fx.derivation.type, cfg))
                for node in fx.derivation.nodes():
                    if isinstance(node.inst, st.SubDerivation):
                        s = st.godel_lift(node.inst, cfg)
                        st.check_sub(s, mode=st.Mode.ZERO)
                lifted += 1
            except (st.DerivationError, st.GodelLiftError, AssertionError) as exc:
                lift_bad.append(f"{name}: {exc}")
    lifted_expected = 2 * sum(fx.system is ty.System.TTR_ZERO for fx in CORPUS.values())
    ok = exact and not polarity_bad and not erase_bad and not lift_bad and lifted == lifted_expected
    criterion(
        7,
        ok,
        f"N[x]* = N*[x]: {exact}; {total} formulas: polarity violations {polarity_bad}, "
        f"erasure mismatches {erase_bad}; {lifted}/{lifted_expected} corpus lifts verify",
    )
    assert ok


# ---------------------------------------------------------------------------
# 8. Consequences of subtyping on generated derivations
# ---------------------------------------------------------------------------


def test_criterion_8_subtyping_consequences(criterion):
    used: Counter = Counter()
    bad: Counter = Counter()
    roots = 0
    for zero in (False, True):
        for i in range(300):
            rng = random.Random(SEED + i)
            d = DerivationGen(rng, zero=zero).derivation(5)
            st.check_sub(d, EQS, st.Mode.ZERO if zero else st.Mode.FULL)
            roots += 1
            # every node roots a verified sub-derivation
            for node in d.nodes():
                bad.update(subtyping_consequences(node.left, node.right, used))
    ok = not bad and roots >= 500 and len(used) == 5
    criterion(8, ok, f"{roots} derivations; hypotheses exercised {dict(used)}; violations {dict(bad) or 'none'}")
    assert ok


# ---------------------------------------------------------------------------
# 9. Rep witnesses
# ---------------------------------------------------------------------------


def test_criterion_9_rep_witnesses(criterion):
    bad = []
    total = 250
    for i in range(total):
        a = arrow_formula(random.Random(SEED + i))
        r = rep_formula(a)
        fwd, back = st.rep_witnesses(a)
        try:
            l1, r1 = st.check_sub(fwd, mode=st.Mode.ZERO)
            l2, r2 = st.check_sub(back, mode=st.Mode.ZERO)
        except st.DerivationError as exc:
            bad.append(str(exc))
            continue
        if not (alpha_eq(l1, a) and alpha_eq(r1, r) and alpha_eq(l2, r) and alpha_eq(r2, a)):
            bad.append("wrong conclusion")
    criterion(9, not bad, f"{total} arrow types: A ⊆₀ Rep(A) and Rep(A) ⊆₀ A verify; failures: {bad[:3] or 'none'}")
    assert not bad
