"""Command-line front end: ``ttrkit <command> ...``.

Terms use the λ-term syntax (``\\x. body``, juxtaposition, ``@name`` for
built-in combinators, ``church N`` / ``rec N`` for numerals).  Formulas use
the formula syntax; declare symbols with ``--sig "fn s/1; pred P/1"``.
Every command exits with status 0 on success and 1 on a failed check.
Usage errors exit with 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import derivfile as df
from . import lambda_core as lc
from . import storage
from . import subtyping as st
from . import typing_rules as ty
from .encodings import NumeralKind, abbreviations, parse_term_ext
from .formulas import (
    ArrowType,
    FormulaError,
    GodelConfigError,
    GodelConfig,
    Signature,
    classify_arrow,
    erase_diamond,
    forall_polarity,
    godel,
    is_bottom_type,
    is_propositional,
    parse_formula,
    parse_signature,
    pred_var_arities,
    print_formula,
    rep,
)


class CliError(Exception):
    """A user-facing error: printed without a traceback, exit status 2."""


def _out(args: argparse.Namespace, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _term(text: str) -> lc.Term:
    try:
        return parse_term_ext(text)
    except (lc.TermSyntaxError, KeyError) as exc:
        raise CliError(f"cannot parse term: {exc}") from None


def _sig(args: argparse.Namespace) -> Signature:
    return parse_signature(args.sig) if getattr(args, "sig", None) else Signature()


def _formula(text: str, args: argparse.Namespace):
    try:
        return parse_formula(text, _sig(args))
    except FormulaError as exc:
        raise CliError(f"cannot parse formula: {exc}") from None


def _show(t: lc.Term, args: argparse.Namespace) -> str:
    if getattr(args, "raw", False):
        return lc.print_term(t)
    return lc.print_term(t, _abbrev(_preferred_kind(args)))


def _preferred_kind(args: argparse.Namespace) -> NumeralKind:
    """Label the shared numeral 0 after the kind the input mentions."""
    text = " ".join(str(v) for v in (getattr(args, "term", ""), getattr(args, "left", ""), getattr(args, "right", "")))
    return NumeralKind.CHURCH if "church" in text else NumeralKind.RECURSIVE


_ABBREV: dict[NumeralKind, dict] = {}


def _abbrev(prefer: NumeralKind) -> dict:
    if prefer not in _ABBREV:
        _ABBREV[prefer] = abbreviations(prefer=prefer)
    return _ABBREV[prefer]


def _range(text: str) -> range:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return range(int(a), int(b) + 1)
        return range(int(text), int(text) + 1)
    except ValueError:
        raise CliError(f"bad range {text!r}; expected N or A..B") from None


def _config(args: argparse.Namespace, arities: dict[str, int]) -> GodelConfig:
    if args.config:
        return df.load_config(args.config, _sig(args))
    return GodelConfig.negation(arities)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_reduce(args: argparse.Namespace) -> int:
    t = _term(args.term)
    trace = lc.head_reduce(t, args.fuel)
    lines = []
    terms = trace.terms()
    shown = terms if args.max_display is None else terms[: args.max_display + 1]
    for i, u in enumerate(shown):
        lines.append(f"{i:>5}  {_show(u, args)}")
    if len(shown) < len(terms):
        lines.append(f"  ...  ({len(terms) - len(shown)} more)")
        lines.append(f"{trace.count:>5}  {_show(trace.final, args)}")
    status = "head normal form" if trace.terminated else "fuel exhausted"
    lines.append(f"steps: {trace.count} ({status})")
    _out(args, "\n".join(lines) + "\n")
    return 0 if trace.terminated else 1


def cmd_normalize(args: argparse.Namespace) -> int:
    t = _term(args.term)
    try:
        nf = lc.normalize_left(t, args.fuel)
    except lc.FuelExhausted:
        _out(args, "fuel exhausted\n")
        return 1
    _out(args, _show(nf, args) + "\n")
    return 0


def cmd_equiv(args: argparse.Namespace) -> int:
    r = lc.beta_equiv(_term(args.left), _term(args.right), args.fuel)
    _out(args, r.value + "\n")
    return 0 if r is lc.Equiv.EQUAL else 1


def cmd_classify(args: argparse.Namespace) -> int:
    a = _formula(args.formula, args)
    kind = classify_arrow(a)
    pos, neg = forall_polarity(a)
    parts = [
        "arrow type" if isinstance(kind, ArrowType) else f"not an arrow type (kind {kind.kind}, at {kind.at})",
        "in Ω⁺" if pos else "not in Ω⁺",
        "in Ω⁻" if neg else "not in Ω⁻",
        "⊥-type" if is_bottom_type(a) else "not ⊥-type",
    ]
    lines = ["; ".join(parts)]
    if args.verbose:
        lines.append(f"propositional: {'yes' if is_propositional(a) else 'no'}")
        ar = pred_var_arities(a)
        lines.append("predicate variables: " + (", ".join(f"{k}/{v}" for k, v in sorted(ar.items())) or "none"))
    _out(args, "\n".join(lines) + "\n")
    return 0


def cmd_rep(args: argparse.Namespace) -> int:
    a = _formula(args.formula, args)
    try:
        r = rep(a)
    except FormulaError as exc:
        raise CliError(str(exc)) from None
    lines = [print_formula(r.formula())]
    if args.witness:
        fwd, back = st.rep_witnesses(a)
        for label, d in (("A ⊆ Rep(A)", fwd), ("Rep(A) ⊆ A", back)):
            st.check_sub(d, mode=st.Mode.ZERO)
            lines.append(f"{label}: verified ({sum(1 for _ in d.nodes())} nodes)")
    _out(args, "\n".join(lines) + "\n")
    return 0


def cmd_erase(args: argparse.Namespace) -> int:
    if args.file:
        f = df.load(args.file)
        if f.kind != "typing":
            raise CliError("erase --file expects a typing derivation")
        ty.check_typing(f.derivation, f.equations, f.system or ty.System.TTR)
        e = ty.erase_derivation(f.derivation)
        ty.check_typing(e, None, ty.System.TTR_DIAMOND)
        # erasure drops first-order arguments: symbols keep their names at arity 0
        sig = Signature({}, {name: 0 for name in f.signature.predicates})
        out = df.DerivationFile("typing", e, f.name + "_erased", ty.System.TTR_DIAMOND, sig, df.EquationSystem())
        _out(args, df.dumps(out))
        return 0
    if not args.formula:
        raise CliError("give a formula or --file")
    _out(args, print_formula(erase_diamond(_formula(args.formula, args))) + "\n")
    return 0


def cmd_godel(args: argparse.Namespace) -> int:
    a = _formula(args.formula, args)
    cfg = _config(args, pred_var_arities(a))
    _out(args, print_formula(godel(a, cfg)) + "\n")
    return 0


def _load_checked(path: str, args: argparse.Namespace) -> df.DerivationFile:
    try:
        return df.load(path)
    except (OSError, df.DerivationFileError) as exc:
        raise CliError(str(exc)) from None


def cmd_check_sub(args: argparse.Namespace) -> int:
    f = _load_checked(args.file, args)
    if f.kind != "subtyping":
        raise CliError("check-sub expects a subtyping derivation file")
    mode = st.Mode(args.mode)
    left, right = st.check_sub(f.derivation, f.equations, mode)
    _out(args, f"verified ({mode.value}): {print_formula(left)} ⊆ {print_formula(right)}\n")
    return 0


_SYSTEMS = {"af2": "AF2", "ttr": "TTR", "ttr0": "TTRzero", "ttrzero": "TTRzero", "ttrd": "TTRdiamond", "ttrdiamond": "TTRdiamond"}


def cmd_check_typing(args: argparse.Namespace) -> int:
    f = _load_checked(args.file, args)
    if f.kind != "typing":
        raise CliError("check-typing expects a typing derivation file")
    system = ty.System.parse(_SYSTEMS[args.system]) if args.system else (f.system or ty.System.TTR)
    j = ty.check_typing(f.derivation, f.equations, system)
    _out(args, f"verified ({system.value}): {j}\n")
    return 0


def cmd_lift_godel(args: argparse.Namespace) -> int:
    f = _load_checked(args.file, args)
    if f.kind == "typing":
        ty.check_typing(f.derivation, f.equations, ty.System.TTR_ZERO)
        cfg = _config(args, ty.pred_var_arities(f.derivation))
        lifted = ty.godel_lift_typing(f.derivation, cfg)
        ty.check_typing(lifted, f.equations, ty.System.TTR_ZERO)
        system = ty.System.TTR_ZERO
    else:
        st.check_sub(f.derivation, f.equations, st.Mode.ZERO)
        arities: dict[str, int] = {}
        for node in f.derivation.nodes():
            for a in (node.left, node.right):
                arities.update(pred_var_arities(a))
        cfg = _config(args, arities)
        lifted = st.godel_lift(f.derivation, cfg)
        st.check_sub(lifted, f.equations, st.Mode.ZERO)
        system = None
    out = df.DerivationFile(f.kind, lifted, f.name + "_lifted", system, f.signature, f.equations)
    _out(args, df.dumps(out))
    return 0


def cmd_verify_storage(args: argparse.Namespace) -> int:
    t = _term(args.term)
    if lc.free_vars(t):
        raise CliError("the operator must be a closed term")
    kind = NumeralKind.parse(args.kind)
    report = storage.verify_storage(t, kind, _range(args.n), args.variants, args.fuel, args.seed, args.term)
    if args.out:
        Path(args.out).write_text(report.to_jsonl(), encoding="utf-8")
    sys.stdout.write(report.table())
    return 0 if report.passed else 1


def cmd_symbolic_verify(args: argparse.Namespace) -> int:
    t = _term(args.term)
    if lc.free_vars(t):
        raise CliError("the operator must be a closed term")
    ok = True
    lines = []
    records = []
    for n in _range(args.n):
        try:
            trace = storage.symbolic_run(t, n, args.fuel, args.arity)
        except storage.SymbolicError as exc:
            lines.append(f"n={n}: symbolic run failed: {exc}")
            records.append({"n": n, "passed": False, "reason": str(exc)})
            ok = False
            continue
        sims = []
        for theta in storage.gen_theta_variants(NumeralKind.RECURSIVE, n, args.seed, args.variants):
            sa = storage.build_special_application(theta, n, args.fuel)
            sims.append(storage.check_simulation(trace, sa, args.fuel))
        passed = all(s.passed for s in sims)
        ok &= passed
        steps = [s.predicted_steps for s in sims]
        lines.append(
            f"n={n}: τ ≃ {trace.tau_value}, {len(trace.nodes)} nodes, "
            f"{len(trace.registry) - 1} constants, simulation {'ok' if passed else 'FAIL'} "
            f"(steps {min(steps)}..{max(steps)})"
        )
        for i, s in enumerate(sims):
            if not s.passed:
                lines.append(f"    variant {i}: {s.reason}")
        records.append(
            {
                "n": n,
                "passed": passed,
                "tau": lc.print_term(trace.tau),
                "tau_value": trace.tau_value,
                "nodes": [{"steps": nd.steps, "head": nd.head} for nd in trace.nodes],
                "variants": [{"steps": s.concrete_steps, "predicted": s.predicted_steps, "passed": s.passed, "reason": s.reason} for s in sims],
            }
        )
    lines.append(f"{args.term}: {'pass' if ok else 'fail'}")
    if args.out:
        Path(args.out).write_text("".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records), encoding="utf-8")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _fuel(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("fuel must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ttrkit", description="λ-calculus, typing and storage-operator toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn, help_text: str, *, fuel: bool = False, sig: bool = False, out: bool = True):
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.set_defaults(fn=fn)
        if fuel:
            sp.add_argument("--fuel", type=_fuel, default=lc.DEFAULT_FUEL, help="maximum number of reduction steps")
        if sig:
            sp.add_argument("--sig", help='symbol declarations, e.g. "fn s/1; pred P/1"')
        if out:
            sp.add_argument("--out", help="write the output to this file")
        return sp

    sp = add("reduce", cmd_reduce, "head-reduce a term and print the trace", fuel=True)
    sp.add_argument("term")
    sp.add_argument("--max-display", type=int, default=None, help="show at most this many steps of the trace")
    sp.add_argument("--raw", action="store_true", help="do not abbreviate numerals and combinators")

    sp = add("normalize", cmd_normalize, "normal form by leftmost reduction", fuel=True)
    sp.add_argument("term")
    sp.add_argument("--raw", action="store_true")

    sp = add("equiv", cmd_equiv, "decide β-equivalence within the fuel", fuel=True)
    sp.add_argument("left")
    sp.add_argument("right")

    sp = add("classify", cmd_classify, "arrow type, ∀-polarity and ⊥-type report", sig=True)
    sp.add_argument("formula")
    sp.add_argument("-v", "--verbose", action="store_true")

    sp = add("rep", cmd_rep, "representative ∀v(A → B) of an arrow type", sig=True)
    sp.add_argument("formula")
    sp.add_argument("--witness", action="store_true", help="also build and check A ⊆₀ Rep(A) and back")

    sp = add("erase", cmd_erase, "erase first-order information from a formula or a typing derivation", sig=True)
    sp.add_argument("formula", nargs="?")
    sp.add_argument("--file", help="typing derivation file to erase")

    sp = add("godel", cmd_godel, "Gödel transformation (default F_X = ¬X)", sig=True)
    sp.add_argument("formula")
    sp.add_argument("--config", help="Gödel configuration JSON file")

    sp = add("check-sub", cmd_check_sub, "verify a subtyping derivation file")
    sp.add_argument("file")
    sp.add_argument("--mode", choices=["full", "zero"], default="full")

    sp = add("check-typing", cmd_check_typing, "verify a typing derivation file")
    sp.add_argument("file")
    sp.add_argument("--system", choices=sorted(_SYSTEMS), help="override the system recorded in the file")

    sp = add("lift-godel", cmd_lift_godel, "Gödel-lift a TTR₀ typing or ⊆₀ derivation", sig=True)
    sp.add_argument("file")
    sp.add_argument("--config", help="Gödel configuration JSON file (default F_X = ¬X)")

    sp = add("verify-storage", cmd_verify_storage, "randomized storage-operator check", fuel=True)
    sp.add_argument("term")
    sp.add_argument("--kind", default="rec", help="church or rec")
    sp.add_argument("--n", default="0..10", help="N or A..B")
    sp.add_argument("--variants", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("symbolic-verify", cmd_symbolic_verify, "symbolic storage check for recursive integers", fuel=True)
    sp.add_argument("term")
    sp.add_argument("--n", default="0..10", help="N or A..B")
    sp.add_argument("--variants", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--arity", type=int, default=3, help="arguments of a constant in head position (2 + family size)")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (st.DerivationError, FormulaError, df.DerivationFileError, st.GodelLiftError,
            storage.SpecialApplicationError, storage.VariantError, GodelConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
