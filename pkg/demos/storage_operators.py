"""Watch the four storage operators run, then check them.

Run with ``python demos/storage_operators.py``.
"""

from __future__ import annotations

from ttrkit import lambda_core as lc
from ttrkit import storage as sg
from ttrkit.encodings import NumeralKind, abbreviations, builtin, numeral

CH, REC = NumeralKind.CHURCH, NumeralKind.RECURSIVE
F = lc.FreeVar("f")


def show_run(op: str, theta: lc.Term, kind: NumeralKind) -> None:
    names = abbreviations(prefer=kind)
    tr = lc.head_reduce(lc.apply(builtin(op), theta, F))
    print(f"({op}) {lc.print_term(theta, names)} f")
    for i, t in enumerate(tr.terms()):
        print(f"  {i:>3}  {lc.print_term(t, names)}")
    print(f"  head normal form after {tr.count} steps\n")


def main() -> None:
    print("== A storage operator evaluates its argument before passing it on ==\n")
    show_run("T2_church", numeral(CH, 2), CH)

    # the same operator on a different term for 2: the output is the same
    theta = sg.gen_theta_variants(CH, 2, seed=1, count=3)[2]
    show_run("T2_church", theta, CH)

    print("== Randomized check: five inputs per n, all must give the same output ==\n")
    for op, kind in (("T1_church", CH), ("T2_church", CH), ("T1_rec", REC), ("T2_rec", REC)):
        print(sg.verify_storage(builtin(op), kind, range(6), 5, seed=7, name=op).table())

    print("== The identity-like λn.λf.(f)n is not a storage operator ==\n")
    print(sg.verify_storage(lc.parse_term(r"\n. \f. f n"), REC, range(3), 3, seed=7, name="λn.λf.(f)n").table())

    print("== Symbolic run: the input replaced by constants x_m ==\n")
    for op, arity in (("T1_rec", 3), ("T2_rec", 4)):
        tr = sg.symbolic_run(builtin(op), 3, arity=arity)
        heads = " -> ".join(node.head for node in tr.nodes)
        print(f"{op}, n=3: heads {heads}; τ ≃ {tr.tau_value}; {tr.symbolic_steps} symbolic steps")
        for theta in sg.gen_theta_variants(REC, 3, seed=7, count=3):
            res = sg.check_simulation(tr, sg.build_special_application(theta, 3))
            print(f"    θ = {lc.print_term(theta, abbreviations(prefer=REC))}: predicted {res.predicted_steps}, "
                  f"concrete {res.concrete_steps}, {'ok' if res.passed else res.reason}")
        print()


if __name__ == "__main__":
    main()
