"""Check the typing derivations of the storage operators and transport one by a Gödel transformation.

Run with ``python demos/typing_and_godel.py``.
"""

from __future__ import annotations

from ttrkit import subtyping as st
from ttrkit import typing_rules as ty
from ttrkit.fixtures import GODEL_PAIR, corpus, nr_star_sub_f
from ttrkit.formulas import GodelConfig, print_formula


def main() -> None:
    fixtures = corpus()

    print("== The corpus of typing derivations ==\n")
    for name, fx in fixtures.items():
        ty.check_typing(fx.derivation, fx.equations, fx.system)
        print(f"{name:<20} {fx.system.value:<11} {fx.derivation.size():>4} nodes   {fx.description}")
    print()

    t1 = fixtures["t1_rec"].derivation
    print("T1 is typed with the fixed-point rule:")
    print("  ", print_formula(t1.type), "\n")

    d = nr_star_sub_f()
    left, right = st.check_sub(d)
    print(f"T2 needs a subtyping step ({sum(1 for _ in d.nodes())} nodes):")
    print("   ", print_formula(left))
    print(" ⊆ ", print_formula(right), "\n")

    print("== Erasing first-order information ==\n")
    e = ty.erase_derivation(t1)
    j = ty.check_typing(e, system=ty.System.TTR_DIAMOND)
    print("   ", print_formula(j.type), "\n")

    print("== Gödel transformation of 0̄ : N^r[0] ==\n")
    zero = fixtures["zero_rec"].derivation
    for label, cfg in (("F_X = ¬X", GodelConfig.negation({"X": 1})), ("F_X = X, X' → ⊥", GODEL_PAIR)):
        out = ty.godel_lift_typing(zero, cfg)
        j = ty.check_typing(out, system=ty.System.TTR_ZERO)
        print(f"{label}:\n    {print_formula(j.type)}")


if __name__ == "__main__":
    main()
