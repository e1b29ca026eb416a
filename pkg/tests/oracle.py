"""Independent reference implementations used to derive and cross-check values.

Nothing here shares code with the package under test beyond reading its
data constructors: λ-terms are converted to a plain named representation
(nested tuples) and reduced with textbook capture-avoiding substitution.
"""

from __future__ import annotations

import itertools

from ttrkit import formulas as fm
from ttrkit import lambda_core as lc

# Named terms: ("v", name) | ("c", name) | ("l", name, body) | ("a", fn, arg)

_counter = itertools.count()


def _fresh(base: str) -> str:
    return f"{base.rstrip('0123456789_')}_{next(_counter)}"


def to_named(t: lc.Term, env: tuple[str, ...] = ()) -> tuple:
    """Convert a de Bruijn term to a named term with globally fresh binder names."""
    match t:
        case lc.BoundVar(index=i):
            return ("v", env[i])
        case lc.FreeVar(name=n):
            return ("v", n)
        case lc.SymConst(name=n):
            return ("c", n)
        case lc.Abs(body=b, hint=h):
            x = _fresh(h)
            return ("l", x, to_named(b, (x,) + env))
        case lc.App(fn=f, arg=a):
            return ("a", to_named(f, env), to_named(a, env))
    raise TypeError(t)


def free(t: tuple) -> set[str]:
    match t:
        case ("v", n):
            return {n}
        case ("c", _):
            return set()
        case ("l", x, b):
            return free(b) - {x}
        case ("a", f, a):
            return free(f) | free(a)
    raise TypeError(t)


def subst(t: tuple, x: str, u: tuple, fv_u: set[str] | None = None) -> tuple:
    """t[u/x], renaming binders of t that would capture free variables of u."""
    if fv_u is None:
        fv_u = free(u)
    match t:
        case ("v", n):
            return u if n == x else t
        case ("c", _):
            return t
        case ("a", f, a):
            return ("a", subst(f, x, u, fv_u), subst(a, x, u, fv_u))
        case ("l", y, b):
            if y == x:
                return t
            if y in fv_u:
                z = _fresh(y)
                b = subst(b, y, ("v", z), {z})
                y = z
            return ("l", y, subst(b, x, u, fv_u))
    raise TypeError(t)


def head_step(t: tuple) -> tuple | None:
    """One head-reduction step, or None at head normal form."""
    if t[0] == "l":
        r = head_step(t[2])
        return None if r is None else ("l", t[1], r)
    spine = []
    h = t
    while h[0] == "a":
        spine.append(h[2])
        h = h[1]
    if h[0] != "l" or not spine:
        return None
    arg = spine.pop()
    out = subst(h[2], h[1], arg)
    for a in reversed(spine):
        out = ("a", out, a)
    return out


def head_count(t: tuple, fuel: int = 100_000) -> tuple[tuple | None, int]:
    """(head normal form, steps) or (None, fuel) when fuel runs out."""
    n = 0
    while n < fuel:
        r = head_step(t)
        if r is None:
            return t, n
        t = r
        n += 1
    return None, n


def normalize(t: tuple, fuel: int = 100_000) -> tuple | None:
    """Leftmost-outermost normal form, or None when fuel runs out."""
    budget = [fuel]

    def go(t: tuple) -> tuple | None:
        while True:
            r = head_step(t)
            if r is None:
                break
            budget[0] -= 1
            if budget[0] < 0:
                return None
            t = r
        # t is in head normal form: normalize arguments
        binders = []
        while t[0] == "l":
            binders.append(t[1])
            t = t[2]
        args = []
        while t[0] == "a":
            args.append(t[2])
            t = t[1]
        out = t
        for a in reversed(args):
            na = go(a)
            if na is None:
                return None
            out = ("a", out, na)
        for x in reversed(binders):
            out = ("l", x, out)
        return out

    return go(t)


def alpha_eq(t: tuple, u: tuple, env_t: dict | None = None, env_u: dict | None = None, depth: int = 0) -> bool:
    env_t = env_t or {}
    env_u = env_u or {}
    match t, u:
        case ("v", a), ("v", b):
            if a in env_t or b in env_u:
                return env_t.get(a) == env_u.get(b)
            return a == b
        case ("c", a), ("c", b):
            return a == b
        case ("l", x, b1), ("l", y, b2):
            return alpha_eq(b1, b2, {**env_t, x: depth}, {**env_u, y: depth}, depth + 1)
        case ("a", f1, a1), ("a", f2, a2):
            return alpha_eq(f1, f2, env_t, env_u, depth) and alpha_eq(a1, a2, env_t, env_u, depth)
    return False


def steps_to_hnf(t: lc.Term, fuel: int = 100_000) -> int | None:
    hnf, n = head_count(to_named(t), fuel)
    return None if hnf is None else n


def same_term(t: lc.Term, u: lc.Term) -> bool:
    return alpha_eq(to_named(t), to_named(u))


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------


def sign_paths(name: str, a: fm.Formula) -> list[int]:
    """Sign of every free occurrence of ``name``, found by listing paths.

    Each occurrence's sign is the parity of the number of arrow-left steps on
    the path from the root; occurrences under a binder of the same name are
    not free and are skipped.
    """
    found: list[int] = []

    def walk(a: fm.Formula, lefts: int) -> None:
        if isinstance(a, (fm.PVar, fm.PSym)):
            if a.name == name:
                found.append(-1 if lefts % 2 else 1)
        elif isinstance(a, fm.Arrow):
            walk(a.left, lefts + 1)
            walk(a.right, lefts)
        elif isinstance(a, fm.ForallFo):
            walk(a.body, lefts)
        elif isinstance(a, fm.ForallSo):
            if a.var != name:
                walk(a.body, lefts)
        elif isinstance(a, fm.Mu):
            if a.symbol != name:
                walk(a.body, lefts)

    walk(a, 0)
    return found


def naive_polarity(name: str, a: fm.Formula) -> tuple[bool, bool]:
    signs = sign_paths(name, a)
    return all(s > 0 for s in signs), all(s < 0 for s in signs)
