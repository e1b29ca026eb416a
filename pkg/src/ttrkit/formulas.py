"""Second-order formulas with least fixed points.

First-order terms are built from variables and declared function symbols.
Formulas are built from ``⊥``, atoms, ``→``, first- and second-order
``∀``, and ``μ``.  An atom is either a predicate variable applied to terms
(:class:`PVar`) or a predicate symbol applied to terms (:class:`PSym`).
Variables of a ``μ`` binder are predicate symbols.

Formulas keep their bound names, so ``==`` is syntactic identity.  Use
:func:`alpha_eq` to compare formulas up to renaming of bound variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Union

# ---------------------------------------------------------------------------
# First-order terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FoVar:
    name: str


@dataclass(frozen=True)
class FnApp:
    symbol: str
    args: tuple["FoTerm", ...] = ()


FoTerm = Union[FoVar, FnApp]


def term_vars(t: FoTerm) -> set[str]:
    match t:
        case FoVar(n):
            return {n}
        case FnApp(_, args):
            out: set[str] = set()
            for a in args:
                out |= term_vars(a)
            return out
    raise TypeError(t)


def subst_term(t: FoTerm, mapping: Mapping[str, FoTerm]) -> FoTerm:
    match t:
        case FoVar(n):
            return mapping.get(n, t)
        case FnApp(f, args):
            return FnApp(f, tuple(subst_term(a, mapping) for a in args))
    raise TypeError(t)


def print_term(t: FoTerm) -> str:
    match t:
        case FoVar(n):
            return n
        case FnApp(f, ()):
            return f
        case FnApp(f, args):
            return f"{f}(" + ", ".join(print_term(a) for a in args) + ")"
    raise TypeError(t)


def numeral_term(n: int, zero: str = "0", succ: str = "s") -> FoTerm:
    """``s(s(…(0)))`` with ``n`` successors."""
    t: FoTerm = FnApp(zero)
    for _ in range(n):
        t = FnApp(succ, (t,))
    return t


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------


class Formula:
    """Base class of formulas."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class PVar(Formula):
    """Predicate variable applied to terms (``X`` alone when the arity is 0)."""

    name: str
    args: tuple[FoTerm, ...] = ()


@dataclass(frozen=True)
class PSym(Formula):
    """Predicate symbol applied to terms."""

    name: str
    args: tuple[FoTerm, ...] = ()


@dataclass(frozen=True)
class Arrow(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ForallFo(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ForallSo(Formula):
    var: str
    arity: int
    body: Formula


@dataclass(frozen=True)
class Mu(Formula):
    """``μ symbol params . body <over>``: least fixed point of ``body`` in ``symbol``.

    Construction checks that the symbol occurs free in the body, only
    positively and at the right arity, and that ``over`` matches
    ``params`` in length.
    """

    symbol: str
    params: tuple[str, ...]
    body: Formula
    over: tuple[FoTerm, ...]

    def __post_init__(self) -> None:
        if len(self.params) != len(self.over):
            raise FormulaError(
                f"μ{self.symbol}: {len(self.params)} parameters but {len(self.over)} terms"
            )
        if len(set(self.params)) != len(self.params):
            raise FormulaError(f"μ{self.symbol}: repeated parameter")
        if self.symbol not in fv2(self.body):
            raise FormulaError(f"μ{self.symbol}: {self.symbol} does not appear in the body")
        pos, _ = polarity(self.symbol, self.body)
        if not pos:
            raise FormulaError(f"μ{self.symbol}: {self.symbol} occurs negatively in the body")
        for atom in _free_atoms(self.body, self.symbol):
            if len(atom.args) != len(self.params):
                raise FormulaError(f"μ{self.symbol}: atom {print_formula(atom)} has the wrong arity")


class FormulaError(ValueError):
    """An ill-formed formula or a failed formula operation."""


BOT = Bot()


def neg(a: Formula) -> Formula:
    return Arrow(a, BOT)


def arrows(*parts: Formula) -> Formula:
    """``A1 → A2 → … → An`` (right associative)."""
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Arrow(p, out)
    return out


Atom = Union[PVar, PSym]


def _is_atom(a: Formula) -> bool:
    return type(a) in (PVar, PSym)


# ---------------------------------------------------------------------------
# Free variables and names
# ---------------------------------------------------------------------------


def fv_fo(a: Formula) -> set[str]:
    """Free first-order variables."""
    match a:
        case Bot():
            return set()
        case PVar(_, args) | PSym(_, args):
            out: set[str] = set()
            for t in args:
                out |= term_vars(t)
            return out
        case Arrow(l, r):
            return fv_fo(l) | fv_fo(r)
        case ForallFo(v, body):
            return fv_fo(body) - {v}
        case ForallSo(_, _, body):
            return fv_fo(body)
        case Mu(_, xs, body, over):
            out = fv_fo(body) - set(xs)
            for t in over:
                out |= term_vars(t)
            return out
    raise TypeError(a)


def fv2(a: Formula) -> set[str]:
    """Free predicate variables and predicate symbols (``⊥`` is not included)."""
    match a:
        case Bot():
            return set()
        case PVar(n) | PSym(n):
            return {n}
        case Arrow(l, r):
            return fv2(l) | fv2(r)
        case ForallFo(_, body):
            return fv2(body)
        case ForallSo(v, _, body):
            return fv2(body) - {v}
        case Mu(c, _, body, _):
            return fv2(body) - {c}
    raise TypeError(a)


def free_pred_vars(a: Formula) -> set[str]:
    """Free predicate variables only (no symbols)."""
    match a:
        case PVar(n):
            return {n}
        case Bot() | PSym():
            return set()
        case Arrow(l, r):
            return free_pred_vars(l) | free_pred_vars(r)
        case ForallFo(_, body):
            return free_pred_vars(body)
        case ForallSo(v, _, body):
            return free_pred_vars(body) - {v}
        case Mu(_, _, body, _):
            return free_pred_vars(body)
    raise TypeError(a)


def subformulas(a: Formula) -> Iterator[Formula]:
    yield a
    match a:
        case Arrow(l, r):
            yield from subformulas(l)
            yield from subformulas(r)
        case ForallFo(_, body) | ForallSo(_, _, body) | Mu(_, _, body, _):
            yield from subformulas(body)


def all_names(a: Formula) -> set[str]:
    """Every variable or predicate name occurring in ``a``, bound or free."""
    out: set[str] = set()
    for s in subformulas(a):
        match s:
            case PVar(n, args) | PSym(n, args):
                out.add(n)
                for t in args:
                    out |= term_vars(t)
            case ForallFo(v, _) | ForallSo(v, _, _):
                out.add(v)
            case Mu(c, xs, _, over):
                out.add(c)
                out.update(xs)
                for t in over:
                    out |= term_vars(t)
    return out


def function_symbols(a: Formula) -> dict[str, int]:
    out: dict[str, int] = {}

    def term(t: FoTerm) -> None:
        if type(t) is FnApp:
            out[t.symbol] = len(t.args)
            for x in t.args:
                term(x)

    for s in subformulas(a):
        match s:
            case PVar(_, args) | PSym(_, args) | Mu(_, _, _, args):
                for t in args:
                    term(t)
    return out


def pred_var_arities(a: Formula) -> dict[str, int]:
    """Arity of every predicate variable occurring in ``a``, free or bound."""
    out: dict[str, int] = {}
    for s in subformulas(a):
        match s:
            case PVar(n, args):
                out.setdefault(n, len(args))
            case ForallSo(v, ar, _):
                out.setdefault(v, ar)
    return out


def free_pred_symbols(a: Formula) -> dict[str, int]:
    """Free predicate symbols with their arities."""
    out: dict[str, int] = {}
    names = fv2(a)
    for s in subformulas(a):
        if type(s) is PSym and s.name in names:
            out.setdefault(s.name, len(s.args))
    return out


def _free_atoms(a: Formula, name: str) -> Iterator[Atom]:
    match a:
        case PVar(n) | PSym(n) if n == name:
            yield a  # type: ignore[misc]
        case Arrow(l, r):
            yield from _free_atoms(l, name)
            yield from _free_atoms(r, name)
        case ForallFo(_, body):
            yield from _free_atoms(body, name)
        case ForallSo(v, _, body) if v != name:
            yield from _free_atoms(body, name)
        case Mu(c, _, body, _) if c != name:
            yield from _free_atoms(body, name)


def is_propositional(a: Formula) -> bool:
    """No first-order syntax at all: 0-ary atoms, no ``∀x``, no μ parameters."""
    for s in subformulas(a):
        match s:
            case PVar(_, args) | PSym(_, args) if args:
                return False
            case ForallFo():
                return False
            case Mu(_, xs, _, _) if xs:
                return False
    return True


class _Fresh:
    """Generates names not in a growing avoid set."""

    def __init__(self, avoid: Iterable[str]):
        self.avoid = set(avoid)

    def __call__(self, base: str) -> str:
        stem = base.rstrip("0123456789'") or base
        i = 1
        while f"{stem}{i}" in self.avoid:
            i += 1
        name = f"{stem}{i}"
        self.avoid.add(name)
        return name


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    return base if base not in avoid else _Fresh(avoid)(base)


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------


def subst_fo(a: Formula, mapping: Mapping[str, FoTerm]) -> Formula:
    """Simultaneous capture-avoiding substitution of first-order variables."""
    m = {k: v for k, v in mapping.items() if v != FoVar(k)}
    if not m:
        return a
    range_vars: set[str] = set()
    for t in m.values():
        range_vars |= term_vars(t)
    fresh = _Fresh(all_names(a) | range_vars | set(m))

    def go(a: Formula, m: dict[str, FoTerm]) -> Formula:
        if not m:
            return a
        match a:
            case Bot():
                return a
            case PVar(n, args):
                return PVar(n, tuple(subst_term(t, m) for t in args))
            case PSym(n, args):
                return PSym(n, tuple(subst_term(t, m) for t in args))
            case Arrow(l, r):
                return Arrow(go(l, m), go(r, m))
            case ForallFo(v, body):
                m2 = {k: t for k, t in m.items() if k != v}
                if not m2 or not (set(m2) & fv_fo(body)):
                    return a
                if v in range_vars:
                    v2 = fresh(v)
                    body = go(body, {v: FoVar(v2)})
                    v = v2
                return ForallFo(v, go(body, m2))
            case ForallSo(v, ar, body):
                return ForallSo(v, ar, go(body, m))
            case Mu(c, xs, body, over):
                new_over = tuple(subst_term(t, m) for t in over)
                m2 = {k: t for k, t in m.items() if k not in xs}
                if m2 and set(m2) & fv_fo(body):
                    clash = [x for x in xs if x in range_vars]
                    if clash:
                        ren = {x: fresh(x) for x in clash}
                        body = go(body, {x: FoVar(y) for x, y in ren.items()})
                        xs = tuple(ren.get(x, x) for x in xs)
                    body = go(body, m2)
                return Mu(c, xs, body, new_over)
        raise TypeError(a)

    return go(a, m)


def rename_pred(a: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of the predicate name ``old`` (``new`` must be fresh)."""
    match a:
        case PVar(n, args) if n == old:
            return PVar(new, args)
        case PSym(n, args) if n == old:
            return PSym(new, args)
        case Arrow(l, r):
            return Arrow(rename_pred(l, old, new), rename_pred(r, old, new))
        case ForallFo(v, body):
            return ForallFo(v, rename_pred(body, old, new))
        case ForallSo(v, ar, body) if v != old:
            return ForallSo(v, ar, rename_pred(body, old, new))
        case Mu(c, xs, body, over) if c != old:
            return Mu(c, xs, rename_pred(body, old, new), over)
    return a


def subst_so(a: Formula, name: str, params: Iterable[str], g: Formula) -> Formula:
    """Replace every free atom ``name(t⃗)`` of ``a`` by ``g[t⃗/params]``.

    ``name`` may be a predicate variable or a predicate symbol.  Bound
    variables of ``a`` are renamed when ``g`` would otherwise be captured.
    """
    params = tuple(params)
    g_fo = fv_fo(g) - set(params)
    g_so = fv2(g)
    fresh = _Fresh(all_names(a) | all_names(g) | set(params) | {name})

    def go(a: Formula) -> Formula:
        match a:
            case Bot():
                return a
            case PVar(n, args) | PSym(n, args):
                if n != name:
                    return a
                if len(args) != len(params):
                    raise FormulaError(
                        f"arity mismatch substituting for {name}: "
                        f"{len(args)} arguments, {len(params)} parameters"
                    )
                return subst_fo(g, dict(zip(params, args)))
            case Arrow(l, r):
                return Arrow(go(l), go(r))
            case ForallFo(v, body):
                if name not in fv2(body):
                    return a
                if v in g_fo:
                    v2 = fresh(v)
                    body = subst_fo(body, {v: FoVar(v2)})
                    v = v2
                return ForallFo(v, go(body))
            case ForallSo(v, ar, body):
                if v == name or name not in fv2(body):
                    return a
                if v in g_so:
                    v2 = fresh(v)
                    body = rename_pred(body, v, v2)
                    v = v2
                return ForallSo(v, ar, go(body))
            case Mu(c, xs, body, over):
                if c == name or name not in fv2(body):
                    return a
                if c in g_so:
                    c2 = fresh(c)
                    body = rename_pred(body, c, c2)
                    c = c2
                clash = [x for x in xs if x in g_fo]
                if clash:
                    ren = {x: fresh(x) for x in clash}
                    body = subst_fo(body, {x: FoVar(y) for x, y in ren.items()})
                    xs = tuple(ren.get(x, x) for x in xs)
                return Mu(c, xs, go(body), over)
        raise TypeError(a)

    return go(a)


def unfold(m: Mu) -> Formula:
    """``D[μC x⃗ D <y⃗> / C(y⃗)][t⃗/x⃗]`` for ``m = μC x⃗ D <t⃗>``."""
    inner = Mu(m.symbol, m.params, m.body, tuple(FoVar(x) for x in m.params))
    return subst_fo(subst_so(m.body, m.symbol, m.params, inner), dict(zip(m.params, m.over)))


# ---------------------------------------------------------------------------
# Alpha-equivalence
# ---------------------------------------------------------------------------


def alpha_key(a: Formula) -> tuple:
    """A canonical key: equal keys iff alpha-equivalent formulas."""

    def term(t: FoTerm, fo: dict[str, int]) -> tuple:
        match t:
            case FoVar(n):
                return ("b", fo[n]) if n in fo else ("v", n)
            case FnApp(f, args):
                return ("f", f, tuple(term(x, fo) for x in args))
        raise TypeError(t)

    def go(a: Formula, fo: dict[str, int], so: dict[str, int], depth: int) -> tuple:
        match a:
            case Bot():
                return ("bot",)
            case PVar(n, args) | PSym(n, args):
                head = ("b", so[n]) if n in so else ("v" if type(a) is PVar else "s", n)
                return ("at", head, tuple(term(t, fo) for t in args))
            case Arrow(l, r):
                return ("->", go(l, fo, so, depth), go(r, fo, so, depth))
            case ForallFo(v, body):
                return ("Af", go(body, {**fo, v: depth}, so, depth + 1))
            case ForallSo(v, ar, body):
                return ("As", ar, go(body, fo, {**so, v: depth}, depth + 1))
            case Mu(c, xs, body, over):
                fo2 = dict(fo)
                for i, x in enumerate(xs):
                    fo2[x] = depth + 1 + i
                return (
                    "mu",
                    len(xs),
                    go(body, fo2, {**so, c: depth}, depth + 1 + len(xs)),
                    tuple(term(t, fo) for t in over),
                )
        raise TypeError(a)

    return go(a, {}, {}, 0)


def alpha_eq(a: Formula, b: Formula) -> bool:
    return a == b or alpha_key(a) == alpha_key(b)


# ---------------------------------------------------------------------------
# Polarity and classifications
# ---------------------------------------------------------------------------


def occurrence_signs(name: str, a: Formula) -> set[int]:
    """Signs (+1 / -1) of the free occurrences of ``name`` in ``a``."""
    out: set[int] = set()

    def go(a: Formula, sign: int) -> None:
        match a:
            case PVar(n) | PSym(n) if n == name:
                out.add(sign)
            case Arrow(l, r):
                go(l, -sign)
                go(r, sign)
            case ForallFo(_, body):
                go(body, sign)
            case ForallSo(v, _, body) if v != name:
                go(body, sign)
            case Mu(c, _, body, _) if c != name:
                go(body, sign)

    go(a, 1)
    return out


def polarity(name: str, a: Formula) -> tuple[bool, bool]:
    """``(positive, negative)``: ``name`` has no negative / no positive free occurrence."""
    signs = occurrence_signs(name, a)
    return (-1 not in signs, 1 not in signs)


@dataclass(frozen=True)
class WithoutArrow:
    at: str  # name of the unique atom, or "_|_" for ⊥
    kind: int  # 1: the atom is free, 2: it is bound


@dataclass(frozen=True)
class ArrowType:
    pass


def classify_arrow(a: Formula) -> WithoutArrow | ArrowType:
    bound: set[str] = set()
    cur = a
    while True:
        match cur:
            case Arrow():
                return ArrowType()
            case Bot():
                return WithoutArrow("_|_", 1)
            case PVar(n) | PSym(n):
                return WithoutArrow(n, 2 if n in bound else 1)
            case ForallFo(_, body):
                cur = body
            case ForallSo(v, _, body):
                bound.add(v)
                cur = body
            case Mu(c, _, body, _):
                bound.add(c)
                cur = body
            case _:
                raise TypeError(cur)


def is_arrow_type(a: Formula) -> bool:
    return isinstance(classify_arrow(a), ArrowType)


@dataclass(frozen=True)
class Binder:
    """A quantifier in a prefix: ``arity`` is ``None`` for a first-order variable."""

    name: str
    arity: int | None = None

    def wrap(self, body: Formula) -> Formula:
        if self.arity is None:
            return ForallFo(self.name, body)
        return ForallSo(self.name, self.arity, body)


def wrap_prefix(prefix: Iterable[Binder], body: Formula) -> Formula:
    for b in reversed(tuple(prefix)):
        body = b.wrap(body)
    return body


@dataclass(frozen=True)
class Rep:
    """The representative ``∀v⃗ (left → right)`` of an arrow type."""

    prefix: tuple[Binder, ...]
    left: Formula
    right: Formula

    def formula(self) -> Formula:
        return wrap_prefix(self.prefix, Arrow(self.left, self.right))


def rep_formula(a: Formula) -> Formula:
    """The representative of an arrow type, as a formula."""
    match a:
        case Arrow():
            return a
        case ForallFo(v, body):
            return ForallFo(v, rep_formula(body))
        case ForallSo(v, ar, body):
            return ForallSo(v, ar, rep_formula(body))
        case Mu(c, xs, body, over):
            inner = Mu(c, xs, body, tuple(FoVar(x) for x in xs))
            return subst_fo(subst_so(rep_formula(body), c, xs, inner), dict(zip(xs, over)))
    raise FormulaError(f"not an arrow type: {print_formula(a)}")


def split_prefix(a: Formula) -> tuple[tuple[Binder, ...], Formula]:
    prefix = []
    while True:
        match a:
            case ForallFo(v, body):
                prefix.append(Binder(v))
                a = body
            case ForallSo(v, ar, body):
                prefix.append(Binder(v, ar))
                a = body
            case _:
                return tuple(prefix), a


def rep(a: Formula) -> Rep:
    """Representative of an arrow type, split into prefix, left and right."""
    prefix, core = split_prefix(rep_formula(a))
    assert type(core) is Arrow
    return Rep(prefix, core.left, core.right)


def forall_polarity(a: Formula) -> tuple[bool, bool]:
    """``(A ∈ Ω⁺, A ∈ Ω⁻)``: membership in the ∀-positive / ∀-negative types."""
    match a:
        case Bot() | PVar() | PSym():
            return True, True
        case Arrow(l, r):
            lp, lm = forall_polarity(l)
            rp, rm = forall_polarity(r)
            return lm and rp, lp and rm
        case ForallFo(_, body):
            return forall_polarity(body)
        case ForallSo(v, _, body):
            p, m = forall_polarity(body)
            return p, m and v not in fv2(body)
        case Mu(_, _, body, _):
            # The symbol appears and is positive by construction.
            return forall_polarity(body)[0], False
    raise TypeError(a)


def is_bottom_type(a: Formula) -> bool:
    match a:
        case Bot():
            return True
        case Arrow(_, r):
            return is_bottom_type(r)
        case ForallFo(_, body) | ForallSo(_, _, body) | Mu(_, _, body, _):
            return is_bottom_type(body)
    return False


def contains_bot(a: Formula) -> bool:
    return any(type(s) is Bot for s in subformulas(a))


def erase_diamond(a: Formula) -> Formula:
    """Drop all first-order information: arguments, ``∀x``, μ parameters and terms."""
    match a:
        case Bot():
            return a
        case PVar(n):
            return PVar(n)
        case PSym(n):
            return PSym(n)
        case Arrow(l, r):
            return Arrow(erase_diamond(l), erase_diamond(r))
        case ForallFo(_, body):
            return erase_diamond(body)
        case ForallSo(v, _, body):
            return ForallSo(v, 0, erase_diamond(body))
        case Mu(c, _, body, _):
            return Mu(c, (), erase_diamond(body), ())
    raise TypeError(a)


# ---------------------------------------------------------------------------
# Gödel transformations
# ---------------------------------------------------------------------------


class GodelConfigError(ValueError):
    """Invalid configuration, or a formula mentions a variable the configuration does not cover."""


@dataclass(frozen=True)
class GodelEntry:
    """For one predicate variable: its family ``V_X``, parameters and formula ``F_X``."""

    family: tuple[str, ...]
    params: tuple[str, ...]
    formula: Formula


@dataclass(frozen=True)
class GodelConfig:
    entries: Mapping[str, GodelEntry] = field(default_factory=dict)

    def __post_init__(self) -> None:
        seen: dict[str, str] = {}
        for x, e in self.entries.items():
            if not e.family:
                raise GodelConfigError(f"empty family for {x}")
            for member in e.family:
                if member in seen:
                    raise GodelConfigError(
                        f"families of {seen[member]} and {x} share the variable {member}"
                    )
                seen[member] = x
            f = e.formula
            if not is_bottom_type(f):
                raise GodelConfigError(f"formula for {x} is not a ⊥-type: {print_formula(f)}")
            if any(type(s) is PSym for s in subformulas(f)):
                raise GodelConfigError(f"formula for {x} contains a predicate symbol")
            if not fv_fo(f) <= set(e.params):
                raise GodelConfigError(f"formula for {x} has extra first-order variables")
            if not fv2(f) <= set(e.family):
                raise GodelConfigError(f"formula for {x} has free variables outside its family")
            for member in e.family:
                for atom in _free_atoms(f, member):
                    if len(atom.args) != len(e.params):
                        raise GodelConfigError(f"{member} used at the wrong arity in the formula for {x}")

    def entry(self, x: str) -> GodelEntry:
        if x not in self.entries:
            raise GodelConfigError(f"no Gödel data for the predicate variable {x}")
        return self.entries[x]

    @classmethod
    def uniform(
        cls,
        arities: Mapping[str, int],
        suffixes: tuple[str, ...],
        build: Callable[[list[Formula], tuple[str, ...]], Formula],
    ) -> "GodelConfig":
        """Same shape for every variable.

        The family of ``X`` is ``X+suffix`` for each suffix, and
        ``F_X = build(family atoms, params)``.
        """
        entries = {}
        for x, n in arities.items():
            params = tuple(f"x{i + 1}" for i in range(n))
            fam = tuple(x + s for s in suffixes)
            atoms = [PVar(m, tuple(FoVar(p) for p in params)) for m in fam]
            entries[x] = GodelEntry(fam, params, build(atoms, params))
        return cls(entries)

    @classmethod
    def negation(cls, arities: Mapping[str, int]) -> "GodelConfig":
        """``V_X = {X}`` and ``F_X = ¬X(x⃗)``: the classical translation."""
        return cls.uniform(arities, ("",), lambda atoms, _: neg(atoms[0]))

    def erased(self) -> "GodelConfig":
        """The configuration with first-order information erased from every ``F_X``."""
        return GodelConfig(
            {x: GodelEntry(e.family, (), erase_diamond(e.formula)) for x, e in self.entries.items()}
        )


def godel(a: Formula, cfg: GodelConfig) -> Formula:
    """The Gödel transformation ``A*`` determined by ``cfg``."""
    match a:
        case Bot() | PSym():
            return a
        case PVar(x, args):
            e = cfg.entry(x)
            if len(args) != len(e.params):
                raise GodelConfigError(f"{x} used with {len(args)} arguments, configured for {len(e.params)}")
            return subst_fo(e.formula, dict(zip(e.params, args)))
        case Arrow(l, r):
            return Arrow(godel(l, cfg), godel(r, cfg))
        case ForallFo(v, body):
            return ForallFo(v, godel(body, cfg))
        case ForallSo(x, ar, body):
            out = godel(body, cfg)
            for member in reversed(cfg.entry(x).family):
                out = ForallSo(member, ar, out)
            return out
        case Mu(c, xs, body, over):
            return Mu(c, xs, godel(body, cfg), over)
    raise TypeError(a)


# ---------------------------------------------------------------------------
# Equations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquationSystem:
    equations: tuple[tuple[FoTerm, FoTerm], ...] = ()

    def __iter__(self) -> Iterator[tuple[FoTerm, FoTerm]]:
        return iter(self.equations)

    def __len__(self) -> int:
        return len(self.equations)


def _match(pattern: FoTerm, t: FoTerm, sigma: dict[str, FoTerm]) -> bool:
    match pattern:
        case FoVar(n):
            if n in sigma:
                return sigma[n] == t
            sigma[n] = t
            return True
        case FnApp(f, args):
            if type(t) is not FnApp or t.symbol != f or len(t.args) != len(args):
                return False
            return all(_match(p, a, sigma) for p, a in zip(args, t.args))
    raise TypeError(pattern)


def match_equation(t: FoTerm, u: FoTerm, eqs: EquationSystem | Iterable) -> dict[str, FoTerm] | None:
    """A substitution ``σ`` and an equation ``l = r`` with ``lσ = t`` and ``rσ = u``.

    Both orientations of each equation are tried.  Returns ``None`` when
    nothing matches.
    """
    for l, r in eqs:
        for a, b in ((l, r), (r, l)):
            sigma: dict[str, FoTerm] = {}
            if _match(a, t, sigma) and _match(b, u, sigma):
                return sigma
    return None


# ---------------------------------------------------------------------------
# Signatures, printing and parsing
# ---------------------------------------------------------------------------


@dataclass
class Signature:
    """Declared function symbols and predicate symbols, with arities."""

    functions: dict[str, int] = field(default_factory=dict)
    predicates: dict[str, int] = field(default_factory=dict)

    @classmethod
    def arithmetic(cls, **predicates: int) -> "Signature":
        return cls({"0": 0, "s": 1}, dict(predicates))

    def merged(self, other: "Signature") -> "Signature":
        return Signature({**self.functions, **other.functions}, {**self.predicates, **other.predicates})

    def preamble(self) -> str:
        lines = [f"fn {f}/{n}" for f, n in sorted(self.functions.items())]
        lines += [f"pred {p}/{n}" for p, n in sorted(self.predicates.items())]
        return "\n".join(lines)


def signature_of(formulas: Iterable[Formula]) -> Signature:
    """The function symbols and free predicate symbols used by ``formulas``."""
    sig = Signature()
    for f in formulas:
        sig.functions.update(function_symbols(f))
        sig.predicates.update(free_pred_symbols(f))
    return sig


_DECL = re.compile(r"^\s*(fn|pred)\s+([A-Za-z0-9_']+)\s*/\s*([0-9]+)\s*$")


def parse_signature(text: str) -> Signature:
    """Parse declaration lines such as ``fn s/1`` and ``pred P/1`` (``;`` also separates)."""
    sig = Signature()
    for raw in re.split(r"[\n;]", text):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _DECL.match(line)
        if m is None:
            raise FormulaError(f"bad declaration {line!r}")
        kind, name, ar = m.group(1), m.group(2), int(m.group(3))
        (sig.functions if kind == "fn" else sig.predicates)[name] = ar
    return sig


def split_preamble(text: str) -> tuple[Signature, str]:
    """Separate leading ``fn``/``pred`` declaration lines from a formula."""
    decls, rest = [], []
    lines = text.splitlines()
    i = 0
    while i < len(lines) and (_DECL.match(lines[i]) or not lines[i].strip()):
        decls.append(lines[i])
        i += 1
    rest = lines[i:]
    return parse_signature("\n".join(decls)), "\n".join(rest)


def print_formula(a: Formula) -> str:
    """ASCII rendering accepted back by :func:`parse_formula`."""

    def atom_str(n: str, args: tuple[FoTerm, ...]) -> str:
        return n if not args else f"{n}(" + ", ".join(print_term(t) for t in args) + ")"

    def fmt(a: Formula, ctx: str) -> str:
        # ctx: "top" (extends right), "left" (left of an arrow), "unary" (under ~)
        match a:
            case Bot():
                return "_|_"
            case PVar(n, args) | PSym(n, args):
                return atom_str(n, args)
            case Arrow(l, Bot()):
                return "~" + fmt(l, "unary")
            case Arrow(l, r):
                s = fmt(l, "left") + " -> " + fmt(r, "top")
                return s if ctx == "top" else f"({s})"
            case ForallFo(v, body):
                s = f"!{v}. " + fmt(body, "top")
                return s if ctx == "top" else f"({s})"
            case ForallSo(v, ar, body):
                ann = f"/{ar}" if ar and not any(True for _ in _free_atoms(body, v)) else ""
                s = f"!{v}{ann}. " + fmt(body, "top")
                return s if ctx == "top" else f"({s})"
            case Mu(c, xs, body, over):
                params = "".join(" " + x for x in xs)
                terms = ", ".join(print_term(t) for t in over)
                return f"mu {c}{params} . " + fmt(body, "top") + f" <{terms}>"
        raise TypeError(a)

    return fmt(a, "top")


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_FTOKEN = re.compile(
    r"(?P<bot>_\|_|⊥)|(?P<arrow>->|→)|(?P<neg>~|¬)|(?P<all>!|∀)|(?P<mu>μ)"
    r"|(?P<punct>[,.()<>\[\]{}/])|(?P<name>[A-Za-z0-9_][A-Za-z0-9_']*)"
)


def _ftokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _FTOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        val = m.group(0)
        if kind == "punct":
            kind = val
        elif kind == "name" and val == "mu":
            kind = "mu"
        toks.append((kind, val, pos))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


_CLOSE = {"(": ")", "[": "]", "{": "}"}


def parse_formula(text: str, signature: Signature | None = None) -> Formula:
    """Parse the ASCII formula syntax.

    ``_|_`` is ⊥, ``->`` is right associative, ``A, B -> C`` abbreviates
    ``A -> B -> C``, ``~A`` is ``A -> _|_``, ``!x.``/``!X.`` quantify
    (the dot is optional; an unused variable may carry ``/n`` for its
    arity), and ``mu C x1 .. xn . A <t1, .., tn>`` is a least fixed point.
    Capitalised undeclared names are predicate variables.  Declarations
    may also be given as leading ``fn``/``pred`` lines.
    """
    pre_sig, body = split_preamble(text)
    sig = (signature or Signature()).merged(pre_sig)
    toks = _ftokenize(body)
    i = 0
    # scope entries: name -> [kind, arity]; kind "var" (∀X) or "sym" (μ)
    scope: list[tuple[str, list]] = []
    free_arity: dict[str, int] = {}

    def peek(k: int = 0) -> tuple[str, str, int]:
        return toks[min(i + k, len(toks) - 1)]

    def take(kind: str) -> tuple[str, str, int]:
        nonlocal i
        tok = toks[i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise FormulaSyntaxError(f"expected {kind!r}, found {what}", tok[2])
        i += 1
        return tok

    def formula() -> Formula:
        parts = [unary()]
        while peek()[0] == ",":
            take(",")
            parts.append(unary())
        if peek()[0] == "arrow":
            take("arrow")
            parts.append(formula())
            return arrows(*parts)
        if len(parts) > 1:
            raise FormulaSyntaxError("expected '->' after a comma-separated list", peek()[2])
        return parts[0]

    def lookup(name: str) -> list | None:
        for n, entry in reversed(scope):
            if n == name:
                return entry
        return None

    def unary() -> Formula:
        kind, val, pos = peek()
        if kind == "neg":
            take("neg")
            return neg(unary())
        if kind == "all":
            return quantifier()
        if kind == "mu":
            return mu()
        if kind == "bot":
            take("bot")
            return BOT
        if kind in _CLOSE:
            take(kind)
            inner = formula()
            take(_CLOSE[kind])
            return inner
        if kind == "name":
            return atom()
        what = "end of input" if kind == "eof" else repr(val)
        raise FormulaSyntaxError(f"expected a formula, found {what}", pos)

    def quantifier() -> Formula:
        take("all")
        _, name, pos = take("name")
        explicit = None
        if peek()[0] == "/":
            take("/")
            explicit = int(take("name")[1])
        if peek()[0] == ".":
            take(".")
        if name[0].isupper():
            entry: list = ["var", explicit]
            scope.append((name, entry))
            try:
                body = formula()
            finally:
                scope.pop()
            return ForallSo(name, entry[1] if entry[1] is not None else 0, body)
        if explicit is not None:
            raise FormulaSyntaxError("arity annotation on a first-order variable", pos)
        if name in sig.functions:
            raise FormulaSyntaxError(f"{name} is a function symbol", pos)
        return ForallFo(name, formula())

    def mu() -> Formula:
        _, _, pos = take("mu")
        _, c, _ = take("name")
        params = []
        while peek()[0] == "name":
            params.append(take("name")[1])
        take(".")
        scope.append((c, ["sym", len(params)]))
        try:
            body = formula()
        finally:
            scope.pop()
        take("<")
        over = []
        if peek()[0] != ">":
            over.append(term())
            while peek()[0] == ",":
                take(",")
                over.append(term())
        take(">")
        try:
            return Mu(c, tuple(params), body, tuple(over))
        except FormulaError as exc:
            raise FormulaSyntaxError(str(exc), pos) from None

    def args_list() -> tuple[FoTerm, ...]:
        if peek()[0] != "(":
            return ()
        take("(")
        out = [term()]
        while peek()[0] == ",":
            take(",")
            out.append(term())
        take(")")
        return tuple(out)

    def atom() -> Formula:
        _, name, pos = take("name")
        # An atom takes arguments only with "(" directly followed by terms
        # and a matching ")"; "X (A -> B)" would be ambiguous, so a
        # parenthesised argument list must not contain formula syntax.
        args: tuple[FoTerm, ...] = ()
        if peek()[0] == "(" and _looks_like_args(i):
            args = args_list()
        entry = lookup(name)
        if entry is not None:
            kind, ar = entry
            if ar is None:
                entry[1] = len(args)
            elif ar != len(args):
                raise FormulaSyntaxError(f"{name} expects {ar} arguments, got {len(args)}", pos)
            return PVar(name, args) if kind == "var" else PSym(name, args)
        if name in sig.predicates:
            if sig.predicates[name] != len(args):
                raise FormulaSyntaxError(
                    f"{name} expects {sig.predicates[name]} arguments, got {len(args)}", pos
                )
            return PSym(name, args)
        if name[0].isupper():
            if free_arity.setdefault(name, len(args)) != len(args):
                raise FormulaSyntaxError(f"{name} used with inconsistent arities", pos)
            return PVar(name, args)
        raise FormulaSyntaxError(f"{name!r} is not a predicate (predicates are capitalised or declared)", pos)

    def term() -> FoTerm:
        _, name, pos = take("name")
        args = args_list()
        if name in sig.functions:
            if sig.functions[name] != len(args):
                raise FormulaSyntaxError(
                    f"{name} expects {sig.functions[name]} arguments, got {len(args)}", pos
                )
            return FnApp(name, args)
        if args:
            raise FormulaSyntaxError(f"undeclared function symbol {name!r}", pos)
        return FoVar(name)

    def _looks_like_args(j: int) -> bool:
        # tokens after "(" must be names, commas and parentheses up to the match
        depth = 0
        k = j
        while k < len(toks):
            kind = toks[k][0]
            if kind == "(":
                depth += 1
            elif kind == ")":
                depth -= 1
                if depth == 0:
                    return True
            elif kind not in ("name", ","):
                return False
            k += 1
        return False

    result = formula()
    if peek()[0] != "eof":
        raise FormulaSyntaxError(f"unexpected {peek()[1]!r}", peek()[2])
    return result


def parse_fo_term(text: str, signature: Signature | None = None) -> FoTerm:
    """Parse a first-order term such as ``s(s(0))`` or ``p(x)``."""
    sig = signature or Signature()
    toks = _ftokenize(text)
    i = 0

    def term() -> FoTerm:
        nonlocal i
        kind, name, pos = toks[i]
        if kind != "name":
            raise FormulaSyntaxError("expected a term", pos)
        i += 1
        args: list[FoTerm] = []
        if toks[i][0] == "(":
            i += 1
            args.append(term())
            while toks[i][0] == ",":
                i += 1
                args.append(term())
            if toks[i][0] != ")":
                raise FormulaSyntaxError("expected ')'", toks[i][2])
            i += 1
        if name in sig.functions:
            if sig.functions[name] != len(args):
                raise FormulaSyntaxError(f"{name} expects {sig.functions[name]} arguments", pos)
            return FnApp(name, tuple(args))
        if args:
            raise FormulaSyntaxError(f"undeclared function symbol {name!r}", pos)
        return FoVar(name)

    t = term()
    if toks[i][0] != "eof":
        raise FormulaSyntaxError("trailing input", toks[i][2])
    return t


def parse_equations(text: str, signature: Signature | None = None) -> EquationSystem:
    """One equation ``l = r`` per line (or separated by ``;``)."""
    eqs = []
    for raw in re.split(r"[\n;]", text):
        line = raw.strip()
        if not line:
            continue
        if line.count("=") != 1:
            raise FormulaError(f"bad equation {line!r}")
        l, r = line.split("=")
        eqs.append((parse_fo_term(l, signature), parse_fo_term(r, signature)))
    return EquationSystem(tuple(eqs))


def print_equations(eqs: EquationSystem) -> list[str]:
    return [f"{print_term(l)} = {print_term(r)}" for l, r in eqs]
