"""Untyped lambda-calculus: terms, substitution, head reduction, normalization.

Terms use de Bruijn indices internally, with a display name kept on every
abstraction.  Equality ignores those names, so ``==`` on terms is
alpha-equivalence.  Every node also caches its hash and how far its loose
indices reach.  That lets substitution skip closed subterms entirely and
keeps long head-reduction runs cheap.
"""

from __future__ import annotations

import enum
import re
import sys
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping

DEFAULT_FUEL = 1_000_000

# Deep terms (large numerals, long traces) recurse through the structural
# helpers below; the default interpreter limit is too tight for them.
if sys.getrecursionlimit() < 20_000:
    sys.setrecursionlimit(20_000)


# ---------------------------------------------------------------------------
# Term representation
# ---------------------------------------------------------------------------


class Term:
    """Base class of lambda-terms.  Instances are immutable."""

    __slots__ = ()

    loose: int  # 1 + the largest index pointing outside this term (0 if none)
    has_free: bool  # contains a FreeVar
    has_const: bool  # contains a SymConst
    _hash: int

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return print_term(self)

    @property
    def is_closed(self) -> bool:
        """True when the term has no dangling indices and no free names."""
        return self.loose == 0 and not self.has_free


def _init(obj: Term, loose: int, has_free: bool, has_const: bool, h: int) -> None:
    object.__setattr__(obj, "loose", loose)
    object.__setattr__(obj, "has_free", has_free)
    object.__setattr__(obj, "has_const", has_const)
    object.__setattr__(obj, "_hash", h)


@dataclass(frozen=True, eq=False, slots=True)
class BoundVar(Term):
    """A variable bound by the ``index``-th enclosing abstraction (0 = nearest)."""

    index: int
    loose: int = field(init=False, repr=False)
    has_free: bool = field(init=False, repr=False)
    has_const: bool = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError("negative de Bruijn index")
        _init(self, self.index + 1, False, False, hash(("B", self.index)))

    def __eq__(self, other: object) -> bool:
        return self is other or (type(other) is BoundVar and other.index == self.index)

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=False, slots=True)
class FreeVar(Term):
    """A free variable, identified by name."""

    name: str
    loose: int = field(init=False, repr=False)
    has_free: bool = field(init=False, repr=False)
    has_const: bool = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        _init(self, 0, True, False, hash(("F", self.name)))

    def __eq__(self, other: object) -> bool:
        return self is other or (type(other) is FreeVar and other.name == self.name)

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=False, slots=True)
class SymConst(Term):
    """An opaque constant.  Never bound by beta; only replaced by explicit substitution."""

    name: str
    loose: int = field(init=False, repr=False)
    has_free: bool = field(init=False, repr=False)
    has_const: bool = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        _init(self, 0, False, True, hash(("C", self.name)))

    def __eq__(self, other: object) -> bool:
        return self is other or (type(other) is SymConst and other.name == self.name)

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=False, slots=True)
class Abs(Term):
    """Abstraction.  ``hint`` is only used for printing and never affects equality."""

    body: Term
    hint: str = "x"
    loose: int = field(init=False, repr=False)
    has_free: bool = field(init=False, repr=False)
    has_const: bool = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        b = self.body
        _init(self, max(b.loose - 1, 0), b.has_free, b.has_const, hash(("L", b._hash)))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return type(other) is Abs and other._hash == self._hash and other.body == self.body

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=False, slots=True)
class App(Term):
    """Application ``(fn)arg``."""

    fn: Term
    arg: Term
    loose: int = field(init=False, repr=False)
    has_free: bool = field(init=False, repr=False)
    has_const: bool = field(init=False, repr=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        f, a = self.fn, self.arg
        _init(
            self,
            max(f.loose, a.loose),
            f.has_free or a.has_free,
            f.has_const or a.has_const,
            hash(("A", f._hash, a._hash)),
        )

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not App or other._hash != self._hash:
            return False
        # Iterate down the spine to avoid deep recursion on long applications.
        a, b = self, other
        while type(a) is App and type(b) is App:
            if a is b:
                return True
            if a._hash != b._hash or a.arg != b.arg:
                return False
            a, b = a.fn, b.fn
        return a == b

    __hash__ = Term.__hash__


# ---------------------------------------------------------------------------
# Construction helpers
# ---------------------------------------------------------------------------


def apply(head: Term, *args: Term) -> Term:
    """Build ``(head)a1 a2 ... an``."""
    for a in args:
        head = App(head, a)
    return head


def lams(hints: list[str] | tuple[str, ...], body: Term) -> Term:
    """Wrap ``body`` in abstractions; ``hints[0]`` is the outermost binder."""
    for h in reversed(hints):
        body = Abs(body, h)
    return body


def abstract(t: Term, name: str) -> Abs:
    """Bind the free variable ``name`` of ``t`` with a new outermost abstraction."""

    def go(u: Term, depth: int) -> Term:
        if not u.has_free:
            return u
        match u:
            case FreeVar(n) if n == name:
                return BoundVar(depth)
            case Abs(body, hint):
                nb = go(body, depth + 1)
                return u if nb is body else Abs(nb, hint)
            case App(f, a):
                nf, na = go(f, depth), go(a, depth)
                return u if (nf is f and na is a) else App(nf, na)
        return u

    return Abs(go(shift(t, 1), 0), name)


def instantiate(body: Term, value: Term) -> Term:
    """Replace index 0 of an abstraction body by ``value``, lowering other loose indices."""
    return _subst_top(body, value, 0)


def open_abs(t: Abs, name: str) -> Term:
    """Body of ``t`` with its binder replaced by the free variable ``name``."""
    return instantiate(t.body, FreeVar(name))


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    """Add ``d`` to every index at or above ``cutoff``."""
    if d == 0 or t.loose <= cutoff:
        return t
    match t:
        case BoundVar(k):
            return BoundVar(k + d)
        case Abs(body, hint):
            return Abs(shift(body, d, cutoff + 1), hint)
        case App():
            spine, head = _spine(t)
            out = shift(head, d, cutoff)
            for a in spine:
                out = App(out, shift(a, d, cutoff))
            return out
    return t


def _spine(t: Term) -> tuple[list[Term], Term]:
    """Split an application into (arguments in order, head)."""
    args: list[Term] = []
    while type(t) is App:
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return args, t


def _subst_top(t: Term, s: Term, depth: int) -> Term:
    if t.loose <= depth:
        return t
    match t:
        case BoundVar(k):
            if k == depth:
                return shift(s, depth)
            return BoundVar(k - 1)
        case Abs(body, hint):
            return Abs(_subst_top(body, s, depth + 1), hint)
        case App():
            args, head = _spine(t)
            out = _subst_top(head, s, depth)
            for a in args:
                out = App(out, _subst_top(a, s, depth))
            return out
    return t


# ---------------------------------------------------------------------------
# Free variables, constants, substitution by name
# ---------------------------------------------------------------------------


def _walk(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        u = stack.pop()
        yield u
        match u:
            case Abs(body):
                stack.append(body)
            case App(f, a):
                stack.append(a)
                stack.append(f)


def free_vars(t: Term) -> set[str]:
    """Names of the free variables of ``t`` (constants are reported by :func:`constants`)."""
    if not t.has_free:
        return set()
    return {u.name for u in _walk(t) if type(u) is FreeVar}


def constants(t: Term) -> set[str]:
    """Names of the constants occurring in ``t``."""
    if not t.has_const:
        return set()
    return {u.name for u in _walk(t) if type(u) is SymConst}


def size(t: Term) -> int:
    """Number of nodes of ``t``."""
    return sum(1 for _ in _walk(t))


def substitute(t: Term, bindings: Mapping[str, Term]) -> Term:
    """Simultaneous capture-free substitution of free variables by terms.

    Replacement terms are inserted under binders with their indices shifted,
    so nothing in them can be captured.
    """
    if not bindings:
        return t
    memo: dict[tuple[int, int], Term] = {}

    def go(u: Term, depth: int) -> Term:
        if not u.has_free:
            return u
        key = (id(u), depth)
        hit = memo.get(key)
        if hit is not None:
            return hit
        match u:
            case FreeVar(n):
                r = bindings.get(n)
                out = u if r is None else shift(r, depth)
            case Abs(body, hint):
                nb = go(body, depth + 1)
                out = u if nb is body else Abs(nb, hint)
            case App():
                args, head = _spine(u)
                out = go(head, depth)
                changed = out is not head
                new_args = []
                for a in args:
                    na = go(a, depth)
                    changed = changed or na is not a
                    new_args.append(na)
                out = apply(out, *new_args) if changed else u
            case _:
                out = u
        memo[key] = out
        return out

    return go(t, 0)


def replace_constants(t: Term, bindings: Mapping[str, Term]) -> Term:
    """Replace constants by (closed or named-free) terms, simultaneously."""
    if not bindings:
        return t
    memo: dict[tuple[int, int], Term] = {}

    def go(u: Term, depth: int) -> Term:
        if not u.has_const:
            return u
        key = (id(u), depth)
        hit = memo.get(key)
        if hit is not None:
            return hit
        match u:
            case SymConst(n):
                r = bindings.get(n)
                out = u if r is None else shift(r, depth)
            case Abs(body, hint):
                nb = go(body, depth + 1)
                out = u if nb is body else Abs(nb, hint)
            case App():
                args, head = _spine(u)
                out = apply(go(head, depth), *(go(a, depth) for a in args))
            case _:
                out = u
        memo[key] = out
        return out

    return go(t, 0)


def fresh_name(base: str, avoid: set[str] | frozenset[str]) -> str:
    """``base`` itself if unused, otherwise ``base`` with the smallest free numeric suffix."""
    if base not in avoid:
        return base
    stem = base.rstrip("0123456789") or base
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


# ---------------------------------------------------------------------------
# Head reduction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """``λx1…λxn (head) v1 … vm``: binder hints, head term, and argument list."""

    binders: tuple[str, ...]
    head: Term
    args: tuple[Term, ...]

    def rebuild(self) -> Term:
        return lams(self.binders, apply(self.head, *self.args))


@dataclass(frozen=True)
class HeadRedex:
    """``λx⃗ (λx u) v v⃗``: head is an abstraction and there is at least one argument."""

    decomposition: Decomposition


@dataclass(frozen=True)
class HeadNormal:
    """``λx⃗ (x) v⃗``: head is a variable or constant."""

    decomposition: Decomposition


def decompose(t: Term) -> Decomposition:
    hints: list[str] = []
    while type(t) is Abs:
        hints.append(t.hint)
        t = t.body
    args, head = _spine(t)
    return Decomposition(tuple(hints), head, tuple(args))


def head_status(t: Term) -> HeadRedex | HeadNormal:
    """Classify ``t`` by its head."""
    d = decompose(t)
    if type(d.head) is Abs and d.args:
        return HeadRedex(d)
    return HeadNormal(d)


def head_step(t: Term) -> Term | None:
    """One head-reduction step, or ``None`` if ``t`` is in head normal form."""
    hints: list[str] = []
    u = t
    while type(u) is Abs:
        hints.append(u.hint)
        u = u.body
    args, head = _spine(u)
    if type(head) is not Abs or not args:
        return None
    out = apply(instantiate(head.body, args[0]), *args[1:])
    return lams(hints, out)


class Status(enum.Enum):
    HEAD_NORMAL_FORM = "HeadNormalForm"
    FUEL_EXHAUSTED = "FuelExhausted"


@dataclass(frozen=True)
class ReductionTrace:
    """The head-reduction sequence from ``start``.

    ``steps[i]`` is the term after ``i + 1`` steps.
    """

    start: Term
    steps: tuple[Term, ...]
    status: Status

    @property
    def count(self) -> int:
        return len(self.steps)

    @property
    def final(self) -> Term:
        return self.steps[-1] if self.steps else self.start

    @property
    def terminated(self) -> bool:
        return self.status is Status.HEAD_NORMAL_FORM

    def terms(self) -> tuple[Term, ...]:
        """``start`` followed by every step."""
        return (self.start, *self.steps)


def head_reduce(t: Term, fuel: int = DEFAULT_FUEL) -> ReductionTrace:
    """Head-reduce ``t`` until head normal form or until ``fuel`` steps have been made."""
    if fuel < 1:
        raise ValueError("fuel must be positive")
    steps: list[Term] = []
    cur = t
    while len(steps) < fuel:
        nxt = head_step(cur)
        if nxt is None:
            return ReductionTrace(t, tuple(steps), Status.HEAD_NORMAL_FORM)
        steps.append(nxt)
        cur = nxt
    status = Status.HEAD_NORMAL_FORM if head_step(cur) is None else Status.FUEL_EXHAUSTED
    return ReductionTrace(t, tuple(steps), status)


def head_normal_form(t: Term, fuel: int = DEFAULT_FUEL) -> tuple[Term | None, int]:
    """Head normal form of ``t`` and the number of steps, without recording the trace.

    Returns ``(None, fuel)`` when the fuel runs out first.
    """
    cur, n = t, 0
    while True:
        nxt = head_step(cur)
        if nxt is None:
            return cur, n
        if n == fuel:
            return None, n
        cur, n = nxt, n + 1


def head_steps(t: Term, fuel: int = DEFAULT_FUEL) -> Iterator[Term]:
    """Yield ``t`` and then each head reduct, up to ``fuel`` steps."""
    cur = t
    yield cur
    for _ in range(fuel):
        cur = head_step(cur)
        if cur is None:
            return
        yield cur


# ---------------------------------------------------------------------------
# Normalization and equivalence
# ---------------------------------------------------------------------------


class FuelExhausted(Exception):
    """Raised when normalization runs out of fuel."""

    def __init__(self, fuel: int):
        super().__init__(f"fuel exhausted after {fuel} steps")
        self.fuel = fuel


def is_normal(t: Term) -> bool:
    """True when ``t`` contains no redex."""
    stack = [t]
    while stack:
        u = stack.pop()
        match u:
            case Abs(body):
                stack.append(body)
            case App(f, a):
                if type(f) is Abs:
                    return False
                stack.append(f)
                stack.append(a)
    return True


def normalize_left(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """Normal form by leftmost reduction; raises :class:`FuelExhausted` if ``fuel`` steps do not suffice.

    Leftmost reduction is head reduction followed by the same process on
    the arguments of the head normal form, from left to right.
    """
    if fuel < 1:
        raise ValueError("fuel must be positive")
    budget = [fuel]

    def norm(u: Term) -> Term:
        hnf, n = head_normal_form(u, budget[0])
        if hnf is None:
            raise FuelExhausted(fuel)
        budget[0] -= n
        d = decompose(hnf)
        return lams(d.binders, apply(d.head, *(norm(a) for a in d.args)))

    return norm(t)


class Equiv(enum.Enum):
    EQUAL = "Equal"
    NOT_EQUAL = "NotEqual"
    UNKNOWN = "Unknown"


def beta_equiv(t: Term, u: Term, fuel: int = DEFAULT_FUEL) -> Equiv:
    """Compare normal forms; ``UNKNOWN`` when either side fails to normalize within ``fuel``."""
    try:
        nt = normalize_left(t, fuel)
        nu = normalize_left(u, fuel)
    except FuelExhausted:
        return Equiv.UNKNOWN
    return Equiv.EQUAL if nt == nu else Equiv.NOT_EQUAL


def common_reduct(t: Term, u: Term, fuel: int = DEFAULT_FUEL) -> Term | None:
    """A term reached by head reduction from both ``t`` and ``u``, or ``None``.

    Head reduction is deterministic, so ``t`` and ``u`` have a common head
    reduct exactly when their traces meet.  Each trace runs for at most
    ``fuel`` steps.
    """
    seen = set(head_steps(t, fuel))
    for w in head_steps(u, fuel):
        if w in seen:
            return w
    return None


def ste(t: Term) -> set[Term]:
    """The subterm set ``{t} ∪ STE(t1) ∪ … ∪ STE(tm)`` of a normal term.

    Bound variables of ``t`` become free names in the argument subterms.
    The names come from the binder hints, made fresh where needed.
    """
    if not is_normal(t):
        raise ValueError("ste requires a normal term")
    out: set[Term] = set()
    avoid = set(free_vars(t))

    def go(u: Term) -> None:
        out.add(u)
        d = decompose(u)
        names = []
        for h in d.binders:
            name = fresh_name(h, avoid)
            avoid.add(name)
            names.append(name)
        opened = _open_many(apply(d.head, *d.args), names)
        for a in _spine(opened)[0]:
            go(a)

    go(t)
    return out


def _open_many(body: Term, names: list[str]) -> Term:
    """Replace the indices of ``len(names)`` enclosing binders by free variables."""
    k = len(names)
    if k == 0 or body.loose == 0:
        return body

    def go(u: Term, depth: int) -> Term:
        if u.loose <= depth:
            return u
        match u:
            case BoundVar(i):
                j = i - depth  # 0 = innermost of the opened binders
                if j < k:
                    return FreeVar(names[k - 1 - j])
                return BoundVar(i - k)
            case Abs(b, hint):
                return Abs(go(b, depth + 1), hint)
            case App(f, a):
                return App(go(f, depth), go(a, depth))
        return u

    return go(body, 0)


# ---------------------------------------------------------------------------
# Printing and parsing
# ---------------------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


def print_term(t: Term, abbreviations: Mapping[Term, str] | None = None) -> str:
    """Render ``t`` with left-associative juxtaposition and ``\\x.`` binders.

    Binder hints that would clash with a free name or an enclosing binder
    get a numeric suffix.  ``abbreviations`` maps closed terms to atomic
    labels printed in their place.
    """
    free = free_vars(t)
    abbrev = abbreviations or {}

    def atom(u: Term, env: list[str]) -> str:
        if abbrev and u.loose == 0 and u in abbrev:
            return abbrev[u]
        s = fmt(u, env)
        return f"({s})" if type(u) in (Abs, App) else s

    def fmt(u: Term, env: list[str]) -> str:
        if abbrev and u.loose == 0 and u in abbrev:
            return abbrev[u]
        match u:
            case BoundVar(i):
                if i >= len(env):
                    return f"<{i}>"
                return env[len(env) - 1 - i]
            case FreeVar(n):
                return n
            case SymConst(n):
                return f"#{n}"
            case Abs():
                names = []
                inner_env = list(env)
                while type(u) is Abs:
                    name = fresh_name(u.hint, free | set(inner_env))
                    names.append(name)
                    inner_env.append(name)
                    u = u.body
                return "\\" + " ".join(names) + ". " + fmt(u, inner_env)
            case App():
                args, head = _spine(u)
                parts = [atom(head, env)]
                parts.extend(atom(a, env) for a in args)
                return " ".join(parts)
        raise TypeError(f"not a term: {u!r}")

    return fmt(t, [])


class TermSyntaxError(ValueError):
    """Malformed term text; ``pos`` is the character offset of the problem."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(?P<lam>\\|λ)|(?P<dot>\.)|(?P<lp>\()|(?P<rp>\))"
    r"|(?P<const>#[A-Za-z0-9_']+)|(?P<macro>@[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<int>[0-9]+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        assert kind is not None
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


NumeralHook = Callable[[str, int], Term]


def parse_term(
    text: str,
    macros: Mapping[str, Term] | None = None,
    numerals: NumeralHook | None = None,
) -> Term:
    """Parse the textual term syntax.

    ``\\x y. t`` or ``λx. t`` abstracts; juxtaposition applies (left
    associative); parentheses group; ``#c`` is a constant.  If ``macros`` is
    given, ``@name`` splices in a closed term.  If ``numerals`` is given,
    ``church N`` and ``rec N`` splice in numerals.
    """
    toks = _tokenize(text)
    i = 0

    def peek() -> tuple[str, str, int]:
        return toks[i]

    def take(kind: str) -> tuple[str, str, int]:
        nonlocal i
        tok = toks[i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise TermSyntaxError(f"expected {kind}, found {what}", tok[2])
        i += 1
        return tok

    def term(env: list[str]) -> Term:
        if peek()[0] == "lam":
            return lam(env)
        return application(env)

    def lam(env: list[str]) -> Term:
        take("lam")
        names = []
        while peek()[0] == "ident":
            names.append(take("ident")[1])
        if not names:
            raise TermSyntaxError("expected binder name", peek()[2])
        take("dot")
        body = term(env + names)
        return lams(names, body)

    def starts_atom(kind: str) -> bool:
        return kind in ("lp", "const", "macro", "ident", "lam")

    def application(env: list[str]) -> Term:
        head = atom(env)
        while starts_atom(peek()[0]):
            if peek()[0] == "lam":
                head = App(head, lam(env))
                break
            head = App(head, atom(env))
        return head

    def atom(env: list[str]) -> Term:
        nonlocal i
        kind, val, pos = peek()
        if kind == "lp":
            take("lp")
            inner = term(env)
            take("rp")
            return inner
        if kind == "const":
            i += 1
            return SymConst(val[1:])
        if kind == "macro":
            i += 1
            if macros is None or val[1:] not in macros:
                raise TermSyntaxError(f"unknown name {val}", pos)
            return macros[val[1:]]
        if kind == "ident":
            i += 1
            if numerals is not None and val in ("church", "rec") and peek()[0] == "int":
                n = int(take("int")[1])
                return numerals(val, n)
            for depth, name in enumerate(reversed(env)):
                if name == val:
                    return BoundVar(depth)
            return FreeVar(val)
        what = "end of input" if kind == "eof" else repr(val)
        raise TermSyntaxError(f"unexpected {what}", pos)

    result = term([])
    if peek()[0] != "eof":
        raise TermSyntaxError(f"unexpected {peek()[1]!r}", peek()[2])
    return result
