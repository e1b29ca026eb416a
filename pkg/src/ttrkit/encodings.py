"""Numerals and the named combinators used throughout the toolkit."""

from __future__ import annotations

import enum
from functools import lru_cache

from .lambda_core import Abs, App, BoundVar, Term, parse_term


class NumeralKind(enum.Enum):
    CHURCH = "church"
    RECURSIVE = "rec"

    @classmethod
    def parse(cls, text: str) -> "NumeralKind":
        t = text.strip().lower()
        if t in ("church", "c"):
            return cls.CHURCH
        if t in ("rec", "recursive", "r"):
            return cls.RECURSIVE
        raise ValueError(f"unknown numeral kind {text!r} (expected 'church' or 'rec')")


class NotANumeral(ValueError):
    """The term is not (alpha-equivalent to) a numeral of the requested kind."""


_F, _X = BoundVar(1), BoundVar(0)


def numeral(kind: NumeralKind, n: int) -> Term:
    """The normal numeral for ``n``.

    Church: ``λf.λx.(f)ⁿx``.  Recursive: ``0 = λf.λx.x`` and
    ``n+1 = λf.λx.(f)n``.
    """
    if n < 0:
        raise ValueError("numerals are defined for n >= 0")
    if kind is NumeralKind.CHURCH:
        body: Term = _X
        for _ in range(n):
            body = App(_F, body)
        return Abs(Abs(body, "x"), "f")
    t: Term = Abs(Abs(_X, "x"), "f")
    for _ in range(n):
        t = Abs(Abs(App(_F, t), "x"), "f")
    return t


def _numeral_by_word(word: str, n: int) -> Term:
    return numeral(NumeralKind.CHURCH if word == "church" else NumeralKind.RECURSIVE, n)


def decode(kind: NumeralKind, t: Term) -> int:
    """Inverse of :func:`numeral` on normal terms, up to alpha; raises :class:`NotANumeral`."""
    n = 0
    if kind is NumeralKind.CHURCH:
        d = _two_binders(t)
        body = d
        while body != _X:
            if type(body) is not App or body.fn != _F:
                raise NotANumeral("not a Church numeral")
            body = body.arg
            n += 1
        return n
    while True:
        body = _two_binders(t)
        if body == _X:
            return n
        if type(body) is not App or body.fn != _F or body.arg.loose != 0:
            raise NotANumeral("not a recursive numeral")
        t = body.arg
        n += 1


def _two_binders(t: Term) -> Term:
    if type(t) is not Abs or type(t.body) is not Abs:
        raise NotANumeral("a numeral starts with two abstractions")
    return t.body.body


# Definitions of the named combinators.  ``@name`` splices an earlier entry,
# ``church N`` / ``rec N`` splice numerals.
_DEFINITIONS: dict[str, str] = {
    "s_church": r"\n. \f. \x. f (n f x)",
    "s_rec": r"\n. \f. \x. f n",
    "T1_church": r"\n. n (\x. \y. x (\z. y (@s_church z))) (\f. f (church 0))",
    "T2_church": r"\n. \f. n (\x. \y. x (@s_church y)) f (church 0)",
    "G": r"\x. \y. x (\z. y (@s_rec z))",
    "delta": r"\f. f (rec 0)",
    "H": r"\x. \y. y (\z. @G (x z)) @delta",
    "Y": r"(\x. \y. y (x x y)) (\x. \y. y (x x y))",
    "T1_rec": r"@Y @H",
    "tau": r"\d. \f. f (rec 0)",
    # Read so that the term is typable: ρ = λy.λz.(G)((((y)z)τ)z).
    "rho": r"\y. \z. @G (y z @tau z)",
    "T2_rec": r"\v. v @rho @tau @rho",
    "remark_term": r"\x. (\y. x (y (\x. x)) (y (\x. \y. x))) (\x. x x)",
}

BUILTIN_NAMES: tuple[str, ...] = tuple(_DEFINITIONS)


@lru_cache(maxsize=None)
def builtin(name: str) -> Term:
    """The closed term registered under ``name`` (see :data:`BUILTIN_NAMES`)."""
    if name not in _DEFINITIONS:
        raise KeyError(f"unknown builtin {name!r}; known: {', '.join(BUILTIN_NAMES)}")
    return parse_term(_DEFINITIONS[name], macros=_MacroView(), numerals=_numeral_by_word)


class _MacroView(dict):
    """Resolves ``@name`` lazily so that definitions can refer to each other."""

    def __contains__(self, key: object) -> bool:
        return key in _DEFINITIONS

    def __getitem__(self, key: str) -> Term:
        return builtin(key)


def parse_term_ext(text: str) -> Term:
    """Parse a term allowing ``@builtin`` names and ``church N`` / ``rec N`` numerals."""
    return parse_term(text, macros=_MacroView(), numerals=_numeral_by_word)


def abbreviations(
    max_numeral: int = 64, prefer: NumeralKind = NumeralKind.RECURSIVE
) -> dict[Term, str]:
    """Labels for the builtins and small numerals, for readable printing.

    Both kinds share the term for 0; ``prefer`` decides which label it gets.
    """
    out: dict[Term, str] = {}
    kinds = sorted(NumeralKind, key=lambda k: k is not prefer)
    for kind in kinds:
        for k in range(max_numeral + 1):
            out.setdefault(numeral(kind, k), f"({kind.value} {k})")
    for name in BUILTIN_NAMES:
        out.setdefault(builtin(name), f"@{name}")
    return out


def successor(kind: NumeralKind) -> Term:
    return builtin("s_church" if kind is NumeralKind.CHURCH else "s_rec")


def iterated_successor(kind: NumeralKind, n: int) -> Term:
    """``(s)(s)…(s)0`` with ``n`` applications, left unnormalized."""
    t = numeral(kind, 0)
    s = successor(kind)
    for _ in range(n):
        t = App(s, t)
    return t


def is_numeral_shape(kind: NumeralKind, t: Term) -> bool:
    try:
        decode(kind, t)
    except NotANumeral:
        return False
    return True


__all__ = [
    "BUILTIN_NAMES",
    "NotANumeral",
    "NumeralKind",
    "abbreviations",
    "builtin",
    "decode",
    "is_numeral_shape",
    "iterated_successor",
    "numeral",
    "parse_term_ext",
    "successor",
]
