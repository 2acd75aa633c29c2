"""Arc-label symbols: classes, tags, their marked variants, pair atoms and epsilon.

Marked symbols are first-class alphabet members, not string-prefixed
encodings; the textual "0.X" form exists only in serializations.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union


class _Epsilon:
    """The empty-string label. Use the module-level EPSILON singleton."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "_eps_"


EPSILON = _Epsilon()


@dataclass(frozen=True, slots=True)
class ClassSym:
    cls: int

    def __repr__(self):
        return f"c{self.cls}"


@dataclass(frozen=True, slots=True)
class MarkedClassSym:
    cls: int

    def __repr__(self):
        return f"mc{self.cls}"


@dataclass(frozen=True, slots=True)
class TagSym:
    tag: int

    def __repr__(self):
        return f"t{self.tag}"


@dataclass(frozen=True, slots=True)
class MarkedTagSym:
    tag: int

    def __repr__(self):
        return f"mt{self.tag}"


@dataclass(frozen=True, slots=True)
class PairAtom:
    """One-level form of an arc label pair: the pair itself as a single symbol."""

    upper: "Symbol"
    lower: "Symbol"

    def __post_init__(self):
        from .errors import MalformedAlphabet

        if isinstance(self.upper, PairAtom) or isinstance(self.lower, PairAtom):
            raise MalformedAlphabet("pair atoms do not nest")
        if self.upper is EPSILON and self.lower is EPSILON:
            raise MalformedAlphabet("pair atom cannot be epsilon on both sides")

    def __repr__(self):
        return f"<{self.upper!r},{self.lower!r}>"


Symbol = Union[ClassSym, MarkedClassSym, TagSym, MarkedTagSym, PairAtom, _Epsilon]


def marked(sym: Symbol) -> Symbol:
    """Marked twin of a class or tag symbol."""
    if isinstance(sym, ClassSym):
        return MarkedClassSym(sym.cls)
    if isinstance(sym, TagSym):
        return MarkedTagSym(sym.tag)
    raise TypeError(f"cannot mark {sym!r}")


def unmarked(sym: Symbol) -> Symbol:
    """Unmarked twin of a marked class or tag symbol."""
    if isinstance(sym, MarkedClassSym):
        return ClassSym(sym.cls)
    if isinstance(sym, MarkedTagSym):
        return TagSym(sym.tag)
    raise TypeError(f"cannot unmark {sym!r}")


def is_marked(sym: Symbol) -> bool:
    return isinstance(sym, (MarkedClassSym, MarkedTagSym))
