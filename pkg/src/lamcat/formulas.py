"""Propositional formulas and sequents shared by the proof systems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Atom:
    """Atomic proposition."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Conj:
    """Intuitionistic conjunction: A /\\ B."""

    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"({self.left} /\\ {self.right})"


@dataclass(frozen=True)
class Impl:
    """Intuitionistic implication: A => B."""

    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"({self.left} => {self.right})"


@dataclass(frozen=True)
class LTensor:
    """Multiplicative conjunction: A (x) B."""

    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"({self.left} (x) {self.right})"


@dataclass(frozen=True)
class LImpl:
    """Linear implication: A -o B."""

    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"({self.left} -o {self.right})"


@dataclass(frozen=True)
class LWith:
    """Additive conjunction: A & B."""

    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class LBang:
    """Exponential: !A."""

    inner: "Formula"

    def __str__(self) -> str:
        return f"!{self.inner}"


Formula = Union[Atom, Conj, Impl, LTensor, LImpl, LWith, LBang]


@dataclass(frozen=True)
class Sequent:
    """Hypotheses and conclusion.  The hypothesis tuple order is display
    order; each proof system fixes its own comparison discipline (set for
    natural deduction, multiset for the sequent calculi)."""

    hyps: tuple[Formula, ...]
    concl: Formula

    def __str__(self) -> str:
        left = ", ".join(str(h) for h in self.hyps)
        return f"{left} |- {self.concl}" if left else f"|- {self.concl}"


def is_intuitionistic_formula(f: Formula) -> bool:
    match f:
        case Atom(_):
            return True
        case Conj(a, b) | Impl(a, b):
            return is_intuitionistic_formula(a) and is_intuitionistic_formula(b)
        case _:
            return False


def is_linear_formula(f: Formula) -> bool:
    match f:
        case Atom(_):
            return True
        case LTensor(a, b) | LImpl(a, b) | LWith(a, b):
            return is_linear_formula(a) and is_linear_formula(b)
        case LBang(a):
            return is_linear_formula(a)
        case _:
            return False


def has_bang(f: Formula) -> bool:
    match f:
        case Atom(_):
            return False
        case LBang(_):
            return True
        case Conj(a, b) | Impl(a, b) | LTensor(a, b) | LImpl(a, b) | LWith(a, b):
            return has_bang(a) or has_bang(b)
    raise TypeError(f"not a formula: {f!r}")
