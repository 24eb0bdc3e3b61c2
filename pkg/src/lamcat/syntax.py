"""Terms and types for the simply typed and linear lambda calculi.

Terms are named; binders are compared up to alpha-equivalence via fresh
variable swaps, and substitution is capture-avoiding with deterministic
fresh names (the smallest ``x0, x1, ...`` not occurring in the terms at
hand).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class Base:
    """Atomic type, written ``b``."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Arrow:
    """Function type: T -> U."""

    dom: "Type"
    cod: "Type"

    def __str__(self) -> str:
        return f"({self.dom} -> {self.cod})"


@dataclass(frozen=True)
class Product:
    """Cartesian product type: T * U."""

    left: "Type"
    right: "Type"

    def __str__(self) -> str:
        return f"({self.left} * {self.right})"


@dataclass(frozen=True)
class Tensor:
    """Multiplicative pair type: T (x) U."""

    left: "Type"
    right: "Type"

    def __str__(self) -> str:
        return f"({self.left} (x) {self.right})"


@dataclass(frozen=True)
class Lollipop:
    """Linear function type: T -o U."""

    dom: "Type"
    cod: "Type"

    def __str__(self) -> str:
        return f"({self.dom} -o {self.cod})"


@dataclass(frozen=True)
class With:
    """Additive pair type: T & U."""

    left: "Type"
    right: "Type"

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Bang:
    """Exponential type: !T.  Has no term-level syntax."""

    inner: "Type"

    def __str__(self) -> str:
        return f"!{self.inner}"


@dataclass(frozen=True)
class TVar:
    """Type variable used by principal-type inference; disjoint from bases."""

    name: str

    def __str__(self) -> str:
        return f"'{self.name}"


Type = Union[Base, Arrow, Product, Tensor, Lollipop, With, Bang, TVar]


def is_intuitionistic_type(t: Type) -> bool:
    """True when t uses only bases, arrows and products."""
    match t:
        case Base(_):
            return True
        case Arrow(a, b) | Product(a, b):
            return is_intuitionistic_type(a) and is_intuitionistic_type(b)
        case _:
            return False


def is_linear_type(t: Type, *, allow_bang: bool = True) -> bool:
    """True when t uses only bases, lollipops, tensors, withs (and ! if allowed)."""
    match t:
        case Base(_):
            return True
        case Lollipop(a, b) | Tensor(a, b) | With(a, b):
            return is_linear_type(a, allow_bang=allow_bang) and is_linear_type(
                b, allow_bang=allow_bang
            )
        case Bang(a):
            return allow_bang and is_linear_type(a, allow_bang=allow_bang)
        case _:
            return False


def type_vars(t: Type) -> frozenset[str]:
    match t:
        case TVar(n):
            return frozenset({n})
        case Base(_):
            return frozenset()
        case Bang(a):
            return type_vars(a)
        case Arrow(a, b) | Product(a, b) | Tensor(a, b) | Lollipop(a, b) | With(a, b):
            return type_vars(a) | type_vars(b)
    raise TypeError(f"not a type: {t!r}")


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    """Variable occurrence."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    """Application: t u."""

    fun: "Term"
    arg: "Term"

    def __str__(self) -> str:
        return f"({self.fun} {self.arg})"


@dataclass(frozen=True)
class Lam:
    """Abstraction: \\x. t."""

    binder: str
    body: "Term"

    def __str__(self) -> str:
        return f"(\\{self.binder}. {self.body})"


@dataclass(frozen=True)
class Pair:
    """Cartesian pair: <t, u>."""

    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        return f"<{self.left}, {self.right}>"


@dataclass(frozen=True)
class Proj:
    """Projection: fst t / snd t.  index is 1 or 2."""

    index: int
    of: "Term"

    def __str__(self) -> str:
        word = "fst" if self.index == 1 else "snd"
        return f"({word} {self.of})"


@dataclass(frozen=True)
class TensorIntro:
    """Multiplicative pair: t * u."""

    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        return f"({self.left} * {self.right})"


@dataclass(frozen=True)
class LetTensor:
    """Tensor elimination: let x * y = t in u.  Binds x and y in u."""

    left_binder: str
    right_binder: str
    scrutinee: "Term"
    body: "Term"

    def __post_init__(self) -> None:
        if self.left_binder == self.right_binder:
            raise ValueError(f"pattern binds {self.left_binder!r} twice in one let")

    def __str__(self) -> str:
        return (
            f"(let {self.left_binder} * {self.right_binder} = "
            f"{self.scrutinee} in {self.body})"
        )


@dataclass(frozen=True)
class WithPair:
    """Additive pair: <t, u> at a & type."""

    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        return f"<{self.left}, {self.right}>"


@dataclass(frozen=True)
class LetWith:
    """Additive elimination: let <x,_> = t in u (kept=1) or let <_,y> = t in u."""

    kept: int
    binder: str
    scrutinee: "Term"
    body: "Term"

    def __str__(self) -> str:
        pat = f"<{self.binder}, _>" if self.kept == 1 else f"<_, {self.binder}>"
        return f"(let {pat} = {self.scrutinee} in {self.body})"


Term = Union[Var, App, Lam, Pair, Proj, TensorIntro, LetTensor, WithPair, LetWith]


def is_intuitionistic_term(t: Term) -> bool:
    """True when t uses only variables, applications, lambdas, pairs, projections."""
    match t:
        case Var(_):
            return True
        case App(f, a):
            return is_intuitionistic_term(f) and is_intuitionistic_term(a)
        case Lam(_, b):
            return is_intuitionistic_term(b)
        case Pair(l, r):
            return is_intuitionistic_term(l) and is_intuitionistic_term(r)
        case Proj(_, u):
            return is_intuitionistic_term(u)
        case _:
            return False


def is_linear_term(t: Term) -> bool:
    """True when t avoids cartesian pairs and projections.

    The surface form ``<t, u>`` parses as Pair; the linear checker reads it
    additively, so Pair/WithPair both count as linear here.
    """
    match t:
        case Var(_):
            return True
        case App(f, a) | TensorIntro(f, a):
            return is_linear_term(f) and is_linear_term(a)
        case Lam(_, b):
            return is_linear_term(b)
        case Pair(l, r) | WithPair(l, r):
            return is_linear_term(l) and is_linear_term(r)
        case LetTensor(_, _, s, b) | LetWith(_, _, s, b):
            return is_linear_term(s) and is_linear_term(b)
        case _:
            return False


# ------------------------------------------------------- variable bookkeeping


def free_vars(t: Term) -> frozenset[str]:
    """The set of variables occurring free in t."""
    match t:
        case Var(x):
            return frozenset({x})
        case App(f, a):
            return free_vars(f) | free_vars(a)
        case Lam(x, b):
            return free_vars(b) - {x}
        case Pair(l, r) | TensorIntro(l, r) | WithPair(l, r):
            return free_vars(l) | free_vars(r)
        case Proj(_, u):
            return free_vars(u)
        case LetTensor(x, y, s, b):
            return free_vars(s) | (free_vars(b) - {x, y})
        case LetWith(_, x, s, b):
            return free_vars(s) | (free_vars(b) - {x})
    raise TypeError(f"not a term: {t!r}")


def all_vars(t: Term) -> frozenset[str]:
    """Every variable name appearing in t, free, bound or binding."""
    match t:
        case Var(x):
            return frozenset({x})
        case App(f, a):
            return all_vars(f) | all_vars(a)
        case Lam(x, b):
            return all_vars(b) | {x}
        case Pair(l, r) | TensorIntro(l, r) | WithPair(l, r):
            return all_vars(l) | all_vars(r)
        case Proj(_, u):
            return all_vars(u)
        case LetTensor(x, y, s, b):
            return all_vars(s) | all_vars(b) | {x, y}
        case LetWith(_, x, s, b):
            return all_vars(s) | all_vars(b) | {x}
    raise TypeError(f"not a term: {t!r}")


def fresh_name(avoid: Iterable[str]) -> str:
    """Smallest name of the form x0, x1, ... not in avoid."""
    taken = set(avoid)
    i = 0
    while f"x{i}" in taken:
        i += 1
    return f"x{i}"


def swap_vars(t: Term, y: str, x: str) -> Term:
    """Swap the names y and x everywhere in t, binders included."""

    def sw(n: str) -> str:
        if n == x:
            return y
        if n == y:
            return x
        return n

    match t:
        case Var(n):
            return Var(sw(n))
        case App(f, a):
            return App(swap_vars(f, y, x), swap_vars(a, y, x))
        case Lam(n, b):
            return Lam(sw(n), swap_vars(b, y, x))
        case Pair(l, r):
            return Pair(swap_vars(l, y, x), swap_vars(r, y, x))
        case Proj(i, u):
            return Proj(i, swap_vars(u, y, x))
        case TensorIntro(l, r):
            return TensorIntro(swap_vars(l, y, x), swap_vars(r, y, x))
        case LetTensor(a, b, s, u):
            return LetTensor(sw(a), sw(b), swap_vars(s, y, x), swap_vars(u, y, x))
        case WithPair(l, r):
            return WithPair(swap_vars(l, y, x), swap_vars(r, y, x))
        case LetWith(k, n, s, u):
            return LetWith(k, sw(n), swap_vars(s, y, x), swap_vars(u, y, x))
    raise TypeError(f"not a term: {t!r}")


# ------------------------------------------------------------ alpha-equality


def alpha_equal(t: Term, u: Term) -> bool:
    """Alpha-equivalence, deciding binder clauses by a fresh-variable swap."""
    match t, u:
        case Var(a), Var(b):
            return a == b
        case App(f1, a1), App(f2, a2):
            return alpha_equal(f1, f2) and alpha_equal(a1, a2)
        case Lam(x1, b1), Lam(x2, b2):
            if x1 == x2:
                return alpha_equal(b1, b2)
            z = fresh_name(all_vars(b1) | all_vars(b2) | {x1, x2})
            return alpha_equal(swap_vars(b1, z, x1), swap_vars(b2, z, x2))
        case Pair(l1, r1), Pair(l2, r2):
            return alpha_equal(l1, l2) and alpha_equal(r1, r2)
        case Proj(i1, u1), Proj(i2, u2):
            return i1 == i2 and alpha_equal(u1, u2)
        case TensorIntro(l1, r1), TensorIntro(l2, r2):
            return alpha_equal(l1, l2) and alpha_equal(r1, r2)
        case LetTensor(x1, y1, s1, b1), LetTensor(x2, y2, s2, b2):
            if not alpha_equal(s1, s2):
                return False
            avoid = all_vars(b1) | all_vars(b2) | {x1, y1, x2, y2}
            z1 = fresh_name(avoid)
            z2 = fresh_name(avoid | {z1})
            c1 = swap_vars(swap_vars(b1, z1, x1), z2, y1)
            c2 = swap_vars(swap_vars(b2, z1, x2), z2, y2)
            return alpha_equal(c1, c2)
        case WithPair(l1, r1), WithPair(l2, r2):
            return alpha_equal(l1, l2) and alpha_equal(r1, r2)
        case LetWith(k1, x1, s1, b1), LetWith(k2, x2, s2, b2):
            if k1 != k2 or not alpha_equal(s1, s2):
                return False
            if x1 == x2:
                return alpha_equal(b1, b2)
            z = fresh_name(all_vars(b1) | all_vars(b2) | {x1, x2})
            return alpha_equal(swap_vars(b1, z, x1), swap_vars(b2, z, x2))
        case _:
            return False


# -------------------------------------------------------------- substitution


def substitute(u: Term, t: Term, x: str) -> Term:
    """Capture-avoiding substitution u[t/x]."""
    return simultaneous_substitute(u, [(x, t)])


def simultaneous_substitute(u: Term, bindings: Sequence[tuple[str, Term]]) -> Term:
    """Parallel substitution u[t1/x1, ..., tk/xk].

    The xi must be pairwise distinct.  Agrees with iterated substitution
    whenever the ti are closed.
    """
    names = [x for x, _ in bindings]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate name in simultaneous substitution: {names}")
    return _subst(u, {x: t for x, t in bindings})


def _subst(u: Term, m: dict[str, Term]) -> Term:
    m = {x: t for x, t in m.items() if x in free_vars(u)}
    if not m:
        return u
    match u:
        case Var(x):
            return m.get(x, u)
        case App(f, a):
            return App(_subst(f, m), _subst(a, m))
        case Lam(x, b):
            mb = {k: t for k, t in m.items() if k != x}
            (x2,), b2 = _avoid_capture([x], b, mb)
            return Lam(x2, _subst(b2, mb))
        case Pair(l, r):
            return Pair(_subst(l, m), _subst(r, m))
        case Proj(i, v):
            return Proj(i, _subst(v, m))
        case TensorIntro(l, r):
            return TensorIntro(_subst(l, m), _subst(r, m))
        case LetTensor(x, y, s, b):
            s2 = _subst(s, m)
            mb = {k: t for k, t in m.items() if k not in (x, y)}
            (x2, y2), b2 = _avoid_capture([x, y], b, mb)
            return LetTensor(x2, y2, s2, _subst(b2, mb))
        case WithPair(l, r):
            return WithPair(_subst(l, m), _subst(r, m))
        case LetWith(k, x, s, b):
            s2 = _subst(s, m)
            mb = {n: t for n, t in m.items() if n != x}
            (x2,), b2 = _avoid_capture([x], b, mb)
            return LetWith(k, x2, s2, _subst(b2, mb))
    raise TypeError(f"not a term: {u!r}")


def _avoid_capture(
    binders: list[str], body: Term, m: dict[str, Term]
) -> tuple[list[str], Term]:
    """Rename binders that would capture a free variable of the images in m.

    m must already exclude the binders themselves.
    """
    images_fv: set[str] = set()
    body_fv = free_vars(body)
    for x, t in m.items():
        if x in body_fv:
            images_fv |= free_vars(t)
    if not images_fv & set(binders):
        return binders, body
    avoid = (
        all_vars(body)
        | images_fv
        | set(binders)
        | set(m.keys())
        | {v for t in m.values() for v in all_vars(t)}
    )
    out: list[str] = []
    for x in binders:
        if x in images_fv:
            z = fresh_name(avoid)
            avoid = avoid | {z}
            body = swap_vars(body, z, x)
            out.append(z)
        else:
            out.append(x)
    return out, body


def freshen_shadowing(t: Term, taken: frozenset[str]) -> Term:
    """Rename binders that collide with names in taken or with outer binders.

    The result is alpha-equivalent to t and has no binder shadowing any name
    in scope, which lets checkers use flat name environments.
    """

    def rebind(x: str, body: Term, avoid: frozenset[str]) -> tuple[str, Term]:
        if x in avoid:
            z = fresh_name(avoid | all_vars(body))
            return z, swap_vars(body, z, x)
        return x, body

    def go(t: Term, taken: frozenset[str]) -> Term:
        match t:
            case Var(_):
                return t
            case App(f, a):
                return App(go(f, taken), go(a, taken))
            case Lam(x, b):
                x, b = rebind(x, b, taken)
                return Lam(x, go(b, taken | {x}))
            case Pair(l, r):
                return Pair(go(l, taken), go(r, taken))
            case Proj(i, u):
                return Proj(i, go(u, taken))
            case TensorIntro(l, r):
                return TensorIntro(go(l, taken), go(r, taken))
            case LetTensor(x, y, s, b):
                s2 = go(s, taken)
                x, b = rebind(x, b, taken)
                y, b = rebind(y, b, taken | {x})
                return LetTensor(x, y, s2, go(b, taken | {x, y}))
            case WithPair(l, r):
                return WithPair(go(l, taken), go(r, taken))
            case LetWith(k, x, s, b):
                s2 = go(s, taken)
                x, b = rebind(x, b, taken)
                return LetWith(k, x, s2, go(b, taken | {x}))
        raise TypeError(f"not a term: {t!r}")

    return go(t, taken)
