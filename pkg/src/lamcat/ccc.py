"""Free cartesian-closed morphism expressions and finite-set evaluation.

Objects and morphisms are immutable trees, well typed by construction:
every morphism knows its domain and codomain and the composite
constructors validate endpoint compatibility at build time.  There is
deliberately no equational theory or rewriting on morphisms; equality
questions are settled by evaluating both sides to extensional function
tables over finite carriers (``eval_finset``), which is all the
soundness checks need.

Typing derivations for the simply typed calculus translate into this
language via ``translate_stlc``: a context becomes the left-nested
product of its entry types rooted at the unit object, and a variable
bound ``i`` entries from the right becomes the second projection after
``i`` first projections.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .finset import DEFAULT_CAP, FnTable, SizeOverflow
from .rewrite import decide_conversion
from .syntax import Arrow, Base, Product, Term, Type, Var
from .typesys import Context, Derivation, typecheck_stlc

# ------------------------------------------------------------------ objects


@dataclass(frozen=True)
class Unit:
    """Terminal object; its carrier is the one-element set."""

    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class BaseObj:
    """Named atomic object; its carrier size comes from the size map."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Prod:
    left: "CCCObj"
    right: "CCCObj"

    def __str__(self) -> str:
        return f"({self.left} * {self.right})"


@dataclass(frozen=True)
class Exp:
    """Exponential object: carriers are full function spaces."""

    arg: "CCCObj"
    res: "CCCObj"

    def __str__(self) -> str:
        return f"({self.arg} => {self.res})"


CCCObj = Union[Unit, BaseObj, Prod, Exp]


def type_object(t: Type) -> CCCObj:
    """Interpret an intuitionistic syntax type as an object.

    Bases map to named atoms, products to products, arrows to
    exponentials.  Linear connectives and inference variables have no
    cartesian-closed reading and are rejected.
    """
    match t:
        case Base(name):
            return BaseObj(name)
        case Arrow(dom, cod):
            return Exp(type_object(dom), type_object(cod))
        case Product(left, right):
            return Prod(type_object(left), type_object(right))
        case _:
            raise ValueError(f"type has no cartesian-closed interpretation: {t}")


def context_object(ctx: Context) -> CCCObj:
    """Left-nested product of the context entry types, rooted at the unit."""
    obj: CCCObj = Unit()
    for _, entry in ctx:
        obj = Prod(obj, type_object(entry))
    return obj


# ---------------------------------------------------------------- morphisms


@dataclass(frozen=True)
class Id:
    obj: CCCObj

    @property
    def dom(self) -> CCCObj:
        return self.obj

    @property
    def cod(self) -> CCCObj:
        return self.obj


@dataclass(frozen=True)
class Compose:
    """g after f; the shared middle object must match exactly."""

    g: "CCCMor"
    f: "CCCMor"

    def __post_init__(self) -> None:
        if self.f.cod != self.g.dom:
            raise ValueError(
                f"cannot compose: inner codomain {self.f.cod} is not {self.g.dom}"
            )

    @property
    def dom(self) -> CCCObj:
        return self.f.dom

    @property
    def cod(self) -> CCCObj:
        return self.g.cod


@dataclass(frozen=True)
class Proj1:
    left: CCCObj
    right: CCCObj

    @property
    def dom(self) -> CCCObj:
        return Prod(self.left, self.right)

    @property
    def cod(self) -> CCCObj:
        return self.left


@dataclass(frozen=True)
class Proj2:
    left: CCCObj
    right: CCCObj

    @property
    def dom(self) -> CCCObj:
        return Prod(self.left, self.right)

    @property
    def cod(self) -> CCCObj:
        return self.right


@dataclass(frozen=True)
class Pairing:
    """Tupling into a product; both components share a domain."""

    f: "CCCMor"
    g: "CCCMor"

    def __post_init__(self) -> None:
        if self.f.dom != self.g.dom:
            raise ValueError(
                f"pairing needs a shared domain: {self.f.dom} is not {self.g.dom}"
            )

    @property
    def dom(self) -> CCCObj:
        return self.f.dom

    @property
    def cod(self) -> CCCObj:
        return Prod(self.f.cod, self.g.cod)


@dataclass(frozen=True)
class Curry:
    """Transpose of f : C * A -> B into C -> (A => B)."""

    f: "CCCMor"

    def __post_init__(self) -> None:
        if not isinstance(self.f.dom, Prod):
            raise ValueError(f"currying needs a product domain, got {self.f.dom}")

    @property
    def dom(self) -> CCCObj:
        return self.f.dom.left

    @property
    def cod(self) -> CCCObj:
        return Exp(self.f.dom.right, self.f.cod)


@dataclass(frozen=True)
class Ev:
    """Application morphism (A => B) * A -> B."""

    arg: CCCObj
    res: CCCObj

    @property
    def dom(self) -> CCCObj:
        return Prod(Exp(self.arg, self.res), self.arg)

    @property
    def cod(self) -> CCCObj:
        return self.res


@dataclass(frozen=True)
class Terminal:
    """The unique morphism from an object into the unit."""

    obj: CCCObj

    @property
    def dom(self) -> CCCObj:
        return self.obj

    @property
    def cod(self) -> CCCObj:
        return Unit()


CCCMor = Union[Id, Compose, Proj1, Proj2, Pairing, Curry, Ev, Terminal]


def cross(f: CCCMor, g: CCCMor) -> CCCMor:
    """Componentwise action on a product: <f o pi1, g o pi2>."""
    return Pairing(
        Compose(f, Proj1(f.dom, g.dom)),
        Compose(g, Proj2(f.dom, g.dom)),
    )


# -------------------------------------------------------------- translation


def translate_stlc(d: Derivation) -> CCCMor:
    """Interpret a simply typed derivation as a morphism.

    The result maps the context product to the object of the subject's
    type.  Variables project out of the nested context product, lambdas
    curry the translated body (whose context gained the binder on the
    right), applications evaluate a paired function and argument, and
    pairs and projections use the product structure directly.
    """
    if d.system != "stlc":
        raise ValueError("only simply typed derivations translate to morphisms")
    ctx = d.conclusion.ctx
    match d.rule:
        case "var":
            subject = d.conclusion.subject
            assert isinstance(subject, Var)
            pos = max(i for i, (x, _) in enumerate(ctx) if x == subject.name)
            return _project(context_object(ctx), len(ctx) - 1 - pos)
        case "abs":
            return Curry(translate_stlc(d.premises[0]))
        case "app":
            fun = translate_stlc(d.premises[0])
            arg = translate_stlc(d.premises[1])
            assert isinstance(fun.cod, Exp)
            return Compose(Ev(fun.cod.arg, fun.cod.res), Pairing(fun, arg))
        case "pair":
            return Pairing(
                translate_stlc(d.premises[0]), translate_stlc(d.premises[1])
            )
        case "proj1":
            body = translate_stlc(d.premises[0])
            assert isinstance(body.cod, Prod)
            return Compose(Proj1(body.cod.left, body.cod.right), body)
        case "proj2":
            body = translate_stlc(d.premises[0])
            assert isinstance(body.cod, Prod)
            return Compose(Proj2(body.cod.left, body.cod.right), body)
        case _:
            raise ValueError(f"unknown derivation rule: {d.rule!r}")


def _project(obj: CCCObj, steps: int) -> CCCMor:
    """Second projection after `steps` first projections from a nested product."""
    chain: CCCMor | None = None
    for _ in range(steps):
        assert isinstance(obj, Prod)
        step = Proj1(obj.left, obj.right)
        chain = step if chain is None else Compose(step, chain)
        obj = obj.left
    assert isinstance(obj, Prod)
    last = Proj2(obj.left, obj.right)
    return last if chain is None else Compose(last, chain)


# --------------------------------------------------------------- evaluation


def obj_size(obj: CCCObj, sizes: Mapping[str, int]) -> int:
    """Exact carrier size under the given base-size assignment."""
    match obj:
        case Unit():
            return 1
        case BaseObj(name):
            if name not in sizes:
                raise ValueError(f"no size assigned to base {name!r}")
            n = sizes[name]
            if n < 1:
                raise ValueError(f"base sizes must be positive, got {name}={n}")
            return n
        case Prod(left, right):
            return obj_size(left, sizes) * obj_size(right, sizes)
        case Exp(arg, res):
            return obj_size(res, sizes) ** obj_size(arg, sizes)
    raise ValueError(f"not an object: {obj!r}")


def _size_hits_cap(obj: CCCObj, sizes: Mapping[str, int], cap: int) -> int:
    """Carrier size, exact when it is at most cap, else any value above cap.

    Avoids evaluating astronomically large exponents just to compare
    them with the cap.
    """
    match obj:
        case Unit():
            return 1
        case BaseObj():
            return obj_size(obj, sizes)
        case Prod(left, right):
            return _size_hits_cap(left, sizes, cap) * _size_hits_cap(right, sizes, cap)
        case Exp(arg, res):
            base = _size_hits_cap(res, sizes, cap)
            exponent = _size_hits_cap(arg, sizes, cap)
            if base <= 1:
                return base**exponent
            if exponent > cap.bit_length() and base.bit_length() * exponent > 2_000_000:
                # The power itself would be enormous; any value above cap will do.
                return cap + 1
            return base**exponent
    raise ValueError(f"not an object: {obj!r}")


class _Evaluator:
    """Caches carriers per object and applies morphisms pointwise.

    Elements are nested structures: the unit element is the empty
    tuple, base elements are integers, product elements are pairs, and
    function elements are tuples of results indexed by the enumeration
    order of the argument carrier.  Enumeration is lexicographic
    throughout, so carriers double as a canonical sort order.
    """

    def __init__(self, sizes: Mapping[str, int], cap: int) -> None:
        self.sizes = dict(sizes)
        self.cap = cap
        self._carriers: dict[CCCObj, tuple] = {}
        self._ranks: dict[CCCObj, dict] = {}

    def carrier(self, obj: CCCObj) -> tuple:
        got = self._carriers.get(obj)
        if got is None:
            size = _size_hits_cap(obj, self.sizes, self.cap)
            if size > self.cap:
                raise SizeOverflow(size, self.cap)
            got = self._enumerate(obj)
            self._carriers[obj] = got
        return got

    def _enumerate(self, obj: CCCObj) -> tuple:
        match obj:
            case Unit():
                return ((),)
            case BaseObj(name):
                return tuple(range(self.sizes[name]))
            case Prod(left, right):
                return tuple(itertools.product(self.carrier(left), self.carrier(right)))
            case Exp(arg, res):
                width = len(self.carrier(arg))
                return tuple(itertools.product(self.carrier(res), repeat=width))
        raise ValueError(f"not an object: {obj!r}")

    def rank(self, obj: CCCObj) -> dict:
        got = self._ranks.get(obj)
        if got is None:
            got = {x: i for i, x in enumerate(self.carrier(obj))}
            self._ranks[obj] = got
        return got

    def apply(self, m: CCCMor, x):
        match m:
            case Id():
                return x
            case Terminal():
                return ()
            case Compose(Ev(), Pairing(Curry(body), arg)):
                # Same value as enumerating the curried function and
                # indexing it, but linear in the body: keeps nested
                # translated redexes from costing |carrier| per layer.
                return self.apply(body, (x, self.apply(arg, x)))
            case Compose(g, f):
                return self.apply(g, self.apply(f, x))
            case Proj1():
                return x[0]
            case Proj2():
                return x[1]
            case Pairing(f, g):
                return (self.apply(f, x), self.apply(g, x))
            case Ev(arg, _):
                return x[0][self.rank(arg)[x[1]]]
            case Curry(f):
                assert isinstance(f.dom, Prod)
                return tuple(self.apply(f, (x, a)) for a in self.carrier(f.dom.right))
        raise ValueError(f"not a morphism: {m!r}")


def eval_finset(
    m: CCCMor, sizes: Mapping[str, int], cap: int = DEFAULT_CAP
) -> FnTable:
    """Evaluate a morphism to an extensional function table.

    Bases take the carrier range(sizes[name]); products and
    exponentials are cartesian products and full function spaces.
    Morphisms are applied pointwise, so only the domain and codomain
    of the requested table plus any argument carriers touched by
    application or currying are materialized; each materialized
    carrier is checked against the cap and overflows raise
    SizeOverflow.
    """
    ev = _Evaluator(sizes, cap)
    dom = ev.carrier(m.dom)
    cod = ev.carrier(m.cod)
    return FnTable(dom, cod, tuple(ev.apply(m, x) for x in dom))


# ---------------------------------------------------------------- soundness


@dataclass(frozen=True)
class SoundnessVerdict:
    """Outcome of a convertibility-versus-denotation comparison.

    ok is False only when the terms are convertible yet received
    different tables, which would witness a translation bug.  The
    witness is then (input, first output, second output).
    """

    ok: bool
    convertible: bool
    witness: tuple = ()
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_soundness(
    ctx: Context,
    t: Term,
    u: Term,
    type: Type,
    sizes: Mapping[str, int],
    cap: int = DEFAULT_CAP,
) -> SoundnessVerdict:
    """Convertible terms must denote identical tables at the given sizes."""
    if not decide_conversion(ctx, t, u, type):
        return SoundnessVerdict(
            True, False, detail="terms are not convertible; nothing to compare"
        )
    table_t = eval_finset(translate_stlc(typecheck_stlc(ctx, t, type)), sizes, cap)
    table_u = eval_finset(translate_stlc(typecheck_stlc(ctx, u, type)), sizes, cap)
    for x, a, b in zip(table_t.dom, table_t.values, table_u.values):
        if a != b:
            return SoundnessVerdict(
                False,
                True,
                witness=(x, a, b),
                detail="convertible terms received different tables",
            )
    return SoundnessVerdict(True, True)


# ----------------------------------------------------------------- printing


def format_obj(obj: CCCObj, unicode: bool = False) -> str:
    times = " × " if unicode else " * "
    arrow = " ⇒ " if unicode else " => "
    match obj:
        case Unit():
            return "1"
        case BaseObj(name):
            return name
        case Prod(left, right):
            return f"({format_obj(left, unicode)}{times}{format_obj(right, unicode)})"
        case Exp(arg, res):
            return f"({format_obj(arg, unicode)}{arrow}{format_obj(res, unicode)})"
    raise ValueError(f"not an object: {obj!r}")


def format_mor(m: CCCMor, unicode: bool = False) -> str:
    """Render a morphism tree; composition is written g o f (g after f)."""
    comp = " ∘ " if unicode else " o "
    lam = "Λ" if unicode else "Lam"
    pi1, pi2 = ("π1", "π2") if unicode else ("pi1", "pi2")
    lbra, rbra = ("⟨", "⟩") if unicode else ("<", ">")

    def wrap(n: CCCMor) -> str:
        text = go(n)
        return f"({text})" if isinstance(n, Compose) else text

    def go(n: CCCMor) -> str:
        match n:
            case Id():
                return "id"
            case Terminal():
                return "!"
            case Proj1():
                return pi1
            case Proj2():
                return pi2
            case Ev():
                return "ev"
            case Compose(g, f):
                return f"{wrap(g)}{comp}{wrap(f)}"
            case Pairing(f, g):
                return f"{lbra}{go(f)}, {go(g)}{rbra}"
            case Curry(f):
                return f"{lam}({go(f)})"
        raise ValueError(f"not a morphism: {n!r}")

    return go(m)


def _format_element(x) -> str:
    if isinstance(x, tuple):
        return "(" + ", ".join(_format_element(y) for y in x) + ")"
    return str(x)


def format_table(table: FnTable, unicode: bool = False) -> str:
    """One `input -> output` line per domain element, in carrier order."""
    arrow = "↦" if unicode else "->"
    return "\n".join(
        f"{_format_element(x)} {arrow} {_format_element(y)}"
        for x, y in zip(table.dom, table.values)
    )


def table_rows(table: FnTable) -> Iterator[tuple]:
    """(input, output) pairs in carrier order."""
    return zip(table.dom, table.values)
