"""Monad and comonad law checking on finite data.

Two representations coexist.  Table mode pins a (co)monad to an
explicit finite category: the endofunctor, unit, and multiplication
are dictionaries and every law is a finite equation between composition
table entries.  Set mode describes an instance on small finite sets
elementwise: carriers are enumerated tuples and the operations are
value-level callables, so laws are checked pointwise over bounded
enumerations instead of materializing whole functor images.

The built-in instances are exceptions (disjoint union with a fixed
error set), state over a fixed state set, bounded lists, the product
comonad, and the bounded free-monoid adjunction.  Kleisli categories
are constructed explicitly in both modes, and an adjunction roundtrip
rebuilds the monad from its Kleisli adjunction and compares
componentwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, Union

from .fincat import (
    AdjunctionData,
    Arrow,
    FinCategory,
    FunctorData,
    NatTransData,
    Verdict,
    Witness,
    check_adjunction,
    compose_functors,
    find_universal,
    identity_functor,
    monoid_category,
    subset_name,
    validate_functor,
    validate_natural,
)
from .finset import DEFAULT_CAP, FnTable, all_functions

# ------------------------------------------------------------- table mode


@dataclass(frozen=True)
class TableMonad:
    """A monad on an explicit finite category.

    eta maps each object to the component arrow A -> TA and mu to the
    component TTA -> TA.
    """

    base: FinCategory
    t: FunctorData
    eta: NatTransData
    mu: NatTransData


@dataclass(frozen=True)
class TableComonad:
    base: FinCategory
    q: FunctorData
    eps: NatTransData
    delta: NatTransData


def identity_monad(c: FinCategory) -> TableMonad:
    ident = identity_functor(c)
    components = dict(c.identity)
    return TableMonad(
        c,
        ident,
        NatTransData(ident, ident, components),
        NatTransData(ident, ident, dict(components)),
    )


def identity_comonad(c: FinCategory) -> TableComonad:
    ident = identity_functor(c)
    components = dict(c.identity)
    return TableComonad(
        c,
        ident,
        NatTransData(ident, ident, components),
        NatTransData(ident, ident, dict(components)),
    )


def closure_monad(c: FinCategory, closure: Mapping[str, str]) -> TableMonad:
    """Monad from a closure operator on a poset-like category.

    closure maps each object to one at least as large; the operator
    must be monotone and idempotent for the result to satisfy the
    monad laws.  Arrow images and components are the unique arrows
    between the relevant objects.
    """

    def unique(a: str, b: str) -> str:
        hom = c.hom(a, b)
        if len(hom) != 1:
            raise ValueError(f"no unique arrow {a} -> {b}; not thin enough")
        return hom[0]

    t_arrows = {
        f.name: unique(closure[f.dom], closure[f.cod]) for f in c.arrows
    }
    t = FunctorData(c, c, dict(closure), t_arrows)
    eta = {a: unique(a, closure[a]) for a in c.objects}
    mu = {a: unique(closure[closure[a]], closure[a]) for a in c.objects}
    return TableMonad(
        c,
        t,
        NatTransData(identity_functor(c), t, eta),
        NatTransData(compose_functors(t, t), t, mu),
    )


def _check_table_monad(m: TableMonad) -> Verdict:
    v = validate_functor(m.t)
    if not v:
        return v
    square = compose_functors(m.t, m.t)
    for label, nat, src in (
        ("unit", m.eta, identity_functor(m.base)),
        ("multiplication", m.mu, square),
    ):
        if nat.f != src or nat.g != m.t:
            return Verdict(
                False, "naturality-shape", (label,),
                f"{label} transformation has the wrong endpoints",
            )
        v = validate_natural(nat)
        if not v:
            return Verdict(False, v.law, (label,) + v.witness, v.detail)
    c = m.base
    t_obj, t_arr = m.t.object_map, m.t.arrow_map
    eta, mu = m.eta.components, m.mu.components
    for a in c.objects:
        ta = t_obj[a]
        left = c.comp(mu[a], eta[ta])
        right = c.comp(mu[a], t_arr[eta[a]])
        if left != c.identity[ta]:
            return Verdict(False, "unit-left", (a,), f"mu o eta_T is {left} at {a}")
        if right != c.identity[ta]:
            return Verdict(False, "unit-right", (a,), f"mu o T eta is {right} at {a}")
        if c.comp(mu[a], mu[ta]) != c.comp(mu[a], t_arr[mu[a]]):
            return Verdict(False, "associativity", (a,), f"multiplication squares differ at {a}")
    return Verdict(True)


def _check_table_comonad(m: TableComonad) -> Verdict:
    v = validate_functor(m.q)
    if not v:
        return v
    square = compose_functors(m.q, m.q)
    for label, nat, tgt in (
        ("counit", m.eps, identity_functor(m.base)),
        ("comultiplication", m.delta, square),
    ):
        if nat.f != m.q or nat.g != tgt:
            return Verdict(
                False, "naturality-shape", (label,),
                f"{label} transformation has the wrong endpoints",
            )
        v = validate_natural(nat)
        if not v:
            return Verdict(False, v.law, (label,) + v.witness, v.detail)
    c = m.base
    q_obj, q_arr = m.q.object_map, m.q.arrow_map
    eps, delta = m.eps.components, m.delta.components
    for a in c.objects:
        qa = q_obj[a]
        if c.comp(eps[qa], delta[a]) != c.identity[qa]:
            return Verdict(False, "counit-left", (a,), f"eps_Q o delta is not id at {a}")
        if c.comp(q_arr[eps[a]], delta[a]) != c.identity[qa]:
            return Verdict(False, "counit-right", (a,), f"Q eps o delta is not id at {a}")
        if c.comp(delta[qa], delta[a]) != c.comp(q_arr[delta[a]], delta[a]):
            return Verdict(False, "coassociativity", (a,), f"comultiplication squares differ at {a}")
    return Verdict(True)


# --------------------------------------------------------------- set mode


@dataclass(frozen=True)
class SetMonad:
    """A monad on finite sets, given elementwise.

    t_obj enumerates T X for a carrier X (bounded for instances whose
    honest image would be infinite); t_map lifts a value function to
    T-values; eta and mu act on values directly and do not consult the
    enumeration, which lets law composites pass through intermediate
    values the bounded enumeration omits.  square_domain/cube_domain
    override which elements of TTX/TTTX the laws are quantified over.
    """

    label: str
    carriers: tuple[tuple, ...]
    t_obj: Callable[[tuple], tuple]
    t_map: Callable[[Callable], Callable]
    eta: Callable
    mu: Callable
    square_domain: Callable[[tuple], Iterable] | None = None
    cube_domain: Callable[[tuple], Iterable] | None = None

    def squares(self, x: tuple) -> Iterable:
        if self.square_domain is not None:
            return self.square_domain(x)
        return self.t_obj(self.t_obj(x))

    def cubes(self, x: tuple) -> Iterable:
        if self.cube_domain is not None:
            return self.cube_domain(x)
        return self.t_obj(self.t_obj(self.t_obj(x)))


@dataclass(frozen=True)
class SetComonad:
    label: str
    carriers: tuple[tuple, ...]
    q_obj: Callable[[tuple], tuple]
    q_map: Callable[[Callable], Callable]
    eps: Callable
    delta: Callable


def _carrier_functions(x: tuple, y: tuple) -> Iterable[FnTable]:
    return all_functions(x, y)


def _check_set_monad(m: SetMonad) -> Verdict:
    for x in m.carriers:
        tx = m.t_obj(x)
        ident = m.t_map(lambda v: v)
        for el in tx:
            if ident(el) != el:
                return Verdict(False, "functor-identity", (x, el), "T id moved an element")
    for x, y, z in itertools.product(m.carriers, repeat=3):
        for f in _carrier_functions(x, y):
            for g in _carrier_functions(y, z):
                lifted = m.t_map(lambda v: g(f(v)))
                step = m.t_map(f)
                after = m.t_map(g)
                for el in m.t_obj(x):
                    if lifted(el) != after(step(el)):
                        return Verdict(
                            False, "functor-composition", (x, y, z, el),
                            "T(g o f) disagrees with Tg o Tf",
                        )
    for x, y in itertools.product(m.carriers, repeat=2):
        for f in _carrier_functions(x, y):
            tf = m.t_map(f)
            ttf = m.t_map(tf)
            for el in x:
                if tf(m.eta(el)) != m.eta(f(el)):
                    return Verdict(
                        False, "unit-naturality", (x, y, el),
                        "T f o eta disagrees with eta o f",
                    )
            for el in m.squares(x):
                if tf(m.mu(el)) != m.mu(ttf(el)):
                    return Verdict(
                        False, "multiplication-naturality", (x, y, el),
                        "T f o mu disagrees with mu o TT f",
                    )
    lift_eta = m.t_map(m.eta)
    lift_mu = m.t_map(m.mu)
    mu = m.mu
    for x in m.carriers:
        for el in m.t_obj(x):
            if mu(m.eta(el)) != el:
                return Verdict(False, "unit-left", (x, el), "mu o eta is not the identity")
            if mu(lift_eta(el)) != el:
                return Verdict(False, "unit-right", (x, el), "mu o T eta is not the identity")
        for el in m.cubes(x):
            if mu(mu(el)) != mu(lift_mu(el)):
                return Verdict(
                    False, "associativity", (x, el),
                    "mu o mu_T disagrees with mu o T mu",
                )
    return Verdict(True)


def _check_set_comonad(m: SetComonad) -> Verdict:
    for x in m.carriers:
        ident = m.q_map(lambda v: v)
        for el in m.q_obj(x):
            if ident(el) != el:
                return Verdict(False, "functor-identity", (x, el), "Q id moved an element")
    for x, y, z in itertools.product(m.carriers, repeat=3):
        for f in _carrier_functions(x, y):
            for g in _carrier_functions(y, z):
                lifted = m.q_map(lambda v: g(f(v)))
                step, after = m.q_map(f), m.q_map(g)
                for el in m.q_obj(x):
                    if lifted(el) != after(step(el)):
                        return Verdict(
                            False, "functor-composition", (x, y, z, el),
                            "Q(g o f) disagrees with Qg o Qf",
                        )
    for x, y in itertools.product(m.carriers, repeat=2):
        for f in _carrier_functions(x, y):
            qf = m.q_map(f)
            for el in m.q_obj(x):
                if f(m.eps(el)) != m.eps(qf(el)):
                    return Verdict(
                        False, "counit-naturality", (x, y, el),
                        "f o eps disagrees with eps o Q f",
                    )
                if m.q_map(qf)(m.delta(el)) != m.delta(qf(el)):
                    return Verdict(
                        False, "comultiplication-naturality", (x, y, el),
                        "QQ f o delta disagrees with delta o Q f",
                    )
    for x in m.carriers:
        for el in m.q_obj(x):
            if m.eps(m.delta(el)) != el:
                return Verdict(False, "counit-left", (x, el), "eps_Q o delta is not the identity")
            if m.q_map(m.eps)(m.delta(el)) != el:
                return Verdict(False, "counit-right", (x, el), "Q eps o delta is not the identity")
            if m.delta(m.delta(el)) != m.q_map(m.delta)(m.delta(el)):
                return Verdict(
                    False, "coassociativity", (x, el),
                    "delta_Q o delta disagrees with Q delta o delta",
                )
    return Verdict(True)


def check_monad(m: TableMonad | SetMonad) -> Verdict:
    """Functor laws and naturality first, then the three monad diagrams."""
    if isinstance(m, TableMonad):
        return _check_table_monad(m)
    return _check_set_monad(m)


def check_comonad(m: TableComonad | SetComonad) -> Verdict:
    if isinstance(m, TableComonad):
        return _check_table_comonad(m)
    return _check_set_comonad(m)


# -------------------------------------------------------------- instances


def _range_sets(max_size: int) -> tuple[tuple, ...]:
    return tuple(tuple(range(n)) for n in range(max_size + 1))


def _exceptions_monad(e_size: int, max_size: int) -> SetMonad:
    errors = tuple(("exc", i) for i in range(e_size))

    def t_obj(x: tuple) -> tuple:
        return tuple(("ok", v) for v in x) + errors

    def t_map(f: Callable) -> Callable:
        def go(el):
            tag, payload = el
            return ("ok", f(payload)) if tag == "ok" else el

        return go

    def mu(el):
        tag, payload = el
        return payload if tag == "ok" else el

    return SetMonad(
        "exceptions",
        _range_sets(max_size),
        t_obj,
        t_map,
        lambda v: ("ok", v),
        mu,
    )


def _state_monad(xi_size: int, max_size: int) -> SetMonad:
    states = range(xi_size)

    def t_obj(x: tuple) -> tuple:
        pairs = tuple(itertools.product(x, states))
        return tuple(itertools.product(pairs, repeat=xi_size))

    def t_map(f: Callable) -> Callable:
        return lambda el: tuple((f(v), s) for v, s in el)

    def mu(el):
        # run the outer computation, then the inner one it returns
        return tuple(el[s][0][el[s][1]] for s in states)

    def cube_domain(x: tuple) -> Iterable:
        # same enumeration as t_obj applied three times, but streamed;
        # the materialized triple carrier would run to millions of tuples
        squares = t_obj(t_obj(x))
        pairs = tuple(itertools.product(squares, states))
        return itertools.product(pairs, repeat=xi_size)

    return SetMonad(
        "state",
        _range_sets(max_size),
        t_obj,
        t_map,
        lambda v: tuple((v, s) for s in states),
        mu,
        cube_domain=cube_domain,
    )


def _bounded_nests(x: tuple, depth: int, bound: int) -> tuple:
    """Depth-fold nested tuples over x whose full flattening fits the bound.

    Enumerating the raw triple nesting and filtering afterwards is hopeless
    (tens of billions of elements at bound 3); growing tuples against a leaf
    budget visits only the survivors.
    """
    layer: tuple = tuple((v, 1) for v in x)
    for _ in range(depth):
        grown = [((), 0)]
        frontier = [((), 0)]
        for _ in range(bound):
            step = []
            for el, weight in frontier:
                for inner, extra in layer:
                    if weight + extra <= bound:
                        step.append((el + (inner,), weight + extra))
            grown.extend(step)
            frontier = step
        layer = tuple(grown)
    return tuple(el for el, _ in layer)


def _list_monad(bound: int, max_size: int) -> SetMonad:
    def t_obj(x: tuple) -> tuple:
        out = []
        for n in range(bound + 1):
            out.extend(itertools.product(x, repeat=n))
        return tuple(out)

    def t_map(f: Callable) -> Callable:
        return lambda el: tuple(f(v) for v in el)

    def mu(el):
        return tuple(v for part in el for v in part)

    def square_domain(x: tuple) -> tuple:
        return _bounded_nests(x, 2, bound)

    def cube_domain(x: tuple) -> tuple:
        return _bounded_nests(x, 3, bound)

    return SetMonad(
        "list",
        _range_sets(max_size),
        t_obj,
        t_map,
        lambda v: (v,),
        mu,
        square_domain=square_domain,
        cube_domain=cube_domain,
    )


def _product_comonad(s_size: int, max_size: int) -> SetComonad:
    marks = range(s_size)

    def q_obj(x: tuple) -> tuple:
        return tuple(itertools.product(marks, x))

    def q_map(f: Callable) -> Callable:
        return lambda el: (el[0], f(el[1]))

    return SetComonad(
        "product_comonad",
        _range_sets(max_size),
        q_obj,
        q_map,
        lambda el: el[1],
        lambda el: (el[0], (el[0], el[1])),
    )


@dataclass(frozen=True)
class FiniteMonoid:
    label: str
    elements: tuple
    unit: object
    mul: Mapping[tuple, object]

    def times(self, a, b):
        return self.mul[(a, b)]


def _monoid_from_fn(label: str, elements: tuple, unit, fn: Callable) -> FiniteMonoid:
    mul = {(a, b): fn(a, b) for a in elements for b in elements}
    return FiniteMonoid(label, elements, unit, mul)


def standard_monoids() -> tuple[FiniteMonoid, ...]:
    return (
        _monoid_from_fn("trivial", (0,), 0, lambda a, b: 0),
        _monoid_from_fn("cyclic2", (0, 1), 0, lambda a, b: (a + b) % 2),
        _monoid_from_fn("cyclic3", (0, 1, 2), 0, lambda a, b: (a + b) % 3),
        _monoid_from_fn("or", (0, 1), 0, lambda a, b: a | b),
        _monoid_from_fn("capped-add", (0, 1, 2), 0, lambda a, b: min(2, a + b)),
    )


@dataclass(frozen=True)
class MListAdjunction:
    """Bounded stand-in for the free-monoid/underlying-set adjunction.

    The free monoid on a nonempty set is infinite, so the
    correspondence between set maps X -> U(M) and monoid homomorphisms
    on words is checked on words up to word_bound, where a
    homomorphism is already determined by its values on singletons.
    """

    sets: tuple[tuple, ...]
    monoids: tuple[FiniteMonoid, ...]
    word_bound: int


def _words(x: tuple, bound: int) -> tuple:
    out = []
    for n in range(bound + 1):
        out.extend(itertools.product(x, repeat=n))
    return tuple(out)


def validate_monoid(m: FiniteMonoid) -> Verdict:
    for a in m.elements:
        if m.times(m.unit, a) != a or m.times(a, m.unit) != a:
            return Verdict(False, "monoid-unit", (m.label, a), "unit law fails")
    for a, b, c in itertools.product(m.elements, repeat=3):
        if m.times(m.times(a, b), c) != m.times(a, m.times(b, c)):
            return Verdict(
                False, "monoid-associativity", (m.label, a, b, c),
                "associativity fails",
            )
    return Verdict(True)


def _fold(m: FiniteMonoid, f: Callable, word: tuple):
    acc = m.unit
    for v in word:
        acc = m.times(acc, f(v))
    return acc


def _monoid_homs(m: FiniteMonoid, n: FiniteMonoid) -> Iterable[FnTable]:
    for table in all_functions(m.elements, n.elements):
        if table(m.unit) != n.unit:
            continue
        if all(
            table(m.times(a, b)) == n.times(table(a), table(b))
            for a in m.elements
            for b in m.elements
        ):
            yield table


def check_mlist_adjunction(a: MListAdjunction) -> Verdict:
    """The fold extension is the inverse of restriction along singletons,
    a bounded homomorphism, determined by singleton values, and natural
    in both the set and the monoid."""
    for m in a.monoids:
        v = validate_monoid(m)
        if not v:
            return v
    bound = a.word_bound
    for x in a.sets:
        words = _words(x, bound)
        for m in a.monoids:
            for f in all_functions(x, m.elements):
                for v in x:
                    if _fold(m, f, (v,)) != f(v):
                        return Verdict(
                            False, "unit-triangle", (x, m.label, v),
                            "extension disagrees with f on a singleton",
                        )
                for w1 in words:
                    for w2 in words:
                        if len(w1) + len(w2) > bound:
                            continue
                        if _fold(m, f, w1 + w2) != m.times(
                            _fold(m, f, w1), _fold(m, f, w2)
                        ):
                            return Verdict(
                                False, "extension-homomorphism",
                                (x, m.label, w1, w2),
                                "fold does not respect concatenation",
                            )
                for w in words:
                    if len(w) >= 1:
                        if _fold(m, f, w) != m.times(
                            f(w[0]), _fold(m, f, w[1:])
                        ):
                            return Verdict(
                                False, "uniqueness-determination",
                                (x, m.label, w),
                                "extension is not determined by singletons",
                            )
    for x, y in itertools.product(a.sets, repeat=2):
        for j in all_functions(x, y):
            for m in a.monoids:
                for f in all_functions(y, m.elements):
                    for w in _words(x, bound):
                        mapped = tuple(j(v) for v in w)
                        if _fold(m, lambda v: f(j(v)), w) != _fold(m, f, mapped):
                            return Verdict(
                                False, "naturality-sets", (x, y, m.label, w),
                                "extension is not natural in the set",
                            )
    for m, n in itertools.product(a.monoids, repeat=2):
        for k in _monoid_homs(m, n):
            for x in a.sets:
                for f in all_functions(x, m.elements):
                    for w in _words(x, bound):
                        if k(_fold(m, f, w)) != _fold(n, lambda v: k(f(v)), w):
                            return Verdict(
                                False, "naturality-monoids",
                                (m.label, n.label, x, w),
                                "extension is not natural in the monoid",
                            )
    return Verdict(True)


def builtin_instance(name: str, **params: int):
    """Named instance over small finite sets.

    exceptions(e_size, max_size), state(xi_size, max_size),
    list(bound, max_size), product_comonad(s_size, max_size), and
    mlist_adjunction(word_bound, max_size).  All parameters must be at
    least 1 except max_size which bounds the carrier sizes and may be 0.
    """
    defaults = {
        "exceptions": {"e_size": 1, "max_size": 3},
        "state": {"xi_size": 2, "max_size": 2},
        "list": {"bound": 2, "max_size": 2},
        "product_comonad": {"s_size": 2, "max_size": 2},
        "mlist_adjunction": {"word_bound": 3, "max_size": 2},
    }
    if name not in defaults:
        raise ValueError(f"unknown instance {name!r}; know {sorted(defaults)}")
    config = dict(defaults[name])
    for key, value in params.items():
        if key not in config:
            raise ValueError(f"{name} takes {sorted(config)}, not {key!r}")
        config[key] = value
    if any(v < 1 for k, v in config.items() if k != "max_size"):
        raise ValueError("size parameters must be at least 1")
    if config["max_size"] < 0:
        raise ValueError("max_size must be at least 0")
    match name:
        case "exceptions":
            return _exceptions_monad(config["e_size"], config["max_size"])
        case "state":
            if (config["max_size"] * config["xi_size"]) ** config["xi_size"] > DEFAULT_CAP:
                raise ValueError("state instance would exceed the enumeration cap")
            return _state_monad(config["xi_size"], config["max_size"])
        case "list":
            return _list_monad(config["bound"], config["max_size"])
        case "product_comonad":
            return _product_comonad(config["s_size"], config["max_size"])
        case "mlist_adjunction":
            return MListAdjunction(
                _range_sets(config["max_size"]),
                standard_monoids(),
                config["word_bound"],
            )
    raise AssertionError


# ----------------------------------------------------------------- Kleisli


def kleisli_arrow_name(underlying: str, target: str) -> str:
    """Kleisli arrows are named by their underlying arrow and target;
    the target disambiguates because T need not be injective on objects."""
    return f"k[{underlying};{target}]"


def cokleisli_arrow_name(underlying: str, source: str) -> str:
    return f"k[{underlying};{source}]"


def _table_kleisli(m: TableMonad, objects: Sequence[str] | None) -> FinCategory:
    c = m.base
    obs = tuple(objects) if objects is not None else c.objects
    t_obj, t_arr = m.t.object_map, m.t.arrow_map
    eta, mu = m.eta.components, m.mu.components
    arrows = []
    underlying: dict[str, tuple[str, str, str, str]] = {}
    for a in obs:
        for b in obs:
            for f in c.hom(a, t_obj[b]):
                name = kleisli_arrow_name(f, b)
                arrows.append(Arrow(name, a, b))
                underlying[name] = (f, b, a, b)
    identity = {a: kleisli_arrow_name(eta[a], a) for a in obs}
    compose = {}
    for g_name, (g_u, c_obj, g_dom, _) in underlying.items():
        for f_name, (f_u, _, _, f_cod) in underlying.items():
            if f_cod != g_dom:
                continue
            composite = c.comp(mu[c_obj], c.comp(t_arr[g_u], f_u))
            compose[(g_name, f_name)] = kleisli_arrow_name(composite, c_obj)
    return FinCategory(obs, tuple(arrows), identity, compose)


def _table_cokleisli(m: TableComonad, objects: Sequence[str] | None) -> FinCategory:
    c = m.base
    obs = tuple(objects) if objects is not None else c.objects
    q_obj, q_arr = m.q.object_map, m.q.arrow_map
    eps, delta = m.eps.components, m.delta.components
    arrows = []
    underlying: dict[str, tuple[str, str, str, str]] = {}
    for a in obs:
        for b in obs:
            for f in c.hom(q_obj[a], b):
                name = cokleisli_arrow_name(f, a)
                arrows.append(Arrow(name, a, b))
                underlying[name] = (f, a, a, b)
    identity = {a: cokleisli_arrow_name(eps[a], a) for a in obs}
    compose = {}
    for g_name, (g_u, _, g_dom, _) in underlying.items():
        for f_name, (f_u, a_obj, _, f_cod) in underlying.items():
            if f_cod != g_dom:
                continue
            composite = c.comp(g_u, c.comp(q_arr[f_u], delta[a_obj]))
            compose[(g_name, f_name)] = cokleisli_arrow_name(composite, a_obj)
    return FinCategory(obs, tuple(arrows), identity, compose)


def _set_kleisli(m: SetMonad, objects: Sequence[tuple] | None) -> FinCategory:
    obs = tuple(tuple(x) for x in objects) if objects is not None else m.carriers
    names = {x: subset_name(x) for x in obs}
    if len(set(names.values())) != len(obs):
        raise ValueError("carrier names collide")
    tables: dict[tuple[tuple, tuple], tuple[FnTable, ...]] = {}
    index: dict[tuple[tuple, tuple], dict[tuple, int]] = {}
    for a in obs:
        for b in obs:
            homs = tuple(all_functions(a, m.t_obj(b)))
            tables[(a, b)] = homs
            index[(a, b)] = {t.values: i for i, t in enumerate(homs)}

    def name_of(a: tuple, b: tuple, i: int) -> str:
        return f"k{i}:{names[a]}->{names[b]}"

    arrows = []
    for a in obs:
        for b in obs:
            for i in range(len(tables[(a, b)])):
                arrows.append(Arrow(name_of(a, b, i), names[a], names[b]))
    identity = {}
    for a in obs:
        values = tuple(m.eta(v) for v in a)
        identity[names[a]] = name_of(a, a, index[(a, a)][values])
    compose = {}
    for (b, c_obj), later in tables.items():
        for (a, b2), earlier in tables.items():
            if b2 != b:
                continue
            for j, g in enumerate(later):
                lifted = m.t_map(g)
                for i, f in enumerate(earlier):
                    values = tuple(m.mu(lifted(f(v))) for v in a)
                    slot = index[(a, c_obj)].get(values)
                    if slot is None:
                        raise ValueError(
                            f"Kleisli composite escapes the bounded enumeration "
                            f"of maps {names[a]} -> T{names[c_obj]}; the "
                            f"{m.label} instance is not closed under composition "
                            "at this bound"
                        )
                    compose[(name_of(b, c_obj, j), name_of(a, b, i))] = name_of(
                        a, c_obj, slot
                    )
    obj_names = tuple(names[x] for x in obs)
    return FinCategory(obj_names, tuple(arrows), identity, compose)


def kleisli_build(
    m: TableMonad | SetMonad, objects: Sequence | None = None
) -> FinCategory:
    """Explicit Kleisli category: identities are the units and
    composition takes f then the lifted g then the multiplication."""
    if isinstance(m, TableMonad):
        return _table_kleisli(m, objects)
    return _set_kleisli(m, objects)


def cokleisli_build(
    m: TableComonad, objects: Sequence[str] | None = None
) -> FinCategory:
    return _table_cokleisli(m, objects)


# -------------------------------------------------------------- roundtrips


def monad_from_adjunction(a: AdjunctionData) -> TableMonad:
    """The monad a validated adjunction induces on its source category.

    The unit comes from the adjunction check; the counit at y is the
    transpose of the identity on Gy, and the multiplication is G of it.
    """
    verdict = check_adjunction(a)
    if not verdict:
        raise ValueError(f"not an adjunction: {verdict.law} {verdict.detail}")
    assert verdict.unit is not None
    c = a.f.source
    t = compose_functors(a.g, a.f)
    counit = {
        y: a.theta[(a.g.object_map[y], y)][c.identity[a.g.object_map[y]]]
        for y in a.f.target.objects
    }
    mu = {x: a.g.arrow_map[counit[a.f.object_map[x]]] for x in c.objects}
    return TableMonad(
        c,
        t,
        NatTransData(identity_functor(c), t, dict(verdict.unit)),
        NatTransData(compose_functors(t, t), t, mu),
    )


def _table_roundtrip(m: TableMonad) -> Verdict:
    c = m.base
    k = kleisli_build(m)
    t_obj, t_arr = m.t.object_map, m.t.arrow_map
    eta, mu = m.eta.components, m.mu.components
    f_map = {
        a.name: kleisli_arrow_name(c.comp(eta[a.cod], a.name), a.cod)
        for a in c.arrows
    }
    free = FunctorData(c, k, {x: x for x in c.objects}, f_map)
    g_map = {}
    for a in c.objects:
        for b in c.objects:
            for f in c.hom(a, t_obj[b]):
                g_map[kleisli_arrow_name(f, b)] = c.comp(mu[b], t_arr[f])
    forget = FunctorData(k, c, {x: t_obj[x] for x in c.objects}, g_map)
    theta = {}
    for x in c.objects:
        for y in k.objects:
            theta[(x, y)] = {
                f: kleisli_arrow_name(f, y) for f in c.hom(x, t_obj[y])
            }
    verdict = check_adjunction(AdjunctionData(free, forget, theta))
    if not verdict:
        return Verdict(
            False, "kleisli-adjunction", (verdict.law,) + verdict.witness,
            verdict.detail,
        )
    derived = monad_from_adjunction(AdjunctionData(free, forget, theta))
    if derived.t.object_map != t_obj or derived.t.arrow_map != m.t.arrow_map:
        return Verdict(False, "roundtrip-endofunctor", (), "G o F differs from T")
    if derived.eta.components != eta:
        bad = next(
            x for x in c.objects if derived.eta.components[x] != eta[x]
        )
        return Verdict(False, "roundtrip-unit", (bad,), "derived unit differs")
    if derived.mu.components != mu:
        bad = next(x for x in c.objects if derived.mu.components[x] != mu[x])
        return Verdict(
            False, "roundtrip-multiplication", (bad,), "derived multiplication differs"
        )
    return Verdict(True)


def _set_roundtrip(m: SetMonad, naturality_carriers: Sequence[tuple] | None) -> Verdict:
    """Semantic roundtrip for set-mode monads.

    The Kleisli adjunction cannot be materialized as finite tables
    because G would need T-images of every object to be objects again,
    so the same content is checked pointwise: the transpose is
    tautologically bijective, its naturality is verified over a small
    carrier box, and the derived unit and multiplication are recomputed
    from the adjunction formulas and compared with the instance.
    """
    nat_carriers = (
        tuple(tuple(x) for x in naturality_carriers)
        if naturality_carriers is not None
        else m.carriers
    )
    for x0, x1 in itertools.product(nat_carriers, repeat=2):
        for y0, y1 in itertools.product(nat_carriers, repeat=2):
            ty0, ty1 = m.t_obj(y0), m.t_obj(y1)
            for k in all_functions(x1, ty0):
                for g in all_functions(x0, x1):
                    for h in all_functions(y0, ty1):
                        lifted_h = m.t_map(h)
                        for v in x0:
                            left = m.mu(lifted_h(k(g(v))))
                            inner = m.mu(m.t_map(k)(m.eta(g(v))))
                            right = m.mu(lifted_h(inner))
                            if left != right:
                                return Verdict(
                                    False, "theta-naturality",
                                    (x0, x1, y0, y1, v),
                                    "transpose is not natural over the box",
                                )
    # the transposes of the units must be Kleisli identities
    for x, y in itertools.product(m.carriers, repeat=2):
        lift_eta = m.t_map(m.eta)
        for f in all_functions(x, m.t_obj(y)):
            lifted_f = m.t_map(f)
            for v in x:
                out = f(v)
                if m.mu(lift_eta(out)) != out:
                    return Verdict(
                        False, "kleisli-identity-left", (x, y, v),
                        "unit transpose is not a left identity",
                    )
                if m.mu(lifted_f(m.eta(v))) != out:
                    return Verdict(
                        False, "kleisli-identity-right", (x, y, v),
                        "unit transpose is not a right identity",
                    )
    # mu' = G applied to the counit, i.e. mu o T(id), recomputed pointwise
    for x in m.carriers:
        ident = m.t_map(lambda v: v)
        for el in m.squares(x):
            if m.mu(ident(el)) != m.mu(el):
                return Verdict(
                    False, "roundtrip-multiplication", (x, el),
                    "derived multiplication differs",
                )
    return Verdict(True)


def kleisli_roundtrip(
    m: TableMonad | SetMonad,
    naturality_carriers: Sequence[tuple] | None = None,
) -> Verdict:
    """Rebuild the monad from its Kleisli adjunction and compare.

    Table mode materializes the free and forgetful functors with the
    transpose f |-> f-bar, runs the full adjunction check, and derives
    the monad back.  Set mode checks the same equations pointwise; the
    optional naturality_carriers shrink the (fourfold) quantification
    box for instances whose function spaces are large.
    """
    if isinstance(m, TableMonad):
        return _table_roundtrip(m)
    return _set_roundtrip(m, naturality_carriers)


# ---------------------------------------------------- monoidal structure


@dataclass(frozen=True)
class MonoidalStructure:
    """A symmetric monoidal structure on a finite category, as tables.

    assoc components go A (x) (B (x) C) -> (A (x) B) (x) C; lunit and
    runit remove the unit on the named side; sym swaps the pair order.
    """

    base: FinCategory
    unit: str
    tensor_obj: Mapping[tuple[str, str], str]
    tensor_arr: Mapping[tuple[str, str], str]
    assoc: Mapping[tuple[str, str, str], str]
    lunit: Mapping[str, str]
    runit: Mapping[str, str]
    sym: Mapping[tuple[str, str], str]

    def ten_o(self, a: str, b: str) -> str:
        return self.tensor_obj[(a, b)]

    def ten_a(self, f: str, g: str) -> str:
        return self.tensor_arr[(f, g)]


def _two_sided_inverse(c: FinCategory, name: str) -> str:
    a = c.arrow(name)
    for candidate in c.hom(a.cod, a.dom):
        if (
            c.comp(candidate, name) == c.identity[a.dom]
            and c.comp(name, candidate) == c.identity[a.cod]
        ):
            return candidate
    raise ValueError(f"arrow {name!r} has no two-sided inverse")


def validate_monoidal(ms: MonoidalStructure) -> Verdict:
    c = ms.base
    if ms.unit not in c.objects:
        return Verdict(False, "unit-object", (ms.unit,), "unit is not an object")
    for a in c.objects:
        for b in c.objects:
            ab = ms.tensor_obj.get((a, b))
            if ab is None or ab not in c.objects:
                return Verdict(False, "tensor-typing", (a, b), "object tensor missing")
    for f in c.arrows:
        for g in c.arrows:
            fg = ms.tensor_arr.get((f.name, g.name))
            if fg is None:
                return Verdict(False, "tensor-typing", (f.name, g.name), "arrow tensor missing")
            arr = c.arrow(fg)
            if arr.dom != ms.ten_o(f.dom, g.dom) or arr.cod != ms.ten_o(f.cod, g.cod):
                return Verdict(
                    False, "tensor-typing", (f.name, g.name), "tensor endpoints disagree"
                )
    for a in c.objects:
        for b in c.objects:
            if ms.ten_a(c.identity[a], c.identity[b]) != c.identity[ms.ten_o(a, b)]:
                return Verdict(False, "tensor-identity", (a, b), "id tensor id is not id")
    for (g, f), gf in c.compose.items():
        for (k, h), kh in c.compose.items():
            left = ms.ten_a(gf, kh)
            right = c.comp(ms.ten_a(g, k), ms.ten_a(f, h))
            if left != right:
                return Verdict(
                    False, "tensor-composition", (g, f, k, h),
                    "tensor does not respect composition",
                )
    for f in c.arrows:
        for g in c.arrows:
            for h in c.arrows:
                left = c.comp(
                    ms.assoc[(f.cod, g.cod, h.cod)],
                    ms.ten_a(f.name, ms.ten_a(g.name, h.name)),
                )
                right = c.comp(
                    ms.ten_a(ms.ten_a(f.name, g.name), h.name),
                    ms.assoc[(f.dom, g.dom, h.dom)],
                )
                if left != right:
                    return Verdict(
                        False, "assoc-naturality", (f.name, g.name, h.name),
                        "associator square does not commute",
                    )
    for f in c.arrows:
        if c.comp(f.name, ms.lunit[f.dom]) != c.comp(
            ms.lunit[f.cod], ms.ten_a(c.identity[ms.unit], f.name)
        ):
            return Verdict(False, "unit-naturality", (f.name, "left"), "left unitor not natural")
        if c.comp(f.name, ms.runit[f.dom]) != c.comp(
            ms.runit[f.cod], ms.ten_a(f.name, c.identity[ms.unit])
        ):
            return Verdict(False, "unit-naturality", (f.name, "right"), "right unitor not natural")
        for g in c.arrows:
            if c.comp(ms.sym[(f.cod, g.cod)], ms.ten_a(f.name, g.name)) != c.comp(
                ms.ten_a(g.name, f.name), ms.sym[(f.dom, g.dom)]
            ):
                return Verdict(
                    False, "sym-naturality", (f.name, g.name), "symmetry square does not commute"
                )
    ids = c.identity
    for a, b in itertools.product(c.objects, repeat=2):
        if c.comp(ms.sym[(b, a)], ms.sym[(a, b)]) != ids[ms.ten_o(a, b)]:
            return Verdict(False, "sym-involution", (a, b), "symmetry does not self-invert")
        left = c.comp(ms.ten_a(ms.runit[a], ids[b]), ms.assoc[(a, ms.unit, b)])
        right = ms.ten_a(ids[a], ms.lunit[b])
        if left != right:
            return Verdict(False, "triangle", (a, b), "unit triangle does not commute")
    for a, b, cc in itertools.product(c.objects, repeat=3):
        left = c.comp(
            ms.assoc[(cc, a, b)],
            c.comp(ms.sym[(ms.ten_o(a, b), cc)], ms.assoc[(a, b, cc)]),
        )
        right = c.comp(
            ms.ten_a(ms.sym[(a, cc)], ids[b]),
            c.comp(ms.assoc[(a, cc, b)], ms.ten_a(ids[a], ms.sym[(b, cc)])),
        )
        if left != right:
            return Verdict(False, "hexagon", (a, b, cc), "symmetry hexagon does not commute")
    for a, b, cc, d in itertools.product(c.objects, repeat=4):
        left = c.comp(
            ms.assoc[(ms.ten_o(a, b), cc, d)], ms.assoc[(a, b, ms.ten_o(cc, d))]
        )
        right = c.comp(
            ms.ten_a(ms.assoc[(a, b, cc)], ids[d]),
            c.comp(
                ms.assoc[(a, ms.ten_o(b, cc), d)],
                ms.ten_a(ids[a], ms.assoc[(b, cc, d)]),
            ),
        )
        if left != right:
            return Verdict(False, "pentagon", (a, b, cc, d), "pentagon does not commute")
    return Verdict(True)


def meet_semilattice_monoidal(c: FinCategory) -> MonoidalStructure:
    """Monoidal structure on a thin category with meets and a top.

    The tensor of two objects is their product apex and every
    structure map is the unique arrow between its endpoints.
    """

    def unique(a: str, b: str) -> str:
        hom = c.hom(a, b)
        if len(hom) != 1:
            raise ValueError(
                f"expected exactly one arrow {a} -> {b}, found {len(hom)}"
            )
        return hom[0]

    terminals = find_universal(c, "terminal")
    if not terminals:
        raise ValueError("category has no terminal object")
    unit = terminals[0].apex
    tensor_obj = {}
    for a in c.objects:
        for b in c.objects:
            ws = find_universal(c, "product", a, b)
            if not ws:
                raise ValueError(f"category has no product of {a} and {b}")
            tensor_obj[(a, b)] = ws[0].apex
    tensor_arr = {
        (f.name, g.name): unique(
            tensor_obj[(f.dom, g.dom)], tensor_obj[(f.cod, g.cod)]
        )
        for f in c.arrows
        for g in c.arrows
    }
    assoc = {
        (a, b, d): unique(
            tensor_obj[(a, tensor_obj[(b, d)])],
            tensor_obj[(tensor_obj[(a, b)], d)],
        )
        for a in c.objects
        for b in c.objects
        for d in c.objects
    }
    lunit = {a: unique(tensor_obj[(unit, a)], a) for a in c.objects}
    runit = {a: unique(tensor_obj[(a, unit)], a) for a in c.objects}
    sym = {
        (a, b): unique(tensor_obj[(a, b)], tensor_obj[(b, a)])
        for a in c.objects
        for b in c.objects
    }
    return MonoidalStructure(c, unit, tensor_obj, tensor_arr, assoc, lunit, runit, sym)


def commutative_monoid_monoidal(
    m: FiniteMonoid,
) -> tuple[FinCategory, MonoidalStructure]:
    """One-object symmetric monoidal category from a commutative monoid;
    the tensor on arrows is the monoid operation itself."""
    for a, b in itertools.product(m.elements, repeat=2):
        if m.times(a, b) != m.times(b, a):
            raise ValueError(f"monoid {m.label} is not commutative at ({a}, {b})")
    names = {e: str(e) for e in m.elements}
    if len(set(names.values())) != len(m.elements):
        raise ValueError("element names collide")
    back = {v: k for k, v in names.items()}
    c = monoid_category(
        [names[e] for e in m.elements],
        names[m.unit],
        lambda x, y: names[m.times(back[x], back[y])],
    )
    ident = c.identity["*"]
    tensor_arr = {
        (names[a], names[b]): names[m.times(a, b)]
        for a in m.elements
        for b in m.elements
    }
    return c, MonoidalStructure(
        c,
        "*",
        {("*", "*"): "*"},
        tensor_arr,
        {("*", "*", "*"): ident},
        {"*": ident},
        {"*": ident},
        {("*", "*"): ident},
    )


@dataclass(frozen=True)
class MonoidalFunctorData:
    """A lax monoidal functor between monoidal structures.

    m0 mediates the units and m2 the binary tensors, componentwise.
    """

    source: MonoidalStructure
    target: MonoidalStructure
    functor: FunctorData
    m0: str
    m2: Mapping[tuple[str, str], str]


def validate_monoidal_functor(mf: MonoidalFunctorData) -> Verdict:
    f = mf.functor
    if f.source != mf.source.base or f.target != mf.target.base:
        return Verdict(False, "functor-shape", (), "functor does not match the structures")
    v = validate_functor(f)
    if not v:
        return v
    src, tgt = mf.source, mf.target
    c, d = src.base, tgt.base
    m0_arrow = d.arrow(mf.m0)
    if m0_arrow.dom != tgt.unit or m0_arrow.cod != f.on_obj(src.unit):
        return Verdict(False, "unit-map-typing", (mf.m0,), "m0 endpoints disagree")
    for a, b in itertools.product(c.objects, repeat=2):
        comp = mf.m2.get((a, b))
        if comp is None:
            return Verdict(False, "tensor-map-typing", (a, b), "m2 component missing")
        arr = d.arrow(comp)
        if arr.dom != tgt.ten_o(f.on_obj(a), f.on_obj(b)) or arr.cod != f.on_obj(
            src.ten_o(a, b)
        ):
            return Verdict(False, "tensor-map-typing", (a, b), "m2 endpoints disagree")
    for p in c.arrows:
        for q in c.arrows:
            left = d.comp(
                mf.m2[(p.cod, q.cod)], tgt.ten_a(f.on_arrow(p.name), f.on_arrow(q.name))
            )
            right = d.comp(f.on_arrow(src.ten_a(p.name, q.name)), mf.m2[(p.dom, q.dom)])
            if left != right:
                return Verdict(
                    False, "tensor-map-naturality", (p.name, q.name),
                    "m2 square does not commute",
                )
    ids = d.identity
    for a, b, e in itertools.product(c.objects, repeat=3):
        fa, fb, fe = f.on_obj(a), f.on_obj(b), f.on_obj(e)
        left = d.comp(
            f.on_arrow(src.assoc[(a, b, e)]),
            d.comp(mf.m2[(a, src.ten_o(b, e))], tgt.ten_a(ids[fa], mf.m2[(b, e)])),
        )
        right = d.comp(
            mf.m2[(src.ten_o(a, b), e)],
            d.comp(tgt.ten_a(mf.m2[(a, b)], ids[fe]), tgt.assoc[(fa, fb, fe)]),
        )
        if left != right:
            return Verdict(
                False, "tensor-map-associativity", (a, b, e),
                "m2 hexagon does not commute",
            )
    for a in c.objects:
        fa = f.on_obj(a)
        left = d.comp(
            f.on_arrow(src.runit[a]),
            d.comp(mf.m2[(a, src.unit)], tgt.ten_a(ids[fa], mf.m0)),
        )
        if left != tgt.runit[fa]:
            return Verdict(False, "unit-map-right", (a,), "right unit diagram fails")
        left = d.comp(
            f.on_arrow(src.lunit[a]),
            d.comp(mf.m2[(src.unit, a)], tgt.ten_a(mf.m0, ids[fa])),
        )
        if left != tgt.lunit[fa]:
            return Verdict(False, "unit-map-left", (a,), "left unit diagram fails")
    for a, b in itertools.product(c.objects, repeat=2):
        left = d.comp(f.on_arrow(src.sym[(a, b)]), mf.m2[(a, b)])
        right = d.comp(mf.m2[(b, a)], tgt.sym[(f.on_obj(a), f.on_obj(b))])
        if left != right:
            return Verdict(False, "tensor-map-symmetry", (a, b), "symmetry diagram fails")
    return Verdict(True)


# ------------------------------------------------ linear exponential data


@dataclass(frozen=True)
class LinExpComonadData:
    """A comonad with monoidal structure, duplicators, and erasers.

    d maps each object to the component QA -> QA (x) QA and e to
    QA -> I; qm carries the lax monoidal structure of Q itself.
    """

    comonad: TableComonad
    monoidal: MonoidalStructure
    qm: MonoidalFunctorData
    d: Mapping[str, str]
    e: Mapping[str, str]


def _middle_four(ms: MonoidalStructure, w: str, x: str, y: str, z: str) -> str:
    """(W (x) X) (x) (Y (x) Z) -> (W (x) Y) (x) (X (x) Z), from the
    associator, its inverse, and the symmetry."""
    c = ms.base
    ids = c.identity
    step1 = _two_sided_inverse(c, ms.assoc[(w, x, ms.ten_o(y, z))])
    step2 = ms.ten_a(ids[w], ms.assoc[(x, y, z)])
    step3 = ms.ten_a(ids[w], ms.ten_a(ms.sym[(x, y)], ids[z]))
    step4 = ms.ten_a(ids[w], _two_sided_inverse(c, ms.assoc[(y, x, z)]))
    step5 = ms.assoc[(w, y, ms.ten_o(x, z))]
    out = c.comp(step2, step1)
    out = c.comp(step3, out)
    out = c.comp(step4, out)
    return c.comp(step5, out)


def check_linear_exponential(lec: LinExpComonadData) -> Verdict:
    """Every diagram a storage comonad owes, in dependency order: the
    comonoid structure on each QA first, then naturality of the
    duplicator and eraser, the four interaction diagrams with the
    comultiplication, and finally monoidality of all four
    transformations.  A component whose endpoints make a diagram
    non-composable fails that diagram rather than raising."""
    ms = lec.monoidal
    c = ms.base
    q = lec.comonad.q
    if lec.qm.functor != q or lec.qm.source != ms or lec.qm.target != ms:
        return Verdict(
            False, "structure-shape", (),
            "monoidal functor data does not wrap the comonad endofunctor",
        )
    for a in c.objects:
        if lec.d.get(a) not in c._by_name:
            return Verdict(False, "duplicator-typing", (a,), "d names no arrow")
        if lec.e.get(a) not in c._by_name:
            return Verdict(False, "eraser-typing", (a,), "e names no arrow")
    v = check_comonad(lec.comonad)
    if not v:
        return v
    v = validate_monoidal(ms)
    if not v:
        return v
    v = validate_monoidal_functor(lec.qm)
    if not v:
        return v

    def eq(law: str, witness: tuple, detail: str, lhs: Callable, rhs: Callable) -> Verdict | None:
        try:
            left, right = lhs(), rhs()
        except (ValueError, KeyError):
            return Verdict(False, law, witness, "diagram does not compose")
        if left != right:
            return Verdict(False, law, witness, detail)
        return None

    ids = c.identity
    q_obj, q_arr = q.object_map, q.arrow_map
    eps, delta = lec.comonad.eps.components, lec.comonad.delta.components
    m0, m2 = lec.qm.m0, lec.qm.m2
    unit = ms.unit
    # each QA is a commutative comonoid
    for a in c.objects:
        qa = q_obj[a]
        d_a, e_a = lec.d[a], lec.e[a]
        checks = (
            eq(
                "comonoid-commutativity", (a,), "sym o d is not d",
                lambda: c.comp(ms.sym[(qa, qa)], d_a), lambda: d_a,
            ),
            eq(
                "comonoid-unit", (a, "left"), "left counit law fails",
                lambda: c.comp(ms.lunit[qa], c.comp(ms.ten_a(e_a, ids[qa]), d_a)),
                lambda: ids[qa],
            ),
            eq(
                "comonoid-unit", (a, "right"), "right counit law fails",
                lambda: c.comp(ms.runit[qa], c.comp(ms.ten_a(ids[qa], e_a), d_a)),
                lambda: ids[qa],
            ),
            eq(
                "comonoid-associativity", (a,), "coassociativity fails",
                lambda: c.comp(ms.ten_a(d_a, ids[qa]), d_a),
                lambda: c.comp(
                    ms.assoc[(qa, qa, qa)], c.comp(ms.ten_a(ids[qa], d_a), d_a)
                ),
            ),
        )
        for v in checks:
            if v is not None:
                return v
    # duplicator and eraser are natural
    for f in c.arrows:
        qf = q_arr[f.name]
        v = eq(
            "duplicator-naturality", (f.name,), "d square fails",
            lambda: c.comp(ms.ten_a(qf, qf), lec.d[f.dom]),
            lambda: c.comp(lec.d[f.cod], qf),
        )
        if v is not None:
            return v
        v = eq(
            "eraser-naturality", (f.name,), "e triangle fails",
            lambda: c.comp(lec.e[f.cod], qf), lambda: lec.e[f.dom],
        )
        if v is not None:
            return v
    # interaction with the comultiplication
    for a in c.objects:
        qa = q_obj[a]
        d_a, e_a = lec.d[a], lec.e[a]
        checks = (
            eq(
                "storage-eraser", (a,), "Q e o delta differs from m0 o e",
                lambda: c.comp(q_arr[e_a], delta[a]), lambda: c.comp(m0, e_a),
            ),
            eq(
                "storage-duplicator", (a,), "Q d o delta fails",
                lambda: c.comp(q_arr[d_a], delta[a]),
                lambda: c.comp(
                    m2[(qa, qa)], c.comp(ms.ten_a(delta[a], delta[a]), d_a)
                ),
            ),
            eq(
                "eraser-extraction", (a,), "e_Q o delta differs from e",
                lambda: c.comp(lec.e[qa], delta[a]), lambda: e_a,
            ),
            eq(
                "duplicator-extraction", (a,), "d_Q o delta fails",
                lambda: c.comp(lec.d[qa], delta[a]),
                lambda: c.comp(ms.ten_a(delta[a], delta[a]), d_a),
            ),
        )
        for v in checks:
            if v is not None:
                return v
    # counit, comultiplication, duplicator, and eraser are monoidal
    v = eq(
        "counit-monoidal-unit", (), "eps_I o m0 is not id",
        lambda: c.comp(eps[unit], m0), lambda: ids[unit],
    )
    if v is not None:
        return v
    v = eq(
        "comultiplication-monoidal-unit", (), "delta_I o m0 fails",
        lambda: c.comp(delta[unit], m0), lambda: c.comp(q_arr[m0], m0),
    )
    if v is not None:
        return v
    v = eq(
        "duplicator-monoidal-unit", (), "d_I o m0 fails",
        lambda: c.comp(lec.d[unit], m0),
        lambda: c.comp(
            ms.ten_a(m0, m0), _two_sided_inverse(c, ms.runit[unit])
        ),
    )
    if v is not None:
        return v
    v = eq(
        "eraser-monoidal-unit", (), "e_I o m0 is not id",
        lambda: c.comp(lec.e[unit], m0), lambda: ids[unit],
    )
    if v is not None:
        return v
    for a, b in itertools.product(c.objects, repeat=2):
        qa, qb = q_obj[a], q_obj[b]
        ab = ms.ten_o(a, b)
        checks = (
            eq(
                "counit-monoidal-tensor", (a, b),
                "eps does not respect the tensor mediator",
                lambda: c.comp(eps[ab], m2[(a, b)]),
                lambda: ms.ten_a(eps[a], eps[b]),
            ),
            eq(
                "comultiplication-monoidal-tensor", (a, b),
                "delta does not respect the tensor mediator",
                lambda: c.comp(delta[ab], m2[(a, b)]),
                lambda: c.comp(
                    q_arr[m2[(a, b)]],
                    c.comp(m2[(qa, qb)], ms.ten_a(delta[a], delta[b])),
                ),
            ),
            eq(
                "duplicator-monoidal-tensor", (a, b), "d tensor diagram fails",
                lambda: c.comp(lec.d[ab], m2[(a, b)]),
                lambda: c.comp(
                    ms.ten_a(m2[(a, b)], m2[(a, b)]),
                    c.comp(
                        _middle_four(ms, qa, qa, qb, qb),
                        ms.ten_a(lec.d[a], lec.d[b]),
                    ),
                ),
            ),
            eq(
                "eraser-monoidal-tensor", (a, b), "e tensor diagram fails",
                lambda: c.comp(lec.e[ab], m2[(a, b)]),
                lambda: c.comp(ms.runit[unit], ms.ten_a(lec.e[a], lec.e[b])),
            ),
        )
        for v in checks:
            if v is not None:
                return v
    return Verdict(True)


def semilattice_linexp(ms: MonoidalStructure) -> LinExpComonadData:
    """The identity comonad as a storage comonad on a meet-semilattice;
    every structure map is the unique arrow between its endpoints."""
    c = ms.base

    def unique(a: str, b: str) -> str:
        hom = c.hom(a, b)
        if len(hom) != 1:
            raise ValueError(f"expected exactly one arrow {a} -> {b}")
        return hom[0]

    comonad = identity_comonad(c)
    qm = MonoidalFunctorData(
        ms,
        ms,
        identity_functor(c),
        c.identity[ms.unit],
        {(a, b): c.identity[ms.ten_o(a, b)] for a in c.objects for b in c.objects},
    )
    d = {a: unique(a, ms.ten_o(a, a)) for a in c.objects}
    e = {a: unique(a, ms.unit) for a in c.objects}
    return LinExpComonadData(comonad, ms, qm, d, e)


# ------------------------------------------- products in Kleisli categories


def _split_cokleisli_name(name: str) -> tuple[str, str]:
    if not (name.startswith("k[") and name.endswith("]")):
        raise ValueError(f"not a Kleisli arrow name: {name!r}")
    underlying, tag = name[2:-1].rsplit(";", 1)
    return underlying, tag


def _table_comonad_products(m: TableComonad) -> Verdict:
    base = m.base
    k = cokleisli_build(m)
    q_obj = m.q.object_map
    eps = m.eps.components
    terminals = find_universal(base, "terminal")
    if not terminals:
        raise ValueError("base category has no terminal object")
    top = terminals[0].apex
    for c_obj in k.objects:
        if len(k.hom(c_obj, top)) != 1:
            return Verdict(
                False, "kleisli-terminal", (c_obj,),
                "co-Kleisli arrows into the terminal are not unique",
            )
    for a, b in itertools.product(base.objects, repeat=2):
        ws = find_universal(base, "product", a, b)
        if not ws:
            raise ValueError(f"base category has no product of {a} and {b}")
        apex, (leg1, leg2) = ws[0].apex, ws[0].legs
        p1 = cokleisli_arrow_name(base.comp(leg1, eps[apex]), apex)
        p2 = cokleisli_arrow_name(base.comp(leg2, eps[apex]), apex)
        for c_obj in k.objects:
            for f_name in k.hom(c_obj, a):
                f_u, _ = _split_cokleisli_name(f_name)
                for g_name in k.hom(c_obj, b):
                    g_u, _ = _split_cokleisli_name(g_name)
                    mediating = [
                        m_name
                        for m_name in k.hom(c_obj, apex)
                        if k.comp(p1, m_name) == f_name
                        and k.comp(p2, m_name) == g_name
                    ]
                    if len(mediating) != 1:
                        return Verdict(
                            False, "kleisli-product-uniqueness",
                            (a, b, c_obj, f_name, g_name),
                            f"{len(mediating)} mediating arrows, need exactly one",
                        )
                    paired = [
                        h
                        for h in base.hom(q_obj[c_obj], apex)
                        if base.comp(leg1, h) == f_u and base.comp(leg2, h) == g_u
                    ]
                    if (
                        len(paired) != 1
                        or mediating[0] != cokleisli_arrow_name(paired[0], c_obj)
                    ):
                        return Verdict(
                            False, "kleisli-pairing", (a, b, c_obj, f_name, g_name),
                            "mediating arrow is not the transposed pairing",
                        )
    return Verdict(True)


def check_kleisli_cone(
    c: SetComonad,
    a: tuple,
    b: tuple,
    cone: tuple,
    f: Callable,
    g: Callable,
    pairing: Callable,
) -> Verdict:
    """One instance of the co-Kleisli product property, elementwise.

    The candidate pairing must mediate the cone (f, g) through the
    projections pi_i o eps, and must be the only map that does."""
    apex = tuple(itertools.product(a, b))
    qc = c.q_obj(cone)

    def through(m: Callable, pick: Callable) -> Callable:
        return lambda q: pick(c.eps(c.q_map(m)(c.delta(q))))

    first = through(pairing, lambda p: p[0])
    second = through(pairing, lambda p: p[1])
    for q in qc:
        if first(q) != f(q) or second(q) != g(q):
            return Verdict(
                False, "kleisli-pairing", (a, b, cone, q),
                "pairing does not mediate the cone",
            )
    count = 0
    for m in all_functions(qc, apex):
        if all(
            through(m, lambda p: p[0])(q) == f(q)
            and through(m, lambda p: p[1])(q) == g(q)
            for q in qc
        ):
            count += 1
    if count != 1:
        return Verdict(
            False, "kleisli-product-uniqueness", (a, b, cone),
            f"{count} mediating arrows, need exactly one",
        )
    return Verdict(True)


def _set_comonad_products(c: SetComonad) -> Verdict:
    singletons = [x for x in c.carriers if len(x) == 1]
    if singletons:
        one = singletons[0]
        for cone in c.carriers:
            count = sum(1 for _ in all_functions(c.q_obj(cone), one))
            if count != 1:
                return Verdict(
                    False, "kleisli-terminal", (cone,),
                    "co-Kleisli arrows into the point are not unique",
                )
    for a, b in itertools.product(c.carriers, repeat=2):
        for cone in c.carriers:
            qc = c.q_obj(cone)
            for f in all_functions(qc, a):
                for g in all_functions(qc, b):
                    v = check_kleisli_cone(
                        c, a, b, cone, f, g, lambda q, f=f, g=g: (f(q), g(q))
                    )
                    if not v:
                        return v
    return Verdict(True)


def kleisli_comonad_products(c: TableComonad | SetComonad) -> Verdict:
    """Binary products and a terminal object in the co-Kleisli category.

    The projections are the counit followed by the base projections
    and the pairing is the transposed base pairing; the universal
    property is checked against every cone by exhaustive search."""
    if isinstance(c, TableComonad):
        return _table_comonad_products(c)
    return _set_comonad_products(c)
