"""Finite categories as explicit composition tables.

A category is stored extensionally: object names, named arrows with
endpoints, an identity arrow per object, and a total composition table
keyed ``(g, f)`` for the composite ``g after f``.  Everything downstream
is exhaustive checking over these tables: axiom validation, arrow
classification (monic/epic/iso and their split variants), searches for
universal constructions by counting mediating arrows, functor and natural
transformation validation, adjunction checking via explicit hom-set
bijections, and enumeration of natural families between hom-functors.

Builders cover the stock examples used in the tests and the command-line
tool: finite posets (chains, divisor orders), one-object categories from
monoid tables, opposite and product categories, and the category of all
subsets of a small universe with every function between them.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator

from .finset import DEFAULT_CAP, FnTable, SizeOverflow, all_functions


# ------------------------------------------------------------- core data


@dataclass(frozen=True)
class Arrow:
    """A named arrow with its endpoints."""

    name: str
    dom: str
    cod: str


@dataclass(frozen=True)
class FinCategory:
    """A finite category given by explicit tables.

    ``compose`` is keyed ``(g, f)`` and holds the name of ``g after f``.
    The tables are taken at face value; run ``validate_category`` to check
    the axioms.
    """

    objects: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    identity: dict[str, str]
    compose: dict[tuple[str, str], str]

    @cached_property
    def _by_name(self) -> dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    @cached_property
    def _by_dom(self) -> dict[str, tuple[Arrow, ...]]:
        out: dict[str, list[Arrow]] = {o: [] for o in self.objects}
        for a in self.arrows:
            out.setdefault(a.dom, []).append(a)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def _homs(self) -> dict[tuple[str, str], tuple[str, ...]]:
        out: dict[tuple[str, str], list[str]] = {}
        for a in self.arrows:
            out.setdefault((a.dom, a.cod), []).append(a.name)
        return {k: tuple(v) for k, v in out.items()}

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise ValueError(f"no arrow named {name!r}") from None

    def dom(self, name: str) -> str:
        return self.arrow(name).dom

    def cod(self, name: str) -> str:
        return self.arrow(name).cod

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        return self._homs.get((a, b), ())

    def comp(self, g: str, f: str) -> str:
        """The composite ``g after f`` from the table."""
        try:
            return self.compose[(g, f)]
        except KeyError:
            raise ValueError(f"no composite for {g!r} after {f!r}") from None

    def id_of(self, obj: str) -> str:
        try:
            return self.identity[obj]
        except KeyError:
            raise ValueError(f"no identity for object {obj!r}") from None


@dataclass(frozen=True)
class Verdict:
    """Outcome of a table check; law and witness locate the first failure."""

    ok: bool
    law: str = ""
    witness: tuple[str, ...] = ()
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


# ------------------------------------------------------------ validation


def validate_category(c: FinCategory) -> Verdict:
    """Check the category axioms, reporting the first violation found."""
    seen_objects = set()
    for o in c.objects:
        if o in seen_objects:
            return Verdict(False, "objects", (o,), "duplicate object name")
        seen_objects.add(o)

    seen_arrows = set()
    for a in c.arrows:
        if a.name in seen_arrows:
            return Verdict(False, "arrows", (a.name,), "duplicate arrow name")
        seen_arrows.add(a.name)
        if a.dom not in seen_objects or a.cod not in seen_objects:
            return Verdict(False, "arrows", (a.name,), "endpoint is not an object")

    for o in c.objects:
        i = c.identity.get(o)
        if i is None:
            return Verdict(False, "identity", (o,), "object has no identity arrow")
        ia = c._by_name.get(i)
        if ia is None or ia.dom != o or ia.cod != o:
            return Verdict(False, "identity", (o, str(i)), "identity is not an endo-arrow")
    for o in c.identity:
        if o not in seen_objects:
            return Verdict(False, "identity", (o,), "identity entry for a non-object")

    for (g, f), gf in c.compose.items():
        fa, ga, ca = c._by_name.get(f), c._by_name.get(g), c._by_name.get(gf)
        if fa is None or ga is None or ca is None:
            return Verdict(False, "composition-table", (g, f), "entry names a missing arrow")
        if fa.cod != ga.dom:
            return Verdict(False, "composition-table", (g, f), "pair is not composable")
        if ca.dom != fa.dom or ca.cod != ga.cod:
            return Verdict(False, "composition-table", (g, f, gf), "composite has wrong endpoints")

    for f in c.arrows:
        for g in c._by_dom.get(f.cod, ()):
            if (g.name, f.name) not in c.compose:
                return Verdict(False, "totality", (g.name, f.name), "composable pair has no entry")

    for f in c.arrows:
        if c.compose[(f.name, c.identity[f.dom])] != f.name:
            return Verdict(False, "unit", (f.name, c.identity[f.dom]), "right unit law fails")
        if c.compose[(c.identity[f.cod], f.name)] != f.name:
            return Verdict(False, "unit", (c.identity[f.cod], f.name), "left unit law fails")

    table = c.compose
    for f in c.arrows:
        for g in c._by_dom[f.cod]:
            gf = table[(g.name, f.name)]
            for h in c._by_dom[g.cod]:
                if table[(h.name, gf)] != table[(table[(h.name, g.name)], f.name)]:
                    return Verdict(
                        False, "associativity", (h.name, g.name, f.name),
                        "h(gf) differs from (hg)f",
                    )
    return Verdict(True)


# -------------------------------------------------- arrow classification


@dataclass(frozen=True)
class ArrowFlags:
    """Cancellation and inverse properties of one arrow."""

    monic: bool
    epic: bool
    iso: bool
    split_monic: bool
    split_epic: bool


def classify_arrow(c: FinCategory, f: str) -> ArrowFlags:
    """Decide each property by exhaustive search over the tables."""
    fa = c.arrow(f)

    monic = True
    for x in c.objects:
        into = c.hom(x, fa.dom)
        for g in into:
            for h in into:
                if g != h and c.comp(f, g) == c.comp(f, h):
                    monic = False
                    break
            if not monic:
                break
        if not monic:
            break

    epic = True
    for x in c.objects:
        outof = c.hom(fa.cod, x)
        for g in outof:
            for h in outof:
                if g != h and c.comp(g, f) == c.comp(h, f):
                    epic = False
                    break
            if not epic:
                break
        if not epic:
            break

    retractions = [
        g for g in c.hom(fa.cod, fa.dom) if c.comp(g, f) == c.identity[fa.dom]
    ]
    sections = [
        g for g in c.hom(fa.cod, fa.dom) if c.comp(f, g) == c.identity[fa.cod]
    ]
    iso = any(g in sections for g in retractions)
    return ArrowFlags(monic, epic, iso, bool(retractions), bool(sections))


def is_iso(c: FinCategory, f: str) -> bool:
    fa = c.arrow(f)
    return any(
        c.comp(g, f) == c.identity[fa.dom] and c.comp(f, g) == c.identity[fa.cod]
        for g in c.hom(fa.cod, fa.dom)
    )


# ------------------------------------------------- universal constructions


@dataclass(frozen=True)
class Witness:
    """An apex object together with its structure legs."""

    apex: str
    legs: tuple[str, ...] = ()


_KINDS = ("initial", "terminal", "product", "coproduct", "equalizer", "pullback")


def find_universal(c: FinCategory, kind: str, *args: str) -> tuple[Witness, ...]:
    """All witnesses of the named universal construction, in table order.

    ``product``/``coproduct`` take two object names, ``equalizer`` a
    parallel pair of arrow names, ``pullback`` two arrow names with a
    common codomain.
    """
    match kind:
        case "initial":
            _need_args(kind, args, 0)
            return tuple(
                Witness(p)
                for p in c.objects
                if all(len(c.hom(p, x)) == 1 for x in c.objects)
            )
        case "terminal":
            _need_args(kind, args, 0)
            return tuple(
                Witness(p)
                for p in c.objects
                if all(len(c.hom(x, p)) == 1 for x in c.objects)
            )
        case "product":
            a, b = _need_objects(c, kind, args, 2)
            return tuple(_products(c, a, b))
        case "coproduct":
            a, b = _need_objects(c, kind, args, 2)
            return tuple(_coproducts(c, a, b))
        case "equalizer":
            f, g = _need_args(kind, args, 2)
            fa, ga = c.arrow(f), c.arrow(g)
            if (fa.dom, fa.cod) != (ga.dom, ga.cod):
                raise ValueError(f"{f!r} and {g!r} are not a parallel pair")
            return tuple(_equalizers(c, fa, ga))
        case "pullback":
            f, g = _need_args(kind, args, 2)
            fa, ga = c.arrow(f), c.arrow(g)
            if fa.cod != ga.cod:
                raise ValueError(f"{f!r} and {g!r} do not share a codomain")
            return tuple(_pullbacks(c, fa, ga))
        case _:
            raise ValueError(f"unknown construction {kind!r}; expected one of {_KINDS}")


def _need_args(kind: str, args: tuple[str, ...], n: int):
    if len(args) != n:
        raise ValueError(f"{kind} takes {n} argument(s), got {len(args)}")
    return args


def _need_objects(c: FinCategory, kind: str, args: tuple[str, ...], n: int):
    _need_args(kind, args, n)
    for o in args:
        if o not in c.objects:
            raise ValueError(f"no object named {o!r}")
    return args


def _bijects(c: FinCategory, probes: Iterable[str], image: Callable, targets: int) -> bool:
    """Does ``image`` map the probe arrows bijectively onto ``targets`` many values?"""
    seen = set()
    n = 0
    for m in probes:
        v = image(m)
        if v in seen:
            return False
        seen.add(v)
        n += 1
    return n == targets


def _products(c: FinCategory, a: str, b: str) -> Iterator[Witness]:
    for p in c.objects:
        for p1 in c.hom(p, a):
            for p2 in c.hom(p, b):
                if all(
                    _bijects(
                        c,
                        c.hom(x, p),
                        lambda m: (c.comp(p1, m), c.comp(p2, m)),
                        len(c.hom(x, a)) * len(c.hom(x, b)),
                    )
                    for x in c.objects
                ):
                    yield Witness(p, (p1, p2))


def _coproducts(c: FinCategory, a: str, b: str) -> Iterator[Witness]:
    for p in c.objects:
        for i1 in c.hom(a, p):
            for i2 in c.hom(b, p):
                if all(
                    _bijects(
                        c,
                        c.hom(p, x),
                        lambda m: (c.comp(m, i1), c.comp(m, i2)),
                        len(c.hom(a, x)) * len(c.hom(b, x)),
                    )
                    for x in c.objects
                ):
                    yield Witness(p, (i1, i2))


def _equalizers(c: FinCategory, fa: Arrow, ga: Arrow) -> Iterator[Witness]:
    f, g = fa.name, ga.name
    for p in c.objects:
        for e in c.hom(p, fa.dom):
            if c.comp(f, e) != c.comp(g, e):
                continue
            if all(
                _bijects(
                    c,
                    c.hom(x, p),
                    lambda m: c.comp(e, m),
                    sum(1 for m in c.hom(x, fa.dom) if c.comp(f, m) == c.comp(g, m)),
                )
                for x in c.objects
            ):
                yield Witness(p, (e,))


def _pullbacks(c: FinCategory, fa: Arrow, ga: Arrow) -> Iterator[Witness]:
    f, g = fa.name, ga.name
    for p in c.objects:
        for p1 in c.hom(p, fa.dom):
            for p2 in c.hom(p, ga.dom):
                if c.comp(f, p1) != c.comp(g, p2):
                    continue
                if all(
                    _bijects(
                        c,
                        c.hom(x, p),
                        lambda m: (c.comp(p1, m), c.comp(p2, m)),
                        sum(
                            1
                            for m1 in c.hom(x, fa.dom)
                            for m2 in c.hom(x, ga.dom)
                            if c.comp(f, m1) == c.comp(g, m2)
                        ),
                    )
                    for x in c.objects
                ):
                    yield Witness(p, (p1, p2))


_LEGS_OUT = {"terminal", "product", "equalizer", "pullback"}
_LEGS_IN = {"initial", "coproduct"}


def connecting_isos(c: FinCategory, kind: str, w1: Witness, w2: Witness) -> tuple[str, ...]:
    """Isos between two witnesses that carry the legs of one to the other."""
    if kind not in _LEGS_OUT | _LEGS_IN:
        raise ValueError(f"unknown construction {kind!r}")
    out: list[str] = []
    for j in c.hom(w1.apex, w2.apex):
        if not is_iso(c, j):
            continue
        if kind in _LEGS_OUT:
            if all(c.comp(l2, j) == l1 for l1, l2 in zip(w1.legs, w2.legs)):
                out.append(j)
        else:
            if all(c.comp(j, l1) == l2 for l1, l2 in zip(w1.legs, w2.legs)):
                out.append(j)
    return tuple(out)


# ---------------------------------------------------------------- builders


def opposite(c: FinCategory) -> FinCategory:
    """Reverse every arrow; composites read from the swapped key."""
    return FinCategory(
        objects=c.objects,
        arrows=tuple(Arrow(a.name, a.cod, a.dom) for a in c.arrows),
        identity=dict(c.identity),
        compose={(g, f): v for (f, g), v in c.compose.items()},
    )


def product_category(c: FinCategory, d: FinCategory) -> FinCategory:
    """Objects and arrows are pairs; everything works componentwise."""

    def oname(a: str, b: str) -> str:
        return f"({a},{b})"

    arrows = tuple(
        Arrow(oname(f.name, g.name), oname(f.dom, g.dom), oname(f.cod, g.cod))
        for f in c.arrows
        for g in d.arrows
    )
    compose = {}
    for (g1, f1), v1 in c.compose.items():
        for (g2, f2), v2 in d.compose.items():
            compose[(oname(g1, g2), oname(f1, f2))] = oname(v1, v2)
    return FinCategory(
        objects=tuple(oname(a, b) for a in c.objects for b in d.objects),
        arrows=arrows,
        identity={
            oname(a, b): oname(c.identity[a], d.identity[b])
            for a in c.objects
            for b in d.objects
        },
        compose=compose,
    )


def poset_category(elements: Iterable[str], order: Callable[[str, str], bool]) -> FinCategory:
    """The category of a finite poset: one arrow ``x<=y`` whenever x <= y.

    ``order`` must be reflexive and transitive on the elements; violations
    raise ValueError because the tables could not be completed.
    """
    elems = tuple(elements)
    for x in elems:
        if not order(x, x):
            raise ValueError(f"order is not reflexive at {x!r}")
    arrows = tuple(
        Arrow(f"{x}<={y}", x, y) for x in elems for y in elems if order(x, y)
    )
    compose: dict[tuple[str, str], str] = {}
    for f in arrows:
        for g in arrows:
            if f.cod != g.dom:
                continue
            if not order(f.dom, g.cod):
                raise ValueError(
                    f"order is not transitive: {f.dom!r} <= {f.cod!r} <= {g.cod!r}"
                )
            compose[(g.name, f.name)] = f"{f.dom}<={g.cod}"
    return FinCategory(
        objects=elems,
        arrows=arrows,
        identity={x: f"{x}<={x}" for x in elems},
        compose=compose,
    )


def chain_category(n: int) -> FinCategory:
    """The linear order 0 <= 1 <= ... <= n-1 as a category."""
    if n < 0:
        raise ValueError("chain length must be non-negative")
    return poset_category(
        (str(i) for i in range(n)), lambda x, y: int(x) <= int(y)
    )


def divisor_category(n: int) -> FinCategory:
    """The divisors of n ordered by divisibility."""
    if n < 1:
        raise ValueError("need a positive integer")
    divs = [str(d) for d in range(1, n + 1) if n % d == 0]
    return poset_category(divs, lambda x, y: int(y) % int(x) == 0)


def monoid_category(
    elements: Iterable[str], unit: str, mul: Callable[[str, str], str]
) -> FinCategory:
    """A monoid as a one-object category; ``mul(g, f)`` is ``g after f``."""
    elems = tuple(elements)
    if unit not in elems:
        raise ValueError(f"unit {unit!r} is not an element")
    compose = {}
    for f in elems:
        for g in elems:
            v = mul(g, f)
            if v not in elems:
                raise ValueError(f"product {v!r} of {g!r} and {f!r} is not an element")
            compose[(g, f)] = v
    return FinCategory(
        objects=("*",),
        arrows=tuple(Arrow(e, "*", "*") for e in elems),
        identity={"*": unit},
        compose=compose,
    )


def subset_name(elems: Iterable[int]) -> str:
    return "{" + ",".join(str(e) for e in sorted(elems)) + "}"


def finset_arrow_name(t: FnTable) -> str:
    """The canonical arrow name for a function table between subsets."""
    pairs = ",".join(f"{x}>{v}" for x, v in zip(t.dom, t.values))
    return f"[{pairs}]:{subset_name(t.dom)}->{subset_name(t.cod)}"


def fragment_tables(size: int, cap: int = DEFAULT_CAP) -> dict[str, FnTable]:
    """Every function between subsets of ``range(size)``, keyed by arrow name."""
    subsets: list[tuple[int, ...]] = []
    universe = list(range(size))
    for mask in range(1 << size):
        subsets.append(tuple(x for x in universe if mask >> x & 1))
    subsets.sort(key=lambda s: (len(s), s))
    out: dict[str, FnTable] = {}
    for dom in subsets:
        for cod in subsets:
            for t in all_functions(dom, cod, cap):
                out[finset_arrow_name(t)] = t
    return out


def finset_fragment(size: int, cap: int = DEFAULT_CAP) -> FinCategory:
    """The category of all subsets of ``range(size)`` and all functions."""
    if size < 0:
        raise ValueError("universe size must be non-negative")
    tables = fragment_tables(size, cap)
    by_key = {(t.dom, t.cod, t.values): name for name, t in tables.items()}
    arrows = tuple(
        Arrow(name, subset_name(t.dom), subset_name(t.cod))
        for name, t in tables.items()
    )
    compose = {}
    for fname, f in tables.items():
        for gname, g in tables.items():
            if f.cod != g.dom:
                continue
            gf = tuple(g(v) for v in f.values)
            compose[(gname, fname)] = by_key[(f.dom, g.cod, gf)]
    subsets = sorted(
        {t.dom for t in tables.values()} | {t.cod for t in tables.values()},
        key=lambda s: (len(s), s),
    )
    return FinCategory(
        objects=tuple(subset_name(s) for s in subsets),
        arrows=arrows,
        identity={
            subset_name(s): finset_arrow_name(FnTable(s, s, s)) for s in subsets
        },
        compose=compose,
    )


# ------------------------------------------------------------------- JSON


def category_to_json(c: FinCategory) -> str:
    """A stable JSON rendering; composites are sorted by their key pair."""
    doc = {
        "objects": list(c.objects),
        "arrows": [{"id": a.name, "dom": a.dom, "cod": a.cod} for a in c.arrows],
        "id": {o: c.identity[o] for o in c.objects},
        "compose": [
            [g, f, v] for (g, f), v in sorted(c.compose.items())
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=False)


def category_from_json(text: str) -> FinCategory:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"not valid JSON: {e}") from None
    try:
        objects = tuple(str(o) for o in doc["objects"])
        arrows = tuple(
            Arrow(str(a["id"]), str(a["dom"]), str(a["cod"])) for a in doc["arrows"]
        )
        identity = {str(k): str(v) for k, v in doc["id"].items()}
        compose = {
            (str(g), str(f)): str(v) for g, f, v in doc["compose"]
        }
    except (KeyError, TypeError, ValueError) as e:
        raise ValueError(f"malformed category document: {e}") from None
    return FinCategory(objects, arrows, identity, compose)


# ----------------------------------------------- functors and naturality


@dataclass(frozen=True)
class FunctorData:
    """A functor as explicit object and arrow tables."""

    source: FinCategory
    target: FinCategory
    object_map: dict[str, str]
    arrow_map: dict[str, str]

    def on_obj(self, o: str) -> str:
        try:
            return self.object_map[o]
        except KeyError:
            raise ValueError(f"functor undefined on object {o!r}") from None

    def on_arrow(self, f: str) -> str:
        try:
            return self.arrow_map[f]
        except KeyError:
            raise ValueError(f"functor undefined on arrow {f!r}") from None


def identity_functor(c: FinCategory) -> FunctorData:
    return FunctorData(
        c, c, {o: o for o in c.objects}, {a.name: a.name for a in c.arrows}
    )


def compose_functors(g: FunctorData, f: FunctorData) -> FunctorData:
    """The composite ``g after f`` of two functor tables."""
    if f.target != g.source:
        raise ValueError("functors are not composable")
    return FunctorData(
        f.source,
        g.target,
        {o: g.on_obj(f.on_obj(o)) for o in f.source.objects},
        {a.name: g.on_arrow(f.on_arrow(a.name)) for a in f.source.arrows},
    )


def validate_functor(fd: FunctorData) -> Verdict:
    src, tgt = fd.source, fd.target
    for o in src.objects:
        if o not in fd.object_map:
            return Verdict(False, "functor-totality", (o,), "no image for object")
        if fd.object_map[o] not in tgt.objects:
            return Verdict(False, "functor-typing", (o,), "object image is not a target object")
    for a in src.arrows:
        fa = fd.arrow_map.get(a.name)
        if fa is None:
            return Verdict(False, "functor-totality", (a.name,), "no image for arrow")
        im = tgt._by_name.get(fa)
        if im is None:
            return Verdict(False, "functor-typing", (a.name, fa), "arrow image missing")
        if im.dom != fd.object_map[a.dom] or im.cod != fd.object_map[a.cod]:
            return Verdict(False, "functor-typing", (a.name, fa), "image endpoints disagree")
    for o in src.objects:
        if fd.arrow_map[src.identity[o]] != tgt.identity[fd.object_map[o]]:
            return Verdict(False, "functor-identity", (o,), "identity not preserved")
    for (g, f), v in src.compose.items():
        if tgt.comp(fd.arrow_map[g], fd.arrow_map[f]) != fd.arrow_map[v]:
            return Verdict(False, "functor-composition", (g, f), "composite not preserved")
    return Verdict(True)


@dataclass(frozen=True)
class NatTransData:
    """A natural transformation between two parallel functor tables."""

    f: FunctorData
    g: FunctorData
    components: dict[str, str]


def validate_natural(t: NatTransData) -> Verdict:
    f, g = t.f, t.g
    if f.source != g.source or f.target != g.target:
        return Verdict(False, "nat-shape", (), "functors are not parallel")
    src, tgt = f.source, f.target
    for o in src.objects:
        comp = t.components.get(o)
        if comp is None:
            return Verdict(False, "nat-totality", (o,), "no component at object")
        arr = tgt._by_name.get(comp)
        if arr is None or arr.dom != f.on_obj(o) or arr.cod != g.on_obj(o):
            return Verdict(False, "nat-typing", (o, str(comp)), "component has wrong endpoints")
    for a in src.arrows:
        lhs = tgt.comp(t.components[a.cod], f.on_arrow(a.name))
        rhs = tgt.comp(g.on_arrow(a.name), t.components[a.dom])
        if lhs != rhs:
            return Verdict(False, "naturality", (a.name,), "square does not commute")
    return Verdict(True)


# ------------------------------------------------------------ adjunctions


@dataclass(frozen=True)
class AdjunctionData:
    """An adjunction F -| G via explicit hom-set bijections.

    ``theta[(a, b)]`` maps each arrow of ``hom_C(a, G b)`` to one of
    ``hom_D(F a, b)``, where F goes C -> D and G comes back.
    """

    f: FunctorData
    g: FunctorData
    theta: dict[tuple[str, str], dict[str, str]]


@dataclass(frozen=True)
class AdjunctionVerdict:
    ok: bool
    law: str = ""
    witness: tuple[str, ...] = ()
    detail: str = ""
    unit: dict[str, str] | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_adjunction(a: AdjunctionData) -> AdjunctionVerdict:
    """Validate the bijections, their naturality, and the induced unit.

    On success the verdict carries the unit components, read off as the
    preimage of each identity under the bijection.
    """
    f, g = a.f, a.g
    if f.source != g.target or f.target != g.source:
        return AdjunctionVerdict(False, "adjunction-shape", (), "functors do not oppose")
    for fd, tag in ((f, "left"), (g, "right")):
        v = validate_functor(fd)
        if not v.ok:
            return AdjunctionVerdict(False, v.law, v.witness, f"{tag} functor: {v.detail}")
    cc, dd = f.source, f.target

    for x in cc.objects:
        for y in dd.objects:
            table = a.theta.get((x, y))
            if table is None:
                return AdjunctionVerdict(False, "theta-domain", (x, y), "no bijection at this pair")
            left = cc.hom(x, g.on_obj(y))
            right = dd.hom(f.on_obj(x), y)
            if set(table) != set(left):
                return AdjunctionVerdict(
                    False, "theta-bijection", (x, y), "keys differ from hom(x, Gy)"
                )
            values = list(table[k] for k in left)
            if len(set(values)) != len(values) or set(values) != set(right):
                return AdjunctionVerdict(
                    False, "theta-bijection", (x, y), "values do not biject onto hom(Fx, y)"
                )

    # theta(G h . k . g) must equal h . theta(k) . F g for all composable g, h
    for (x, y), table in a.theta.items():
        for k, tk in table.items():
            for garr in cc.arrows:
                if garr.cod != x:
                    continue
                for harr in dd.arrows:
                    if harr.dom != y:
                        continue
                    lhs_key = cc.comp(g.on_arrow(harr.name), cc.comp(k, garr.name))
                    lhs = a.theta[(garr.dom, harr.cod)][lhs_key]
                    rhs = dd.comp(harr.name, dd.comp(tk, f.on_arrow(garr.name)))
                    if lhs != rhs:
                        return AdjunctionVerdict(
                            False, "theta-naturality", (x, y, k, garr.name, harr.name),
                            "bijection is not natural",
                        )

    unit: dict[str, str] = {}
    for x in cc.objects:
        fx = f.on_obj(x)
        table = a.theta[(x, fx)]
        ident = dd.identity[fx]
        pre = [k for k, v in table.items() if v == ident]
        unit[x] = pre[0]

    # each unit component must be a universal arrow from x to G
    for x in cc.objects:
        for y in dd.objects:
            for k in cc.hom(x, g.on_obj(y)):
                mediating = [
                    m
                    for m in dd.hom(f.on_obj(x), y)
                    if cc.comp(g.on_arrow(m), unit[x]) == k
                ]
                if len(mediating) != 1:
                    return AdjunctionVerdict(
                        False, "unit-universality", (x, y, k),
                        f"{len(mediating)} mediating arrows, need exactly one",
                    )
    return AdjunctionVerdict(True, unit=unit)


# ----------------------------------------------------- hom-functor families


def yoneda_family(c: FinCategory, a: str, b: str, f: str) -> dict[str, dict[str, str]]:
    """The natural family hom(a,-) -> hom(b,-) induced by f: b -> a."""
    fa = c.arrow(f)
    if fa.dom != b or fa.cod != a:
        raise ValueError(f"{f!r} does not go {b!r} -> {a!r}")
    return {
        x: {g: c.comp(g, f) for g in c.hom(a, x)} for x in c.objects
    }


def yoneda_enumerate(
    c: FinCategory, a: str, b: str, cap: int = DEFAULT_CAP
) -> tuple[dict[str, dict[str, str]], ...]:
    """Every natural family hom(a,-) -> hom(b,-), by exhaustive search.

    The raw family space is the product over objects x of all maps
    hom(a,x) -> hom(b,x); a SizeOverflow guards against enumerating it
    when it is larger than ``cap``.
    """
    if a not in c.objects or b not in c.objects:
        raise ValueError("both endpoints must be objects")
    space = 1
    for x in c.objects:
        n, m = len(c.hom(a, x)), len(c.hom(b, x))
        space *= m**n if n else 1
        if space > cap:
            raise SizeOverflow(space, cap)
    if space == 0:
        return ()

    per_object: list[list[dict[str, str]]] = []
    for x in c.objects:
        dom = c.hom(a, x)
        cod = c.hom(b, x)
        if dom and not cod:
            return ()
        per_object.append(
            [dict(zip(dom, choice)) for choice in itertools.product(cod, repeat=len(dom))]
        )

    families = []
    for combo in itertools.product(*per_object):
        t = dict(zip(c.objects, combo))
        if _is_natural_family(c, a, t):
            families.append(t)
    return tuple(families)


def _is_natural_family(c: FinCategory, a: str, t: dict[str, dict[str, str]]) -> bool:
    for h in c.arrows:
        for g in c.hom(a, h.dom):
            if t[h.cod][c.comp(h.name, g)] != c.comp(h.name, t[h.dom][g]):
                return False
    return True
