"""Relational semantics for the multiplicative fragment of linear proofs.

Objects are finite carriers (tuples of elements), morphisms are Boolean
matrices indexed by carrier positions.  Tensor is the cartesian product
of carriers with the Kronecker product on matrices, the unit is a
one-element carrier, and the linear function space A -o B is carried by
the product A x B, with application relating ((a, b), a') to b' exactly
when a = a' and b = b'.

A sequent's hypotheses are interpreted as a left-nested product and a
checked proof becomes a matrix from that product to the conclusion
carrier, rule by rule.  Hypothesis bookkeeping in proofs is by
multiset, so a rule node does not always pin down which copy of a
repeated formula each premise consumed; where a node carries no
explicit split annotation the translation routes formulas to premises
greedily from the left, which realizes one of the checker-approved
assignments and is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .finset import DEFAULT_CAP, SizeOverflow
from .formulas import Atom, Formula, LImpl, LTensor, Sequent
from .proofs import ProofTree, check_proof, eliminate_lolli_l


class UnsupportedRule(Exception):
    """Proof material outside the tensor-lolli fragment."""


# ---------------------------------------------------------------- morphisms


@dataclass(frozen=True, eq=False)
class RelMor:
    """A relation as a Boolean matrix between enumerated carriers."""

    dom: tuple
    cod: tuple
    matrix: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.matrix, dtype=bool)
        if arr.shape != (len(self.dom), len(self.cod)):
            raise ValueError(
                f"matrix shape {arr.shape} does not index "
                f"{len(self.dom)} x {len(self.cod)} carriers"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    def pairs(self) -> Iterator[tuple]:
        """Related (input, output) pairs in carrier order."""
        for i, j in zip(*np.nonzero(self.matrix)):
            yield self.dom[int(i)], self.cod[int(j)]

    @property
    def is_function(self) -> bool:
        return bool((self.matrix.sum(axis=1) == 1).all())

    @property
    def is_bijection(self) -> bool:
        return self.is_function and bool((self.matrix.sum(axis=0) == 1).all())


def rel_equal(r: RelMor, s: RelMor) -> bool:
    return r.dom == s.dom and r.cod == s.cod and bool((r.matrix == s.matrix).all())


def rel_from_pairs(dom: tuple, cod: tuple, pairs) -> RelMor:
    rank_d = {x: i for i, x in enumerate(dom)}
    rank_c = {y: j for j, y in enumerate(cod)}
    matrix = np.zeros((len(dom), len(cod)), dtype=bool)
    for x, y in pairs:
        matrix[rank_d[x], rank_c[y]] = True
    return RelMor(dom, cod, matrix)


def rel_from_fn(dom: tuple, cod: tuple, fn: Callable) -> RelMor:
    """Graph of a total function as a relation."""
    return rel_from_pairs(dom, cod, ((x, fn(x)) for x in dom))


def identity_rel(carrier: tuple) -> RelMor:
    return RelMor(carrier, carrier, np.eye(len(carrier), dtype=bool))


def compose_rel(s: RelMor, r: RelMor) -> RelMor:
    """s after r: x relates to z when some y joins them."""
    if r.cod != s.dom:
        raise ValueError("cannot compose: middle carriers differ")
    matrix = (r.matrix[:, :, None] & s.matrix[None, :, :]).any(axis=1)
    return RelMor(r.dom, s.cod, matrix)


def converse_rel(r: RelMor) -> RelMor:
    return RelMor(r.cod, r.dom, r.matrix.T)


def tensor_rel(r: RelMor, s: RelMor) -> RelMor:
    dom = tuple(itertools.product(r.dom, s.dom))
    cod = tuple(itertools.product(r.cod, s.cod))
    return RelMor(dom, cod, np.kron(r.matrix, s.matrix).astype(bool))


UNIT_CARRIER: tuple = ((),)


def assoc_rel(a: tuple, b: tuple, c: tuple) -> RelMor:
    """Re-association bijection A x (B x C) -> (A x B) x C."""
    dom = tuple(itertools.product(a, itertools.product(b, c)))
    cod = tuple(itertools.product(itertools.product(a, b), c))
    return rel_from_fn(dom, cod, lambda e: ((e[0], e[1][0]), e[1][1]))


def left_unit_rel(a: tuple) -> RelMor:
    dom = tuple(itertools.product(UNIT_CARRIER, a))
    return rel_from_fn(dom, a, lambda e: e[1])


def right_unit_rel(a: tuple) -> RelMor:
    dom = tuple(itertools.product(a, UNIT_CARRIER))
    return rel_from_fn(dom, a, lambda e: e[0])


def sym_rel(a: tuple, b: tuple) -> RelMor:
    dom = tuple(itertools.product(a, b))
    cod = tuple(itertools.product(b, a))
    return rel_from_fn(dom, cod, lambda e: (e[1], e[0]))


def ev_rel(a: tuple, b: tuple) -> RelMor:
    """Application relation ((a, b), a') ~ b' iff a = a' and b = b'."""
    fn_space = tuple(itertools.product(a, b))
    dom = tuple(itertools.product(fn_space, a))
    return rel_from_pairs(dom, b, (((pair, pair[0]), pair[1]) for pair in fn_space))


def curry_rel(r: RelMor, c: tuple, a: tuple) -> RelMor:
    """Transpose r : C x A -> B into C -> (A x B).

    Because carriers enumerate products lexicographically this is a
    pure reindexing of the matrix.
    """
    if r.dom != tuple(itertools.product(c, a)):
        raise ValueError("relation domain is not the stated product")
    cod = tuple(itertools.product(a, r.cod))
    matrix = r.matrix.reshape(len(c), len(a) * len(r.cod))
    return RelMor(c, cod, matrix)


def format_matrix(r: RelMor) -> str:
    """Rows are domain elements, columns codomain elements, entries 0/1."""
    return "\n".join(
        " ".join("1" if cell else "0" for cell in row) for row in r.matrix
    )


# ----------------------------------------------------------------- carriers


def formula_size(f: Formula, sizes: Mapping[str, int]) -> int:
    match f:
        case Atom(name):
            if name not in sizes:
                raise ValueError(f"no size assigned to atom {name!r}")
            n = sizes[name]
            if n < 1:
                raise ValueError(f"atom sizes must be positive, got {name}={n}")
            return n
        case LTensor(left, right) | LImpl(left, right):
            return formula_size(left, sizes) * formula_size(right, sizes)
    raise UnsupportedRule(
        f"formula {f} is outside the tensor-lolli fragment"
    )


def formula_carrier(
    f: Formula, sizes: Mapping[str, int], cap: int = DEFAULT_CAP
) -> tuple:
    size = formula_size(f, sizes)
    if size > cap:
        raise SizeOverflow(size, cap)
    return _carrier(f, sizes)


def _carrier(f: Formula, sizes: Mapping[str, int]) -> tuple:
    match f:
        case Atom(name):
            return tuple(range(sizes[name]))
        case LTensor(left, right) | LImpl(left, right):
            return tuple(
                itertools.product(_carrier(left, sizes), _carrier(right, sizes))
            )
    raise UnsupportedRule(f"formula {f} is outside the tensor-lolli fragment")


def context_carrier(
    hyps: Sequence[Formula], sizes: Mapping[str, int], cap: int = DEFAULT_CAP
) -> tuple:
    """Left-nested product of the hypothesis carriers; empty is the unit."""
    total = 1
    for h in hyps:
        total *= formula_size(h, sizes)
    if total > cap:
        raise SizeOverflow(total, cap)
    carrier = UNIT_CARRIER if not hyps else _carrier(hyps[0], sizes)
    for h in hyps[1:]:
        carrier = tuple(itertools.product(carrier, _carrier(h, sizes)))
    return carrier


def _decode(count: int, element) -> list:
    """Per-hypothesis values of a left-nested context element."""
    if count == 0:
        return []
    if count == 1:
        return [element]
    return _decode(count - 1, element[0]) + [element[1]]


def _encode(values: Sequence):
    if not values:
        return ()
    out = values[0]
    for v in values[1:]:
        out = (out, v)
    return out


# -------------------------------------------------------------- translation


def _assign(
    src: Sequence[Formula], used: list[bool], dst: Sequence[Formula]
) -> list[int]:
    """Leftmost unused source slot per target formula; marks slots used."""
    out = []
    for f in dst:
        for i, candidate in enumerate(src):
            if not used[i] and candidate == f:
                used[i] = True
                out.append(i)
                break
        else:
            raise ValueError(f"hypothesis {f} cannot be routed to a premise")
    return out


def _split_positions(p: ProofTree) -> tuple[list[int], list[int]]:
    """Conclusion positions feeding premise one and premise two."""
    hyps = p.conclusion.hyps
    first = p.premises[0].conclusion.hyps
    second = p.premises[1].conclusion.hyps
    if p.rule == "cut":
        # Premise two consumes the cut formula on top of its share of
        # the conclusion; it need not sit first, so drop the leftmost
        # occurrence.
        at = second.index(p.premises[0].conclusion.concl)
        second = second[:at] + second[at + 1 :]
    if p.split is not None:
        pos1 = list(p.split)
        taken = set(pos1)
        pos2 = [i for i in range(len(hyps)) if i not in taken]
        return pos1, pos2
    used = [False] * len(hyps)
    pos1 = _assign(hyps, used, first)
    pos2 = _assign(hyps, used, second)
    return pos1, pos2


class _Translator:
    def __init__(self, sizes: Mapping[str, int], cap: int) -> None:
        self.sizes = dict(sizes)
        self.cap = cap

    def ctx(self, hyps: Sequence[Formula]) -> tuple:
        return context_carrier(hyps, self.sizes, self.cap)

    def one(self, f: Formula) -> tuple:
        return formula_carrier(f, self.sizes, self.cap)

    def wiring(
        self, hyps: Sequence[Formula], pos1: Sequence[int], pos2: Sequence[int]
    ) -> RelMor:
        """Bijection from the context onto the pair of premise contexts."""
        dom = self.ctx(hyps)
        left = self.ctx([hyps[i] for i in pos1])
        right = self.ctx([hyps[i] for i in pos2])
        cod = tuple(itertools.product(left, right))

        def route(e):
            vals = _decode(len(hyps), e)
            return (
                _encode([vals[i] for i in pos1]),
                _encode([vals[i] for i in pos2]),
            )

        return rel_from_fn(dom, cod, route)

    def translate(self, p: ProofTree) -> RelMor:
        hyps = p.conclusion.hyps
        concl = p.conclusion.concl
        match p.rule:
            case "id":
                return identity_rel(self.one(concl))
            case "tensor-r":
                f = self.translate(p.premises[0])
                g = self.translate(p.premises[1])
                pos1, pos2 = _split_positions(p)
                return compose_rel(tensor_rel(f, g), self.wiring(hyps, pos1, pos2))
            case "tensor-l":
                return self.tensor_left(p)
            case "lolli-r":
                return self.lolli_right(p)
            case "lolli-e":
                f = self.translate(p.premises[0])
                g = self.translate(p.premises[1])
                fun = p.premises[0].conclusion.concl
                assert isinstance(fun, LImpl)
                pos1, pos2 = _split_positions(p)
                ev = ev_rel(self.one(fun.left), self.one(fun.right))
                paired = compose_rel(tensor_rel(f, g), self.wiring(hyps, pos1, pos2))
                return compose_rel(ev, paired)
            case "cut":
                return self.cut(p)
        raise UnsupportedRule(
            f"rule {p.rule} has no relational interpretation in the "
            "tensor-lolli fragment"
        )

    def tensor_left(self, p: ProofTree) -> RelMor:
        hyps = p.conclusion.hyps
        assert p.index is not None
        k = p.index
        target = hyps[k]
        assert isinstance(target, LTensor)
        expanded = list(hyps[:k]) + [target.left, target.right] + list(hyps[k + 1 :])
        premise = p.premises[0].conclusion.hyps
        used = [False] * len(expanded)
        order = _assign(expanded, used, premise)
        dom = self.ctx(hyps)
        f = self.translate(p.premises[0])

        def route(e):
            vals = _decode(len(hyps), e)
            flat = vals[:k] + [vals[k][0], vals[k][1]] + vals[k + 1 :]
            return _encode([flat[i] for i in order])

        return compose_rel(f, rel_from_fn(dom, f.dom, route))

    def lolli_right(self, p: ProofTree) -> RelMor:
        hyps = p.conclusion.hyps
        concl = p.conclusion.concl
        assert isinstance(concl, LImpl)
        f = self.translate(p.premises[0])
        premise = p.premises[0].conclusion.hyps
        slots = list(hyps) + [concl.left]
        used = [False] * len(slots)
        order = _assign(slots, used, premise)
        dom = self.ctx(hyps)
        arg = self.one(concl.left)
        res = self.one(concl.right)
        f_rank = {x: i for i, x in enumerate(f.dom)}
        rows = []
        for e in dom:
            vals = _decode(len(hyps), e)
            for a in arg:
                extended = vals + [a]
                rows.append(f_rank[_encode([extended[i] for i in order])])
        matrix = f.matrix[rows].reshape(len(dom), len(arg) * len(res))
        cod = tuple(itertools.product(arg, res))
        return RelMor(dom, cod, matrix)

    def cut(self, p: ProofTree) -> RelMor:
        hyps = p.conclusion.hyps
        cut_formula = p.premises[0].conclusion.concl
        f = self.translate(p.premises[0])
        g = self.translate(p.premises[1])
        pos1, pos2 = _split_positions(p)
        rest = [hyps[i] for i in pos2]
        wiring = self.wiring(hyps, pos1, pos2)
        carried = tensor_rel(f, identity_rel(self.ctx(rest)))
        slots = [cut_formula] + rest
        used = [False] * len(slots)
        order = _assign(slots, used, p.premises[1].conclusion.hyps)

        def renest(e):
            vals = [e[0]] + _decode(len(rest), e[1])
            return _encode([vals[i] for i in order])

        into_g = rel_from_fn(carried.cod, g.dom, renest)
        return compose_rel(g, compose_rel(into_g, compose_rel(carried, wiring)))


def translate_linear_proof(
    p: ProofTree, sizes: Mapping[str, int], cap: int = DEFAULT_CAP
) -> RelMor:
    """Interpret a checked linear proof as a relation.

    The domain is the left-nested product of the hypothesis carriers and
    the codomain the conclusion carrier.  Left implication nodes are
    first rewritten into cut-and-application form; additive and
    exponential rules raise UnsupportedRule.
    """
    verdict = check_proof(p, "linear")
    if not verdict.ok:
        where = verdict.path or "root"
        raise ValueError(f"proof does not check at {where}: {verdict.reason}")
    return _Translator(sizes, cap).translate(eliminate_lolli_l(p))
