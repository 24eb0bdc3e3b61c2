"""Proof trees, proof checking, cut-free search and the proof/term bridge.

Three systems share one tree shape and differ in hypothesis discipline:

* ``nd``      natural deduction for and/implies; hypotheses form a set.
* ``gentzen`` sequent calculus for and/implies with explicit structural
  rules; hypotheses form an ordered list.
* ``linear``  sequent calculus for tensor/lolli/with/bang; hypotheses form
  a multiset, so exchange is implicit.

Left rules target one hypothesis occurrence and carry its position in the
conclusion's display tuple.  Two-premise multiplicative rules may carry an
optional ``split`` recording which conclusion positions feed the first
premise; it makes term extraction deterministic and is validated when
present, while proofs without it are checked up to multiset equality.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .formulas import (
    Atom,
    Conj,
    Formula,
    Impl,
    LBang,
    LImpl,
    LTensor,
    LWith,
    Sequent,
    has_bang,
    is_intuitionistic_formula,
    is_linear_formula,
)
from .syntax import (
    App,
    Arrow,
    Base,
    Lam,
    LetTensor,
    LetWith,
    Lollipop,
    Pair,
    Product,
    Proj,
    Tensor,
    TensorIntro,
    Term,
    Type,
    Var,
    With,
    WithPair,
    simultaneous_substitute,
    substitute,
)
from .typesys import Derivation

SYSTEMS = ("nd", "gentzen", "linear")

ND_RULES = {
    "id": 0,
    "conj-i": 2,
    "conj-e1": 1,
    "conj-e2": 1,
    "impl-i": 1,
    "impl-e": 2,
}
GENTZEN_RULES = {
    "id": 0,
    "conj-r": 2,
    "conj-l": 1,
    "impl-r": 1,
    "impl-l": 2,
    "cut": 2,
    "weak": 1,
    "contr": 1,
    "exch": 1,
}
LINEAR_RULES = {
    "id": 0,
    "tensor-r": 2,
    "tensor-l": 1,
    "lolli-r": 1,
    "lolli-l": 2,
    "lolli-e": 2,
    "cut": 2,
    "with-r": 2,
    "with-l1": 1,
    "with-l2": 1,
    "bang-l": 1,
    "bang-r": 1,
    "weak": 1,
    "contr": 1,
}
_INDEXED = {
    "conj-l",
    "impl-l",
    "exch",
    "tensor-l",
    "lolli-l",
    "with-l1",
    "with-l2",
    "bang-l",
    "weak",
    "contr",
}
_SPLITTABLE = {"tensor-r", "lolli-l", "lolli-e", "cut"}


class RuleViolation(Exception):
    """A proof node fails its rule schema; carries the node path."""

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class UnsupportedFragment(Exception):
    """The sequent uses connectives the requested search cannot handle."""


class NoTermAssignment(Exception):
    """The proof uses rules with no term-forming counterpart."""


@dataclass(frozen=True)
class ProofTree:
    """One proof node; index targets a hypothesis for indexed rules and
    split (optional) lists the conclusion positions fed to premise one."""

    rule: str
    conclusion: Sequent
    premises: tuple["ProofTree", ...] = ()
    index: int | None = None
    split: tuple[int, ...] | None = None


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check; path and reason locate the first violation."""

    ok: bool
    path: str = ""
    reason: str = ""


def check_proof(p: ProofTree, system: str) -> Verdict:
    """Does every node instantiate a rule of the system correctly?"""
    if system not in SYSTEMS:
        raise ValueError(f"unknown system {system!r}; expected one of {SYSTEMS}")
    try:
        _check_node(p, system, "/")
    except RuleViolation as e:
        return Verdict(False, e.path, e.reason)
    return Verdict(True)


def _formulas_of(s: Sequent):
    return (*s.hyps, s.concl)


def _check_node(p: ProofTree, system: str, path: str) -> None:
    rules = {"nd": ND_RULES, "gentzen": GENTZEN_RULES, "linear": LINEAR_RULES}[system]
    if p.rule not in rules:
        raise RuleViolation(path, f"rule {p.rule} is not part of the {system} system")
    if len(p.premises) != rules[p.rule]:
        raise RuleViolation(
            path,
            f"{p.rule} takes {rules[p.rule]} premises, got {len(p.premises)}",
        )
    frag_ok = is_intuitionistic_formula if system != "linear" else is_linear_formula
    for f in _formulas_of(p.conclusion):
        if not frag_ok(f):
            raise RuleViolation(path, f"formula {f} is outside the {system} fragment")
    if p.index is not None and p.rule not in _INDEXED:
        raise RuleViolation(path, f"rule {p.rule} carries no hypothesis index")
    if p.split is not None and p.rule not in _SPLITTABLE:
        raise RuleViolation(path, f"rule {p.rule} carries no context split")
    {"nd": _check_nd, "gentzen": _check_gentzen, "linear": _check_linear}[system](
        p, path
    )
    for i, q in enumerate(p.premises):
        _check_node(q, system, f"{path.rstrip('/')}/{i}")


def _need_index(p: ProofTree, path: str) -> int:
    if p.index is None:
        raise RuleViolation(path, f"rule {p.rule} needs a hypothesis index")
    if not 0 <= p.index < len(p.conclusion.hyps):
        raise RuleViolation(
            path, f"index {p.index} out of range for {len(p.conclusion.hyps)} hypotheses"
        )
    return p.index


# -------------------------------------------------------- natural deduction


def _check_nd(p: ProofTree, path: str) -> None:
    hyps = frozenset(p.conclusion.hyps)
    concl = p.conclusion.concl

    def premise_sets_match() -> None:
        for q in p.premises:
            if frozenset(q.conclusion.hyps) != hyps:
                raise RuleViolation(
                    path, "premise context differs from the conclusion's"
                )

    match p.rule:
        case "id":
            if concl not in hyps:
                raise RuleViolation(path, f"{concl} is not a hypothesis")
        case "conj-i":
            premise_sets_match()
            want = Conj(p.premises[0].conclusion.concl, p.premises[1].conclusion.concl)
            if concl != want:
                raise RuleViolation(path, f"conclusion should be {want}, is {concl}")
        case "conj-e1" | "conj-e2":
            premise_sets_match()
            got = p.premises[0].conclusion.concl
            if not isinstance(got, Conj):
                raise RuleViolation(path, f"premise must prove a conjunction, got {got}")
            part = got.left if p.rule == "conj-e1" else got.right
            if concl != part:
                raise RuleViolation(path, f"conclusion should be {part}, is {concl}")
        case "impl-i":
            if not isinstance(concl, Impl):
                raise RuleViolation(path, f"conclusion must be an implication, is {concl}")
            q = p.premises[0].conclusion
            if frozenset(q.hyps) != hyps | {concl.left}:
                raise RuleViolation(path, "premise context must add the antecedent")
            if q.concl != concl.right:
                raise RuleViolation(path, f"premise must prove {concl.right}")
        case "impl-e":
            premise_sets_match()
            fun = p.premises[0].conclusion.concl
            arg = p.premises[1].conclusion.concl
            if not isinstance(fun, Impl) or fun.left != arg or fun.right != concl:
                raise RuleViolation(
                    path, f"premises {fun} and {arg} do not yield {concl}"
                )


# ------------------------------------------------------------------ gentzen


def _check_gentzen(p: ProofTree, path: str) -> None:
    hyps = p.conclusion.hyps
    concl = p.conclusion.concl

    def premise(i: int) -> Sequent:
        return p.premises[i].conclusion

    match p.rule:
        case "id":
            if hyps != (concl,):
                raise RuleViolation(path, "id needs the single hypothesis A with A proved")
        case "conj-r":
            if hyps != premise(0).hyps + premise(1).hyps:
                raise RuleViolation(path, "context must concatenate the premise contexts")
            want = Conj(premise(0).concl, premise(1).concl)
            if concl != want:
                raise RuleViolation(path, f"conclusion should be {want}, is {concl}")
        case "conj-l":
            k = _need_index(p, path)
            target = hyps[k]
            if not isinstance(target, Conj):
                raise RuleViolation(path, f"hypothesis {k} must be a conjunction")
            want = hyps[:k] + (target.left, target.right) + hyps[k + 1 :]
            if premise(0).hyps != want or premise(0).concl != concl:
                raise RuleViolation(path, "premise must expose both conjuncts in place")
        case "impl-r":
            if not isinstance(concl, Impl):
                raise RuleViolation(path, f"conclusion must be an implication, is {concl}")
            if premise(0).hyps != hyps + (concl.left,) or premise(0).concl != concl.right:
                raise RuleViolation(path, "premise must assume the antecedent last")
        case "impl-l":
            k = _need_index(p, path)
            target = hyps[k]
            if not isinstance(target, Impl):
                raise RuleViolation(path, f"hypothesis {k} must be an implication")
            if premise(0).hyps != hyps[:k] or premise(0).concl != target.left:
                raise RuleViolation(path, "first premise must prove the antecedent from the left part")
            if premise(1).hyps != (target.right,) + hyps[k + 1 :] or premise(1).concl != concl:
                raise RuleViolation(path, "second premise must consume the consequent first")
        case "cut":
            cut_formula = premise(0).concl
            if premise(1).hyps[:1] != (cut_formula,):
                raise RuleViolation(path, "second premise must consume the cut formula first")
            if hyps != premise(0).hyps + premise(1).hyps[1:] or premise(1).concl != concl:
                raise RuleViolation(path, "contexts do not concatenate around the cut")
        case "weak":
            if not hyps or premise(0).hyps != hyps[:-1] or premise(0).concl != concl:
                raise RuleViolation(path, "weakening introduces the last hypothesis")
        case "contr":
            if not hyps or premise(0).hyps != hyps + (hyps[-1],) or premise(0).concl != concl:
                raise RuleViolation(path, "contraction merges a doubled last hypothesis")
        case "exch":
            k = _need_index(p, path)
            if k + 1 >= len(hyps):
                raise RuleViolation(path, f"exchange at {k} needs a right neighbour")
            want = hyps[:k] + (hyps[k + 1], hyps[k]) + hyps[k + 2 :]
            if premise(0).hyps != want or premise(0).concl != concl:
                raise RuleViolation(path, "premise must transpose the two hypotheses")


# ------------------------------------------------------------------- linear


def _mset(formulas) -> Counter:
    return Counter(formulas)


def _check_split(p: ProofTree, path: str, holes: tuple[int, ...] = ()) -> None:
    """Validate an explicit split: premise one's hypotheses are exactly the
    listed conclusion positions, premise two's the remaining ones (minus
    any rule-consumed holes), both in conclusion order."""
    hyps = p.conclusion.hyps
    split = p.split
    assert split is not None
    taken = set(split) | set(holes)
    if len(taken) != len(split) + len(holes) or any(
        not 0 <= i < len(hyps) for i in split
    ):
        raise RuleViolation(path, f"split {split} reuses or exceeds positions")
    first = tuple(hyps[i] for i in split)
    rest = tuple(h for i, h in enumerate(hyps) if i not in taken)
    got_first = p.premises[0].conclusion.hyps
    got_rest = p.premises[1].conclusion.hyps
    if p.rule in ("lolli-l", "cut"):
        # the second premise consumes one extra formula placed first
        got_rest = got_rest[1:]
    if got_first != first or got_rest != rest:
        raise RuleViolation(path, "premise contexts do not realize the declared split")


def _check_linear(p: ProofTree, path: str) -> None:
    hyps = p.conclusion.hyps
    concl = p.conclusion.concl

    def premise(i: int) -> Sequent:
        return p.premises[i].conclusion

    def expect_multiset(actual: Counter, expected: Counter, what: str) -> None:
        if actual != expected:
            raise RuleViolation(path, f"{what}: context multisets do not match")

    match p.rule:
        case "id":
            if len(hyps) != 1 or hyps[0] != concl:
                raise RuleViolation(path, "id needs the single hypothesis A with A proved")
        case "tensor-r":
            if concl != LTensor(premise(0).concl, premise(1).concl):
                raise RuleViolation(path, f"conclusion {concl} is not the premise tensor")
            expect_multiset(
                _mset(premise(0).hyps) + _mset(premise(1).hyps), _mset(hyps), "tensor-r"
            )
            if p.split is not None:
                _check_split(p, path)
        case "tensor-l":
            k = _need_index(p, path)
            target = hyps[k]
            if not isinstance(target, LTensor):
                raise RuleViolation(path, f"hypothesis {k} must be a tensor")
            want = _mset(hyps)
            want[target] -= 1
            want.update((target.left, target.right))
            expect_multiset(_mset(premise(0).hyps), +want, "tensor-l")
            if premise(0).concl != concl:
                raise RuleViolation(path, "tensor-l keeps the conclusion")
        case "lolli-r":
            if not isinstance(concl, LImpl):
                raise RuleViolation(path, f"conclusion must be a lolli, is {concl}")
            expect_multiset(
                _mset(premise(0).hyps), _mset(hyps) + _mset([concl.left]), "lolli-r"
            )
            if premise(0).concl != concl.right:
                raise RuleViolation(path, f"premise must prove {concl.right}")
        case "lolli-l":
            k = _need_index(p, path)
            target = hyps[k]
            if not isinstance(target, LImpl):
                raise RuleViolation(path, f"hypothesis {k} must be a lolli")
            if premise(0).concl != target.left:
                raise RuleViolation(path, f"first premise must prove {target.left}")
            if premise(1).concl != concl:
                raise RuleViolation(path, "second premise keeps the conclusion")
            second = _mset(premise(1).hyps)
            if second[target.right] < 1:
                raise RuleViolation(path, f"second premise must consume {target.right}")
            second[target.right] -= 1
            want = _mset(hyps)
            want[target] -= 1
            expect_multiset(_mset(premise(0).hyps) + (+second), +want, "lolli-l")
            if p.split is not None:
                _check_split(p, path, holes=(k,))
        case "lolli-e":
            fun = premise(0).concl
            if not isinstance(fun, LImpl) or fun.left != premise(1).concl or fun.right != concl:
                raise RuleViolation(
                    path, f"premises {fun} and {premise(1).concl} do not yield {concl}"
                )
            expect_multiset(
                _mset(premise(0).hyps) + _mset(premise(1).hyps), _mset(hyps), "lolli-e"
            )
            if p.split is not None:
                _check_split(p, path)
        case "cut":
            cut_formula = premise(0).concl
            second = _mset(premise(1).hyps)
            if second[cut_formula] < 1:
                raise RuleViolation(path, "second premise must consume the cut formula")
            second[cut_formula] -= 1
            expect_multiset(_mset(premise(0).hyps) + (+second), _mset(hyps), "cut")
            if premise(1).concl != concl:
                raise RuleViolation(path, "cut keeps the conclusion")
            if p.split is not None:
                _check_split(p, path)
        case "with-r":
            if concl != LWith(premise(0).concl, premise(1).concl):
                raise RuleViolation(path, f"conclusion {concl} is not the premise with-pair")
            for i in (0, 1):
                expect_multiset(_mset(premise(i).hyps), _mset(hyps), "with-r")
        case "with-l1" | "with-l2":
            k = _need_index(p, path)
            target = hyps[k]
            if not isinstance(target, LWith):
                raise RuleViolation(path, f"hypothesis {k} must be a with")
            kept = target.left if p.rule == "with-l1" else target.right
            want = _mset(hyps)
            want[target] -= 1
            want.update((kept,))
            expect_multiset(_mset(premise(0).hyps), +want, p.rule)
            if premise(0).concl != concl:
                raise RuleViolation(path, f"{p.rule} keeps the conclusion")
        case "bang-l":
            k = _need_index(p, path)
            target = hyps[k]
            if not isinstance(target, LBang):
                raise RuleViolation(path, f"hypothesis {k} must be banged")
            want = _mset(hyps)
            want[target] -= 1
            want.update((target.inner,))
            expect_multiset(_mset(premise(0).hyps), +want, "bang-l")
            if premise(0).concl != concl:
                raise RuleViolation(path, "bang-l keeps the conclusion")
        case "bang-r":
            if not isinstance(concl, LBang):
                raise RuleViolation(path, f"conclusion must be banged, is {concl}")
            if any(not isinstance(h, LBang) for h in hyps):
                raise RuleViolation(path, "bang-r needs an all-banged context")
            expect_multiset(_mset(premise(0).hyps), _mset(hyps), "bang-r")
            if premise(0).concl != concl.inner:
                raise RuleViolation(path, f"premise must prove {concl.inner}")
        case "weak":
            k = _need_index(p, path)
            if not isinstance(hyps[k], LBang):
                raise RuleViolation(path, "weakening only discards banged hypotheses")
            want = _mset(hyps)
            want[hyps[k]] -= 1
            expect_multiset(_mset(premise(0).hyps), +want, "weak")
            if premise(0).concl != concl:
                raise RuleViolation(path, "weakening keeps the conclusion")
        case "contr":
            k = _need_index(p, path)
            if not isinstance(hyps[k], LBang):
                raise RuleViolation(path, "contraction only copies banged hypotheses")
            expect_multiset(
                _mset(premise(0).hyps), _mset(hyps) + _mset([hyps[k]]), "contr"
            )
            if premise(0).concl != concl:
                raise RuleViolation(path, "contraction keeps the conclusion")


# ---------------------------------------------------------- cut-free search


def search_cutfree(s: Sequent, depth: int, system: str = "linear") -> ProofTree | None:
    """Backward cut-free proof search, bounded by depth.

    Linear search enumerates every order-preserving context split, so for
    the tensor/lolli/with fragment a failure at the given depth is
    exhaustive.  Gentzen search additionally tries the structural rules;
    its failures are bounded-depth only.
    """
    if depth < 1:
        raise ValueError(f"depth must be positive, got {depth}")
    if system == "linear":
        if any(has_bang(f) for f in _formulas_of(s)):
            raise UnsupportedFragment("search does not handle the ! connective")
        if not all(is_linear_formula(f) for f in _formulas_of(s)):
            raise UnsupportedFragment("linear search needs linear formulas")
        return _search_linear(s.hyps, s.concl, depth, {})
    if system == "gentzen":
        if not all(is_intuitionistic_formula(f) for f in _formulas_of(s)):
            raise UnsupportedFragment("gentzen search needs and/implies formulas")
        return _search_gentzen(s.hyps, s.concl, depth, {})
    raise ValueError(f"search supports gentzen and linear, not {system!r}")


def _splits(hyps: tuple):
    """All order-preserving two-way splits, first-premise set by bitmask."""
    n = len(hyps)
    for mask in range(1 << n):
        left = tuple(hyps[i] for i in range(n) if mask >> i & 1)
        right = tuple(hyps[i] for i in range(n) if not mask >> i & 1)
        yield left, right


def _search_linear(hyps, goal, depth, fails) -> ProofTree | None:
    key = (tuple(sorted(hyps, key=repr)), goal)
    if fails.get(key, 0) >= depth:
        return None
    seq = Sequent(hyps, goal)
    if len(hyps) == 1 and hyps[0] == goal:
        return ProofTree("id", seq)
    if depth > 1:
        proof = _try_linear_rules(hyps, goal, depth, fails, seq)
        if proof is not None:
            return proof
    fails[key] = max(fails.get(key, 0), depth)
    return None


def _try_linear_rules(hyps, goal, depth, fails, seq) -> ProofTree | None:
    match goal:
        case LTensor(a, b):
            for left, right in _splits(hyps):
                p1 = _search_linear(left, a, depth - 1, fails)
                if p1 is None:
                    continue
                p2 = _search_linear(right, b, depth - 1, fails)
                if p2 is not None:
                    return ProofTree("tensor-r", seq, (p1, p2))
        case LImpl(a, b):
            p = _search_linear(hyps + (a,), b, depth - 1, fails)
            if p is not None:
                return ProofTree("lolli-r", seq, (p,))
        case LWith(a, b):
            p1 = _search_linear(hyps, a, depth - 1, fails)
            if p1 is not None:
                p2 = _search_linear(hyps, b, depth - 1, fails)
                if p2 is not None:
                    return ProofTree("with-r", seq, (p1, p2))
    for k, h in enumerate(hyps):
        rest = hyps[:k] + hyps[k + 1 :]
        match h:
            case LTensor(a, b):
                p = _search_linear(
                    hyps[:k] + (a, b) + hyps[k + 1 :], goal, depth - 1, fails
                )
                if p is not None:
                    return ProofTree("tensor-l", seq, (p,), index=k)
            case LImpl(a, b):
                for left, right in _splits(rest):
                    p1 = _search_linear(left, a, depth - 1, fails)
                    if p1 is None:
                        continue
                    p2 = _search_linear((b,) + right, goal, depth - 1, fails)
                    if p2 is not None:
                        return ProofTree("lolli-l", seq, (p1, p2), index=k)
            case LWith(a, b):
                p = _search_linear(
                    hyps[:k] + (a,) + hyps[k + 1 :], goal, depth - 1, fails
                )
                if p is not None:
                    return ProofTree("with-l1", seq, (p,), index=k)
                p = _search_linear(
                    hyps[:k] + (b,) + hyps[k + 1 :], goal, depth - 1, fails
                )
                if p is not None:
                    return ProofTree("with-l2", seq, (p,), index=k)
    return None


def _search_gentzen(hyps, goal, depth, fails) -> ProofTree | None:
    key = (hyps, goal)
    if fails.get(key, 0) >= depth:
        return None
    seq = Sequent(hyps, goal)
    if hyps == (goal,):
        return ProofTree("id", seq)
    if depth > 1:
        proof = _try_gentzen_rules(hyps, goal, depth, fails, seq)
        if proof is not None:
            return proof
    fails[key] = max(fails.get(key, 0), depth)
    return None


def _try_gentzen_rules(hyps, goal, depth, fails, seq) -> ProofTree | None:
    match goal:
        case Conj(a, b):
            # the rule concatenates contexts, so only prefix splits apply
            for i in range(len(hyps) + 1):
                p1 = _search_gentzen(hyps[:i], a, depth - 1, fails)
                if p1 is None:
                    continue
                p2 = _search_gentzen(hyps[i:], b, depth - 1, fails)
                if p2 is not None:
                    return ProofTree("conj-r", seq, (p1, p2))
        case Impl(a, b):
            p = _search_gentzen(hyps + (a,), b, depth - 1, fails)
            if p is not None:
                return ProofTree("impl-r", seq, (p,))
    for k, h in enumerate(hyps):
        match h:
            case Conj(a, b):
                p = _search_gentzen(
                    hyps[:k] + (a, b) + hyps[k + 1 :], goal, depth - 1, fails
                )
                if p is not None:
                    return ProofTree("conj-l", seq, (p,), index=k)
            case Impl(a, b):
                p1 = _search_gentzen(hyps[:k], a, depth - 1, fails)
                if p1 is not None:
                    p2 = _search_gentzen((b,) + hyps[k + 1 :], goal, depth - 1, fails)
                    if p2 is not None:
                        return ProofTree("impl-l", seq, (p1, p2), index=k)
    if hyps:
        p = _search_gentzen(hyps[:-1], goal, depth - 1, fails)
        if p is not None:
            return ProofTree("weak", seq, (p,))
        p = _search_gentzen(hyps + (hyps[-1],), goal, depth - 1, fails)
        if p is not None:
            return ProofTree("contr", seq, (p,))
    for k in range(len(hyps) - 1):
        swapped = hyps[:k] + (hyps[k + 1], hyps[k]) + hyps[k + 2 :]
        p = _search_gentzen(swapped, goal, depth - 1, fails)
        if p is not None:
            return ProofTree("exch", seq, (p,), index=k)
    return None


# ----------------------------------------------------- formulas  <->  types


def type_of_formula(f: Formula) -> Type:
    match f:
        case Atom(n):
            return Base(n)
        case Conj(a, b):
            return Product(type_of_formula(a), type_of_formula(b))
        case Impl(a, b):
            return Arrow(type_of_formula(a), type_of_formula(b))
        case LTensor(a, b):
            return Tensor(type_of_formula(a), type_of_formula(b))
        case LImpl(a, b):
            return Lollipop(type_of_formula(a), type_of_formula(b))
        case LWith(a, b):
            return With(type_of_formula(a), type_of_formula(b))
        case LBang(a):
            from .syntax import Bang

            return Bang(type_of_formula(a))
    raise TypeError(f"not a formula: {f!r}")


def formula_of_type(T: Type) -> Formula:
    from .syntax import Bang

    match T:
        case Base(n):
            return Atom(n)
        case Product(a, b):
            return Conj(formula_of_type(a), formula_of_type(b))
        case Arrow(a, b):
            return Impl(formula_of_type(a), formula_of_type(b))
        case Tensor(a, b):
            return LTensor(formula_of_type(a), formula_of_type(b))
        case Lollipop(a, b):
            return LImpl(formula_of_type(a), formula_of_type(b))
        case With(a, b):
            return LWith(formula_of_type(a), formula_of_type(b))
        case Bang(a):
            return LBang(formula_of_type(a))
    raise TypeError(f"type {T} has no formula counterpart")


# ---------------------------------------------------------- proofs to terms


def proof_to_term(p: ProofTree, system: str | None = None):
    """Extract the term a proof denotes: (context, term, type).

    With system omitted, tries nd then linear.  Natural deduction names
    hypotheses per distinct formula (set discipline), so two hypotheses of
    the same formula share a variable.  Linear proofs name hypotheses per
    occurrence; explicit splits are honoured, otherwise same-formula
    occurrences are matched first-fit left to right.  Proofs touching the
    ! connective have no term counterpart and raise NoTermAssignment.
    """
    if system is None:
        if check_proof(p, "nd").ok:
            system = "nd"
        elif check_proof(p, "linear").ok:
            system = "linear"
        else:
            raise ValueError(f"proof does not check: {check_proof(p, 'nd').reason}")
    else:
        if system not in ("nd", "linear"):
            raise ValueError(f"terms exist for nd and linear proofs, not {system!r}")
        verdict = check_proof(p, system)
        if not verdict.ok:
            raise ValueError(f"proof does not check: {verdict.reason}")
    if system == "nd":
        return _nd_to_term(p)
    return _linear_to_term(p)


def _nd_to_term(p: ProofTree):
    counter = iter(range(10**9))
    env: dict[Formula, str] = {}
    ctx = []
    for h in p.conclusion.hyps:
        if h not in env:
            env[h] = f"x{next(counter)}"
            ctx.append((env[h], type_of_formula(h)))

    def walk(q: ProofTree, env: dict[Formula, str]) -> Term:
        match q.rule:
            case "id":
                return Var(env[q.conclusion.concl])
            case "conj-i":
                return Pair(walk(q.premises[0], env), walk(q.premises[1], env))
            case "conj-e1" | "conj-e2":
                return Proj(1 if q.rule == "conj-e1" else 2, walk(q.premises[0], env))
            case "impl-i":
                assert isinstance(q.conclusion.concl, Impl)
                a = q.conclusion.concl.left
                name = env.get(a) or f"x{next(counter)}"
                return Lam(name, walk(q.premises[0], {**env, a: name}))
            case "impl-e":
                return App(walk(q.premises[0], env), walk(q.premises[1], env))
        raise AssertionError(q.rule)

    return tuple(ctx), walk(p, env), type_of_formula(p.conclusion.concl)


def _linear_to_term(p: ProofTree):
    if any(has_bang(f) for f in _formulas_of(p.conclusion)):
        raise NoTermAssignment("the ! connective has no term counterpart")
    counter = iter(range(10**9))

    def fresh() -> str:
        return f"x{next(counter)}"

    def align(pool: list, wanted, injections: list) -> list[str]:
        """Name each wanted hypothesis from the pool (conclusion leftovers)
        first, falling back to rule-introduced injections."""
        out = []
        for w in wanted:
            for src in (pool, injections):
                hit = next((i for i, (f, _) in enumerate(src) if f == w), None)
                if hit is not None:
                    out.append(src.pop(hit)[1])
                    break
            else:
                raise AssertionError(f"unmatched hypothesis {w}")
        return out

    def two_premise_names(q: ProofTree, names, hole: int | None):
        """Split conclusion names between the premises of q; the second
        premise's consumed formula (lolli-l target output or cut formula)
        is handled by the caller via injections."""
        hyps = q.conclusion.hyps
        positions = [i for i in range(len(hyps)) if i != hole]
        if q.split is not None:
            first = [names[i] for i in q.split]
            rest = [(hyps[i], names[i]) for i in positions if i not in set(q.split)]
            return first, rest
        pool = [(hyps[i], names[i]) for i in positions]
        first = align(pool, q.premises[0].conclusion.hyps, [])
        return first, pool

    def walk(q: ProofTree, names: list[str]) -> Term:
        hyps = q.conclusion.hyps
        match q.rule:
            case "id":
                return Var(names[0])
            case "tensor-r":
                first, rest = two_premise_names(q, names, None)
                left = walk(q.premises[0], first)
                right = walk(q.premises[1], align(rest, q.premises[1].conclusion.hyps, []))
                return TensorIntro(left, right)
            case "lolli-e":
                first, rest = two_premise_names(q, names, None)
                fun = walk(q.premises[0], first)
                arg = walk(q.premises[1], align(rest, q.premises[1].conclusion.hyps, []))
                return App(fun, arg)
            case "lolli-r":
                assert isinstance(q.conclusion.concl, LImpl)
                x = fresh()
                inj = [(q.conclusion.concl.left, x)]
                pool = list(zip(hyps, names))
                body = walk(q.premises[0], align(pool, q.premises[0].conclusion.hyps, inj))
                return Lam(x, body)
            case "tensor-l":
                target = hyps[q.index]
                assert isinstance(target, LTensor)
                a, b = fresh(), fresh()
                pool = [(h, names[i]) for i, h in enumerate(hyps) if i != q.index]
                inj = [(target.left, a), (target.right, b)]
                body = walk(q.premises[0], align(pool, q.premises[0].conclusion.hyps, inj))
                return LetTensor(a, b, Var(names[q.index]), body)
            case "with-l1" | "with-l2":
                target = hyps[q.index]
                assert isinstance(target, LWith)
                kept = 1 if q.rule == "with-l1" else 2
                x = fresh()
                pool = [(h, names[i]) for i, h in enumerate(hyps) if i != q.index]
                inj = [(target.left if kept == 1 else target.right, x)]
                body = walk(q.premises[0], align(pool, q.premises[0].conclusion.hyps, inj))
                return LetWith(kept, x, Var(names[q.index]), body)
            case "with-r":
                pool = list(zip(hyps, names))
                left = walk(q.premises[0], align(list(pool), q.premises[0].conclusion.hyps, []))
                right = walk(q.premises[1], align(list(pool), q.premises[1].conclusion.hyps, []))
                return WithPair(left, right)
            case "lolli-l":
                target = hyps[q.index]
                assert isinstance(target, LImpl)
                first, rest = two_premise_names(q, names, q.index)
                arg = walk(q.premises[0], first)
                y = fresh()
                inj = [(target.right, y)]
                body = walk(q.premises[1], align(rest, q.premises[1].conclusion.hyps, inj))
                return substitute(body, App(Var(names[q.index]), arg), y)
            case "cut":
                first, rest = two_premise_names(q, names, None)
                cut_term = walk(q.premises[0], first)
                x = fresh()
                inj = [(q.premises[0].conclusion.concl, x)]
                body = walk(q.premises[1], align(rest, q.premises[1].conclusion.hyps, inj))
                return substitute(body, cut_term, x)
            case "bang-l" | "bang-r" | "weak" | "contr":
                raise NoTermAssignment(f"rule {q.rule} has no term counterpart")
        raise AssertionError(q.rule)

    names = [fresh() for _ in p.conclusion.hyps]
    ctx = tuple(
        (n, type_of_formula(h)) for n, h in zip(names, p.conclusion.hyps)
    )
    return ctx, walk(p, names), type_of_formula(p.conclusion.concl)


# ---------------------------------------------------------- terms to proofs


def term_to_proof(d: Derivation) -> ProofTree:
    """Rebuild the proof a typing derivation encodes.

    Simply typed derivations become natural deductions; linear ones become
    linear sequent proofs, with the let forms rendered as a cut into the
    matching left rule.  Contexts carry over in display order, so the
    extraction in proof_to_term inverts this map up to renaming.
    """
    if d.system == "stlc":
        return _stlc_to_proof(d)
    if d.system == "linear":
        return _linear_to_proof(d)
    raise ValueError(f"no proof reading for {d.system!r} derivations")


def _deriv_sequent(d: Derivation) -> Sequent:
    j = d.conclusion
    return Sequent(
        tuple(formula_of_type(T) for _, T in j.ctx), formula_of_type(j.type)
    )


_ND_OF_STLC = {
    "var": "id",
    "abs": "impl-i",
    "app": "impl-e",
    "pair": "conj-i",
    "proj1": "conj-e1",
    "proj2": "conj-e2",
}


def _stlc_to_proof(d: Derivation) -> ProofTree:
    return ProofTree(
        _ND_OF_STLC[d.rule],
        _deriv_sequent(d),
        tuple(_stlc_to_proof(q) for q in d.premises),
    )


def _linear_to_proof(d: Derivation) -> ProofTree:
    seq = _deriv_sequent(d)
    names = [x for x, _ in d.conclusion.ctx]

    def positions_of(sub: Derivation) -> tuple[int, ...]:
        return tuple(names.index(x) for x, _ in sub.conclusion.ctx)

    match d.rule:
        case "var":
            return ProofTree("id", seq)
        case "abs":
            return ProofTree("lolli-r", seq, (_linear_to_proof(d.premises[0]),))
        case "app":
            prems = (_linear_to_proof(d.premises[0]), _linear_to_proof(d.premises[1]))
            return ProofTree("lolli-e", seq, prems, split=positions_of(d.premises[0]))
        case "tensor":
            prems = (_linear_to_proof(d.premises[0]), _linear_to_proof(d.premises[1]))
            return ProofTree("tensor-r", seq, prems, split=positions_of(d.premises[0]))
        case "with-pair":
            prems = (_linear_to_proof(d.premises[0]), _linear_to_proof(d.premises[1]))
            return ProofTree("with-r", seq, prems)
        case "let-tensor" | "let-with1" | "let-with2":
            return _let_to_cut(d, seq, positions_of)
    raise AssertionError(d.rule)


def _let_to_cut(d: Derivation, seq: Sequent, positions_of) -> ProofTree:
    """let x = s in b  becomes  cut(proof of s, left-rule(proof of b))."""
    d_sc, d_body = d.premises
    p_sc = _linear_to_proof(d_sc)
    p_body = _linear_to_proof(d_body)
    scrutinee = formula_of_type(d_sc.conclusion.type)
    # the body context lists the bound hypotheses last; drop them to get
    # the residue the left rule keeps
    n_bound = 2 if d.rule == "let-tensor" else 1
    residue = _deriv_sequent(d_body).hyps[: len(d_body.conclusion.ctx) - n_bound]
    left_rule = {
        "let-tensor": "tensor-l",
        "let-with1": "with-l1",
        "let-with2": "with-l2",
    }[d.rule]
    left_node = ProofTree(
        left_rule,
        Sequent((scrutinee,) + residue, seq.concl),
        (p_body,),
        index=0,
    )
    return ProofTree("cut", seq, (p_sc, left_node), split=positions_of(d_sc))


# --------------------------------------------- admissible rules (deduction)


def nd_weaken(p: ProofTree, extra: Formula) -> ProofTree:
    """A proof of G |- B becomes a proof of G, A |- B."""
    s = p.conclusion
    hyps = s.hyps if extra in set(s.hyps) else s.hyps + (extra,)
    return ProofTree(
        p.rule,
        Sequent(hyps, s.concl),
        tuple(nd_weaken(q, extra) for q in p.premises),
        index=p.index,
        split=p.split,
    )


def nd_cut(p1: ProofTree, p2: ProofTree) -> ProofTree:
    """From G |- A and A, D |- B construct a proof of G, D |- B.

    Runs through the term assignment: substituting the first proof's term
    for the hypothesis A in the second proof's term stays well typed, and
    reading the new derivation back gives the combined proof.
    """
    from .typesys import typecheck_stlc

    cut_formula = p1.conclusion.concl
    if cut_formula not in set(p2.conclusion.hyps):
        raise ValueError(f"second proof does not assume {cut_formula}")
    ctx1, t1, _ = proof_to_term(p1, "nd")
    ctx2, t2, T2 = proof_to_term(p2, "nd")
    renaming = {x: f"c{i}" for i, (x, _) in enumerate(ctx1)}
    t1 = simultaneous_substitute(t1, [(x, Var(y)) for x, y in renaming.items()])
    ctx1 = tuple((renaming[x], T) for x, T in ctx1)
    cut_type = type_of_formula(cut_formula)
    x_cut = next(x for x, T in ctx2 if T == cut_type)
    merged = ctx1 + tuple((x, T) for x, T in ctx2 if x != x_cut)
    u = substitute(t2, t1, x_cut)
    return term_to_proof(typecheck_stlc(merged, u, T2))


# --------------------------------------------------- embedding into linear


def embed_formula(f: Formula) -> Formula:
    """Girard translation: and becomes with, implies becomes !A -o B."""
    match f:
        case Atom(_):
            return f
        case Conj(a, b):
            return LWith(embed_formula(a), embed_formula(b))
        case Impl(a, b):
            return LImpl(LBang(embed_formula(a)), embed_formula(b))
    raise TypeError(f"cannot embed {f}")


def embed_intuitionistic(s: Sequent) -> Sequent:
    """G |- A becomes !G* |- A*, banging every translated hypothesis."""
    return Sequent(
        tuple(LBang(embed_formula(h)) for h in s.hyps), embed_formula(s.concl)
    )


def canonical_nd_sequent(s: Sequent) -> Sequent:
    """Deduplicate and sort the hypothesis display; the set is unchanged."""
    return Sequent(tuple(sorted(set(s.hyps), key=repr)), s.concl)


def embed_nd_proof(p: ProofTree) -> ProofTree:
    """Translate a natural deduction proof rule by rule into a linear proof
    of the embedded sequent (canonicalized display order)."""
    verdict = check_proof(p, "nd")
    if not verdict.ok:
        raise ValueError(f"proof does not check: {verdict.reason}")
    return _embed_node(p)


def _embed_hyps(hyps) -> tuple[Formula, ...]:
    return tuple(LBang(embed_formula(h)) for h in sorted(set(hyps), key=repr))


def _embed_node(p: ProofTree) -> ProofTree:
    hyps = _embed_hyps(p.conclusion.hyps)
    concl = embed_formula(p.conclusion.concl)
    seq = Sequent(hyps, concl)
    match p.rule:
        case "id":
            return _embed_id(hyps, concl, seq)
        case "conj-i":
            return ProofTree(
                "with-r", seq, (_embed_node(p.premises[0]), _embed_node(p.premises[1]))
            )
        case "conj-e1" | "conj-e2":
            e = _embed_node(p.premises[0])
            pair = e.conclusion.concl
            assert isinstance(pair, LWith)
            kept = pair.left if p.rule == "conj-e1" else pair.right
            rule = "with-l1" if p.rule == "conj-e1" else "with-l2"
            left_node = ProofTree(
                rule,
                Sequent((pair,), kept),
                (ProofTree("id", Sequent((kept,), kept)),),
                index=0,
            )
            return ProofTree("cut", seq, (e, left_node))
        case "impl-i":
            e = _embed_node(p.premises[0])
            assert isinstance(concl, LImpl)
            banged = concl.left
            if len(e.conclusion.hyps) == len(hyps):
                # the antecedent was already among the hypotheses; weaken in
                # a second copy for the right rule to consume
                e = ProofTree(
                    "weak",
                    Sequent((banged,) + e.conclusion.hyps, e.conclusion.concl),
                    (e,),
                    index=0,
                )
            return ProofTree("lolli-r", seq, (e,))
        case "impl-e":
            return _embed_impl_e(p, hyps, concl, seq)
    raise AssertionError(p.rule)


def _embed_id(hyps, concl, seq) -> ProofTree:
    target = LBang(concl)
    j = hyps.index(target)
    proof = ProofTree(
        "bang-l",
        Sequent((target,), concl),
        (ProofTree("id", Sequent((concl,), concl)),),
        index=0,
    )
    present = [j]
    for i, h in enumerate(hyps):
        if i == j:
            continue
        present.append(i)
        present.sort()
        display = tuple(hyps[k] for k in present)
        proof = ProofTree(
            "weak", Sequent(display, concl), (proof,), index=present.index(i)
        )
    return proof


def _embed_impl_e(p: ProofTree, hyps, concl, seq) -> ProofTree:
    e1 = _embed_node(p.premises[0])
    e2 = _embed_node(p.premises[1])
    fun = e1.conclusion.concl
    assert isinstance(fun, LImpl)
    banged_arg = fun.left
    promoted = ProofTree("bang-r", Sequent(hyps, banged_arg), (e2,))
    applied = ProofTree(
        "lolli-l",
        Sequent((fun,) + hyps, concl),
        (promoted, ProofTree("id", Sequent((concl,), concl))),
        index=0,
    )
    proof = ProofTree("cut", Sequent(hyps + hyps, concl), (e1, applied))
    # contract the doubled context back down, one hypothesis at a time
    for i in range(len(hyps)):
        proof = ProofTree(
            "contr", Sequent(hyps + hyps[i + 1 :], concl), (proof,), index=i
        )
    return proof


# --------------------------------- interderivability of lolli-l and lolli-e


def rewrite_lolli_l(p: ProofTree) -> ProofTree:
    """Replace a root lolli-l by the cut-and-application derivation with
    the same conclusion: apply an identity lolli to the argument, then cut
    the result into the second premise."""
    if p.rule != "lolli-l":
        raise ValueError(f"expected a lolli-l node, got {p.rule}")
    target = p.conclusion.hyps[p.index]
    assert isinstance(target, LImpl)
    p_arg, p_rest = p.premises
    ident = ProofTree("id", Sequent((target,), target))
    applied = ProofTree(
        "lolli-e",
        Sequent((target,) + p_arg.conclusion.hyps, target.right),
        (ident, p_arg),
    )
    return ProofTree("cut", p.conclusion, (applied, p_rest))


def rewrite_lolli_e(p: ProofTree) -> ProofTree:
    """Replace a root lolli-e by the cut-and-left-rule derivation with the
    same conclusion: cut the function premise into a lolli-l over an
    identity consequent."""
    if p.rule != "lolli-e":
        raise ValueError(f"expected a lolli-e node, got {p.rule}")
    fun = p.premises[0].conclusion.concl
    assert isinstance(fun, LImpl)
    p_fun, p_arg = p.premises
    left_node = ProofTree(
        "lolli-l",
        Sequent((fun,) + p_arg.conclusion.hyps, fun.right),
        (p_arg, ProofTree("id", Sequent((fun.right,), fun.right))),
        index=0,
    )
    return ProofTree("cut", p.conclusion, (p_fun, left_node))


def eliminate_lolli_l(p: ProofTree) -> ProofTree:
    """Rewrite every lolli-l node in the tree via rewrite_lolli_l."""
    q = ProofTree(
        p.rule,
        p.conclusion,
        tuple(eliminate_lolli_l(r) for r in p.premises),
        index=p.index,
        split=p.split,
    )
    return rewrite_lolli_l(q) if q.rule == "lolli-l" else q


# ------------------------------------------------------------ s-expressions


def format_formula_sexpr(f: Formula) -> str:
    match f:
        case Atom(n):
            return n
        case Conj(a, b):
            return f"(and {format_formula_sexpr(a)} {format_formula_sexpr(b)})"
        case Impl(a, b):
            return f"(implies {format_formula_sexpr(a)} {format_formula_sexpr(b)})"
        case LTensor(a, b):
            return f"(tensor {format_formula_sexpr(a)} {format_formula_sexpr(b)})"
        case LImpl(a, b):
            return f"(lolli {format_formula_sexpr(a)} {format_formula_sexpr(b)})"
        case LWith(a, b):
            return f"(with {format_formula_sexpr(a)} {format_formula_sexpr(b)})"
        case LBang(a):
            return f"(bang {format_formula_sexpr(a)})"
    raise TypeError(f"not a formula: {f!r}")


def format_sequent_sexpr(s: Sequent) -> str:
    hyps = "".join(" " + format_formula_sexpr(h) for h in s.hyps)
    return f"(seq (hyps{hyps}) {format_formula_sexpr(s.concl)})"


def format_proof_sexpr(p: ProofTree, indent: int = 0) -> str:
    head = p.rule if p.index is None else f"{p.rule}@{p.index}"
    if p.split is not None:
        head += " (split" + "".join(f" {i}" for i in p.split) + ")"
    first = "  " * indent + f"({head} {format_sequent_sexpr(p.conclusion)}"
    if not p.premises:
        return first + ")"
    lines = [first] + [format_proof_sexpr(q, indent + 1) for q in p.premises]
    return "\n".join(lines) + ")"


class _SexprError(ValueError):
    pass


def _tokenize(text: str) -> list[str]:
    import re

    return re.findall(r"[()]|[^()\s]+", text)


class _Tokens:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> str:
        if self.pos >= len(self.toks):
            raise _SexprError("unexpected end of input")
        return self.toks[self.pos]

    def next(self) -> str:
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise _SexprError(f"expected {tok!r}, got {got!r}")

    def done(self) -> None:
        if self.pos != len(self.toks):
            raise _SexprError(f"trailing input at {self.toks[self.pos]!r}")


_FORMULA_HEADS = {
    "and": Conj,
    "implies": Impl,
    "tensor": LTensor,
    "lolli": LImpl,
    "with": LWith,
}


def _parse_formula(ts: _Tokens) -> Formula:
    tok = ts.next()
    if tok != "(":
        if tok == ")":
            raise _SexprError("expected a formula")
        return Atom(tok)
    head = ts.next()
    if head == "bang":
        inner = _parse_formula(ts)
        ts.expect(")")
        return LBang(inner)
    if head not in _FORMULA_HEADS:
        raise _SexprError(f"unknown connective {head!r}")
    left = _parse_formula(ts)
    right = _parse_formula(ts)
    ts.expect(")")
    return _FORMULA_HEADS[head](left, right)


def _parse_sequent(ts: _Tokens) -> Sequent:
    ts.expect("(")
    ts.expect("seq")
    ts.expect("(")
    ts.expect("hyps")
    hyps = []
    while ts.peek() != ")":
        hyps.append(_parse_formula(ts))
    ts.expect(")")
    concl = _parse_formula(ts)
    ts.expect(")")
    return Sequent(tuple(hyps), concl)


def _parse_proof(ts: _Tokens) -> ProofTree:
    ts.expect("(")
    head = ts.next()
    if head in ("(", ")"):
        raise _SexprError("expected a rule name")
    rule, _, idx = head.partition("@")
    index = int(idx) if idx else None
    split = None
    if ts.peek() == "(" and ts.toks[ts.pos + 1] == "split":
        ts.expect("(")
        ts.expect("split")
        split = []
        while ts.peek() != ")":
            split.append(int(ts.next()))
        ts.expect(")")
        split = tuple(split)
    conclusion = _parse_sequent(ts)
    premises = []
    while ts.peek() != ")":
        premises.append(_parse_proof(ts))
    ts.expect(")")
    return ProofTree(rule, conclusion, tuple(premises), index=index, split=split)


def parse_formula_sexpr(text: str) -> Formula:
    ts = _Tokens(text)
    f = _parse_formula(ts)
    ts.done()
    return f


def parse_sequent_sexpr(text: str) -> Sequent:
    ts = _Tokens(text)
    s = _parse_sequent(ts)
    ts.done()
    return s


def parse_proof_sexpr(text: str) -> ProofTree:
    ts = _Tokens(text)
    p = _parse_proof(ts)
    ts.done()
    return p
