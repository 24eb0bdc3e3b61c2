"""Beta reduction, eta contraction and decision of convertibility.

Reduction is normal order: the leftmost-outermost redex is contracted
first, so a normal form is reached whenever one exists.  ``normalize``
is fuelled because untyped inputs may diverge; well-typed terms are
strongly normalizing and never exhaust a reasonable budget.

Convertibility of typed terms is decided by comparing beta-eta-normal
forms up to alpha equivalence.  Eta laws exist only at function and
product types, so on the linear fragment the comparison is beta-only.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from . import surface
from .syntax import (
    App,
    Lam,
    LetTensor,
    LetWith,
    Pair,
    Proj,
    TensorIntro,
    Term,
    Type,
    Var,
    WithPair,
    alpha_equal,
    free_vars,
    is_intuitionistic_type,
    is_linear_type,
    simultaneous_substitute,
    substitute,
)
from .typesys import (
    Context,
    Derivation,
    LinearityViolation,
    TypeMismatch,
    UnboundVariable,
    typecheck_linear,
    typecheck_stlc,
)

DEFAULT_FUEL = 10_000


class FuelExhausted(Exception):
    """normalize ran out of steps; the input is presumably untypable."""


class IllTyped(Exception):
    """decide_conversion was given a term that does not typecheck."""


@dataclass(frozen=True)
class ReductionStep:
    """One contraction: the redex found at path was replaced by after.

    The path names the chain of subterm fields from the root ("/" for the
    root itself), for instance "/fun/body".
    """

    path: str
    rule: str
    before: Term
    after: Term


def _contract(t: Term) -> tuple[str, Term] | None:
    """Contract t itself if it is a redex.  Pair and WithPair are read as
    the same additive pair, so either form reacts with Proj and LetWith."""
    match t:
        case App(Lam(x, b), a):
            return "beta-arrow", substitute(b, a, x)
        case Proj(i, Pair(l, r)) | Proj(i, WithPair(l, r)):
            return f"beta-proj{i}", l if i == 1 else r
        case LetTensor(x, y, TensorIntro(l, r), b):
            return "beta-let-tensor", simultaneous_substitute(b, ((x, l), (y, r)))
        case LetWith(k, x, Pair(l, r), b) | LetWith(k, x, WithPair(l, r), b):
            return f"beta-with{k}", substitute(b, l if k == 1 else r, x)
    return None


_CHILD_FIELDS = {
    App: ("fun", "arg"),
    Lam: ("body",),
    Pair: ("left", "right"),
    Proj: ("of",),
    TensorIntro: ("left", "right"),
    LetTensor: ("scrutinee", "body"),
    WithPair: ("left", "right"),
    LetWith: ("scrutinee", "body"),
    Var: (),
}


def reduce_once(t: Term) -> tuple[Term, ReductionStep] | None:
    """Contract the leftmost-outermost redex; None when t is normal."""

    def walk(t: Term, path: tuple[str, ...]):
        hit = _contract(t)
        if hit is not None:
            rule, after = hit
            return after, ReductionStep("/" + "/".join(path), rule, t, after)
        for field in _CHILD_FIELDS[type(t)]:
            sub = getattr(t, field)
            result = walk(sub, path + (field,))
            if result is not None:
                new_sub, step = result
                return dataclasses.replace(t, **{field: new_sub}), step
        return None

    return walk(t, ())


def normalize_trace(
    t: Term, fuel: int = DEFAULT_FUEL
) -> tuple[Term, tuple[ReductionStep, ...]]:
    """Normal form of t with the full reduction sequence."""
    if fuel < 1:
        raise ValueError(f"fuel must be positive, got {fuel}")
    steps: list[ReductionStep] = []
    for _ in range(fuel):
        result = reduce_once(t)
        if result is None:
            return t, tuple(steps)
        t, step = result
        steps.append(step)
    if reduce_once(t) is None:
        return t, tuple(steps)
    raise FuelExhausted(f"no normal form within {fuel} steps")


def normalize(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """Beta-normal form of t; raises FuelExhausted on divergence."""
    return normalize_trace(t, fuel)[0]


def format_trace(steps, unicode: bool = False) -> str:
    arrow = "⟶" if unicode else "-->"
    return "\n".join(
        f"{s.path}  {s.rule}  {surface.format_term(s.before, unicode)} "
        f"{arrow} {surface.format_term(s.after, unicode)}"
        for s in steps
    )


# --------------------------------------------------------------------- eta


def eta_contract(t: Term, typing: Derivation) -> Term:
    """Contract eta redexes to a fixed point.

    The typing derivation certifies that t is well typed in the simply
    typed fragment; on such terms the two eta laws are recognized purely
    syntactically, because the subterms in question can only have the
    function or product type the law needs.  On beta-normal input the
    result is beta-eta-normal.
    """
    if typing.system != "stlc":
        raise TypeMismatch("eta contraction applies to the simply typed fragment only")
    if not alpha_equal(typing.conclusion.subject, t):
        raise TypeMismatch(
            f"typing derivation concludes {typing.conclusion.subject}, not {t}"
        )
    return _eta_fixpoint(t)


def _eta_once(t: Term) -> Term:
    match t:
        case Lam(x, App(f, Var(y))) if y == x and x not in free_vars(f):
            return f
        case Pair(Proj(1, v), Proj(2, w)) if alpha_equal(v, w):
            return v
    return t


def _eta_fixpoint(t: Term) -> Term:
    while True:
        new = _eta_pass(t)
        if new == t:
            return t
        t = new


def _eta_pass(t: Term) -> Term:
    rebuilt = dataclasses.replace(
        t,
        **{f: _eta_pass(getattr(t, f)) for f in _CHILD_FIELDS[type(t)]},
    )
    return _eta_once(rebuilt)


# -------------------------------------------------------------- conversion


def decide_conversion(
    ctx: Context, t: Term, u: Term, type: Type, fuel: int = DEFAULT_FUEL
) -> bool:
    """Are t and u convertible at the given context and type?

    Both sides must typecheck (simply typed or linear, by the fragment of
    the types involved; types built from bases alone are read as simply
    typed); otherwise IllTyped is raised.  Equality is decided on
    beta-eta-normal forms up to alpha for the simply typed fragment and
    on beta-normal forms for the linear one.
    """
    types = [type, *(T for _, T in ctx)]
    if all(is_intuitionistic_type(T) for T in types):
        check = typecheck_stlc
    elif all(is_linear_type(T, allow_bang=False) for T in types):
        check = typecheck_linear
    else:
        raise IllTyped("context and type mix the simply typed and linear fragments")
    try:
        check(ctx, t, type)
        check(ctx, u, type)
    except (TypeMismatch, UnboundVariable, LinearityViolation) as e:
        raise IllTyped(str(e)) from None

    tn = normalize(t, fuel)
    un = normalize(u, fuel)
    if check is typecheck_stlc:
        tn = eta_contract(tn, typecheck_stlc(ctx, tn, type))
        un = eta_contract(un, typecheck_stlc(ctx, un, type))
    return alpha_equal(tn, un)
