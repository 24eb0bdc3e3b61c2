"""Seeded random generation of well-typed terms.

The generators are deterministic functions of a ``random.Random`` instance
so test failures reproduce from a seed.  Simply typed generation is
type-directed over the single base type ``b`` and requires the context to
ground that base (bind at least one variable of type ``b``), which makes
every goal inhabitable without backtracking.  Linear generation instead
builds sequents bottom-up, so the produced (context, term, type) triples
are well typed by construction.
"""

from __future__ import annotations

import itertools
import random

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
    all_vars,
    fresh_name,
)

BASE = Base("b")

# A context that grounds the base type and offers function and product
# hypotheses to eliminate.
STANDARD_CONTEXT: tuple[tuple[str, Type], ...] = (
    ("u", BASE),
    ("g", Arrow(BASE, BASE)),
    ("h", Arrow(BASE, Arrow(BASE, BASE))),
    ("p", Product(BASE, BASE)),
)


def random_intuitionistic_type(rng: random.Random, depth: int = 2) -> Type:
    if depth <= 0 or rng.random() < 0.4:
        return BASE
    left = random_intuitionistic_type(rng, depth - 1)
    right = random_intuitionistic_type(rng, depth - 1)
    return Arrow(left, right) if rng.random() < 0.6 else Product(left, right)


def random_linear_type(rng: random.Random, depth: int = 2) -> Type:
    if depth <= 0 or rng.random() < 0.4:
        return rng.choice([Base("b"), Base("c")])
    left = random_linear_type(rng, depth - 1)
    right = random_linear_type(rng, depth - 1)
    ctor = rng.choice([Lollipop, Tensor, With])
    return ctor(left, right)


def _elim_path(have: Type, want: Type, limit: int = 4):
    """Shortest chain of app/proj steps turning a `have` hypothesis into
    `want`, or None."""
    if have == want:
        return []
    if limit <= 0:
        return None
    match have:
        case Arrow(a, b):
            rest = _elim_path(b, want, limit - 1)
            return None if rest is None else [("app", a), *rest]
        case Product(l, r):
            for i, comp in ((1, l), (2, r)):
                rest = _elim_path(comp, want, limit - 1)
                if rest is not None:
                    return [("proj", i), *rest]
    return None


def random_stlc_term(
    rng: random.Random,
    ctx: tuple[tuple[str, Type], ...],
    ty: Type,
    depth: int = 3,
    redex_prob: float = 0.3,
) -> Term:
    """A term of the given type over ctx, salted with beta redexes.

    ctx must bind a variable of the base type ``b`` and all types involved
    must use that single base.
    """
    counter = itertools.count()
    taken = {x for x, _ in ctx}

    def fresh() -> str:
        while True:
            name = f"v{next(counter)}"
            if name not in taken:
                taken.add(name)
                return name

    def grounded(env) -> bool:
        return any(T == BASE for _, T in env)

    def gen(env: list[tuple[str, Type]], ty: Type, depth: int) -> Term:
        if depth > 0 and grounded(env) and rng.random() < redex_prob:
            return redex(env, ty, depth)
        options = []
        direct = [x for x, T in env if T == ty]
        if direct:
            options.append("var")
        if isinstance(ty, Arrow):
            options.append("abs")
        if isinstance(ty, Product):
            options.append("pair")
        elims = []
        if depth > 0 or not options:
            for x, T in env:
                path = _elim_path(T, ty)
                if path:
                    elims.append((x, path))
            if elims:
                options.append("elim")
        match rng.choice(options):
            case "var":
                return Var(rng.choice(direct))
            case "abs":
                x = fresh()
                return Lam(x, gen(env + [(x, ty.dom)], ty.cod, depth - 1))
            case "pair":
                return Pair(
                    gen(env, ty.left, depth - 1), gen(env, ty.right, depth - 1)
                )
            case "elim":
                x, path = rng.choice(elims)
                t: Term = Var(x)
                for kind, data in path:
                    if kind == "app":
                        t = App(t, gen(env, data, max(depth - 1, 0)))
                    else:
                        t = Proj(data, t)
                return t
        raise AssertionError

    def redex(env: list[tuple[str, Type]], ty: Type, depth: int) -> Term:
        if rng.random() < 0.5:
            a = random_intuitionistic_type(rng, 1)
            z = fresh()
            body = gen(env + [(z, a)], ty, depth - 1)
            return App(Lam(z, body), gen(env, a, depth - 1))
        other = random_intuitionistic_type(rng, 1)
        if rng.random() < 0.5:
            return Proj(1, Pair(gen(env, ty, depth - 1), gen(env, other, depth - 1)))
        return Proj(2, Pair(gen(env, other, depth - 1), gen(env, ty, depth - 1)))

    if not grounded(ctx):
        raise ValueError("context must bind a variable of the base type b")
    return gen(list(ctx), ty, depth)


def random_stlc_triple(rng: random.Random, depth: int = 3):
    """(STANDARD_CONTEXT, term, type) with the term well typed over it."""
    ty = random_intuitionistic_type(rng)
    return STANDARD_CONTEXT, random_stlc_term(rng, STANDARD_CONTEXT, ty, depth), ty


def random_linear_triple(rng: random.Random, steps: int = 6):
    """A linear sequent (ctx, term, type), well typed by construction."""
    counter = itertools.count()

    def fresh() -> str:
        return f"v{next(counter)}"

    def leaf():
        T = random_linear_type(rng, 1)
        x = fresh()
        return ((x, T),), Var(x), T

    ctx, t, T = leaf()
    for _ in range(rng.randrange(steps + 1)):
        op = rng.choice(
            ["abs", "app_var", "tensor", "let_tensor", "with_pair", "let_with"]
        )
        if op == "abs" and ctx:
            i = rng.randrange(len(ctx))
            x, A = ctx[i]
            ctx, t, T = ctx[:i] + ctx[i + 1 :], Lam(x, t), Lollipop(A, T)
        elif op == "app_var":
            f = fresh()
            B = random_linear_type(rng, 1)
            ctx, t, T = ctx + ((f, Lollipop(T, B)),), App(Var(f), t), B
        elif op == "tensor":
            ctx2, u, U = leaf()
            ctx, t, T = ctx + ctx2, TensorIntro(t, u), Tensor(T, U)
        elif op == "let_tensor" and len(ctx) >= 2:
            i = rng.randrange(len(ctx) - 1)
            (x, A), (y, B) = ctx[i], ctx[i + 1]
            z = fresh()
            rest = ctx[:i] + ctx[i + 2 :]
            ctx, t, T = rest + ((z, Tensor(A, B)),), LetTensor(x, y, Var(z), t), T
        elif op == "with_pair":
            t, T = WithPair(t, t), With(T, T)
        elif op == "let_with" and ctx:
            i = rng.randrange(len(ctx))
            x, A = ctx[i]
            z = fresh()
            kept = rng.choice([1, 2])
            other = random_linear_type(rng, 1)
            scrut = With(A, other) if kept == 1 else With(other, A)
            ctx, t, T = (
                ctx[:i] + ctx[i + 1 :] + ((z, scrut),),
                LetWith(kept, x, Var(z), t),
                T,
            )
    return ctx, t, T


def beta_expand_linear(rng: random.Random, t: Term) -> Term:
    """Wrap t in one beta redex that contracts back to t (linearly typed)."""
    z = "w0"
    while z in all_vars(t):
        z += "0"
    choices = ["arrow", "with"]
    if isinstance(t, TensorIntro):
        choices.append("tensor")
    match rng.choice(choices):
        case "arrow":
            return App(Lam(z, Var(z)), t)
        case "with":
            kept = rng.choice([1, 2])
            return LetWith(kept, z, WithPair(t, t), Var(z))
        case "tensor":
            z2 = z + "1"
            while z2 in all_vars(t):
                z2 += "1"
            return LetTensor(z, z2, t, TensorIntro(Var(z), Var(z2)))
    raise AssertionError


# A compact context whose interpretation stays small at base sizes up
# to 3, so convertibility pairs can be compared as finite tables.
SMALL_CONTEXT: tuple[tuple[str, Type], ...] = (
    ("u", BASE),
    ("g", Arrow(BASE, BASE)),
)


def expand_stlc(
    rng: random.Random,
    ctx: tuple[tuple[str, Type], ...],
    t: Term,
    ty: Type,
) -> Term:
    """Wrap t in one redex or eta-expansion that converts back to t.

    The result is well typed over ctx at the same type.  Contracted
    arguments are drawn from the context, so ctx must be nonempty.
    """
    z = fresh_name(all_vars(t) | {x for x, _ in ctx})
    picks = ["identity", "constant", "projection"]
    if isinstance(ty, Arrow):
        picks.append("eta_arrow")
    if isinstance(ty, Product):
        picks.append("eta_pair")
    pick = rng.choice(picks)
    arg, _ = ctx[rng.randrange(len(ctx))]
    match pick:
        case "identity":
            return App(Lam(z, Var(z)), t)
        case "constant":
            return App(Lam(z, t), Var(arg))
        case "projection":
            return Proj(1, Pair(t, Var(arg)))
        case "eta_arrow":
            return Lam(z, App(t, Var(z)))
        case "eta_pair":
            return Pair(Proj(1, t), Proj(2, t))
    raise AssertionError


def random_conversion_pair(rng: random.Random, depth: int = 3):
    """(SMALL_CONTEXT, t, u, type) with u convertible to t by construction.

    u wraps t in one to three random redexes and eta-expansions, so the
    pair exercises the conversion checker and any semantics that claims
    to respect it.
    """
    ty = random_intuitionistic_type(rng, 1)
    t = random_stlc_term(rng, SMALL_CONTEXT, ty, depth)
    u = t
    for _ in range(rng.randint(1, 3)):
        u = expand_stlc(rng, SMALL_CONTEXT, u, ty)
    return SMALL_CONTEXT, t, u, ty


def random_curry_naturality_instance(rng: random.Random):
    """Two morphisms that must agree extensionally.

    Builds f : C * A -> B and g : C' -> C from random well-typed terms
    and returns (Curry(f) o g, Curry(f o (g x id))).  Both sides have
    type C' -> (A => B).
    """
    from .ccc import Compose, Curry, Id, Pairing, Terminal, cross, translate_stlc, type_object
    from .typesys import typecheck_stlc

    # Keep the function space A => B enumerable at base size 3.
    arg_ty = rng.choice([BASE, BASE, Product(BASE, BASE)])
    res_ty = BASE if isinstance(arg_ty, Product) else random_intuitionistic_type(rng, 1)
    ctx_f = (("u", BASE), ("x", arg_ty))
    f = translate_stlc(
        typecheck_stlc(ctx_f, random_stlc_term(rng, ctx_f, res_ty, 3), res_ty)
    )
    ctx_g = (("u", BASE), ("y", random_intuitionistic_type(rng, 1)))
    body = random_stlc_term(rng, ctx_g, BASE, 3)
    g0 = translate_stlc(typecheck_stlc(ctx_g, body, BASE))
    g = Pairing(Terminal(g0.dom), g0)
    lhs = Compose(Curry(f), g)
    rhs = Curry(Compose(f, cross(g, Id(type_object(arg_ty)))))
    return lhs, rhs


def random_substitution_instance(rng: random.Random):
    """Two morphisms realizing substitution before versus after translation.

    Picks a term t over STANDARD_CONTEXT plus one replacement term per
    context entry, all over SMALL_CONTEXT.  Returns (direct, composite)
    where direct translates the substituted term and composite
    postcomposes the translation of t with the tupled replacement
    translations; the two must agree extensionally.
    """
    from .ccc import CCCMor, Compose, Pairing, Terminal, context_object, translate_stlc
    from .syntax import simultaneous_substitute
    from .typesys import typecheck_stlc

    ty = random_intuitionistic_type(rng, 1)
    t = random_stlc_term(rng, STANDARD_CONTEXT, ty, 3)
    subs = [
        (x, random_stlc_term(rng, SMALL_CONTEXT, entry, 2))
        for x, entry in STANDARD_CONTEXT
    ]
    substituted = simultaneous_substitute(t, subs)
    direct = translate_stlc(typecheck_stlc(SMALL_CONTEXT, substituted, ty))
    tup: CCCMor = Terminal(context_object(SMALL_CONTEXT))
    for (_, entry), (_, replacement) in zip(STANDARD_CONTEXT, subs):
        piece = translate_stlc(typecheck_stlc(SMALL_CONTEXT, replacement, entry))
        tup = Pairing(tup, piece)
    composite = Compose(
        translate_stlc(typecheck_stlc(STANDARD_CONTEXT, t, ty)), tup
    )
    return direct, composite
