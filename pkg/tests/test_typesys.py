"""Tests for type checking, principal inference and linear checking."""

from __future__ import annotations

import dataclasses
import itertools
import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from lamcat.gen import STANDARD_CONTEXT, random_intuitionistic_type, random_stlc_term
from lamcat.surface import parse_term, parse_type
from lamcat.syntax import (
    App,
    Arrow,
    Bang,
    Base,
    Lam,
    LetTensor,
    LetWith,
    Lollipop,
    Pair,
    Product,
    Tensor,
    TensorIntro,
    TVar,
    Var,
    With,
    WithPair,
    alpha_equal,
    substitute,
    type_vars,
)
from lamcat.typesys import (
    Derivation,
    Judgement,
    LinearityViolation,
    NotTypable,
    TypeMismatch,
    UnboundVariable,
    derivation_text,
    infer_principal_type,
    typecheck_linear,
    typecheck_stlc,
)

B = Base("b")


# ----------------------------------------------------------------- oracles


def subst_tvars(t, mapping):
    """Replace type variables by given types (oracle for instance checks)."""
    match t:
        case TVar(n):
            return mapping.get(n, t)
        case Base(_):
            return t
        case Arrow(a, b):
            return Arrow(subst_tvars(a, mapping), subst_tvars(b, mapping))
        case Product(a, b):
            return Product(subst_tvars(a, mapping), subst_tvars(b, mapping))
        case Tensor(a, b):
            return Tensor(subst_tvars(a, mapping), subst_tvars(b, mapping))
        case Lollipop(a, b):
            return Lollipop(subst_tvars(a, mapping), subst_tvars(b, mapping))
        case With(a, b):
            return With(subst_tvars(a, mapping), subst_tvars(b, mapping))
        case Bang(a):
            return Bang(subst_tvars(a, mapping))
    raise AssertionError(t)


def matches(general, specific, out=None):
    """One-way matching: is specific a substitution instance of general?"""
    if out is None:
        out = {}
    match general:
        case TVar(n):
            if n in out:
                return out[n] == specific
            out[n] = specific
            return True
        case Base(_):
            return general == specific
    if type(general) is not type(specific):
        return False
    return all(
        matches(getattr(general, f.name), getattr(specific, f.name), out)
        for f in dataclasses.fields(general)
    )


# -------------------------------------------------------------- strategies

_monotypes = st.recursive(
    st.just(B),
    lambda s: st.builds(Arrow, s, s) | st.builds(Product, s, s),
    max_leaves=4,
)

_linear_types = st.recursive(
    st.sampled_from([Base("b"), Base("c")]),
    lambda s: st.builds(Lollipop, s, s) | st.builds(Tensor, s, s) | st.builds(With, s, s),
    max_leaves=3,
)


_ALL_LINEAR_OPS = ("abs", "app_var", "tensor", "let_tensor", "with_pair", "let_with")


@st.composite
def linear_triples(draw, ops=_ALL_LINEAR_OPS):
    """Correct-by-construction linear sequents: (ctx, term, type)."""
    counter = itertools.count()

    def fresh() -> str:
        return f"v{next(counter)}"

    def leaf():
        T = draw(_linear_types)
        x = fresh()
        return ((x, T),), Var(x), T

    ctx, t, T = leaf()
    for _ in range(draw(st.integers(min_value=0, max_value=6))):
        op = draw(st.sampled_from(ops))
        if op == "abs" and ctx:
            i = draw(st.integers(0, len(ctx) - 1))
            x, A = ctx[i]
            ctx, t, T = ctx[:i] + ctx[i + 1 :], Lam(x, t), Lollipop(A, T)
        elif op == "app_var":
            f = fresh()
            Bty = draw(_linear_types)
            ctx, t, T = ctx + ((f, Lollipop(T, Bty)),), App(Var(f), t), Bty
        elif op == "tensor":
            ctx2, u, U = leaf()
            ctx, t, T = ctx + ctx2, TensorIntro(t, u), Tensor(T, U)
        elif op == "let_tensor" and len(ctx) >= 2:
            i = draw(st.integers(0, len(ctx) - 2))
            (x, A), (y, Bty) = ctx[i], ctx[i + 1]
            z = fresh()
            rest = ctx[:i] + ctx[i + 2 :]
            ctx, t, T = rest + ((z, Tensor(A, Bty)),), LetTensor(x, y, Var(z), t), T
        elif op == "with_pair":
            ctx, t, T = ctx, WithPair(t, t), With(T, T)
        elif op == "let_with" and ctx:
            i = draw(st.integers(0, len(ctx) - 1))
            x, A = ctx[i]
            z = fresh()
            kept = draw(st.sampled_from([1, 2]))
            other = draw(_linear_types)
            scrut_ty = With(A, other) if kept == 1 else With(other, A)
            rest = ctx[:i] + ctx[i + 1 :]
            ctx, t, T = rest + ((z, scrut_ty),), LetWith(kept, x, Var(z), t), T
    return ctx, t, T


# ------------------------------------------------------- simply typed: check


def test_check_application_chain():
    ctx = (("f", parse_type("b -> b")), ("x", B))
    d = typecheck_stlc(ctx, parse_term("f (f x)"), B)
    assert derivation_text(d) == "\n".join(
        [
            "app  f : b -> b, x : b |- f (f x) : b",
            "  var  f : b -> b, x : b |- f : b -> b",
            "  app  f : b -> b, x : b |- f x : b",
            "    var  f : b -> b, x : b |- f : b -> b",
            "    var  f : b -> b, x : b |- x : b",
        ]
    )


def test_check_identity_abstraction():
    d = typecheck_stlc((), parse_term("\\x. x"), parse_type("b -> b"))
    assert derivation_text(d) == "\n".join(
        [
            "abs  |- \\x. x : b -> b",
            "  var  x : b |- x : b",
        ]
    )


def test_check_pair_and_projections():
    d = typecheck_stlc(
        (("p", parse_type("b * c")),),
        parse_term("<snd p, fst p>"),
        parse_type("c * b"),
    )
    assert d.rule == "pair"
    assert [p.rule for p in d.premises] == ["proj2", "proj1"]


def test_check_shadowing_binder_is_freshened():
    d = typecheck_stlc((("x", B),), parse_term("(\\x. x) x"), B)
    assert alpha_equal(d.conclusion.subject, parse_term("(\\x0. x0) x"))
    assert d.conclusion.subject == parse_term("(\\x0. x0) x")


def test_check_unconstrained_interior_type_defaults_to_base():
    # The discarded pair component never meets a constraint; it is reported
    # as the base type rather than a metavariable.
    d = typecheck_stlc((), parse_term("\\x. fst <x, \\y. y>"), parse_type("b -> b"))
    pair_node = d.premises[0].premises[0]
    assert pair_node.rule == "pair"
    assert pair_node.conclusion.type == parse_type("b * (b -> b)")


def test_check_rejects_wrong_type():
    with pytest.raises(TypeMismatch):
        typecheck_stlc((), parse_term("\\x. x"), parse_type("b -> c"))


def test_check_rejects_unbound_variable():
    with pytest.raises(UnboundVariable):
        typecheck_stlc((), Var("q"), B)


def test_check_rejects_linear_syntax():
    with pytest.raises(TypeMismatch):
        typecheck_stlc((("x", B), ("y", B)), parse_term("x * y"), parse_type("b * b"))


def test_check_rejects_linear_context_type():
    with pytest.raises(TypeMismatch):
        typecheck_stlc((("x", parse_type("b -o b")),), Var("x"), parse_type("b -o b"))


def test_check_rejects_duplicate_context_names():
    with pytest.raises(TypeMismatch):
        typecheck_stlc((("x", B), ("x", B)), Var("x"), B)


def test_check_self_application_fails_occurs():
    with pytest.raises(TypeMismatch):
        typecheck_stlc(
            (("x", parse_type("b -> b")),), parse_term("x x"), parse_type("b")
        )


_STLC_RULES = {"var": 0, "abs": 1, "app": 2, "pair": 2, "proj1": 1, "proj2": 1}


def _well_formed(d: Derivation, rules) -> None:
    assert d.rule in rules
    assert len(d.premises) == rules[d.rule]
    for p in d.premises:
        _well_formed(p, rules)


def test_check_derivation_shape():
    d = typecheck_stlc(
        (("p", parse_type("b * (b -> b)")),),
        parse_term("(snd p) (fst p)"),
        B,
    )
    _well_formed(d, _STLC_RULES)


# ------------------------------------------------------ principal inference

# Expected principal types, verified below by checking the term against the
# type and against random substitution instances of it.
INFERENCE_CORPUS = [
    ("\\x. x", "'a -> 'a"),
    ("\\f. \\x. f x", "('a -> 'b) -> 'a -> 'b"),
    ("\\x. \\y. \\z. x (y z)", "('a -> 'b) -> ('c -> 'a) -> 'c -> 'b"),
    ("\\x. \\y. \\z. x z y", "('a -> 'b -> 'c) -> 'b -> 'a -> 'c"),
    ("\\x. \\y. x y y", "('a -> 'a -> 'b) -> 'a -> 'b"),
    ("\\x. \\y. x", "'a -> 'b -> 'a"),
    ("\\x. \\y. \\z. x z (y z)", "('a -> 'b -> 'c) -> ('a -> 'b) -> 'a -> 'c"),
    ("\\x. <x, x>", "'a -> 'a * 'a"),
    ("\\p. <snd p, fst p>", "'a * 'b -> 'b * 'a"),
    ("\\p. fst p", "'a * 'b -> 'a"),
]


@pytest.mark.parametrize("src,expected", INFERENCE_CORPUS)
def test_principal_type_corpus(src, expected):
    assert infer_principal_type(parse_term(src)) == parse_type(expected)


@pytest.mark.parametrize(
    "src",
    ["\\x. x x", "\\f. (\\x. f (x x)) (\\x. f (x x))", "\\x. x x x"],
)
def test_self_application_shapes_are_not_typable(src):
    with pytest.raises(NotTypable):
        infer_principal_type(parse_term(src))


def test_infer_rejects_open_terms():
    with pytest.raises(UnboundVariable):
        infer_principal_type(parse_term("f x"))


def test_infer_rejects_linear_syntax():
    with pytest.raises(NotTypable):
        infer_principal_type(parse_term("\\x. let y * z = x in y * z"))


_COMBINATORS = {
    "i": "\\x. x",
    "k": "\\x. \\y. x",
    "s": "\\x. \\y. \\z. x z (y z)",
    "b": "\\x. \\y. \\z. x (y z)",
    "c": "\\x. \\y. \\z. x z y",
    "w": "\\x. \\y. x y y",
}

_combinator_trees = st.recursive(
    st.sampled_from(sorted(_COMBINATORS)),
    lambda s: st.tuples(s, s),
    max_leaves=5,
)


def _build(tree):
    if isinstance(tree, str):
        return parse_term(_COMBINATORS[tree])
    return App(_build(tree[0]), _build(tree[1]))


def _ground(ty, mapping=None):
    # Checking expects variable-free types, so instantiate every type
    # variable (default: the base type).
    full = {n: B for n in type_vars(ty)}
    if mapping:
        full.update(mapping)
    return subst_tvars(ty, full)


@given(_combinator_trees)
def test_inferred_type_checks(tree):
    # Soundness: whenever inference succeeds the term checks at any
    # instance of the inferred type.
    t = _build(tree)
    try:
        ty = infer_principal_type(t)
    except NotTypable:
        assume(False)
    d = typecheck_stlc((), t, _ground(ty))
    assert d.conclusion == Judgement((), t, _ground(ty))


@given(_combinator_trees, st.dictionaries(st.sampled_from("abc"), _monotypes))
def test_substitution_instances_of_principal_type_check(tree, mapping):
    t = _build(tree)
    try:
        ty = infer_principal_type(t)
    except NotTypable:
        assume(False)
    typecheck_stlc((), t, _ground(ty, mapping))


@given(_combinator_trees, _monotypes)
def test_checking_types_are_instances_of_the_principal_type(tree, ret):
    # Principality, sampled: any concrete type the term checks at must be
    # a substitution instance of the inferred one.
    t = _build(tree)
    try:
        ty = infer_principal_type(t)
    except NotTypable:
        assume(False)
    concrete = subst_tvars(ty, {n: ret for n in type_vars(ty)})
    typecheck_stlc((), t, concrete)
    assert matches(ty, concrete)


@given(_combinator_trees)
def test_weakening_preserves_checking(tree):
    t = _build(tree)
    try:
        ty = infer_principal_type(t)
    except NotTypable:
        assume(False)
    d = typecheck_stlc((("unused", parse_type("b * b")),), t, _ground(ty))
    assert d.conclusion.ctx == (("unused", parse_type("b * b")),)


# ------------------------------------------------------------------ linear


def test_linear_variable():
    d = typecheck_linear((("x", B),), Var("x"), B)
    assert derivation_text(d) == "var  x : b |- x : b"


def test_linear_identity():
    d = typecheck_linear((), parse_term("\\x. x"), parse_type("b -o b"))
    assert derivation_text(d) == "\n".join(
        [
            "abs  |- \\x. x : b -o b",
            "  var  x : b |- x : b",
        ]
    )
    assert derivation_text(d, unicode=True) == "\n".join(
        [
            "abs  ⊢ λx. x : b ⊸ b",
            "  var  x : b ⊢ x : b",
        ]
    )


def test_linear_tensor_splits_context():
    ctx = (("x", B), ("y", Base("c")))
    d = typecheck_linear(ctx, parse_term("x * y"), parse_type("b (x) c"))
    assert derivation_text(d) == "\n".join(
        [
            "tensor  x : b, y : c |- x * y : b (x) c",
            "  var  x : b |- x : b",
            "  var  y : c |- y : c",
        ]
    )


def test_linear_let_tensor_swap():
    ctx = (("z", parse_type("b (x) c")),)
    d = typecheck_linear(ctx, parse_term("let x * y = z in y * x"), parse_type("c (x) b"))
    assert derivation_text(d) == "\n".join(
        [
            "let-tensor  z : b (x) c |- let x * y = z in y * x : c (x) b",
            "  var  z : b (x) c |- z : b (x) c",
            "  tensor  x : b, y : c |- y * x : c (x) b",
            "    var  y : c |- y : c",
            "    var  x : b |- x : b",
        ]
    )


def test_linear_additive_pair_shares_context():
    d = typecheck_linear((("x", B),), parse_term("<x, x>"), parse_type("b & b"))
    assert d.rule == "with-pair"
    assert all(p.conclusion.ctx == (("x", B),) for p in d.premises)


def test_linear_let_with_discards_one_component():
    ctx = (("z", parse_type("b & c")),)
    d = typecheck_linear(ctx, parse_term("let <x, _> = z in x"), B)
    assert d.rule == "let-with1"
    d2 = typecheck_linear(ctx, parse_term("let <_, y> = z in y"), Base("c"))
    assert d2.rule == "let-with2"


def test_linear_composition():
    t = parse_term("\\f. \\g. \\x. g (f x)")
    ty = parse_type("(b -o c) -o (c -o d) -o b -o d")
    d = typecheck_linear((), t, ty)
    assert d.conclusion == Judgement((), t, ty)


def test_linear_rejects_weakening():
    with pytest.raises(LinearityViolation, match="unused"):
        typecheck_linear((("x", B), ("y", B)), Var("x"), B)
    with pytest.raises(LinearityViolation, match="unused"):
        typecheck_linear((), parse_term("\\x. \\y. x"), parse_type("b -o c -o b"))


def test_linear_rejects_contraction():
    with pytest.raises(LinearityViolation, match="more than once"):
        typecheck_linear((("x", B),), parse_term("x * x"), parse_type("b (x) b"))
    with pytest.raises(LinearityViolation, match="more than once"):
        typecheck_linear(
            (("x", parse_type("b -o b")),),
            parse_term("\\y. x (x y)"),
            parse_type("b -o b"),
        )


def test_linear_rejects_mismatched_additive_branches():
    with pytest.raises(LinearityViolation, match="different hypotheses"):
        typecheck_linear(
            (("x", B), ("y", B)), parse_term("<x, y>"), parse_type("b & b")
        )


def test_linear_rejects_bang_types():
    with pytest.raises(TypeMismatch, match="!"):
        typecheck_linear((("x", parse_type("!b")),), Var("x"), parse_type("!b"))
    with pytest.raises(TypeMismatch):
        typecheck_linear((), parse_term("\\x. x"), parse_type("!b -o !b"))


def test_linear_rejects_intuitionistic_syntax():
    with pytest.raises(TypeMismatch):
        typecheck_linear((("p", parse_type("b & b")),), parse_term("fst p"), B)


def test_linear_rejects_arrow_types():
    with pytest.raises(TypeMismatch):
        typecheck_linear((("x", parse_type("b -> b")),), Var("x"), parse_type("b -> b"))


def test_linear_self_application_reports_contraction():
    with pytest.raises(LinearityViolation):
        typecheck_linear((), parse_term("\\x. x x"), parse_type("(b -o b) -o b"))


_LINEAR_RULES = {
    "var": 0,
    "abs": 1,
    "app": 2,
    "tensor": 2,
    "let-tensor": 2,
    "with-pair": 2,
    "let-with1": 2,
    "let-with2": 2,
}


@given(linear_triples())
def test_linear_generated_sequents_check(triple):
    ctx, t, T = triple
    d = typecheck_linear(ctx, t, T)
    assert d.conclusion == Judgement(ctx, t, T)
    _well_formed(d, _LINEAR_RULES)

    def var_nodes_have_singleton_contexts(d: Derivation) -> None:
        if d.rule == "var":
            assert len(d.conclusion.ctx) == 1
        for p in d.premises:
            var_nodes_have_singleton_contexts(p)

    var_nodes_have_singleton_contexts(d)


@given(linear_triples())
def test_linear_extra_hypothesis_is_rejected(triple):
    ctx, t, T = triple
    with pytest.raises(LinearityViolation):
        typecheck_linear(ctx + (("spare", Base("c")),), t, T)


@given(linear_triples())
def test_linear_duplication_is_rejected(triple):
    ctx, t, T = triple
    assume(ctx)
    with pytest.raises(LinearityViolation):
        typecheck_linear(ctx, TensorIntro(t, t), Tensor(T, T))


def _count_free(t, x) -> int:
    """Independent occurrence counter for the multiplicative fragment."""
    match t:
        case Var(y):
            return 1 if y == x else 0
        case App(f, a):
            return _count_free(f, x) + _count_free(a, x)
        case Lam(y, b):
            return 0 if y == x else _count_free(b, x)
        case TensorIntro(l, r) | Pair(l, r) | WithPair(l, r):
            return _count_free(l, x) + _count_free(r, x)
        case LetTensor(y, z, sc, b):
            n = _count_free(sc, x)
            return n if x in (y, z) else n + _count_free(b, x)
        case LetWith(_, y, sc, b):
            n = _count_free(sc, x)
            return n if x == y else n + _count_free(b, x)
    raise AssertionError(t)


@given(linear_triples(ops=("abs", "app_var", "tensor", "let_tensor")))
def test_multiplicative_terms_use_each_hypothesis_once(triple):
    ctx, t, T = triple
    typecheck_linear(ctx, t, T)
    for x, _ in ctx:
        assert _count_free(t, x) == 1


# ------------------------------------------------- cut / substitution


@given(st.integers(0, 10**9))
def test_substitution_preserves_typing(seed):
    # cut admissibility: ctx |- t : T and ctx, x:T |- u : U give
    # ctx |- u[t/x] : U
    rng = random.Random(seed)
    T = random_intuitionistic_type(rng)
    U = random_intuitionistic_type(rng)
    t = random_stlc_term(rng, STANDARD_CONTEXT, T, depth=2)
    u = random_stlc_term(rng, STANDARD_CONTEXT + (("cut0", T),), U, depth=2)
    typecheck_stlc(STANDARD_CONTEXT, substitute(u, t, "cut0"), U)
