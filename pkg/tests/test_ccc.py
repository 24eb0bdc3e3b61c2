"""Tests for the cartesian-closed semantics of typed terms."""

from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lamcat.ccc import (
    BaseObj,
    Compose,
    Curry,
    Ev,
    Exp,
    Id,
    Pairing,
    Prod,
    Proj1,
    Proj2,
    SoundnessVerdict,
    Terminal,
    Unit,
    check_soundness,
    context_object,
    cross,
    eval_finset,
    format_mor,
    format_obj,
    format_table,
    obj_size,
    table_rows,
    translate_stlc,
    type_object,
)
from lamcat.finset import SizeOverflow
from lamcat.gen import (
    SMALL_CONTEXT,
    random_conversion_pair,
    random_curry_naturality_instance,
    random_stlc_term,
    random_substitution_instance,
)
from lamcat.syntax import (
    App,
    Arrow,
    Base,
    Lam,
    Lollipop,
    Pair,
    Product,
    Proj,
    TVar,
    Var,
)
from lamcat.typesys import typecheck_linear, typecheck_stlc

b = Base("b")
B = BaseObj("b")


def translate(ctx, term, ty):
    return translate_stlc(typecheck_stlc(ctx, term, ty))


def term_morphism(rng: random.Random, ty, depth: int = 3):
    """Translation of a random well-typed term over SMALL_CONTEXT."""
    t = random_stlc_term(rng, SMALL_CONTEXT, ty, depth)
    return translate(SMALL_CONTEXT, t, ty)


class TestObjects:
    def test_types_map_to_objects(self):
        assert type_object(b) == B
        assert type_object(Arrow(b, b)) == Exp(B, B)
        assert type_object(Product(b, Arrow(b, b))) == Prod(B, Exp(B, B))

    def test_linear_types_are_rejected(self):
        with pytest.raises(ValueError):
            type_object(Lollipop(b, b))

    def test_inference_variables_are_rejected(self):
        with pytest.raises(ValueError):
            type_object(TVar("a"))

    def test_context_object_nests_to_the_left(self):
        ctx = (("x", b), ("y", Arrow(b, b)))
        assert context_object(ctx) == Prod(Prod(Unit(), B), Exp(B, B))
        assert context_object(()) == Unit()

    def test_sizes(self):
        sizes = {"b": 3}
        assert obj_size(Unit(), sizes) == 1
        assert obj_size(Prod(B, B), sizes) == 9
        assert obj_size(Exp(B, B), sizes) == 27
        assert obj_size(Exp(Exp(B, B), B), sizes) == 3**27

    def test_size_requires_assignment(self):
        with pytest.raises(ValueError):
            obj_size(BaseObj("c"), {"b": 2})
        with pytest.raises(ValueError):
            obj_size(B, {"b": 0})

    def test_object_formatting(self):
        o = Exp(Prod(B, B), B)
        assert format_obj(o) == "((b * b) => b)"
        assert format_obj(o, unicode=True) == "((b × b) ⇒ b)"
        assert format_obj(Unit()) == "1"


class TestConstruction:
    def test_compose_checks_endpoints(self):
        with pytest.raises(ValueError):
            Compose(Proj1(B, B), Id(B))

    def test_pairing_checks_shared_domain(self):
        with pytest.raises(ValueError):
            Pairing(Id(B), Id(Unit()))

    def test_curry_needs_product_domain(self):
        with pytest.raises(ValueError):
            Curry(Id(B))

    def test_endpoints(self):
        ev = Ev(B, B)
        assert ev.dom == Prod(Exp(B, B), B)
        assert ev.cod == B
        cur = Curry(Proj2(Unit(), B))
        assert cur.dom == Unit()
        assert cur.cod == Exp(B, B)
        assert Terminal(B).cod == Unit()
        f = cross(Id(B), Terminal(B))
        assert f.dom == Prod(B, B)
        assert f.cod == Prod(B, Unit())


class TestTranslation:
    def test_single_variable_is_second_projection(self):
        m = translate((("x", b),), Var("x"), b)
        assert m == Proj2(Unit(), B)

    def test_variable_depth_counts_from_the_right(self):
        ctx = (("x", b), ("y", b), ("z", b))
        ones = Prod(Unit(), B)
        twos = Prod(ones, B)
        assert translate(ctx, Var("z"), b) == Proj2(twos, B)
        assert translate(ctx, Var("y"), b) == Compose(
            Proj2(ones, B), Proj1(twos, B)
        )
        assert translate(ctx, Var("x"), b) == Compose(
            Proj2(Unit(), B), Compose(Proj1(ones, B), Proj1(twos, B))
        )

    def test_closed_identity_function(self):
        m = translate((), Lam("x", Var("x")), Arrow(b, b))
        assert m == Curry(Proj2(Unit(), B))

    def test_application_evaluates_a_pair(self):
        ctx = (("g", Arrow(b, b)), ("x", b))
        m = translate(ctx, App(Var("g"), Var("x")), b)
        assert isinstance(m, Compose)
        assert m.g == Ev(B, B)
        assert isinstance(m.f, Pairing)

    def test_pair_and_projections(self):
        ctx = (("x", b),)
        m = translate(ctx, Pair(Var("x"), Var("x")), Product(b, b))
        assert m == Pairing(Proj2(Unit(), B), Proj2(Unit(), B))
        m = translate(ctx, Proj(1, Pair(Var("x"), Var("x"))), b)
        assert isinstance(m, Compose) and m.g == Proj1(B, B)

    def test_shadowed_binder_wins(self):
        m = translate((("x", b),), Lam("x", Var("x")), Arrow(b, b))
        table = eval_finset(m, {"b": 2})
        assert all(value == (0, 1) for value in table.values)

    def test_linear_derivations_are_rejected(self):
        d = typecheck_linear((("x", b),), Var("x"), b)
        with pytest.raises(ValueError):
            translate_stlc(d)


class TestEvaluation:
    def test_identity_table(self):
        table = eval_finset(Id(B), {"b": 2})
        assert table.values == (0, 1)
        assert table.is_bijective

    def test_application_table_has_eight_rows(self):
        table = eval_finset(Ev(B, B), {"b": 2})
        assert len(table.dom) == 8
        assert table.values == (0, 0, 0, 1, 1, 0, 1, 1)

    def test_terminal_collapses_everything(self):
        table = eval_finset(Terminal(Prod(B, B)), {"b": 3})
        assert set(table.values) == {()}

    def test_curry_builds_function_values(self):
        m = translate((), Lam("x", Var("x")), Arrow(b, b))
        table = eval_finset(m, {"b": 3})
        assert table.values == ((0, 1, 2),)

    def test_overflow_reports_exact_size(self):
        with pytest.raises(SizeOverflow) as exc:
            eval_finset(Id(Exp(Exp(B, B), B)), {"b": 3})
        assert exc.value.size == 3**27

    def test_large_codomain_is_not_materialized(self):
        # A composite can pass through a huge object as long as the
        # table's own endpoints stay enumerable.
        wide = Exp(Exp(B, B), B)
        m = Compose(Terminal(wide), Compose(Id(wide), Id(wide)))
        with pytest.raises(SizeOverflow):
            eval_finset(m, {"b": 3})
        thin = Compose(Terminal(B), Id(B))
        assert eval_finset(thin, {"b": 3}).values == ((), (), ())

    @given(st.integers(0, 10**9))
    def test_pairing_projection_laws(self, seed):
        rng = random.Random(seed)
        f = term_morphism(rng, b, 2)
        g = term_morphism(rng, Arrow(b, b), 2)
        pair = Pairing(f, g)
        left = Compose(Proj1(f.cod, g.cod), pair)
        right = Compose(Proj2(f.cod, g.cod), pair)
        k = {"b": rng.randint(1, 3)}
        assert eval_finset(left, k).values == eval_finset(f, k).values
        assert eval_finset(right, k).values == eval_finset(g, k).values

    @given(st.integers(0, 10**9))
    def test_pairing_is_unique(self, seed):
        rng = random.Random(seed)
        h = term_morphism(rng, Product(b, b), 2)
        assert isinstance(h.cod, Prod)
        rebuilt = Pairing(
            Compose(Proj1(h.cod.left, h.cod.right), h),
            Compose(Proj2(h.cod.left, h.cod.right), h),
        )
        k = {"b": rng.randint(1, 3)}
        assert eval_finset(rebuilt, k).values == eval_finset(h, k).values

    @given(st.integers(0, 10**9))
    def test_curry_is_unique(self, seed):
        rng = random.Random(seed)
        h = term_morphism(rng, Arrow(b, b), 2)
        assert isinstance(h.cod, Exp)
        rebuilt = Curry(
            Compose(Ev(h.cod.arg, h.cod.res), cross(h, Id(h.cod.arg)))
        )
        k = {"b": rng.randint(1, 3)}
        assert eval_finset(rebuilt, k).values == eval_finset(h, k).values


class TestSoundness:
    def test_contracted_redex_agrees(self):
        ctx = (("y", b),)
        t = App(Lam("x", Var("x")), Var("y"))
        verdict = check_soundness(ctx, t, Var("y"), b, {"b": 3})
        assert verdict.ok and verdict.convertible
        assert bool(verdict)

    def test_pair_projection_agrees(self):
        ctx = SMALL_CONTEXT
        t = Proj(1, Pair(Var("u"), App(Var("g"), Var("u"))))
        verdict = check_soundness(ctx, t, Var("u"), b, {"b": 2})
        assert verdict.ok and verdict.convertible

    def test_eta_expansion_agrees(self):
        ctx = SMALL_CONTEXT
        t = Lam("x", App(Var("g"), Var("x")))
        verdict = check_soundness(ctx, t, Var("g"), Arrow(b, b), {"b": 3})
        assert verdict.ok and verdict.convertible

    def test_inconvertible_terms_are_reported_not_compared(self):
        verdict = check_soundness(
            SMALL_CONTEXT, Var("u"), App(Var("g"), Var("u")), b, {"b": 2}
        )
        assert verdict.ok and not verdict.convertible

    def test_failed_verdict_is_falsy(self):
        assert not SoundnessVerdict(False, True, witness=((), 0, 1))

    @given(st.integers(0, 10**9))
    def test_random_conversion_pairs_agree_at_all_sizes(self, seed):
        rng = random.Random(seed)
        ctx, t, u, ty = random_conversion_pair(rng)
        mt = translate(ctx, t, ty)
        mu = translate(ctx, u, ty)
        for k in (1, 2, 3):
            assert (
                eval_finset(mt, {"b": k}).values
                == eval_finset(mu, {"b": k}).values
            )

    def test_distinct_normal_forms_get_distinct_tables(self):
        # Inequivalent terms must be separated by some size in 1..3.
        pairs = [
            (Lam("x", Var("x")), Lam("x", Var("u")), Arrow(b, b)),
            (Var("u"), App(Var("g"), Var("u")), b),
            (
                Lam("x", Lam("y", Var("x"))),
                Lam("x", Lam("y", Var("y"))),
                Arrow(b, Arrow(b, b)),
            ),
            (Pair(Var("u"), Var("u")), Pair(Var("u"), App(Var("g"), Var("u"))), Product(b, b)),
        ]
        for t, u, ty in pairs:
            tables = []
            for k in (1, 2, 3):
                mt = translate(SMALL_CONTEXT, t, ty)
                mu = translate(SMALL_CONTEXT, u, ty)
                tables.append(
                    eval_finset(mt, {"b": k}).values
                    == eval_finset(mu, {"b": k}).values
                )
            assert not all(tables), (t, u)


class TestInvariants:
    @given(st.integers(0, 10**9))
    def test_currying_naturality(self, seed):
        rng = random.Random(seed)
        lhs, rhs = random_curry_naturality_instance(rng)
        assert lhs.dom == rhs.dom and lhs.cod == rhs.cod
        k = {"b": rng.randint(1, 3)}
        assert eval_finset(lhs, k).values == eval_finset(rhs, k).values

    @given(st.integers(0, 10**9))
    def test_substitution_commutes_with_translation(self, seed):
        rng = random.Random(seed)
        direct, composite = random_substitution_instance(rng)
        assert direct.dom == composite.dom and direct.cod == composite.cod
        k = {"b": rng.randint(1, 3)}
        assert eval_finset(direct, k).values == eval_finset(composite, k).values


class TestPrinting:
    def test_morphism_ascii(self):
        m = Compose(
            Ev(B, B),
            Pairing(Curry(Proj2(Prod(Unit(), B), B)), Proj2(Unit(), B)),
        )
        text = format_mor(m)
        assert text == "ev o <Lam(pi2), pi2>"

    def test_morphism_unicode(self):
        m = Compose(Proj1(B, B), Compose(Id(Prod(B, B)), Id(Prod(B, B))))
        assert format_mor(m, unicode=True) == "π1 ∘ (id ∘ id)"

    def test_composition_groups_explicitly(self):
        m = Compose(Compose(Proj1(B, B), Pairing(Id(B), Id(B))), Id(B))
        assert format_mor(m) == "(pi1 o <id, id>) o id"

    def test_terminal_renders_as_bang(self):
        assert format_mor(Terminal(B)) == "!"

    def test_table_lines(self):
        table = eval_finset(Id(Prod(B, B)), {"b": 2})
        text = format_table(table)
        assert text.splitlines()[0] == "(0, 0) -> (0, 0)"
        assert len(text.splitlines()) == 4
        assert "↦" in format_table(table, unicode=True)

    def test_rows_iterate_in_carrier_order(self):
        table = eval_finset(Id(B), {"b": 3})
        assert list(table_rows(table)) == [(0, 0), (1, 1), (2, 2)]
