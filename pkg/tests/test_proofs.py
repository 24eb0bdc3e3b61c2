"""Proof checking, cut-free search, the term bridge, and the embedding."""

from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lamcat.formulas import Atom, Conj, Impl, LBang, LImpl, LTensor, LWith, Sequent
from lamcat.gen import random_linear_triple, random_stlc_triple
from lamcat.proofs import (
    NoTermAssignment,
    ProofTree,
    UnsupportedFragment,
    canonical_nd_sequent,
    check_proof,
    eliminate_lolli_l,
    embed_intuitionistic,
    embed_nd_proof,
    format_proof_sexpr,
    format_sequent_sexpr,
    nd_cut,
    nd_weaken,
    parse_formula_sexpr,
    parse_proof_sexpr,
    parse_sequent_sexpr,
    proof_to_term,
    rewrite_lolli_e,
    rewrite_lolli_l,
    search_cutfree,
    term_to_proof,
)
from lamcat.surface import parse_term, parse_type
from lamcat.syntax import Lam, Term, alpha_equal
from lamcat.typesys import infer_principal_type, typecheck_linear, typecheck_stlc

A, B, C, D = Atom("A"), Atom("B"), Atom("C"), Atom("D")


def seq(hyps, concl) -> Sequent:
    return Sequent(tuple(hyps), concl)


def rules_used(p: ProofTree) -> set[str]:
    out = {p.rule}
    for q in p.premises:
        out |= rules_used(q)
    return out


def close_over(ctx, t: Term) -> Term:
    """Wrap the context into binders so alpha_equal compares judgements."""
    for x, _ in reversed(ctx):
        t = Lam(x, t)
    return t


# ------------------------------------------------ natural deduction fixture


def nd_transitivity() -> ProofTree:
    ab, bc = Impl(A, B), Impl(B, C)
    G = (ab, bc, A)
    return ProofTree(
        "impl-i",
        seq((ab, bc), Impl(A, C)),
        (
            ProofTree(
                "impl-e",
                seq(G, C),
                (
                    ProofTree("id", seq(G, bc)),
                    ProofTree(
                        "impl-e",
                        seq(G, B),
                        (
                            ProofTree("id", seq(G, ab)),
                            ProofTree("id", seq(G, A)),
                        ),
                    ),
                ),
            ),
        ),
    )


def nd_k_combinator() -> ProofTree:
    return ProofTree(
        "impl-i",
        seq((), Impl(A, Impl(B, A))),
        (
            ProofTree(
                "impl-i",
                seq((A,), Impl(B, A)),
                (ProofTree("id", seq((A, B), A)),),
            ),
        ),
    )


def nd_diagonal() -> ProofTree:
    return ProofTree(
        "conj-i",
        seq((A,), Conj(A, A)),
        (ProofTree("id", seq((A,), A)), ProofTree("id", seq((A,), A))),
    )


def test_nd_transitivity_proof_accepted():
    assert check_proof(nd_transitivity(), "nd").ok


def test_nd_single_id_accepted():
    assert check_proof(ProofTree("id", seq((A,), A)), "nd").ok
    # extra hypotheses are fine under the set discipline
    assert check_proof(ProofTree("id", seq((B, A, C), A)), "nd").ok


def test_nd_id_requires_membership():
    v = check_proof(ProofTree("id", seq((B,), A)), "nd")
    assert not v.ok and v.path == "/" and "not a hypothesis" in v.reason


def test_nd_rejects_mismatched_elimination_with_path():
    p = nd_transitivity()
    G = (Impl(A, B), Impl(B, C), A)
    broken = ProofTree(
        "impl-i",
        p.conclusion,
        (
            ProofTree(
                "impl-e",
                seq(G, C),
                (
                    ProofTree("id", seq(G, Impl(B, C))),
                    ProofTree("id", seq(G, A)),  # argument proves A, not B
                ),
            ),
        ),
    )
    v = check_proof(broken, "nd")
    assert not v.ok and v.path == "/0"


def test_nd_rejects_premise_context_change():
    p = ProofTree(
        "conj-i",
        seq((A,), Conj(A, B)),
        (ProofTree("id", seq((A,), A)), ProofTree("id", seq((B,), B))),
    )
    v = check_proof(p, "nd")
    assert not v.ok and "context" in v.reason


def test_nd_rejects_foreign_rules_and_formulas():
    assert not check_proof(ProofTree("tensor-r", seq((A,), A)), "nd").ok
    v = check_proof(ProofTree("id", seq((LTensor(A, B),), LTensor(A, B))), "nd")
    assert not v.ok and "fragment" in v.reason


def test_unknown_system_rejected():
    with pytest.raises(ValueError):
        check_proof(ProofTree("id", seq((A,), A)), "hilbert")


def test_wrong_premise_count_rejected():
    v = check_proof(ProofTree("conj-i", seq((A,), Conj(A, A))), "nd")
    assert not v.ok and "premises" in v.reason


# ------------------------------------------------- gentzen sequent calculus


def gentzen_transitivity() -> ProofTree:
    ab, bc = Impl(A, B), Impl(B, C)
    inner = ProofTree(
        "impl-l",
        seq((A, ab), B),
        (ProofTree("id", seq((A,), A)), ProofTree("id", seq((B,), B))),
        index=1,
    )
    left = ProofTree("exch", seq((ab, A), B), (inner,), index=0)
    body = ProofTree(
        "impl-l",
        seq((ab, A, bc), C),
        (left, ProofTree("id", seq((C,), C))),
        index=2,
    )
    swapped = ProofTree("exch", seq((ab, bc, A), C), (body,), index=1)
    return ProofTree("impl-r", seq((ab, bc), Impl(A, C)), (swapped,))


def test_gentzen_transitivity_proof_accepted():
    assert check_proof(gentzen_transitivity(), "gentzen").ok


def test_gentzen_id_is_single_hypothesis():
    assert check_proof(ProofTree("id", seq((A,), A)), "gentzen").ok
    assert not check_proof(ProofTree("id", seq((B, A), A)), "gentzen").ok


def test_gentzen_structural_rules():
    base = ProofTree("id", seq((A,), A))
    weak = ProofTree("weak", seq((A, B), A), (base,))
    assert check_proof(weak, "gentzen").ok
    doubled = ProofTree("weak", seq((A, A), A), (base,))
    contr = ProofTree("contr", seq((A,), A), (doubled,))
    assert check_proof(contr, "gentzen").ok
    exch = ProofTree("exch", seq((B, A), A), (weak,), index=0)
    assert check_proof(exch, "gentzen").ok


def test_gentzen_weakening_only_at_the_end():
    base = ProofTree("id", seq((A,), A))
    v = check_proof(ProofTree("weak", seq((B, A), A), (base,)), "gentzen")
    assert not v.ok


def test_gentzen_exchange_needs_adjacent_positions():
    weak = ProofTree(
        "weak",
        seq((A, B), A),
        (ProofTree("id", seq((A,), A)),),
    )
    v = check_proof(ProofTree("exch", seq((B, A), A), (weak,), index=1), "gentzen")
    assert not v.ok and "neighbour" in v.reason


def test_gentzen_conj_rules():
    p = ProofTree(
        "conj-r",
        seq((A, B), Conj(A, B)),
        (ProofTree("id", seq((A,), A)), ProofTree("id", seq((B,), B))),
    )
    assert check_proof(p, "gentzen").ok
    packed = ProofTree("conj-l", seq((Conj(A, B),), Conj(A, B)), (p,), index=0)
    assert check_proof(packed, "gentzen").ok
    # conj-r concatenates; the reversed split is a different sequent
    bad = ProofTree(
        "conj-r",
        seq((B, A), Conj(A, B)),
        (ProofTree("id", seq((A,), A)), ProofTree("id", seq((B,), B))),
    )
    assert not check_proof(bad, "gentzen").ok


def test_gentzen_cut_shape():
    lemma = ProofTree(
        "impl-r", seq((), Impl(A, A)), (ProofTree("id", seq((A,), A)),)
    )
    use = ProofTree(
        "impl-l",
        seq((A, Impl(A, A)), A),
        (ProofTree("id", seq((A,), A)), ProofTree("id", seq((A,), A))),
        index=1,
    )
    # the cut formula has to come first in the second premise
    fronted = ProofTree("exch", seq((Impl(A, A), A), A), (use,), index=0)
    cut = ProofTree("cut", seq((A,), A), (lemma, fronted))
    assert check_proof(cut, "gentzen").ok
    bad = ProofTree("cut", seq((B,), A), (lemma, fronted))
    assert not check_proof(bad, "gentzen").ok


def test_indexed_rule_without_index_rejected():
    p = ProofTree(
        "conj-l",
        seq((Conj(A, B),), A),
        (ProofTree("id", seq((A, B), A)),),
    )
    v = check_proof(p, "gentzen")
    assert not v.ok and "needs a hypothesis index" in v.reason


def test_index_out_of_range_rejected():
    p = ProofTree(
        "conj-l",
        seq((Conj(A, B),), A),
        (ProofTree("id", seq((A, B), A)),),
        index=3,
    )
    assert "out of range" in check_proof(p, "gentzen").reason


# ----------------------------------------------------- linear proof checking


def lid(f) -> ProofTree:
    return ProofTree("id", seq((f,), f))


def test_linear_id_and_swap():
    assert check_proof(lid(A), "linear").ok
    swap = ProofTree(
        "tensor-l",
        seq((LTensor(A, B),), LTensor(B, A)),
        (
            ProofTree(
                "tensor-r", seq((A, B), LTensor(B, A)), (lid(B), lid(A))
            ),
        ),
        index=0,
    )
    assert check_proof(swap, "linear").ok


def test_linear_tensor_r_needs_disjoint_contexts():
    p = ProofTree("tensor-r", seq((A,), LTensor(A, A)), (lid(A), lid(A)))
    v = check_proof(p, "linear")
    assert not v.ok and "multisets" in v.reason


def test_linear_with_r_shares_the_context():
    p = ProofTree("with-r", seq((A,), LWith(A, A)), (lid(A), lid(A)))
    assert check_proof(p, "linear").ok
    q = ProofTree(
        "with-r",
        seq((A, B), LWith(A, B)),
        (lid(A), lid(B)),
    )
    assert not check_proof(q, "linear").ok


def test_linear_with_left_rules():
    for rule, kept in (("with-l1", A), ("with-l2", B)):
        p = ProofTree(rule, seq((LWith(A, B),), kept), (lid(kept),), index=0)
        assert check_proof(p, "linear").ok
    wrong = ProofTree("with-l1", seq((LWith(A, B),), B), (lid(B),), index=0)
    assert not check_proof(wrong, "linear").ok


def test_linear_lolli_rules():
    fn = LImpl(A, B)
    app = ProofTree("lolli-e", seq((fn, A), B), (lid(fn), lid(A)))
    assert check_proof(app, "linear").ok
    left = ProofTree("lolli-l", seq((A, fn), B), (lid(A), lid(B)), index=1)
    assert check_proof(left, "linear").ok
    lam = ProofTree("lolli-r", seq((), LImpl(A, A)), (lid(A),))
    assert check_proof(lam, "linear").ok


def test_linear_bang_rules():
    derelict = ProofTree("bang-l", seq((LBang(A),), A), (lid(A),), index=0)
    assert check_proof(derelict, "linear").ok
    promote = ProofTree("bang-r", seq((LBang(A),), LBang(A)), (derelict,))
    assert check_proof(promote, "linear").ok
    dropped = ProofTree("weak", seq((A, LBang(B)), A), (lid(A),), index=1)
    assert check_proof(dropped, "linear").ok
    pair = ProofTree(
        "tensor-r",
        seq((LBang(A), LBang(A)), LTensor(LBang(A), LBang(A))),
        (lid(LBang(A)), lid(LBang(A))),
    )
    copied = ProofTree(
        "contr", seq((LBang(A),), LTensor(LBang(A), LBang(A))), (pair,), index=0
    )
    assert check_proof(copied, "linear").ok


def test_linear_bang_side_conditions():
    unbanged = ProofTree(
        "bang-r",
        seq((A,), LBang(A)),
        (ProofTree("id", seq((A,), A)),),
    )
    assert "all-banged" in check_proof(unbanged, "linear").reason
    plain_weak = ProofTree("weak", seq((A, B), A), (lid(A),), index=1)
    assert "banged" in check_proof(plain_weak, "linear").reason
    plain_contr = ProofTree(
        "contr",
        seq((A,), LTensor(A, A)),
        (ProofTree("tensor-r", seq((A, A), LTensor(A, A)), (lid(A), lid(A))),),
        index=0,
    )
    assert "banged" in check_proof(plain_contr, "linear").reason


def test_split_validation():
    fn = LImpl(A, B)
    good = ProofTree("lolli-e", seq((fn, A), B), (lid(fn), lid(A)), split=(0,))
    assert check_proof(good, "linear").ok
    bad = ProofTree("lolli-e", seq((fn, A), B), (lid(fn), lid(A)), split=(1,))
    v = check_proof(bad, "linear")
    assert not v.ok and "split" in v.reason
    misplaced = ProofTree("lolli-r", seq((), LImpl(A, A)), (lid(A),), split=())
    assert "no context split" in check_proof(misplaced, "linear").reason


# ----------------------------------------------------------- cut-free search

PROVABLE = [
    seq((), LImpl(A, A)),
    seq((LImpl(A, B), LImpl(B, C)), LImpl(A, C)),
    seq((), LImpl(LImpl(A, LImpl(B, C)), LImpl(B, LImpl(A, C)))),
    seq((LTensor(A, LTensor(B, C)),), LTensor(LTensor(A, B), C)),
    seq((LTensor(A, B),), LTensor(B, A)),
]

UNPROVABLE = [
    seq((A,), LTensor(A, A)),
    seq((LImpl(LTensor(A, A), B),), LImpl(A, B)),
    seq((), LImpl(A, LImpl(B, A))),
]


@pytest.mark.parametrize("s", PROVABLE, ids=str)
def test_linear_search_finds_exercise_proofs(s):
    p = search_cutfree(s, 8)
    assert p is not None
    assert p.conclusion == s
    assert check_proof(p, "linear").ok
    assert "cut" not in rules_used(p) and "lolli-e" not in rules_used(p)


@pytest.mark.parametrize("s", UNPROVABLE, ids=str)
def test_linear_search_exhausts_resource_violations(s):
    assert search_cutfree(s, 8) is None


def test_search_rejects_bang_sequents():
    with pytest.raises(UnsupportedFragment):
        search_cutfree(seq((LBang(A),), A), 4)


def test_search_rejects_mixed_fragments():
    with pytest.raises(UnsupportedFragment):
        search_cutfree(seq((Conj(A, B),), A), 4, system="linear")
    with pytest.raises(UnsupportedFragment):
        search_cutfree(seq((LTensor(A, B),), A), 4, system="gentzen")


def test_search_depth_must_be_positive():
    with pytest.raises(ValueError):
        search_cutfree(seq((), LImpl(A, A)), 0)


def test_search_is_deterministic():
    s = PROVABLE[3]
    assert search_cutfree(s, 8) == search_cutfree(s, 8)


def test_gentzen_search_uses_structural_rules():
    # contraction: one A proves A and A
    p = search_cutfree(seq((A,), Conj(A, A)), 6, system="gentzen")
    assert p is not None and check_proof(p, "gentzen").ok
    assert "contr" in rules_used(p)
    # weakening: the second hypothesis is discarded
    q = search_cutfree(seq((), Impl(A, Impl(B, A))), 6, system="gentzen")
    assert q is not None and check_proof(q, "gentzen").ok
    assert "weak" in rules_used(q)
    r = search_cutfree(seq((Impl(A, B), Impl(B, C)), Impl(A, C)), 8, system="gentzen")
    assert r is not None and check_proof(r, "gentzen").ok


_atoms = st.sampled_from([A, B])
_linear_formulas = st.recursive(
    _atoms,
    lambda inner: st.one_of(
        st.builds(LTensor, inner, inner),
        st.builds(LImpl, inner, inner),
        st.builds(LWith, inner, inner),
    ),
    max_leaves=3,
)


# law: anything the search returns is a checked cut-free proof of its goal
@given(st.lists(_linear_formulas, max_size=2), _linear_formulas)
def test_search_results_always_check(hyps, goal):
    s = seq(tuple(hyps), goal)
    p = search_cutfree(s, 5)
    if p is None:
        return
    assert p.conclusion == s
    assert check_proof(p, "linear").ok
    assert "cut" not in rules_used(p)


# --------------------------------------------------------- proofs to terms


def test_transitivity_proof_reads_as_composition():
    ctx, t, T = proof_to_term(nd_transitivity())
    assert ctx == (
        ("x0", parse_type("A -> B")),
        ("x1", parse_type("B -> C")),
    )
    assert t == parse_term("\\x2. x1 (x0 x2)")
    assert T == parse_type("A -> C")
    typecheck_stlc(ctx, t, T)


def test_id_proof_reads_as_variable():
    ctx, t, T = proof_to_term(ProofTree("id", seq((A,), A)))
    assert t == parse_term("x0") and ctx == (("x0", parse_type("A")),)


def test_conj_intro_reads_as_pair():
    p = ProofTree(
        "conj-i",
        seq((A, B), Conj(A, B)),
        (ProofTree("id", seq((A, B), A)), ProofTree("id", seq((A, B), B))),
    )
    ctx, t, T = proof_to_term(p)
    assert t == parse_term("<x0, x1>")
    assert T == parse_type("A * B")


def test_linear_proof_reads_as_let_term():
    p = search_cutfree(seq((LTensor(A, B),), LTensor(B, A)), 8)
    ctx, t, T = proof_to_term(p, "linear")
    assert t == parse_term("let x1 * x2 = x0 in x2 * x1")
    typecheck_linear(ctx, t, T)


def test_bang_proofs_have_no_term():
    derelict = ProofTree("bang-l", seq((LBang(A),), A), (lid(A),), index=0)
    with pytest.raises(NoTermAssignment):
        proof_to_term(derelict)


def test_proof_to_term_requires_a_checked_proof():
    with pytest.raises(ValueError):
        proof_to_term(ProofTree("id", seq((B,), A)))
    with pytest.raises(ValueError):
        proof_to_term(gentzen_transitivity(), "gentzen")


# --------------------------------------------------------- terms to proofs


def test_identity_derivation_becomes_impl_intro():
    d = typecheck_stlc((), parse_term("\\x. x"), parse_type("b -> b"))
    p = term_to_proof(d)
    assert p.rule == "impl-i" and p.premises[0].rule == "id"
    assert p.conclusion == seq((), Impl(Atom("b"), Atom("b")))
    assert check_proof(p, "nd").ok


def test_pair_derivation_becomes_conj_intro():
    ctx = (("x", parse_type("A")), ("y", parse_type("B")))
    d = typecheck_stlc(ctx, parse_term("<x, y>"), parse_type("A * B"))
    p = term_to_proof(d)
    assert p.rule == "conj-i"
    assert check_proof(p, "nd").ok


_COMBINATORS = {
    "i": "\\x. x",
    "k": "\\x. \\y. x",
    "b": "\\x. \\y. \\z. x (y z)",
    "c": "\\x. \\y. \\z. x z y",
    "s": "\\x. \\y. \\z. x z (y z)",
    "w": "\\x. \\y. x y y",
    "pair": "\\x. \\y. <x, y>",
    "swap": "\\p. <snd p, fst p>",
}


@pytest.mark.parametrize("src", sorted(_COMBINATORS.values()))
def test_nd_round_trip_on_combinators(src):
    # ground each inferred type variable at a distinct atom so that binder
    # formulas stay distinguishable under the set discipline
    t = parse_term(src)
    scheme = infer_principal_type(t)
    names = iter("ABCDEFG")
    mapping = {}

    def ground(ty):
        from lamcat.syntax import Arrow, Base, Product, TVar, type_vars

        match ty:
            case TVar(v):
                if v not in mapping:
                    mapping[v] = Base(next(names))
                return mapping[v]
            case Arrow(a, b):
                return Arrow(ground(a), ground(b))
            case Product(a, b):
                return Product(ground(a), ground(b))
            case _:
                return ty

    T = ground(scheme)
    d = typecheck_stlc((), t, T)
    p = term_to_proof(d)
    assert check_proof(p, "nd").ok
    ctx2, t2, T2 = proof_to_term(p)
    assert ctx2 == () and T2 == T
    assert alpha_equal(t2, t)


# law: generated linear derivations survive the proof round trip exactly
@given(st.integers(0, 10**9))
def test_linear_round_trip_is_exact(seed):
    rng = random.Random(seed)
    ctx, t, T = random_linear_triple(rng)
    d = typecheck_linear(ctx, t, T)
    p = term_to_proof(d)
    assert check_proof(p, "linear").ok
    ctx2, t2, T2 = proof_to_term(p, "linear")
    assert T2 == T
    assert tuple(ty for _, ty in ctx2) == tuple(ty for _, ty in ctx)
    assert alpha_equal(close_over(ctx, t), close_over(ctx2, t2))


def test_linear_round_trip_corpus_of_one_hundred():
    for seed in range(100):
        rng = random.Random(seed)
        ctx, t, T = random_linear_triple(rng)
        d = typecheck_linear(ctx, t, T)
        ctx2, t2, _ = proof_to_term(term_to_proof(d), "linear")
        assert alpha_equal(close_over(ctx, t), close_over(ctx2, t2))


# law: every simply typed derivation reads back as a checked deduction
@given(st.integers(0, 10**9))
def test_stlc_derivations_become_nd_proofs(seed):
    rng = random.Random(seed)
    ctx, t, T = random_stlc_triple(rng)
    d = typecheck_stlc(ctx, t, T)
    p = term_to_proof(d)
    assert check_proof(p, "nd").ok
    ctx2, t2, T2 = proof_to_term(p)
    assert T2 == T
    typecheck_stlc(ctx2, t2, T2)


# ------------------------------------------------------- admissible rules


def test_nd_weakening_admissible():
    p = nd_transitivity()
    w = nd_weaken(p, D)
    assert check_proof(w, "nd").ok
    assert w.conclusion.hyps == p.conclusion.hyps + (D,)
    # weakening by a formula already present changes nothing
    assert nd_weaken(p, Impl(A, B)).conclusion == p.conclusion


@given(st.integers(0, 10**9))
def test_nd_weakening_admissible_on_generated_proofs(seed):
    rng = random.Random(seed)
    ctx, t, T = random_stlc_triple(rng)
    p = term_to_proof(typecheck_stlc(ctx, t, T))
    w = nd_weaken(p, D)
    assert check_proof(w, "nd").ok
    assert D in set(w.conclusion.hyps)


def test_nd_cut_admissible():
    lemma = ProofTree(
        "impl-i", seq((), Impl(A, A)), (ProofTree("id", seq((A,), A)),)
    )
    use = ProofTree(
        "impl-e",
        seq((Impl(A, A), A), A),
        (
            ProofTree("id", seq((Impl(A, A), A), Impl(A, A))),
            ProofTree("id", seq((Impl(A, A), A), A)),
        ),
    )
    p = nd_cut(lemma, use)
    assert check_proof(p, "nd").ok
    assert set(p.conclusion.hyps) == {A} and p.conclusion.concl == A


def test_nd_cut_demands_the_hypothesis():
    lemma = ProofTree(
        "impl-i", seq((), Impl(A, A)), (ProofTree("id", seq((A,), A)),)
    )
    with pytest.raises(ValueError):
        nd_cut(lemma, ProofTree("id", seq((B,), B)))


def test_linear_cut_conclusions_research_cutfree():
    # proofs read off let-terms contain cuts; their conclusions must still
    # have cut-free proofs within the exhaustive search bound
    ctx = (("z", parse_type("A (x) B")),)
    t = parse_term("let x * y = z in y * x")
    d = typecheck_linear(ctx, t, parse_type("B (x) A"))
    p = term_to_proof(d)
    assert "cut" in rules_used(p)
    again = search_cutfree(p.conclusion, 8)
    assert again is not None and check_proof(again, "linear").ok


# ------------------------------------------------------------ the embedding


def test_embed_formula_clauses():
    assert embed_intuitionistic(seq((A,), Conj(A, A))) == seq(
        (LBang(A),), LWith(A, A)
    )
    assert embed_intuitionistic(seq((), Impl(A, A))) == seq(
        (), LImpl(LBang(A), A)
    )
    assert embed_intuitionistic(seq((), A)) == seq((), A)


ND_CORPUS = [
    nd_transitivity(),
    nd_k_combinator(),
    nd_diagonal(),
    ProofTree("id", seq((A,), A)),
    ProofTree(
        "conj-e1",
        seq((Conj(A, B),), A),
        (ProofTree("id", seq((Conj(A, B),), Conj(A, B))),),
    ),
    ProofTree(
        "impl-i",
        seq((), Impl(Conj(A, B), B)),
        (
            ProofTree(
                "conj-e2",
                seq((Conj(A, B),), B),
                (ProofTree("id", seq((Conj(A, B),), Conj(A, B))),),
            ),
        ),
    ),
]


@pytest.mark.parametrize("p", ND_CORPUS, ids=lambda p: str(p.conclusion))
def test_embedding_translates_proofs_rule_by_rule(p):
    assert check_proof(p, "nd").ok
    e = embed_nd_proof(p)
    assert check_proof(e, "linear").ok
    assert e.conclusion == embed_intuitionistic(canonical_nd_sequent(p.conclusion))


@given(st.integers(0, 10**9))
def test_embedding_works_on_generated_deductions(seed):
    rng = random.Random(seed)
    ctx, t, T = random_stlc_triple(rng)
    p = term_to_proof(typecheck_stlc(ctx, t, T))
    e = embed_nd_proof(p)
    assert check_proof(e, "linear").ok


# ------------------------------------- lolli-l / lolli-e interderivability


def _find_rule(p: ProofTree, rule: str) -> ProofTree | None:
    if p.rule == rule:
        return p
    for q in p.premises:
        hit = _find_rule(q, rule)
        if hit is not None:
            return hit
    return None


def test_lolli_l_expressed_with_application_and_cut():
    p = search_cutfree(seq((LImpl(A, B), LImpl(B, C)), LImpl(A, C)), 8)
    node = _find_rule(p, "lolli-l")
    r = rewrite_lolli_l(node)
    assert r.rule == "cut" and r.premises[0].rule == "lolli-e"
    assert r.conclusion == node.conclusion
    assert check_proof(r, "linear").ok


def test_lolli_e_expressed_with_left_rule_and_cut():
    fn = LImpl(A, B)
    node = ProofTree("lolli-e", seq((fn, A), B), (lid(fn), lid(A)))
    r = rewrite_lolli_e(node)
    assert r.rule == "cut" and r.premises[1].rule == "lolli-l"
    assert r.conclusion == node.conclusion
    assert check_proof(r, "linear").ok


def test_eliminate_lolli_l_everywhere():
    p = search_cutfree(seq((LImpl(A, B), LImpl(B, C)), LImpl(A, C)), 8)
    r = eliminate_lolli_l(p)
    assert "lolli-l" not in rules_used(r)
    assert r.conclusion == p.conclusion
    assert check_proof(r, "linear").ok


def test_rewriters_reject_other_rules():
    with pytest.raises(ValueError):
        rewrite_lolli_l(lid(A))
    with pytest.raises(ValueError):
        rewrite_lolli_e(lid(A))


# ------------------------------------------------------------ s-expressions

K_TEXT = """\
(impl-i (seq (hyps) (implies A (implies B A)))
  (impl-i (seq (hyps A) (implies B A))
    (id (seq (hyps A B) A))))"""


def test_proof_sexpr_golden():
    assert format_proof_sexpr(nd_k_combinator()) == K_TEXT
    assert parse_proof_sexpr(K_TEXT) == nd_k_combinator()


@pytest.mark.parametrize(
    "p",
    [
        nd_transitivity(),
        gentzen_transitivity(),
        embed_nd_proof(nd_diagonal()),
        term_to_proof(
            typecheck_linear(
                (("z", parse_type("A (x) B")),),
                parse_term("let x * y = z in y * x"),
                parse_type("B (x) A"),
            )
        ),
    ],
    ids=["nd", "gentzen", "embedded", "linear-split"],
)
def test_proof_sexpr_round_trip_is_byte_exact(p):
    text = format_proof_sexpr(p)
    assert parse_proof_sexpr(text) == p
    assert format_proof_sexpr(parse_proof_sexpr(text)) == text


def test_sequent_and_formula_sexpr_round_trip():
    s = seq((LBang(LImpl(A, B)), LTensor(A, LWith(B, C))), LTensor(B, A))
    text = format_sequent_sexpr(s)
    assert parse_sequent_sexpr(text) == s
    assert text == (
        "(seq (hyps (bang (lolli A B)) (tensor A (with B C))) (tensor B A))"
    )
    assert parse_formula_sexpr("(and A (implies B C))") == Conj(A, Impl(B, C))


def test_sexpr_parse_errors():
    with pytest.raises(ValueError):
        parse_formula_sexpr("(xor A B)")
    with pytest.raises(ValueError):
        parse_formula_sexpr("A B")
    with pytest.raises(ValueError):
        parse_proof_sexpr("(id (seq (hyps A) A)")
