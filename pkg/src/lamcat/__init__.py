"""Workbench for typed lambda calculi, sequent proofs, and finite
categorical semantics: alpha/substitution machinery, simply typed and
linear type checking, principal type inference, normalization and
conversion checking, natural-deduction and sequent-calculus proof
checking with bounded cut-free search, a finite-category kernel with
universal constructions, translations into cartesian closed structure
evaluated over finite sets, a relational model of the linear fragment,
and monad/comonad law checking with Kleisli constructions.
"""

__version__ = "0.1.0"
