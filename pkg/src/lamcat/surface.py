"""Concrete syntax: parsing and printing of terms, types, formulas, sequents.

Both ASCII and Unicode spellings are accepted on input.  Printing defaults
to ASCII; pass ``unicode=True`` for the Unicode forms.  Parsing a printed
value returns it unchanged, and printing a parse of canonical text
reproduces the text byte for byte.

Operator tiers, loosest first:
  terms:  ``\\x. t`` and ``let ... in t`` extend right; then ``*`` (tensor,
          left-assoc); then application (left-assoc); ``fst``/``snd`` bind
          the next atom.
  types:  ``->``/``-o`` (right-assoc); then ``&`` (left); then ``*`` and
          ``(x)`` (left); then ``!``.
  formulas: ``=>``/``-o`` (right-assoc); then ``&``; then ``/\\`` and
          ``(x)``; then ``!``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
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
    Proj,
    Tensor,
    TensorIntro,
    Term,
    TVar,
    Type,
    Var,
    With,
)
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
)


class ParseError(Exception):
    """Input text does not match the surface grammar."""


KEYWORDS = {"let", "in", "fst", "snd"}

_PUNCT = [
    # longest first
    "(x)",
    ".o.",
    "|-",
    "-o",
    "->",
    "/\\",
    "=>",
    "⊸",
    "→",
    "⊗",
    "×",
    "∧",
    "⊃",
    "⊢",
    "⟨",
    "⟩",
    "λ",
    "\\",
    ".",
    ",",
    "<",
    ">",
    "(",
    ")",
    "*",
    "&",
    "!",
    "=",
    "_",
    "'",
]


@dataclass(frozen=True)
class _Tok:
    kind: str  # "ident" | "punct"
    text: str
    pos: int


def _tokenize(src: str) -> list[_Tok]:
    toks: list[_Tok] = []
    i = 0
    n = len(src)
    while i < n:
        c = src[i]
        if c.isspace():
            i += 1
            continue
        hit = None
        for p in _PUNCT:
            if src.startswith(p, i):
                # "(x)" is a tensor operator only between operands; emit it as
                # one token and let the parser reinterpret it when it appears
                # where an atom is expected.
                hit = p
                break
        if hit == "'":
            j = i + 1
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            if j == i + 1:
                raise ParseError(f"dangling ' at position {i}")
            toks.append(_Tok("tvar", src[i + 1 : j], i))
            i = j
            continue
        if hit is not None:
            toks.append(_Tok("punct", hit, i))
            i += len(hit)
            continue
        if c in "πΠ":
            # accept π1 / π₁ as fst, π2 / π₂ as snd
            if i + 1 < n and src[i + 1] in "1₁":
                toks.append(_Tok("ident", "fst", i))
                i += 2
                continue
            if i + 1 < n and src[i + 1] in "2₂":
                toks.append(_Tok("ident", "snd", i))
                i += 2
                continue
            raise ParseError(f"unexpected character {c!r} at position {i}")
        if c.isalnum() or c == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            word = src[i:j]
            toks.append(_Tok("ident", word, i))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r} at position {i}")
    return toks


class _Parser:
    def __init__(self, src: str) -> None:
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    # ------------------------------------------------------------- utilities

    def peek(self, k: int = 0) -> _Tok | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def next(self) -> _Tok:
        if self.i >= len(self.toks):
            raise ParseError("unexpected end of input")
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r} at position {t.pos}, got {t.text!r}")
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.text == text

    def at_end(self) -> bool:
        return self.i >= len(self.toks)

    def ident(self) -> str:
        t = self.next()
        if t.kind != "ident" or t.text in KEYWORDS or t.text == "_":
            raise ParseError(f"expected a name at position {t.pos}, got {t.text!r}")
        return t.text

    # ----------------------------------------------------------------- terms

    def term(self) -> Term:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input")
        if t.text in ("\\", "λ"):
            self.next()
            x = self.ident()
            self.expect(".")
            return Lam(x, self.term())
        if t.text == "let":
            return self._let()
        return self._tensor_term()

    def _let(self) -> Term:
        self.expect("let")
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input in let")
        if t.text in ("<", "⟨"):
            close = ">" if t.text == "<" else "⟩"
            self.next()
            first = self.next()
            if first.text == "_":
                self.expect(",")
                y = self.ident()
                kept, binder = 2, y
            else:
                if first.kind != "ident" or first.text in KEYWORDS:
                    raise ParseError(
                        f"expected a name or _ at position {first.pos}"
                    )
                self.expect(",")
                self.expect("_")
                kept, binder = 1, first.text
            self.expect(close)
            self.expect("=")
            scrut = self.term()
            self.expect("in")
            body = self.term()
            return LetWith(kept, binder, scrut, body)
        x = self.ident()
        if self.at("*") or self.at("⊗"):
            self.next()
        else:
            raise ParseError("expected * between let pattern names")
        y = self.ident()
        self.expect("=")
        scrut = self.term()
        self.expect("in")
        body = self.term()
        return LetTensor(x, y, scrut, body)

    def _tensor_term(self) -> Term:
        t = self._app_term()
        while self.at("*") or self.at("⊗"):
            self.next()
            t = TensorIntro(t, self._app_term())
        return t

    def _app_term(self) -> Term:
        t = self._prefix_term()
        while True:
            nxt = self.peek()
            if nxt is None:
                break
            if nxt.kind == "ident" and nxt.text not in KEYWORDS and nxt.text != "_":
                t = App(t, self._prefix_term())
            elif nxt.kind == "ident" and nxt.text in ("fst", "snd"):
                t = App(t, self._prefix_term())
            elif nxt.text in ("(", "(x)", "<", "⟨", "\\", "λ"):
                t = App(t, self._prefix_term())
            else:
                break
        return t

    def _prefix_term(self) -> Term:
        t = self.peek()
        if t is not None and t.kind == "ident" and t.text in ("fst", "snd"):
            self.next()
            return Proj(1 if t.text == "fst" else 2, self._prefix_term())
        return self._atom_term()

    def _atom_term(self) -> Term:
        t = self.next()
        if t.kind == "ident" and t.text not in KEYWORDS and t.text != "_":
            return Var(t.text)
        if t.text in ("\\", "λ"):
            x = self.ident()
            self.expect(".")
            return Lam(x, self.term())
        if t.text == "(":
            inner = self.term()
            self.expect(")")
            return inner
        if t.text in ("<", "⟨"):
            close = ">" if t.text == "<" else "⟩"
            left = self.term()
            self.expect(",")
            right = self.term()
            self.expect(close)
            return Pair(left, right)
        if t.text == "(x)":
            # a parenthesized variable named x, not the tensor operator
            return Var("x")
        raise ParseError(f"unexpected {t.text!r} at position {t.pos}")

    # ----------------------------------------------------------------- types

    def type_(self) -> Type:
        left = self._with_type()
        nxt = self.peek()
        if nxt is not None and nxt.text in ("->", "→"):
            self.next()
            return Arrow(left, self.type_())
        if nxt is not None and nxt.text in ("-o", "⊸", ".o."):
            self.next()
            return Lollipop(left, self.type_())
        return left

    def _with_type(self) -> Type:
        t = self._tensor_type()
        while self.at("&"):
            self.next()
            t = With(t, self._tensor_type())
        return t

    def _tensor_type(self) -> Type:
        t = self._prefix_type()
        while True:
            nxt = self.peek()
            if nxt is None:
                break
            if nxt.text in ("*", "×"):
                self.next()
                t = Product(t, self._prefix_type())
            elif nxt.text in ("(x)", "⊗"):
                self.next()
                t = Tensor(t, self._prefix_type())
            else:
                break
        return t

    def _prefix_type(self) -> Type:
        if self.at("!"):
            self.next()
            return Bang(self._prefix_type())
        return self._atom_type()

    def _atom_type(self) -> Type:
        t = self.next()
        if t.kind == "ident" and t.text not in KEYWORDS and t.text != "_":
            return Base(t.text)
        if t.kind == "tvar":
            return TVar(t.text)
        if t.text == "(":
            inner = self.type_()
            self.expect(")")
            return inner
        if t.text == "(x)":
            # "(x)" where an atom is expected is a parenthesized variable x
            return Base("x")
        raise ParseError(f"unexpected {t.text!r} in type at position {t.pos}")

    # -------------------------------------------------------------- formulas

    def formula(self) -> Formula:
        left = self._with_formula()
        nxt = self.peek()
        if nxt is not None and nxt.text in ("=>", "⊃"):
            self.next()
            return Impl(left, self.formula())
        if nxt is not None and nxt.text in ("-o", "⊸", ".o."):
            self.next()
            return LImpl(left, self.formula())
        return left

    def _with_formula(self) -> Formula:
        f = self._tensor_formula()
        while self.at("&"):
            self.next()
            f = LWith(f, self._tensor_formula())
        return f

    def _tensor_formula(self) -> Formula:
        f = self._prefix_formula()
        while True:
            nxt = self.peek()
            if nxt is None:
                break
            if nxt.text in ("/\\", "∧"):
                self.next()
                f = Conj(f, self._prefix_formula())
            elif nxt.text in ("(x)", "⊗"):
                self.next()
                f = LTensor(f, self._prefix_formula())
            else:
                break
        return f

    def _prefix_formula(self) -> Formula:
        if self.at("!"):
            self.next()
            return LBang(self._prefix_formula())
        return self._atom_formula()

    def _atom_formula(self) -> Formula:
        t = self.next()
        if t.kind == "ident" and t.text not in KEYWORDS and t.text != "_":
            return Atom(t.text)
        if t.text == "(":
            inner = self.formula()
            self.expect(")")
            return inner
        if t.text == "(x)":
            return Atom("x")
        raise ParseError(f"unexpected {t.text!r} in formula at position {t.pos}")

    def sequent(self) -> Sequent:
        hyps: list[Formula] = []
        if not (self.at("|-") or self.at("⊢")):
            hyps.append(self.formula())
            while self.at(","):
                self.next()
                hyps.append(self.formula())
        if self.at("|-") or self.at("⊢"):
            self.next()
        else:
            raise ParseError("expected |- in sequent")
        concl = self.formula()
        return Sequent(tuple(hyps), concl)


def _finish(p: _Parser, value):
    if not p.at_end():
        t = p.peek()
        raise ParseError(f"trailing input at position {t.pos}: {t.text!r}")
    return value


def parse_term(src: str) -> Term:
    p = _Parser(src)
    return _finish(p, p.term())


def parse_type(src: str) -> Type:
    p = _Parser(src)
    return _finish(p, p.type_())


def parse_formula(src: str) -> Formula:
    p = _Parser(src)
    return _finish(p, p.formula())


def parse_sequent(src: str) -> Sequent:
    p = _Parser(src)
    return _finish(p, p.sequent())


def parse_context(src: str) -> tuple[tuple[str, Type], ...]:
    """Parse a typing context: ``x : T, y : U`` (empty string allowed)."""
    src = src.strip()
    if not src:
        return ()
    out = []
    for chunk in _split_top_level_commas(src):
        if ":" not in chunk:
            raise ParseError(f"context entry {chunk!r} lacks a colon")
        name, ty = chunk.split(":", 1)
        name = name.strip()
        if not name.isidentifier():
            raise ParseError(f"bad context variable {name!r}")
        out.append((name, parse_type(ty)))
    return tuple(out)


def _split_top_level_commas(src: str) -> list[str]:
    parts, depth, start, i = [], 0, 0, 0
    while i < len(src):
        c = src[i]
        if src.startswith("->", i) or src.startswith("=>", i):
            i += 2
            continue
        if c in "(<⟨":
            depth += 1
        elif c in ")>⟩":
            depth -= 1
        elif c == "," and depth == 0:
            parts.append(src[start:i])
            start = i + 1
        i += 1
    parts.append(src[start:])
    return [p for p in (q.strip() for q in parts) if p]


# ------------------------------------------------------------------ printing

_TYPE_GLYPHS = {
    False: {"arrow": "->", "lolli": "-o", "prod": "*", "tensor": "(x)", "with": "&"},
    True: {"arrow": "→", "lolli": "⊸", "prod": "×", "tensor": "⊗", "with": "&"},
}


def format_type(t: Type, unicode: bool = False) -> str:
    g = _TYPE_GLYPHS[unicode]

    def go(t: Type, tier: int) -> str:
        # tier: 0 = arrow position, 1 = with, 2 = tensor, 3 = atom
        match t:
            case Base(n):
                return n
            case TVar(n):
                if unicode:
                    i = _greek_index(n)
                    if i is not None:
                        return "αβγδεζηθ"[i]
                return f"'{n}"
            case Arrow(a, b):
                s = f"{go(a, 1)} {g['arrow']} {go(b, 0)}"
                return s if tier <= 0 else f"({s})"
            case Lollipop(a, b):
                s = f"{go(a, 1)} {g['lolli']} {go(b, 0)}"
                return s if tier <= 0 else f"({s})"
            case With(a, b):
                s = f"{go(a, 1)} {g['with']} {go(b, 2)}"
                return s if tier <= 1 else f"({s})"
            case Product(a, b):
                s = f"{go(a, 2)} {g['prod']} {go(b, 3)}"
                return s if tier <= 2 else f"({s})"
            case Tensor(a, b):
                s = f"{go(a, 2)} {g['tensor']} {go(b, 3)}"
                return s if tier <= 2 else f"({s})"
            case Bang(a):
                return f"!{go(a, 3)}"
        raise TypeError(f"not a type: {t!r}")

    return go(t, 0)


_GREEK = "abcdefgh"


def _greek_index(n: str) -> int | None:
    if len(n) == 1 and n in _GREEK:
        return _GREEK.index(n)
    return None


def format_term(t: Term, unicode: bool = False) -> str:
    lam = "λ" if unicode else "\\"
    star = "⊗" if unicode else "*"
    lpair, rpair = ("⟨", "⟩") if unicode else ("<", ">")

    def go(t: Term, tier: int) -> str:
        # tier: 0 = open (lambda/let allowed), 1 = tensor operand,
        #       2 = application operand, 3 = atom
        match t:
            case Var(x):
                return x
            case Lam(x, b):
                s = f"{lam}{x}. {go(b, 0)}"
                return s if tier <= 0 else f"({s})"
            case LetTensor(x, y, sc, b):
                s = f"let {x} {star} {y} = {go(sc, 0)} in {go(b, 0)}"
                return s if tier <= 0 else f"({s})"
            case LetWith(k, x, sc, b):
                pat = (
                    f"{lpair}{x}, _{rpair}" if k == 1 else f"{lpair}_, {x}{rpair}"
                )
                s = f"let {pat} = {go(sc, 0)} in {go(b, 0)}"
                return s if tier <= 0 else f"({s})"
            case TensorIntro(l, r):
                s = f"{go(l, 1)} {star} {go(r, 2)}"
                return s if tier <= 1 else f"({s})"
            case App(f, a):
                s = f"{go(f, 2)} {go(a, 3)}"
                return s if tier <= 2 else f"({s})"
            case Proj(i, u):
                word = "fst" if i == 1 else "snd"
                s = f"{word} {go(u, 3)}"
                return s if tier <= 2 else f"({s})"
            case Pair(l, r) | WithPair(l, r):
                return f"{lpair}{go(l, 0)}, {go(r, 0)}{rpair}"
        raise TypeError(f"not a term: {t!r}")

    return go(t, 0)


_FORMULA_GLYPHS = {
    False: {"impl": "=>", "lolli": "-o", "conj": "/\\", "tensor": "(x)", "with": "&"},
    True: {"impl": "⊃", "lolli": "⊸", "conj": "∧", "tensor": "⊗", "with": "&"},
}


def format_formula(f: Formula, unicode: bool = False) -> str:
    g = _FORMULA_GLYPHS[unicode]

    def go(f: Formula, tier: int) -> str:
        match f:
            case Atom(n):
                return n
            case Impl(a, b):
                s = f"{go(a, 1)} {g['impl']} {go(b, 0)}"
                return s if tier <= 0 else f"({s})"
            case LImpl(a, b):
                s = f"{go(a, 1)} {g['lolli']} {go(b, 0)}"
                return s if tier <= 0 else f"({s})"
            case LWith(a, b):
                s = f"{go(a, 1)} {g['with']} {go(b, 2)}"
                return s if tier <= 1 else f"({s})"
            case Conj(a, b):
                s = f"{go(a, 2)} {g['conj']} {go(b, 3)}"
                return s if tier <= 2 else f"({s})"
            case LTensor(a, b):
                s = f"{go(a, 2)} {g['tensor']} {go(b, 3)}"
                return s if tier <= 2 else f"({s})"
            case LBang(a):
                return f"!{go(a, 3)}"
        raise TypeError(f"not a formula: {f!r}")

    return go(f, 0)


def format_sequent(s: Sequent, unicode: bool = False) -> str:
    stile = "⊢" if unicode else "|-"
    hyps = ", ".join(format_formula(h, unicode) for h in s.hyps)
    concl = format_formula(s.concl, unicode)
    return f"{hyps} {stile} {concl}" if hyps else f"{stile} {concl}"


def format_context(ctx, unicode: bool = False) -> str:
    return ", ".join(f"{x} : {format_type(T, unicode)}" for x, T in ctx)
