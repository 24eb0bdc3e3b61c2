"""Type checking and inference for the simply typed and linear calculi.

The typing rules are declarative schemas, so checking unannotated binders
requires reconstructing interior types; both checkers do this with
first-order unification against the expected type.  Metavariables left
unconstrained by the goal (for instance the argument type of a function
that discards it) are defaulted to the base type ``b``, which only affects
interior judgements of the reported derivation.

Linear checking computes the multiset of hypotheses consumed by every
subterm bottom-up: applications and tensors demand disjoint usage,
additive pairs demand identical usage, and every binder and context
hypothesis must be consumed exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import surface
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
    WithPair,
    free_vars,
    freshen_shadowing,
    is_intuitionistic_term,
    is_intuitionistic_type,
    is_linear_term,
    is_linear_type,
)

Context = tuple[tuple[str, Type], ...]


class TypeMismatch(Exception):
    """The term cannot be given the expected type."""


class UnboundVariable(Exception):
    """A variable occurs free but is not declared in the context."""


class NotTypable(Exception):
    """No principal type exists (unification clash or occurs-check)."""


class LinearityViolation(Exception):
    """A hypothesis is used zero or more than one time."""


@dataclass(frozen=True)
class Judgement:
    """A typing judgement: ctx |- subject : type."""

    ctx: Context
    subject: Term
    type: Type

    def __str__(self) -> str:
        left = surface.format_context(self.ctx)
        body = f"{surface.format_term(self.subject)} : {surface.format_type(self.type)}"
        return f"{left} |- {body}" if left else f"|- {body}"


@dataclass(frozen=True)
class Derivation:
    """A typing derivation; one rule per node, premises left to right."""

    system: str  # "stlc" | "linear"
    rule: str
    conclusion: Judgement
    premises: tuple["Derivation", ...] = ()


def derivation_text(d: Derivation, unicode: bool = False) -> str:
    """One node per line, ``RULE  ctx |- t : T``, children indented 2 spaces."""
    stile = "⊢" if unicode else "|-"
    lines: list[str] = []

    def emit(d: Derivation, indent: int) -> None:
        j = d.conclusion
        left = surface.format_context(j.ctx, unicode)
        body = (
            f"{surface.format_term(j.subject, unicode)} : "
            f"{surface.format_type(j.type, unicode)}"
        )
        seq = f"{left} {stile} {body}" if left else f"{stile} {body}"
        lines.append("  " * indent + f"{d.rule}  {seq}")
        for p in d.premises:
            emit(p, indent + 1)

    emit(d, 0)
    return "\n".join(lines)


# ------------------------------------------------------------- unification


class _UnifyError(Exception):
    pass


class _Solver:
    """Destructive first-order unification with an explicit substitution."""

    def __init__(self) -> None:
        self.subst: dict[str, Type] = {}
        self.count = 0

    def fresh(self) -> TVar:
        self.count += 1
        return TVar(f"?{self.count}")

    def head(self, t: Type) -> Type:
        while isinstance(t, TVar) and t.name in self.subst:
            t = self.subst[t.name]
        return t

    def _occurs(self, name: str, t: Type) -> bool:
        t = self.head(t)
        match t:
            case TVar(n):
                return n == name
            case Base(_):
                return False
            case Bang(a):
                return self._occurs(name, a)
            case Arrow(a, b) | Product(a, b) | Tensor(a, b) | Lollipop(a, b) | With(a, b):
                return self._occurs(name, a) or self._occurs(name, b)
        raise TypeError(f"not a type: {t!r}")

    def unify(self, a: Type, b: Type) -> None:
        a, b = self.head(a), self.head(b)
        if a == b:
            return
        if isinstance(a, TVar):
            if self._occurs(a.name, b):
                raise _UnifyError(f"occurs check: '{a.name} in {surface.format_type(self.resolve(b))}")
            self.subst[a.name] = b
            return
        if isinstance(b, TVar):
            self.unify(b, a)
            return
        pairs = None
        match a, b:
            case Arrow(a1, a2), Arrow(b1, b2):
                pairs = ((a1, b1), (a2, b2))
            case Product(a1, a2), Product(b1, b2):
                pairs = ((a1, b1), (a2, b2))
            case Tensor(a1, a2), Tensor(b1, b2):
                pairs = ((a1, b1), (a2, b2))
            case Lollipop(a1, a2), Lollipop(b1, b2):
                pairs = ((a1, b1), (a2, b2))
            case With(a1, a2), With(b1, b2):
                pairs = ((a1, b1), (a2, b2))
            case Bang(a1), Bang(b1):
                pairs = ((a1, b1),)
        if pairs is None:
            raise _UnifyError(
                f"cannot unify {surface.format_type(self.resolve(a))} "
                f"and {surface.format_type(self.resolve(b))}"
            )
        for x, y in pairs:
            self.unify(x, y)

    def resolve(self, t: Type) -> Type:
        t = self.head(t)
        match t:
            case TVar(_) | Base(_):
                return t
            case Arrow(a, b):
                return Arrow(self.resolve(a), self.resolve(b))
            case Product(a, b):
                return Product(self.resolve(a), self.resolve(b))
            case Tensor(a, b):
                return Tensor(self.resolve(a), self.resolve(b))
            case Lollipop(a, b):
                return Lollipop(self.resolve(a), self.resolve(b))
            case With(a, b):
                return With(self.resolve(a), self.resolve(b))
            case Bang(a):
                return Bang(self.resolve(a))
        raise TypeError(f"not a type: {t!r}")


def _default_tvars(t: Type, default: Type = Base("b")) -> Type:
    match t:
        case TVar(_):
            return default
        case Base(_):
            return t
        case Arrow(a, b):
            return Arrow(_default_tvars(a, default), _default_tvars(b, default))
        case Product(a, b):
            return Product(_default_tvars(a, default), _default_tvars(b, default))
        case Tensor(a, b):
            return Tensor(_default_tvars(a, default), _default_tvars(b, default))
        case Lollipop(a, b):
            return Lollipop(_default_tvars(a, default), _default_tvars(b, default))
        case With(a, b):
            return With(_default_tvars(a, default), _default_tvars(b, default))
        case Bang(a):
            return Bang(_default_tvars(a, default))
    raise TypeError(f"not a type: {t!r}")


def _map_deriv_types(d: Derivation, f) -> Derivation:
    j = d.conclusion
    new_j = Judgement(tuple((x, f(T)) for x, T in j.ctx), j.subject, f(j.type))
    return Derivation(d.system, d.rule, new_j, tuple(_map_deriv_types(p, f) for p in d.premises))


# ---------------------------------------------------------- simply typed


def typecheck_stlc(ctx: Context, t: Term, expected: Type) -> Derivation:
    """Check t against expected in context ctx; returns the full derivation.

    Context and expected types must be ground (no type variables).  Raises
    TypeMismatch or UnboundVariable.  Binders shadowing context names are
    freshened, so judgements may display an alpha-variant of t.
    """
    _require_distinct(ctx)
    for x, T in ctx:
        if not is_intuitionistic_type(T):
            raise TypeMismatch(f"context type of {x} is not simply typed: {T}")
    if not is_intuitionistic_type(expected):
        raise TypeMismatch(f"expected type is not simply typed: {expected}")
    if not is_intuitionistic_term(t):
        raise TypeMismatch(f"term is not in the simply typed fragment: {t}")
    t = freshen_shadowing(t, frozenset(x for x, _ in ctx))
    s = _Solver()
    try:
        d = _check_stlc(s, ctx, t, expected)
    except _UnifyError as e:
        raise TypeMismatch(str(e)) from None
    return _map_deriv_types(d, lambda T: _default_tvars(s.resolve(T)))


def _check_stlc(s: _Solver, ctx: Context, t: Term, T: Type) -> Derivation:
    env = dict(ctx)

    def node(rule: str, T: Type, premises: tuple[Derivation, ...] = ()) -> Derivation:
        return Derivation("stlc", rule, Judgement(ctx, t, T), premises)

    def unify_at(a: Type, b: Type) -> None:
        try:
            s.unify(a, b)
        except _UnifyError as e:
            raise TypeMismatch(f"at {surface.format_term(t)}: {e}") from None

    match t:
        case Var(x):
            if x not in env:
                raise UnboundVariable(f"unbound variable {x}")
            unify_at(env[x], T)
            return node("var", T)
        case App(f, a):
            m = s.fresh()
            df = _check_stlc(s, ctx, f, Arrow(m, T))
            da = _check_stlc(s, ctx, a, m)
            return node("app", T, (df, da))
        case Lam(x, b):
            m1, m2 = s.fresh(), s.fresh()
            unify_at(T, Arrow(m1, m2))
            db = _check_stlc(s, ctx + ((x, m1),), b, m2)
            return node("abs", T, (db,))
        case Pair(l, r):
            m1, m2 = s.fresh(), s.fresh()
            unify_at(T, Product(m1, m2))
            dl = _check_stlc(s, ctx, l, m1)
            dr = _check_stlc(s, ctx, r, m2)
            return node("pair", T, (dl, dr))
        case Proj(i, p):
            m1, m2 = s.fresh(), s.fresh()
            dp = _check_stlc(s, ctx, p, Product(m1, m2))
            unify_at(T, m1 if i == 1 else m2)
            return node(f"proj{i}", T, (dp,))
    raise TypeMismatch(f"term is not in the simply typed fragment: {t}")


def _require_distinct(ctx: Context) -> None:
    names = [x for x, _ in ctx]
    if len(set(names)) != len(names):
        raise TypeMismatch(f"duplicate context names: {names}")


# ----------------------------------------------------- principal inference


def infer_principal_type(t: Term) -> Type:
    """Most general type of a closed simply typed term.

    Type variables in the result are canonically renamed to 'a, 'b, ... in
    order of first appearance.  Raises NotTypable or UnboundVariable.
    """
    if free_vars(t):
        raise UnboundVariable(
            f"term is not closed: {', '.join(sorted(free_vars(t)))} free"
        )
    if not is_intuitionistic_term(t):
        raise NotTypable(f"term is not in the simply typed fragment: {t}")
    s = _Solver()
    goal = s.fresh()
    try:
        _check_stlc(s, (), t, goal)
    except (_UnifyError, TypeMismatch) as e:
        raise NotTypable(str(e)) from None
    return _canonical_tvars(s.resolve(goal))


def _canonical_tvars(t: Type) -> Type:
    order: list[str] = []

    def collect(t: Type) -> None:
        match t:
            case TVar(n):
                if n not in order:
                    order.append(n)
            case Base(_):
                pass
            case Bang(a):
                collect(a)
            case Arrow(a, b) | Product(a, b) | Tensor(a, b) | Lollipop(a, b) | With(a, b):
                collect(a)
                collect(b)

    collect(t)
    names = {}
    for i, n in enumerate(order):
        names[n] = _letter(i)

    def rename(t: Type) -> Type:
        match t:
            case TVar(n):
                return TVar(names[n])
            case Base(_):
                return t
            case Arrow(a, b):
                return Arrow(rename(a), rename(b))
            case Product(a, b):
                return Product(rename(a), rename(b))
            case Tensor(a, b):
                return Tensor(rename(a), rename(b))
            case Lollipop(a, b):
                return Lollipop(rename(a), rename(b))
            case With(a, b):
                return With(rename(a), rename(b))
            case Bang(a):
                return Bang(rename(a))
        raise TypeError(f"not a type: {t!r}")

    return rename(t)


def _letter(i: int) -> str:
    letters = "abcdefghijklmnopqrstuvwxyz"
    if i < 26:
        return letters[i]
    return f"{letters[i % 26]}{i // 26}"


# ------------------------------------------------------------------ linear


def typecheck_linear(ctx: Context, t: Term, expected: Type) -> Derivation:
    """Check t against expected with every hypothesis used exactly once.

    Additive pairs must consume identical hypotheses in both components;
    everything else is multiplicative.  ! types have no term syntax and are
    rejected.  Raises TypeMismatch, UnboundVariable or LinearityViolation.
    """
    _require_distinct(ctx)
    for x, T in ctx:
        if not is_linear_type(T, allow_bang=False):
            raise TypeMismatch(
                f"context type of {x} is not linear (or uses !, which has "
                f"no term syntax): {surface.format_type(T)}"
            )
    if not is_linear_type(expected, allow_bang=False):
        raise TypeMismatch(
            f"expected type is not linear (or uses !): {surface.format_type(expected)}"
        )
    if not is_linear_term(t):
        raise TypeMismatch(f"term is not in the linear fragment: {t}")
    t = freshen_shadowing(t, frozenset(x for x, _ in ctx))

    # Linearity is structural, so violations are reported before any type
    # errors the same term may also contain.
    used_names = _structural_usage(t)
    missing_names = {x for x, _ in ctx} - used_names
    if missing_names:
        raise LinearityViolation(f"unused hypotheses: {', '.join(sorted(missing_names))}")

    s = _Solver()
    registry: list[tuple[str, Type]] = []  # binding id -> (name, type)

    def new_binding(name: str, T: Type) -> int:
        registry.append((name, T))
        return len(registry) - 1

    scope0 = {}
    for x, T in ctx:
        scope0[x] = new_binding(x, T)

    def ctx_of(used: frozenset[int]) -> Context:
        return tuple(registry[i] for i in sorted(used))

    def check(t: Term, T: Type, scope: dict[str, int]):
        def node(rule, used, premises=()):
            return Derivation("linear", rule, Judgement(ctx_of(used), t, T), premises)

        def unify_at(a: Type, b: Type) -> None:
            try:
                s.unify(a, b)
            except _UnifyError as e:
                raise TypeMismatch(f"at {surface.format_term(t)}: {e}") from None

        match t:
            case Var(x):
                if x not in scope:
                    raise UnboundVariable(f"unbound variable {x}")
                i = scope[x]
                unify_at(registry[i][1], T)
                used = frozenset({i})
                return node("var", used), used
            case App(f, a):
                m = s.fresh()
                df, uf = check(f, Lollipop(m, T), scope)
                da, ua = check(a, m, scope)
                _disjoint(uf, ua, registry)
                used = uf | ua
                return node("app", used, (df, da)), used
            case Lam(x, b):
                m1, m2 = s.fresh(), s.fresh()
                unify_at(T, Lollipop(m1, m2))
                i = new_binding(x, m1)
                db, ub = check(b, m2, {**scope, x: i})
                if i not in ub:
                    raise LinearityViolation(f"bound variable {x} is unused")
                used = ub - {i}
                return node("abs", used, (db,)), used
            case TensorIntro(l, r):
                m1, m2 = s.fresh(), s.fresh()
                unify_at(T, Tensor(m1, m2))
                dl, ul = check(l, m1, scope)
                dr, ur = check(r, m2, scope)
                _disjoint(ul, ur, registry)
                used = ul | ur
                return node("tensor", used, (dl, dr)), used
            case LetTensor(x, y, sc, b):
                m1, m2 = s.fresh(), s.fresh()
                dsc, usc = check(sc, Tensor(m1, m2), scope)
                ix = new_binding(x, m1)
                iy = new_binding(y, m2)
                db, ub = check(b, T, {**scope, x: ix, y: iy})
                for i, name in ((ix, x), (iy, y)):
                    if i not in ub:
                        raise LinearityViolation(f"bound variable {name} is unused")
                ub = ub - {ix, iy}
                _disjoint(usc, ub, registry)
                used = usc | ub
                return node("let-tensor", used, (dsc, db)), used
            case Pair(l, r) | WithPair(l, r):
                m1, m2 = s.fresh(), s.fresh()
                unify_at(T, With(m1, m2))
                dl, ul = check(l, m1, scope)
                dr, ur = check(r, m2, scope)
                if ul != ur:
                    names = sorted(registry[i][0] for i in ul ^ ur)
                    raise LinearityViolation(
                        "additive pair components consume different hypotheses: "
                        + ", ".join(names)
                    )
                return node("with-pair", ul, (dl, dr)), ul
            case LetWith(k, x, sc, b):
                m1, m2 = s.fresh(), s.fresh()
                dsc, usc = check(sc, With(m1, m2), scope)
                i = new_binding(x, m1 if k == 1 else m2)
                db, ub = check(b, T, {**scope, x: i})
                if i not in ub:
                    raise LinearityViolation(f"bound variable {x} is unused")
                ub = ub - {i}
                _disjoint(usc, ub, registry)
                used = usc | ub
                return node(f"let-with{k}", used, (dsc, db)), used
        raise TypeMismatch(f"term is not in the linear fragment: {t}")

    try:
        d, used = check(t, expected, scope0)
    except _UnifyError as e:
        raise TypeMismatch(str(e)) from None
    missing = set(scope0.values()) - used
    if missing:
        names = sorted(registry[i][0] for i in missing)
        raise LinearityViolation(f"unused hypotheses: {', '.join(names)}")
    d = _map_deriv_types(d, lambda T: _default_tvars(s.resolve(T)))
    _reject_bang_types(d)
    return d


def _structural_usage(t: Term) -> frozenset[str]:
    """Names consumed by t, assuming all binders are distinct (freshened)."""

    def disjoint(u1: frozenset[str], u2: frozenset[str]) -> frozenset[str]:
        if u1 & u2:
            raise LinearityViolation(
                f"used more than once: {', '.join(sorted(u1 & u2))}"
            )
        return u1 | u2

    def consume(u: frozenset[str], names: tuple[str, ...]) -> frozenset[str]:
        for x in names:
            if x not in u:
                raise LinearityViolation(f"bound variable {x} is unused")
        return u - set(names)

    match t:
        case Var(x):
            return frozenset({x})
        case App(f, a):
            return disjoint(_structural_usage(f), _structural_usage(a))
        case Lam(x, b):
            return consume(_structural_usage(b), (x,))
        case TensorIntro(l, r):
            return disjoint(_structural_usage(l), _structural_usage(r))
        case LetTensor(x, y, sc, b):
            ub = consume(_structural_usage(b), (x, y))
            return disjoint(_structural_usage(sc), ub)
        case Pair(l, r) | WithPair(l, r):
            ul, ur = _structural_usage(l), _structural_usage(r)
            if ul != ur:
                raise LinearityViolation(
                    "additive pair components consume different hypotheses: "
                    + ", ".join(sorted(ul ^ ur))
                )
            return ul
        case LetWith(_, x, sc, b):
            ub = consume(_structural_usage(b), (x,))
            return disjoint(_structural_usage(sc), ub)
    raise TypeMismatch(f"term is not in the linear fragment: {t}")


def _disjoint(u1: frozenset[int], u2: frozenset[int], registry) -> None:
    both = u1 & u2
    if both:
        names = sorted(registry[i][0] for i in both)
        raise LinearityViolation(f"used more than once: {', '.join(names)}")


def _reject_bang_types(d: Derivation) -> None:
    def has_bang(t: Type) -> bool:
        match t:
            case Bang(_):
                return True
            case Base(_) | TVar(_):
                return False
            case Arrow(a, b) | Product(a, b) | Tensor(a, b) | Lollipop(a, b) | With(a, b):
                return has_bang(a) or has_bang(b)
        return False

    j = d.conclusion
    if has_bang(j.type) or any(has_bang(T) for _, T in j.ctx):
        raise TypeMismatch("! types have no term-level syntax")
    for p in d.premises:
        _reject_bang_types(p)
