"""First-order formulas over the integers, with divisibility, and their
decision procedure.

Formulas are built from linear atoms ``t <= 0``, ``t = 0`` and ``d | t``
(d >= 2; smaller moduli simplify away at construction), the boolean
connectives and quantifiers.  ``cooper_qe`` eliminates quantifiers by the
classical Cooper method in its minus-infinity variant; ``decide`` settles
sentences.  On top of that sit the boolean-algebra queries for semilinear
sets: emptiness, inclusion, equality and membership in complements, which is
how complements are decided without ever materialising them.

Intermediate least common multiples are guarded: exceeding the limit raises
instead of grinding.  The environment variable RATG_MAX_LCM overrides the
default limit of 10**6.

Formulas are immutable and all operations are pure.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Union as TUnion

from ratgroups.semilinear import SemilinearSet

__all__ = [
    "Term",
    "Formula",
    "TRUE",
    "FALSE",
    "Le",
    "Eq",
    "Dvd",
    "Not",
    "And",
    "Or",
    "Exists",
    "Forall",
    "term",
    "var",
    "const",
    "le",
    "lt",
    "ge",
    "gt",
    "eq",
    "ne",
    "divides",
    "land",
    "lor",
    "lnot",
    "implies",
    "exists",
    "forall",
    "free_variables",
    "evaluate",
    "substitute",
    "from_semilinear",
    "cooper_qe",
    "decide",
    "SetExpr",
    "decide_empty",
    "decide_inclusion",
    "decide_equal",
    "member_complement",
    "default_max_lcm",
]


def default_max_lcm() -> int:
    return int(os.environ.get("RATG_MAX_LCM", 10**6))


# ---------------------------------------------------------------------------
# linear terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Term:
    """An integer-linear expression: coefficient map plus a constant."""

    coeffs: tuple[tuple[str, int], ...]
    const: int

    def __init__(self, coeffs: Mapping[str, int] | Iterable[tuple[str, int]] = (), const: int = 0):
        items = dict(coeffs)
        object.__setattr__(
            self, "coeffs", tuple(sorted((v, c) for v, c in items.items() if c != 0))
        )
        object.__setattr__(self, "const", int(const))

    def coeff(self, name: str) -> int:
        return dict(self.coeffs).get(name, 0)

    def variables(self) -> frozenset[str]:
        return frozenset(v for v, _ in self.coeffs)

    def drop(self, name: str) -> "Term":
        return Term({v: c for v, c in self.coeffs if v != name}, self.const)

    def __add__(self, other: "Term") -> "Term":
        acc = dict(self.coeffs)
        for v, c in other.coeffs:
            acc[v] = acc.get(v, 0) + c
        return Term(acc, self.const + other.const)

    def __neg__(self) -> "Term":
        return Term({v: -c for v, c in self.coeffs}, -self.const)

    def __sub__(self, other: "Term") -> "Term":
        return self + (-other)

    def scale(self, k: int) -> "Term":
        if k == 0:
            return Term((), 0)
        return Term({v: k * c for v, c in self.coeffs}, k * self.const)

    def subst(self, name: str, repl: "Term") -> "Term":
        a = self.coeff(name)
        if a == 0:
            return self
        return self.drop(name) + repl.scale(a)

    def evaluate(self, env: Mapping[str, int]) -> int:
        return self.const + sum(c * env[v] for v, c in self.coeffs)

    def render(self) -> str:
        parts = []
        for v, c in self.coeffs:
            if c == 1:
                s = v
            elif c == -1:
                s = f"-{v}"
            else:
                s = f"{c}{v}"
            parts.append(s if not parts or s.startswith("-") else "+" + s)
        if self.const or not parts:
            s = str(self.const)
            parts.append(s if not parts or s.startswith("-") else "+" + s)
        return "".join(parts)


def term(coeffs: Mapping[str, int] = (), const: int = 0) -> Term:
    return Term(coeffs, const)


def var(name: str) -> Term:
    return Term({name: 1}, 0)


def const(value: int) -> Term:
    return Term((), value)


# ---------------------------------------------------------------------------
# formulas
# ---------------------------------------------------------------------------


class Formula:
    def render(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.render()

    def __and__(self, other: "Formula") -> "Formula":
        return land(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return lor(self, other)

    def __invert__(self) -> "Formula":
        return lnot(self)


@dataclass(frozen=True, repr=False)
class _Bool(Formula):
    value: bool

    def render(self):
        return "true" if self.value else "false"


TRUE = _Bool(True)
FALSE = _Bool(False)


@dataclass(frozen=True, repr=False)
class Le(Formula):
    """term <= 0"""

    t: Term

    def render(self):
        return f"{self.t.render()}<=0"


@dataclass(frozen=True, repr=False)
class Eq(Formula):
    """term = 0"""

    t: Term

    def render(self):
        return f"{self.t.render()}=0"


@dataclass(frozen=True, repr=False)
class Dvd(Formula):
    """d | term, d >= 2"""

    d: int
    t: Term

    def render(self):
        return f"{self.d}|{self.t.render()}"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    body: Formula

    def render(self):
        return f"!({self.body.render()})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    args: tuple[Formula, ...]

    def render(self):
        return "(" + " & ".join(a.render() for a in self.args) + ")"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    args: tuple[Formula, ...]

    def render(self):
        return "(" + " | ".join(a.render() for a in self.args) + ")"


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    body: Formula

    def render(self):
        return f"E {self.var}. {self.body.render()}"


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    var: str
    body: Formula

    def render(self):
        return f"A {self.var}. {self.body.render()}"


# smart constructors ---------------------------------------------------------


def le(t: Term) -> Formula:
    if not t.coeffs:
        return TRUE if t.const <= 0 else FALSE
    g = math.gcd(*(c for _, c in t.coeffs))
    # sum g a_i x_i + c <= 0  <=>  sum a_i x_i + ceil(c/g) <= 0
    return Le(Term({v: c // g for v, c in t.coeffs}, -((-t.const) // g)))


def lt(t: Term) -> Formula:
    return le(t + const(1))


def ge(t: Term) -> Formula:
    return le(-t)


def gt(t: Term) -> Formula:
    return lt(-t)


def eq(t: Term) -> Formula:
    if not t.coeffs:
        return TRUE if t.const == 0 else FALSE
    g = math.gcd(*(c for _, c in t.coeffs))
    if t.const % g:
        return FALSE
    return Eq(Term({v: c // g for v, c in t.coeffs}, t.const // g))


def ne(t: Term) -> Formula:
    return lnot(eq(t))


def divides(d: int, t: Term) -> Formula:
    d = abs(int(d))
    if d == 0:
        return eq(t)
    if d == 1:
        return TRUE
    # reduce coefficients into [0, d)
    reduced = Term({v: c % d for v, c in t.coeffs}, t.const % d)
    if not reduced.coeffs:
        return TRUE if reduced.const % d == 0 else FALSE
    g = math.gcd(d, *(c for _, c in reduced.coeffs), reduced.const)
    if g > 1:
        d //= g
        reduced = Term({v: c // g for v, c in reduced.coeffs}, reduced.const // g)
        if d == 1:
            return TRUE
    return Dvd(d, reduced)


def lnot(f: Formula) -> Formula:
    if f is TRUE:
        return FALSE
    if f is FALSE:
        return TRUE
    if isinstance(f, Not):
        return f.body
    return Not(f)


def land(*fs: Formula) -> Formula:
    flat: list[Formula] = []
    for f in fs:
        if f is FALSE:
            return FALSE
        if f is TRUE:
            continue
        if isinstance(f, And):
            flat.extend(f.args)
        else:
            flat.append(f)
    seen, uniq = set(), []
    for f in flat:
        if f not in seen:
            seen.add(f)
            uniq.append(f)
    if not uniq:
        return TRUE
    if len(uniq) == 1:
        return uniq[0]
    return And(tuple(uniq))


def lor(*fs: Formula) -> Formula:
    flat: list[Formula] = []
    for f in fs:
        if f is TRUE:
            return TRUE
        if f is FALSE:
            continue
        if isinstance(f, Or):
            flat.extend(f.args)
        else:
            flat.append(f)
    seen, uniq = set(), []
    for f in flat:
        if f not in seen:
            seen.add(f)
            uniq.append(f)
    if not uniq:
        return FALSE
    if len(uniq) == 1:
        return uniq[0]
    return Or(tuple(uniq))


def implies(a: Formula, b: Formula) -> Formula:
    return lor(lnot(a), b)


def exists(name: str, body: Formula) -> Formula:
    return Exists(name, body)


def forall(name: str, body: Formula) -> Formula:
    return Forall(name, body)


# queries ---------------------------------------------------------------------


def free_variables(f: Formula) -> frozenset[str]:
    if isinstance(f, _Bool):
        return frozenset()
    if isinstance(f, (Le, Eq)):
        return f.t.variables()
    if isinstance(f, Dvd):
        return f.t.variables()
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for a in f.args:
            out |= free_variables(a)
        return out
    if isinstance(f, (Exists, Forall)):
        return free_variables(f.body) - {f.var}
    raise TypeError(f)


def evaluate(f: Formula, env: Mapping[str, int]) -> bool:
    """Truth value of a quantifier-free formula under an assignment."""
    if isinstance(f, _Bool):
        return f.value
    if isinstance(f, Le):
        return f.t.evaluate(env) <= 0
    if isinstance(f, Eq):
        return f.t.evaluate(env) == 0
    if isinstance(f, Dvd):
        return f.t.evaluate(env) % f.d == 0
    if isinstance(f, Not):
        return not evaluate(f.body, env)
    if isinstance(f, And):
        return all(evaluate(a, env) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate(a, env) for a in f.args)
    raise ValueError("cannot evaluate a quantified formula directly")


def substitute(f: Formula, env: Mapping[str, Term]) -> Formula:
    """Capture-free substitution (bound variables must not occur in env)."""
    if isinstance(f, _Bool):
        return f
    if isinstance(f, Le):
        t = f.t
        for v, r in env.items():
            t = t.subst(v, r)
        return le(t)
    if isinstance(f, Eq):
        t = f.t
        for v, r in env.items():
            t = t.subst(v, r)
        return eq(t)
    if isinstance(f, Dvd):
        t = f.t
        for v, r in env.items():
            t = t.subst(v, r)
        return divides(f.d, t)
    if isinstance(f, Not):
        return lnot(substitute(f.body, env))
    if isinstance(f, And):
        return land(*(substitute(a, env) for a in f.args))
    if isinstance(f, Or):
        return lor(*(substitute(a, env) for a in f.args))
    if isinstance(f, (Exists, Forall)):
        if f.var in env or any(f.var in t.variables() for t in env.values()):
            raise ValueError("substitution would capture a bound variable")
        body = substitute(f.body, env)
        return Exists(f.var, body) if isinstance(f, Exists) else Forall(f.var, body)
    raise TypeError(f)


def _freshen(f: Formula, counter: list[int], renaming: dict[str, str]) -> Formula:
    """Rename every bound variable to a unique internal name."""
    if isinstance(f, _Bool):
        return f
    if isinstance(f, (Le, Eq, Dvd)):
        t = f.t
        for old, new in renaming.items():
            if t.coeff(old):
                t = t.subst(old, var(new))
        if isinstance(f, Dvd):
            return Dvd(f.d, t)
        return Le(t) if isinstance(f, Le) else Eq(t)
    if isinstance(f, Not):
        return Not(_freshen(f.body, counter, renaming))
    if isinstance(f, And):
        return And(tuple(_freshen(a, counter, renaming) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(_freshen(a, counter, renaming) for a in f.args))
    if isinstance(f, (Exists, Forall)):
        fresh = f"_b{counter[0]}"
        counter[0] += 1
        inner = dict(renaming)
        inner[f.var] = fresh
        body = _freshen(f.body, counter, inner)
        return Exists(fresh, body) if isinstance(f, Exists) else Forall(fresh, body)
    raise TypeError(f)


# ---------------------------------------------------------------------------
# Cooper elimination
# ---------------------------------------------------------------------------


def _nnf(f: Formula, positive: bool = True) -> Formula:
    """Negation normal form; Not survives only on Eq and Dvd atoms."""
    if isinstance(f, _Bool):
        return f if positive else lnot(f)
    if isinstance(f, Le):
        # !(t <= 0)  <=>  -t + 1 <= 0
        return f if positive else le(-f.t + const(1))
    if isinstance(f, (Eq, Dvd)):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return _nnf(f.body, not positive)
    if isinstance(f, And):
        parts = [_nnf(a, positive) for a in f.args]
        return land(*parts) if positive else lor(*parts)
    if isinstance(f, Or):
        parts = [_nnf(a, positive) for a in f.args]
        return lor(*parts) if positive else land(*parts)
    raise ValueError("quantifier inside an elimination body")


def _map_literals(f: Formula, fn) -> Formula:
    """Rebuild an NNF formula, transforming each literal through fn."""
    if isinstance(f, _Bool):
        return f
    if isinstance(f, (Le, Eq, Dvd)):
        return fn(f, True)
    if isinstance(f, Not):
        return fn(f.body, False)
    if isinstance(f, And):
        return land(*(_map_literals(a, fn) for a in f.args))
    if isinstance(f, Or):
        return lor(*(_map_literals(a, fn) for a in f.args))
    raise TypeError(f)


def _literals(f: Formula) -> list[tuple[Formula, bool]]:
    if isinstance(f, _Bool):
        return []
    if isinstance(f, (Le, Eq, Dvd)):
        return [(f, True)]
    if isinstance(f, Not):
        return [(f.body, False)]
    if isinstance(f, (And, Or)):
        out = []
        for a in f.args:
            out.extend(_literals(a))
        return out
    raise TypeError(f)


def _eliminate_exists(name: str, body: Formula, max_lcm: int) -> Formula:
    """Quantifier-free equivalent of E name. body (body quantifier-free)."""
    body = _nnf(body)
    if isinstance(body, Or):
        return lor(*(_eliminate_exists(name, a, max_lcm) for a in body.args))
    if name not in free_variables(body):
        return body

    lits = [(lit, pos) for lit, pos in _literals(body) if _lit_coeff(lit, name)]
    l = 1
    for lit, _ in lits:
        l = _lcm(l, abs(_lit_coeff(lit, name)))
        _guard(l, max_lcm)

    # fast path: a conjoined equality pins the variable up to a divisibility
    conjuncts = body.args if isinstance(body, And) else (body,)
    for c in conjuncts:
        if isinstance(c, Eq) and c.t.coeff(name):
            a = c.t.coeff(name)
            if a < 0:
                a, rest = -a, c.t.drop(name)
            else:
                rest = -c.t.drop(name)
            # a x = rest: solvable iff a | rest; then z = l x := (l/a) rest
            return land(
                divides(a, rest), _subst_scaled(body, name, l, rest.scale(l // a))
            )
    delta = l
    for lit, _ in lits:
        if isinstance(lit, Dvd):
            s = l // abs(_lit_coeff(lit, name))
            delta = _lcm(delta, s * lit.d)
            _guard(delta, max_lcm)

    bterms = _lower_boundary_terms(lits, name, l)
    disjuncts = []
    for j in range(1, delta + 1):
        disjuncts.append(_subst_minus_inf(body, name, l, j))
        for b in bterms:
            disjuncts.append(_subst_scaled(body, name, l, b + const(j)))
    return lor(*disjuncts)


def _lit_coeff(lit: Formula, name: str) -> int:
    return lit.t.coeff(name)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _guard(value: int, max_lcm: int) -> None:
    if value > max_lcm:
        raise ValueError(
            f"divisibility lcm {value} exceeds the guardrail {max_lcm}; "
            "raise RATG_MAX_LCM to proceed"
        )


def _scaled_parts(lit: Formula, name: str, l: int) -> tuple[int, Term, int]:
    """(sign of the z-coefficient, scaled remainder, scale factor).

    With z = l*name, the literal's term a*name + r scales by s = l/|a| to
    sign*z + s*r.
    """
    a = lit.t.coeff(name)
    s = l // abs(a)
    rest = lit.t.drop(name).scale(s)
    return (1 if a > 0 else -1), rest, s


def _subst_scaled(body: Formula, name: str, l: int, repl: Term) -> Formula:
    """body with z = l*name substituted by repl, plus the l | z constraint."""

    def fn(lit: Formula, pos: bool) -> Formula:
        a = _lit_coeff(lit, name) if isinstance(lit, (Le, Eq, Dvd)) else 0
        if a == 0:
            return lit if pos else lnot(lit)
        sign, rest, s = _scaled_parts(lit, name, l)
        t = repl.scale(sign) + rest
        if isinstance(lit, Le):
            out = le(t)
        elif isinstance(lit, Eq):
            out = eq(t)
        else:
            out = divides(s * lit.d, t)
        return out if pos else lnot(out)

    out = _map_literals(body, fn)
    if l > 1:
        out = land(divides(l, repl), out)
    return out


def _subst_minus_inf(body: Formula, name: str, l: int, j: int) -> Formula:
    """body at z -> j with upper bounds true and lower bounds false."""

    def fn(lit: Formula, pos: bool) -> Formula:
        a = _lit_coeff(lit, name) if isinstance(lit, (Le, Eq, Dvd)) else 0
        if a == 0:
            return lit if pos else lnot(lit)
        sign, rest, s = _scaled_parts(lit, name, l)
        if isinstance(lit, Le):
            # sign*z + rest <= 0: toward -infinity true iff sign = +1
            out = TRUE if sign > 0 else FALSE
        elif isinstance(lit, Eq):
            out = FALSE
        else:
            out = divides(s * lit.d, const(sign * j) + rest)
        return out if pos else lnot(out)

    out = _map_literals(body, fn)
    if l > 1:
        out = land(divides(l, const(j)), out)
    return out


def _lower_boundary_terms(lits, name: str, l: int) -> list[Term]:
    """Cooper B-terms (lower boundaries) in the scaled variable z = l*name."""
    out: list[Term] = []
    seen = set()
    for lit, pos in lits:
        sign, rest, _ = _scaled_parts(lit, name, l)
        if isinstance(lit, Le):
            if sign < 0:
                # -z + rest <= 0, i.e. z >= rest
                out.append(rest + const(-1))
        elif isinstance(lit, Eq):
            t = rest.scale(-sign)  # z = t
            out.append(t + const(-1) if pos else t)
        else:
            continue
    uniq = []
    for t in out:
        key = (t.coeffs, t.const)
        if key not in seen:
            seen.add(key)
            uniq.append(t)
    return uniq


def _qe(f: Formula, max_lcm: int) -> Formula:
    if isinstance(f, (_Bool, Le, Eq, Dvd)):
        return f
    if isinstance(f, Not):
        return lnot(_qe(f.body, max_lcm))
    if isinstance(f, And):
        return land(*(_qe(a, max_lcm) for a in f.args))
    if isinstance(f, Or):
        return lor(*(_qe(a, max_lcm) for a in f.args))
    if isinstance(f, Exists):
        return _eliminate_exists(f.var, _qe(f.body, max_lcm), max_lcm)
    if isinstance(f, Forall):
        return lnot(_eliminate_exists(f.var, _nnf(_qe(f.body, max_lcm), positive=False), max_lcm))
    raise TypeError(f)


def cooper_qe(f: Formula, max_lcm: Optional[int] = None) -> Formula:
    """A quantifier-free formula equivalent to f over the integers.

    Universal quantifiers go through the negation of an existential; each
    existential is eliminated by the minus-infinity variant of Cooper's
    procedure, with a substitution shortcut when a conjoined equality pins
    the variable.
    """
    if max_lcm is None:
        max_lcm = default_max_lcm()
    fresh = _freshen(f, [0], {})
    return _qe(fresh, max_lcm)


def decide(sentence: Formula, max_lcm: Optional[int] = None) -> bool:
    """Truth of a closed formula over the integers."""
    if free_variables(sentence):
        raise ValueError(f"free variables present: {sorted(free_variables(sentence))}")
    out = cooper_qe(sentence, max_lcm)
    return evaluate(out, {})


# ---------------------------------------------------------------------------
# the boolean algebra over semilinear sets
# ---------------------------------------------------------------------------


def _default_vars(rank: int) -> list[str]:
    return [f"x{i + 1}" for i in range(rank)]


def from_semilinear(s: SemilinearSet, variables: Optional[Sequence[str]] = None) -> Formula:
    """The defining formula: a disjunction over components of an existential
    description x = c + P n with n >= 0."""
    names = list(variables) if variables is not None else _default_vars(s.rank)
    if len(names) != s.rank:
        raise ValueError("variable count must match the rank")
    parts = []
    for comp in s.components:
        k = len(comp.periods)
        multipliers = [f"_m{j}" for j in range(k)]
        body = []
        for i, name in enumerate(names):
            t = var(name) - const(comp.base[i])
            for j, p in enumerate(comp.periods):
                t = t - Term({multipliers[j]: p[i]})
            body.append(eq(t))
        body.extend(ge(var(m)) for m in multipliers)
        f: Formula = land(*body)
        for m in reversed(multipliers):
            f = exists(m, f)
        parts.append(f)
    return lor(*parts)


class SetExpr:
    """A boolean combination of semilinear sets, decided at the formula level.

    Combine with ``&``, ``|``, ``-`` and ``~``; leaves are semilinear sets.
    Complements never materialise: the combination is translated into a
    Presburger formula.
    """

    def __init__(self, op: str, payload, rank: int):
        self.op = op
        self.payload = payload
        self.rank = rank

    @staticmethod
    def leaf(s: SemilinearSet) -> "SetExpr":
        return SetExpr("leaf", s, s.rank)

    @staticmethod
    def _coerce(x: TUnion["SetExpr", SemilinearSet]) -> "SetExpr":
        return x if isinstance(x, SetExpr) else SetExpr.leaf(x)

    def _binary(self, op: str, other) -> "SetExpr":
        other = SetExpr._coerce(other)
        if self.rank != other.rank:
            raise ValueError("dimension mismatch")
        return SetExpr(op, (self, other), self.rank)

    def __and__(self, other):
        return self._binary("and", other)

    def __or__(self, other):
        return self._binary("or", other)

    def __sub__(self, other):
        return self._binary("diff", other)

    def __invert__(self):
        return SetExpr("not", self, self.rank)

    def formula(self, variables: Sequence[str]) -> Formula:
        if self.op == "leaf":
            return from_semilinear(self.payload, variables)
        if self.op == "not":
            return lnot(self.payload.formula(variables))
        a, b = self.payload
        fa, fb = a.formula(variables), b.formula(variables)
        if self.op == "and":
            return land(fa, fb)
        if self.op == "or":
            return lor(fa, fb)
        return land(fa, lnot(fb))


def _closed(f: Formula, names: Sequence[str], quantifier=exists) -> Formula:
    for name in reversed(list(names)):
        f = quantifier(name, f)
    return f


def decide_empty(b: TUnion[SetExpr, SemilinearSet], max_lcm: Optional[int] = None) -> bool:
    """Whether a boolean combination of semilinear sets denotes the empty set."""
    e = SetExpr._coerce(b)
    names = _default_vars(e.rank)
    return not decide(_closed(e.formula(names), names, exists), max_lcm)


def decide_inclusion(
    s1: SemilinearSet, s2: SemilinearSet, max_lcm: Optional[int] = None
) -> bool:
    if s1.rank != s2.rank:
        raise ValueError("dimension mismatch")
    names = _default_vars(s1.rank)
    f = implies(from_semilinear(s1, names), from_semilinear(s2, names))
    return decide(_closed(f, names, forall), max_lcm)


def decide_equal(
    s1: SemilinearSet, s2: SemilinearSet, max_lcm: Optional[int] = None
) -> bool:
    return decide_inclusion(s1, s2, max_lcm) and decide_inclusion(s2, s1, max_lcm)


def member_complement(
    s: SemilinearSet, v: Sequence[int], max_lcm: Optional[int] = None
) -> bool:
    """Whether v lies outside the set (the complement query, decided without
    materialising the complement)."""
    v = tuple(int(x) for x in v)
    if len(v) != s.rank:
        raise ValueError("dimension mismatch")
    names = _default_vars(s.rank)
    f = from_semilinear(s, names)
    closed = substitute(f, {n: const(x) for n, x in zip(names, v)})
    return not decide(closed, max_lcm)
