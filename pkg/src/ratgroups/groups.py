"""Exact arithmetic and canonical normal forms for five concrete group families.

Backends:

* ``free_abelian``  -- Z^r, elements are integer vectors.
* ``semidirect``    -- Z^r semidirect Z, the cyclic factor acting through an
  integer matrix M with det = +-1.  An element ``(v, k)`` stands for ``v·h^k``
  and conjugation satisfies ``h^-k v h^k = M^k v``.
* ``heisenberg``    -- 3x3 unitriangular integer matrices, stored as the
  triple (alpha, beta, gamma) of the two superdiagonal entries and the corner.
* ``lamplighter``   -- Z_mu wr Z: a finitely supported configuration of
  residues together with a shift.
* ``metabelian``    -- gp(x, a | [a, a^{x^i}] = 1, a^{f(x)} = 1) for an
  integer polynomial f; the normal closure of ``a`` is the module
  Z[x, 1/x]/(f) and elements are stored as ``x^k · a^m`` with ``m`` a
  residue class of Laurent polynomials.

All values are immutable and all operations are pure functions, so they are
safe to share between threads.  Integers are Python integers throughout:
nothing wraps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence, Union

__all__ = [
    "GroupSpec",
    "GroupElement",
    "AbelianVec",
    "SemidirectElem",
    "HeisenbergElem",
    "LamplighterElem",
    "MetabelianElem",
    "LaurentClass",
    "identity",
    "mul",
    "inv",
    "power",
    "eval_word",
    "laurent_equal",
    "laurent_class",
    "generator_table",
    "commutator",
]

Word = Sequence[tuple[str, int]]


# ---------------------------------------------------------------------------
# exact integer matrices (small, dense, tuple-of-tuples)
# ---------------------------------------------------------------------------

IntMatrix = tuple[tuple[int, ...], ...]


def _mat_vec(m: IntMatrix, v: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def _mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _mat_identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _mat_det(m: IntMatrix) -> int:
    # fraction-free Gaussian elimination would do; Fractions are simpler and
    # the matrices are tiny.
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] / a[col][col]
            for c in range(col, n):
                a[r][c] -= factor * a[col][c]
    assert det.denominator == 1
    return int(det)


@lru_cache(maxsize=None)
def _mat_inverse(m: IntMatrix) -> IntMatrix:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    out = []
    for i in range(n):
        row = a[i][n:]
        assert all(x.denominator == 1 for x in row), "matrix not invertible over Z"
        out.append(tuple(int(x) for x in row))
    return tuple(out)


@lru_cache(maxsize=None)
def _mat_power(m: IntMatrix, k: int) -> IntMatrix:
    n = len(m)
    if k == 0:
        return _mat_identity(n)
    if k < 0:
        return _mat_power(_mat_inverse(m), -k)
    half = _mat_power(m, k // 2)
    sq = _mat_mul(half, half)
    return _mat_mul(sq, m) if k % 2 else sq


# ---------------------------------------------------------------------------
# Laurent polynomials with integer coefficients
# ---------------------------------------------------------------------------

# canonical form: tuple of (exponent, coefficient), sorted by exponent,
# no zero coefficients.
LaurentPoly = tuple[tuple[int, int], ...]


def _poly_from_items(items: Iterable[tuple[int, int]]) -> LaurentPoly:
    acc: dict[int, int] = {}
    for e, c in items:
        acc[e] = acc.get(e, 0) + c
    return tuple(sorted((e, c) for e, c in acc.items() if c != 0))


def _poly_add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return _poly_from_items(list(p) + list(q))


def _poly_neg(p: LaurentPoly) -> LaurentPoly:
    return tuple((e, -c) for e, c in p)


def _poly_shift(p: LaurentPoly, k: int) -> LaurentPoly:
    """Multiply by x^k."""
    return tuple((e + k, c) for e, c in p)


def _poly_scale(p: LaurentPoly, n: int) -> LaurentPoly:
    if n == 0:
        return ()
    return tuple((e, n * c) for e, c in p)


def _int_poly_divisible(num: Sequence[int], den: Sequence[int]) -> bool:
    """Whether den divides num in Z[x].

    ``num``/``den`` are coefficient lists, lowest degree first.  Long division
    is carried out over the integers: every quotient coefficient must come out
    integral, otherwise den does not divide num (this is exact for primitive
    den by Gauss's lemma).
    """
    num = list(num)
    while num and num[-1] == 0:
        num.pop()
    den = list(den)
    while den and den[-1] == 0:
        den.pop()
    if not num:
        return True
    if not den or len(num) < len(den):
        return False
    lead = den[-1]
    rem = num[:]
    for shift in range(len(num) - len(den), -1, -1):
        coeff = rem[shift + len(den) - 1]
        if coeff % lead != 0:
            return False
        q = coeff // lead
        if q:
            for i, d in enumerate(den):
                rem[shift + i] -= q * d
    return all(c == 0 for c in rem)


@dataclass(frozen=True)
class LaurentClass:
    """A residue class in Z[x, 1/x]/(f).

    ``poly`` is one Laurent-polynomial representative; ``modulus`` stores the
    coefficients (q_0, ..., q_m) of f(x) = q_0 x^m + ... + q_m.  Two classes
    are equal iff their difference, after clearing negative exponents, is
    divisible by f in Z[x].  No canonical representative is computed; equality
    is a predicate and hashing goes through an embedding into Q[x]/(f).
    """

    poly: LaurentPoly
    modulus: tuple[int, ...]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentClass):
            return NotImplemented
        if self.modulus != other.modulus:
            return False
        return laurent_equal(self, other)

    def __hash__(self) -> int:
        return hash((self.modulus, self.fingerprint()))

    def fingerprint(self) -> tuple[Fraction, ...]:
        """The image of this class in Q[x]/(f), as coefficients of 1..x^{m-1}.

        f is primitive with nonzero end coefficients, so the module embeds in
        Q[x]/(f) and the fingerprint separates classes exactly.
        """
        m = len(self.modulus) - 1
        acc = [Fraction(0)] * m
        for e, c in self.poly:
            xe = _x_power_mod(self.modulus, e)
            for i in range(m):
                acc[i] += c * xe[i]
        return tuple(acc)

    def shifted(self, k: int) -> "LaurentClass":
        return LaurentClass(_poly_shift(self.poly, k), self.modulus)

    def __add__(self, other: "LaurentClass") -> "LaurentClass":
        if self.modulus != other.modulus:
            raise ValueError("spec mismatch")
        return LaurentClass(_poly_add(self.poly, other.poly), self.modulus)

    def __neg__(self) -> "LaurentClass":
        return LaurentClass(_poly_neg(self.poly), self.modulus)

    def render(self) -> str:
        return _render_poly(self.poly)


_XPOW_CACHE: dict[tuple[tuple[int, ...], int], tuple[Fraction, ...]] = {}


def _x_power_mod(f_coeffs: tuple[int, ...], e: int) -> tuple[Fraction, ...]:
    """x^e reduced in Q[x]/(f), as a vector over the basis 1, x, ..., x^{m-1}."""
    key = (f_coeffs, e)
    cached = _XPOW_CACHE.get(key)
    if cached is not None:
        return cached
    m = len(f_coeffs) - 1
    q0 = f_coeffs[0]
    if e == 0:
        vec = tuple(Fraction(int(i == 0)) for i in range(m))
    elif e > 0:
        prev = _x_power_mod(f_coeffs, e - 1)
        # multiply by x: shift up, fold x^m = -(q_1 x^{m-1} + ... + q_m)/q_0
        shifted = [Fraction(0)] + list(prev[:-1])
        top = prev[-1]
        if top:
            for i in range(m):
                # coefficient of x^i in x^m is -q_{m-i}/q_0
                shifted[i] -= top * Fraction(f_coeffs[m - i], q0)
        vec = tuple(shifted)
    else:
        prev = _x_power_mod(f_coeffs, e + 1)
        # multiply by x^{-1} = -(q_0 x^{m-1} + ... + q_{m-1})/q_m
        qm = f_coeffs[m]
        xinv = [Fraction(-f_coeffs[m - 1 - i], qm) for i in range(m)]
        vec = _qmod_mul(f_coeffs, prev, tuple(xinv))
    _XPOW_CACHE[key] = vec
    return vec


def _qmod_mul(
    f_coeffs: tuple[int, ...],
    a: tuple[Fraction, ...],
    b: tuple[Fraction, ...],
) -> tuple[Fraction, ...]:
    m = len(f_coeffs) - 1
    q0 = f_coeffs[0]
    raw = [Fraction(0)] * (2 * m - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                raw[i + j] += ai * bj
    for deg in range(2 * m - 2, m - 1, -1):
        top = raw[deg]
        if top:
            raw[deg] = Fraction(0)
            for i in range(m):
                raw[deg - m + i] -= top * Fraction(f_coeffs[m - i], q0)
    return tuple(raw[:m])


def _render_poly(p: LaurentPoly) -> str:
    if not p:
        return "0"
    parts = []
    for e, c in sorted(p, key=lambda t: -t[0]):
        if e == 0:
            term = str(abs(c))
        else:
            coeff = "" if abs(c) == 1 else str(abs(c))
            term = f"{coeff}x" if e == 1 else f"{coeff}x^{e}"
        if not parts:
            parts.append(("-" if c < 0 else "") + term)
        else:
            parts.append(("-" if c < 0 else "+") + term)
    return "".join(parts)


# ---------------------------------------------------------------------------
# group specs
# ---------------------------------------------------------------------------

KINDS = ("free_abelian", "semidirect", "heisenberg", "lamplighter", "metabelian")


@dataclass(frozen=True)
class GroupSpec:
    """Which group we are working in, with its defining data."""

    kind: str
    rank: int = 0
    action_matrix: Optional[IntMatrix] = None
    modulus: int = 0
    f_coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.kind in ("free_abelian", "semidirect") and self.rank < 1:
            raise ValueError("rank must be a positive integer")
        if self.kind == "semidirect":
            m = self.action_matrix
            if m is None or len(m) != self.rank or any(len(r) != self.rank for r in m):
                raise ValueError("action_matrix must be rank x rank")
            if _mat_det(m) not in (1, -1):
                raise ValueError("action_matrix must have determinant +-1")
        if self.kind == "lamplighter" and self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        if self.kind == "metabelian":
            f = self.f_coeffs
            if len(f) < 2:
                raise ValueError("f must have degree >= 1")
            if f[0] == 0 or f[-1] == 0:
                raise ValueError("leading and trailing coefficients of f must be nonzero")
            if math.gcd(*f) != 1:
                raise ValueError("f must be primitive")

    # constructors ---------------------------------------------------------

    @staticmethod
    def free_abelian(rank: int) -> "GroupSpec":
        return GroupSpec(kind="free_abelian", rank=rank)

    @staticmethod
    def semidirect(matrix: Sequence[Sequence[int]]) -> "GroupSpec":
        m = tuple(tuple(int(x) for x in row) for row in matrix)
        return GroupSpec(kind="semidirect", rank=len(m), action_matrix=m)

    @staticmethod
    def heisenberg() -> "GroupSpec":
        return GroupSpec(kind="heisenberg")

    @staticmethod
    def lamplighter(modulus: int) -> "GroupSpec":
        return GroupSpec(kind="lamplighter", modulus=modulus)

    @staticmethod
    def metabelian(f_coeffs: Sequence[int]) -> "GroupSpec":
        return GroupSpec(kind="metabelian", f_coeffs=tuple(int(c) for c in f_coeffs))

    @property
    def degree(self) -> int:
        """deg f for the metabelian backend."""
        return len(self.f_coeffs) - 1

    def render(self) -> str:
        if self.kind == "free_abelian":
            return f"group kind=free_abelian rank={self.rank}"
        if self.kind == "semidirect":
            rows = ",".join("[" + ",".join(map(str, r)) + "]" for r in self.action_matrix)
            return f"group kind=semidirect rank={self.rank} matrix=[{rows}]"
        if self.kind == "heisenberg":
            return "group kind=heisenberg"
        if self.kind == "lamplighter":
            return f"group kind=lamplighter mod={self.modulus}"
        return "group kind=metabelian f=[" + ",".join(map(str, self.f_coeffs)) + "]"


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


class GroupElement:
    """Common behaviour for elements of any backend."""

    spec: GroupSpec

    def key(self):
        """A hashable canonical key; equal elements have equal keys."""
        raise NotImplementedError

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        raise NotImplementedError

    def inverse(self) -> "GroupElement":
        raise NotImplementedError

    def render(self) -> str:
        raise NotImplementedError

    def is_identity(self) -> bool:
        return self == identity(self.spec)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.spec == other.spec and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.spec, self.key()))

    def __pow__(self, n: int) -> "GroupElement":
        return power(self, n)

    def __repr__(self) -> str:
        return self.render()

    def _check(self, other: "GroupElement") -> None:
        if self.spec != other.spec:
            raise ValueError("spec mismatch")


@dataclass(frozen=True, eq=False, repr=False)
class AbelianVec(GroupElement):
    spec: GroupSpec
    coords: tuple[int, ...]

    def key(self):
        return self.coords

    def __mul__(self, other):
        self._check(other)
        return AbelianVec(self.spec, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def inverse(self):
        return AbelianVec(self.spec, tuple(-a for a in self.coords))

    def render(self):
        return "(" + ",".join(map(str, self.coords)) + ")"


@dataclass(frozen=True, eq=False, repr=False)
class SemidirectElem(GroupElement):
    """v·h^k in Z^r semidirect Z."""

    spec: GroupSpec
    vec: tuple[int, ...]
    shift: int

    def key(self):
        return (self.vec, self.shift)

    def __mul__(self, other):
        self._check(other)
        # v h^k · v' h^k' = (v + M^{-k} v') h^{k+k'}  given  h^{-1} v h = M v
        m = _mat_power(self.spec.action_matrix, -self.shift)
        return SemidirectElem(
            self.spec,
            tuple(a + b for a, b in zip(self.vec, _mat_vec(m, other.vec))),
            self.shift + other.shift,
        )

    def inverse(self):
        m = _mat_power(self.spec.action_matrix, self.shift)
        return SemidirectElem(self.spec, tuple(-a for a in _mat_vec(m, self.vec)), -self.shift)

    def render(self):
        return "(" + ",".join(map(str, self.vec)) + f")·h^{self.shift}"


@dataclass(frozen=True, eq=False, repr=False)
class HeisenbergElem(GroupElement):
    """Unitriangular matrix with superdiagonal (alpha, beta) and corner gamma."""

    spec: GroupSpec
    alpha: int
    beta: int
    gamma: int

    def key(self):
        return (self.alpha, self.beta, self.gamma)

    def __mul__(self, other):
        self._check(other)
        return HeisenbergElem(
            self.spec,
            self.alpha + other.alpha,
            self.beta + other.beta,
            self.gamma + other.gamma + self.alpha * other.beta,
        )

    def inverse(self):
        return HeisenbergElem(
            self.spec, -self.alpha, -self.beta, -self.gamma + self.alpha * self.beta
        )

    def render(self):
        return f"({self.alpha},{self.beta},{self.gamma})"


@dataclass(frozen=True, eq=False, repr=False)
class LamplighterElem(GroupElement):
    """A configuration of lamps and a shift: prod_i t^i a^{s_i} t^{-i} · t^k.

    ``support`` holds (position, residue) pairs with residues in [1, mu),
    sorted by position; zero residues are never stored.
    """

    spec: GroupSpec
    support: tuple[tuple[int, int], ...]
    shift: int

    def key(self):
        return (self.support, self.shift)

    def __mul__(self, other):
        self._check(other)
        mu = self.spec.modulus
        acc = dict(self.support)
        for pos, val in other.support:
            p = pos + self.shift
            acc[p] = (acc.get(p, 0) + val) % mu
        support = tuple(sorted((p, v) for p, v in acc.items() if v))
        return LamplighterElem(self.spec, support, self.shift + other.shift)

    def inverse(self):
        mu = self.spec.modulus
        support = tuple(
            sorted((p - self.shift, (-v) % mu) for p, v in self.support)
        )
        return LamplighterElem(self.spec, support, -self.shift)

    def render(self):
        body = ",".join(f"{p}:{v}" for p, v in self.support)
        return "{" + body + "}" + f"·t^{self.shift}"


@dataclass(frozen=True, eq=False, repr=False)
class MetabelianElem(GroupElement):
    """x^k · a^m with m a residue class in Z[x, 1/x]/(f)."""

    spec: GroupSpec
    shift: int
    cls: LaurentClass

    def key(self):
        return (self.shift, self.cls.fingerprint())

    def __mul__(self, other):
        self._check(other)
        # x^k a^m · x^k' a^m' = x^{k+k'} a^{m x^{k'} + m'}
        return MetabelianElem(
            self.spec, self.shift + other.shift, self.cls.shifted(other.shift) + other.cls
        )

    def inverse(self):
        return MetabelianElem(self.spec, -self.shift, -(self.cls.shifted(-self.shift)))

    def render(self):
        xpart = f"x^{self.shift}" if self.shift else ""
        apart = f"a^({self.cls.render()})" if self.cls.poly else ""
        if not xpart and not apart:
            return "1"
        return xpart + ("·" if xpart and apart else "") + apart


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def identity(spec: GroupSpec) -> GroupElement:
    """The neutral element of the backend."""
    if spec.kind == "free_abelian":
        return AbelianVec(spec, (0,) * spec.rank)
    if spec.kind == "semidirect":
        return SemidirectElem(spec, (0,) * spec.rank, 0)
    if spec.kind == "heisenberg":
        return HeisenbergElem(spec, 0, 0, 0)
    if spec.kind == "lamplighter":
        return LamplighterElem(spec, (), 0)
    return MetabelianElem(spec, 0, LaurentClass((), spec.f_coeffs))


def mul(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """Product in normal form; the elements must share a spec."""
    return g1 * g2


def inv(g: GroupElement) -> GroupElement:
    return g.inverse()


def power(g: GroupElement, n: int) -> GroupElement:
    if n < 0:
        return power(g.inverse(), -n)
    acc = identity(g.spec)
    base = g
    while n:
        if n & 1:
            acc = acc * base
        base = base * base
        n >>= 1
    return acc


def laurent_class(spec: GroupSpec, items: Iterable[tuple[int, int]]) -> LaurentClass:
    """Build a residue class from (exponent, coefficient) pairs."""
    if spec.kind != "metabelian":
        raise ValueError("laurent classes only exist for the metabelian backend")
    return LaurentClass(_poly_from_items(items), spec.f_coeffs)


def laurent_equal(p: LaurentClass, q: LaurentClass) -> bool:
    """Whether p and q are the same class: f | x^s (p - q) in Z[x]."""
    if p.modulus != q.modulus:
        raise ValueError("spec mismatch")
    diff = _poly_add(p.poly, _poly_neg(q.poly))
    if not diff:
        return True
    low = min(e for e, _ in diff)
    s = max(0, -low)
    cleared = _poly_shift(diff, s)
    deg = max(e for e, _ in cleared)
    num = [0] * (deg + 1)
    for e, c in cleared:
        num[e] = c
    den = list(reversed(p.modulus))  # lowest degree first
    return _int_poly_divisible(num, den)


def generator_table(
    spec: GroupSpec, aliases: Optional[Mapping[str, Union[GroupElement, str]]] = None
) -> dict[str, GroupElement]:
    """The fixed generator alphabet of a backend, plus optional aliases.

    Alphabets: ``e1..er`` (free abelian), ``e1..er, h`` (semidirect),
    ``g, f, z`` with ``w`` an alias for ``z`` (Heisenberg), ``a, t``
    (lamplighter), ``a, x`` (metabelian).  An alias value may be another
    generator name or an element.
    """
    table: dict[str, GroupElement] = {}
    if spec.kind in ("free_abelian", "semidirect"):
        for i in range(spec.rank):
            coords = tuple(int(j == i) for j in range(spec.rank))
            if spec.kind == "free_abelian":
                table[f"e{i + 1}"] = AbelianVec(spec, coords)
            else:
                table[f"e{i + 1}"] = SemidirectElem(spec, coords, 0)
        if spec.kind == "semidirect":
            table["h"] = SemidirectElem(spec, (0,) * spec.rank, 1)
    elif spec.kind == "heisenberg":
        table["g"] = HeisenbergElem(spec, 1, 0, 0)
        table["f"] = HeisenbergElem(spec, 0, 1, 0)
        table["z"] = HeisenbergElem(spec, 0, 0, 1)
        table["w"] = table["z"]
    elif spec.kind == "lamplighter":
        table["a"] = LamplighterElem(spec, ((0, 1),), 0)
        table["t"] = LamplighterElem(spec, (), 1)
    else:
        table["a"] = MetabelianElem(spec, 0, LaurentClass(((0, 1),), spec.f_coeffs))
        table["x"] = MetabelianElem(spec, 1, LaurentClass((), spec.f_coeffs))
    if aliases:
        for name, value in aliases.items():
            if isinstance(value, str):
                value = eval_word(spec, _parse_simple_word(value), None)
            table[name] = value
    return table


def _parse_simple_word(text: str) -> Word:
    word = []
    for token in text.split():
        if "^" in token:
            name, exp = token.split("^", 1)
            word.append((name, int(exp)))
        else:
            word.append((token, 1))
    return word


def eval_word(
    spec: GroupSpec,
    word: Word,
    aliases: Optional[Mapping[str, Union[GroupElement, str]]] = None,
) -> GroupElement:
    """Left-to-right product of generator powers, in normal form."""
    table = generator_table(spec, aliases)
    acc = identity(spec)
    for name, exp in word:
        gen = table.get(name)
        if gen is None:
            raise ValueError(f"unknown generator {name!r} for {spec.kind}")
        acc = acc * power(gen, exp)
    return acc


def commutator(g: GroupElement, h: GroupElement) -> GroupElement:
    """[g, h] = g^-1 h^-1 g h."""
    return g.inverse() * h.inverse() * g * h
