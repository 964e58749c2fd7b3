"""Semilinear sets: the exact calculus of rational subsets of Z^r.

A linear set L(c; P) is {c + sum_i n_i p_i : n_i in N} for a base c and
finitely many period vectors p_i; a semilinear set is a finite union of
linear sets.  These are exactly the rational subsets of Z^r, and they are
closed under union, Minkowski sum, Kleene star and, through Hilbert bases of
linear Diophantine systems, under intersection.  Complements are never
materialised; boolean queries go through the presburger module.

The Hilbert-basis engine is the Contejean-Devie completion procedure.  It is
exponential in the worst case, so instances are size-capped and exceeding the
cap raises instead of truncating.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from ratgroups.groups import AbelianVec
from ratgroups.automata import GroupAutomaton

__all__ = [
    "LinearSet",
    "SemilinearSet",
    "DiophantineSolutionSet",
    "linear",
    "semilinear",
    "singleton",
    "empty",
    "member",
    "union",
    "minkowski_sum",
    "star",
    "hilbert_basis",
    "solve_diophantine",
    "intersect",
    "from_automaton",
    "enumerate_box",
    "is_finite",
    "render",
    "MAX_ROWS",
    "MAX_COLS",
]

Vec = tuple[int, ...]

MAX_ROWS = 6
MAX_COLS = 12


@dataclass(frozen=True)
class LinearSet:
    """L(base; periods) = base + N-combinations of the periods.

    Zero periods are pruned and the period list is kept sorted, so the
    rendering is canonical for the data (not for the denoted set).
    """

    base: Vec
    periods: tuple[Vec, ...]

    def __init__(self, base: Sequence[int], periods: Iterable[Sequence[int]] = ()):
        base = tuple(int(x) for x in base)
        cleaned = sorted(
            {tuple(int(x) for x in p) for p in periods} - {(0,) * len(base)}
        )
        if any(len(p) != len(base) for p in cleaned):
            raise ValueError("period dimension mismatch")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "periods", tuple(cleaned))

    @property
    def rank(self) -> int:
        return len(self.base)

    def render(self) -> str:
        vecs = ", ".join(_render_vec(p) for p in self.periods)
        return f"L({_render_vec(self.base)}; {vecs})" if vecs else f"L({_render_vec(self.base)};)"


def _render_vec(v: Vec) -> str:
    return "(" + ",".join(map(str, v)) + ")"


@dataclass(frozen=True)
class SemilinearSet:
    """A finite union of linear sets of a common rank."""

    rank: int
    components: tuple[LinearSet, ...]

    def __init__(self, rank: int, components: Iterable[LinearSet] = ()):
        comps = sorted(set(components), key=lambda c: (c.base, c.periods))
        if any(c.rank != rank for c in comps):
            raise ValueError("component rank mismatch")
        object.__setattr__(self, "rank", int(rank))
        object.__setattr__(self, "components", tuple(comps))

    def render(self) -> str:
        if not self.components:
            return "∅"
        return " ∪ ".join(c.render() for c in self.components)


def linear(base: Sequence[int], periods: Iterable[Sequence[int]] = ()) -> SemilinearSet:
    ls = LinearSet(base, periods)
    return SemilinearSet(ls.rank, (ls,))


def semilinear(components: Iterable[LinearSet], rank: Optional[int] = None) -> SemilinearSet:
    comps = tuple(components)
    if rank is None:
        if not comps:
            raise ValueError("rank needed for the empty set")
        rank = comps[0].rank
    return SemilinearSet(rank, comps)


def singleton(v: Sequence[int]) -> SemilinearSet:
    return linear(v)


def empty(rank: int) -> SemilinearSet:
    return SemilinearSet(rank, ())


def render(s: SemilinearSet) -> str:
    return s.render()


# ---------------------------------------------------------------------------
# Hilbert bases (Contejean-Devie completion)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiophantineSolutionSet:
    """Solutions of A n = b over N: particulars plus the homogeneous basis.

    The solution set equals {p + N-combination of homogeneous_basis
    : p in particulars}; basis vectors are pairwise incomparable under the
    componentwise order.
    """

    particulars: tuple[Vec, ...]
    homogeneous_basis: tuple[Vec, ...]

    @property
    def feasible(self) -> bool:
        return bool(self.particulars)


def _check_size(rows: int, cols: int, max_rows: int, max_cols: int) -> None:
    if rows > max_rows or cols > max_cols:
        raise ValueError(
            f"instance too large: {rows} equations x {cols} unknowns "
            f"(caps {max_rows} x {max_cols})"
        )


def _cd_minimal_solutions(
    columns: Sequence[Vec], last_bound: Optional[int] = None
) -> list[Vec]:
    """Minimal nonzero N-solutions of sum_i n_i col_i = 0.

    Frontier search with the Contejean-Devie scalar-product branching rule;
    the frontier is explored in lexicographic order so the output order is
    deterministic.  ``last_bound`` caps the final coordinate (used for the
    inhomogeneous encoding, where that coordinate only needs values 0 and 1).
    """
    k = len(columns)
    if k == 0:
        return []
    m = len(columns[0])
    zero_val = (0,) * m

    def dot(u: Vec, v: Vec) -> int:
        return sum(a * b for a, b in zip(u, v))

    basis: list[Vec] = []
    frontier: dict[Vec, Vec] = {}
    for i in range(k):
        n = tuple(int(j == i) for j in range(k))
        if last_bound is not None and i == k - 1 and 1 > last_bound:
            continue
        frontier[n] = columns[i]
    while frontier:
        items = sorted(frontier.items())
        nxt: dict[Vec, Vec] = {}
        for n, v in items:
            if v == zero_val:
                basis.append(n)
        for n, v in items:
            if v == zero_val:
                continue
            for i in range(k):
                if dot(v, columns[i]) >= 0:
                    continue
                n2 = tuple(c + int(j == i) for j, c in enumerate(n))
                if last_bound is not None and n2[-1] > last_bound:
                    continue
                if any(all(b <= c for b, c in zip(bas, n2)) for bas in basis):
                    continue
                nxt[n2] = tuple(a + b for a, b in zip(v, columns[i]))
        frontier = nxt
    return sorted(basis)


def hilbert_basis(
    matrix: Sequence[Sequence[int]],
    max_rows: int = MAX_ROWS,
    max_cols: int = MAX_COLS,
) -> list[Vec]:
    """Minimal Hilbert basis of {n in N^k : matrix n = 0}.

    Every N-solution is an N-combination of the returned vectors and no
    returned vector dominates another componentwise.
    """
    rows = [tuple(int(x) for x in row) for row in matrix]
    if not rows:
        raise ValueError("matrix must have at least one row")
    cols = len(rows[0])
    _check_size(len(rows), cols, max_rows, max_cols)
    columns = [tuple(r[i] for r in rows) for i in range(cols)]
    return _cd_minimal_solutions(columns)


def solve_diophantine(
    matrix: Sequence[Sequence[int]],
    rhs: Sequence[int],
    max_rows: int = MAX_ROWS,
    max_cols: int = MAX_COLS,
) -> DiophantineSolutionSet:
    """Complete description of {n in N^k : matrix n = rhs}.

    Encodes the right-hand side as one extra column with multiplier capped at
    one: minimal solutions with the extra coordinate 1 are the minimal
    inhomogeneous solutions, those with 0 the homogeneous Hilbert basis.
    """
    rows = [tuple(int(x) for x in row) for row in matrix]
    b = tuple(int(x) for x in rhs)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    cols = len(rows[0]) if rows else 0
    _check_size(len(rows) or len(b), cols + 1, max_rows, max_cols)
    columns = [tuple(r[i] for r in rows) for i in range(cols)]
    columns.append(tuple(-x for x in b))
    minimal = _cd_minimal_solutions(columns, last_bound=1)
    particulars = tuple(n[:-1] for n in minimal if n[-1] == 1)
    homogeneous = tuple(n[:-1] for n in minimal if n[-1] == 0)
    return DiophantineSolutionSet(particulars, homogeneous)


# ---------------------------------------------------------------------------
# membership and the boolean operations
# ---------------------------------------------------------------------------


def _linear_member(comp: LinearSet, v: Vec, max_rows: int, max_cols: int) -> bool:
    diff = tuple(a - b for a, b in zip(v, comp.base))
    if not comp.periods:
        return all(x == 0 for x in diff)
    matrix = [[p[i] for p in comp.periods] for i in range(comp.rank)]
    return solve_diophantine(matrix, diff, max_rows, max_cols).feasible


def member(
    s: SemilinearSet,
    v: Sequence[int],
    max_rows: int = MAX_ROWS,
    max_cols: int = MAX_COLS,
) -> bool:
    """Exact membership, by solving base + P n = v over N per component."""
    v = tuple(int(x) for x in v)
    if len(v) != s.rank:
        raise ValueError("dimension mismatch")
    return any(_linear_member(c, v, max_rows, max_cols) for c in s.components)


def union(s1: SemilinearSet, s2: SemilinearSet) -> SemilinearSet:
    if s1.rank != s2.rank:
        raise ValueError("dimension mismatch")
    return SemilinearSet(s1.rank, s1.components + s2.components)


def minkowski_sum(s1: SemilinearSet, s2: SemilinearSet) -> SemilinearSet:
    """Pointwise sums: distributes over components, merging period lists."""
    if s1.rank != s2.rank:
        raise ValueError("dimension mismatch")
    comps = [
        LinearSet(
            tuple(a + b for a, b in zip(c1.base, c2.base)), c1.periods + c2.periods
        )
        for c1 in s1.components
        for c2 in s2.components
    ]
    return SemilinearSet(s1.rank, comps)


def star(s: SemilinearSet) -> SemilinearSet:
    """The generated submonoid.

    Commutativity gives (U_i L_i)* = sum_i L_i*, and the star of one linear
    set just adds its own base as a period: L(c; P)* = {0} u L(c; P u {c}).
    """
    zero = singleton((0,) * s.rank)
    acc = zero
    for comp in s.components:
        starred = union(zero, linear(comp.base, comp.periods + (comp.base,)))
        acc = minkowski_sum(acc, starred)
    return acc


def intersect(
    s1: SemilinearSet,
    s2: SemilinearSet,
    max_rows: int = MAX_ROWS,
    max_cols: int = MAX_COLS,
) -> SemilinearSet:
    """Exact intersection through Hilbert bases.

    For components L(c; P) and L(c'; P'), the multipliers of common points
    solve P n - P' m = c' - c over N; each minimal solution contributes a
    base and the homogeneous basis contributes the periods.
    """
    if s1.rank != s2.rank:
        raise ValueError("dimension mismatch")
    out: list[LinearSet] = []
    for c1 in s1.components:
        k1 = len(c1.periods)
        for c2 in s2.components:
            matrix = [
                [p[i] for p in c1.periods] + [-p[i] for p in c2.periods]
                for i in range(s1.rank)
            ]
            rhs = tuple(b - a for a, b in zip(c1.base, c2.base))
            sol = solve_diophantine(matrix, rhs, max_rows, max_cols)
            if not sol.feasible:
                continue
            periods = tuple(
                tuple(
                    sum(n * p[i] for n, p in zip(beta[:k1], c1.periods))
                    for i in range(s1.rank)
                )
                for beta in sol.homogeneous_basis
            )
            for sigma in sol.particulars:
                base = tuple(
                    c + sum(n * p[i] for n, p in zip(sigma[:k1], c1.periods))
                    for i, c in enumerate(c1.base)
                )
                out.append(LinearSet(base, periods))
    return SemilinearSet(s1.rank, out)


def is_finite(s: SemilinearSet) -> bool:
    """True iff every component is period-free (distinct multiples of a
    nonzero period are distinct points of Z^r, so any period means infinite)."""
    return all(not c.periods for c in s.components)


# ---------------------------------------------------------------------------
# automata over Z^r -> semilinear (Kleene state elimination)
# ---------------------------------------------------------------------------


def from_automaton(aut: GroupAutomaton) -> SemilinearSet:
    """The accepted set of an automaton over a free abelian backend.

    Classical state elimination, evaluated in the semiring of semilinear sets
    (union / Minkowski sum / star above).
    """
    if aut.spec.kind != "free_abelian":
        raise ValueError("from_automaton needs a free_abelian automaton")
    r = aut.spec.rank
    for _, label, _ in aut.edges:
        if not isinstance(label, AbelianVec):
            raise ValueError("labels must be abelian vectors")

    start, end = aut.n_states, aut.n_states + 1
    cells: dict[tuple[int, int], SemilinearSet] = {}

    def add(i: int, j: int, s: SemilinearSet) -> None:
        cells[(i, j)] = union(cells[(i, j)], s) if (i, j) in cells else s

    add(start, aut.initial, singleton((0,) * r))
    for src, label, tgt in aut.edges:
        add(src, tgt, singleton(label.coords))
    for t in aut.terminals:
        add(t, end, singleton((0,) * r))

    for q in range(aut.n_states):
        loop = cells.pop((q, q), None)
        loop_star = star(loop) if loop is not None else singleton((0,) * r)
        into = {i: s for (i, j), s in cells.items() if j == q}
        outof = {j: s for (i, j), s in cells.items() if i == q}
        for (i, j) in [key for key in cells if key[0] == q or key[1] == q]:
            cells.pop((i, j), None)
        for i, si in into.items():
            through = minkowski_sum(si, loop_star)
            for j, sj in outof.items():
                add(i, j, minkowski_sum(through, sj))
    return cells.get((start, end), empty(r))


# ---------------------------------------------------------------------------
# box enumeration
# ---------------------------------------------------------------------------

_VOLUME_CAP = 40_000_000


def enumerate_box(
    s: SemilinearSet, lo: Sequence[int], hi: Sequence[int]
) -> set[Vec]:
    """All members of the set inside the box [lo, hi] (inclusive, pointwise).

    Each component is enumerated by saturating a boolean grid under period
    shifts.  The grid window is the bounding box of the origin and the
    shifted box, inflated by (r+1) times the largest period entry plus one:
    by the Steinitz rearrangement bound, any reachable target in the box is
    reachable through partial sums inside that window, so the saturation is
    exact.  Degenerate or oversized windows fall back to pointwise
    membership.
    """
    lo = tuple(int(x) for x in lo)
    hi = tuple(int(x) for x in hi)
    if len(lo) != s.rank or len(hi) != s.rank:
        raise ValueError("dimension mismatch")
    if any(a > b for a, b in zip(lo, hi)):
        raise ValueError("lo must be <= hi")
    out: set[Vec] = set()
    for comp in s.components:
        out |= _enumerate_box_linear(comp, lo, hi)
    return out


def _enumerate_box_linear(comp: LinearSet, lo: Vec, hi: Vec) -> set[Vec]:
    r = len(lo)
    if not comp.periods:
        v = comp.base
        return {v} if all(a <= x <= b for a, x, b in zip(lo, v, hi)) else set()

    t_lo = tuple(a - c for a, c in zip(lo, comp.base))
    t_hi = tuple(b - c for b, c in zip(hi, comp.base))
    pmax = max(abs(x) for p in comp.periods for x in p)
    pad = (r + 1) * pmax + 1
    w_lo = tuple(min(0, a) - pad for a in t_lo)
    w_hi = tuple(max(0, b) + pad for b in t_hi)
    shape = tuple(b - a + 1 for a, b in zip(w_lo, w_hi))
    volume = 1
    for d in shape:
        volume *= d
    if volume > _VOLUME_CAP:
        k = len(comp.periods)
        sl = SemilinearSet(r, (comp,))
        return {
            v
            for v in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))
            if member(sl, v, max_rows=max(MAX_ROWS, r), max_cols=max(MAX_COLS, k + 1))
        }

    grid = np.zeros(shape, dtype=bool)
    origin = tuple(-a for a in w_lo)
    grid[origin] = True

    def shift_or(offset: Vec) -> None:
        src, dst = [], []
        for o, size in zip(offset, shape):
            if abs(o) >= size:
                return
            if o >= 0:
                src.append(slice(0, size - o))
                dst.append(slice(o, size))
            else:
                src.append(slice(-o, size))
                dst.append(slice(0, size + o))
        grid[tuple(dst)] |= grid[tuple(src)]

    count = 1
    while True:
        for p in comp.periods:
            step = p
            while all(abs(o) < size for o, size in zip(step, shape)):
                shift_or(step)
                step = tuple(2 * o for o in step)
        new_count = int(grid.sum())
        if new_count == count:
            break
        count = new_count

    hits = np.argwhere(grid)
    out: set[Vec] = set()
    for idx in hits:
        u = tuple(int(i) + a for i, a in zip(idx, w_lo))
        if all(a <= x <= b for a, x, b in zip(t_lo, u, t_hi)):
            out.add(tuple(x + c for x, c in zip(u, comp.base)))
    return out
