"""Rational expressions and finite automata labelled by group elements.

A rational expression denotes a subset of a group: singleton words, unions,
products and Kleene stars.  ``compile_expr`` turns an expression into a finite
automaton whose accepted set (the path labels from the initial state to a
terminal state) is exactly the denoted set.  The accepted set of an automaton
is in general not decidable, so the observers here are bounded: enumeration by
path length, membership as yes/unknown, bounded intersection.  Exact decisions
exist only for free abelian groups, through the semilinear module.

Compilation glues sub-automata with identity-labelled edges and then
eliminates them, so compiled automata have one edge per letter and path
bounds count letters.  Identity-labelled edges remain perfectly legal in
hand-built automata; every edge, identity or not, counts toward a path bound.

Automata are immutable; all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence

from ratgroups.groups import (
    GroupElement,
    GroupSpec,
    Word,
    commutator,
    eval_word,
    generator_table,
    identity,
    power,
)

__all__ = [
    "RatExpr",
    "Empty",
    "Singleton",
    "Union",
    "Concat",
    "Star",
    "GroupAutomaton",
    "GroupHom",
    "PumpingWitness",
    "YES",
    "UNKNOWN",
    "compile_expr",
    "enumerate_elements",
    "member_bounded",
    "pump",
    "subgroup_generators",
    "image",
    "preimage_finite_kernel",
    "intersect_bounded",
    "automaton_for_elements",
    "automaton_union",
    "automaton_concat",
    "automaton_star",
]

YES = "yes"
UNKNOWN = "unknown"


# ---------------------------------------------------------------------------
# rational expressions
# ---------------------------------------------------------------------------


class RatExpr:
    """Base class for rational-expression trees."""

    def __or__(self, other: "RatExpr") -> "RatExpr":
        return Union(self, other)

    def __mul__(self, other: "RatExpr") -> "RatExpr":
        return Concat(self, other)

    def star(self) -> "RatExpr":
        return Star(self)


@dataclass(frozen=True)
class Empty(RatExpr):
    pass


@dataclass(frozen=True)
class Singleton(RatExpr):
    word: tuple[tuple[str, int], ...]

    def __init__(self, word: Word):
        object.__setattr__(self, "word", tuple((str(n), int(e)) for n, e in word))


@dataclass(frozen=True)
class Union(RatExpr):
    left: RatExpr
    right: RatExpr


@dataclass(frozen=True)
class Concat(RatExpr):
    left: RatExpr
    right: RatExpr


@dataclass(frozen=True)
class Star(RatExpr):
    child: RatExpr


# ---------------------------------------------------------------------------
# automata
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupAutomaton:
    """A finite directed graph with group-element edge labels.

    States are 0..n_states-1.  The accepted set is the set of products of
    edge labels along paths from ``initial`` to a state in ``terminals``.
    """

    spec: GroupSpec
    n_states: int
    edges: tuple[tuple[int, GroupElement, int], ...]
    initial: int
    terminals: frozenset[int]

    def __post_init__(self):
        if not (0 <= self.initial < self.n_states):
            raise ValueError("initial state out of range")
        if not all(0 <= t < self.n_states for t in self.terminals):
            raise ValueError("terminal state out of range")
        for src, label, tgt in self.edges:
            if label.spec != self.spec:
                raise ValueError("spec mismatch")
            if not (0 <= src < self.n_states and 0 <= tgt < self.n_states):
                raise ValueError("edge endpoint out of range")

    def out_edges(self) -> list[list[tuple[GroupElement, int]]]:
        adj: list[list[tuple[GroupElement, int]]] = [[] for _ in range(self.n_states)]
        for src, label, tgt in self.edges:
            adj[src].append((label, tgt))
        return adj


def _sorted_edges(edges: Iterable[tuple[int, GroupElement, int]]):
    return tuple(sorted(edges, key=lambda e: (e[0], e[2], e[1].render())))


def _make_automaton(spec, n, edges, initial, terminals) -> GroupAutomaton:
    return GroupAutomaton(spec, n, _sorted_edges(edges), initial, frozenset(terminals))


def automaton_for_elements(spec: GroupSpec, elements: Iterable[GroupElement]) -> GroupAutomaton:
    """The automaton of a finite set of elements."""
    elems = list(elements)
    edges = [(0, g, 1) for g in elems]
    return _make_automaton(spec, 2, edges, 0, {1})


# -- glue-and-eliminate construction ----------------------------------------


class _Builder:
    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.n = 0
        self.edges: list[tuple[int, GroupElement, int]] = []
        self.glue_edges: list[tuple[int, int]] = []

    def state(self) -> int:
        self.n += 1
        return self.n - 1

    def edge(self, u: int, label: GroupElement, v: int) -> None:
        self.edges.append((u, label, v))

    def glue(self, u: int, v: int) -> None:
        self.glue_edges.append((u, v))

    def embed(self, aut: GroupAutomaton) -> tuple[int, frozenset[int]]:
        """Copy an automaton into the builder; returns (initial, terminals)."""
        offset = self.n
        self.n += aut.n_states
        for src, label, tgt in aut.edges:
            self.edges.append((src + offset, label, tgt + offset))
        return aut.initial + offset, frozenset(t + offset for t in aut.terminals)


def _compile_into(b: _Builder, expr: RatExpr, aliases) -> tuple[int, int]:
    """Thompson construction; returns (initial, terminal) with identity glue."""
    if isinstance(expr, Empty):
        return b.state(), b.state()
    if isinstance(expr, Singleton):
        elem = eval_word(b.spec, expr.word, aliases)
        i, t = b.state(), b.state()
        b.edge(i, elem, t)
        return i, t
    if isinstance(expr, Union):
        li, lt = _compile_into(b, expr.left, aliases)
        ri, rt = _compile_into(b, expr.right, aliases)
        i, t = b.state(), b.state()
        b.glue(i, li)
        b.glue(i, ri)
        b.glue(lt, t)
        b.glue(rt, t)
        return i, t
    if isinstance(expr, Concat):
        li, lt = _compile_into(b, expr.left, aliases)
        ri, rt = _compile_into(b, expr.right, aliases)
        b.glue(lt, ri)
        return li, rt
    if isinstance(expr, Star):
        ci, ct = _compile_into(b, expr.child, aliases)
        i, t = b.state(), b.state()
        b.glue(i, ci)
        b.glue(ct, t)
        b.glue(i, t)
        b.glue(ct, ci)
        return i, t
    raise TypeError(f"not a rational expression: {expr!r}")


def _eliminate_glue(
    spec, n, edges, glue_edges, initial, terminals
) -> GroupAutomaton:
    """Remove the structural glue edges, preserving the accepted set, then trim.

    Only the glue introduced by the construction itself is removed; an
    identity-labelled edge written by the user stays and keeps counting
    toward path bounds.
    """
    eps: list[list[int]] = [[] for _ in range(n)]
    for src, tgt in glue_edges:
        eps[src].append(tgt)
    hard = list(edges)

    def closure(u: int) -> set[int]:
        seen = {u}
        stack = [u]
        while stack:
            v = stack.pop()
            for w in eps[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    closures = [closure(u) for u in range(n)]
    new_edges = set()
    for u in range(n):
        for v in closures[u]:
            for src, label, tgt in hard:
                if src == v:
                    new_edges.add((u, label, tgt))
    new_terminals = {u for u in range(n) if closures[u] & set(terminals)}
    return _trim(spec, n, new_edges, initial, new_terminals)


def _trim(spec, n, edges, initial, terminals) -> GroupAutomaton:
    """Keep only states on accepting paths (initial always kept); renumber."""
    fwd: list[list[int]] = [[] for _ in range(n)]
    bwd: list[list[int]] = [[] for _ in range(n)]
    for src, _, tgt in edges:
        fwd[src].append(tgt)
        bwd[tgt].append(src)

    def reach(starts, adj):
        seen = set(starts)
        stack = list(starts)
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    reachable = reach([initial], fwd)
    coreachable = reach([t for t in terminals], bwd)
    alive = (reachable & coreachable) | {initial}
    kept = _sorted_edges(e for e in edges if e[0] in alive and e[2] in alive)

    # renumber in BFS order from the initial state over the kept edges
    order = [initial]
    seen = {initial}
    idx = 0
    while idx < len(order):
        u = order[idx]
        idx += 1
        for src, _, tgt in kept:
            if src == u and tgt not in seen:
                seen.add(tgt)
                order.append(tgt)
    for u in sorted(alive):
        if u not in seen:
            seen.add(u)
            order.append(u)
    rename = {old: new for new, old in enumerate(order)}
    return _make_automaton(
        spec,
        len(order),
        [(rename[s], l, rename[t]) for s, l, t in kept],
        rename[initial],
        {rename[t] for t in terminals if t in alive},
    )


def compile_expr(
    expr: RatExpr,
    spec: GroupSpec,
    aliases: Optional[Mapping[str, object]] = None,
) -> GroupAutomaton:
    """Compile a rational expression to an automaton accepting exactly its set.

    Structural induction with identity-labelled glue edges, followed by
    identity-edge elimination, so the result carries one edge per letter.
    """
    b = _Builder(spec)
    init, term = _compile_into(b, expr, aliases)
    return _eliminate_glue(spec, b.n, b.edges, b.glue_edges, init, {term})


def automaton_union(a: GroupAutomaton, b: GroupAutomaton) -> GroupAutomaton:
    if a.spec != b.spec:
        raise ValueError("spec mismatch")
    bd = _Builder(a.spec)
    ai, ats = bd.embed(a)
    bi, bts = bd.embed(b)
    i = bd.state()
    bd.glue(i, ai)
    bd.glue(i, bi)
    return _eliminate_glue(a.spec, bd.n, bd.edges, bd.glue_edges, i, ats | bts)


def automaton_concat(a: GroupAutomaton, b: GroupAutomaton) -> GroupAutomaton:
    if a.spec != b.spec:
        raise ValueError("spec mismatch")
    bd = _Builder(a.spec)
    ai, ats = bd.embed(a)
    bi, bts = bd.embed(b)
    for t in ats:
        bd.glue(t, bi)
    return _eliminate_glue(a.spec, bd.n, bd.edges, bd.glue_edges, ai, bts)


def automaton_star(a: GroupAutomaton) -> GroupAutomaton:
    bd = _Builder(a.spec)
    ai, ats = bd.embed(a)
    i = bd.state()
    bd.glue(i, ai)
    for t in ats:
        bd.glue(t, i)
    return _eliminate_glue(a.spec, bd.n, bd.edges, bd.glue_edges, i, {i})


# ---------------------------------------------------------------------------
# bounded observers
# ---------------------------------------------------------------------------


def enumerate_elements(aut: GroupAutomaton, max_edges: int) -> set[GroupElement]:
    """Normal forms of labels of accepting paths with at most max_edges edges."""
    if max_edges < 0:
        raise ValueError("max_edges must be >= 0")
    adj = aut.out_edges()
    ident = identity(aut.spec)
    frontier: set[tuple[int, GroupElement]] = {(aut.initial, ident)}
    accepted: set[GroupElement] = set()
    if aut.initial in aut.terminals:
        accepted.add(ident)
    for _ in range(max_edges):
        nxt: set[tuple[int, GroupElement]] = set()
        for state, g in frontier:
            for label, tgt in adj[state]:
                nxt.add((tgt, g * label))
        frontier = nxt
        if not frontier:
            break
        for state, g in frontier:
            if state in aut.terminals:
                accepted.add(g)
    return accepted


def member_bounded(aut: GroupAutomaton, g: GroupElement, max_edges: int) -> str:
    """YES if an accepting path of <= max_edges edges has label g, else UNKNOWN.

    Membership in rational subsets of a nonabelian group is only
    semidecidable, so a negative answer is never returned.
    """
    if g.spec != aut.spec:
        raise ValueError("spec mismatch")
    adj = aut.out_edges()
    frontier: set[tuple[int, GroupElement]] = {(aut.initial, identity(aut.spec))}
    if aut.initial in aut.terminals and g.is_identity():
        return YES
    for _ in range(max_edges):
        nxt: set[tuple[int, GroupElement]] = set()
        for state, cur in frontier:
            for label, tgt in adj[state]:
                nxt.add((tgt, cur * label))
        frontier = nxt
        for state, cur in frontier:
            if state in aut.terminals and cur == g:
                return YES
        if not frontier:
            break
    return UNKNOWN


def intersect_bounded(
    a1: GroupAutomaton, a2: GroupAutomaton, max_edges: int
) -> set[GroupElement]:
    """enumerate(a1) intersected with enumerate(a2) at the same bound."""
    if a1.spec != a2.spec:
        raise ValueError("spec mismatch")
    return enumerate_elements(a1, max_edges) & enumerate_elements(a2, max_edges)


# ---------------------------------------------------------------------------
# pumping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PumpingWitness:
    """A triple (a, q, b) with a q^n b accepted for every n >= 0 and q != 1."""

    a: GroupElement
    q: GroupElement
    b: GroupElement

    def pumped(self, n: int) -> GroupElement:
        return self.a * power(self.q, n) * self.b

    def normalized(self) -> "PumpingWitness":
        """The rewriting a q* b = (a b) (b^-1 q b)*: pushes b into the loop."""
        binv = self.b.inverse()
        return PumpingWitness(self.a * self.b, binv * self.q * self.b, identity(self.a.spec))


def _lex_first_paths(aut: GroupAutomaton, start: int, max_len: int):
    """lex-min edge-index tuple per (length, state), from ``start``."""
    best: list[dict[int, tuple[int, ...]]] = [dict() for _ in range(max_len + 1)]
    best[0][start] = ()
    for length in range(max_len):
        for state, path in sorted(best[length].items()):
            for eid, (src, _, tgt) in enumerate(aut.edges):
                if src != state:
                    continue
                cand = path + (eid,)
                cur = best[length + 1].get(tgt)
                if cur is None or cand < cur:
                    best[length + 1][tgt] = cand
    return best


def _path_label(aut: GroupAutomaton, path: Sequence[int]) -> GroupElement:
    g = identity(aut.spec)
    for eid in path:
        g = g * aut.edges[eid][1]
    return g


def _lex_first_cycle(aut: GroupAutomaton, u: int, length: int) -> Optional[tuple[int, ...]]:
    """lex-min cycle at u of exactly ``length`` edges whose label is not 1."""
    # per (state, label) keep the lex-min edge tuple of that length prefix
    level: dict[tuple[int, GroupElement], tuple[int, ...]] = {(u, identity(aut.spec)): ()}
    for _ in range(length):
        nxt: dict[tuple[int, GroupElement], tuple[int, ...]] = {}
        for (state, g), path in level.items():
            for eid, (src, label, tgt) in enumerate(aut.edges):
                if src != state:
                    continue
                key = (tgt, g * label)
                cand = path + (eid,)
                cur = nxt.get(key)
                if cur is None or cand < cur:
                    nxt[key] = cand
        level = nxt
    candidates = [
        path for (state, g), path in level.items() if state == u and not g.is_identity()
    ]
    return min(candidates) if candidates else None


def _shortest_suffix(aut: GroupAutomaton, u: int) -> Optional[tuple[int, ...]]:
    best = _lex_first_paths(aut, u, aut.n_states)
    for length in range(aut.n_states + 1):
        hits = [path for state, path in sorted(best[length].items()) if state in aut.terminals]
        if hits:
            return min(hits)
    return None


def pump(aut: GroupAutomaton, max_explore: int) -> Optional[PumpingWitness]:
    """Find a q^n b inside the accepted set, if a non-identity cycle shows up.

    Searches prefixes and cycles up to ``max_explore`` edges each, in
    lexicographic (prefix length, cycle length, state index) order, so the
    result is deterministic.  Returns None when no accepting path meets a
    cycle with a non-identity label within the bound; in particular a finite
    accepted set over a torsion-free backend yields None.
    """
    prefixes = _lex_first_paths(aut, aut.initial, max_explore)
    suffix_cache: dict[int, Optional[tuple[int, ...]]] = {}
    for plen in range(max_explore + 1):
        for clen in range(1, max_explore + 1):
            for u in sorted(prefixes[plen]):
                cycle = _lex_first_cycle(aut, u, clen)
                if cycle is None:
                    continue
                if u not in suffix_cache:
                    suffix_cache[u] = _shortest_suffix(aut, u)
                suffix = suffix_cache[u]
                if suffix is None:
                    continue
                return PumpingWitness(
                    _path_label(aut, prefixes[plen][u]),
                    _path_label(aut, cycle),
                    _path_label(aut, suffix),
                )
    return None


# ---------------------------------------------------------------------------
# subgroup generators
# ---------------------------------------------------------------------------


def subgroup_generators(aut: GroupAutomaton) -> list[GroupElement]:
    """A finite set generating the same subgroup as the accepted set.

    Pick a breadth-first spanning tree from the initial state (edges ordered
    by source, target, label rendering); with t(v) the tree-path label, the
    generators are t(u)·l·t(v)^-1 for every edge u -l-> v plus t(s) for every
    terminal s.  Unreachable or dead states are trimmed silently; an empty
    accepted set gives no generators.
    """
    trimmed = _trim(aut.spec, aut.n_states, aut.edges, aut.initial, aut.terminals)
    if not trimmed.terminals:
        return []
    tree_label: dict[int, GroupElement] = {trimmed.initial: identity(aut.spec)}
    queue = [trimmed.initial]
    while queue:
        u = queue.pop(0)
        for src, label, tgt in trimmed.edges:
            if src == u and tgt not in tree_label:
                tree_label[tgt] = tree_label[u] * label
                queue.append(tgt)
    gens: dict = {}
    for src, label, tgt in trimmed.edges:
        g = tree_label[src] * label * tree_label[tgt].inverse()
        if not g.is_identity():
            gens.setdefault(g, None)
    for s in sorted(trimmed.terminals):
        g = tree_label[s]
        if not g.is_identity():
            gens.setdefault(g, None)
    return sorted(gens, key=lambda g: g.render())


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------


def _canonical_word(g: GroupElement) -> Word:
    """A fixed word over the backend's generator alphabet evaluating to g."""
    spec = g.spec
    if spec.kind == "free_abelian":
        return [(f"e{i + 1}", c) for i, c in enumerate(g.coords) if c]
    if spec.kind == "semidirect":
        word = [(f"e{i + 1}", c) for i, c in enumerate(g.vec) if c]
        if g.shift:
            word.append(("h", g.shift))
        return word
    if spec.kind == "heisenberg":
        word = []
        if g.alpha:
            word.append(("g", g.alpha))
        if g.beta:
            word.append(("f", g.beta))
        rest = g.gamma - g.alpha * g.beta
        if rest:
            word.append(("z", rest))
        return word
    if spec.kind == "lamplighter":
        word = []
        for pos, val in g.support:
            if pos:
                word.extend([("t", pos), ("a", val), ("t", -pos)])
            else:
                word.append(("a", val))
        if g.shift:
            word.append(("t", g.shift))
        return word
    word = [("x", g.shift)] if g.shift else []
    for exp, coeff in g.cls.poly:
        if exp:
            word.extend([("x", -exp), ("a", coeff), ("x", exp)])
        else:
            word.append(("a", coeff))
    return word


def _relation_words(spec: GroupSpec, depth: int = 4) -> list[Word]:
    """The documented defining-relation words checked on hom construction."""
    words: list[Word] = []
    if spec.kind in ("free_abelian", "semidirect"):
        names = [f"e{i + 1}" for i in range(spec.rank)]
        for i in range(spec.rank):
            for j in range(i + 1, spec.rank):
                words.append(
                    [(names[i], -1), (names[j], -1), (names[i], 1), (names[j], 1)]
                )
        if spec.kind == "semidirect":
            from ratgroups.groups import _mat_vec  # local: exact column action

            for i in range(spec.rank):
                col = _mat_vec(spec.action_matrix, tuple(int(k == i) for k in range(spec.rank)))
                word: list[tuple[str, int]] = [("h", -1), (names[i], 1), ("h", 1)]
                word.extend((names[j], -c) for j, c in enumerate(col) if c)
                words.append(word)
    elif spec.kind == "heisenberg":
        words.append([("g", -1), ("f", -1), ("g", 1), ("f", 1), ("z", -1)])
        words.append([("g", -1), ("z", -1), ("g", 1), ("z", 1)])
        words.append([("f", -1), ("z", -1), ("f", 1), ("z", 1)])
    elif spec.kind == "lamplighter":
        words.append([("a", spec.modulus)])
        for i in range(1, depth + 1):
            conj = [("t", i), ("a", 1), ("t", -i)]
            words.append(
                [("a", -1)] + [(n, -e) for n, e in reversed(conj)] + [("a", 1)] + conj
            )
    else:
        for i in range(-depth, depth + 1):
            if i == 0:
                continue
            conj = [("x", -i), ("a", 1), ("x", i)]
            words.append(
                [("a", -1)] + [(n, -e) for n, e in reversed(conj)] + [("a", 1)] + conj
            )
        m = spec.degree
        relator: list[tuple[str, int]] = []
        for j, q in enumerate(spec.f_coeffs):
            e = m - j
            if q:
                relator.extend([("x", -e), ("a", q), ("x", e)] if e else [("a", q)])
        words.append(relator)
    return words


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism given by generator images.

    ``images`` maps each source generator name to its image.  On construction
    the images of the documented defining relations of the source backend are
    verified to be the identity (infinite relation families are checked on a
    bounded window).  ``kernel`` optionally lists the elements of a finite
    kernel and ``section`` optionally lifts each target generator; both are
    needed for preimages.
    """

    source: GroupSpec
    target: GroupSpec
    images: tuple[tuple[str, GroupElement], ...]
    kernel: Optional[tuple[GroupElement, ...]] = None
    section: Optional[tuple[tuple[str, GroupElement], ...]] = None

    def __init__(self, source, target, images, kernel=None, section=None):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "images", tuple(sorted(dict(images).items())))
        object.__setattr__(
            self, "kernel", tuple(kernel) if kernel is not None else None
        )
        object.__setattr__(
            self,
            "section",
            tuple(sorted(dict(section).items())) if section is not None else None,
        )
        self._validate()

    def _validate(self):
        table = dict(self.images)
        base = generator_table(self.source)
        missing = [n for n in base if n not in table and not (self.source.kind == "heisenberg" and n == "w")]
        if missing:
            raise ValueError(f"missing generator images: {missing}")
        for word in _relation_words(self.source):
            img = identity(self.target)
            for name, exp in word:
                img = img * power(table[name], exp)
            if not img.is_identity():
                raise ValueError(f"relation {word} does not map to the identity")
        if self.section is not None:
            sec = dict(self.section)
            for name, gen in generator_table(self.target).items():
                if name == "w" and self.target.kind == "heisenberg":
                    continue
                if name not in sec:
                    raise ValueError(f"section missing target generator {name!r}")
                if self.apply(sec[name]) != gen:
                    raise ValueError(f"section of {name!r} is not a lift")
        if self.kernel is not None:
            if not any(g.is_identity() for g in self.kernel):
                raise ValueError("kernel listing must contain the identity")
            for g in self.kernel:
                if not self.apply(g).is_identity():
                    raise ValueError("declared kernel element does not map to identity")

    def apply(self, g: GroupElement) -> GroupElement:
        if g.spec != self.source:
            raise ValueError("spec mismatch")
        table = dict(self.images)
        out = identity(self.target)
        for name, exp in _canonical_word(g):
            out = out * power(table[name], exp)
        return out

    def lift(self, y: GroupElement) -> GroupElement:
        """A preimage of y, through the declared section."""
        if self.section is None:
            raise ValueError("finite kernel required")
        sec = dict(self.section)
        out = identity(self.source)
        for name, exp in _canonical_word(y):
            out = out * power(sec[name], exp)
        return out

    @staticmethod
    def identity_hom(spec: GroupSpec) -> "GroupHom":
        table = {
            n: g
            for n, g in generator_table(spec).items()
            if not (spec.kind == "heisenberg" and n == "w")
        }
        return GroupHom(spec, spec, table, kernel=(identity(spec),), section=table)


def image(aut: GroupAutomaton, hom: GroupHom) -> GroupAutomaton:
    """Relabel every edge by its image; accepts exactly the image set."""
    if aut.spec != hom.source:
        raise ValueError("spec mismatch")
    return _make_automaton(
        hom.target,
        aut.n_states,
        [(s, hom.apply(l), t) for s, l, t in aut.edges],
        aut.initial,
        aut.terminals,
    )


def preimage_finite_kernel(aut: GroupAutomaton, hom: GroupHom) -> GroupAutomaton:
    """Preimage of the accepted set under a hom with declared finite kernel.

    Each label is lifted through the section and one block of edges accepting
    exactly the kernel listing is appended: a path label of the result is
    (one preimage of the original path label) times a kernel element, and the
    full fiber of an element is exactly that coset.
    """
    if aut.spec != hom.target:
        raise ValueError("spec mismatch")
    if hom.kernel is None or hom.section is None or not hom.kernel:
        raise ValueError("finite kernel required")
    lifted = [(s, hom.lift(l), t) for s, l, t in aut.edges]
    final = aut.n_states
    for t in sorted(aut.terminals):
        for tau in hom.kernel:
            lifted.append((t, tau, final))
    return _trim(hom.source, aut.n_states + 1, lifted, aut.initial, {final})
