"""Automata over group backends: compilation, observers, pumping, homs."""

import random

import pytest

from ratgroups.groups import (
    GroupSpec,
    AbelianVec,
    SemidirectElem,
    HeisenbergElem,
    LamplighterElem,
    eval_word,
    identity,
    inv,
    mul,
    power,
    generator_table,
)
from ratgroups.automata import (
    Empty,
    Singleton,
    Union,
    Concat,
    Star,
    GroupAutomaton,
    GroupHom,
    YES,
    UNKNOWN,
    compile_expr,
    enumerate_elements,
    member_bounded,
    pump,
    subgroup_generators,
    image,
    preimage_finite_kernel,
    intersect_bounded,
    automaton_for_elements,
)

from oracles import denotation

Z1 = GroupSpec.free_abelian(1)
Z2 = GroupSpec.free_abelian(2)
HEI = GroupSpec.heisenberg()
SD = GroupSpec.semidirect([[2, 1], [1, 1]])
LAMP2 = GroupSpec.lamplighter(2)
MB = GroupSpec.metabelian([2, -3])


def sing(*tokens):
    return Singleton(list(tokens))


def conj_expr():
    """(h^-1)* x h* over the semidirect backend, x = e1."""
    return Concat(Concat(Star(sing(("h", -1))), sing(("e1", 1))), Star(sing(("h", 1))))


# -- compilation --------------------------------------------------------------

def test_compile_empty():
    aut = compile_expr(Empty(), Z1)
    assert enumerate_elements(aut, 5) == set()


def test_compile_star_empty_accepts_identity_only():
    aut = compile_expr(Star(Empty()), Z1)
    assert enumerate_elements(aut, 5) == {identity(Z1)}


def test_compile_conjugation_expression():
    aut = compile_expr(conj_expr(), SD)
    elems = enumerate_elements(aut, 3)
    assert SemidirectElem(SD, (2, 1), 0) in elems  # h^-1 x h
    # every h^-a x h^b with a+b+1 <= 3
    expected = set()
    h, x = generator_table(SD)["h"], generator_table(SD)["e1"]
    for a in range(3):
        for b in range(3):
            if a + 1 + b <= 3:
                expected.add(power(h, -a) * x * power(h, b))
    assert elems == expected


def test_compile_invalid_word_errors():
    with pytest.raises(ValueError, match="unknown generator"):
        compile_expr(sing(("nope", 1)), Z1)


def random_expr(rng, names, depth):
    if depth == 0 or rng.random() < 0.3:
        kind = rng.random()
        if kind < 0.15:
            return Empty()
        word = [(rng.choice(names), rng.randint(-2, 2)) for _ in range(rng.randint(1, 2))]
        return Singleton(word)
    op = rng.choice(["u", "c", "s"])
    if op == "u":
        return Union(random_expr(rng, names, depth - 1), random_expr(rng, names, depth - 1))
    if op == "c":
        return Concat(random_expr(rng, names, depth - 1), random_expr(rng, names, depth - 1))
    return Star(random_expr(rng, names, depth - 1))


SPEC_NAMES = [
    (Z2, ["e1", "e2"]),
    (SD, ["e1", "e2", "h"]),
    (HEI, ["g", "f", "z"]),
    (LAMP2, ["a", "t"]),
    (MB, ["a", "x"]),
]


@pytest.mark.parametrize("spec,names", SPEC_NAMES, ids=lambda p: getattr(p, "kind", ""))
def test_compile_matches_recursive_denotation(spec, names):
    rng = random.Random(11)
    for _ in range(20):
        expr = random_expr(rng, names, 3)
        aut = compile_expr(expr, spec)
        for bound in (0, 2, 4):
            den = denotation(expr, spec, bound)
            assert enumerate_elements(aut, bound) == {g for g, k in den.items() if k <= bound}


def test_enumerate_monotone():
    rng = random.Random(5)
    for _ in range(10):
        expr = random_expr(rng, ["e1", "e2"], 3)
        aut = compile_expr(expr, Z2)
        prev = set()
        for bound in range(6):
            cur = enumerate_elements(aut, bound)
            assert prev <= cur
            prev = cur


def test_enumerate_singleton():
    aut = compile_expr(sing(("g", 1)), HEI)
    assert enumerate_elements(aut, 1) == {HeisenbergElem(HEI, 1, 0, 0)}


def test_enumerate_heisenberg_diagonal_products():
    expr = Concat(Star(sing(("w", 1), ("g", 1))), Star(sing(("f", 1))))
    aut = compile_expr(expr, HEI)
    elems = enumerate_elements(aut, 4)
    wg = eval_word(HEI, [("w", 1), ("g", 1)])
    f = eval_word(HEI, [("f", 1)])
    assert wg * f in elems
    assert wg * wg in elems


# -- member_bounded -----------------------------------------------------------

def test_member_identity_in_star_at_bound_zero():
    aut = compile_expr(Star(sing(("e1", 1))), Z1)
    assert member_bounded(aut, identity(Z1), 0) == YES


def test_member_unknown_for_non_member():
    aut = compile_expr(Star(sing(("e1", 1), ("e2", 0))), Z2)
    assert member_bounded(aut, AbelianVec(Z2, (5, 5)), 12) == UNKNOWN


def test_member_metabelian_r1_element():
    # a^{x^p} written as the 2-letter path of R1, with p = 3, d = 38
    p, d = 3, 38
    r1 = Concat(
        Star(sing(("x", -p), ("a", -d))),
        Star(Union(sing(("a", d), ("x", p)), sing(("a", d + 1), ("x", p)))),
    )
    aut = compile_expr(r1, MB)
    target = eval_word(MB, [("x", -p), ("a", 1), ("x", p)])
    assert member_bounded(aut, target, 4) == YES


# -- pump ---------------------------------------------------------------------

def test_pump_star_is_witnessed():
    aut = compile_expr(Star(sing(("e1", 1))), Z1)
    w = pump(aut, 5)
    assert w is not None
    assert w.q == AbelianVec(Z1, (1,))
    for n in range(11):
        assert member_bounded(aut, w.pumped(n), n + 3) == YES


def test_pump_finite_set_returns_nothing():
    aut = compile_expr(Union(sing(("e1", 2)), sing(("e2", 1))), Z2)
    assert pump(aut, 8) is None


def test_pump_conjugation_expression():
    aut = compile_expr(conj_expr(), SD)
    w = pump(aut, 6)
    assert w is not None and not w.q.is_identity()
    h = generator_table(SD)["h"]
    norm = w.normalized()
    assert norm.b.is_identity()
    # q' is conjugate to h or h^-1: same shift of +-1
    assert norm.q.shift in (1, -1)
    for n in range(11):
        assert w.pumped(n) == norm.pumped(n)
        assert member_bounded(aut, w.pumped(n), 2 * n + 4) == YES


def test_pump_skips_identity_cycles():
    # (e1 . e1^-1)* denotes {identity}: its only cycles multiply to identity
    expr = Star(Concat(sing(("e1", 1)), sing(("e1", -1))))
    aut = compile_expr(expr, Z1)
    assert pump(aut, 6) is None


def test_pump_deterministic():
    aut = compile_expr(conj_expr(), SD)
    assert pump(aut, 6) == pump(aut, 6)


# -- subgroup generators ------------------------------------------------------

def test_generators_of_singleton():
    g = eval_word(HEI, [("g", 1)])
    aut = automaton_for_elements(HEI, [g])
    assert subgroup_generators(aut) == [g]


def test_generators_of_empty():
    assert subgroup_generators(compile_expr(Empty(), Z2)) == []


def test_generators_of_astar_bstar():
    expr = Concat(Star(sing(("e1", 1))), Star(sing(("e2", 1))))
    aut = compile_expr(expr, Z2)
    gens = subgroup_generators(aut)
    produced = {g.coords for g in gens}
    # up to tree choice and inverses these generate the full lattice
    span = {(0, 0)}
    for _ in range(4):
        nxt = set(span)
        for v in span:
            for g in produced:
                nxt.add(tuple(a + b for a, b in zip(v, g)))
                nxt.add(tuple(a - b for a, b in zip(v, g)))
        span = nxt
    assert (1, 0) in span and (0, 1) in span


def test_generators_generate_accepted_elements():
    # every accepted element at bound L is a product of <= 2L generators
    rng = random.Random(23)
    for _ in range(8):
        expr = random_expr(rng, ["e1", "e2"], 2)
        aut = compile_expr(expr, Z2)
        gens = subgroup_generators(aut)
        L = 4
        ball = {identity(Z2)}
        for _ in range(2 * L):
            ball |= {mul(v, g) for v in ball for g in gens} | {
                mul(v, inv(g)) for v in ball for g in gens
            }
        assert enumerate_elements(aut, L) <= ball


# -- homomorphisms ------------------------------------------------------------

def shift_hom_semidirect():
    """Kill A: semidirect -> Z sending h to the generator."""
    Z = GroupSpec.free_abelian(1)
    one = AbelianVec(Z, (1,))
    zero = identity(Z)
    return GroupHom(SD, Z, {"e1": zero, "e2": zero, "h": one})


def test_image_identity_hom():
    aut = compile_expr(conj_expr(), SD)
    out = image(aut, GroupHom.identity_hom(SD))
    assert out.edges == aut.edges


def test_image_semidirect_to_z():
    aut = compile_expr(conj_expr(), SD)
    hom = shift_hom_semidirect()
    out = image(aut, hom)
    for bound in range(5):
        assert {hom.apply(g) for g in enumerate_elements(aut, bound)} == enumerate_elements(
            out, bound
        )
    # h^-a x h^b has image b - a; with a+1+b <= 3 that is {-2,...,2}
    Z = hom.target
    assert enumerate_elements(out, 3) == {AbelianVec(Z, (k,)) for k in range(-2, 3)}


def test_image_metabelian_kill_a():
    Z = GroupSpec.free_abelian(1)
    hom = GroupHom(MB, Z, {"a": identity(Z), "x": AbelianVec(Z, (1,))})
    p = 3
    r2 = Concat(
        Star(sing(("x", -p))), Star(Union(sing(("x", p)), sing(("a", 1), ("x", p))))
    )
    out = image(compile_expr(r2, MB), hom)
    for g in enumerate_elements(out, 6):
        assert g.coords[0] % p == 0


def test_hom_rejects_bad_relations():
    # sending e1 to g and e2 to f violates commutativity of Z^2
    g = HeisenbergElem(HEI, 1, 0, 0)
    f = HeisenbergElem(HEI, 0, 1, 0)
    with pytest.raises(ValueError, match="relation"):
        GroupHom(Z2, HEI, {"e1": g, "e2": f})


def even_preimage_setup():
    """The documented finite-kernel example: shift hom out of the lamplighter,
    kernel {1, a_0}, section e1 -> t."""
    Z = GroupSpec.free_abelian(1)
    tab = generator_table(LAMP2)
    hom = GroupHom(
        LAMP2,
        Z,
        {"a": identity(Z), "t": AbelianVec(Z, (1,))},
        kernel=(identity(LAMP2), tab["a"]),
        section={"e1": tab["t"]},
    )
    evens = compile_expr(Star(Union(sing(("e1", 2)), sing(("e1", -2)))), Z)
    return hom, evens


def test_preimage_even_shifts():
    hom, evens = even_preimage_setup()
    pre = preimage_finite_kernel(evens, hom)
    tab = generator_table(LAMP2)
    t, a = tab["t"], tab["a"]
    got = enumerate_elements(pre, 7)
    # the accepted set is exactly {t^k, t^k a : k even}; within the window the
    # reachable shifts are those of the original automaton one bound lower
    expected = {
        power(t, y.coords[0]) * tau
        for y in enumerate_elements(evens, 6)
        for tau in (identity(LAMP2), a)
    }
    assert got == expected
    for g in got:
        assert g.shift % 2 == 0
    for k in (-2, 0, 2):
        assert power(t, k) in got and power(t, k) * a in got


def test_preimage_projects_back():
    hom, evens = even_preimage_setup()
    pre = preimage_finite_kernel(evens, hom)
    for L in range(4):
        target = enumerate_elements(evens, L)
        projected = {hom.apply(g) for g in enumerate_elements(pre, L + 1)}
        assert projected == target


def test_preimage_trivial_kernel_keeps_set():
    hom = GroupHom.identity_hom(Z1)
    aut = compile_expr(Star(sing(("e1", 1))), Z1)
    pre = preimage_finite_kernel(aut, hom)
    for L in range(5):
        assert enumerate_elements(pre, L + 1) == enumerate_elements(aut, L)


def test_preimage_of_empty_is_empty():
    hom, _ = even_preimage_setup()
    pre = preimage_finite_kernel(compile_expr(Empty(), hom.target), hom)
    assert enumerate_elements(pre, 8) == set()


def test_preimage_requires_kernel_and_section():
    hom = shift_hom_semidirect()
    aut = compile_expr(Star(sing(("e1", 1))), hom.target)
    with pytest.raises(ValueError, match="finite kernel required"):
        preimage_finite_kernel(aut, hom)


# -- bounded intersection -----------------------------------------------------

def test_intersection_heisenberg_diagonal():
    r1 = compile_expr(Concat(Star(sing(("w", 1), ("g", 1))), Star(sing(("f", 1)))), HEI)
    r2 = compile_expr(Concat(Star(sing(("w", 1))), Star(sing(("g", 1), ("f", 1)))), HEI)
    inter = intersect_bounded(r1, r2, 8)
    wgf = lambda n: eval_word(HEI, [("w", n), ("g", n), ("f", n)])
    assert inter == {wgf(0), wgf(1), wgf(2)}


def test_intersection_with_empty():
    a = compile_expr(Star(sing(("e1", 1))), Z1)
    b = compile_expr(Empty(), Z1)
    assert intersect_bounded(a, b, 6) == set()


def test_intersection_a_star_even():
    a = compile_expr(Star(sing(("e1", 1))), Z1)
    b = compile_expr(Star(sing(("e1", 2))), Z1)
    assert intersect_bounded(a, b, 6) == {AbelianVec(Z1, (k,)) for k in (0, 2, 4, 6)}
