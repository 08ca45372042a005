from __future__ import annotations

from fractions import Fraction

import pytest

from emverify.ideals import (
    DegenerateInstance,
    complete_intersection_generators,
    generators_of_P,
    generators_of_intersection,
    reduce_to_odd,
    traced_generators,
)
from emverify.ring import PolyElement, SquaredIdeal, is_zero_mod
from emverify.series import TruncSeries

from conftest import random_odd_instance, t_ladder

N = 32


def S(terms, precision=N):
    return TruncSeries.from_terms(terms, precision)


def test_reduce_splits_parity_and_records_shift():
    inst = reduce_to_odd([S({1: 1, 2: 1}), S({3: 1})])
    assert not inst.degenerate
    assert [str(s) for s in inst.odd_fs] == ["t", "t^3"]
    assert [str(s) for s in inst.even_parts] == ["t^2", "0"]
    assert inst.perm == (0, 1)


def test_reduce_all_even_is_degenerate():
    inst = reduce_to_odd([S({4: 1}), S({2: 1})])
    assert inst.degenerate
    assert inst.odd_fs is None


def test_reduce_renumbers_by_minimal_valuation():
    inst = reduce_to_odd([S({3: 1}), S({1: 1})])
    assert inst.perm == (1, 0)
    assert inst.odd_fs[0].valuation() == 1
    assert str(inst.gs[1]) == "t^2"


def test_gs_are_even_with_unit_lead(rng):
    for m in (2, 3, 4):
        inst = reduce_to_odd(random_odd_instance(rng, m, N))
        assert all(g.is_even() for g in inst.gs)
        assert (inst.gs[0] - TruncSeries.one(inst.gs[0].precision)).is_zero


def test_generators_of_P_m3_layout():
    inst = reduce_to_odd(t_ladder(3, N))
    gens = generators_of_P(inst)
    assert [g.label for g in gens] == [
        "h2", "h3", "q12", "q13", "q23", "q11", "q22", "q33",
    ]
    f = inst.odd_fs
    g = inst.gs
    x = lambda i: PolyElement.variable(i, 3, inst.precision)
    assert (gens[0].poly - (x(0) * g[1] - x(1))).normalized().is_zero
    assert (
        gens[2].poly - (x(0) * x(1) - PolyElement.constant(f[0] * f[1], 3))
    ).normalized().is_zero
    assert all(gen.poly.in_S() for gen in gens)


def test_generators_of_P_vanish_under_both_substitutions(rng):
    for m in (2, 3, 4):
        inst = reduce_to_odd(random_odd_instance(rng, m, N))
        for gen in generators_of_P(inst):
            assert gen.poly.substitute_x(list(inst.odd_fs)).is_zero
            assert gen.poly.substitute_x([-f for f in inst.odd_fs]).is_zero


def test_generators_of_P_refuses_degenerate():
    inst = reduce_to_odd([S({2: 1}), S({4: 1})])
    with pytest.raises(DegenerateInstance):
        generators_of_P(inst)


def test_complete_intersection_generators():
    inst = reduce_to_odd([S({2: 1}), S({4: 1})])
    gens = complete_intersection_generators(inst)
    assert [g.label for g in gens] == ["p1", "p2"]
    assert all(g.poly.in_mS() for g in gens)


def test_h_identity_three_ways(rng):
    # x1 g_i - x_i equals -b_i + b_1 g_i and -a_i + a_1 g_i for odd series
    for m in (2, 3, 4):
        inst = reduce_to_odd(random_odd_instance(rng, m, N))
        f, g = inst.odd_fs, inst.gs
        prec = inst.precision
        x = lambda i: PolyElement.variable(i, m, prec)
        c = lambda s: PolyElement.constant(s, m)
        for i in range(1, m):
            h = x(0) * g[i] - x(i)
            b_form = -(x(i) + c(f[i])) + (x(0) + c(f[0])) * g[i]
            a_form = -(x(i) - c(f[i])) + (x(0) - c(f[0])) * g[i]
            assert (h - b_form).normalized().is_zero
            assert (h - a_form).normalized().is_zero


def test_trace_fixes_h_generators(rng):
    for m in (2, 3, 4):
        inst = reduce_to_odd(random_odd_instance(rng, m, N))
        for gen in generators_of_P(inst):
            if gen.key[0] == "h":
                assert gen.poly.trace() == gen.poly


def test_gamma_family_one_matches_published_form():
    inst = reduce_to_odd(t_ladder(3, N))
    gens = generators_of_intersection(inst)
    gamma = next(
        g for g in gens if g.provenance == "gamma[family-01[i=2]]"
    )
    f, g2 = inst.odd_fs, inst.gs[1]
    x = lambda i: PolyElement.variable(i, 3, inst.precision)
    c = lambda s: PolyElement.constant(s, 3)
    b1 = x(0) + c(f[0])
    b2 = x(1) + c(f[1])
    expected = (b1 * b1) * (g2 * g2) + b2 * b2 - (b1 * b2) * g2.scale(2)
    assert (gamma.poly - expected).normalized().is_zero


def test_intersection_generator_counts():
    inst2 = reduce_to_odd(t_ladder(2, N))
    gens2 = generators_of_intersection(inst2)
    assert sum(1 for g in gens2 if g.kind == "family") == 6
    assert sum(1 for g in gens2 if g.kind == "product") == 9
    inst3 = reduce_to_odd(t_ladder(3, N))
    gens3 = generators_of_intersection(inst3)
    assert sum(1 for g in gens3 if g.kind == "family") == 20
    assert sum(1 for g in gens3 if g.kind == "product") == 36


@pytest.mark.parametrize("m", [2, 3, 4])
def test_gammas_lie_in_both_squared_ideals(m, rng):
    inst = reduce_to_odd(random_odd_instance(rng, m, N))
    for gen in generators_of_intersection(inst):
        assert is_zero_mod(gen.poly, inst.odd_fs, SquaredIdeal.Q1), gen.provenance
        assert is_zero_mod(gen.poly, inst.odd_fs, SquaredIdeal.Q2), gen.provenance


def test_traced_generators_lie_in_S(rng):
    inst = reduce_to_odd(random_odd_instance(rng, 3, N))
    for t in traced_generators(inst):
        assert t.poly.in_S(), t.source.provenance


def test_trace_of_family_one_is_square_of_h():
    inst = reduce_to_odd(t_ladder(3, N))
    traced = traced_generators(inst)
    item = next(
        t for t in traced if t.source.provenance == "gamma[family-01[i=2]]"
    )
    g2 = inst.gs[1]
    x = lambda i: PolyElement.variable(i, 3, inst.precision)
    h2 = x(0) * g2 - x(1)
    expected = (x(0) * g2) * h2 - x(1) * h2  # equals h2^2
    assert (item.poly - expected).normalized().is_zero
    assert (item.poly - h2 * h2).normalized().is_zero


def test_trace_of_product_generator_expansion(rng):
    # trace of a_i a_j b_i' b_j' recomputed coefficientwise agrees with
    # the direct conjugate-average definition
    inst = reduce_to_odd(random_odd_instance(rng, 3, N))
    f = inst.odd_fs
    prec = inst.precision
    x = lambda i: PolyElement.variable(i, 3, prec)
    c = lambda s: PolyElement.constant(s, 3)
    u = (x(0) - c(f[0])) * (x(1) - c(f[1])) * (x(0) + c(f[0])) * (x(2) + c(f[2]))
    half = Fraction(1, 2)
    direct = (u + u.substitute_neg_t()) * half
    assert (u.trace() - direct).normalized().is_zero
