from __future__ import annotations

import pytest

from emverify.dvr import PrecisionExhausted
from emverify.ideals import reduce_to_odd
from emverify.relations import (
    RelationVector,
    build_element_set,
    build_matrix,
    closed_form_relation_families,
    element_index_pairs,
    expected_family_count,
    kernel_basis,
    modules_equal,
    reference_discrepancies_m3,
    verify_relation,
)
from emverify.ring import CanonicalClass, PolyElement, SquaredIdeal
from emverify.series import TruncSeries

from conftest import random_odd_instance, t_ladder


def _setup(fs):
    inst = reduce_to_odd(fs)
    es = build_element_set(inst.odd_fs)
    return inst, es


def test_element_order_m3():
    assert element_index_pairs(3) == [
        (0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1),
    ]


def test_element_set_m3_matches_published_list():
    fs = t_ladder(3, 16)
    es = build_element_set(fs)
    m = 3
    x = lambda i: PolyElement.variable(i, m, 16)
    expected = [
        x(0) * fs[0].scale(4),
        x(1) * fs[1].scale(4),
        x(2) * fs[2].scale(4),
        x(1) * fs[2].scale(2) + x(2) * fs[1].scale(2),
        x(0) * fs[2].scale(2) + x(2) * fs[0].scale(2),
        x(0) * fs[1].scale(2) + x(1) * fs[0].scale(2),
    ]
    assert list(es.elements) == expected


def test_element_set_m2_has_three_elements():
    es = build_element_set(t_ladder(2, 16))
    assert len(es) == 3


@pytest.mark.parametrize("m", [2, 3, 4])
def test_elements_equal_conjugate_monomial_differences(m, rng):
    fs = random_odd_instance(rng, m, 24)
    inst, es = _setup(fs)
    f = inst.odd_fs
    prec = inst.precision
    a = [PolyElement.variable(i, m, prec) - PolyElement.constant(f[i], m) for i in range(m)]
    b = [PolyElement.variable(i, m, prec) + PolyElement.constant(f[i], m) for i in range(m)]
    for (i, j), elem in zip(es.pairs, es.elements):
        assert (b[i] * b[j] - a[i] * a[j] - elem).normalized().is_zero


def test_matrix_block1_column2():
    fs = t_ladder(3, 32)
    es = build_element_set(fs)
    matrix = build_matrix(es, fs)
    f1 = fs[0]
    col = matrix.column(1)  # (4 x1 f1) * x1
    assert col[0] == -(f1 * f1 * f1).scale(4)
    assert col[1] == (f1 * f1).scale(8)
    assert col[2].is_zero and col[3].is_zero


def test_matrix_pair_block_column():
    # block of 2 x2 f3 + 2 x3 f2, multiplier x2: (-4 f2^2 f3, 0, 6 f2 f3, 2 f2^2)
    fs = t_ladder(3, 32)
    matrix = build_matrix(build_element_set(fs), fs)
    f2, f3 = fs[1], fs[2]
    col = matrix.column(4 * 3 + 2)
    assert col[0] == -(f2 * f2 * f3).scale(4)
    assert col[1].is_zero
    assert col[2] == (f2 * f3).scale(6)
    assert col[3] == (f2 * f2).scale(2)


def test_matrix_block2_last_column_recomputed():
    # (4 x2 f2) * x3 ends in 4 f2^2, not the printed 4 f2^2 f3
    fs = t_ladder(3, 32)
    matrix = build_matrix(build_element_set(fs), fs)
    f2, f3 = fs[1], fs[2]
    col = matrix.column(4 * 1 + 3)
    assert col[0] == -(f2 * f2 * f3).scale(4)
    assert col[1].is_zero
    assert col[2] == (f2 * f3).scale(4)
    assert col[3] == (f2 * f2).scale(4)


def test_reference_discrepancies_flag_exactly_the_known_typo():
    fs = t_ladder(3, 32)
    matrix = build_matrix(build_element_set(fs), fs)
    notes = reference_discrepancies_m3(matrix, fs)
    assert len(notes) == 1
    note = notes[0]
    assert note["code"] == "PAPER_TYPO"
    assert "M2" in note["where"] and "column 4" in note["where"]
    assert note["printed"] != note["computed"]


def test_kernel_canonical_m3():
    fs = t_ladder(3, 64)
    kb = kernel_basis(build_matrix(build_element_set(fs), fs))
    assert kb.rank == 4
    assert len(kb.relations) == 20


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_rank_and_relation_count(m):
    fs = t_ladder(m, 32)
    kb = kernel_basis(build_matrix(build_element_set(fs), fs))
    assert kb.rank == m + 1
    assert len(kb.relations) == (m - 1) * (m + 1) * (m + 2) // 2


def test_family_counts():
    assert expected_family_count(2) == 6
    assert expected_family_count(3) == 20
    assert expected_family_count(4) == 45
    for m in (2, 3, 4, 5):
        fs = t_ladder(m, 24)
        inst = reduce_to_odd(fs)
        fams = closed_form_relation_families(inst.odd_fs, inst.gs)
        assert len(fams) == expected_family_count(m)


def test_family_table_row_one():
    # first table row: alpha = (2 f2 - g2 x1 + x2, 0, 0, 0, 0, -2 f1)
    fs = t_ladder(3, 32)
    inst = reduce_to_odd(fs)
    fams = closed_form_relation_families(inst.odd_fs, inst.gs)
    rel = next(r for r in fams if r.provenance == "family-08[i=2]")
    f1, f2, g2 = inst.odd_fs[0], inst.odd_fs[1], inst.gs[1]
    a1 = rel.alphas[0]
    assert (a1.f0 - f2.scale(2)).is_zero
    assert (a1.fx[0] + g2).is_zero
    assert (a1.fx[1] - TruncSeries.one(32)).is_zero
    assert all(rel.alphas[k].is_zero for k in (1, 2, 3, 4))
    a6 = rel.alphas[5]
    assert (a6.f0 + f1.scale(2)).is_zero
    assert all(s.is_zero for s in a6.fx)


def test_family_one_entries():
    fs = t_ladder(3, 32)
    inst = reduce_to_odd(fs)
    fams = closed_form_relation_families(inst.odd_fs, inst.gs)
    rel = next(r for r in fams if r.provenance == "family-01[i=2]")
    g2 = inst.gs[1]
    assert (rel.alphas[0].f0 - g2 * g2).is_zero
    assert (rel.alphas[1].f0 - TruncSeries.one(32)).is_zero
    assert (rel.alphas[5].f0 + g2.scale(2)).is_zero


def test_all_families_verify_canonical():
    for m in (2, 3, 4, 5):
        fs = t_ladder(m, 32)
        inst, es = _setup(fs)
        for rel in closed_form_relation_families(inst.odd_fs, inst.gs):
            ok, prec = verify_relation(rel, es, inst.odd_fs)
            assert ok, (m, rel.provenance)
            assert prec > 0


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_all_families_verify_random(m, rng):
    fs = random_odd_instance(rng, m, 24)
    inst, es = _setup(fs)
    for rel in closed_form_relation_families(inst.odd_fs, inst.gs):
        ok, _ = verify_relation(rel, es, inst.odd_fs)
        assert ok, (m, rel.provenance)


def test_kernel_relations_verify():
    fs = t_ladder(3, 64)
    inst, es = _setup(fs)
    kb = kernel_basis(build_matrix(es, inst.odd_fs))
    for rel in kb.relations:
        ok, prec = verify_relation(rel, es, inst.odd_fs)
        assert ok, rel.provenance
        assert prec >= 48


def test_zero_relation_verifies():
    fs = t_ladder(3, 16)
    inst, es = _setup(fs)
    zero = CanonicalClass(
        SquaredIdeal.Q1,
        TruncSeries.zero(16),
        (TruncSeries.zero(16),) * 3,
    )
    rel = RelationVector(3, (zero,) * 6, "zero")
    ok, _ = verify_relation(rel, es, inst.odd_fs)
    assert ok


def test_perturbed_relation_fails():
    fs = t_ladder(3, 32)
    inst, es = _setup(fs)
    fams = closed_form_relation_families(inst.odd_fs, inst.gs)
    rel = fams[0]
    t = TruncSeries.t_power(1, 32)
    bumped = CanonicalClass(
        rel.alphas[0].basis, rel.alphas[0].f0 + t, rel.alphas[0].fx
    )
    bad = RelationVector(3, (bumped,) + rel.alphas[1:], "perturbed")
    ok, _ = verify_relation(bad, es, inst.odd_fs)
    assert not ok


def test_modules_equal_oracle_m2_m3():
    for m in (2, 3):
        fs = t_ladder(m, 32)
        inst, es = _setup(fs)
        kb = kernel_basis(build_matrix(es, inst.odd_fs))
        fams = closed_form_relation_families(inst.odd_fs, inst.gs)
        equal, prec = modules_equal(kb.relations, fams)
        assert equal
        assert prec >= 16


def test_modules_equal_reflexive():
    fs = t_ladder(2, 32)
    inst, es = _setup(fs)
    fams = closed_form_relation_families(inst.odd_fs, inst.gs)
    equal, _ = modules_equal(fams, fams)
    assert equal


def test_modules_equal_detects_deletion():
    fs = t_ladder(3, 32)
    inst, es = _setup(fs)
    kb = kernel_basis(build_matrix(es, inst.odd_fs))
    fams = closed_form_relation_families(inst.odd_fs, inst.gs)
    equal, _ = modules_equal(kb.relations, fams[:-1])
    assert not equal


def test_kernel_raises_when_precision_exhausted():
    # lead valuation 3: the constant row's pivot is t^9, invisible mod t^4
    fs = [TruncSeries.t_power(3, 4), TruncSeries.t_power(5, 4)]
    inst = reduce_to_odd(fs)
    es = build_element_set(inst.odd_fs)
    with pytest.raises(PrecisionExhausted):
        kernel_basis(build_matrix(es, inst.odd_fs))
