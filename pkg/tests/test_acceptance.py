"""Acceptance suite: one test per criterion, exact tolerances.

Every identity below is checked to be *identically zero* modulo the
effective t-precision of its computation; the only numeric tolerances
are the stated precision margins.  Each test prints one line on success.
"""

from __future__ import annotations

import json
import random
import time

import pytest

from emverify import cli
from emverify.ideals import (
    Certifier,
    check_certificate,
    generators_of_P,
    reduce_to_odd,
    traced_generators,
)
from emverify.pipeline import parse_input, run_pipeline
from emverify.relations import (
    RelationVector,
    build_element_set,
    build_matrix,
    closed_form_relation_families,
    expected_family_count,
    kernel_basis,
    modules_equal,
    verify_relation,
)
from emverify.ring import CanonicalClass, PolyElement
from emverify.series import TruncSeries

from conftest import random_odd_instance, t_ladder

CANONICAL_DOC = "m 3\nprecision 64\nmargin 16\nf1 1:1\nf2 3:1\nf3 5:1\n"


def _ok(n: int, message: str) -> None:
    print(f"ACCEPTANCE {n}: PASS — {message}")


@pytest.fixture(scope="module")
def canonical_report():
    return run_pipeline(parse_input(CANONICAL_DOC))


def test_ac01_canonical_relations_verify_in_time():
    start = time.perf_counter()
    inst = reduce_to_odd(t_ladder(3, 64))
    es = build_element_set(inst.odd_fs)
    matrix = build_matrix(es, inst.odd_fs)
    kb = kernel_basis(matrix)
    fams = closed_form_relation_families(inst.odd_fs, inst.gs)
    assert len(fams) == 20
    for rel in list(kb.relations) + fams:
        ok, prec = verify_relation(rel, es, inst.odd_fs)
        assert ok, rel.provenance
        assert prec >= 16
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"relation verification took {elapsed:.2f}s"
    _ok(1, f"20 relations verified with zero residual in {elapsed:.2f}s")


def test_ac02_rank_and_relation_counts():
    for m in (2, 3, 4, 5):
        kb = kernel_basis(
            build_matrix(
                build_element_set(t_ladder(m, 32)), t_ladder(m, 32)
            )
        )
        assert kb.rank == m + 1, m
        expected = (m - 1) * (m + 1) * (m + 2) // 2
        assert len(kb.relations) == expected, m
        if m == 3:
            assert kb.rank == 4
    _ok(2, "rank m+1 and (m-1)(m+1)(m+2)/2 relations for m in 2..5")


def test_ac03_oracle_equivalence():
    rng = random.Random(3)
    for m in (2, 3):
        instances = [t_ladder(m, 32)] + [
            random_odd_instance(rng, m, 32) for _ in range(5)
        ]
        for k, fs in enumerate(instances):
            inst = reduce_to_odd(fs)
            es = build_element_set(inst.odd_fs)
            kb = kernel_basis(build_matrix(es, inst.odd_fs))
            fams = closed_form_relation_families(inst.odd_fs, inst.gs)
            equal, prec = modules_equal(kb.relations, fams)
            assert equal, (m, k)
            assert prec > 0
    _ok(3, "computed kernel and closed-form families agree, m in {2,3}, N=32")


def test_ac04_intersection_membership():
    from emverify.ring import SquaredIdeal, is_zero_mod

    rng = random.Random(4)
    for m in (2, 3, 4):
        for k in range(5):
            inst = reduce_to_odd(random_odd_instance(rng, m, 48))
            fams = closed_form_relation_families(inst.odd_fs, inst.gs)
            from emverify.ideals import generators_of_intersection

            gammas = [
                g
                for g in generators_of_intersection(inst)
                if g.kind == "family"
            ]
            assert len(gammas) == expected_family_count(m)
            for g in gammas:
                assert is_zero_mod(
                    g.poly, inst.odd_fs, SquaredIdeal.Q1
                ), (m, k, g.provenance)
                assert is_zero_mod(
                    g.poly, inst.odd_fs, SquaredIdeal.Q2
                ), (m, k, g.provenance)
    _ok(4, "every gamma lies in both squared ideals, m in {2,3,4}, N=48")


def test_ac05_trace_fixes_h_generators():
    rng = random.Random(5)
    instances = [t_ladder(m, 32) for m in (2, 3, 4, 5)]
    instances += [random_odd_instance(rng, m, 32) for m in (2, 3, 4)]
    count = 0
    for fs in instances:
        inst = reduce_to_odd(fs)
        for gen in generators_of_P(inst):
            if gen.key[0] == "h":
                assert gen.poly.trace() == gen.poly, gen.label
                count += 1
    _ok(5, f"trace fixes all {count} h-generators exactly")


def test_ac06_trace_identity_certificates():
    families_seen: set[int] = set()
    product_seen = False
    for m, precision in ((3, 64), (4, 48)):
        inst = reduce_to_odd(t_ladder(m, precision))
        gens = generators_of_P(inst)
        engine = Certifier(inst, gens)
        for item in traced_generators(inst):
            src = item.source
            if m == 4 and src.kind != "family":
                continue
            cert, _note = engine.certify(
                item.poly, src.kind, src.key, src.provenance
            )
            ok, prec = check_certificate(cert, gens)
            assert ok, src.provenance
            assert cert.residual.normalized().is_zero
            assert all(c.in_mS() for c, _ in cert.combo)
            if src.kind == "family":
                families_seen.add(src.key[0])
            else:
                product_seen = True
    assert families_seen == set(range(1, 13))
    assert product_seen
    _ok(6, "all 12 families and the product identity certified in mP")


def test_ac07_degenerate_branch():
    report = run_pipeline(
        parse_input("m 2\nprecision 48\nmargin 16\nf1 2:1\nf2 4:1\n")
    )
    assert report.verdict == "PASS"
    stages = report.body["stages"]
    assert stages["reduction"]["degenerate"] is True
    certs = stages["certificates"]
    assert "complete-intersection" in certs["branch"]
    assert certs["count"] == 3  # pairwise products of two generators
    assert all(item["passed"] for item in certs["items"])
    _ok(7, "all-even input certified through the complete-intersection branch")


def test_ac08_negative_controls():
    inst = reduce_to_odd(t_ladder(3, 32))
    es = build_element_set(inst.odd_fs)
    fams = closed_form_relation_families(inst.odd_fs, inst.gs)
    t = TruncSeries.t_power(1, 32)
    for n, rel in enumerate(fams):
        slot = n % len(rel.alphas)
        alpha = rel.alphas[slot]
        bumped = CanonicalClass(alpha.basis, alpha.f0 + t, alpha.fx)
        bad = RelationVector(
            rel.m,
            rel.alphas[:slot] + (bumped,) + rel.alphas[slot + 1 :],
            rel.provenance + "+t",
        )
        ok, _ = verify_relation(bad, es, inst.odd_fs)
        assert not ok, rel.provenance

    gens = generators_of_P(inst)
    engine = Certifier(inst, gens)
    one = PolyElement.constant(TruncSeries.one(32), 3)
    flipped = 0
    for item in traced_generators(inst)[:6]:
        cert, _ = engine.certify(
            item.poly, item.source.kind, item.source.key,
            item.source.provenance,
        )
        if not cert.combo:
            continue
        for pos in range(len(cert.combo)):
            bad_combo = tuple(
                (c + one, g) if k == pos else (c, g)
                for k, (c, g) in enumerate(cert.combo)
            )
            from emverify.ideals import Certificate

            bad = Certificate(
                cert.target, bad_combo, cert.residual, cert.method,
                cert.provenance, cert.precision,
            )
            ok, _ = check_certificate(bad, gens)
            assert not ok
            flipped += 1
    assert flipped > 0
    _ok(8, f"20 relation perturbations and {flipped} certificate "
           "perturbations all flip to FAIL")


def test_ac09_byte_identical_reports(tmp_path, capsys):
    path = tmp_path / "canonical.txt"
    path.write_text(CANONICAL_DOC, encoding="utf-8")
    assert cli.main(["check", str(path)]) == 0
    first = capsys.readouterr().out
    assert cli.main(["check", str(path)]) == 0
    second = capsys.readouterr().out
    assert first == second
    json.loads(first)  # well-formed JSON
    _ok(9, "two check runs produce byte-identical JSON reports")


def test_ac10_typo_flagged_and_still_pass(canonical_report):
    report = canonical_report
    assert report.verdict == "PASS"
    notes = [
        n
        for n in report.body["notes"]
        if n["code"] == "PAPER_TYPO" and "M2" in n.get("where", "")
    ]
    assert len(notes) == 1
    note = notes[0]
    # printed 4 f2^2 f3 = 4 t^11, recomputed 4 f2^2 = 4 t^6 on this instance
    assert note["printed"] == "4*t^11"
    assert note["computed"] == "4*t^6"
    _ok(10, "M2 misprint flagged as PAPER_TYPO with both values; verdict PASS")
