"""Command-line interface.

Exit codes: 0 PASS, 1 FAIL, 2 INCONCLUSIVE, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .ideals import Certificate, Certifier, check_certificate, generators_of_P, reduce_to_odd, traced_generators
from .pipeline import (
    ParseError,
    Report,
    RunConfig,
    ValidationError,
    parse_input,
    run_pipeline,
)
from .relations import (
    RelationVector,
    build_element_set,
    closed_form_relation_families,
    verify_relation,
)
from .ring import CanonicalClass, PolyElement
from .series import TruncSeries


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emverify",
        description=(
            "verify, with explicit certificates, that the traced "
            "generators of the squared-ideal intersection lie in m*P"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_file=True):
        if with_file:
            p.add_argument("file", help="input document (see README for format)")
        p.add_argument(
            "--format",
            choices=("json", "text"),
            default="json",
            help="report rendering (default: json)",
        )
        p.add_argument(
            "--degree-bound",
            type=int,
            default=3,
            metavar="D",
            help="x-degree bound for solver coefficients (default: 3)",
        )

    p_check = sub.add_parser("check", help="run the full pipeline")
    add_common(p_check)
    p_check.add_argument(
        "--no-oracle",
        action="store_true",
        help="skip the kernel-vs-closed-form span comparison",
    )
    p_rel = sub.add_parser(
        "relations", help="matrix, rank, relation list and verification"
    )
    add_common(p_rel)
    p_pg = sub.add_parser("pgens", help="generators of the contracted prime")
    add_common(p_pg)
    p_cert = sub.add_parser("certify", help="membership certificates only")
    add_common(p_cert)
    p_self = sub.add_parser(
        "selftest", help="randomized negative controls on the canonical instance"
    )
    add_common(p_self, with_file=False)
    p_self.add_argument(
        "--seed", type=int, default=0, help="seed for the control choices"
    )
    return parser


def _load_config(args, mode: str) -> RunConfig:
    text = Path(args.file).read_text(encoding="utf-8")
    cfg = parse_input(text)
    oracle = cfg.oracle
    if getattr(args, "no_oracle", False):
        oracle = False
    return RunConfig(
        m=cfg.m,
        f_terms=cfg.f_terms,
        precision=cfg.precision,
        margin=cfg.margin,
        oracle=oracle,
        mode=mode,
        degree_bound=args.degree_bound,
    )


def _emit(report: Report, fmt: str) -> int:
    if fmt == "json":
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.to_text())
    return report.exit_code


def run_selftest(seed: int, degree_bound: int = 3) -> Report:
    """Canonical smoke run plus seeded negative controls.

    Each control perturbs a verified object and demands the corresponding
    check fail: a relation coefficient bumped by t, a certificate
    coefficient bumped by a unit, and a certificate residual bumped by a
    unit.
    """
    rng = random.Random(seed)
    precision, margin = 32, 8
    cfg = RunConfig(
        m=3,
        f_terms=(((1, 1),), ((3, 1),), ((5, 1),)),
        precision=precision,
        margin=margin,
        mode="check",
        degree_bound=degree_bound,
    )
    smoke = run_pipeline(cfg)
    body = {
        "tool": smoke.body["tool"],
        "selftest": {"seed": seed, "smoke_verdict": smoke.verdict},
    }
    checks = [
        {
            "name": "smoke:canonical-instance",
            "passed": smoke.verdict == "PASS",
            "effective_precision": precision,
            "conclusive": True,
        }
    ]

    inst = reduce_to_odd(cfg.series())
    es = build_element_set(inst.odd_fs)
    fams = closed_form_relation_families(inst.odd_fs, inst.gs)

    rel = rng.choice(fams)
    slot = rng.randrange(len(rel.alphas))
    t = TruncSeries.t_power(1, precision)
    alpha = rel.alphas[slot]
    bumped = CanonicalClass(alpha.basis, alpha.f0 + t, alpha.fx)
    perturbed = RelationVector(
        rel.m,
        rel.alphas[:slot] + (bumped,) + rel.alphas[slot + 1 :],
        rel.provenance + "+t",
    )
    ok, _ = verify_relation(perturbed, es, inst.odd_fs)
    checks.append(
        {
            "name": f"control:relation-perturbed[{rel.provenance}#{slot}]",
            "passed": not ok,
            "effective_precision": precision,
            "conclusive": True,
        }
    )

    gens = generators_of_P(inst)
    engine = Certifier(inst, gens, degree_bound=degree_bound)
    traced = traced_generators(inst)
    target = rng.choice([t for t in traced if not t.poly.is_zero])
    cert, _note = engine.certify(
        target.poly, target.source.kind, target.source.key,
        target.source.provenance,
    )
    pos = rng.randrange(len(cert.combo))
    coeff, gi = cert.combo[pos]
    one = PolyElement.constant(TruncSeries.one(coeff.precision), inst.m)
    bad_combo = tuple(
        (c + one, g) if n == pos else (c, g)
        for n, (c, g) in enumerate(cert.combo)
    )
    bad_cert = Certificate(
        cert.target, bad_combo, cert.residual, cert.method,
        cert.provenance + "+unit", cert.precision,
    )
    ok, _ = check_certificate(bad_cert, gens)
    checks.append(
        {
            "name": f"control:certificate-coefficient[{cert.provenance}]",
            "passed": not ok,
            "effective_precision": precision,
            "conclusive": True,
        }
    )

    bad_residual = Certificate(
        cert.target, cert.combo, cert.residual + one, cert.method,
        cert.provenance + "+residual", cert.precision,
    )
    ok, _ = check_certificate(bad_residual, gens)
    checks.append(
        {
            "name": f"control:certificate-residual[{cert.provenance}]",
            "passed": not ok,
            "effective_precision": precision,
            "conclusive": True,
        }
    )

    body["checks"] = checks
    body["notes"] = []
    body["stages"] = {}
    body["config"] = smoke.body["config"]
    verdict = "PASS" if all(c["passed"] for c in checks) else "FAIL"
    body["verdict"] = verdict
    return Report(body, verdict)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "selftest":
            report = run_selftest(args.seed, args.degree_bound)
        else:
            cfg = _load_config(args, args.command)
            report = run_pipeline(cfg)
    except (ParseError, ValidationError) as exc:
        print(f"emverify: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"emverify: {exc}", file=sys.stderr)
        return 3
    return _emit(report, args.format)


if __name__ == "__main__":
    sys.exit(main())
