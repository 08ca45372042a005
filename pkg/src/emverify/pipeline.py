"""End-to-end orchestration: input parsing, staged run, report assembly.

A report is a plain dict rendered as JSON with sorted keys, built only
from deterministic data (no timestamps, no machine state), so identical
inputs produce byte-identical reports.  Every zero-assertion made along
the way lands in the flat ``checks`` ledger with the effective
t-precision at which it was established; the verdict lattice is

    FAIL            some identity is nonzero,
    INCONCLUSIVE    all identities hold but one was established below
                    the configured margin (or precision ran out),
    PASS            everything holds with margin to spare.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from . import __version__ as _version
from .dvr import PrecisionExhausted
from .ideals import (
    Certifier,
    CertificateNotFound,
    ProblemInstance,
    check_certificate,
    complete_intersection_generators,
    generators_of_P,
    reduce_to_odd,
    traced_generators,
)
from .relations import (
    build_element_set,
    build_matrix,
    closed_form_relation_families,
    expected_family_count,
    kernel_basis,
    modules_equal,
    reference_discrepancies_m3,
    verify_relation,
)
from .ring import SquaredIdeal, is_zero_mod
from .series import TruncSeries

__all__ = [
    "ParseError",
    "ValidationError",
    "RunConfig",
    "Report",
    "parse_input",
    "run_pipeline",
    "EXIT_CODES",
]

EXIT_CODES = {"PASS": 0, "FAIL": 1, "INCONCLUSIVE": 2}

MODES = ("check", "relations", "pgens", "certify")


class ParseError(Exception):
    """Malformed input document; message carries line diagnostics."""


class ValidationError(Exception):
    """Well-formed input with inadmissible values."""


@dataclass(frozen=True)
class RunConfig:
    m: int
    f_terms: tuple[tuple[tuple[int, Fraction], ...], ...]
    precision: int = 64
    margin: int = 16
    oracle: bool | None = None  # None: run the span comparison when m <= 3
    mode: str = "check"
    degree_bound: int = 3

    def series(self) -> list[TruncSeries]:
        return [
            TruncSeries.from_terms(dict(terms), self.precision)
            for terms in self.f_terms
        ]


_RATIONAL = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def _parse_rational(tok: str, lineno: int) -> Fraction:
    if not _RATIONAL.match(tok):
        raise ParseError(
            f"line {lineno}: {tok!r} is not an integer or p/q rational"
        )
    return Fraction(tok)


def parse_input(text: str) -> RunConfig:
    """Parse the line-oriented input document.

    Format: ``m <int>``, ``precision <int>``, ``margin <int>``, then one
    ``f<i> <deg>:<rational> ...`` line per series.  Blank lines and lines
    starting with ``#`` are ignored.
    """
    header: dict[str, int] = {}
    f_lines: dict[int, tuple[tuple[int, Fraction], ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        key = fields[0]
        if key in ("m", "precision", "margin"):
            if key in header:
                raise ParseError(f"line {lineno}: duplicate {key!r} line")
            if len(fields) != 2 or not re.match(r"^\d+$", fields[1]):
                raise ParseError(
                    f"line {lineno}: expected '{key} <positive int>'"
                )
            header[key] = int(fields[1])
        elif re.match(r"^f\d+$", key):
            index = int(key[1:])
            if index in f_lines:
                raise ValidationError(f"line {lineno}: duplicate series {key}")
            if len(fields) < 2:
                raise ValidationError(
                    f"line {lineno}: series {key} lists no coefficients"
                )
            terms = []
            for tok in fields[1:]:
                if ":" not in tok:
                    raise ParseError(
                        f"line {lineno}: expected <deg>:<rational>, got {tok!r}"
                    )
                dtok, ctok = tok.split(":", 1)
                if not re.match(r"^\d+$", dtok):
                    raise ParseError(
                        f"line {lineno}: degree {dtok!r} is not a "
                        "nonnegative integer"
                    )
                terms.append((int(dtok), _parse_rational(ctok, lineno)))
            f_lines[index] = tuple(terms)
        else:
            raise ParseError(f"line {lineno}: unrecognized line {raw!r}")
    for key in ("m", "precision", "margin"):
        if key not in header:
            raise ParseError(f"missing {key!r} line")
    m = header["m"]
    if m < 2:
        raise ValidationError(f"m must be at least 2, got {m}")
    if header["margin"] < 1:
        raise ValidationError("margin must be positive")
    if header["precision"] <= header["margin"]:
        raise ValidationError(
            f"precision {header['precision']} must exceed margin "
            f"{header['margin']}"
        )
    missing = [i for i in range(1, m + 1) if i not in f_lines]
    if missing:
        raise ValidationError(
            f"missing series lines: {', '.join(f'f{i}' for i in missing)}"
        )
    extra = [i for i in f_lines if i < 1 or i > m]
    if extra:
        raise ValidationError(
            f"series index out of range for m={m}: "
            f"{', '.join(f'f{i}' for i in sorted(extra))}"
        )
    for i in range(1, m + 1):
        degs = [d for d, _ in f_lines[i]]
        if len(degs) != len(set(degs)):
            raise ValidationError(f"series f{i} repeats a degree")
        if any(d == 0 and c for d, c in f_lines[i]):
            raise ValidationError(
                f"series f{i} has a nonzero constant term; the "
                "parametrization requires f_i(0) = 0"
            )
    return RunConfig(
        m=m,
        f_terms=tuple(f_lines[i] for i in range(1, m + 1)),
        precision=header["precision"],
        margin=header["margin"],
    )


# ---------------------------------------------------------------------------
# Report assembly
# ---------------------------------------------------------------------------


@dataclass
class Report:
    body: dict
    verdict: str

    def to_json(self) -> str:
        return json.dumps(self.body, sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        return _render_text(self.body)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]


class _Builder:
    def __init__(self, margin: int):
        self.margin = margin
        self.checks: list[dict] = []
        self.notes: list[dict] = []
        self.stages: dict = {}

    def check(
        self, name: str, passed: bool, precision: int, soft: bool = False
    ) -> dict:
        # soft: a derived comparison rather than a zero-identity; a
        # negative outcome below the margin is inconclusive, not a failure
        entry = {
            "name": name,
            "passed": bool(passed),
            "effective_precision": int(precision),
            "conclusive": bool(precision >= self.margin),
        }
        if soft:
            entry["soft"] = True
        self.checks.append(entry)
        return entry

    def verdict(self) -> str:
        for c in self.checks:
            if not c["passed"] and (c["conclusive"] or not c.get("soft")):
                return "FAIL"
        if any(not c["conclusive"] or not c["passed"] for c in self.checks):
            return "INCONCLUSIVE"
        return "PASS"


_CONVENTIONS = {
    "element_order": (
        "diagonal elements 4*x_i*f_i for i = 1..m, then the mixed "
        "elements 2*x_i*f_j + 2*x_j*f_i over pairs (i, j), i < j, in "
        "descending lexicographic order"
    ),
    "relation_vectors": (
        "alpha_e is stored canonically as F_0 + sum_j F_j x_j; matrix "
        "column block of element e holds the canonical coefficients of "
        "e, e*x_1, ..., e*x_m"
    ),
    "p_generator_order": (
        "x_1*g_i - x_i for i = 2..m, then x_i*x_j - f_i*f_j ascending "
        "lexicographic for i < j, then x_i^2 - f_i^2 for i = 1..m"
    ),
    "renumbering": (
        "variables are renumbered so the first odd part has minimal "
        "valuation; perm[k] is the 1-based input index at working "
        "position k"
    ),
}


def run_pipeline(cfg: RunConfig) -> Report:
    """Execute the staged verification and assemble the report."""
    if cfg.mode not in MODES:
        raise ValidationError(f"unknown mode {cfg.mode!r}")
    b = _Builder(cfg.margin)
    body = {
        "tool": {"name": "emverify", "version": _version},
        "config": {
            "m": cfg.m,
            "precision": cfg.precision,
            "margin": cfg.margin,
            "mode": cfg.mode,
            "oracle": cfg.oracle if cfg.oracle is not None else cfg.m <= 3,
            "degree_bound": cfg.degree_bound,
            "series": [
                str(TruncSeries.from_terms(dict(t), cfg.precision))
                for t in cfg.f_terms
            ],
        },
        "conventions": _CONVENTIONS,
    }
    try:
        inst = reduce_to_odd(cfg.series())
        _run_stages(cfg, inst, b)
    except PrecisionExhausted as exc:
        b.notes.append(
            {
                "code": "PRECISION_EXHAUSTED",
                "detail": str(exc),
                "guidance": "raise the precision N and rerun",
            }
        )
        b.check("pipeline-completed", True, 0)
    body["stages"] = b.stages
    body["notes"] = b.notes
    body["checks"] = b.checks
    verdict = b.verdict()
    body["verdict"] = verdict
    return Report(body, verdict)


def _reduction_stage(inst: ProblemInstance, b: _Builder) -> None:
    stage = {
        "degenerate": inst.degenerate,
        "even_parts": [str(s) for s in inst.even_parts],
    }
    if not inst.degenerate:
        stage["perm"] = [p + 1 for p in inst.perm]
        stage["odd_series"] = [str(s) for s in inst.odd_fs]
        stage["gs"] = [str(g) for g in inst.gs]
        stage["lead_valuation"] = inst.odd_fs[0].valuation()
    b.stages["reduction"] = stage


def _pgens_stage(inst: ProblemInstance, b: _Builder) -> list:
    gens = generators_of_P(inst)
    items = []
    for g in gens:
        plus = g.poly.substitute_x(inst.odd_fs)
        minus = g.poly.substitute_x([-f for f in inst.odd_fs])
        ok = plus.is_zero and minus.is_zero
        prec = min(plus.precision, minus.precision)
        b.check(f"pgen-membership:{g.label}", ok, prec)
        items.append(
            {
                "label": g.label,
                "expr": str(g.poly),
                "in_S": g.poly.in_S(),
                "membership_precision": prec,
            }
        )
        b.check(f"pgen-in-S:{g.label}", g.poly.in_S(), inst.precision)
    b.stages["p_generators"] = {"count": len(items), "items": items}
    return gens


def _relations_stages(
    cfg: RunConfig, inst: ProblemInstance, b: _Builder, with_entries: bool
):
    es = build_element_set(inst.odd_fs)
    matrix = build_matrix(es, inst.odd_fs)
    kb = kernel_basis(matrix)
    stage = {
        "rows": matrix.nrows,
        "cols": matrix.ncols,
        "rank": kb.rank,
        "pivot_columns": [c + 1 for c in kb.pivot_columns],
    }
    if with_entries:
        stage["entries"] = [
            [str(e) for e in row] for row in matrix.entries
        ]
    b.stages["matrix"] = stage
    matrix_prec = min(min(s.precision for s in row) for row in matrix.entries)
    b.check("matrix-rank-is-m-plus-1", kb.rank == inst.m + 1, matrix_prec)
    expected = expected_family_count(inst.m)
    b.check(
        "kernel-relation-count",
        len(kb.relations) == expected,
        matrix_prec,
    )
    if inst.m == 3:
        for note in reference_discrepancies_m3(matrix, inst.odd_fs):
            b.notes.append(note)

    def verify_all(tag: str, rels) -> list[dict]:
        items = []
        for rel in rels:
            ok, prec = verify_relation(rel, es, inst.odd_fs)
            b.check(f"{tag}:{rel.provenance}", ok, prec)
            items.append(
                {
                    "provenance": rel.provenance,
                    "passed": ok,
                    "effective_precision": prec,
                }
            )
        return items

    b.stages["kernel_relations"] = {
        "count": len(kb.relations),
        "items": verify_all("relation", kb.relations),
    }
    fams = closed_form_relation_families(inst.odd_fs, inst.gs)
    b.check(
        "closed-form-family-count",
        len(fams) == expected,
        inst.precision,
    )
    b.stages["closed_form_relations"] = {
        "count": len(fams),
        "expected_count": expected,
        "items": verify_all("family", fams),
    }
    return es, kb, fams


def _oracle_stage(cfg: RunConfig, inst, b: _Builder, kb, fams) -> None:
    run_it = cfg.oracle if cfg.oracle is not None else inst.m <= 3
    if not run_it:
        b.stages["oracle"] = {"ran": False}
        return
    equal, prec = modules_equal(kb.relations, fams)
    # a kernel vector only approximates an exact relation to depth
    # precision - elimination loss; the span comparison is honest there
    prec = max(0, prec - kb.max_pivot_valuation)
    b.check("oracle:modules-equal", equal, prec, soft=True)
    b.stages["oracle"] = {"ran": True, "modules_equal": equal}


def _certificates_stage(
    cfg: RunConfig, inst: ProblemInstance, b: _Builder, gens,
    with_membership: bool,
) -> None:
    traced = traced_generators(inst)
    if with_membership:
        items = []
        for t in traced:
            src = t.source
            in1 = is_zero_mod(src.poly, inst.odd_fs, SquaredIdeal.Q1)
            in2 = is_zero_mod(src.poly, inst.odd_fs, SquaredIdeal.Q2)
            b.check(
                f"intersection-membership:{src.provenance}",
                in1 and in2,
                src.poly.precision,
            )
            b.check(
                f"traced-in-S:{src.provenance}",
                t.poly.in_S(),
                t.poly.precision,
            )
            items.append(
                {
                    "provenance": src.provenance,
                    "in_Q1_squared": in1,
                    "in_Q2_squared": in2,
                    "trace_in_S": t.poly.in_S(),
                }
            )
        b.stages["intersection_generators"] = {
            "count": len(items),
            "items": items,
        }
    engine = Certifier(inst, gens, degree_bound=cfg.degree_bound)
    items = []
    methods = {"closed-form": 0, "solver": 0, "trivial": 0}
    for t in traced:
        src = t.source
        try:
            cert, note = engine.certify(
                t.poly, src.kind, src.key, src.provenance
            )
        except CertificateNotFound as exc:
            b.check(f"certificate:{src.provenance}", False, 0)
            items.append(
                {
                    "provenance": src.provenance,
                    "passed": False,
                    "error": str(exc),
                    "residual": str(exc.residual) if exc.residual else None,
                }
            )
            continue
        if note is not None:
            b.notes.append(note)
        ok, prec = check_certificate(cert, gens)
        methods[cert.method] += 1
        b.check(f"certificate:{src.provenance}", ok, prec)
        items.append(
            {
                "provenance": src.provenance,
                "method": cert.method,
                "passed": ok,
                "effective_precision": prec,
                "combo": [
                    {"generator": gens[gi].label, "coefficient": str(c)}
                    for c, gi in cert.combo
                ],
                "residual": str(cert.residual),
            }
        )
    b.stages["certificates"] = {
        "count": len(items),
        "methods": methods,
        "items": items,
    }


def _degenerate_stage(cfg: RunConfig, inst: ProblemInstance, b: _Builder):
    gens = complete_intersection_generators(inst)
    b.stages["p_generators"] = {
        "count": len(gens),
        "items": [
            {"label": g.label, "expr": str(g.poly), "in_S": g.poly.in_S()}
            for g in gens
        ],
    }
    for g in gens:
        b.check(f"pgen-in-S:{g.label}", g.poly.in_S(), inst.precision)
        b.check(f"pgen-in-mS:{g.label}", g.poly.in_mS(), inst.precision)
    if cfg.mode in ("pgens", "relations"):
        return
    engine = Certifier(inst, gens, degree_bound=cfg.degree_bound)
    items = []
    for i in range(inst.m):
        for j in range(i, inst.m):
            name = f"p{i + 1}*p{j + 1}"
            target = gens[i].poly * gens[j].poly
            try:
                cert = engine.solve(target, name)
            except CertificateNotFound as exc:
                b.check(f"square-certificate:{name}", False, 0)
                items.append(
                    {"provenance": name, "passed": False, "error": str(exc)}
                )
                continue
            ok, prec = check_certificate(cert, gens)
            b.check(f"square-certificate:{name}", ok, prec)
            items.append(
                {
                    "provenance": name,
                    "passed": ok,
                    "effective_precision": prec,
                    "combo": [
                        {"generator": gens[gi].label, "coefficient": str(c)}
                        for c, gi in cert.combo
                    ],
                }
            )
    b.stages["certificates"] = {
        "count": len(items),
        "branch": "complete-intersection (all inputs even): certifying "
        "every pairwise product of the linear generators",
        "items": items,
    }


def _run_stages(cfg: RunConfig, inst: ProblemInstance, b: _Builder) -> None:
    _reduction_stage(inst, b)
    if inst.degenerate:
        _degenerate_stage(cfg, inst, b)
        return
    gens = None
    if cfg.mode in ("check", "certify", "pgens"):
        gens = _pgens_stage(inst, b)
    if cfg.mode in ("check", "relations"):
        es, kb, fams = _relations_stages(
            cfg, inst, b, with_entries=cfg.mode == "relations"
        )
        if cfg.mode == "check":
            _oracle_stage(cfg, inst, b, kb, fams)
    if cfg.mode in ("check", "certify"):
        _certificates_stage(cfg, inst, b, gens, with_membership=True)


# ---------------------------------------------------------------------------
# Text rendering
# ---------------------------------------------------------------------------


def _render_text(body: dict) -> str:
    lines = [f"emverify {body['tool']['version']} — verdict: {body['verdict']}"]
    cfg = body["config"]
    lines.append(
        f"  instance: m={cfg['m']} precision={cfg['precision']} "
        f"margin={cfg['margin']} mode={cfg['mode']}"
    )
    for i, s in enumerate(cfg["series"], start=1):
        lines.append(f"    f{i} = {s}")
    stages = body["stages"]
    red = stages.get("reduction")
    if red:
        if red["degenerate"]:
            lines.append(
                "  reduction: all series even — complete-intersection branch"
            )
        else:
            lines.append(
                f"  reduction: perm={red['perm']} "
                f"lead valuation {red['lead_valuation']}"
            )
    if "p_generators" in stages:
        lines.append(f"  P generators: {stages['p_generators']['count']}")
    if "matrix" in stages:
        mt = stages["matrix"]
        lines.append(f"  matrix: {mt['rows']}x{mt['cols']}, rank {mt['rank']}")
    for key, label in (
        ("kernel_relations", "kernel relations"),
        ("closed_form_relations", "closed-form relations"),
    ):
        if key in stages:
            items = stages[key]["items"]
            good = sum(1 for it in items if it["passed"])
            lines.append(f"  {label}: {good}/{len(items)} verified")
    if stages.get("oracle", {}).get("ran"):
        lines.append(
            f"  oracle: modules equal = {stages['oracle']['modules_equal']}"
        )
    if "intersection_generators" in stages:
        items = stages["intersection_generators"]["items"]
        good = sum(
            1 for it in items if it["in_Q1_squared"] and it["in_Q2_squared"]
        )
        lines.append(
            f"  intersection generators: {good}/{len(items)} in both "
            "squared ideals"
        )
    if "certificates" in stages:
        st = stages["certificates"]
        items = st["items"]
        good = sum(1 for it in items if it.get("passed"))
        extra = ""
        if "methods" in st:
            extra = (
                f" (closed-form {st['methods']['closed-form']}, "
                f"solver {st['methods']['solver']})"
            )
        lines.append(f"  certificates: {good}/{len(items)} verified{extra}")
    notes = body["notes"]
    if notes:
        lines.append(f"  notes: {len(notes)}")
        for n in notes:
            where = n.get("where", n.get("detail", ""))
            lines.append(f"    [{n['code']}] {where}")
    checks = body["checks"]
    failed = [c for c in checks if not c["passed"]]
    thin = [c for c in checks if c["passed"] and not c["conclusive"]]
    lines.append(
        f"  checks: {len(checks) - len(failed)}/{len(checks)} passed, "
        f"{len(thin)} below margin"
    )
    for c in failed:
        lines.append(f"    FAILED {c['name']}")
    for c in thin:
        lines.append(
            f"    INCONCLUSIVE {c['name']} "
            f"(precision {c['effective_precision']})"
        )
    return "\n".join(lines) + "\n"
