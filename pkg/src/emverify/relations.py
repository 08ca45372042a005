"""Relations on the bridging element set over R/Q1^2.

The elements whose relation module controls the intersection of the two
squared ideals are the differences of conjugate quadratic monomials,

    E = { 4*x_i*f_i : i } + { 2*x_i*f_j + 2*x_j*f_i : i < j },

ordered diagonals first and then pairs (i, j) in descending lexicographic
order, so that for m = 3 the pair blocks come as (2,3), (1,3), (1,2).

Each element contributes m+1 matrix columns (the canonical coefficients
of e, e*x_1, ..., e*x_m mod Q1^2); relations among the columns of that
matrix over truncated k[[t]] are exactly the relations on E, and are
computed two independent ways: by column elimination over the valuation
ring (`kernel_basis`) and from the closed-form families
(`closed_form_relation_families`).  `modules_equal` checks the two spans
against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dvr import PrecisionExhausted, echelonize, reduce_against
from .ring import CanonicalClass, PolyElement, SquaredIdeal, normal_form
from .series import TruncSeries

__all__ = [
    "ElementSet",
    "RelationMatrix",
    "RelationVector",
    "KernelBasis",
    "PrecisionExhausted",
    "element_index_pairs",
    "build_element_set",
    "build_matrix",
    "kernel_basis",
    "closed_form_relation_families",
    "expected_family_count",
    "verify_relation",
    "modules_equal",
    "reference_discrepancies_m3",
]


def element_index_pairs(m: int) -> list[tuple[int, int]]:
    """Index pairs of E in canonical order: diagonals, then pairs desc-lex."""
    diag = [(i, i) for i in range(m)]
    off = sorted(
        ((i, j) for i in range(m) for j in range(i + 1, m)), reverse=True
    )
    return diag + off


@dataclass(frozen=True)
class ElementSet:
    """The ordered element set E together with its index bookkeeping."""

    m: int
    pairs: tuple[tuple[int, int], ...]
    elements: tuple[PolyElement, ...]

    def position(self, i: int, j: int) -> int:
        return self.pairs.index((min(i, j), max(i, j)))

    def __len__(self) -> int:
        return len(self.elements)


def build_element_set(fs) -> ElementSet:
    fs = tuple(fs)
    m = len(fs)
    prec = min(f.precision for f in fs)
    pairs = element_index_pairs(m)
    elements = []
    for i, j in pairs:
        xi = PolyElement.variable(i, m, prec)
        if i == j:
            elements.append(xi * fs[i].scale(4))
        else:
            xj = PolyElement.variable(j, m, prec)
            elements.append(xi * fs[j].scale(2) + xj * fs[i].scale(2))
    return ElementSet(m, tuple(pairs), tuple(elements))


@dataclass
class RelationMatrix:
    """Canonical coefficients of {e * x_j} columns, (m+1) rows."""

    m: int
    entries: list[list[TruncSeries]]  # entries[row][col]
    col_labels: list[tuple[int, int]]  # (element position, multiplier 0..m)

    @property
    def nrows(self) -> int:
        return self.m + 1

    @property
    def ncols(self) -> int:
        return len(self.col_labels)

    def column(self, c: int) -> list[TruncSeries]:
        return [self.entries[r][c] for r in range(self.nrows)]


def build_matrix(es: ElementSet, fs) -> RelationMatrix:
    fs = tuple(fs)
    m = es.m
    prec = min(f.precision for f in fs)
    rows: list[list[TruncSeries]] = [[] for _ in range(m + 1)]
    labels = []
    for pos, e in enumerate(es.elements):
        for mult in range(m + 1):
            p = e if mult == 0 else e * PolyElement.variable(mult - 1, m, prec)
            nf = normal_form(p, fs, SquaredIdeal.Q1)
            comps = nf.components()
            for r in range(m + 1):
                rows[r].append(comps[r])
            labels.append((pos, mult))
    return RelationMatrix(m, rows, labels)


@dataclass(frozen=True)
class RelationVector:
    """A relation sum_e alpha_e * E_e = 0 over R/Q1^2.

    family_key is (family number, index tuple) for the closed-form
    families (0-based indices) and None for computed-kernel relations.
    """

    m: int
    alphas: tuple[CanonicalClass, ...]
    provenance: str
    family_key: tuple[int, tuple[int, ...]] | None = None

    @property
    def precision(self) -> int:
        return min(a.precision for a in self.alphas)

    def stacked(self) -> list[TruncSeries]:
        # truncated to the vector's joint precision: the relation is only
        # claimed modulo t^precision as a whole
        prec = self.precision
        out: list[TruncSeries] = []
        for a in self.alphas:
            out.extend(s.truncate(min(s.precision, prec)) for s in a.components())
        return out


@dataclass
class KernelBasis:
    rank: int
    pivot_columns: list[int]
    relations: list[RelationVector]
    # largest pivot valuation met during elimination: a computed relation
    # vector is only guaranteed to approximate an exact relation to depth
    # (its precision) - (this loss)
    max_pivot_valuation: int


def _class_from_column(
    m: int, coeffs: dict[int, TruncSeries], base: int, prec: int
) -> CanonicalClass:
    zero = TruncSeries.zero(prec)
    f0 = coeffs.get(base, zero)
    fx = tuple(coeffs.get(base + 1 + i, zero) for i in range(m))
    return CanonicalClass(SquaredIdeal.Q1, f0, fx)


def kernel_basis(matrix: RelationMatrix) -> KernelBasis:
    """Relation module of the columns, by elimination over truncated k[[t]].

    Every zeroed column yields an explicit relation through the recorded
    transformation; raises PrecisionExhausted when an entire pivot row is
    zero at the working precision (the matrix always has full row rank
    when the leading parametrizing series is nonzero).
    """
    m = matrix.m
    cols = [matrix.column(c) for c in range(matrix.ncols)]
    prec = min(min(s.precision for s in col) for col in cols)
    transform: list[dict[int, TruncSeries]] = [
        {c: TruncSeries.one(prec)} for c in range(matrix.ncols)
    ]
    pivots = echelonize(cols, m + 1, transform, require_full_row_rank=True)
    pivot_cols = sorted(p.col for p in pivots)
    max_loss = max(
        (cols[p.col][p.row].valuation() or 0) for p in pivots
    )
    relations = []
    for c in range(matrix.ncols):
        if c in pivot_cols:
            continue
        if not all(s.is_zero for s in cols[c]):
            raise PrecisionExhausted(
                f"column {c} failed to reduce to zero after elimination"
            )
        col_prec = min(s.precision for s in transform[c].values())
        alphas = tuple(
            _class_from_column(m, transform[c], (m + 1) * pos, col_prec)
            for pos in range(len(matrix.col_labels) // (m + 1))
        )
        relations.append(
            RelationVector(m, alphas, f"kernel-column-{c}")
        )
    return KernelBasis(len(pivots), pivot_cols, relations, max_loss)


# ---------------------------------------------------------------------------
# Closed-form relation families
# ---------------------------------------------------------------------------


def expected_family_count(m: int) -> int:
    return (m - 1) * (m + 1) * (m + 2) // 2


class _FamilyBuilder:
    def __init__(self, fs, gs):
        self.fs = tuple(fs)
        self.gs = tuple(gs)
        self.m = len(fs)
        self.prec = min(
            [f.precision for f in self.fs] + [g.precision for g in self.gs]
        )
        self.pairs = element_index_pairs(self.m)
        self.pos = {pq: n for n, pq in enumerate(self.pairs)}

    def pair(self, i: int, j: int) -> int:
        return self.pos[(min(i, j), max(i, j))]

    def relation(
        self, provenance: str, entries, family_key=None
    ) -> RelationVector:
        zero = TruncSeries.zero(self.prec)
        alphas: list[CanonicalClass] = []
        for n in range(len(self.pairs)):
            f0, fx = entries.get(n, (None, None))
            alphas.append(
                CanonicalClass(
                    SquaredIdeal.Q1,
                    zero if f0 is None else f0,
                    tuple(
                        (fx or {}).get(v, zero) for v in range(self.m)
                    ),
                )
            )
        return RelationVector(self.m, tuple(alphas), provenance, family_key)


def closed_form_relation_families(fs, gs) -> list[RelationVector]:
    """All twelve general-case relation families, instantiated for m vars.

    fs must be odd and renumbered (fs[0] of minimal valuation) and
    gs[i] = fs[i]/fs[0].  For m = 3 this reproduces the twenty-row table;
    the index ranges run over 2..m (1-based) throughout.
    """
    b = _FamilyBuilder(fs, gs)
    m, f, g = b.m, b.fs, b.gs
    one = TruncSeries.one(b.prec)
    f1 = f[0]
    rels: list[RelationVector] = []
    others = range(1, m)

    for i in others:  # family 1
        rels.append(
            b.relation(
                f"family-01[i={i + 1}]",
                {
                    0: (g[i] * g[i], None),
                    i: (one, None),
                    b.pair(0, i): (g[i].scale(-2), None),
                },
                family_key=(1, (i,)),
            )
        )
    for i in others:  # family 2
        rels.append(
            b.relation(
                f"family-02[i={i + 1}]",
                {
                    0: (f1 * g[i], {0: -g[i]}),
                    b.pair(0, i): (-f1, {0: one}),
                },
                family_key=(2, (i,)),
            )
        )
    for i in others:  # family 3
        for j in others:
            if j == i:
                continue
            gij = g[i] * g[j]
            rels.append(
                b.relation(
                    f"family-03[i={i + 1},j={j + 1}]",
                    {
                        0: ((f1 * gij).scale(3), {0: -gij}),
                        b.pair(0, i): (-f[j], {j: one}),
                        b.pair(0, j): (f[i].scale(-2), None),
                    },
                    family_key=(3, (i, j)),
                )
            )
    for i in others:  # family 4
        for j in others:
            if j <= i:
                continue
            gij = g[i] * g[j]
            rels.append(
                b.relation(
                    f"family-04[i={i + 1},j={j + 1}]",
                    {
                        0: ((f1 * gij).scale(2), {0: -gij}),
                        b.pair(0, i): (-f[j], None),
                        b.pair(0, j): (-f[i], None),
                        b.pair(i, j): (None, {0: one}),
                    },
                    family_key=(4, (i, j)),
                )
            )
    for i in others:  # family 5
        for j in others:
            if j <= i:
                continue
            rels.append(
                b.relation(
                    f"family-05[i={i + 1},j={j + 1}]",
                    {
                        0: (g[i] * g[j], None),
                        b.pair(0, i): (-g[j], None),
                        b.pair(0, j): (-g[i], None),
                        b.pair(i, j): (one, None),
                    },
                    family_key=(5, (i, j)),
                )
            )
    for i in others:  # family 6
        for j in others:
            if j == i:
                continue
            gii_j = g[i] * g[i] * g[j]
            rels.append(
                b.relation(
                    f"family-06[i={i + 1},j={j + 1}]",
                    {
                        0: ((f1 * gii_j).scale(4), {0: -gii_j}),
                        b.pair(0, i): ((f1 * g[i] * g[j]).scale(-3), None),
                        b.pair(0, j): (-(f1 * g[i] * g[i]), None),
                        b.pair(i, j): (None, {i: one}),
                    },
                    family_key=(6, (i, j)),
                )
            )
    for i in others:  # family 7
        gii = g[i] * g[i]
        rels.append(
            b.relation(
                f"family-07[i={i + 1}]",
                {
                    0: ((f1 * gii).scale(3), {0: -gii}),
                    b.pair(0, i): (f[i].scale(-3), {i: one}),
                },
                family_key=(7, (i,)),
            )
        )
    for i in others:  # family 8
        rels.append(
            b.relation(
                f"family-08[i={i + 1}]",
                {
                    0: ((f1 * g[i]).scale(2), {0: -g[i], i: one}),
                    b.pair(0, i): (f1.scale(-2), None),
                },
                family_key=(8, (i,)),
            )
        )
    for i in others:  # family 9
        giii = g[i] * g[i] * g[i]
        rels.append(
            b.relation(
                f"family-09[i={i + 1}]",
                {
                    0: ((f1 * giii).scale(4), {0: -giii}),
                    i: (None, {i: one}),
                    b.pair(0, i): ((f1 * g[i] * g[i]).scale(-4), None),
                },
                family_key=(9, (i,)),
            )
        )
    for i in others:  # family 10
        gii = g[i] * g[i]
        rels.append(
            b.relation(
                f"family-10[i={i + 1}]",
                {
                    0: ((f1 * gii).scale(2), {0: -gii}),
                    i: (None, {0: one}),
                    b.pair(0, i): (f[i].scale(-2), None),
                },
                family_key=(10, (i,)),
            )
        )
    for i in others:  # family 11
        for j in others:
            if j == i:
                continue
            gii_j = g[i] * g[i] * g[j]
            rels.append(
                b.relation(
                    f"family-11[i={i + 1},j={j + 1}]",
                    {
                        0: ((f1 * gii_j).scale(4), {0: -gii_j}),
                        i: (None, {j: one}),
                        b.pair(0, i): ((f1 * g[i] * g[j]).scale(-2), None),
                        b.pair(0, j): ((f1 * g[i] * g[i]).scale(-2), None),
                    },
                    family_key=(11, (i, j)),
                )
            )
    for i in others:  # family 12
        for j in others:
            if j <= i:
                continue
            for k in others:
                if k in (i, j):
                    continue
                gijk = g[i] * g[j] * g[k]
                rels.append(
                    b.relation(
                        f"family-12[i={i + 1},j={j + 1},k={k + 1}]",
                        {
                            0: ((f1 * gijk).scale(2), {0: -gijk}),
                            b.pair(i, j): (None, {k: one}),
                            b.pair(k, i): (-(f1 * g[j]), None),
                            b.pair(k, j): (-(f1 * g[i]), None),
                        },
                        family_key=(12, (i, j, k)),
                    )
                )
    return rels


# ---------------------------------------------------------------------------
# Verification and span comparison
# ---------------------------------------------------------------------------


def verify_relation(
    rel: RelationVector, es: ElementSet, fs
) -> tuple[bool, int]:
    """Recompute sum alpha_e * E_e mod Q1^2; returns (is zero, precision)."""
    m = es.m
    prec = min(rel.precision, min(f.precision for f in fs))
    acc = PolyElement.zero(m, prec)
    for alpha, elem in zip(rel.alphas, es.elements):
        if alpha.is_zero:
            continue
        acc = acc + alpha.as_poly() * elem
    nf = normal_form(acc.normalized(), fs, SquaredIdeal.Q1)
    return nf.is_zero, nf.precision


def _spans(
    cands: list[RelationVector],
    basis: list[RelationVector],
    prec: int,
) -> bool:
    def stack(rel):
        return [s.truncate(min(s.precision, prec)) for s in rel.stacked()]

    if not basis:
        return all(all(s.is_zero for s in stack(c)) for c in cands)
    cols = [stack(b) for b in basis]
    nrows = len(cols[0])
    pivots = echelonize(cols, nrows)
    for cand in cands:
        ok, _ = reduce_against(stack(cand), cols, pivots)
        if not ok:
            return False
    return True


def modules_equal(
    a: list[RelationVector], b: list[RelationVector]
) -> tuple[bool, int]:
    """Mutual k[[t]]-span containment of two relation lists.

    Relations are compared as stacked coefficient vectors (the relation
    module is free over k[[t]]); the comparison is conducted at the joint
    precision of both lists, which is returned alongside the answer:
    equality is only claimed mod t^prec.
    """
    prec = min(
        min((r.precision for r in a), default=1),
        min((r.precision for r in b), default=1),
    )
    return _spans(a, b, prec) and _spans(b, a, prec), prec


# ---------------------------------------------------------------------------
# Reference cross-check for the m = 3 matrix
# ---------------------------------------------------------------------------

# Hand-transcribed reference table for the six 4x4 blocks of the m = 3
# matrix, exactly as printed in the source derivation this tool
# cross-checks.  Entry (c, (a, b, e)) stands for c * f1^a * f2^b * f3^e;
# rows are (const, x1, x2, x3), columns the multipliers (1, x1, x2, x3).
# Discrepancies against the recomputed matrix are reported as PAPER_TYPO
# and never silently corrected here.
_Z = (0, (0, 0, 0))
_REFERENCE_BLOCKS_M3: list[tuple[str, list[list[tuple[int, tuple[int, int, int]]]]]] = [
    ("M1", [
        [_Z, (-4, (3, 0, 0)), (-4, (2, 1, 0)), (-4, (2, 0, 1))],
        [(4, (1, 0, 0)), (8, (2, 0, 0)), (4, (1, 1, 0)), (4, (1, 0, 1))],
        [_Z, _Z, (4, (2, 0, 0)), _Z],
        [_Z, _Z, _Z, (4, (2, 0, 0))],
    ]),
    ("M2", [
        [_Z, (-4, (1, 2, 0)), (-4, (0, 3, 0)), (-4, (0, 2, 1))],
        [_Z, (4, (0, 2, 0)), _Z, _Z],
        [(4, (0, 1, 0)), (4, (1, 1, 0)), (8, (0, 2, 0)), (4, (0, 1, 1))],
        [_Z, _Z, _Z, (4, (0, 2, 1))],
    ]),
    ("M3", [
        [_Z, (-4, (1, 0, 2)), (-4, (0, 1, 2)), (-4, (0, 0, 3))],
        [_Z, (4, (0, 0, 2)), _Z, _Z],
        [_Z, _Z, (4, (0, 0, 2)), _Z],
        [(4, (0, 0, 1)), (4, (1, 0, 1)), (4, (0, 1, 1)), (8, (0, 0, 2))],
    ]),
    ("M23", [
        [_Z, (-4, (1, 1, 1)), (-4, (0, 2, 1)), (-4, (0, 1, 2))],
        [_Z, (4, (0, 1, 1)), _Z, _Z],
        [(2, (0, 0, 1)), (2, (1, 0, 1)), (6, (0, 1, 1)), (2, (0, 0, 2))],
        [(2, (0, 1, 0)), (2, (1, 1, 0)), (2, (0, 2, 0)), (6, (0, 1, 1))],
    ]),
    ("M13", [
        [_Z, (-4, (2, 0, 1)), (-4, (1, 1, 1)), (-4, (1, 0, 2))],
        [(2, (0, 0, 1)), (6, (1, 0, 1)), (2, (0, 1, 1)), (2, (0, 0, 2))],
        [_Z, _Z, (4, (1, 0, 1)), _Z],
        [(2, (1, 0, 0)), (2, (2, 0, 0)), (2, (1, 1, 0)), (6, (1, 0, 1))],
    ]),
    ("M12", [
        [_Z, (-4, (2, 1, 0)), (-4, (1, 2, 0)), (-4, (1, 1, 1))],
        [(2, (0, 1, 0)), (6, (1, 1, 0)), (2, (0, 2, 0)), (2, (0, 1, 1))],
        [(2, (1, 0, 0)), (2, (2, 0, 0)), (6, (1, 1, 0)), (2, (1, 0, 1))],
        [_Z, _Z, _Z, (4, (1, 1, 0))],
    ]),
]


def _eval_reference(entry, fs) -> TruncSeries:
    coef, exps = entry
    prec = min(f.precision for f in fs)
    if coef == 0:
        return TruncSeries.zero(prec)
    acc = TruncSeries.constant(coef, prec)
    for f, e in zip(fs, exps):
        for _ in range(e):
            acc = acc * f
    return acc


def reference_discrepancies_m3(matrix: RelationMatrix, fs) -> list[dict]:
    """Entrywise comparison against the transcribed m = 3 reference table.

    Returns one note per mismatching entry, with both values rendered;
    the recomputed matrix is the ground truth.
    """
    if matrix.m != 3:
        raise ValueError("reference table exists only for m = 3")
    notes = []
    for block, (label, rows) in enumerate(_REFERENCE_BLOCKS_M3):
        for mult in range(4):
            for row in range(4):
                col = 4 * block + mult
                expected = _eval_reference(rows[row][mult], fs)
                actual = matrix.entries[row][col]
                if not (actual - expected).is_zero:
                    notes.append(
                        {
                            "code": "PAPER_TYPO",
                            "where": (
                                f"matrix block {label}, column {mult + 1}, "
                                f"row {row + 1} (global column {col + 1})"
                            ),
                            "printed": str(expected),
                            "computed": str(actual),
                        }
                    )
    return notes
