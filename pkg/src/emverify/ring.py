"""Polynomials in x_1..x_m over truncated series, and canonical forms.

Elements of the ambient ring R = k[[t, x_1..x_m]] that the verifier ever
touches are polynomial in the x variables, so a :class:`PolyElement` is a
finite map from exponent vectors to :class:`TruncSeries` coefficients.

Modulo either squared parametrization ideal the monomial rewriting

    x_i^2   ->  2*s*f_i*x_i - f_i^2
    x_i*x_j ->  s*f_j*x_i + s*f_i*x_j - f_i*f_j      (i != j)

(with s = +1 for Q1^2 and s = -1 for Q2^2, valid once the f_i are odd)
terminates in the unique canonical representative F_0 + sum_i F_i x_i,
held as a :class:`CanonicalClass`.

The averaging map fixing the even subring is ``trace``: since it fixes
every x_i, it acts coefficientwise as the even-part projection.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .series import TruncSeries

__all__ = [
    "PolyElement",
    "CanonicalClass",
    "SquaredIdeal",
    "normal_form",
    "is_zero_mod",
]


class SquaredIdeal(enum.Enum):
    """Which conjugate squared ideal a canonical form is taken modulo.

    The enum value is the sign s carried by the rewriting rules: the
    second parametrization is the t -> -t conjugate, which for odd f_i
    amounts to f_i -> -f_i.
    """

    Q1 = 1
    Q2 = -1


class PolyElement:
    """Finite x-polynomial with truncated-series coefficients.

    `precision` is the t-precision the element is known to as a whole; it
    is the running minimum over every coefficient that entered the
    computation, so a zero element still remembers how far its zeroness
    is established.
    """

    __slots__ = ("nvars", "terms", "precision")

    def __init__(self, nvars: int, terms=None, precision: int | None = None):
        object.__setattr__(self, "nvars", nvars)
        clean: dict[tuple[int, ...], TruncSeries] = {}
        prec = precision
        if terms:
            items = terms.items() if hasattr(terms, "items") else terms
            for exps, series in items:
                exps = tuple(exps)
                if len(exps) != nvars:
                    raise ValueError(
                        f"exponent vector {exps} has wrong length (nvars={nvars})"
                    )
                prev = clean.get(exps)
                series = series if prev is None else prev + series
                clean[exps] = series
            for exps in [e for e, s in clean.items() if s.is_zero]:
                s = clean.pop(exps)
                prec = s.precision if prec is None else min(prec, s.precision)
        for s in clean.values():
            prec = s.precision if prec is None else min(prec, s.precision)
        if prec is None:
            raise ValueError("zero PolyElement needs an explicit precision")
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "precision", prec)

    def __setattr__(self, name, value):
        raise AttributeError("PolyElement is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, precision: int) -> PolyElement:
        return cls(nvars, None, precision)

    @classmethod
    def constant(cls, series: TruncSeries, nvars: int) -> PolyElement:
        return cls(nvars, {(0,) * nvars: series})

    @classmethod
    def variable(cls, index: int, nvars: int, precision: int) -> PolyElement:
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {exps: TruncSeries.one(precision)})

    @classmethod
    def monomial(cls, exps, series: TruncSeries) -> PolyElement:
        exps = tuple(exps)
        return cls(len(exps), {exps: series})

    # -- queries ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def coefficient(self, exps) -> TruncSeries:
        return self.terms.get(tuple(exps), TruncSeries.zero(self.precision))

    def sorted_terms(self) -> list[tuple[tuple[int, ...], TruncSeries]]:
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: PolyElement) -> PolyElement:
        self._check_compatible(other)
        merged = dict(self.terms)
        items = list(merged.items()) + list(other.terms.items())
        return PolyElement(
            self.nvars, items, min(self.precision, other.precision)
        )

    def __sub__(self, other: PolyElement) -> PolyElement:
        return self + (-other)

    def __neg__(self) -> PolyElement:
        return PolyElement(
            self.nvars,
            {e: -s for e, s in self.terms.items()},
            self.precision,
        )

    def __mul__(self, other):
        if isinstance(other, PolyElement):
            self._check_compatible(other)
            out: list = []
            for ea, sa in self.terms.items():
                for eb, sb in other.terms.items():
                    exps = tuple(x + y for x, y in zip(ea, eb))
                    out.append((exps, sa * sb))
            return PolyElement(
                self.nvars, out, min(self.precision, other.precision)
            )
        if isinstance(other, TruncSeries):
            return PolyElement(
                self.nvars,
                {e: s * other for e, s in self.terms.items()},
                min(self.precision, other.precision),
            )
        return PolyElement(
            self.nvars,
            {e: s.scale(other) for e, s in self.terms.items()},
            self.precision,
        )

    def __rmul__(self, other):
        return self * other

    def _check_compatible(self, other: PolyElement) -> None:
        if self.nvars != other.nvars:
            raise ValueError(
                f"mixed variable counts: {self.nvars} vs {other.nvars}"
            )

    def truncate(self, precision: int) -> PolyElement:
        """Cut every coefficient to min(self.precision, precision)."""
        prec = min(self.precision, precision)
        return PolyElement(
            self.nvars,
            {e: s.truncate(min(s.precision, prec)) for e, s in self.terms.items()},
            prec,
        )

    def normalized(self) -> PolyElement:
        """Truncate all coefficients to the element's joint precision.

        An element is only claimed modulo t^precision as a whole, so a
        coefficient kept to higher precision may carry terms beyond the
        honest claim; zero-judgments must happen on the normalized form.
        """
        return self.truncate(self.precision)

    # -- conjugation, trace, substitution -----------------------------------

    def substitute_neg_t(self) -> PolyElement:
        return PolyElement(
            self.nvars,
            {e: s.substitute_neg_t() for e, s in self.terms.items()},
            self.precision,
        )

    def trace(self) -> PolyElement:
        """Average with the t -> -t conjugate: coefficientwise even part."""
        out = {}
        for e, s in self.terms.items():
            even, _ = s.parity_split()
            out[e] = even
        return PolyElement(self.nvars, out, self.precision)

    def substitute_x(self, values) -> TruncSeries:
        """Evaluate at x_i = values[i] (series substitution, exact)."""
        values = list(values)
        if len(values) != self.nvars:
            raise ValueError("need one substitution value per variable")
        prec = min([self.precision] + [v.precision for v in values])
        acc = TruncSeries.zero(prec)
        for exps, coeff in self.sorted_terms():
            term = coeff
            for i, e in enumerate(exps):
                for _ in range(e):
                    term = term * values[i]
            acc = acc + term
        return acc

    # -- membership in the even subring -----------------------------------

    def in_S(self) -> bool:
        """True when every coefficient is an even series."""
        return all(s.is_even() for s in self.terms.values())

    def in_mS(self) -> bool:
        """Membership in the maximal ideal (t^2, x_1..x_m) of the even subring."""
        if not self.in_S():
            return False
        free = self.terms.get((0,) * self.nvars)
        return free is None or not free.constant_term

    # -- rendering ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyElement):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.precision == other.precision
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, self.precision, frozenset(self.terms.items())))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, series in self.sorted_terms():
            mono = "*".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                for i, e in enumerate(exps)
                if e
            )
            coeff = str(series)
            if " " in coeff or (mono and coeff not in ("1", "-1")):
                coeff = f"({coeff})" if " " in coeff else coeff
            if not mono:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(mono)
            elif coeff == "-1":
                parts.append(f"-{mono}")
            else:
                parts.append(f"{coeff}*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"PolyElement({self!s})"


@dataclass(frozen=True)
class CanonicalClass:
    """Canonical representative F_0 + sum_i F_i x_i of a class mod Q_j^2."""

    basis: SquaredIdeal
    f0: TruncSeries
    fx: tuple[TruncSeries, ...]

    @property
    def nvars(self) -> int:
        return len(self.fx)

    @property
    def is_zero(self) -> bool:
        return self.f0.is_zero and all(s.is_zero for s in self.fx)

    @property
    def precision(self) -> int:
        return min([self.f0.precision] + [s.precision for s in self.fx])

    def components(self) -> list[TruncSeries]:
        return [self.f0, *self.fx]

    def as_poly(self) -> PolyElement:
        m = self.nvars
        terms = {(0,) * m: self.f0}
        for i, s in enumerate(self.fx):
            terms[tuple(1 if j == i else 0 for j in range(m))] = s
        return PolyElement(m, terms, self.precision)

    def __str__(self) -> str:
        return str(self.as_poly())


def _rewrite_pair(i: int, j: int, fs, sign: int, nvars: int) -> PolyElement:
    # image of x_i*x_j under the canonical rewriting (i == j allowed)
    prec = min(f.precision for f in fs)
    xi = PolyElement.variable(i, nvars, prec)
    if i == j:
        return xi * fs[i].scale(2 * sign) - PolyElement.constant(
            fs[i] * fs[i], nvars
        )
    xj = PolyElement.variable(j, nvars, prec)
    return (
        xi * fs[j].scale(sign)
        + xj * fs[i].scale(sign)
        - PolyElement.constant(fs[i] * fs[j], nvars)
    )


def normal_form(
    p: PolyElement, fs, basis: SquaredIdeal = SquaredIdeal.Q1
) -> CanonicalClass:
    """Canonical form of p modulo the chosen squared ideal.

    fs must be the odd parametrizing series (post reduction); rewriting
    consumes the highest-total-degree monomial first (lexicographically
    largest on ties), and terminates because total degree drops strictly.
    """
    fs = tuple(fs)
    m = p.nvars
    if len(fs) != m:
        raise ValueError("need one parametrizing series per variable")
    sign = basis.value
    images: dict[tuple[int, int], PolyElement] = {}
    work = p
    while True:
        candidates = [e for e in work.terms if sum(e) >= 2]
        if not candidates:
            break
        exps = max(candidates, key=lambda e: (sum(e), e))
        coeff = work.terms[exps]
        i = next(k for k, v in enumerate(exps) if v)
        j = i if exps[i] >= 2 else next(
            k for k in range(i + 1, m) if exps[k]
        )
        rest = list(exps)
        rest[i] -= 1
        rest[j] -= 1
        if (i, j) not in images:
            images[i, j] = _rewrite_pair(i, j, fs, sign, m)
        replacement = images[i, j] * coeff
        if any(rest):
            replacement = PolyElement.monomial(
                rest, TruncSeries.one(coeff.precision)
            ) * replacement
        work = PolyElement(
            m,
            [(e, s) for e, s in work.terms.items() if e != exps],
            work.precision,
        ) + replacement
    f0 = work.terms.get((0,) * m, TruncSeries.zero(work.precision))
    fx = []
    for i in range(m):
        key = tuple(1 if k == i else 0 for k in range(m))
        fx.append(work.terms.get(key, TruncSeries.zero(work.precision)))
    return CanonicalClass(basis, f0, tuple(fx))


def is_zero_mod(p: PolyElement, fs, basis: SquaredIdeal) -> bool:
    """Membership of p in the chosen squared ideal (canonical form vanishes)."""
    return normal_form(p.normalized(), fs, basis).is_zero
