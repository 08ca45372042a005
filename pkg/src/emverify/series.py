"""Truncated formal power series in t over exact rationals.

A :class:`TruncSeries` is a power series known modulo ``t**precision``:
the stored coefficients are exact `fractions.Fraction` values and every
arithmetic result carries the precision it is actually valid to.  Addition
and multiplication keep the minimum of the operand precisions; exact
division by a series of valuation v loses v coefficients.

A series whose stored coefficients all vanish is only *provisionally*
zero: its ``valuation()`` is None and callers that assert zeroness must
judge the remaining precision against their margin policy.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

Rational = Fraction

__all__ = [
    "Rational",
    "TruncSeries",
    "DivisorZeroModPrecision",
    "ValuationError",
]


class DivisorZeroModPrecision(ArithmeticError):
    """Division by a series that is zero modulo its precision."""


class ValuationError(ArithmeticError):
    """Exact division impossible: numerator valuation below divisor valuation."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"coefficient must be rational, got {type(value).__name__}")


_ZERO = Fraction(0)
_SPARSE_CUTOFF = 256  # nnz(a)*nnz(b) below this: schoolbook beats packing


def _convolve_packed(a: list[int], b: list[int], n: int) -> list[int]:
    # Kronecker substitution: one big-int product performs the whole
    # truncated convolution.  Slot width must bound |sum a_i b_{k-i}|.
    max_a = max(abs(x) for x in a)
    max_b = max(abs(x) for x in b)
    bits = (n * max_a * max_b).bit_length() + 2
    xa = 0
    for i in range(len(a) - 1, -1, -1):
        xa = (xa << bits) | 0
        xa += a[i]
    xb = 0
    for i in range(len(b) - 1, -1, -1):
        xb = (xb << bits) | 0
        xb += b[i]
    prod = xa * xb
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    out = []
    for _ in range(n):
        digit = prod & mask
        if digit >= half:
            digit -= 1 << bits
        out.append(digit)
        prod = (prod - digit) >> bits
    return out


class TruncSeries:
    """A power series in t over Q, known modulo ``t**precision``."""

    __slots__ = ("coeffs", "precision")

    coeffs: tuple[Fraction, ...]
    precision: int

    def __init__(self, coeffs, precision: int):
        if precision < 1:
            raise ValueError(f"precision must be >= 1, got {precision}")
        cs = [_as_fraction(c) for c in coeffs[:precision]]
        cs.extend([_ZERO] * (precision - len(cs)))
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "precision", precision)

    def __setattr__(self, name, value):
        raise AttributeError("TruncSeries is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, precision: int) -> TruncSeries:
        return cls((), precision)

    @classmethod
    def one(cls, precision: int) -> TruncSeries:
        return cls((Fraction(1),), precision)

    @classmethod
    def constant(cls, value, precision: int) -> TruncSeries:
        return cls((_as_fraction(value),), precision)

    @classmethod
    def t_power(cls, degree: int, precision: int) -> TruncSeries:
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        coeffs = [_ZERO] * min(degree, precision)
        if degree < precision:
            coeffs.append(Fraction(1))
        return cls(coeffs, precision)

    @classmethod
    def from_terms(cls, terms, precision: int) -> TruncSeries:
        """Build from (degree, coefficient) pairs or a degree->coefficient map."""
        items = terms.items() if hasattr(terms, "items") else terms
        coeffs = [_ZERO] * precision
        for deg, c in items:
            if deg < 0:
                raise ValueError("degree must be nonnegative")
            if deg < precision:
                coeffs[deg] += _as_fraction(c)
        return cls(coeffs, precision)

    # -- basic queries ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        """True when all stored coefficients vanish (zero mod t^precision)."""
        return not any(self.coeffs)

    def valuation(self) -> int | None:
        """Least index with a nonzero coefficient; None when zero mod t^N."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs[0]

    def is_even(self) -> bool:
        """True when every odd-degree coefficient vanishes."""
        return not any(self.coeffs[1::2])

    def is_odd(self) -> bool:
        return not any(self.coeffs[0::2])

    def nonzero_terms(self) -> list[tuple[int, Fraction]]:
        return [(i, c) for i, c in enumerate(self.coeffs) if c]

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: TruncSeries) -> TruncSeries:
        n = min(self.precision, other.precision)
        return TruncSeries(
            [self.coeffs[i] + other.coeffs[i] for i in range(n)], n
        )

    def __sub__(self, other: TruncSeries) -> TruncSeries:
        n = min(self.precision, other.precision)
        return TruncSeries(
            [self.coeffs[i] - other.coeffs[i] for i in range(n)], n
        )

    def __neg__(self) -> TruncSeries:
        return TruncSeries([-c for c in self.coeffs], self.precision)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return self._mul_series(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, value) -> TruncSeries:
        c = _as_fraction(value)
        if not c:
            return TruncSeries.zero(self.precision)
        return TruncSeries([c * x for x in self.coeffs], self.precision)

    def _mul_series(self, other: TruncSeries) -> TruncSeries:
        n = min(self.precision, other.precision)
        a = self.nonzero_terms()
        b = other.nonzero_terms()
        if not a or not b:
            return TruncSeries.zero(n)
        if len(a) * len(b) <= _SPARSE_CUTOFF:
            out = [_ZERO] * n
            for i, ca in a:
                if i >= n:
                    break
                for j, cb in b:
                    if i + j >= n:
                        break
                    out[i + j] += ca * cb
            return TruncSeries(out, n)
        da = lcm(*(c.denominator for _, c in a))
        db = lcm(*(c.denominator for _, c in b))
        ia = [int(c * da) for c in self.coeffs[:n]]
        ib = [int(c * db) for c in other.coeffs[:n]]
        dd = da * db
        return TruncSeries(
            [Fraction(v, dd) for v in _convolve_packed(ia, ib, n)], n
        )

    def __pow__(self, exponent: int) -> TruncSeries:
        if exponent < 0:
            raise ValueError("exponent must be nonnegative")
        result = TruncSeries.one(self.precision)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- conjugation and parity ---------------------------------------------

    def substitute_neg_t(self) -> TruncSeries:
        """Image under t -> -t: odd-degree coefficients change sign."""
        return TruncSeries(
            [-c if i % 2 else c for i, c in enumerate(self.coeffs)],
            self.precision,
        )

    def parity_split(self) -> tuple[TruncSeries, TruncSeries]:
        """Split into (even part, odd part); their sum is the series."""
        even = [c if i % 2 == 0 else _ZERO for i, c in enumerate(self.coeffs)]
        odd = [c if i % 2 == 1 else _ZERO for i, c in enumerate(self.coeffs)]
        return TruncSeries(even, self.precision), TruncSeries(odd, self.precision)

    # -- division ---------------------------------------------------------

    def shift_down(self, k: int) -> TruncSeries:
        """Exact division by t^k; requires valuation >= k.  Loses k precision."""
        if k == 0:
            return self
        if any(self.coeffs[:k]):
            raise ValuationError(f"series not divisible by t^{k}")
        if self.precision - k < 1:
            raise DivisorZeroModPrecision(
                f"no precision left after dividing by t^{k}"
            )
        return TruncSeries(self.coeffs[k:], self.precision - k)

    def reciprocal(self) -> TruncSeries:
        """Multiplicative inverse; requires a unit (nonzero constant term)."""
        u0 = self.coeffs[0]
        if not u0:
            raise ValuationError("cannot invert a series with zero constant term")
        n = self.precision
        inv0 = 1 / u0
        out = [inv0] + [_ZERO] * (n - 1)
        for k in range(1, n):
            acc = _ZERO
            for j in range(1, k + 1):
                cj = self.coeffs[j]
                if cj:
                    acc += cj * out[k - j]
            out[k] = -acc * inv0
        return TruncSeries(out, n)

    def div_exact(self, den: TruncSeries) -> TruncSeries:
        """Exact quotient self/den.

        Requires valuation(den) defined and valuation(self) >= valuation(den);
        the quotient q satisfies q*den = self and is known modulo
        ``t**(min(precisions) - valuation(den))``.
        """
        v = den.valuation()
        if v is None:
            raise DivisorZeroModPrecision(
                f"divisor is zero mod t^{den.precision}"
            )
        n = min(self.precision, den.precision) - v
        if n < 1:
            raise DivisorZeroModPrecision(
                "quotient would have no remaining precision"
            )
        nv = self.valuation()
        if nv is not None and nv < v:
            raise ValuationError(
                f"numerator valuation {nv} below divisor valuation {v}"
            )
        num = TruncSeries(self.coeffs[v : v + n], n)
        unit = TruncSeries(den.coeffs[v : v + n], n)
        if num.is_zero:
            return TruncSeries.zero(n)
        return num * unit.reciprocal()

    def truncate(self, precision: int) -> TruncSeries:
        if precision > self.precision:
            raise ValueError("cannot extend precision")
        return TruncSeries(self.coeffs[:precision], precision)

    # -- comparison and rendering ---------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.precision == other.precision and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.coeffs, self.precision))

    def __repr__(self) -> str:
        return f"TruncSeries({self!s}, mod t^{self.precision})"

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                body = str(c)
            else:
                tp = "t" if i == 1 else f"t^{i}"
                if c == 1:
                    body = tp
                elif c == -1:
                    body = f"-{tp}"
                else:
                    body = f"{c}*{tp}"
            if parts and not body.startswith("-"):
                parts.append(f"+ {body}")
            elif parts:
                parts.append(f"- {body[1:]}")
            else:
                parts.append(body)
        return " ".join(parts) if parts else "0"
