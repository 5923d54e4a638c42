"""Exact arithmetic helpers: rationals, residues, modular inverses.

Everything downstream (Riemann-Roch sums, degree filters, the link solver)
works over exact rationals; floats never enter the pipeline.  ``Rational``
is stdlib :class:`fractions.Fraction`, which already keeps values in lowest
terms with a positive denominator.  This module adds the plain-text wire
format used in tables and JSON ("n/d", or "n" for integers) and the small
amount of modular arithmetic the quotient-singularity code needs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

_RATIONAL_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


class NotInvertibleError(ValueError):
    """Raised when an element has no inverse modulo r."""


class NotCoprimeError(ValueError):
    """Raised when an orientation multiplier shares a factor with the index."""


def format_rational(x: Rational) -> str:
    """Render ``x`` as ``"n/d"`` in lowest terms, or ``"n"`` when integral."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Rational:
    """Parse ``"n/d"`` or ``"n"`` (optional sign on the numerator only)."""
    m = _RATIONAL_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def mod_inverse(x: int, r: int) -> int:
    """Return the inverse of ``x`` modulo ``r``, in ``[0, r)``.

    Raises :class:`NotInvertibleError` when ``gcd(x, r) != 1``.
    """
    if r < 1:
        raise ValueError(f"modulus must be >= 1, got {r}")
    try:
        return pow(x, -1, r)
    except ValueError:
        raise NotInvertibleError(f"{x} is not invertible modulo {r}") from None


def canonical_orientation(a: int, r: int) -> int:
    """Reduce an orientation multiplier to its canonical representative.

    A cyclic quotient point of index ``r`` with multiplier ``a`` is the same
    singularity as the one with multiplier ``r - a``, so the canonical form
    picks the smaller of the two residues: the result lies in
    ``[1, floor(r/2)]`` and is coprime to ``r``.
    """
    if r < 2:
        raise ValueError(f"index must be >= 2, got {r}")
    a = a % r
    if math.gcd(a, r) != 1:
        raise NotCoprimeError(f"multiplier {a} is not coprime to index {r}")
    return min(a, r - a)


@dataclass(frozen=True, slots=True)
class Residue:
    """An integer residue ``value`` modulo ``modulus``, kept in ``[0, modulus)``.

    Arithmetic between residues requires equal moduli; mixing with plain
    integers reduces them first.  This is deliberately minimal — just enough
    for local-index bookkeeping.
    """

    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other: "Residue | int") -> "Residue":
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ValueError(
                    f"modulus mismatch: {self.modulus} vs {other.modulus}"
                )
            return other
        return Residue(other, self.modulus)

    def __add__(self, other: "Residue | int") -> "Residue":
        return Residue(self.value + self._coerce(other).value, self.modulus)

    def __sub__(self, other: "Residue | int") -> "Residue":
        return Residue(self.value - self._coerce(other).value, self.modulus)

    def __mul__(self, other: "Residue | int") -> "Residue":
        return Residue(self.value * self._coerce(other).value, self.modulus)

    def __neg__(self) -> "Residue":
        return Residue(-self.value, self.modulus)

    def inverse(self) -> "Residue":
        return Residue(mod_inverse(self.value, self.modulus), self.modulus)

    def __int__(self) -> int:
        return self.value
