"""Exhaustive enumeration of numerical Fano threefold candidates.

A candidate is a triple ``(q, basket, A^3)`` that survives every numerical
test an actual Fano threefold of index ``q`` would have to pass:

* each basket index coprime to ``q`` and Kawamata sum ``sigma < 24``;
* degree ``A^3 = n / lcm(basket indices)`` below the degree cap;
* ``chi(k)`` integral over a full period, zero on ``-q < k < 0``, and
  non-negative for ``k >= 0``;
* the Bogomolov-Miyaoka inequality ``(4q-3) q^3 A^3 <= 4 q^2 (24 - sigma)``.

The public predicates (:func:`passes_integrality`, :func:`passes_bm`) work
over exact rationals and follow the formulas in :mod:`qfano.riemann_roch`
directly.  The enumeration loop itself runs on a rescaled integer kernel
(:class:`_BasketScanner`) that evaluates ``12 q N chi(k)`` with machine
integers and bails out at the first failing ``k``; the two implementations
are cross-checked in the test suite.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from multiprocessing import Pool
from typing import Iterator, Sequence

from .arith import Rational, format_rational
from .riemann_roch import (
    Basket,
    FanoInput,
    SingularPoint,
    chi_integer,
    dims,
    genus,
    kawamata_sum,
)

#: Fano indices a terminal threefold can have in the range this tool covers.
INDEX_SET: tuple[int, ...] = (3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 17, 19)

#: ``sigma(r) = r - 1/r < 24`` forces every basket index below this.
MAX_POINT_INDEX = 24

_SIGMA_LIMIT = Rational(24)


@dataclass(frozen=True, slots=True)
class FilterConfig:
    """Switches and bounds for the candidate filters.

    ``degree_cap`` is the known bound on ``-K^3 = q^3 A^3`` (125/2, attained
    only by the quadric cone candidate with basket ``(2)``).  Calibration
    against the reference tallies showed the cap must *not* prune the
    enumeration itself: the per-index totals (231, 124, ..., 472 in all)
    include a handful of candidates at or above the cap, and the boundary
    row with basket ``(2,2,3,6)`` appears in the index-5 survey table.  So
    by default the cap is carried as metadata — the table renderer applies
    it (with equality admitted) on top of each survey's genus filter — and
    enumeration bounds degrees through the Bogomolov-Miyaoka inequality
    alone.  ``degree_cap_enforced=True`` restores the strict behaviour:
    degrees are cut at the cap and equality is admitted only for the
    ``degree_cap_exception`` triple.  Use ``qfano diff`` to see exactly
    which candidates each switch adds or removes.
    """

    degree_cap: Rational | None = Rational(125, 2)
    degree_cap_exception: tuple[int, Basket, Rational] = (
        5,
        Basket((SingularPoint(2, 1),)),
        Rational(1, 2),
    )
    degree_cap_enforced: bool = False
    enforce_vanishing: bool = True
    bm_inequality: bool = True
    nonnegativity: bool = True
    index_set: tuple[int, ...] = INDEX_SET


DEFAULT_CONFIG = FilterConfig()

#: Named configurations selectable from the command line.
FILTER_SETS: dict[str, FilterConfig] = {
    "default": DEFAULT_CONFIG,
    "capped": FilterConfig(degree_cap_enforced=True),
}

#: Boolean FilterConfig fields whose individual effect `qfano diff` reports.
FILTER_FLAGS = (
    "degree_cap_enforced",
    "enforce_vanishing",
    "bm_inequality",
    "nonnegativity",
)


@dataclass(frozen=True, slots=True)
class Candidate:
    """One enumerated numerical candidate with its derived invariants."""

    q: int
    basket: Basket
    a3: Rational
    sigma: Rational
    minus_k3: Rational
    minus_k_c2: Rational
    dims: tuple[int, ...]
    genus: int
    id: str

    @classmethod
    def from_parts(cls, q: int, basket: Basket, a3: Rational) -> "Candidate":
        fano = FanoInput(q=q, basket=basket, a3=a3)
        sigma = kawamata_sum(basket)
        g = genus(fano)
        return cls(
            q=q,
            basket=basket,
            a3=a3,
            sigma=sigma,
            minus_k3=q**3 * a3,
            minus_k_c2=24 - sigma,
            dims=tuple(dims(fano, q)),
            genus=g,
            id=candidate_id(q, basket, a3),
        )

    @property
    def fano(self) -> FanoInput:
        return FanoInput(q=self.q, basket=self.basket, a3=self.a3)

    def dim(self, k: int) -> int:
        """``dim |kA|`` for any ``k >= 0`` (cached for ``k <= q``)."""
        if k == 0:
            return 0
        if 1 <= k <= self.q:
            return self.dims[k - 1]
        return chi_integer(k, self.fano) - 1

    def sort_key(self):
        """Canonical order: index, then degree descending, then basket."""
        return (self.q, -self.a3, self.basket)


def candidate_id(q: int, basket: Basket, a3: Rational) -> str:
    """Stable text id derived from the candidate content only."""
    pts = "_".join(f"{p.r}.{p.a}" for p in basket) if basket else "smooth"
    return f"q{q}-{pts}-a{a3.numerator}.{a3.denominator}"


def point_domain(q: int) -> list[SingularPoint]:
    """All admissible basket points for index ``q``, in canonical order."""
    points = []
    for r in range(2, MAX_POINT_INDEX + 1):
        if math.gcd(r, q) != 1:
            continue
        for a in range(1, r // 2 + 1):
            if math.gcd(a, r) == 1:
                points.append(SingularPoint(r, a))
    return sorted(points)


def enumerate_baskets(q: int) -> Iterator[Basket]:
    """Yield every basket with indices coprime to ``q`` and ``sigma < 24``.

    Baskets come out exactly once each, in canonical (lexicographic) order,
    starting with the empty basket.
    """
    domain = point_domain(q)
    sigmas = [p.sigma for p in domain]
    stack: list[SingularPoint] = []

    def rec(start: int, budget: Rational) -> Iterator[Basket]:
        yield Basket(tuple(stack))
        for idx in range(start, len(domain)):
            s = sigmas[idx]
            if s >= budget:
                # sigma is non-decreasing along the domain, so nothing
                # later fits either
                break
            stack.append(domain[idx])
            yield from rec(idx, budget - s)
            stack.pop()

    return rec(0, _SIGMA_LIMIT)


def _degree_numerator_limit(q: int, basket: Basket, config: FilterConfig) -> int:
    """Largest admissible ``n`` for ``A^3 = n/N`` (0 if none)."""
    n_lcm = basket.index_lcm
    if config.degree_cap_enforced and config.degree_cap is not None:
        # q^3 n / N <= cap; the boundary case is handled by the caller
        return math.floor(config.degree_cap * n_lcm / q**3)
    # otherwise the Bogomolov-Miyaoka inequality supplies finiteness
    sigma = kawamata_sum(basket)
    if sigma >= 24:
        return 0
    return math.floor(4 * q * q * (24 - sigma) * n_lcm / ((4 * q - 3) * q**3))


def degree_candidates(
    q: int, basket: Basket, config: FilterConfig = DEFAULT_CONFIG
) -> list[Rational]:
    """Degree values ``A^3 = n/N`` to feed the filter battery, increasing.

    With ``degree_cap_enforced`` the range is cut at the cap and degrees
    meeting it with equality are dropped unless the triple is the configured
    boundary exception.  In the calibrated default the range instead runs to
    the Bogomolov-Miyaoka bound for the basket (the cap is applied later, at
    table-rendering level only).
    """
    n_lcm = basket.index_lcm
    result = []
    enforce_cap = config.degree_cap_enforced and config.degree_cap is not None
    exception = config.degree_cap_exception
    for n in range(1, _degree_numerator_limit(q, basket, config) + 1):
        a3 = Rational(n, n_lcm)
        if enforce_cap and q**3 * a3 == config.degree_cap:
            if (q, basket, a3) != exception:
                continue
        result.append(a3)
    return result


def passes_bm(fano: FanoInput) -> bool:
    """Bogomolov-Miyaoka: ``(4q-3) q^3 A^3 <= 4 q^2 (24 - sigma)``, ``sigma < 24``."""
    sigma = kawamata_sum(fano.basket)
    if sigma >= 24:
        return False
    return (4 * fano.q - 3) * fano.q**3 * fano.a3 <= 4 * fano.q**2 * (24 - sigma)


def integrality_window(fano: FanoInput) -> int:
    """Period of the fractional part of ``chi``: checking one period suffices."""
    sigma = kawamata_sum(fano.basket)
    return math.lcm(
        12 * fano.a3.denominator,
        12 * fano.q * sigma.denominator,
        fano.basket.index_lcm,
    )


def passes_integrality(
    fano: FanoInput,
    *,
    enforce_vanishing: bool = True,
    nonnegativity: bool = True,
) -> bool:
    """Integrality sieve over one full period, in exact rational arithmetic.

    Checks ``chi(k) = 0`` on the window ``-q < k < 0``, and integrality
    (plus optional non-negativity) for ``0 <= k < L`` where ``L`` is
    :func:`integrality_window`.  This is the readable reference predicate;
    the enumeration loop uses an integer-kernel equivalent.
    """
    scanner = _BasketScanner(fano.q, fano.basket)
    return scanner.scan(
        fano.a3,
        enforce_vanishing=enforce_vanishing,
        nonnegativity=nonnegativity,
    )


class _BasketScanner:
    """Integer-arithmetic evaluator of ``T(k) = 12 q N chi(k)`` for one basket.

    With ``A^3 = n/N``, ``N`` the lcm of the basket indices, every term of
    ``12 q N chi(k)`` is an integer:

        T(k) = 12qN + q n k(k+q)(2k+q) + k (24N - N sigma) + q W(k)

    where ``W(k) = 12 N sum_p c_p(k)`` is periodic mod ``N`` and is built
    from per-point tables indexed by ``k mod r``.  ``chi(k)`` is integral
    iff ``T(k) % 12qN == 0``, and signs/zeros transfer directly.
    """

    __slots__ = ("q", "n_lcm", "modulus", "sigma_scaled", "linear_coeff", "tables")

    def __init__(self, q: int, basket: Basket):
        self.q = q
        n_lcm = basket.index_lcm
        self.n_lcm = n_lcm
        self.modulus = 12 * q * n_lcm
        sigma = kawamata_sum(basket)
        self.sigma_scaled = int(n_lcm * sigma)
        self.linear_coeff = 24 * n_lcm - self.sigma_scaled
        tables: list[tuple[int, tuple[int, ...]]] = []
        for point in basket:
            r, a = point.r, point.a
            qinv = pow(q, -1, r)
            scale = n_lcm // r
            column = []
            for kmod in range(r):
                i = (-kmod * qinv) % r
                inner = 0
                for j in range(1, i):
                    ja = (j * a) % r
                    inner += ja * (r - ja)
                column.append(scale * (-i * (r * r - 1) + 6 * inner))
            tables.append((r, tuple(column)))
        # merge identical points: many baskets repeat (2,1) etc.
        merged: dict[tuple[int, tuple[int, ...]], int] = {}
        for entry in tables:
            merged[entry] = merged.get(entry, 0) + 1
        self.tables = tuple(
            (r, tuple(c * mult for c in col)) for (r, col), mult in merged.items()
        )

    def chi_scaled(self, k: int, n: int) -> int:
        """``12 q N chi(k)`` for ``A^3 = n/N`` as a plain integer."""
        q = self.q
        value = (
            self.modulus
            + q * n * k * (k + q) * (2 * k + q)
            + k * self.linear_coeff
        )
        for r, column in self.tables:
            value += q * column[k % r]
        return value

    def window(self, n: int) -> int:
        a3_den = self.n_lcm // math.gcd(n, self.n_lcm)
        sigma_den = self.n_lcm // math.gcd(self.sigma_scaled, self.n_lcm)
        return math.lcm(12 * a3_den, 12 * self.q * sigma_den, self.n_lcm)

    def scan(
        self,
        a3: Rational,
        *,
        enforce_vanishing: bool = True,
        nonnegativity: bool = True,
    ) -> bool:
        """Run the full integrality battery for one degree."""
        if self.n_lcm % a3.denominator != 0:
            return False
        n = a3.numerator * (self.n_lcm // a3.denominator)
        modulus = self.modulus
        if enforce_vanishing:
            for k in range(1 - self.q, 0):
                if self.chi_scaled(k, n) != 0:
                    return False
        for k in range(1, self.window(n)):
            value = self.chi_scaled(k, n)
            if value % modulus != 0:
                return False
            if nonnegativity and value < 0:
                return False
        return True


def _scan_baskets(
    q: int, baskets: Sequence[Basket], config: FilterConfig
) -> list[Candidate]:
    found = []
    for basket in baskets:
        degrees = degree_candidates(q, basket, config)
        if not degrees:
            continue
        scanner = _BasketScanner(q, basket)
        for a3 in degrees:
            if config.bm_inequality:
                sigma_scaled = scanner.sigma_scaled
                n = a3.numerator * (scanner.n_lcm // a3.denominator)
                if 24 * scanner.n_lcm - sigma_scaled <= 0:
                    continue
                if (4 * q - 3) * q * n > 4 * (24 * scanner.n_lcm - sigma_scaled):
                    continue
            if scanner.scan(
                a3,
                enforce_vanishing=config.enforce_vanishing,
                nonnegativity=config.nonnegativity,
            ):
                found.append(Candidate.from_parts(q, basket, a3))
    return found


def _scan_job(args: tuple[int, list[Basket], FilterConfig]) -> list[Candidate]:
    return _scan_baskets(*args)


def enumerate_candidates(
    q: int, config: FilterConfig = DEFAULT_CONFIG, jobs: int = 1
) -> list[Candidate]:
    """All candidates of index ``q``, canonically sorted.

    ``jobs > 1`` splits the basket list over worker processes; the result is
    merged and sorted, so it is byte-for-byte independent of ``jobs``.
    """
    baskets = list(enumerate_baskets(q))
    if jobs <= 1:
        found = _scan_baskets(q, baskets, config)
    else:
        chunks = [(q, baskets[i::jobs], config) for i in range(jobs)]
        with Pool(processes=jobs) as pool:
            found = list(itertools.chain.from_iterable(pool.map(_scan_job, chunks)))
    found.sort(key=Candidate.sort_key)
    return found


def torsion_genus_bound(n: int, g: int) -> int:
    """Genus forced on an n-fold cover: ``n(g - 1) - 3``.

    If the class group had n-torsion, the associated cover would be another
    Fano of the same index with genus at least this value — usually beyond
    every enumerated candidate, which rules the torsion out.
    """
    if n < 1:
        raise ValueError(f"cover degree must be >= 1, got {n}")
    return n * (g - 1) - 3


def genus_degree_bound(minus_k3: Rational) -> int:
    """Largest genus allowed by ``g < -K^3/2 + 2``."""
    bound = Rational(minus_k3) / 2 + 2
    return math.ceil(bound) - 1


@dataclass(frozen=True, slots=True)
class Fact:
    """A machine-checked statement about the candidate database."""

    name: str
    statement: str
    value: str
    holds: bool


def series_class(candidate: Candidate) -> tuple:
    """Everything a survey-table row shows: orientations collapse here.

    Two candidates with the same index, basket index-multiset, degree and
    dimension table are indistinguishable at the level the tables print.
    """
    return (candidate.q, candidate.basket.indices, candidate.a3, candidate.dims)


def _series_classes(candidates: Sequence[Candidate]) -> dict[tuple, list[Candidate]]:
    groups: dict[tuple, list[Candidate]] = {}
    for cand in candidates:
        groups.setdefault(series_class(cand), []).append(cand)
    return groups


def _class_label(key: tuple) -> str:
    indices = "(" + ",".join(str(r) for r in key[1]) + ")"
    return f"q={key[0]} {indices} A3={format_rational(key[2])}"


def facts(candidates: Sequence[Candidate]) -> list[Fact]:
    """Derive the headline structural facts from an enumerated database.

    The statements quantify over the ambient degree range ``-K^3 <= 125/2``
    (equality admitted) — the range the survey tables print.  An uncapped
    database holds a handful of higher-degree candidates whose linear
    systems move more freely; they are outside every statement's scope, so
    the same facts hold whether or not the database was enumerated with the
    cap enforced.
    """
    cap = DEFAULT_CONFIG.degree_cap
    candidates = [c for c in candidates if cap is None or c.minus_k3 <= cap]
    out = []

    high = [c for c in candidates if c.q >= 8]
    max_dim1 = max((c.dim(1) for c in high), default=None)
    out.append(
        Fact(
            name="high-index-no-moving-A",
            statement="every candidate with q >= 8 in the survey degree range has dim|A| <= 0",
            value=f"max dim|A| = {max_dim1}",
            holds=max_dim1 is not None and max_dim1 <= 0,
        )
    )

    seven = _series_classes([c for c in candidates if c.q == 7 and c.dim(1) >= 1])
    out.append(
        Fact(
            name="index-seven-moving-A",
            statement="exactly one series class with q = 7 in the survey degree range has dim|A| >= 1",
            value=", ".join(sorted(_class_label(k) for k in seven)) or "none",
            holds=len(seven) == 1,
        )
    )

    singular = [c for c in candidates if c.q >= 4 and c.basket]
    max_dim_singular = max((c.dim(1) for c in singular), default=None)
    out.append(
        Fact(
            name="singular-moving-A-bound",
            statement="every candidate with q >= 4 and nonempty basket in the survey degree range has dim|A| <= 2",
            value=f"max dim|A| = {max_dim_singular}",
            holds=max_dim_singular is not None and max_dim_singular <= 2,
        )
    )

    big = _series_classes([c for c in candidates if c.q >= 5 and c.dim(1) >= 2])
    out.append(
        Fact(
            name="very-moving-A-boundary",
            statement="exactly one series class with q >= 5 in the survey degree range has dim|A| >= 2",
            value=", ".join(sorted(_class_label(k) for k in big)) or "none",
            holds=len(big) == 1,
        )
    )

    boundary = [c for c in candidates if c.minus_k3 == Rational(125, 2)]
    moving = [c for c in boundary if c.dim(1) >= 2]
    out.append(
        Fact(
            name="degree-boundary",
            statement=(
                "-K^3 = 125/2 is attained, and among the boundary candidates "
                "only the one with basket (2) has dim|A| >= 2"
            ),
            value=", ".join(c.id for c in boundary) or "none",
            holds=bool(boundary)
            and [(c.q, c.basket.indices, c.a3) for c in moving]
            == [(5, (2,), Rational(1, 2))],
        )
    )
    return out


def filter_diff(
    q: int, flag: str, config: FilterConfig = DEFAULT_CONFIG, jobs: int = 1
) -> tuple[list[Candidate], list[Candidate]]:
    """Effect of toggling one boolean filter flag on the index-q candidates.

    Returns ``(removed, added)`` relative to ``config``: candidates that
    disappear / appear when ``flag`` is flipped.  Backs the ``diff`` command
    demanded by the count-calibration protocol.
    """
    if flag not in FILTER_FLAGS:
        raise ValueError(f"unknown filter flag {flag!r}; choose from {FILTER_FLAGS}")
    flipped = replace(config, **{flag: not getattr(config, flag)})
    base = {c.id: c for c in enumerate_candidates(q, config, jobs)}
    other = {c.id: c for c in enumerate_candidates(q, flipped, jobs)}
    removed = [c for cid, c in base.items() if cid not in other]
    added = [c for cid, c in other.items() if cid not in base]
    removed.sort(key=Candidate.sort_key)
    added.sort(key=Candidate.sort_key)
    return removed, added
