"""Bounded integer search over the numerology of two-ray link diagrams.

A link case bundles the linear identities a birational two-ray diagram
imposes between the source index ``q``, the target index ``qhat``, the
exceptional multiplicity ``e``, the transformed-system degrees ``s_k``,
slack variables ``m_k``, and the discrepancy ``alpha``:

    qhat = 9*s1 + a1*e        (and more relations of the same shape)

together with database-backed dimension constraints ("the image of |kA|
on the target moves at least as much as it did on the source") and an
optional genus transfer (``g(target) >= g(source)`` whenever alpha < 1).
:func:`solve` enumerates every assignment within the declared bounds; an
empty result eliminates the case.  :func:`audit` re-verifies any claimed
solution independently of the search.

Expressions use ``+``, ``*``, non-negative integer literals, declared
variable names, the token ``alpha``, and parentheses.  All variables are
non-negative integers, so every expression is monotone in every variable —
which is what the branch-and-prune interval bound relies on.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .arith import Rational, format_rational, parse_rational
from .enumeration import Candidate

DEFAULT_TARGET_INDICES = (3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 17, 19)


class LinkCaseError(ValueError):
    """Malformed case file: syntax, undeclared names, bad references."""


class UnboundedCaseError(LinkCaseError):
    """An unknown is missing a finite lower or upper bound."""


class NoCandidateError(LookupError):
    """No database candidate matches (index, genus floor) — an elimination."""

    def __init__(self, qhat: int, genus_min: int):
        super().__init__(f"no candidate with q={qhat} and genus >= {genus_min}")
        self.qhat = qhat
        self.genus_min = genus_min


# ---------------------------------------------------------------------------
# expression mini-language


class Expr:
    __slots__ = ()

    def value(self, env: Mapping[str, Rational]) -> Rational:
        raise NotImplementedError

    def names(self) -> set[str]:
        raise NotImplementedError


@dataclass(frozen=True, slots=True)
class Num(Expr):
    n: int

    def value(self, env):
        return Rational(self.n)

    def names(self):
        return set()


@dataclass(frozen=True, slots=True)
class Var(Expr):
    name: str

    def value(self, env):
        return env[self.name]

    def names(self):
        return {self.name}


@dataclass(frozen=True, slots=True)
class Sum(Expr):
    terms: tuple[Expr, ...]

    def value(self, env):
        return sum(t.value(env) for t in self.terms)

    def names(self):
        return set().union(*(t.names() for t in self.terms))


@dataclass(frozen=True, slots=True)
class Prod(Expr):
    factors: tuple[Expr, ...]

    def value(self, env):
        out = Rational(1)
        for f in self.factors:
            out *= f.value(env)
        return out

    def names(self):
        return set().union(*(f.names() for f in self.factors))


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+*=]))")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise LinkCaseError(f"bad token at {rest[:12]!r} in {text!r}")
        tokens.append(m.group(0).strip())
        pos = m.end()
    return [t for t in tokens if t]


class _Parser:
    def __init__(self, tokens: list[str], text: str):
        self.tokens = tokens
        self.pos = 0
        self.text = text

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise LinkCaseError(f"unexpected end of expression in {self.text!r}")
        self.pos += 1
        return tok

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.peek() == "+":
            self.take()
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self) -> Expr:
        factors = [self.factor()]
        while self.peek() == "*":
            self.take()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def factor(self) -> Expr:
        tok = self.take()
        if tok == "(":
            inner = self.expr()
            if self.take() != ")":
                raise LinkCaseError(f"missing ')' in {self.text!r}")
            return inner
        if tok.isdigit():
            return Num(int(tok))
        if tok.isidentifier():
            return Var(tok)
        raise LinkCaseError(f"unexpected token {tok!r} in {self.text!r}")


def parse_expression(text: str) -> Expr:
    """Parse ``+``/``*``/parenthesis arithmetic over ints, names, alpha."""
    parser = _Parser(_tokenize(text), text)
    expr = parser.expr()
    if parser.peek() is not None:
        raise LinkCaseError(f"trailing input {parser.peek()!r} in {text!r}")
    return expr


@dataclass(frozen=True, slots=True)
class Relation:
    """One identity ``qhat = <expression>``."""

    text: str
    rhs: Expr

    @classmethod
    def parse(cls, text: str) -> "Relation":
        lhs, sep, rhs_text = text.partition("=")
        if not sep or lhs.strip() != "qhat":
            raise LinkCaseError(f"relation must have the form 'qhat = ...': {text!r}")
        return cls(text=text.strip(), rhs=parse_expression(rhs_text))


# ---------------------------------------------------------------------------
# case model


@dataclass(frozen=True, slots=True)
class Unknown:
    name: str
    lo: int
    hi: int
    note: str = ""


@dataclass(frozen=True, slots=True)
class DimConstraint:
    """dim of the ``var``-th multiple on the target >= dim|kA| on the source."""

    var: str
    source_k: int
    genus_min: int = 0


@dataclass(frozen=True, slots=True)
class SourceRef:
    """How a case file names its source candidate.

    The basket may be given as bare indices ``[2, 4, 5]`` or, when
    orientation twins share the same indices and degree, as decorated
    pairs ``[[2, 1], [4, 1], [5, 2]]``.
    """

    q: int
    indices: tuple[int, ...]
    a3: Rational
    pairs: tuple[tuple[int, int], ...] | None = None

    def resolve(self, db: Sequence[Candidate]) -> Candidate:
        matches = [
            c
            for c in db
            if c.q == self.q and c.basket.indices == self.indices and c.a3 == self.a3
        ]
        if self.pairs is not None:
            matches = [
                c
                for c in matches
                if tuple((p.r, p.a) for p in c.basket.points) == self.pairs
            ]
        if not matches:
            raise LinkCaseError(f"source candidate not in database: {self}")
        if len(matches) > 1:
            raise LinkCaseError(f"ambiguous source candidate reference: {self}")
        return matches[0]


@dataclass(frozen=True, slots=True)
class LinkCase:
    name: str
    q: int
    source: SourceRef
    alpha_options: tuple[Rational, ...]
    unknowns: tuple[Unknown, ...]
    relations: tuple[Relation, ...]
    dim_constraints: tuple[DimConstraint, ...]
    target_index_set: tuple[int, ...]
    genus_transfer: bool
    threshold_floor: int | None = None
    notes: str = ""

    def __post_init__(self):
        names = [u.name for u in self.unknowns]
        if len(set(names)) != len(names):
            raise LinkCaseError(f"duplicate unknown names in case {self.name!r}")
        if "alpha" in names or "qhat" in names:
            raise LinkCaseError("'alpha' and 'qhat' are reserved names")
        declared = set(names) | {"alpha"}
        for unk in self.unknowns:
            if unk.lo is None or unk.hi is None:
                raise UnboundedCaseError(f"unknown {unk.name!r} lacks a finite bound")
            if unk.lo < 0 or unk.hi < unk.lo:
                raise LinkCaseError(f"bad bounds for {unk.name!r}: [{unk.lo}, {unk.hi}]")
        for rel in self.relations:
            undeclared = rel.rhs.names() - declared
            if undeclared:
                raise LinkCaseError(
                    f"relation {rel.text!r} uses undeclared names {sorted(undeclared)}"
                )
        for con in self.dim_constraints:
            if con.var not in names:
                raise LinkCaseError(f"dim constraint on undeclared variable {con.var!r}")
            if con.source_k < 0:
                raise LinkCaseError("dim constraint source power must be >= 0")
        if not self.alpha_options:
            raise LinkCaseError("a case needs at least one alpha option")


def load_case(text: str) -> LinkCase:
    """Parse a case document (JSON object notation)."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LinkCaseError(f"case file is not valid JSON: {exc}") from exc
    try:
        src = raw["source"]
        basket_raw = list(src["basket"])
        if basket_raw and isinstance(basket_raw[0], (list, tuple)):
            pairs = tuple(sorted((int(r), int(a)) for r, a in basket_raw))
            indices = tuple(r for r, _ in pairs)
        else:
            pairs = None
            indices = tuple(sorted(int(r) for r in basket_raw))
        source = SourceRef(
            q=int(src["q"]),
            indices=indices,
            a3=parse_rational(str(src["a3"])),
            pairs=pairs,
        )
        unknowns = []
        for u in raw["unknowns"]:
            name = str(u["name"])
            if u.get("min") is None or u.get("max") is None:
                raise UnboundedCaseError(
                    f"unknown {name!r} needs explicit min and max bounds"
                )
            unknowns.append(
                Unknown(name=name, lo=int(u["min"]), hi=int(u["max"]),
                        note=str(u.get("note", "")))
            )
        unknowns = tuple(unknowns)
        case = LinkCase(
            name=str(raw.get("name", "unnamed case")),
            q=int(raw["q"]),
            source=source,
            alpha_options=tuple(
                sorted(parse_rational(str(a)) for a in raw["alpha"])
            ),
            unknowns=unknowns,
            relations=tuple(Relation.parse(str(r)) for r in raw["relations"]),
            dim_constraints=tuple(
                DimConstraint(var=str(v), source_k=int(k), genus_min=int(g))
                for v, k, g in raw.get("dim_constraints", [])
            ),
            target_index_set=tuple(
                sorted(int(q) for q in raw.get("index_set", DEFAULT_TARGET_INDICES))
            ),
            genus_transfer=bool(raw.get("genus_transfer", False)),
            threshold_floor=(
                int(raw["threshold_floor"]) if raw.get("threshold_floor") else None
            ),
            notes=str(raw.get("notes", "")),
        )
    except KeyError as exc:
        raise LinkCaseError(f"case file missing field {exc}") from exc
    if case.source.q != case.q:
        raise LinkCaseError("source candidate index differs from case index")
    return case


def load_case_file(path) -> LinkCase:
    with open(path, "r", encoding="utf-8") as handle:
        return load_case(handle.read())


@dataclass(frozen=True, slots=True)
class LinkSolution:
    """A satisfying assignment: target index, unknowns, discrepancy."""

    qhat: int
    assignment: tuple[tuple[str, int], ...]
    alpha: Rational

    def env(self) -> dict[str, Rational]:
        env: dict[str, Rational] = {name: Rational(v) for name, v in self.assignment}
        env["alpha"] = self.alpha
        return env

    def sort_key(self):
        return (self.qhat, tuple(v for _, v in self.assignment), self.alpha)


# ---------------------------------------------------------------------------
# database lookups


def dims_lookup(
    db: Sequence[Candidate], qhat: int, s: int, genus_min: int = 0
) -> int:
    """Largest ``dim |s*A|`` over candidates with index ``qhat``, genus floor.

    Raises :class:`NoCandidateError` when no candidate qualifies — which is
    itself an elimination of the target index at that genus.
    """
    pool = [c for c in db if c.q == qhat and c.genus >= genus_min]
    if not pool:
        raise NoCandidateError(qhat, genus_min)
    return max(c.dim(s) for c in pool)


class _DimCache:
    """Memoized dims_lookup bound to one database."""

    def __init__(self, db: Sequence[Candidate]):
        self.db = db
        self._cache: dict[tuple[int, int, int], int | None] = {}

    def lookup(self, qhat: int, s: int, genus_min: int) -> int | None:
        """dims_lookup, with None standing in for NoCandidateError."""
        key = (qhat, s, genus_min)
        if key not in self._cache:
            try:
                self._cache[key] = dims_lookup(self.db, qhat, s, genus_min)
            except NoCandidateError:
                self._cache[key] = None
        return self._cache[key]


# ---------------------------------------------------------------------------
# the solver


def _interval(expr: Expr, lo_env: Mapping, hi_env: Mapping) -> tuple[Rational, Rational]:
    # all variables are >= 0 and the grammar has no subtraction, so every
    # expression is monotone non-decreasing in every variable
    return expr.value(lo_env), expr.value(hi_env)


def _effective_genus_min(case: LinkCase, source: Candidate, alpha: Rational, base: int) -> int:
    if case.genus_transfer and alpha < 1:
        return max(base, source.genus)
    return base


def solve(case: LinkCase, db: Sequence[Candidate]) -> list[LinkSolution]:
    """Every in-bounds assignment satisfying all relations and constraints.

    Deterministic: results come back sorted by (qhat, unknown values in
    declaration order, alpha).  An empty list eliminates the case.
    """
    source = case.source.resolve(db)
    cache = _DimCache(db)
    names = [u.name for u in case.unknowns]
    solutions: list[LinkSolution] = []

    for qhat in case.target_index_set:
        for alpha in case.alpha_options:
            if case.genus_transfer and alpha < 1:
                # the target must support the transferred genus at all
                if cache.lookup(qhat, 0, source.genus) is None:
                    continue

            # per-variable bounds, tightened by the dimension constraints
            lo = {u.name: u.lo for u in case.unknowns}
            hi = {u.name: u.hi for u in case.unknowns}
            feasible = True
            for con in case.dim_constraints:
                need = source.dim(con.source_k)
                gmin = _effective_genus_min(case, source, alpha, con.genus_min)
                smin = lo[con.var]
                while smin <= hi[con.var]:
                    got = cache.lookup(qhat, smin, gmin)
                    if got is not None and got >= need:
                        break
                    smin += 1
                else:
                    feasible = False
                    break
                if smin > hi[con.var]:
                    feasible = False
                    break
                lo[con.var] = smin
            if not feasible:
                continue

            target = Rational(qhat)
            env: dict[str, Rational] = {"alpha": alpha}
            lo_env: dict[str, Rational] = {"alpha": alpha}
            hi_env: dict[str, Rational] = {"alpha": alpha}
            for name in names:
                lo_env[name] = Rational(lo[name])
                hi_env[name] = Rational(hi[name])

            def assign(idx: int) -> Iterator[dict[str, Rational]]:
                for rel in case.relations:
                    rlo, rhi = _interval(rel.rhs, lo_env, hi_env)
                    if not (rlo <= target <= rhi):
                        return
                if idx == len(names):
                    if all(rel.rhs.value(env) == target for rel in case.relations):
                        yield dict(env)
                    return
                name = names[idx]
                for value in range(lo[name], hi[name] + 1):
                    env[name] = lo_env[name] = hi_env[name] = Rational(value)
                    yield from assign(idx + 1)
                del env[name]
                lo_env[name] = Rational(lo[name])
                hi_env[name] = Rational(hi[name])

            for found in assign(0):
                # final exact re-check of the dimension constraints
                ok = True
                for con in case.dim_constraints:
                    gmin = _effective_genus_min(case, source, alpha, con.genus_min)
                    got = cache.lookup(qhat, int(found[con.var]), gmin)
                    if got is None or got < source.dim(con.source_k):
                        ok = False
                        break
                if ok:
                    solutions.append(
                        LinkSolution(
                            qhat=qhat,
                            assignment=tuple((n, int(found[n])) for n in names),
                            alpha=alpha,
                        )
                    )

    solutions.sort(key=LinkSolution.sort_key)
    return solutions


def audit(case: LinkCase, solution: LinkSolution, db: Sequence[Candidate]) -> bool:
    """Independently re-verify one claimed solution against case and database."""
    source = case.source.resolve(db)
    if solution.qhat not in case.target_index_set:
        return False
    if solution.alpha not in case.alpha_options:
        return False
    values = dict(solution.assignment)
    bounds = {u.name: (u.lo, u.hi) for u in case.unknowns}
    if set(values) != set(bounds):
        return False
    for name, value in values.items():
        lo, hi = bounds[name]
        if not lo <= value <= hi:
            return False
    env = solution.env()
    target = Rational(solution.qhat)
    if any(rel.rhs.value(env) != target for rel in case.relations):
        return False
    if case.genus_transfer and solution.alpha < 1:
        try:
            dims_lookup(db, solution.qhat, 0, source.genus)
        except NoCandidateError:
            return False
    for con in case.dim_constraints:
        gmin = _effective_genus_min(case, source, solution.alpha, con.genus_min)
        try:
            got = dims_lookup(db, solution.qhat, values[con.var], gmin)
        except NoCandidateError:
            return False
        if got < source.dim(con.source_k):
            return False
    return True


def feasible_indices(solutions: Sequence[LinkSolution]) -> list[int]:
    """The distinct target indices among the solutions, ascending."""
    return sorted({s.qhat for s in solutions})


def describe_case(case: LinkCase) -> str:
    """One-paragraph human summary of a loaded case."""
    lines = [f"case: {case.name}", f"source: q={case.q} {case.source.indices} A^3={format_rational(case.source.a3)}"]
    lines.append("alpha options: " + ", ".join(format_rational(a) for a in case.alpha_options))
    if case.threshold_floor is not None:
        lines.append(f"canonical-threshold floor: c <= 1/{case.threshold_floor}")
    lines.append("unknowns: " + ", ".join(f"{u.name} in [{u.lo},{u.hi}]" for u in case.unknowns))
    for rel in case.relations:
        lines.append("relation: " + rel.text)
    for con in case.dim_constraints:
        lines.append(
            f"dim constraint: dim|{con.var}*Theta| >= dim|{con.source_k}A|"
            + (f" (genus >= {con.genus_min})" if con.genus_min else "")
        )
    lines.append(f"genus transfer: {'on' if case.genus_transfer else 'off'}")
    if case.notes:
        lines.append("notes: " + case.notes)
    return "\n".join(lines)
