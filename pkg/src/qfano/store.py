"""Candidate databases on disk: canonical JSON, loaded back verbatim.

The file layout is fixed so that two runs producing the same candidates
produce byte-identical files (worker count, dict ordering, and platform
must not leak in).  Loading recomputes every derived invariant from
``(q, basket, A^3)`` and refuses files whose stored values disagree, so a
database can be trusted as input without re-running the enumeration.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from typing import Any

from .arith import Rational, format_rational, parse_rational
from .enumeration import Candidate, FilterConfig, FILTER_SETS
from .riemann_roch import Basket

FORMAT_VERSION = 1


class StoreError(ValueError):
    """The file is not a database this version can vouch for."""


def _rational_text(x: Rational) -> str:
    return format_rational(x)


def config_to_json(config: FilterConfig) -> dict[str, Any]:
    exc_q, exc_basket, exc_a3 = config.degree_cap_exception
    return {
        "degree_cap": (
            _rational_text(config.degree_cap) if config.degree_cap is not None else None
        ),
        "degree_cap_exception": {
            "q": exc_q,
            "basket": [[p.r, p.a] for p in exc_basket.points],
            "a3": _rational_text(exc_a3),
        },
        "degree_cap_enforced": config.degree_cap_enforced,
        "enforce_vanishing": config.enforce_vanishing,
        "bm_inequality": config.bm_inequality,
        "nonnegativity": config.nonnegativity,
        "index_set": list(config.index_set),
    }


def config_from_json(data: dict[str, Any]) -> FilterConfig:
    exc = data["degree_cap_exception"]
    return FilterConfig(
        degree_cap=(
            parse_rational(data["degree_cap"]) if data["degree_cap"] is not None else None
        ),
        degree_cap_exception=(
            int(exc["q"]),
            Basket.from_pairs((int(r), int(a)) for r, a in exc["basket"]),
            parse_rational(exc["a3"]),
        ),
        degree_cap_enforced=bool(data["degree_cap_enforced"]),
        enforce_vanishing=bool(data["enforce_vanishing"]),
        bm_inequality=bool(data["bm_inequality"]),
        nonnegativity=bool(data["nonnegativity"]),
        index_set=tuple(int(q) for q in data["index_set"]),
    )


def candidate_to_json(c: Candidate) -> dict[str, Any]:
    return {
        "q": c.q,
        "basket": [[p.r, p.a] for p in c.basket.points],
        "a3": _rational_text(c.a3),
        "sigma": _rational_text(c.sigma),
        "minus_k3": _rational_text(c.minus_k3),
        "minus_k_c2": _rational_text(c.minus_k_c2),
        "dims": list(c.dims),
        "genus": c.genus,
        "id": c.id,
    }


def candidate_from_json(data: dict[str, Any]) -> Candidate:
    basket = Basket.from_pairs((int(r), int(a)) for r, a in data["basket"])
    rebuilt = Candidate.from_parts(
        q=int(data["q"]), basket=basket, a3=parse_rational(data["a3"])
    )
    stored = (
        parse_rational(data["sigma"]),
        parse_rational(data["minus_k3"]),
        parse_rational(data["minus_k_c2"]),
        tuple(int(d) for d in data["dims"]),
        int(data["genus"]),
        data["id"],
    )
    recomputed = (
        rebuilt.sigma,
        rebuilt.minus_k3,
        rebuilt.minus_k_c2,
        rebuilt.dims,
        rebuilt.genus,
        rebuilt.id,
    )
    if stored != recomputed:
        raise StoreError(
            f"stored invariants for {data['id']!r} disagree with recomputation"
        )
    return rebuilt


@dataclass(frozen=True, slots=True)
class Database:
    """An enumeration result: the filters used and what survived them."""

    config: FilterConfig
    candidates: tuple[Candidate, ...]
    filter_set: str | None = None
    version: int = FORMAT_VERSION

    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.candidates:
            out[c.q] = out.get(c.q, 0) + 1
        return out


def dumps_database(db: Database) -> str:
    doc = {
        "format_version": db.version,
        "filter_set": db.filter_set,
        "config": config_to_json(db.config),
        "count": len(db.candidates),
        "candidates": [candidate_to_json(c) for c in db.candidates],
    }
    return json.dumps(doc, indent=2) + "\n"


def loads_database(text: str) -> Database:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StoreError(f"not a JSON document: {exc}") from exc
    if not isinstance(doc, dict) or "candidates" not in doc:
        raise StoreError("not a candidate database")
    version = int(doc.get("format_version", -1))
    if version != FORMAT_VERSION:
        raise StoreError(f"unsupported format version {version}")
    candidates = tuple(candidate_from_json(d) for d in doc["candidates"])
    if int(doc.get("count", len(candidates))) != len(candidates):
        raise StoreError("stored count disagrees with the candidate list")
    filter_set = doc.get("filter_set")
    config = config_from_json(doc["config"])
    if filter_set is not None and filter_set in FILTER_SETS:
        if config != FILTER_SETS[filter_set]:
            raise StoreError(
                f"config snapshot does not match the named filter set {filter_set!r}"
            )
    return Database(
        config=config,
        candidates=candidates,
        filter_set=filter_set,
        version=version,
    )


def save_database(db: Database, path: str | os.PathLike) -> None:
    """Write atomically: the target never holds a half-written database."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(prefix=".qfano-db-", dir=directory, text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(dumps_database(db))
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def load_database(path: str | os.PathLike) -> Database:
    with open(path, "r", encoding="utf-8") as handle:
        return loads_database(handle.read())
