"""Reproduction suite: every desk-scale computational claim as a checked record.

Each claim computes a value and compares it with the expected one by exact
equality.  Records are appended to a JSON-lines ledger.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from typing import Any, Callable

from .bounds import best_upper_bound, refute_sqrt_quadruple
from .cayley import gp_graph, make_graph, peisert_graph
from .cliques import enumerate_maximal_clique_sizes, is_clique, is_maximal_clique, max_clique
from .gf import build_field
from .subspace import peisert_quartic_dichotomy, sqrt_decomposition_check, subfield_clique


@dataclass
class SuiteResult:
    claim: str
    params: dict
    expected: Any
    provenance: str
    computed: Any
    passed: bool | None
    elapsed_ms: float
    tier: str = "fast"

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> SuiteResult:
        return cls(**json.loads(line))


@dataclass
class Claim:
    claim: str
    params: dict
    expected: Any
    provenance: str
    compute: Callable[[], Any]
    tier: str = "fast"
    blocking: bool = True


def _omega(family, p, s, d=None):
    return max_clique(make_graph(family, p, s, d)).size


def _subfield_maximal(family, p, s, t, d=None):
    graph = make_graph(family, p, s, d)
    return is_maximal_clique(graph, graph.field.subfield_elements(t))[0]


def _peisert81_dichotomy():
    res = peisert_quartic_dichotomy(build_field(3, 4))
    return {
        "outcome": res.outcome,
        "clique_size": res.maximum.size if res.maximum else None,
        "maximum_verified": bool(res.maximum and res.maximum.verified_maximum),
        "basis_ok": res.basis_ok,
    }


def _cubic_maximal_not_maximum():
    graph = gp_graph(build_field(5, 6), 3)
    F25 = graph.field.subfield_elements(2)
    F125 = subfield_clique(graph, 3)
    return {
        "F25_maximal": is_maximal_clique(graph, F25)[0],
        "F125_clique_size": len(F125.span) if is_clique(graph, F125.span) else 0,
        "trivial_bound": best_upper_bound(graph.q, 3, 5).value,
    }


def _maximal_sizes_contain(p, s, sizes):
    found = enumerate_maximal_clique_sizes(gp_graph(build_field(p, s), 2))
    return sorted(set(sizes) & set(found))


def _decomposition49():
    graph = peisert_graph(build_field(7, 2))
    cert = max_clique(graph)
    check = sqrt_decomposition_check(graph, cert.vertices)
    return {"clique_size": cert.size, "distinct": check.distinct, "covers": check.covers}


def _refutation(q, p):
    b = refute_sqrt_quadruple(q, p)
    return {"bound": b.value, "n": b.witness["n"]}


def _gp81_consistent():
    omega = _omega("gp", 3, 4, 4)
    return omega <= refute_sqrt_quadruple(81, 3).value


def _conjecture_evidence(p, s):
    return peisert_quartic_dichotomy(build_field(p, s)).outcome


def claims() -> list[Claim]:
    out = [
        Claim("omega_peisert_81", {"p": 3, "s": 4}, 9, "published: omega(P*_81) = 9",
              lambda: _omega("peisert", 3, 4)),
        Claim("peisert_81_dichotomy", {"p": 3, "s": 4},
              {"outcome": "extended", "clique_size": 9, "maximum_verified": True, "basis_ok": True},
              "published: F_3 not maximal in P*_81, F_3 + hF_3 maximum, {1,h,g^2,g^2h} a basis",
              _peisert81_dichotomy),
    ]
    for q, (p, s) in [(7, (7, 4)), (9, (3, 8)), (11, (11, 4))]:
        out.append(Claim(f"peisert_subfield_maximal_q{q}", {"p": p, "s": s, "t": s // 4}, True,
                         f"published: F_{q} maximal in P*_{{{q}^4}}",
                         lambda p=p, s=s: _subfield_maximal("peisert", p, s, s // 4)))
    for q, (p, s) in [(19, (19, 4)), (23, (23, 4)), (27, (3, 12)), (31, (31, 4))]:
        out.append(Claim(f"peisert_subfield_maximal_q{q}", {"p": p, "s": s, "t": s // 4}, True,
                         f"published: F_{q} maximal in P*_{{{q}^4}}",
                         lambda p=p, s=s: _subfield_maximal("peisert", p, s, s // 4), tier="full"))
    out += [
        Claim("omega_peisert_2401", {"p": 7, "s": 4}, 17, "published: omega(P*_2401) = 17",
              lambda: _omega("peisert", 7, 4), tier="full"),
        Claim("cubic_343_F7_maximal", {"p": 7, "s": 3, "d": 3, "t": 1}, True,
              "published: F_{p^r} maximal in GP(p^{3r}, 3), p=7, r=1",
              lambda: _subfield_maximal("gp", 7, 3, 1, 3)),
        Claim("quadruple_81_F3_maximal", {"p": 3, "s": 4, "d": 4, "t": 1}, True,
              "published: F_{p^r} maximal in GP(p^{4r}, 4), p=3, r=1",
              lambda: _subfield_maximal("gp", 3, 4, 1, 4)),
        Claim("quadruple_625_F5_maximal", {"p": 5, "s": 4, "d": 4, "t": 1}, True,
              "published: F_{p^r} maximal in GP(p^{4r}, 4), p=5, r=1",
              lambda: _subfield_maximal("gp", 5, 4, 1, 4)),
        Claim("cubic_15625_maximal_not_maximum", {"p": 5, "s": 6, "d": 3},
              {"F25_maximal": True, "F125_clique_size": 125, "trivial_bound": 125},
              "published: F_{p^{2r}} maximal but F_{p^{3r}} maximum in GP(p^{6r}, 3), p^r = 5",
              _cubic_maximal_not_maximum),
        Claim("paley_25_maximal_sizes", {"p": 5, "s": 2}, [3, 5],
              "published: maximal clique of size (q+1)/2 in P_{q^2}, q=5; omega = 5",
              lambda: _maximal_sizes_contain(5, 2, [3, 5])),
        Claim("paley_49_maximal_sizes", {"p": 7, "s": 2}, [5, 7],
              "published: maximal clique of size (q+3)/2 in P_{q^2}, q=7; omega = 7",
              lambda: _maximal_sizes_contain(7, 2, [5, 7])),
        Claim("omega_peisert_49", {"p": 7, "s": 2}, 7, "published: omega(P*_q) = sqrt(q) when s/2 is odd",
              lambda: _omega("peisert", 7, 2)),
        Claim("omega_peisert_121", {"p": 11, "s": 2}, 11, "published: omega(P*_q) = sqrt(q) when s/2 is odd",
              lambda: _omega("peisert", 11, 2)),
        Claim("peisert_49_sum_decomposition", {"p": 7, "s": 2},
              {"clique_size": 7, "distinct": True, "covers": True},
              "published: F_q = C + g^2 C for a maximum clique C", _decomposition49),
        Claim("quadruple_81_sqrt_refuted", {"q": 81, "p": 3}, {"bound": 8, "n": 7},
              "derived: Lucas refutation with p=3, r=1", lambda: _refutation(81, 3)),
        Claim("quadruple_81_omega_within_bound", {"q": 81, "p": 3, "d": 4}, True,
              "derived: solver omega(GP(81,4)) <= 8", _gp81_consistent),
        Claim("quadruple_2401_sqrt_refuted", {"q": 2401, "p": 7}, {"bound": 48, "n": 36},
              "derived: Lucas refutation with p=7, r=1", lambda: _refutation(2401, 7)),
    ]
    for q, (p, s) in [(7, (7, 4)), (9, (3, 8)), (11, (11, 4))]:
        out.append(Claim(f"conjecture_evidence_q{q}", {"p": p, "s": s}, None,
                         "evidence only: is F_q maximal in P*_{q^4}",
                         lambda p=p, s=s: _conjecture_evidence(p, s), blocking=False))
    return out


def run_claim(c: Claim) -> SuiteResult:
    t0 = time.monotonic()
    computed = c.compute()
    elapsed = (time.monotonic() - t0) * 1000.0
    passed = (computed == c.expected) if c.blocking else None
    return SuiteResult(c.claim, c.params, c.expected, c.provenance, computed, passed,
                       round(elapsed, 3), c.tier)


def run_suite(tier: str = "fast", ledger=None, select=None, on_result=None) -> list[SuiteResult]:
    """Run the claims of ``tier`` (``full`` includes ``fast``) and log them."""
    if tier not in ("fast", "full"):
        raise ValueError(f"unknown tier {tier!r}")
    results = []
    for c in claims():
        if tier == "fast" and c.tier == "full":
            continue
        if select is not None and c.claim not in select:
            continue
        res = run_claim(c)
        results.append(res)
        if ledger is not None:
            with open(ledger, "a") as fh:
                fh.write(res.to_json() + "\n")
        if on_result is not None:
            on_result(res)
    return results


def all_passed(results) -> bool:
    return all(r.passed is not False for r in results)
