"""Cliques that are vector spaces over a subfield.

Starting from a subfield ``K = F_{p^t}`` that is a clique, a K-subspace
clique ``V`` is grown one direction at a time: whenever some ``g`` outside
``V`` is adjacent to all of ``V``, the span ``V + gK`` is again a clique as
long as the connection set is closed under multiplication and contains -1.
The loop stops at a subspace clique that is maximal as a clique.

Peisert sets are not multiplicatively closed, so they get their own routine
for quartic orders, which either certifies ``F_{p^r}`` maximal or produces a
clique of size sqrt(q) of the form ``F_{p^r} + h F_{p^r}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from .cayley import CayleyGraph, peisert_graph
from .cliques import CliqueCertificate, certify, extending_vertex, is_clique
from .errors import ParameterError
from .gf import FiniteField


def span_over_subfield(field: FiniteField, t: int, elements) -> np.ndarray:
    """Sorted distinct elements of the ``F_{p^t}``-span of ``elements``."""
    K = field.subfield_elements(t)
    span = np.zeros(1, dtype=np.int64)
    for b in elements:
        Kb = field.mul(K, int(b))
        span = np.unique(field.add(span[:, None], Kb[None, :]).ravel())
    return span


@dataclass(frozen=True, eq=False)
class SubspaceClique:
    """A clique given by a basis over ``K = F_{p^t}``."""

    graph: CayleyGraph
    t: int
    basis: tuple

    def __post_init__(self):
        expected = (self.graph.field.p ** self.t) ** len(self.basis)
        if len(self.span) != expected:
            raise ParameterError(f"basis {list(self.basis)} is linearly dependent over F_{self.graph.field.p}^{self.t}")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def span(self) -> np.ndarray:
        return span_over_subfield(self.graph.field, self.t, self.basis)

    def to_dict(self, maximal: bool | None = None) -> dict:
        f = self.graph.field
        out = {
            "p": f.p,
            "s": f.s,
            "t": self.t,
            "basis": [int(b) for b in self.basis],
            "dim": self.dim,
            "span_size": int(len(self.span)),
        }
        if maximal is not None:
            out["maximal"] = bool(maximal)
        return out


@dataclass
class ExtensionResult:
    outcome: str  # "maximal" or "extended"
    certificate: SubspaceClique
    witness: int | None = None
    steps: list = dc_field(default_factory=list)
    maximum: CliqueCertificate | None = None
    basis_ok: bool | None = None

    def to_dict(self) -> dict:
        out = {
            "outcome": self.outcome,
            "witness": self.witness,
            "steps": list(self.steps),
            "subspace": self.certificate.to_dict(maximal=self.outcome == "maximal"),
        }
        if self.maximum is not None:
            out["maximum_clique"] = self.maximum.to_dict()
        if self.basis_ok is not None:
            out["basis_ok"] = self.basis_ok
        return out


def _subfield_divisibility(graph: CayleyGraph, t: int) -> bool | None:
    f, S = graph.field, graph.S
    if S.family != "gp":
        return None
    return ((f.q - 1) // (f.p**t - 1)) % S.d == 0


def subfield_clique(graph: CayleyGraph, t: int) -> SubspaceClique:
    """``F_{p^t}`` as a dimension-one subspace clique, after checking it is one.

    For GP(q, d) the divisibility criterion ``d | (q-1)/(p^t-1)`` is
    evaluated as well as the direct pairwise check; the two must agree.
    """
    f = graph.field
    K = f.subfield_elements(t)
    direct = is_clique(graph, K)
    criterion = _subfield_divisibility(graph, t)
    if criterion is not None and criterion != direct:
        raise AssertionError(f"subfield criterion and direct check disagree for t={t}")
    if not direct:
        raise ParameterError(f"F_{f.p}^{t} is not a clique in {graph!r}")
    return SubspaceClique(graph, t, (1,))


def _require_closed(graph: CayleyGraph):
    S = graph.S
    if not (S.multiplicatively_closed and S.contains_minus_one):
        raise ParameterError(
            "subspace extension needs a multiplicatively closed connection set containing -1"
        )


def extend_by_vertex(graph: CayleyGraph, V: SubspaceClique, g: int) -> SubspaceClique:
    """``V + gK`` for a vertex ``g`` adjacent to every element of ``V``."""
    _require_closed(graph)
    span = V.span
    if 1 not in set(span.tolist()):
        raise ParameterError("subspace does not contain the subfield K")
    g = int(g)
    if g in set(span.tolist()):
        raise ParameterError(f"vertex {g} already lies in the subspace")
    if not graph.adjacent_to(span, g).all():
        raise ParameterError(f"vertex {g} is not adjacent to the whole subspace")
    W = SubspaceClique(graph, V.t, V.basis + (g,))
    if not is_clique(graph, W.span):
        raise AssertionError(f"span after adding {g} is not a clique")
    return W


def maximal_subspace_clique(graph: CayleyGraph, t: int) -> ExtensionResult:
    """Grow ``F_{p^t}`` until the subspace is a maximal clique.

    Each step adds the smallest vertex (by index) adjacent to the current
    span, so the result is reproducible.
    """
    _require_closed(graph)
    V = subfield_clique(graph, t)
    steps = []
    while True:
        w = extending_vertex(graph, V.span)
        if w is None:
            return ExtensionResult("maximal", V, steps=steps)
        steps.append(w)
        V = extend_by_vertex(graph, V, w)


def basis_check(field: FiniteField, t: int, elements) -> bool:
    """True iff ``elements`` form a basis of ``F_q`` over ``F_{p^t}``."""
    if t < 1 or field.s % t:
        raise ParameterError(f"subfield degree {t} does not divide {field.s}")
    if len(elements) != field.s // t:
        raise ParameterError(f"a basis over F_{field.p}^{t} has {field.s // t} elements, got {len(elements)}")
    return len(span_over_subfield(field, t, elements)) == field.q


@dataclass
class DecompositionCheck:
    distinct: bool
    covers: bool
    sums: int

    @property
    def holds(self) -> bool:
        return self.distinct and self.covers

    def __bool__(self):
        return self.holds


def sqrt_decomposition_check(graph: CayleyGraph, C, g: int | None = None) -> DecompositionCheck:
    """Check the sums ``u + g^2 v`` (u, v in C) are distinct and cover the field."""
    if not is_clique(graph, C):
        raise ParameterError("C is not a clique")
    f = graph.field
    g = f.generator_index if g is None else int(g)
    C = np.asarray(sorted(int(c) for c in C), dtype=np.int64)
    g2C = f.mul(C, f.mul(g, g))
    sums = f.add(C[:, None], g2C[None, :]).ravel()
    n_distinct = len(np.unique(sums))
    distinct = n_distinct == len(sums)
    return DecompositionCheck(distinct=distinct, covers=distinct and n_distinct == f.q, sums=len(sums))


def peisert_quartic_dichotomy(field: FiniteField) -> ExtensionResult:
    """Decide whether ``F_{p^r}`` is a maximal clique in ``P*_q``, ``q = p^{4r}``.

    If some ``h`` extends it, ``C = F_{p^r} + h F_{p^r}`` is verified to be a
    clique of size sqrt(q) (hence maximum) and ``{1, h, g^2, g^2 h}`` is
    checked to be a basis over ``F_{p^r}``.
    """
    if field.p % 4 != 3:
        raise ParameterError(f"need p = 3 mod 4, got p = {field.p}")
    if field.s % 4:
        raise ParameterError(f"need s divisible by 4, got s = {field.s}")
    r = field.s // 4
    graph = peisert_graph(field)
    V = subfield_clique(graph, r)
    h = extending_vertex(graph, V.span)
    if h is None:
        return ExtensionResult("maximal", V)

    C = SubspaceClique(graph, r, (1, h))
    root = math.isqrt(field.q)
    maximum = certify(graph, C.span, upper_bound=root, source="peisert_sqrt")
    if not (maximum.verified_clique and maximum.size == root):
        raise AssertionError(f"F + hF for h = {h} is not a clique of size {root}")
    g = field.generator_index
    g2 = int(field.mul(g, g))
    basis = [1, h, g2, int(field.mul(g2, h))]
    return ExtensionResult("extended", C, witness=h, steps=[h], maximum=maximum,
                           basis_ok=basis_check(field, r, basis))
