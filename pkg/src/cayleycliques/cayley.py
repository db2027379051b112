"""Connection sets and Cayley graphs on the additive group of GF(q).

A connection set is a union of discrete-log residue classes modulo ``m``:
``S = {g^j : j mod m in allowed}``.  The nonzero d-th powers are the class
``{0}`` mod d, and the Peisert set is ``{0, 1}`` mod 4.  Adjacency is read
off a per-element membership table, so graphs of order close to a million
never need an adjacency matrix.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field as dc_field
from typing import Iterator

import numpy as np

from .errors import ParameterError, ResourceLimitError
from .gf import DEFAULT_MAX_ORDER, FiniteField, build_field

DEFAULT_MATERIALIZE_CAP = 1 << 16
DEFAULT_EXPORT_CAP = 1 << 14


@dataclass(frozen=True, eq=False)
class ConnectionSet:
    """Symmetric union of residue classes; built by the ``*_connection_set`` functions."""

    field: FiniteField
    m: int
    allowed: frozenset
    family: str
    d: int | None = None
    multiplicatively_closed: bool = False
    contains_minus_one: bool = False
    member: np.ndarray = dc_field(repr=False, default=None)

    @property
    def size(self) -> int:
        return (self.field.q - 1) * len(self.allowed) // self.m

    def __contains__(self, x) -> bool:
        return bool(self.member[int(x)])

    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.member)

    def descriptor(self) -> dict:
        out = {
            "family": self.family,
            "class_modulus": self.m,
            "allowed_classes": sorted(self.allowed),
        }
        if self.d is not None:
            out["d"] = self.d
        return out


def _classes_closed_under_addition(allowed, m) -> bool:
    return all((a + b) % m in allowed for a in allowed for b in allowed)


def _make(field: FiniteField, m: int, allowed, family: str, d=None) -> ConnectionSet:
    allowed = frozenset(int(c) % m for c in allowed)
    if not allowed:
        raise ParameterError("allowed class set is empty")
    table = field.class_table_for(m)
    mask = np.zeros(m, dtype=bool)
    mask[sorted(allowed)] = True
    member = mask[table]
    member[0] = False
    member.flags.writeable = False

    elems = np.flatnonzero(member)
    if not member[field.neg(elems)].all():
        raise ParameterError(f"connection set with classes {sorted(allowed)} mod {m} is not symmetric")
    minus_one = int(field.neg(1))
    return ConnectionSet(
        field=field,
        m=m,
        allowed=allowed,
        family=family,
        d=d,
        multiplicatively_closed=_classes_closed_under_addition(allowed, m),
        contains_minus_one=bool(member[minus_one]),
        member=member,
    )


def gp_connection_set(field: FiniteField, d: int) -> ConnectionSet:
    """Nonzero d-th powers, the connection set of GP(q, d)."""
    if d <= 1:
        raise ParameterError(f"d = {d} must exceed 1")
    if (field.q - 1) % (2 * d):
        raise ParameterError(f"q = {field.q} is not 1 mod 2d = {2 * d}")
    return _make(field, d, {0}, "gp", d=d)


def peisert_connection_set(field: FiniteField) -> ConnectionSet:
    """``M_q = {g^j : j = 0, 1 mod 4}`` for ``p = 3 mod 4`` and even ``s``."""
    if field.p % 4 != 3:
        raise ParameterError(f"Peisert graphs need p = 3 mod 4, got p = {field.p}")
    if field.s % 2:
        raise ParameterError(f"Peisert graphs need an even extension degree, got s = {field.s}")
    return _make(field, 4, {0, 1}, "peisert")


def custom_connection_set(field: FiniteField, m: int, allowed_classes) -> ConnectionSet:
    return _make(field, m, allowed_classes, "custom")


class CayleyGraph:
    """``Cay(F_q^+; S)``: vertices are field indices, ``u ~ v`` iff ``u - v in S``."""

    def __init__(self, connection_set: ConnectionSet):
        self.S = connection_set
        self.field = connection_set.field
        self.q = self.field.q

    @property
    def degree(self) -> int:
        return self.S.size

    @property
    def member(self) -> np.ndarray:
        return self.S.member

    def __repr__(self):
        return f"CayleyGraph({self.S.family}, q={self.q}, classes={sorted(self.S.allowed)} mod {self.S.m})"

    def descriptor(self) -> dict:
        return {"field": self.field.descriptor(), **self.S.descriptor(), "vertices": self.q, "degree": self.degree}

    def _check_vertex(self, v):
        if not 0 <= int(v) < self.q:
            raise ParameterError(f"vertex {v} out of range [0, {self.q})")

    def adjacent(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise ParameterError("adjacency of a vertex with itself is undefined")
        return bool(self.member[int(self.field.sub(u, v))])

    def adjacent_to(self, candidates, v: int) -> np.ndarray:
        """Boolean mask: which of ``candidates`` are adjacent to ``v``.

        A candidate equal to ``v`` reports False.
        """
        return self.member[self.field.sub(candidates, v)]

    def neighbors(self, v: int) -> np.ndarray:
        self._check_vertex(v)
        return np.sort(self.field.add(self.S.elements(), v))

    def edges(self) -> Iterator[tuple[int, int]]:
        """Unordered edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        everything = np.arange(self.q, dtype=np.int64)
        for u in range(self.q):
            later = everything[u + 1:]
            for v in later[self.adjacent_to(later, u)]:
                yield u, int(v)

    @property
    def num_edges(self) -> int:
        return self.q * self.degree // 2

    def bitset_rows(self, vertices, cap: int = DEFAULT_MATERIALIZE_CAP) -> np.ndarray:
        """Packed adjacency of the subgraph induced on ``vertices``.

        Row ``i`` is a little-endian uint64 bitset over positions in
        ``vertices``.
        """
        vertices = np.asarray(vertices, dtype=np.int64)
        n = len(vertices)
        if n > cap:
            raise ResourceLimitError(f"{n} vertices exceed the materialization cap {cap}")
        words = max(1, (n + 63) // 64)
        rows = np.zeros((n, words * 64), dtype=bool)
        for i, v in enumerate(vertices):
            rows[i, :n] = self.adjacent_to(vertices, v)
        return np.packbits(rows, axis=1, bitorder="little").view(np.uint64).reshape(n, words)

    def export(self, fmt: str, cap: int = DEFAULT_EXPORT_CAP) -> bytes:
        """Serialize as ``dimacs``, ``edge-list`` (0-based) or a ``json`` descriptor."""
        if fmt == "json":
            return (json.dumps(self.descriptor(), sort_keys=True) + "\n").encode()
        if fmt not in ("dimacs", "edge-list"):
            raise ParameterError(f"unknown export format {fmt!r}")
        if self.q > cap:
            raise ResourceLimitError(f"q = {self.q} exceeds the export cap {cap}")
        out = io.StringIO()
        if fmt == "dimacs":
            out.write(f"p edge {self.q} {self.num_edges}\n")
            for u, v in self.edges():
                out.write(f"e {u + 1} {v + 1}\n")
        else:
            for u, v in self.edges():
                out.write(f"{u} {v}\n")
        return out.getvalue().encode()


def self_complement_witness(graph: CayleyGraph, multiplier: int) -> bool:
    """True iff ``x -> multiplier * x`` exchanges edges and non-edges.

    The map is additive, so it suffices to check every nonzero difference:
    ``delta in S`` must hold exactly when ``multiplier * delta`` is not in S.
    """
    if int(multiplier) == 0:
        raise ParameterError("multiplier must be nonzero")
    diffs = np.arange(1, graph.q, dtype=np.int64)
    image = graph.field.mul(diffs, multiplier)
    return bool((graph.member[diffs] != graph.member[image]).all())


def parse_dimacs(data: bytes | str) -> tuple[int, list[tuple[int, int]]]:
    """Read back ``(n, edges)`` from DIMACS text; edges are 0-based."""
    if isinstance(data, bytes):
        data = data.decode()
    n = None
    edges = []
    for line in data.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            n = int(parts[2])
        elif parts[0] == "e":
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
    if n is None:
        raise ParameterError("DIMACS data has no problem line")
    return n, edges


def gp_graph(field: FiniteField, d: int) -> CayleyGraph:
    return CayleyGraph(gp_connection_set(field, d))


def peisert_graph(field: FiniteField) -> CayleyGraph:
    return CayleyGraph(peisert_connection_set(field))


def make_graph(family: str, p: int, s: int, d: int | None = None, m: int | None = None,
               classes=None, max_order: int | None = None) -> CayleyGraph:
    """Build a graph by family name: ``gp`` (needs d), ``peisert`` or ``custom`` (needs m, classes)."""
    field = build_field(p, s, max_order=max_order or DEFAULT_MAX_ORDER)
    if family == "gp":
        if d is None:
            raise ParameterError("family gp needs d")
        return gp_graph(field, d)
    if family == "peisert":
        return peisert_graph(field)
    if family == "custom":
        if m is None or classes is None:
            raise ParameterError("family custom needs m and classes")
        return CayleyGraph(custom_connection_set(field, m, classes))
    raise ParameterError(f"unknown family {family!r}")
