"""Clique verification, exact maximum clique search and maximal-clique sizes."""

from __future__ import annotations

import json
import os
import threading
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import _kernel
from .cayley import DEFAULT_MATERIALIZE_CAP, CayleyGraph
from .errors import ParameterError, ResourceLimitError

NAIVE_CAP = 150
ENUMERATION_CAP = 4000
_SCAN_CHUNK = 1 << 20
_NODE_SLICE = 200_000


@dataclass
class CliqueCertificate:
    vertices: list[int]
    verified_clique: bool = False
    verified_maximal: bool = False
    verified_maximum: bool = False
    upper_bound: int | None = None
    upper_bound_source: str | None = None
    complete: bool = True
    elapsed_ms: float = 0.0
    nodes_explored: int = 0
    graph: dict | None = None

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def status(self) -> str:
        if self.verified_maximum:
            return "maximum"
        if self.verified_maximal:
            return "maximal"
        if self.verified_clique:
            return "clique"
        return "unverified"

    def to_dict(self) -> dict:
        return {
            "graph": self.graph,
            "omega": self.size if self.complete else None,
            "lower_bound": self.size,
            "witness": list(self.vertices),
            "status": self.status,
            "complete": self.complete,
            "upper_bound": self.upper_bound,
            "upper_bound_source": self.upper_bound_source,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "nodes_explored": self.nodes_explored,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass
class SolverConfig:
    """Knobs for :func:`max_clique`.

    ``symmetry`` selects how much of the Cayley structure is used:
    ``"none"`` searches the whole graph, ``"vertex"`` uses
    ``omega = 1 + omega(N(0))``, and ``"orbit"`` additionally fixes the
    second vertex to one representative ``g^c`` per allowed residue class
    (multiplication by ``g^m`` fixes 0 and permutes each class
    transitively).
    """

    time_limit: float | None = None
    threads: int = 1
    materialize_cap: int = DEFAULT_MATERIALIZE_CAP
    deterministic: bool = True
    symmetry: str = "orbit"

    @classmethod
    def from_env(cls, **overrides) -> SolverConfig:
        cfg = cls()
        if "CAYLEYCLIQUES_THREADS" in os.environ:
            cfg.threads = int(os.environ["CAYLEYCLIQUES_THREADS"])
        if "CAYLEYCLIQUES_TIME_LIMIT" in os.environ:
            cfg.time_limit = float(os.environ["CAYLEYCLIQUES_TIME_LIMIT"])
        if "CAYLEYCLIQUES_MATERIALIZE_CAP" in os.environ:
            cfg.materialize_cap = int(os.environ["CAYLEYCLIQUES_MATERIALIZE_CAP"])
        for k, v in overrides.items():
            if v is not None:
                setattr(cfg, k, v)
        return cfg


# -- verification ---------------------------------------------------------

def _as_vertex_array(graph: CayleyGraph, vertices) -> np.ndarray:
    arr = np.asarray(sorted(int(v) for v in vertices), dtype=np.int64)
    if len(arr) and (arr[0] < 0 or arr[-1] >= graph.q):
        raise ParameterError("vertex index out of range")
    if len(np.unique(arr)) != len(arr):
        raise ParameterError("duplicate vertices")
    return arr


def is_clique(graph: CayleyGraph, vertices) -> bool:
    arr = _as_vertex_array(graph, vertices)
    for i in range(len(arr) - 1):
        if not graph.adjacent_to(arr[i + 1:], arr[i]).all():
            return False
    return True


def extending_vertex(graph: CayleyGraph, vertices) -> int | None:
    """Smallest vertex outside ``vertices`` adjacent to all of them, or None.

    Candidates are scanned in ascending index order, chunk by chunk; each
    candidate drops out at its first non-adjacent member.
    """
    arr = _as_vertex_array(graph, vertices)
    inside = set(arr.tolist())
    for start in range(0, graph.q, _SCAN_CHUNK):
        cand = np.arange(start, min(start + _SCAN_CHUNK, graph.q), dtype=np.int64)
        if inside:
            cand = cand[~np.isin(cand, arr)]
        for v in arr:
            cand = cand[graph.adjacent_to(cand, v)]
            if not len(cand):
                break
        if len(cand):
            return int(cand[0])
    return None


def is_maximal_clique(graph: CayleyGraph, vertices) -> tuple[bool, int | None]:
    """``(True, None)`` if maximal, else ``(False, smallest extending vertex)``."""
    if not is_clique(graph, vertices):
        raise ParameterError("vertex set is not a clique")
    w = extending_vertex(graph, vertices)
    return w is None, w


def certify(graph: CayleyGraph, vertices, upper_bound=None, source=None) -> CliqueCertificate:
    """Independently verify a clique and attach an upper bound if given."""
    cert = CliqueCertificate(vertices=sorted(int(v) for v in vertices), graph=graph.descriptor())
    cert.verified_clique = is_clique(graph, cert.vertices)
    if cert.verified_clique:
        cert.verified_maximal = extending_vertex(graph, cert.vertices) is None
        if upper_bound is not None and cert.size == upper_bound:
            cert.verified_maximum = True
    cert.upper_bound = upper_bound
    cert.upper_bound_source = source
    return cert


# -- exact search -----------------------------------------------------------

def degeneracy_order(rows: np.ndarray) -> np.ndarray:
    """Positions ordered so that the last-removed minimum-degree vertex comes first.

    Ties go to the smallest position, so the order is deterministic.
    """
    n = rows.shape[0]
    dense = np.unpackbits(rows.view(np.uint8), axis=1, bitorder="little")[:, :n].astype(bool)
    deg = dense.sum(axis=1).astype(np.int64)
    alive = np.ones(n, dtype=bool)
    removal = []
    big = n + 1
    for _ in range(n):
        v = int(np.argmin(np.where(alive, deg, big)))
        removal.append(v)
        alive[v] = False
        deg -= dense[v]
    return np.array(removal[::-1], dtype=np.int64)


@dataclass
class _Subproblem:
    prefix: list[int]
    vertices: np.ndarray  # original indices, in bit-position order
    adj: np.ndarray  # int64 bitset rows
    tasks: list = dc_field(default_factory=list)  # (vertex position, colour, candidate bitset)


def _build_subproblem(graph: CayleyGraph, prefix, candidates, cap) -> _Subproblem:
    candidates = np.asarray(candidates, dtype=np.int64)
    rows = graph.bitset_rows(candidates, cap=cap)
    order = degeneracy_order(rows)
    verts = candidates[order]
    adj = graph.bitset_rows(verts, cap=cap).view(np.int64)
    return _Subproblem(prefix=list(prefix), vertices=verts, adj=adj)


def _top_level_tasks(sub: _Subproblem):
    n, W = sub.adj.shape
    full = np.zeros(W, dtype=np.int64)
    for v in range(n):
        full[v >> 6] |= np.int64(1) << np.int64(v & 63)
    lst = np.empty(n, np.int32)
    col = np.empty(n, np.int32)
    cnt = _kernel.color_sort(sub.adj, full, 1, lst, col, np.empty(W, np.int64), np.empty(W, np.int64))
    remaining = full.copy()
    tasks = []
    for i in range(cnt - 1, -1, -1):
        v = int(lst[i])
        remaining[v >> 6] &= ~(np.int64(1) << np.int64(v & 63))
        tasks.append((v, int(col[i]), remaining & sub.adj[v]))
    sub.tasks = tasks


class _Searcher:
    """Runs top-level tasks against a shared incumbent."""

    def __init__(self, subs, best, deadline):
        self.subs = subs
        self.best = best
        self.deadline = deadline
        self.nodes = 0
        self.timed_out = False
        self.lock = threading.Lock()
        self.results = []  # (task key, clique)

    def run_task(self, key, stop_first=False):
        si, ti = key
        sub = self.subs[si]
        v, colour, cand = sub.tasks[ti]
        base = len(sub.prefix) + 1
        if base - 1 + colour <= self.best[0]:
            return None
        n, W = sub.adj.shape
        depth_cap = int(_kernel.count_colors(sub.adj, cand)) + 2
        P = np.zeros((depth_cap, W), np.int64)
        lst = np.zeros((depth_cap, n), np.int32)
        col = np.zeros((depth_cap, n), np.int32)
        pos = np.full(depth_cap, -1, np.int64)
        R = np.zeros(depth_cap, np.int32)
        found = np.zeros(depth_cap, np.int32)
        meta = np.zeros(4, np.int64)
        U = np.zeros(W, np.int64)
        Q = np.zeros(W, np.int64)
        clique = None
        while True:
            if self.deadline is not None and time.monotonic() > self.deadline:
                self.timed_out = True
                break
            status = _kernel.search(sub.adj, cand, base, self.best, stop_first, _NODE_SLICE,
                                    P, lst, col, pos, R, found, meta, U, Q)
            if meta[2] >= 0:
                clique = sub.prefix + [int(sub.vertices[v])] + [int(sub.vertices[u]) for u in found[:meta[2]]]
                if stop_first:
                    break
            if status == _kernel.FINISHED:
                break
        with self.lock:
            self.nodes += int(meta[3])
            if clique is not None:
                self.results.append((key, clique))
        return clique


def _subproblems(graph: CayleyGraph, cfg: SolverConfig) -> list[_Subproblem]:
    everything = np.arange(graph.q, dtype=np.int64)
    if cfg.symmetry == "none":
        return [_build_subproblem(graph, [], everything, cfg.materialize_cap)]
    nbrs = graph.neighbors(0)
    if cfg.symmetry == "vertex":
        return [_build_subproblem(graph, [0], nbrs, cfg.materialize_cap)]
    if cfg.symmetry != "orbit":
        raise ParameterError(f"unknown symmetry mode {cfg.symmetry!r}")
    subs = []
    for c in sorted(graph.S.allowed):
        rep = int(graph.field.exp[c])
        common = nbrs[graph.adjacent_to(nbrs, rep)]
        subs.append(_build_subproblem(graph, [0, rep], common, cfg.materialize_cap))
    return subs


def max_clique(graph: CayleyGraph, config: SolverConfig | None = None) -> CliqueCertificate:
    """Exact clique number with a witness, by colouring-bounded branch and bound.

    With a time limit the best clique found so far is returned and the
    certificate is flagged incomplete.  For a fixed graph the witness does
    not depend on the thread count.
    """
    cfg = config or SolverConfig()
    if graph.q > cfg.materialize_cap:
        raise ResourceLimitError(f"q = {graph.q} exceeds the materialization cap {cfg.materialize_cap}")
    t0 = time.monotonic()
    deadline = None if cfg.time_limit is None else t0 + cfg.time_limit
    subs = _subproblems(graph, cfg)
    for sub in subs:
        _top_level_tasks(sub)
    keys = [(si, ti) for si, sub in enumerate(subs) for ti in range(len(sub.tasks))]

    # Any prefix is itself a clique; seed the incumbent with the largest.
    seed = max((sub.prefix for sub in subs), key=len)
    best = np.array([len(seed)], dtype=np.int64)
    searcher = _Searcher(subs, best, deadline)

    if cfg.threads <= 1:
        for key in keys:
            searcher.run_task(key)
            if searcher.timed_out:
                break
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            list(pool.map(searcher.run_task, keys))

    omega = max([len(c) for _, c in searcher.results], default=len(seed))
    witness = seed
    if searcher.results:
        if cfg.threads <= 1:
            # results are appended in search order with strictly growing size
            witness = searcher.results[-1][1]
        elif searcher.timed_out:
            witness = max(searcher.results, key=lambda kc: (len(kc[1]), [-x for x in kc[0]]))[1]
        else:
            witness = _canonical_witness(subs, omega, deadline, searcher)
    complete = not searcher.timed_out
    cert = certify(graph, witness, upper_bound=omega if complete else None,
                   source="exhaustive" if complete else None)
    cert.complete = complete
    cert.elapsed_ms = (time.monotonic() - t0) * 1000.0
    cert.nodes_explored = searcher.nodes
    return cert


def _canonical_witness(subs, omega, deadline, first):
    """First clique of size ``omega`` in sequential search order.

    A sequential search meets its final witness at the first omega-clique
    of the task/DFS order, because branches containing an omega-clique are
    never pruned before one is found.  Re-running with the incumbent fixed
    at ``omega - 1`` and stopping at the first hit reproduces it.
    """
    best = np.array([omega - 1], dtype=np.int64)
    searcher = _Searcher(subs, best, deadline)
    for si, sub in enumerate(subs):
        for ti in range(len(sub.tasks)):
            clique = searcher.run_task((si, ti), stop_first=True)
            if clique is not None and len(clique) == omega:
                first.nodes += searcher.nodes
                return clique
    raise AssertionError("omega-clique vanished on re-search")  # pragma: no cover


# -- independent oracle -----------------------------------------------------

def _int_bitsets(graph: CayleyGraph) -> list[int]:
    everything = np.arange(graph.q, dtype=np.int64)
    rows = []
    for v in range(graph.q):
        mask = graph.adjacent_to(everything, v)
        rows.append(int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little"))
    return rows


def naive_max_clique(graph: CayleyGraph) -> CliqueCertificate:
    """Exhaustive search over the full graph with Python integer bitsets.

    The only cut is ``|clique| + |candidates| <= best``; no colouring, no
    symmetry.  Meant as a cross-check for small graphs.
    """
    if graph.q > NAIVE_CAP:
        raise ResourceLimitError(f"q = {graph.q} exceeds the oracle cap {NAIVE_CAP}")
    t0 = time.monotonic()
    adj = _int_bitsets(graph)
    best: list[int] = []
    nodes = 0

    def expand(clique, cand):
        nonlocal best, nodes
        nodes += 1
        if not cand:
            if len(clique) > len(best):
                best = list(clique)
            return
        while cand:
            if len(clique) + cand.bit_count() <= len(best):
                return
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            clique.append(v)
            expand(clique, cand & adj[v])
            clique.pop()

    expand([], (1 << graph.q) - 1)
    cert = certify(graph, best, upper_bound=len(best), source="exhaustive")
    cert.elapsed_ms = (time.monotonic() - t0) * 1000.0
    cert.nodes_explored = nodes
    return cert


# -- maximal clique sizes ---------------------------------------------------

def enumerate_maximal_clique_sizes(graph: CayleyGraph, cap: int = ENUMERATION_CAP) -> Counter:
    """Number of maximal cliques of each size, over the whole graph.

    Only cliques through vertex 0 are enumerated (Bron-Kerbosch with
    pivoting on ``N(0)``); by vertex transitivity each size-k maximal clique
    is counted k times across the q translates, so the whole-graph count is
    ``q * count_through_0 / k``.
    """
    if graph.q > cap:
        raise ResourceLimitError(f"q = {graph.q} exceeds the enumeration cap {cap}")
    nbrs = graph.neighbors(0)
    n = len(nbrs)
    adj = []
    for v in nbrs:
        mask = graph.adjacent_to(nbrs, v)
        adj.append(int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little"))
    through_zero: Counter = Counter()

    def bk(size, P, X):
        if not P and not X:
            through_zero[size] += 1
            return
        PX = P | X
        pivot, best_cover = -1, -1
        while PX:
            u = PX.bit_length() - 1
            PX &= ~(1 << u)
            cover = (P & adj[u]).bit_count()
            if cover > best_cover:
                pivot, best_cover = u, cover
        todo = P & ~adj[pivot]
        while todo:
            v = todo.bit_length() - 1
            bit = 1 << v
            todo &= ~bit
            bk(size + 1, P & adj[v], X & adj[v])
            P &= ~bit
            X |= bit

    bk(1, (1 << n) - 1, 0)
    return Counter({k: graph.q * c // k for k, c in through_zero.items()})
