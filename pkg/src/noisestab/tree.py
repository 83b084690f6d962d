"""Noise stability on a tree whose edges are independent BSC channels.

A uniform string is broadcast from any vertex and crosses every edge through
its own BSC(eps). Players sit on a subset of vertices and each applies its own
Boolean function to the string it receives. The joint law of all vertex
strings does not depend on where the broadcast starts.

Exact values come from message passing: with the tree rooted at ``r``,

    M_v(y) = [f_v(y) if v is a player else 1] * prod_{children c} (T_{eps(v,c)} M_c)(y)

and ``E prod f_v(Y^v) = 2**-n sum_y M_r(y)``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .cube import BooleanFunction
from .noise import noisy_direct


@dataclass(frozen=True)
class BroadcastTree:
    num_vertices: int
    edges: tuple[tuple[int, int, float], ...]
    n: int

    def __post_init__(self):
        edges = tuple((int(u), int(v), float(e)) for u, v, e in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.num_vertices < 1:
            raise ValueError("tree needs at least one vertex")
        if len(edges) != self.num_vertices - 1:
            raise ValueError(f"a tree on {self.num_vertices} vertices has {self.num_vertices - 1} edges, got {len(edges)}")
        for u, v, eps in edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices) or u == v:
                raise ValueError(f"bad edge ({u}, {v})")
            if not 0.0 <= eps <= 0.5:
                raise ValueError(f"edge ({u}, {v}) has eps {eps} outside [0, 1/2]")
        seen = self._bfs(0)[0]
        if len(seen) != self.num_vertices:
            raise ValueError("edge list is not connected, so it is not a tree")

    @classmethod
    def uniform(cls, num_vertices: int, pairs, eps: float, n: int) -> "BroadcastTree":
        return cls(num_vertices, tuple((u, v, eps) for u, v in pairs), n)

    @classmethod
    def path(cls, length: int, eps: float, n: int) -> "BroadcastTree":
        """Path on vertices ``0..length``."""
        return cls.uniform(length + 1, [(i, i + 1) for i in range(length)], eps, n)

    @classmethod
    def star(cls, leaves: int, eps: float, n: int) -> "BroadcastTree":
        """Centre 0 joined to leaves ``1..leaves``."""
        return cls.uniform(leaves + 1, [(0, i) for i in range(1, leaves + 1)], eps, n)

    def adjacency(self) -> list[list[tuple[int, float]]]:
        adj = [[] for _ in range(self.num_vertices)]
        for u, v, eps in self.edges:
            adj[u].append((v, eps))
            adj[v].append((u, eps))
        return adj

    def _bfs(self, root: int):
        """BFS order and parent map ``child -> (parent, eps)``."""
        adj = self.adjacency()
        order, parent = [root], {root: None}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, eps in adj[u]:
                if v not in parent:
                    parent[v] = (u, eps)
                    order.append(v)
                    queue.append(v)
        return order, parent


def _check_players(tree: BroadcastTree, players: Mapping[int, BooleanFunction]) -> None:
    if not players:
        raise ValueError("need at least one player")
    for v, f in players.items():
        if not 0 <= v < tree.num_vertices:
            raise ValueError(f"player vertex {v} not in tree")
        if f.n != tree.n:
            raise ValueError(f"player at {v} has dimension {f.n}, tree strings have {tree.n}")


def _message_pass(tree: BroadcastTree, factors: Mapping[int, np.ndarray], root: int) -> float:
    order, parent = tree._bfs(root)
    messages: dict[int, np.ndarray] = {}
    for v in reversed(order):
        msg = messages.pop(v, None)
        if v in factors:
            msg = factors[v] if msg is None else msg * factors[v]
        if msg is None:
            msg = np.ones(1 << tree.n)
        link = parent[v]
        if link is None:
            return float(msg.mean())
        u, eps = link
        sent = noisy_direct(msg, tree.n, eps)
        messages[u] = sent if u not in messages else messages[u] * sent
    raise AssertionError("root not reached")


def tree_correlation(tree: BroadcastTree, players: Mapping[int, BooleanFunction], root: int = 0) -> float:
    """``E prod_{v in S} f_v(Y^v)``."""
    _check_players(tree, players)
    return _message_pass(tree, {v: f.table.astype(float) for v, f in players.items()}, root)


def tree_agreement(tree: BroadcastTree, players: Mapping[int, BooleanFunction], root: int = 0) -> float:
    """Probability that every player outputs the same bit."""
    _check_players(tree, players)
    ones = _message_pass(tree, {v: f.table.astype(float) for v, f in players.items()}, root)
    zeros = _message_pass(tree, {v: (~f.table).astype(float) for v, f in players.items()}, root)
    return ones + zeros


def path_dictator_bound(gaps, eps: float) -> float:
    """``2**-(l+1) * prod_j (1 + (1 - 2 eps)**gap_j)`` for players at gaps ``gap_1..gap_l`` on a path."""
    gaps = list(gaps)
    if not gaps:
        raise ValueError("need at least one gap (two players)")
    if any(int(g) != g or g < 1 for g in gaps):
        raise ValueError("gaps must be positive integers")
    out = 0.5
    for g in gaps:
        out *= 0.5 * (1.0 + (1.0 - 2.0 * eps) ** int(g))
    return out


def tree_mc_estimate(
    tree: BroadcastTree,
    players: Mapping[int, BooleanFunction],
    samples: int,
    seed: int,
    chunk: int = 1 << 16,
) -> tuple[float, float]:
    """Monte Carlo estimate of ``tree_correlation`` and its standard error.

    Samples are drawn in chunks, each from its own child of
    ``SeedSequence(seed)``, so the estimate depends only on ``seed``,
    ``samples`` and ``chunk``.
    """
    _check_players(tree, players)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    order, parent = tree._bfs(0)
    weights = 1 << np.arange(tree.n, dtype=np.int64)
    nchunks = -(-samples // chunk)
    total = 0.0
    for cs, child in enumerate(np.random.SeedSequence(seed).spawn(nchunks)):
        rng = np.random.default_rng(child)
        m = min(chunk, samples - cs * chunk)
        strings: dict[int, np.ndarray] = {}
        prod = np.ones(m, dtype=bool)
        for v in order:
            link = parent[v]
            if link is None:
                strings[v] = rng.random((m, tree.n)) < 0.5
            else:
                u, eps = link
                strings[v] = strings[u] ^ (rng.random((m, tree.n)) < eps)
            if v in players:
                prod &= players[v].table[strings[v] @ weights]
        total += float(np.count_nonzero(prod))
    est = total / samples
    if samples == 1:
        return est, 0.0
    # outcomes are 0/1, so the sample variance is est(1-est) * N/(N-1)
    var = est * (1.0 - est) * samples / (samples - 1)
    return est, float(np.sqrt(max(var, 0.0) / samples))


# JSON input -------------------------------------------------------------------


def load_tree_json(text: str) -> tuple[BroadcastTree, dict[int, BooleanFunction]]:
    """Parse ``{n, edges: [[u, v, eps], ...], players: [{v, table_hex}, ...]}``.

    The vertex count is one more than the largest vertex id mentioned, unless
    ``num_vertices`` is given.
    """
    data = json.loads(text)
    n = int(data["n"])
    edges = [tuple(e) for e in data.get("edges", [])]
    ids = [int(x) for e in edges for x in e[:2]] + [int(p["v"]) for p in data["players"]]
    num_vertices = int(data.get("num_vertices", max(ids, default=0) + 1))
    tree = BroadcastTree(num_vertices, tuple(edges), n)
    players = {int(p["v"]): BooleanFunction.from_hex(n, p["table_hex"]) for p in data["players"]}
    if len(players) != len(data["players"]):
        raise ValueError("duplicate player vertex")
    return tree, players


def dump_tree_json(tree: BroadcastTree, players: Mapping[int, BooleanFunction], indent: Optional[int] = None) -> str:
    return json.dumps(
        {
            "n": tree.n,
            "num_vertices": tree.num_vertices,
            "edges": [list(e) for e in tree.edges],
            "players": [{"v": v, "table_hex": f.to_hex()} for v, f in sorted(players.items())],
        },
        indent=indent,
    )
