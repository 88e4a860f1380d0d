"""Maximum spanning arborescences and maximal information-flow paths.

The outgoing arborescence is a spanning out-tree: one root (the
information source) with every other node having exactly one incoming
edge.  The incoming arborescence is the mirror image (one sink, every
other node with exactly one outgoing edge) and is solved by running the
same solver on the edge-reversed graph and reversing the result back.

The solver is the classical Chu-Liu/Edmonds cycle-contraction recursion
run once per candidate root, taking the best total over all roots; the
maximization is folded into a minimum-arborescence core by negating
weights.  All ties (equal-weight edges, roots, paths) are broken toward
smaller sector codes so results are fully deterministic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .network import InfoFlowNetwork
from .timeseries import SectorMeta

ORIENTATIONS = ("outgoing", "incoming")

# Exhaustive enumeration is exponential in node count; cap it firmly.
_MAX_ENUMERATION_NODES = 8


@dataclass(frozen=True)
class Arborescence:
    """Spanning directed tree over all sectors, edges in flow direction."""

    orientation: str
    root: int
    sectors: tuple[SectorMeta, ...]
    edges: tuple[tuple[int, int, float], ...]
    total_weight: float

    def __post_init__(self):
        object.__setattr__(self, "sectors", tuple(self.sectors))
        object.__setattr__(self, "edges", tuple(sorted(
            self.edges,
            key=lambda e: (self.sectors[e[0]].code, self.sectors[e[1]].code),
        )))
        n = len(self.sectors)
        if self.orientation not in ORIENTATIONS:
            raise ValueError(f"orientation must be one of {ORIENTATIONS}")
        if not 0 <= self.root < n:
            raise ValueError("root index out of range")
        if len(self.edges) != n - 1:
            raise ValueError("arborescence must have exactly N-1 edges")
        # Outgoing: unique parent per non-root node; incoming: unique child.
        parent: dict[int, int] = {}
        for src, dst, w in self.edges:
            child, par = (dst, src) if self.orientation == "outgoing" else (src, dst)
            if child == self.root:
                raise ValueError("root must not have a tree predecessor")
            if child in parent:
                raise ValueError("node with two tree predecessors")
            parent[child] = par
        if len(parent) != n - 1:
            raise ValueError("some node is disconnected")
        for start in parent:
            node, steps = start, 0
            while node != self.root:
                node = parent[node]
                steps += 1
                if steps > n:
                    raise ValueError("directed cycle in arborescence")

    def __len__(self) -> int:
        return len(self.sectors)


@dataclass(frozen=True)
class InfoFlowPath:
    """Directed path inside an arborescence, nodes listed in flow order."""

    nodes: tuple[SectorMeta, ...]
    total_weight: float

    @property
    def length(self) -> int:
        return len(self.nodes)

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(s.short_code for s in self.nodes)


def _find_parent_cycle(parent: dict[int, int]) -> list[int] | None:
    color: dict[int, int] = {}
    for start in parent:
        if color.get(start, 0):
            continue
        trail = []
        node = start
        while node in parent and color.get(node, 0) == 0:
            color[node] = 1
            trail.append(node)
            node = parent[node]
        hit_cycle = color.get(node, 0) == 1
        for v in trail:
            color[v] = 2
        if hit_cycle:
            return trail[trail.index(node):]
    return None


def _min_arborescence(
    n_nodes: int,
    edges: list[tuple[int, int, float, int]],
    root: int,
    tiekey: dict[int, tuple[str, str]],
) -> list[int] | None:
    """One Chu-Liu/Edmonds recursion level; returns chosen edge ids or None.

    ``edges`` entries are (src, dst, weight, edge_id) in this level's node
    ids; edge_id always refers to the caller's original edge, which keeps
    tie-breaking stable through contractions.
    """
    best: dict[int, tuple[tuple[float, tuple[str, str]], int, int]] = {}
    for u, v, w, eid in edges:
        if v == root or u == v:
            continue
        cand = (w, tiekey[eid])
        if v not in best or cand < best[v][0]:
            best[v] = (cand, u, eid)
    if len(best) != n_nodes - 1:
        return None  # some node is unreachable from this root

    parent = {v: u for v, (_, u, _) in best.items()}
    cycle = _find_parent_cycle(parent)
    if cycle is None:
        return [eid for _, _, eid in best.values()]

    cyc_set = set(cycle)
    remap: dict[int, int] = {}
    nxt = 0
    for v in range(n_nodes):
        if v not in cyc_set:
            remap[v] = nxt
            nxt += 1
    for v in cyc_set:
        remap[v] = nxt
    contracted: list[tuple[int, int, float, int]] = []
    for u, v, w, eid in edges:
        nu, nv = remap[u], remap[v]
        if nu == nv:
            continue
        if v in cyc_set:
            w = w - best[v][0][0]  # entering the cycle displaces v's chosen edge
        contracted.append((nu, nv, w, eid))

    sub = _min_arborescence(nxt + 1, contracted, remap[root], tiekey)
    if sub is None:
        return None
    target_at_level = {eid: v for _, v, _, eid in edges}
    entry_target = next(
        v for v in (target_at_level[eid] for eid in sub) if v in cyc_set
    )
    chosen = list(sub)
    chosen.extend(best[v][2] for v in cycle if v != entry_target)
    return chosen


def _working_edges(
    g: InfoFlowNetwork, orientation: str
) -> tuple[list[tuple[int, int, float, int]], dict[int, tuple[str, str]]]:
    work = []
    tiekey = {}
    for eid, (i, j, w) in enumerate(g.edges):
        u, v = (i, j) if orientation == "outgoing" else (j, i)
        work.append((u, v, -w, eid))
        tiekey[eid] = (g.sectors[u].code, g.sectors[v].code)
    return work, tiekey


def _assemble(g: InfoFlowNetwork, orientation: str, root: int, eids: list[int]) -> Arborescence:
    edges = tuple(g.edges[eid] for eid in sorted(eids))
    total = math.fsum(w for _, _, w in edges)
    return Arborescence(
        orientation=orientation,
        root=root,
        sectors=g.sectors,
        edges=edges,
        total_weight=total,
    )


def max_spanning_arborescence(g: InfoFlowNetwork, orientation: str = "outgoing") -> Arborescence:
    """Best spanning arborescence over all candidate roots.

    Every node is tried as the root; the arborescence with the largest
    total weight wins, with weight ties resolved toward the smaller root
    code.  Raises if no root can reach every node (possible when tied
    pairs were dropped from the network).
    """
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    n = len(g.sectors)
    if n == 0:
        raise ValueError("empty network")
    if n == 1:
        return Arborescence(orientation, 0, g.sectors, (), 0.0)

    work, tiekey = _working_edges(g, orientation)
    best_total = None
    best_root = None
    best_eids = None
    for root in sorted(range(n), key=lambda i: g.sectors[i].code):
        eids = _min_arborescence(n, work, root, tiekey)
        if eids is None:
            continue
        total = math.fsum(g.edges[eid][2] for eid in eids)
        if best_total is None or total > best_total:
            best_total, best_root, best_eids = total, root, eids
    if best_eids is None:
        raise ValueError("no root reaches all nodes")
    return _assemble(g, orientation, best_root, best_eids)


def enumerate_arborescences(g: InfoFlowNetwork, orientation: str = "outgoing") -> Arborescence:
    """Exhaustive maximum arborescence for small graphs (verification oracle).

    Enumerates every predecessor assignment for every root and keeps the
    best under the solver's tie-breaking: largest total weight, then
    smaller root code, then lexicographically smallest edge-code list.
    """
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    n = len(g.sectors)
    if n > _MAX_ENUMERATION_NODES:
        raise ValueError(f"enumeration limited to {_MAX_ENUMERATION_NODES} nodes")
    if n == 0:
        raise ValueError("empty network")
    if n == 1:
        return Arborescence(orientation, 0, g.sectors, (), 0.0)

    work, _ = _working_edges(g, orientation)
    in_edges: dict[int, list[int]] = {v: [] for v in range(n)}
    for _, v, _, eid in work:
        in_edges[v].append(eid)

    best_key = None
    best = None
    for root in range(n):
        others = [v for v in range(n) if v != root]
        if any(not in_edges[v] for v in others):
            continue
        stack = [(0, [])]
        while stack:
            idx, picked = stack.pop()
            if idx == len(others):
                parent = {}
                ok = True
                for eid in picked:
                    u, v, _, _ = work[eid]
                    parent[v] = u
                for start in others:
                    node, steps = start, 0
                    while node != root:
                        node = parent[node]
                        steps += 1
                        if steps > n:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    continue
                total = math.fsum(g.edges[eid][2] for eid in picked)
                codes = tuple(sorted(
                    (g.sectors[g.edges[eid][0]].code, g.sectors[g.edges[eid][1]].code)
                    for eid in picked
                ))
                key = (-total, g.sectors[root].code, codes)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (root, list(picked))
                continue
            for eid in in_edges[others[idx]]:
                stack.append((idx + 1, picked + [eid]))
    if best is None:
        raise ValueError("no root reaches all nodes")
    return _assemble(g, orientation, best[0], best[1])


def maximal_information_flow_path(a: Arborescence) -> InfoFlowPath:
    """Heaviest directed path through the arborescence.

    Outgoing trees: root-to-leaf path of maximum total weight.  Incoming
    trees: leaf-to-root path, reported in flow order.  Exact weight ties
    go to the lexicographically smallest sector-code sequence.
    """
    n = len(a.sectors)
    if n == 1:
        return InfoFlowPath(nodes=(a.sectors[a.root],), total_weight=0.0)

    weight = {(i, j): w for i, j, w in a.edges}
    if a.orientation == "outgoing":
        children: dict[int, list[int]] = {}
        for i, j, _ in a.edges:
            children.setdefault(i, []).append(j)
        candidates = []
        stack = [(a.root, [a.root])]
        while stack:
            node, trail = stack.pop()
            kids = children.get(node)
            if not kids:
                candidates.append(trail)
                continue
            for kid in kids:
                stack.append((kid, trail + [kid]))
    else:
        next_hop = {i: j for i, j, _ in a.edges}
        has_inflow = {j for _, j, _ in a.edges}
        sources = [v for v in range(n) if v not in has_inflow]
        candidates = []
        for src in sources:
            trail = [src]
            while trail[-1] != a.root:
                trail.append(next_hop[trail[-1]])
            candidates.append(trail)

    best = None
    best_key = None
    for trail in candidates:
        total = math.fsum(weight[(u, v)] for u, v in zip(trail, trail[1:]))
        codes = tuple(a.sectors[v].code for v in trail)
        key = (-total, codes)
        if best_key is None or key < best_key:
            best_key = key
            best = (trail, total)
    trail, total = best
    return InfoFlowPath(nodes=tuple(a.sectors[v] for v in trail), total_weight=total)


def degrees(a: Arborescence) -> dict[str, tuple[int, int, int]]:
    """Per-sector (in-degree, out-degree, total) within the arborescence."""
    n = len(a.sectors)
    ins = [0] * n
    outs = [0] * n
    for i, j, _ in a.edges:
        outs[i] += 1
        ins[j] += 1
    return {
        a.sectors[v].code: (ins[v], outs[v], ins[v] + outs[v]) for v in range(n)
    }


def arborescence_to_json(a: Arborescence, path: InfoFlowPath | None = None) -> str:
    payload = {
        "orientation": a.orientation,
        "root": a.sectors[a.root].code,
        "total_weight_bits": a.total_weight,
        "edges": [
            {
                "source": a.sectors[i].code,
                "target": a.sectors[j].code,
                "weight_bits": w,
            }
            for i, j, w in a.edges
        ],
    }
    if path is not None:
        payload["maximal_path"] = {
            "sectors": list(path.codes),
            "total_weight_bits": path.total_weight,
            "length": path.length,
        }
    return json.dumps(payload, indent=2) + "\n"


def arborescence_to_dot(
    a: Arborescence,
    path: InfoFlowPath | None = None,
    name: str = "msa",
) -> str:
    """DOT rendering; the maximal path gets red edges and square yellow nodes."""
    path_nodes: set[str] = set()
    path_edges: set[tuple[str, str]] = set()
    if path is not None:
        path_nodes = set(path.codes)
        path_edges = set(zip(path.codes, path.codes[1:]))

    lines = [f"digraph {name} {{"]
    for s in sorted(a.sectors, key=lambda s: s.code):
        label = s.short_code
        if label in path_nodes:
            lines.append(
                f'  "{label}" [shape=square, style=filled, fillcolor=yellow];'
            )
        else:
            lines.append(f'  "{label}";')
    for i, j, w in a.edges:
        src = a.sectors[i].short_code
        dst = a.sectors[j].short_code
        attrs = f'label="{w:.4f}"'
        if (src, dst) in path_edges:
            attrs += ", color=red, penwidth=2.0"
        lines.append(f'  "{src}" -> "{dst}" [{attrs}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
