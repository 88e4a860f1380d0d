"""Directed, weighted information-flow network built from net flows.

Each unordered sector pair contributes at most one edge, oriented along
the positive net flow and weighted by its magnitude.  An exactly zero net
flow would be directionless; the pair is skipped with a warning instead
of picking an arbitrary orientation, so downstream consumers must accept
a non-complete orientation.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

from .entropy import DaiMatrix
from .timeseries import SectorMeta


@dataclass(frozen=True)
class InfoFlowNetwork:
    """Directed graph over sectors; edges are (source, target, weight > 0)."""

    sectors: tuple[SectorMeta, ...]
    edges: tuple[tuple[int, int, float], ...]
    ties: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sectors", tuple(self.sectors))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "ties", tuple(self.ties))
        seen_pairs = set()
        for i, j, w in self.edges:
            if i == j:
                raise ValueError("self-edge")
            if w <= 0:
                raise ValueError("edge weight must be positive")
            pair = (min(i, j), max(i, j))
            if pair in seen_pairs:
                raise ValueError("duplicate edge for one sector pair")
            seen_pairs.add(pair)

    def __len__(self) -> int:
        return len(self.sectors)


def build_network(dai: DaiMatrix) -> InfoFlowNetwork:
    """Orient each pair along the sign of its net flow.

    dai[i, j] > 0 yields edge i -> j with weight dai[i, j]; an exact zero
    drops the pair and records it in ``ties``.
    """
    n = len(dai.sectors)
    edges: list[tuple[int, int, float]] = []
    ties: list[tuple[int, int]] = []
    for i in range(n):
        for j in range(i + 1, n):
            value = float(dai.dai[i, j])
            if value > 0:
                edges.append((i, j, value))
            elif value < 0:
                edges.append((j, i, -value))
            else:
                ties.append((i, j))
    if ties:
        labels = ", ".join(
            f"{dai.sectors[i].code}/{dai.sectors[j].code}" for i, j in ties
        )
        warnings.warn(f"dropped {len(ties)} tied pair(s) with zero net flow: {labels}",
                      stacklevel=2)
    return InfoFlowNetwork(sectors=dai.sectors, edges=tuple(edges), ties=tuple(ties))


def network_to_json(net: InfoFlowNetwork) -> str:
    """JSON dump: node list with codes/names plus weighted edge list."""
    payload = {
        "nodes": [
            {"code": s.code, "short_code": s.short_code, "name": s.name}
            for s in net.sectors
        ],
        "edges": [
            {
                "source": net.sectors[i].code,
                "target": net.sectors[j].code,
                "weight_bits": w,
            }
            for i, j, w in sorted(
                net.edges,
                key=lambda e: (net.sectors[e[0]].code, net.sectors[e[1]].code),
            )
        ],
        "tied_pairs": [
            [net.sectors[i].code, net.sectors[j].code] for i, j in net.ties
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def network_to_dot(net: InfoFlowNetwork, name: str = "infoflow") -> str:
    """Graphviz DOT rendering with edge labels rounded to 4 decimals."""
    lines = [f"digraph {name} {{"]
    for s in net.sectors:
        label = s.short_code
        lines.append(f'  "{label}";')
    for i, j, w in sorted(
        net.edges,
        key=lambda e: (net.sectors[e[0]].code, net.sectors[e[1]].code),
    ):
        src = net.sectors[i].short_code
        dst = net.sectors[j].short_code
        lines.append(f'  "{src}" -> "{dst}" [label="{w:.4f}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
