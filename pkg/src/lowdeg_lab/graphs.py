"""Edge-induced labeled graphs and permutations.

A graph is identified with its edge set; vertices are exactly the edge
endpoints, so there are never isolated vertices. Labels are arbitrary
positive integers.
"""

from __future__ import annotations

import random
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int]


def _norm_edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"self-loop at vertex {u} is not allowed")
    if u < 1 or v < 1:
        raise ValueError(f"vertex labels must be positive integers, got ({u}, {v})")
    return (u, v) if u < v else (v, u)


class LabeledGraph:
    """Immutable edge-induced graph. Equality and hashing are by edge set."""

    __slots__ = ("edges", "_edge_set", "_vertices", "_hash")

    def __init__(self, edges: Iterable[Sequence[int]] = ()):
        es = sorted({_norm_edge(int(u), int(v)) for u, v in edges})
        self.edges: tuple[Edge, ...] = tuple(es)
        self._edge_set = frozenset(es)
        self._vertices = tuple(sorted({x for e in es for x in e}))
        self._hash = hash(self.edges)

    @classmethod
    def _from_sorted(cls, edges: tuple[Edge, ...]) -> "LabeledGraph":
        g = object.__new__(cls)
        g.edges = edges
        g._edge_set = frozenset(edges)
        g._vertices = tuple(sorted({x for e in edges for x in e}))
        g._hash = hash(edges)
        return g

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def edge_set(self) -> frozenset[Edge]:
        return self._edge_set

    @property
    def v_count(self) -> int:
        return len(self._vertices)

    @property
    def e_count(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def __contains__(self, edge) -> bool:
        u, v = edge
        return ((u, v) if u < v else (v, u)) in self._edge_set

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self.edges == other.edges

    def __lt__(self, other: "LabeledGraph") -> bool:
        return (len(self.edges), self.edges) < (len(other.edges), other.edges)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"LabeledGraph({list(self.edges)})"

    def issubgraph(self, other: "LabeledGraph") -> bool:
        """Edge containment, the ``S ⊂ T`` relation."""
        return self._edge_set <= other._edge_set

    def degrees(self) -> dict[int, int]:
        deg = dict.fromkeys(self._vertices, 0)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {x: set() for x in self._vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def induced(self, vertices: Iterable[int]) -> "LabeledGraph":
        """Edges with both endpoints in ``vertices`` (isolated vertices dropped)."""
        w = set(vertices)
        return LabeledGraph._from_sorted(tuple(e for e in self.edges if e[0] in w and e[1] in w))

    def components(self) -> list["LabeledGraph"]:
        adj = self.adjacency()
        seen: set[int] = set()
        comps = []
        for s in self._vertices:
            if s in seen:
                continue
            stack = [s]
            seen.add(s)
            members = []
            while stack:
                x = stack.pop()
                members.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(self.induced(members))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1


EMPTY = LabeledGraph()


def make_graph(edge_list: Iterable[Sequence[int]]) -> LabeledGraph:
    return LabeledGraph(edge_list)


def union(s: LabeledGraph, t: LabeledGraph) -> LabeledGraph:
    return LabeledGraph._from_sorted(tuple(sorted(s.edge_set | t.edge_set)))


def intersection(s: LabeledGraph, t: LabeledGraph) -> LabeledGraph:
    return LabeledGraph._from_sorted(tuple(sorted(s.edge_set & t.edge_set)))


def difference(s: LabeledGraph, t: LabeledGraph) -> LabeledGraph:
    return LabeledGraph._from_sorted(tuple(sorted(s.edge_set - t.edge_set)))


def symmetric_difference(s: LabeledGraph, t: LabeledGraph) -> LabeledGraph:
    return LabeledGraph._from_sorted(tuple(sorted(s.edge_set ^ t.edge_set)))


def set_ops(s: LabeledGraph, t: LabeledGraph):
    """Return ``(union, intersection, difference, symmetric_difference)``."""
    return union(s, t), intersection(s, t), difference(s, t), symmetric_difference(s, t)


class Permutation:
    """A bijection on ``{1..n}``, stored as the tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError("images must be a rearrangement of 1..n")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def random(cls, n: int, rng: random.Random | None = None) -> "Permutation":
        rng = rng or random.Random()
        xs = list(range(1, n + 1))
        rng.shuffle(xs)
        return cls(xs)

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        img = list(range(1, n + 1))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                img[x - 1] = cyc[(i + 1) % len(cyc)]
        return cls(img)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= len(self.images):
            raise ValueError(f"vertex {i} outside permutation domain 1..{len(self.images)}")
        return self.images[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, x in enumerate(self.images, start=1):
            inv[x - 1] = i
        return Permutation(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """``self ∘ other``: apply ``other`` first."""
        if other.n != self.n:
            raise ValueError("permutations act on different domains")
        return Permutation(self.images[x - 1] for x in other.images)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"


def relabel(s: LabeledGraph, pi: Permutation | dict[int, int]) -> LabeledGraph:
    """The graph ``π(S)``."""
    if isinstance(pi, Permutation):
        return LabeledGraph((pi(u), pi(v)) for u, v in s.edges)
    missing = [x for x in s.vertices if x not in pi]
    if missing:
        raise ValueError(f"vertices {missing} outside the relabeling domain")
    return LabeledGraph((pi[u], pi[v]) for u, v in s.edges)


def complete_graph(vertices: int | Iterable[int]) -> LabeledGraph:
    vs = range(1, vertices + 1) if isinstance(vertices, int) else sorted(vertices)
    vs = list(vs)
    return LabeledGraph((vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs)))


def all_pairs(n: int) -> list[Edge]:
    """The pairs of ``U_n`` in lexicographic order; position is the pair index."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def pair_index(u: int, v: int, n: int) -> int:
    """Position of the pair ``{u, v}`` in :func:`all_pairs` order."""
    if u > v:
        u, v = v, u
    return (u - 1) * n - (u - 1) * u // 2 + (v - u - 1)


def random_graph(rng: random.Random, max_vertices: int, max_edges: int, labels: int | None = None) -> LabeledGraph:
    """Uniform-ish random small graph; used by property tests and verification suites."""
    labels = labels or max_vertices
    verts = rng.sample(range(1, labels + 1), min(max_vertices, labels))
    pairs = [(verts[i], verts[j]) for i in range(len(verts)) for j in range(i + 1, len(verts))]
    k = rng.randint(0, min(max_edges, len(pairs)))
    return LabeledGraph(rng.sample(pairs, k))


# edge-list text format


def read_edge_list(path_or_lines) -> LabeledGraph:
    if isinstance(path_or_lines, str):
        with open(path_or_lines) as fh:
            lines = fh.read().splitlines()
    else:
        lines = list(path_or_lines)
    edges = []
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return LabeledGraph(edges)


def format_edge_list(g: LabeledGraph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges)


def write_edge_list(g: LabeledGraph, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(format_edge_list(g))
