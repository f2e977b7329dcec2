"""Canonical forms, automorphism counts and isomorphism-class enumeration.

Canonical labeling uses individualization-refinement: equitable colour
refinement, then branching on the first smallest non-singleton cell. Every
leaf of the search tree is a vertex ordering; the canonical representative
is the lexicographically smallest relabeled edge list over the leaves.
Vertices that are twins (same open or closed neighbourhood) generate
automorphisms, so only one twin per class is branched on and its leaf
count is weighted by the class size. Automorphisms act freely on leaves,
so the weighted count of leaves achieving the minimum equals |Aut|.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable

from .graphs import EMPTY, LabeledGraph

DEFAULT_K_CEILING = 8
DENSITY_VERTEX_CEILING = 20


@dataclass(frozen=True, order=False)
class IsoClass:
    canon: LabeledGraph
    v_count: int
    e_count: int
    aut: int

    def sort_key(self):
        return (self.e_count, self.v_count, self.canon.edges)

    def __lt__(self, other: "IsoClass") -> bool:
        return self.sort_key() < other.sort_key()

    def edge_list_str(self) -> str:
        return ";".join(f"{u}-{v}" for u, v in self.canon.edges)

    def __repr__(self) -> str:
        return f"IsoClass(e={self.e_count}, v={self.v_count}, aut={self.aut}, canon={list(self.canon.edges)})"


EMPTY_CLASS = IsoClass(EMPTY, 0, 0, 1)


def _refine(cells: list[list[int]], adj: list[int]) -> list[list[int]]:
    """Equitable refinement; cell order and splits depend only on the graph."""
    while True:
        masks = []
        for cell in cells:
            m = 0
            for x in cell:
                m |= 1 << x
            masks.append(m)
        new_cells: list[list[int]] = []
        split = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sig = {x: tuple((adj[x] & m).bit_count() for m in masks) for x in cell}
            keys = sorted(set(sig.values()))
            if len(keys) == 1:
                new_cells.append(cell)
                continue
            split = True
            for k in keys:
                new_cells.append([x for x in cell if sig[x] == k])
        cells = new_cells
        if not split:
            return cells


def _twin_keys(adj: list[int]) -> list[tuple]:
    v = len(adj)
    open_count: dict[int, int] = {}
    for m in adj:
        open_count[m] = open_count.get(m, 0) + 1
    keys = []
    for x in range(v):
        if open_count[adj[x]] > 1:
            keys.append(("o", adj[x]))
        else:
            keys.append(("c", adj[x] | (1 << x)))
    return keys


def _canon_search(adj: list[int], edges: list[tuple[int, int]]):
    v = len(adj)
    twin = _twin_keys(adj)
    best: list = [None, 0]

    def leaf(cells, weight):
        pos = [0] * v
        for i, cell in enumerate(cells):
            pos[cell[0]] = i + 1
        enc = tuple(sorted((min(pos[a], pos[b]), max(pos[a], pos[b])) for a, b in edges))
        if best[0] is None or enc < best[0]:
            best[0] = enc
            best[1] = weight
        elif enc == best[0]:
            best[1] += weight

    def rec(cells, weight):
        target = None
        for i, cell in enumerate(cells):
            if len(cell) > 1 and (target is None or len(cell) < len(cells[target])):
                target = i
        if target is None:
            leaf(cells, weight)
            return
        cell = cells[target]
        groups: dict[tuple, list[int]] = {}
        for x in cell:
            groups.setdefault(twin[x], []).append(x)
        for members in groups.values():
            x = members[0]
            child = cells[:target] + [[x], [y for y in cell if y != x]] + cells[target + 1:]
            rec(_refine(child, adj), weight * len(members))

    rec(_refine([list(range(v))], adj), 1)
    return best[0], best[1]


@lru_cache(maxsize=500_000)
def canonical_form(s: LabeledGraph) -> IsoClass:
    """Canonical representative of the isomorphism class of ``s`` (labels 1..|V|)."""
    if s.e_count == 0:
        return EMPTY_CLASS
    index = {x: i for i, x in enumerate(s.vertices)}
    adj = [0] * s.v_count
    edges = []
    for a, b in s.edges:
        i, j = index[a], index[b]
        adj[i] |= 1 << j
        adj[j] |= 1 << i
        edges.append((i, j))
    enc, aut = _canon_search(adj, edges)
    canon = LabeledGraph._from_sorted(enc)
    return IsoClass(canon, s.v_count, s.e_count, aut)


def aut_count(c: IsoClass | LabeledGraph) -> int:
    if isinstance(c, LabeledGraph):
        c = canonical_form(c)
    return c.aut


def is_isomorphic(s: LabeledGraph, t: LabeledGraph) -> bool:
    if s.e_count != t.e_count or s.v_count != t.v_count:
        return False
    return canonical_form(s).canon == canonical_form(t).canon


def falling_factorial(n: int, k: int) -> int:
    if k > n:
        return 0
    out = 1
    for i in range(k):
        out *= n - i
    return out


def labeled_copy_count(c: IsoClass, n: int) -> int:
    """Number of graphs ``S ⋐ K_n`` isomorphic to ``c``; zero when ``n < |V|``."""
    if n < c.v_count:
        return 0
    return falling_factorial(n, c.v_count) // c.aut


# enumeration

_LEVELS: list[list[IsoClass]] = [[EMPTY_CLASS]]


def _augment(c: IsoClass) -> Iterable[LabeledGraph]:
    v = c.v_count
    base = c.canon.edge_set
    for i in range(1, v + 1):
        for j in range(i + 1, v + 1):
            if (i, j) not in base:
                yield LabeledGraph._from_sorted(tuple(sorted(base | {(i, j)})))
        yield LabeledGraph._from_sorted(tuple(sorted(base | {(i, v + 1)})))
    yield LabeledGraph._from_sorted(tuple(sorted(base | {(v + 1, v + 2)})))


def _check_ceiling(k_max: int, ceiling: int) -> None:
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    if k_max > ceiling:
        raise ValueError(
            f"k_max={k_max} exceeds the enumeration ceiling {ceiling}; "
            "class counts grow roughly like 3^k and canonicalization cost with them"
        )


def enumerate_classes(
    k_max: int,
    filter: Callable[[IsoClass], bool] | None = None,
    ceiling: int = DEFAULT_K_CEILING,
) -> dict[int, list[IsoClass]]:
    """All isolated-vertex-free classes with at most ``k_max`` edges, keyed by edge count.

    Classes with ``k`` edges are obtained by adding one edge in every possible
    way to each class with ``k - 1`` edges, then deduplicating by canonical form.
    """
    _check_ceiling(k_max, ceiling)
    while len(_LEVELS) <= k_max:
        found: dict[LabeledGraph, IsoClass] = {}
        for c in _LEVELS[-1]:
            for g in _augment(c):
                cls = canonical_form(g)
                found.setdefault(cls.canon, cls)
        _LEVELS.append(sorted(found.values()))
    out = {}
    for k in range(k_max + 1):
        level = _LEVELS[k]
        out[k] = [c for c in level if filter(c)] if filter is not None else list(level)
    return out


def iter_classes(k_max: int, ceiling: int = DEFAULT_K_CEILING) -> Iterable[IsoClass]:
    for level in enumerate_classes(k_max, ceiling=ceiling).values():
        yield from level


def enumerate_connected_classes(k_max: int, ceiling: int = DEFAULT_K_CEILING) -> dict[int, list[IsoClass]]:
    """Connected classes only, grown by adding a chord or a pendant edge.

    Independent of :func:`enumerate_classes`; together with
    :func:`classes_from_components` it gives a second route to the census.
    """
    _check_ceiling(k_max, ceiling)
    levels: dict[int, list[IsoClass]] = {0: [EMPTY_CLASS]}
    if k_max >= 1:
        levels[1] = [canonical_form(LabeledGraph([(1, 2)]))]
    for k in range(2, k_max + 1):
        found: dict[LabeledGraph, IsoClass] = {}
        for c in levels[k - 1]:
            v = c.v_count
            base = c.canon.edge_set
            for i in range(1, v + 1):
                for j in range(i + 1, v + 1):
                    if (i, j) not in base:
                        cls = canonical_form(LabeledGraph(base | {(i, j)}))
                        found.setdefault(cls.canon, cls)
                cls = canonical_form(LabeledGraph(base | {(i, v + 1)}))
                found.setdefault(cls.canon, cls)
        levels[k] = sorted(found.values())
    return levels


def _disjoint_union(graphs: list[LabeledGraph]) -> LabeledGraph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.v_count
    return LabeledGraph(edges)


def classes_from_components(k_max: int, ceiling: int = DEFAULT_K_CEILING) -> dict[int, list[IsoClass]]:
    """Every class as a multiset of connected classes whose edge counts sum to k."""
    conn = enumerate_connected_classes(k_max, ceiling=ceiling)
    pieces = [c for k in range(1, k_max + 1) for c in conn[k]]
    out: dict[int, list[IsoClass]] = {0: [EMPTY_CLASS]}

    def rec(start: int, remaining: int, chosen: list[IsoClass], k: int, acc: list):
        if remaining == 0:
            acc.append(canonical_form(_disjoint_union([c.canon for c in chosen])))
            return
        for i in range(start, len(pieces)):
            p = pieces[i]
            if p.e_count <= remaining:
                chosen.append(p)
                rec(i, remaining - p.e_count, chosen, k, acc)
                chosen.pop()

    for k in range(1, k_max + 1):
        acc: list[IsoClass] = []
        rec(0, k, [], k, acc)
        out[k] = sorted({c.canon: c for c in acc}.values())
    return out


def is_tree(c: IsoClass) -> bool:
    return c.e_count == c.v_count - 1 and c.canon.is_connected()


def unlabeled_tree_counts(v_max: int) -> dict[int, int]:
    """Unlabeled trees by vertex count, ``v = 1..v_max``.

    The one-vertex tree has no edges and is counted by convention. Trees on
    ``v + 1`` vertices come from adding a pendant vertex to trees on ``v``.
    """
    if v_max > DEFAULT_K_CEILING + 4:
        raise ValueError(f"v_max={v_max} exceeds the tree census ceiling {DEFAULT_K_CEILING + 4}")
    counts = {1: 1}
    if v_max < 2:
        return {v: counts[v] for v in range(1, v_max + 1)}
    level = [canonical_form(LabeledGraph([(1, 2)]))]
    counts[2] = 1
    for v in range(3, v_max + 1):
        found: dict[LabeledGraph, IsoClass] = {}
        for t in level:
            base = t.canon.edge_set
            for i in range(1, t.v_count + 1):
                cls = canonical_form(LabeledGraph(base | {(i, t.v_count + 1)}))
                found.setdefault(cls.canon, cls)
        level = sorted(found.values())
        counts[v] = len(level)
    return counts


# embeddings and densities


def count_monomorphisms(h: LabeledGraph, s: LabeledGraph) -> int:
    """Injective maps V(h) -> V(s) sending every edge of h to an edge of s."""
    if h.e_count == 0:
        return 1
    if h.e_count > s.e_count or h.v_count > s.v_count:
        return 0
    hadj = h.adjacency()
    sadj = s.adjacency()
    sdeg = {x: len(nb) for x, nb in sadj.items()}
    order: list[int] = []
    remaining = set(h.vertices)
    while remaining:
        best = max(remaining, key=lambda x: (sum(1 for y in hadj[x] if y in order), len(hadj[x]), -x))
        order.append(best)
        remaining.remove(best)
    back = [[order.index(y) for y in hadj[x] if order.index(y) < i] for i, x in enumerate(order)]
    need = [len(hadj[x]) for x in order]
    targets = sorted(s.vertices)
    image: list[int] = [0] * len(order)
    used: set[int] = set()
    count = 0

    def rec(i: int) -> None:
        nonlocal count
        if i == len(order):
            count += 1
            return
        if back[i]:
            cand = sadj[image[back[i][0]]]
        else:
            cand = targets
        for y in cand:
            if y in used or sdeg[y] < need[i]:
                continue
            if all(image[j] in sadj[y] for j in back[i]):
                image[i] = y
                used.add(y)
                rec(i + 1)
                used.discard(y)

    rec(0)
    return count


def count_embeddings(h: IsoClass, s: LabeledGraph) -> int:
    """Number of subgraphs (edge subsets) of ``s`` isomorphic to ``h``."""
    return count_monomorphisms(h.canon, s) // h.aut


def embeds(h: IsoClass, s: LabeledGraph) -> bool:
    return count_monomorphisms(h.canon, s) > 0


def max_edge_density(c: IsoClass | LabeledGraph) -> Fraction:
    """max over nonempty subgraphs of |E|/|V|, by exhaustive vertex-subset scan."""
    g = c.canon if isinstance(c, IsoClass) else c
    if g.e_count == 0:
        return Fraction(0)
    v = g.v_count
    if v > DENSITY_VERTEX_CEILING:
        raise ValueError(f"|V|={v} exceeds the exhaustive density ceiling {DENSITY_VERTEX_CEILING}")
    index = {x: i for i, x in enumerate(g.vertices)}
    adj = [0] * v
    for a, b in g.edges:
        adj[index[a]] |= 1 << index[b]
        adj[index[b]] |= 1 << index[a]
    best = Fraction(0)
    for mask in range(1, 1 << v):
        e2 = 0
        m = mask
        while m:
            low = m & -m
            e2 += (adj[low.bit_length() - 1] & mask).bit_count()
            m ^= low
        dens = Fraction(e2 // 2, mask.bit_count())
        if dens > best:
            best = dens
    return best


def subgraph_classes(s: LabeledGraph) -> list[IsoClass]:
    """Isomorphism classes of all edge subsets of ``s`` (including the empty class)."""
    seen: dict[LabeledGraph, IsoClass] = {}
    edges = s.edges
    for k in range(len(edges) + 1):
        for sub in combinations(edges, k):
            c = canonical_form(LabeledGraph._from_sorted(sub))
            seen.setdefault(c.canon, c)
    return sorted(seen.values())


# census dump


def census_csv(classes: dict[int, list[IsoClass]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["edge_count", "class_index", "v_count", "aut", "canonical_edge_list"])
    for k in sorted(classes):
        for i, c in enumerate(classes[k]):
            w.writerow([k, i, c.v_count, c.aut, c.edge_list_str()])
    return buf.getvalue()


def parse_census_csv(text: str) -> list[IsoClass]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        el = row["canonical_edge_list"]
        edges = [tuple(map(int, p.split("-"))) for p in el.split(";")] if el else []
        g = LabeledGraph(edges)
        out.append(IsoClass(g, int(row["v_count"]), int(row["edge_count"]), int(row["aut"])))
    return out
