"""Brute-force ground truth for small rooted planar maps.

Rooted maps are encoded as rotation systems (sigma, alpha) on darts
0..2E-1 with root dart 0.  Enumeration generates each rooted map on an
orientable surface exactly once by constructing the BFS-canonical dart
labeling directly: vertices are opened in first-touch order, rotations are
labeled consecutively from the entry dart, and alpha is completed in label
order.  Planar maps are kept via Euler's formula.

Triangulation families are enumerated through their cubic duals (all
vertex degrees forced to 3) and sized by vertex count per the scheme
conventions.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations


@dataclass(frozen=True)
class DartMap:
    """Rooted combinatorial map: rotations sigma, edge involution alpha."""

    n_edges: int
    sigma: tuple
    alpha: tuple

    root: int = 0

    def __post_init__(self):
        D = 2 * self.n_edges
        if len(self.sigma) != D or len(self.alpha) != D:
            raise ValueError("permutation length must be 2 * n_edges")
        for d in range(D):
            if self.alpha[d] == d or self.alpha[self.alpha[d]] != d:
                raise ValueError("alpha must be a fixed-point-free involution")

    # -- structure ---------------------------------------------------------
    def vertices(self):
        return _cycles(self.sigma)

    def faces(self):
        D = len(self.sigma)
        phi = tuple(self.sigma[self.alpha[d]] for d in range(D))
        return _cycles(phi)

    def genus(self) -> int:
        v = len(self.vertices())
        f = len(self.faces())
        chi = v - self.n_edges + f
        if chi % 2:
            raise ValueError("odd Euler characteristic")
        return (2 - chi) // 2

    def vertex_of_dart(self):
        out = [-1] * len(self.sigma)
        for i, cyc in enumerate(self.vertices()):
            for d in cyc:
                out[d] = i
        return out

    def edge_list(self):
        """One (u, v) pair per edge, u <= v; loops appear as (u, u)."""
        vod = self.vertex_of_dart()
        edges = []
        seen = set()
        for d in range(len(self.sigma)):
            if d in seen:
                continue
            e = self.alpha[d]
            seen.add(d)
            seen.add(e)
            u, v = vod[d], vod[e]
            edges.append((min(u, v), max(u, v)))
        return edges

    def dual(self) -> "DartMap":
        D = len(self.sigma)
        phi = tuple(self.sigma[self.alpha[d]] for d in range(D))
        return DartMap(self.n_edges, phi, self.alpha)

    def relabel(self, perm) -> "DartMap":
        """Conjugate by a dart permutation fixing the root."""
        if perm[self.root] != self.root:
            raise ValueError("relabeling must fix the root dart")
        D = len(self.sigma)
        inv = [0] * D
        for d in range(D):
            inv[perm[d]] = d
        sigma = tuple(perm[self.sigma[inv[d]]] for d in range(D))
        alpha = tuple(perm[self.alpha[inv[d]]] for d in range(D))
        return DartMap(self.n_edges, sigma, alpha)


VERTEX_MAP = None  # the unique 0-edge map, handled out of band


def _cycles(perm):
    seen = [False] * len(perm)
    out = []
    for d in range(len(perm)):
        if seen[d]:
            continue
        cyc = []
        x = d
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        out.append(tuple(cyc))
    return out


# --------------------------------------------------------- enumeration


def generate_rooted_maps(n_edges: int, vertex_degree: int | None = None):
    """Yield every rooted map with n_edges edges on any orientable surface.

    Each isomorphism class of rooted maps is produced exactly once, carrying
    its canonical BFS dart labeling.  If vertex_degree is given, all vertex
    degrees are fixed to it (used for cubic duals of triangulations).
    """
    D = 2 * n_edges
    if D == 0:
        return
    alpha = [-1] * D
    vert_start: list = []
    vert_deg: list = []

    def degrees(budget):
        if vertex_degree is None:
            return range(1, budget + 1)
        return (vertex_degree,) if vertex_degree <= budget else ()

    results = []

    def rec(t, L):
        if t == L:
            if L == D:
                sigma = [0] * D
                for s, k in zip(vert_start, vert_deg):
                    for i in range(k):
                        sigma[s + i] = s + (i + 1) % k
                results.append((tuple(sigma), tuple(alpha)))
            return
        if alpha[t] != -1:
            rec(t + 1, L)
            return
        # match t with a later unmatched labeled dart
        for s in range(t + 1, L):
            if alpha[s] == -1:
                alpha[t] = s
                alpha[s] = t
                rec(t + 1, L)
                alpha[t] = -1
                alpha[s] = -1
        # or open a new vertex entered through dart L
        for k in degrees(D - L):
            vert_start.append(L)
            vert_deg.append(k)
            alpha[t] = L
            alpha[L] = t
            rec(t + 1, L + k)
            alpha[t] = -1
            alpha[L] = -1
            vert_start.pop()
            vert_deg.pop()

    for k0 in degrees(D):
        vert_start.append(0)
        vert_deg.append(k0)
        rec(0, k0)
        vert_start.pop()
        vert_deg.pop()
    for sigma, a in results:
        yield DartMap(n_edges, sigma, a)


def planar_maps(n_edges: int, vertex_degree: int | None = None):
    for m in generate_rooted_maps(n_edges, vertex_degree):
        if m.genus() == 0:
            yield m


# --------------------------------------------------------- predicates


def _adjacency(m: DartMap):
    verts = m.vertices()
    adj = [set() for _ in verts]
    for u, v in m.edge_list():
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def _connected_without(adj, skip):
    n = len(adj)
    rest = [v for v in range(n) if v != skip]
    if not rest:
        return True
    seen = {rest[0]}
    stack = [rest[0]]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y != skip and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(rest)


def is_loopless(m: DartMap) -> bool:
    return all(u != v for u, v in m.edge_list())


def is_simple(m: DartMap) -> bool:
    edges = m.edge_list()
    return all(u != v for u, v in edges) and len(set(edges)) == len(edges)


def is_two_connected(m: DartMap) -> bool:
    """Block convention: the single edge and the single loop are
    2-connected; larger maps must be loopless with no cut vertex.

    (Fixed by requiring the u=1 decomposition identity order-by-order;
    see the fixtures notes.)
    """
    if m.n_edges == 1:
        return True
    if not is_loopless(m):
        return False
    adj = _adjacency(m)
    if len(adj) <= 2:
        return True
    return all(_connected_without(adj, v) for v in range(len(adj)))


def is_bipartite(m: DartMap) -> bool:
    edges = m.edge_list()
    n = len(m.vertices())
    color = [-1] * n
    adj = [[] for _ in range(n)]
    for u, v in edges:
        if u == v:
            return False
        adj[u].append(v)
        adj[v].append(u)
    for s in range(n):
        if color[s] != -1:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if color[y] == -1:
                    color[y] = 1 - color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return False
    return True


def is_triangulation(m: DartMap) -> bool:
    return all(len(f) == 3 for f in m.faces())


def is_irreducible_triangulation(m: DartMap) -> bool:
    """Simple triangulation in which every 3-cycle bounds a face."""
    if not (is_triangulation(m) and is_simple(m)):
        return False
    adj = _adjacency(m)
    vod = m.vertex_of_dart()
    face_triples = {
        frozenset(vod[d] for d in f) for f in m.faces()
    }
    for u, v, w in combinations(range(len(adj)), 3):
        if v in adj[u] and w in adj[u] and w in adj[v]:
            if frozenset((u, v, w)) not in face_triples:
                return False
    return True


FAMILIES = {
    "all": lambda m: True,
    "loopless": is_loopless,
    "simple": is_simple,
    "two-connected": is_two_connected,
    "two-connected-simple": lambda m: is_two_connected(m) and is_simple(m),
    "bipartite": is_bipartite,
    "bipartite-simple": lambda m: is_bipartite(m) and is_simple(m),
    "bipartite-two-connected": lambda m: is_bipartite(m) and is_two_connected(m),
    "bipartite-two-connected-simple":
        lambda m: is_bipartite(m) and is_two_connected(m) and is_simple(m),
    "loopless-triangulation": lambda m: is_triangulation(m) and is_loopless(m),
    "simple-triangulation": lambda m: is_triangulation(m) and is_simple(m),
    "irreducible-triangulation": is_irreducible_triangulation,
}

TRIANGULATION_FAMILIES = {
    # family -> vertex offset: size n corresponds to n + offset vertices
    "loopless-triangulation": 2,
    "simple-triangulation": 3,
    "irreducible-triangulation": 3,
}

#: vertex-map membership for size-0 counts of edge-counted families
_VERTEX_MAP_MEMBER = {
    "all": True, "loopless": True, "simple": True, "bipartite": True,
    "bipartite-simple": True,
    "two-connected": False, "two-connected-simple": False,
    "bipartite-two-connected": False, "bipartite-two-connected-simple": False,
}

MAX_EDGES_DEFAULT = 5


def enumerate_rooted_maps(n: int, family: str, max_edges: int = MAX_EDGES_DEFAULT) -> int:
    """Count rooted planar maps of size n in the family (canonical, exact).

    For triangulation families n is in the scheme's own size unit
    (vertices minus 2 or 3); otherwise n is the edge count.
    """
    if family not in FAMILIES:
        raise KeyError(f"unknown family {family!r}")
    if n < 0:
        raise ValueError("n must be >= 0")
    pred = FAMILIES[family]
    if family in TRIANGULATION_FAMILIES:
        n_vertices = n + TRIANGULATION_FAMILIES[family]
        return count_triangulations(n_vertices, pred, max_edges=3 * max_edges)
    if n == 0:
        return 1 if _VERTEX_MAP_MEMBER[family] else 0
    if n > max_edges:
        raise ValueError(f"n={n} beyond enumeration cap {max_edges}")
    return sum(1 for m in planar_maps(n) if pred(m))


def count_triangulations(n_vertices: int, pred, max_edges: int = 15) -> int:
    """Count rooted planar triangulations with n_vertices vertices
    satisfying pred, via their cubic dual maps."""
    if n_vertices < 3:
        return 0
    n_edges = 3 * (n_vertices - 2)
    if n_edges > max_edges:
        raise ValueError(f"triangulation size needs {n_edges} edges > cap {max_edges}")
    count = 0
    for cubic in planar_maps(n_edges, vertex_degree=3):
        tri = cubic.dual()
        if len(tri.vertices()) != n_vertices:
            continue
        if pred(tri):
            count += 1
    return count


# ------------------------------------------------------- block counting


def count_blocks_2conn(m: DartMap | None) -> int:
    """Number of positive-size blocks in the cut-vertex decomposition.

    Loops are blocks of their own; bridges are blocks; maximal 2-connected
    pieces are blocks. The vertex map has none.
    """
    if m is None:
        return 0
    vod = m.vertex_of_dart()
    n = len(m.vertices())
    edges = []
    loops = 0
    for d in range(len(m.sigma)):
        e = m.alpha[d]
        if d < e:
            u, v = vod[d], vod[e]
            if u == v:
                loops += 1
            else:
                edges.append((u, v))
    if not edges:
        return loops
    adj = [[] for _ in range(n)]
    for idx, (u, v) in enumerate(edges):
        adj[u].append((v, idx))
        adj[v].append((u, idx))
    blocks = 0
    disc = [0] * n
    low = [0] * n
    visited = [False] * n
    estack: list = []
    timer = [0]

    def dfs(u, parent_eid):
        nonlocal blocks
        visited[u] = True
        timer[0] += 1
        disc[u] = low[u] = timer[0]
        for (w, eid) in adj[u]:
            if eid == parent_eid:
                continue
            if not visited[w]:
                estack.append(eid)
                dfs(w, eid)
                low[u] = min(low[u], low[w])
                if low[w] >= disc[u]:
                    blocks += 1
                    while estack[-1] != eid:
                        estack.pop()
                    estack.pop()
            elif disc[w] < disc[u]:
                estack.append(eid)
                low[u] = min(low[u], disc[w])

    for s in range(n):
        if not visited[s]:
            dfs(s, -1)
    return blocks + loops


def bivariate_census(n_max: int = 4):
    """Exact table {(n_edges, n_blocks): count} for all rooted planar maps,
    blocks counted in the 2-connected (scheme 2) decomposition."""
    table = {(0, 0): 1}
    for n in range(1, n_max + 1):
        for m in planar_maps(n):
            key = (n, count_blocks_2conn(m))
            table[key] = table.get(key, 0) + 1
    return table
