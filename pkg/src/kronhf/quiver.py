"""Coefficient quivers: the basis-indexed graph of nonzero map entries.

Vertices are tagged pairs (layer, index) with layer 0 for the source vertex
basis and layer 1 for the sink vertex basis. An edge ((0, j) -> (1, i),
arrow k, c) exists exactly when entry (i, j) of the k-th arrow matrix in the
chosen basis equals c != 0.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import PreconditionError, ValidationError
from .matrices import Matrix
from .modules import KroneckerModule


@dataclass
class BasisChoice:
    basis1: Matrix  # columns are the chosen source-space basis
    basis2: Matrix
    standard: bool = False

    @classmethod
    def standard_for(cls, M: KroneckerModule) -> "BasisChoice":
        return cls(Matrix.identity(M.field, M.dim1),
                   Matrix.identity(M.field, M.dim2), standard=True)


@dataclass
class CoefficientQuiver:
    n_src: int
    n_snk: int
    edges: list  # (src_index, snk_index, arrow, coeff)
    d: int

    @property
    def n_vertices(self) -> int:
        return self.n_src + self.n_snk

    def vertices(self):
        for j in range(self.n_src):
            yield (0, j)
        for i in range(self.n_snk):
            yield (1, i)

    def adjacency(self):
        """Undirected adjacency: vertex -> list of (neighbor, arrow)."""
        adj = {v: [] for v in self.vertices()}
        for j, i, k, _ in self.edges:
            adj[(0, j)].append(((1, i), k))
            adj[(1, i)].append(((0, j), k))
        return adj


def build_gamma(M: KroneckerModule, B: BasisChoice | None = None) -> CoefficientQuiver:
    if B is None:
        B = BasisChoice.standard_for(M)
    if B.standard:
        mats = M.maps
    else:
        if B.basis1.rank() != M.dim1 or B.basis2.rank() != M.dim2:
            raise ValidationError("basis matrices must be invertible")
        mats = [B.basis2.solve(m @ B.basis1) for m in M.maps]
    edges = []
    for k, mat in enumerate(mats):
        for i, j, v in mat.entries():
            edges.append((j, i, k, v))
    edges.sort(key=lambda e: (e[0], e[1], e[2]))
    return CoefficientQuiver(M.dim1, M.dim2, edges, M.d)


def is_tree(gamma: CoefficientQuiver) -> bool:
    """Connected and acyclic, counting parallel edges as cycles; empty is not a tree."""
    n = gamma.n_vertices
    if n == 0:
        return False
    if len(gamma.edges) != n - 1:
        return False
    adj = gamma.adjacency()
    seen = set()
    start = next(iter(adj))
    stack = [start]
    seen.add(start)
    while stack:
        v = stack.pop()
        for w, _ in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def degree_stats(gamma: CoefficientQuiver):
    """(max indegree, max outdegree) over all vertices, parallel edges counted."""
    indeg = [0] * gamma.n_snk
    outdeg = [0] * gamma.n_src
    for j, i, _, _ in gamma.edges:
        outdeg[j] += 1
        indeg[i] += 1
    return (max(indeg, default=0), max(outdeg, default=0))


def centroid(gamma: CoefficientQuiver):
    """Tree vertex whose removal leaves components of size <= ceil((n-1)/2).

    Ties break toward the smallest vertex id, sources before sinks.
    """
    if not is_tree(gamma):
        raise PreconditionError("centroid requires a tree")
    order = list(gamma.vertices())
    return _centroid_of(order, gamma.adjacency())


def _centroid_of(vertices, adj):
    n = len(vertices)
    if n == 1:
        return vertices[0]
    root = vertices[0]
    parent = {root: None}
    order = []
    dq = deque([root])
    while dq:
        v = dq.popleft()
        order.append(v)
        for w, _ in adj[v]:
            if w != root and w not in parent:
                parent[w] = v
                dq.append(w)
    size = {v: 1 for v in order}
    for v in reversed(order[1:]):
        size[parent[v]] += size[v]
    rank = {v: t for t, v in enumerate(vertices)}
    best = None
    for v in order:
        heaviest = n - size[v]
        for w, _ in adj[v]:
            if w != parent[v] and parent.get(w) == v:
                heaviest = max(heaviest, size[w])
        key = (heaviest, rank[v])
        if best is None or key < best[0:2]:
            best = (heaviest, rank[v], v)
    return best[2]


def submodule_from_generators(M: KroneckerModule, gens):
    """Smallest submodule containing the given standard basis vectors.

    gens is an iterable of vertices (0, j) / (1, i); the closure adds the
    span of the arrow images of the chosen source vectors. Returns the
    submodule with its embedding pair.
    """
    src = sorted({v[1] for v in gens if v[0] == 0})
    snk = {v[1] for v in gens if v[0] == 1}
    fld = M.field
    src_sel = Matrix.selection(fld, M.dim1, src)
    images = [m @ src_sel for m in M.maps]
    stack = [Matrix.selection(fld, M.dim2, sorted(snk))] + images if snk else images
    if stack:
        big = Matrix.hstack(stack) if len(stack) > 1 else stack[0]
        _, pivots = big.rref()
        emb2 = _column_basis(big, pivots)
    else:
        emb2 = Matrix.zeros(fld, M.dim2, 0)
    emb1 = src_sel
    maps = [emb2.solve(m @ emb1) for m in M.maps]
    sub = KroneckerModule(M.d, fld, emb1.cols, emb2.cols, maps)
    return sub, (emb1, emb2)


def _column_basis(m: Matrix, pivots):
    return m.submatrix(range(m.rows), pivots)


def split_components(M: KroneckerModule, B: BasisChoice | None = None):
    """One module per connected component of the coefficient quiver.

    Returns a list of (module, (emb1, emb2)); embeddings are expressed in the
    given basis (coordinate selections composed with the basis matrices).
    The block-diagonal sum over components is the module in that basis, up to
    the recorded vertex partition.
    """
    if B is None:
        B = BasisChoice.standard_for(M)
    gamma = build_gamma(M, B)
    comp = components(gamma)
    mats = M.maps if B.standard else [B.basis2.solve(m @ B.basis1) for m in M.maps]
    out = []
    for verts in comp:
        src = sorted(v[1] for v in verts if v[0] == 0)
        snk = sorted(v[1] for v in verts if v[0] == 1)
        sub_maps = [m.submatrix(snk, src) for m in mats]
        sub = KroneckerModule(M.d, M.field, len(src), len(snk), sub_maps)
        emb1 = Matrix.selection(M.field, M.dim1, src)
        emb2 = Matrix.selection(M.field, M.dim2, snk)
        if not B.standard:
            emb1 = B.basis1 @ emb1
            emb2 = B.basis2 @ emb2
        out.append((sub, (emb1, emb2)))
    return out


def components(gamma: CoefficientQuiver):
    """Connected components as sorted vertex lists, ordered by smallest vertex."""
    adj = gamma.adjacency()
    seen = set()
    out = []
    for v in gamma.vertices():
        if v in seen:
            continue
        comp = []
        stack = [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w, _ in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(sorted(comp))
    out.sort()
    return out


def export_edges(gamma: CoefficientQuiver) -> str:
    """Edge-list text: 'u v arrow=<k> coeff=<c>' lines plus isolated vertices."""
    def name(v):
        return f"{v[0] + 1}.{v[1] + 1}"

    lines = []
    touched = set()
    for j, i, k, c in gamma.edges:
        touched.add((0, j))
        touched.add((1, i))
        lines.append(f"{name((0, j))} {name((1, i))} arrow={k + 1} coeff={c}")
    for v in gamma.vertices():
        if v not in touched:
            lines.append(name(v))
    return "\n".join(lines) + ("\n" if lines else "")
