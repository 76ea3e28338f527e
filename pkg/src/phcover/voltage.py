"""Generic voltage-assignment machinery over exponent-2 voltage groups.

Every voltage group in this package (the 21-dimensional symmetric
square, its quotient N by {0, U}, and the cycle-voltage subgroup M) is
an elementary abelian 2-group, so voltages are written additively, a
dart and its reverse carry the same value, and path voltages are plain
XOR folds of packed coordinate vectors.

A :class:`DartTable` pins one voltage assignment to one enumerated
graph as a CSR array of packed values; everything bulk (spanning-tree
potentials, fundamental-cycle spans, lift components, local-isomorphism
verification) runs off it.  The scalar entry points take a plain
``dart_fn(a, b) -> 21-tuple`` instead and work on any graph.
"""

from __future__ import annotations

import numpy as np

from .field import GF
from .graphs import (
    Graph,
    adjacent,
    build_affine_graph,
    normalize,
    random_affine_vertex,
    random_neighbor,
    reduct_class,
)
from .linalg import mat_mul
from .multilinear import (
    MatrixAction,
    ZERO21,
    action,
    n_project_packed,
    pack_sym,
    sym_add,
    u_packed,
)


class F2Span:
    """An F2 span of packed bit vectors, kept as reduced pivot rows."""

    def __init__(self):
        self.pivots: dict[int, int] = {}

    def reduce(self, x: int) -> int:
        while x:
            row = self.pivots.get(x.bit_length() - 1)
            if row is None:
                break
            x ^= row
        return x

    def add(self, x: int) -> bool:
        """Insert x; returns True when it enlarged the span."""
        r = self.reduce(x)
        if r:
            self.pivots[r.bit_length() - 1] = r
            return True
        return False

    def contains(self, x: int) -> bool:
        return self.reduce(x) == 0

    @property
    def dim(self) -> int:
        return len(self.pivots)


def path_voltage(gf: GF, dart_fn, path):
    """Sum of the dart voltages along a path of pairwise-adjacent vertices."""
    acc = ZERO21
    for a, b in zip(path, path[1:]):
        acc = sym_add(acc, dart_fn(a, b))
    return acc


def lift_adjacent(gf: GF, dart_fn, a, m, b, n) -> bool:
    """Adjacency in the lift: base adjacency plus voltage equal to the tag sum.

    Tags m, n are canonical representatives in N (21-tuples).
    """
    if not adjacent(gf, a, b):
        return False
    want = n_project_packed(gf, pack_sym(gf, sym_add(m, n)))
    have = n_project_packed(gf, pack_sym(gf, dart_fn(a, b)))
    return want == have


def act_lift(gf: GF, act: MatrixAction, vert, tag_packed: int, k_packed: int):
    """Image of a lift vertex ((v, h), tag) under the extension element (g, k):
    the base vertex moves through g and the tag through the quotient action
    followed by translation by k."""
    v, h = vert
    image = (act.on_vector(v), act.on_covector(h))
    return image, n_project_packed(gf, act.on_n_packed(tag_packed) ^ k_packed)


def compose_extension(gf: GF, g_act: MatrixAction, k1: int, h_act: MatrixAction, k2: int):
    """Semidirect product law induced by the action formula:
    (g, k1)(h, k2) = (gh, k1^h + k2)."""
    prod = action(gf, mat_mul(gf, g_act.m, h_act.m))
    return prod, n_project_packed(gf, h_act.on_n_packed(k1) ^ k2)


# ----------------------------------------------------------------------
# packed dart tables on enumerated graphs
# ----------------------------------------------------------------------

class DartTable:
    """CSR store of packed dart voltages for an enumerated graph."""

    def __init__(self, graph: Graph, indptr, indices, volts):
        self.graph = graph
        self.gf = graph.gf
        self.indptr = indptr
        self.indices = indices
        self.volts = volts
        self._tree_cache: dict = {}

    @classmethod
    def from_bulk(cls, graph: Graph, bulk_fn) -> "DartTable":
        """Build from a vectorised voltage function taking coordinate stacks
        (VA, HA, VB, HB) and returning packed uint64 values."""
        if not graph.cached:
            raise ValueError("dart tables need a graph with cached adjacency")
        indptr = graph._indptr
        indices = graph._indices
        src = np.repeat(np.arange(graph.n, dtype=np.int64), np.diff(indptr))
        dst = indices.astype(np.int64)
        volts = bulk_fn(
            graph.vmat[src], graph.hmat[src],
            graph.vmat[dst], graph.hmat[dst],
        )
        return cls(graph, indptr, indices, volts)

    @classmethod
    def from_scalar(cls, graph: Graph, packed_dart_fn) -> "DartTable":
        """Build dart by dart from a scalar packed voltage function.  Values
        are stored as Python ints (object dtype), so any packing width works;
        only sensible for small graphs."""
        if not graph.cached:
            raise ValueError("dart tables need a graph with cached adjacency")
        indptr = graph._indptr
        indices = graph._indices
        volts = np.empty(indices.size, dtype=object)
        pos = 0
        for u in range(graph.n):
            a = graph.vertices[u]
            for _ in range(int(indptr[u + 1] - indptr[u])):
                volts[pos] = packed_dart_fn(a, graph.vertices[int(indices[pos])])
                pos += 1
        return cls(graph, indptr, indices, volts)

    def dart(self, i: int, j: int) -> int:
        """Packed voltage of the dart (i, j); raises on non-adjacent pairs."""
        lo, hi = self.indptr[i], self.indptr[i + 1]
        pos = lo + np.searchsorted(self.indices[lo:hi], j)
        if pos >= hi or self.indices[pos] != j:
            raise ValueError(f"vertices {i} and {j} are not adjacent")
        return int(self.volts[pos])

    def path(self, idx_path) -> int:
        acc = 0
        for a, b in zip(idx_path, idx_path[1:]):
            acc ^= self.dart(a, b)
        return acc


def spanning_tree_potentials(table: DartTable, root: int):
    """BFS spanning tree from the root; pot[v] is the tree-path voltage from
    the root to v.  Neighbours are scanned in index order, so the tree (and
    any tie-break among shortest paths) is deterministic."""
    cached = table._tree_cache.get(root)
    if cached is not None:
        return cached
    g = table.graph
    parent = np.full(g.n, -1, dtype=np.int64)
    pot = np.zeros(g.n, dtype=table.volts.dtype if table.volts.dtype == object else np.uint64)
    if pot.dtype == object:
        pot[:] = 0
    seen = np.zeros(g.n, dtype=bool)
    seen[root] = True
    order = [root]
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        lo, hi = table.indptr[u], table.indptr[u + 1]
        for pos in range(lo, hi):
            v = int(table.indices[pos])
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                pot[v] = pot[u] ^ table.volts[pos]
                order.append(v)
    if not seen.all():
        raise ValueError("graph is not connected")
    if len(table._tree_cache) < 8:
        table._tree_cache[root] = (parent, pot)
    return parent, pot


def tree_path_to_root(parent, v: int):
    path = [v]
    while parent[path[-1]] >= 0:
        path.append(int(parent[path[-1]]))
    return path


def fundamental_cycle_span(table: DartTable, root: int = 0, member_fn=None):
    """Span of the voltages of all fundamental cycles of a BFS spanning tree.

    For the non-tree edge (a, b) the fundamental voltage is
    pot[a] + volt(a, b) + pot[b]; tree edges contribute zero.  In an
    abelian exponent-2 group this set generates the same span as the
    voltages of all closed walks.  When member_fn is given, every
    fundamental voltage is additionally tested with it and failures are
    counted as violations.
    """
    parent, pot = spanning_tree_potentials(table, root)
    g = table.graph
    src = np.repeat(np.arange(g.n, dtype=np.int64), np.diff(table.indptr))
    dst = table.indices.astype(np.int64)
    keep = src < dst
    fc = pot[src[keep]] ^ pot[dst[keep]] ^ table.volts[keep]
    fc = fc[fc != 0]
    uniq = np.unique(fc)
    span = F2Span()
    for x in uniq.tolist():
        span.add(int(x))
    violations = 0
    witnesses = []
    if member_fn is not None:
        for x in uniq.tolist():
            if not member_fn(int(x)):
                violations += 1
                if len(witnesses) < 5:
                    witnesses.append({"voltage": int(x)})
    return {
        "span": span,
        "edges": int(keep.sum()),
        "nontree_edges": int(keep.sum()) - (g.n - 1),
        "distinct_voltages": int(uniq.size) + 1,  # including 0
        "violations": violations,
        "witnesses": witnesses,
    }


# ----------------------------------------------------------------------
# lift components
# ----------------------------------------------------------------------

class CapExceeded(RuntimeError):
    pass


def component_of(table: DartTable, root: int, cap: int = 10 ** 7, root_tag: int = 0):
    """BFS over the lift with N-valued tags, starting at (root, root_tag).

    Tags are canonical packed representatives modulo U; the unique lift
    neighbour of (u, m) over the base neighbour v carries the tag
    m + voltage(u, v).  Raises CapExceeded when the component grows past
    the cap.
    """
    gf = table.gf
    up = u_packed(gf)
    start = (root, min(root_tag, root_tag ^ up))
    index = {start: 0}
    verts = [start]
    head = 0
    while head < len(verts):
        u, tag = verts[head]
        head += 1
        lo, hi = table.indptr[u], table.indptr[u + 1]
        for pos in range(lo, hi):
            v = int(table.indices[pos])
            t = tag ^ int(table.volts[pos])
            t = min(t, t ^ up)
            key = (v, t)
            if key not in index:
                if len(verts) >= cap:
                    raise CapExceeded(
                        f"lift component exceeded the cap of {cap} vertices;"
                        " use the cycle-span computation instead"
                    )
                index[key] = len(verts)
                verts.append(key)
    fibers: dict[int, int] = {}
    for b, _ in verts:
        fibers[b] = fibers.get(b, 0) + 1
    return {"vertices": verts, "index": index, "fiber_sizes": fibers}


def verify_local_isomorphism(table: DartTable, component, mode: str = "direct") -> dict:
    """Check that projecting each lift vertex's neighbourhood onto the base
    neighbourhood is an adjacency-and-non-adjacency preserving bijection.

    mode "direct" verifies this at every lift vertex of the component,
    vectorised over each fiber; mode "triangles" verifies the equivalent
    triangle condition (every base triangle has voltage 0 in N) instead.
    """
    gf = table.gf
    g = table.graph
    up = u_packed(gf)
    violations = 0
    checked = 0
    if mode == "triangles":
        for u in range(g.n):
            nbrs = g.neighbors(u)
            for a_pos in range(len(nbrs)):
                a = int(nbrs[a_pos])
                if a < u:
                    continue
                for b_pos in range(a_pos + 1, len(nbrs)):
                    b = int(nbrs[b_pos])
                    if b < u or not g.adjacent(a, b):
                        continue
                    tri = table.dart(u, a) ^ table.dart(a, b) ^ table.dart(b, u)
                    checked += 1
                    if tri not in (0, up):
                        violations += 1
        return {"mode": mode, "checked": checked, "violations": violations,
                "passed": violations == 0}

    fibers: dict[int, list[int]] = {}
    for b, t in component["vertices"]:
        fibers.setdefault(b, []).append(t)
    for base, tags in fibers.items():
        tags_arr = np.array(tags, dtype=np.uint64)
        nbrs = g.neighbors(base)
        deg = len(nbrs)
        lo = table.indptr[base]
        lrow = table.volts[lo:lo + deg]
        # canonical tags of the lift neighbours, one per base neighbour
        cand = tags_arr[:, None] ^ lrow[None, :]
        cand = np.minimum(cand, cand ^ np.uint64(up))
        # pairwise adjacency of lift neighbours must mirror the base exactly
        pos_of = {int(w): p for p, w in enumerate(nbrs)}
        for p in range(deg):
            w1 = int(nbrs[p])
            for pos in range(table.indptr[w1], table.indptr[w1 + 1]):
                w2 = int(table.indices[pos])
                q = pos_of.get(w2)
                if q is None or q <= p:
                    continue
                # base edge (w1, w2): lift neighbours must be adjacent too
                want = int(table.volts[pos])
                want = min(want, want ^ up)
                have = cand[:, p] ^ cand[:, q]
                have = np.minimum(have, have ^ np.uint64(up))
                checked += tags_arr.size
                violations += int((have != want).sum())
        # bijectivity: one lift neighbour per base neighbour, all present
        if cand.shape[1] != deg:
            violations += 1
    return {"mode": mode, "checked": checked, "violations": violations,
            "passed": violations == 0}


# ----------------------------------------------------------------------
# the stabilizer of a component and its cocycle
# ----------------------------------------------------------------------

def vertex_image_index(table: DartTable, act: MatrixAction, i: int) -> int:
    """Index of the image of vertex i under the matrix action, normalising
    when the graph is projective."""
    g = table.graph
    v, h = g.vertices[i]
    vi, hi = act.on_vector(v), act.on_covector(h)
    if g.kind == "projective":
        vi, hi = normalize(g.gf, vi), normalize(g.gf, hi)
    return g.index[(vi, hi)]


def lambda_of(table: DartTable, act: MatrixAction, v_idx: int, via: int | None = None) -> int:
    """Packed voltage of a chosen path from the image of v back to v.

    With via given, the path runs (v^g, via, v); otherwise it is the BFS
    shortest path in the spanning tree rooted at v (deterministic
    tie-break by vertex order).  Different choices shift the value by an
    element of the cycle-voltage span only.
    """
    vg = vertex_image_index(table, act, v_idx)
    if vg == v_idx:
        return 0
    if via is not None:
        return table.dart(vg, via) ^ table.dart(via, v_idx)
    parent, pot = spanning_tree_potentials(table, v_idx)
    return int(pot[vg])


def stabilizer_closure_check(table: DartTable, action_pairs, v_idx: int, member_fn) -> dict:
    """Check the 2-cocycle condition of the component stabilizer on sampled
    pairs: lambda(gh) + lambda(g)^h + lambda(h) must satisfy member_fn
    (membership in the cycle-voltage subgroup)."""
    gf = table.gf
    violations = 0
    witnesses = []
    for g_act, h_act in action_pairs:
        gh = action(gf, mat_mul(gf, g_act.m, h_act.m))
        c = lambda_of(table, gh, v_idx) \
            ^ h_act.on_sym_packed(lambda_of(table, g_act, v_idx)) \
            ^ lambda_of(table, h_act, v_idx)
        if not member_fn(c):
            violations += 1
            if len(witnesses) < 5:
                witnesses.append({"cocycle": c})
    return {"pairs": len(action_pairs), "violations": violations,
            "witnesses": witnesses, "passed": violations == 0}


# ----------------------------------------------------------------------
# reductivity and equivariance
# ----------------------------------------------------------------------

def check_reductive(gf: GF, dart_fn, mode: str, samples: int = 0, rng=None,
                    max_witnesses: int = 5) -> dict:
    """Check that equivalent vertices receive equal voltages from any common
    neighbour: for u ~ v (same normalised class) and w adjacent to v, w is
    adjacent to u and voltage(w, u) == voltage(w, v).

    Exhaustive mode enumerates the affine graph and iterates all such
    triples (only feasible for small fields); sample mode draws random
    rescalings of random vertices.
    """
    violations = 0
    witnesses = []
    checked = 0
    if mode == "exhaustive":
        graph = build_affine_graph(gf)
        classes: dict = {}
        for i, vert in enumerate(graph.vertices):
            classes.setdefault(reduct_class(gf, vert), []).append(i)
        for members in classes.values():
            for ui in members:
                for vi in members:
                    if ui == vi:
                        continue
                    u, v = graph.vertices[ui], graph.vertices[vi]
                    for wi in graph.neighbors(vi):
                        w = graph.vertices[int(wi)]
                        checked += 1
                        if not adjacent(gf, w, u) or dart_fn(w, u) != dart_fn(w, v):
                            violations += 1
                            if len(witnesses) < max_witnesses:
                                witnesses.append({"u": u, "v": v, "w": w})
    elif mode == "sample":
        if rng is None:
            raise ValueError("sample mode needs an rng")
        for _ in range(samples):
            v0, h0 = random_affine_vertex(gf, rng)
            lam = 1 + rng.randrange(gf.order - 1)
            mu = 1 + rng.randrange(gf.order - 1)
            u = (tuple(gf.mul(lam, c) for c in v0),
                 tuple(gf.mul(mu, c) for c in h0))
            v = (v0, h0)
            w = random_neighbor(gf, v, rng)
            if w is None:
                continue
            checked += 1
            if not adjacent(gf, w, u) or dart_fn(w, u) != dart_fn(w, v):
                violations += 1
                if len(witnesses) < max_witnesses:
                    witnesses.append({"u": u, "v": v, "w": w})
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return {"check": "reductive", "field": gf.order, "mode": mode,
            "samples": checked, "violations": violations,
            "witnesses": witnesses, "passed": violations == 0}


def check_equivariance(gf: GF, dart_fn, actions, mode: str, samples: int = 0,
                       rng=None, table: DartTable | None = None,
                       max_witnesses: int = 5) -> dict:
    """Check voltage equivariance: the voltage of the image dart equals the
    induced action on the voltage of the dart, for every supplied matrix.

    Exhaustive mode runs over all darts of an enumerated affine graph
    through its packed table; sample mode draws random darts lazily.
    """
    violations = 0
    checked = 0
    witnesses = []
    if mode == "exhaustive":
        if table is None:
            raise ValueError("exhaustive mode needs a dart table")
        g = table.graph
        for act in actions:
            perm = [vertex_image_index(table, act, i) for i in range(g.n)]
            for u in range(g.n):
                lo, hi = table.indptr[u], table.indptr[u + 1]
                for pos in range(lo, hi):
                    v = int(table.indices[pos])
                    if v < u:
                        continue
                    checked += 1
                    if table.dart(perm[u], perm[v]) != act.on_sym_packed(int(table.volts[pos])):
                        violations += 1
                        if len(witnesses) < max_witnesses:
                            witnesses.append({"dart": (u, v), "matrix": act.m})
    elif mode == "sample":
        if rng is None:
            raise ValueError("sample mode needs an rng")
        per_action = max(1, samples // max(1, len(actions)))
        for act in actions:
            for _ in range(per_action):
                a = random_affine_vertex(gf, rng)
                b = random_neighbor(gf, a, rng)
                if b is None:
                    continue
                checked += 1
                ga = (act.on_vector(a[0]), act.on_covector(a[1]))
                gb = (act.on_vector(b[0]), act.on_covector(b[1]))
                if dart_fn(ga, gb) != act.on_sym(dart_fn(a, b)):
                    violations += 1
                    if len(witnesses) < max_witnesses:
                        witnesses.append({"dart": (a, b), "matrix": act.m})
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return {"check": "equivariance", "field": gf.order, "mode": mode,
            "samples": checked, "violations": violations,
            "witnesses": witnesses, "passed": violations == 0}
