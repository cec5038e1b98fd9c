"""Finite simplicial complexes with an order-p simplicial action, and the
equivariant localization check T^*(X) = T^*(X^sigma) on constant
coefficients.

Chain-level Smith theory needs admissibility: every sigma-stable simplex
must be fixed vertexwise (so cochains split off the fixed part with a
degreewise free complement). One barycentric subdivision always makes an
order-p action admissible; this is checked at runtime, never assumed.

Orientation signs come from a single global total order on the vertices;
subdivision vertices are ordered by (dimension, lexicographic carrier).
"""

from __future__ import annotations

import itertools

from .field import Mat
from .sigma import SigmaModule
from .complexes import SigmaChainComplex, tate_hyper_dims


class SmithError(ValueError):
    pass


class SigmaComplex:
    """vertices: ordered labels (the global orientation order);
    facets: vertex subsets (closure implicit); perm: vertex map of order
    dividing p sending simplices to simplices."""

    def __init__(self, vertices, facets, perm, p):
        self.vertices = list(vertices)
        self.vpos = {v: i for i, v in enumerate(self.vertices)}
        if len(self.vpos) != len(self.vertices):
            raise SmithError("duplicate vertices")
        self.facets = [frozenset(f) for f in facets]
        for f in self.facets:
            for v in f:
                if v not in self.vpos:
                    raise SmithError(f"facet vertex {v!r} not declared")
        self.perm = dict(perm)
        self.p = p
        self._validate()
        self._simplices = None

    def _validate(self):
        img = set(self.perm.values())
        if set(self.perm) != set(self.vertices) or img != set(self.vertices):
            raise SmithError("perm is not a permutation of the vertices")
        for v in self.vertices:
            w = v
            for _ in range(self.p):
                w = self.perm[w]
            if w != v:
                raise SmithError("perm does not have order dividing p")
        simplex_set = set()
        for f in self.facets:
            for k in range(1, len(f) + 1):
                for s in itertools.combinations(sorted(f, key=self.vpos.get), k):
                    simplex_set.add(frozenset(s))
        for s in simplex_set:
            if frozenset(self.perm[v] for v in s) not in simplex_set:
                raise SmithError("perm image of a simplex is not a simplex")
        self._simplex_set = simplex_set

    def simplices_by_dim(self):
        """dict q -> sorted list of q-simplices as ascending vertex tuples."""
        if self._simplices is None:
            by_dim = {}
            for s in self._simplex_set:
                t = tuple(sorted(s, key=self.vpos.get))
                by_dim.setdefault(len(t) - 1, []).append(t)
            for q in by_dim:
                by_dim[q].sort(key=lambda t: tuple(self.vpos[v] for v in t))
            self._simplices = by_dim
        return self._simplices

    def dimension(self):
        s = self.simplices_by_dim()
        return max(s) if s else -1

    def perm_simplex(self, s):
        return frozenset(self.perm[v] for v in s)

    def euler_characteristic(self):
        return sum((-1) ** q * len(sx) for q, sx in self.simplices_by_dim().items())

    def to_json(self):
        return {"vertices": [str(v) for v in self.vertices],
                "facets": [sorted(str(v) for v in f) for f in self.facets],
                "perm": {str(v): str(self.perm[v]) for v in self.vertices},
                "p": self.p}

    @staticmethod
    def from_json(obj):
        return SigmaComplex(sorted(obj["vertices"]), obj["facets"],
                            obj["perm"], obj["p"])


def is_admissible(X):
    """True iff every sigma-stable simplex is fixed vertexwise."""
    for sx in X.simplices_by_dim().values():
        for t in sx:
            s = frozenset(t)
            if X.perm_simplex(s) == s and any(X.perm[v] != v for v in s):
                return False
    return True


def barycentric_subdivide(X):
    """One barycentric subdivision; new vertices are the old simplices,
    ordered by (dimension, lexicographic carrier)."""
    def label(s):
        return tuple(sorted(s, key=X.vpos.get))

    simplices = [frozenset(t) for sx in X.simplices_by_dim().values() for t in sx]
    new_vertices = sorted((label(s) for s in simplices),
                          key=lambda t: (len(t), tuple(X.vpos[v] for v in t)))
    new_facets = []
    for f in X.facets:
        verts = sorted(f, key=X.vpos.get)
        for order in itertools.permutations(verts):
            chain = [label(frozenset(order[:k])) for k in range(1, len(order) + 1)]
            new_facets.append(frozenset(chain))
    new_perm = {label(s): label(X.perm_simplex(s)) for s in simplices}
    return SigmaComplex(new_vertices, new_facets, new_perm, X.p)


def fixed_subcomplex(X):
    """Full subcomplex on the perm-fixed vertices, with the identity action."""
    if not is_admissible(X):
        raise SmithError("fixed_subcomplex requires an admissible complex")
    fixed = [v for v in X.vertices if X.perm[v] == v]
    fixed_set = set(fixed)
    facets = []
    for sx in X.simplices_by_dim().values():
        for t in sx:
            if all(v in fixed_set for v in t):
                facets.append(frozenset(t))
    maximal = [f for f in facets if not any(f < g for g in facets)]
    return SigmaComplex(fixed, maximal, {v: v for v in fixed}, X.p)


def _sort_sign(ctx, positions):
    """Sign of the permutation sorting the given distinct position list."""
    sign = 1
    pos = list(positions)
    for i in range(len(pos)):
        for j in range(i + 1, len(pos)):
            if pos[i] > pos[j]:
                sign = -sign
    return ctx.one if sign == 1 else ctx.neg(ctx.one)


def equivariant_cochains(X, ctx):
    """Simplicial cochain complex over k with the perm-induced sigma-action
    (orientation signs from the global vertex order). Input must be
    admissible; subdivide first otherwise."""
    if ctx.p != X.p:
        raise SmithError("field characteristic must equal the action order")
    if not is_admissible(X):
        raise SmithError("non-admissible action; apply barycentric_subdivide")
    by_dim = X.simplices_by_dim()
    if not by_dim:
        zero = SigmaModule(ctx, Mat(ctx, 0, 0, ()))
        return SigmaChainComplex(ctx, 0, [zero], [])
    top = max(by_dim)
    bases = {q: by_dim.get(q, []) for q in range(top + 1)}
    index = {q: {t: i for i, t in enumerate(bases[q])} for q in bases}
    one = ctx.one

    modules = []
    for q in range(top + 1):
        n = len(bases[q])
        rows = [[0] * n for _ in range(n)]
        for i, t in enumerate(bases[q]):
            img = tuple(X.perm[v] for v in t)
            tgt = tuple(sorted(img, key=X.vpos.get))
            sign = _sort_sign(ctx, [X.vpos[v] for v in img])
            rows[index[q][tgt]][i] = sign
        modules.append(SigmaModule(ctx, Mat.from_rows(ctx, rows) if n else
                                   Mat(ctx, 0, 0, ())))

    diffs = []
    for q in range(top):
        src, tgt = bases[q], bases[q + 1]
        rows = [[0] * len(src) for _ in range(len(tgt))]
        for r, t in enumerate(tgt):
            for i in range(len(t)):
                face = t[:i] + t[i + 1:]
                c = index[q].get(face)
                if c is not None:
                    val = one if i % 2 == 0 else ctx.neg(one)
                    rows[r][c] = ctx.add(rows[r][c], val)
        m = Mat.from_rows(ctx, rows) if tgt else Mat(ctx, 0, len(src), ())
        if not tgt and not src:
            m = Mat(ctx, 0, 0, ())
        diffs.append(m)
    return SigmaChainComplex(ctx, 0, modules, diffs)


def betti_numbers(X, ctx):
    from .complexes import cohomology
    C = equivariant_cochains(X, ctx)
    return [cohomology(C, j)[0].dim for j in range(C.a, C.b + 1)]


def smith_localization_report(X, ctx):
    """T^i of X and of X^sigma for i = 0, 1, both through the window
    computation; pass iff the dimensions agree."""
    CX = equivariant_cochains(X, ctx)
    tx = tate_hyper_dims(CX)
    F = fixed_subcomplex(X)
    CF = equivariant_cochains(F, ctx)
    tf = tate_hyper_dims(CF)
    return {"tate_X": tx, "tate_fixed": tf,
            "fixed_vertices": len(F.vertices),
            "pass": tx == tf}


# -- builders for the battery --

def _v(i):
    return f"v{i:03d}"


def ngon(n, step, p):
    """Cycle graph on n vertices with rotation by `step` (order p)."""
    verts = [_v(i) for i in range(n)]
    facets = [{_v(i), _v((i + 1) % n)} for i in range(n)]
    perm = {_v(i): _v((i + step) % n) for i in range(n)}
    return SigmaComplex(verts, facets, perm, p)


def cone(X, apex="apex"):
    verts = list(X.vertices) + [apex]
    facets = [set(f) | {apex} for f in X.facets]
    perm = dict(X.perm)
    perm[apex] = apex
    return SigmaComplex(verts, facets, perm, X.p)


def suspension(X, north="pole_n", south="pole_s"):
    verts = list(X.vertices) + [north, south]
    facets = [set(f) | {north} for f in X.facets] + \
             [set(f) | {south} for f in X.facets]
    perm = dict(X.perm)
    perm[north] = north
    perm[south] = south
    return SigmaComplex(verts, facets, perm, X.p)


def disjoint_union(X, Y):
    verts = [("a", v) for v in X.vertices] + [("b", v) for v in Y.vertices]
    facets = [{("a", v) for v in f} for f in X.facets] + \
             [{("b", v) for v in f} for f in Y.facets]
    perm = {("a", v): ("a", X.perm[v]) for v in X.vertices}
    perm.update({("b", v): ("b", Y.perm[v]) for v in Y.vertices})
    if X.p != Y.p:
        raise SmithError("mismatched action orders")
    return SigmaComplex(verts, facets, perm, X.p)


def full_simplex(labels, p, perm=None):
    labels = list(labels)
    return SigmaComplex(labels, [set(labels)],
                        perm or {v: v for v in labels}, p)


def with_identity_action(X):
    return SigmaComplex(X.vertices, X.facets, {v: v for v in X.vertices}, X.p)
