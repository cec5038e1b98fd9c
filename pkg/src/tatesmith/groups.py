"""Finite groups as explicit element lists, plus matrix representations.

Elements are arbitrary hashable labels; every group carries an index map
and multiplication through a Python function (a full table is only
materialized for small groups). Group axioms are verified exhaustively up
to the brute-force cap (TATE_SMITH_MAX_ORDER, default 48) and on sampled
triples beyond it.
"""

from __future__ import annotations

import itertools
import os
import random

from .field import Mat, kron


def max_brute_order():
    return int(os.environ.get("TATE_SMITH_MAX_ORDER", "48"))


class GroupError(ValueError):
    pass


class FiniteGroup:
    def __init__(self, elements, mul, name="G", verify=True,
                 identity=None, inv_fn=None):
        self.elements = list(elements)
        self.order = len(self.elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != self.order:
            raise GroupError("duplicate elements")
        self._mul = mul
        self.name = name
        self.identity = identity if identity is not None else self._find_identity()
        if inv_fn is not None:
            self._inv = {a: inv_fn(a) for a in self.elements}
            for a, b in self._inv.items():
                if mul(a, b) != self.identity or mul(b, a) != self.identity:
                    raise GroupError(f"bad inverse for {a!r}")
        else:
            self._inv = {}
            for a in self.elements:
                for b in self.elements:
                    if mul(a, b) == self.identity and mul(b, a) == self.identity:
                        self._inv[a] = b
                        break
                else:
                    raise GroupError(f"no inverse for {a!r}")
        if verify:
            self._verify_axioms()

    def _find_identity(self):
        for e in self.elements:
            if all(self._mul(e, a) == a and self._mul(a, e) == a for a in self.elements):
                return e
        raise GroupError("no identity element")

    def _verify_axioms(self):
        els = self.elements
        n = self.order
        for a in els:
            for b in els:
                if self._mul(a, b) not in self.index:
                    raise GroupError("not closed under multiplication")
        if n <= max_brute_order():
            triples = itertools.product(els, els, els)
        else:
            rng = random.Random(0)
            triples = [(rng.choice(els), rng.choice(els), rng.choice(els))
                       for _ in range(2000)]
        for a, b, c in triples:
            if self._mul(self._mul(a, b), c) != self._mul(a, self._mul(b, c)):
                raise GroupError("multiplication is not associative")

    def mul(self, a, b):
        return self._mul(a, b)

    def inv(self, a):
        return self._inv[a]

    def conj(self, g, x):
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def generating_set(self):
        """A small generating set, greedily extended in element order."""
        gens = []
        generated = {self.identity}
        for e in self.elements:
            if e in generated:
                continue
            gens.append(e)
            frontier = list(generated)
            generated.add(e)
            queue = [e]
            while queue:
                x = queue.pop()
                for g in gens:
                    for y in (self.mul(x, g), self.mul(g, x)):
                        if y not in generated:
                            generated.add(y)
                            queue.append(y)
                for z in list(frontier):
                    y = self.mul(x, z)
                    if y not in generated:
                        generated.add(y)
                        queue.append(y)
            if len(generated) == self.order:
                break
        return gens or [self.identity]

    def subgroup_closure(self, gens):
        out = {self.identity}
        queue = [self.identity]
        gens = list(gens)
        while queue:
            x = queue.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in out:
                    out.add(y)
                    queue.append(y)
        return [e for e in self.elements if e in out]

    def to_json(self):
        table = [[self.index[self.mul(a, b)] for b in self.elements]
                 for a in self.elements]
        return {"order": self.order, "mul": table}

    @staticmethod
    def from_json(obj, name="G"):
        if "mul" in obj:
            table = obj["mul"]
            n = obj.get("order", len(table))
            els = list(range(n))
            return FiniteGroup(els, lambda a, b: table[a][b], name=name)
        if "perm_gens" in obj:
            return perm_group([tuple(g) for g in obj["perm_gens"]], name=name)
        raise GroupError("group JSON needs 'mul' or 'perm_gens'")


def cyclic_group(n):
    return FiniteGroup(list(range(n)), lambda a, b: (a + b) % n, name=f"C{n}")


def symmetric_group(n):
    """S_n on permutation tuples; s[i] is the image of i."""
    els = sorted(itertools.permutations(range(n)))
    def mul(s, t):  # (s*t)(i) = s(t(i))
        return tuple(s[t[i]] for i in range(n))
    return FiniteGroup(els, mul, name=f"S{n}")


def perm_group(gens, name="G"):
    """Closure of permutation generators (tuples) under composition."""
    n = len(gens[0])
    ident = tuple(range(n))
    def mul(s, t):
        return tuple(s[t[i]] for i in range(n))
    els = {ident}
    queue = [ident]
    while queue:
        x = queue.pop()
        for g in gens:
            y = mul(x, g)
            if y not in els:
                els.add(y)
                queue.append(y)
    return FiniteGroup(sorted(els), mul, name=name)


def direct_power(G, k):
    els = list(itertools.product(G.elements, repeat=k))
    def mul(a, b):
        return tuple(G.mul(x, y) for x, y in zip(a, b))
    check = G.order ** k <= max_brute_order()
    return FiniteGroup(els, mul, name=f"{G.name}^{k}", verify=check,
                       identity=tuple([G.identity] * k),
                       inv_fn=lambda a: tuple(G.inv(x) for x in a))


def direct_product(G, H):
    els = list(itertools.product(G.elements, H.elements))
    def mul(a, b):
        return (G.mul(a[0], b[0]), H.mul(a[1], b[1]))
    return FiniteGroup(els, mul, name=f"{G.name}x{H.name}",
                       identity=(G.identity, H.identity),
                       inv_fn=lambda a: (G.inv(a[0]), H.inv(a[1])))


def semidirect_product(N, Q, action, name=None):
    """N x| Q where action[q] is a dict giving the automorphism of N."""
    els = list(itertools.product(N.elements, Q.elements))
    def mul(a, b):
        (n1, q1), (n2, q2) = a, b
        return (N.mul(n1, action[q1][n2]), Q.mul(q1, q2))
    return FiniteGroup(els, mul, name=name or f"{N.name}x|{Q.name}")


def cyclic_shift_automorphism(G, k):
    """On a direct power: rotate coordinates, sending slot i to slot i+1."""
    def shift(a):
        return tuple(a[(i - 1) % k] for i in range(k))
    return shift


class SigmaGroup:
    """A finite group with an order-p automorphism and its fixed subgroup."""

    def __init__(self, G, sigma, p):
        self.G = G
        self.p = p
        self.sigma = sigma
        x = {g: sigma(g) for g in G.elements}
        for g in G.elements:
            y = g
            for _ in range(p):
                y = x[y]
            if y != g:
                raise GroupError("automorphism does not have order dividing p")
        for a in G.elements[:min(G.order, max_brute_order())]:
            for b in G.elements[:min(G.order, max_brute_order())]:
                if sigma(G.mul(a, b)) != G.mul(sigma(a), sigma(b)):
                    raise GroupError("sigma is not an automorphism")
        self.fixed_elements = [g for g in G.elements if sigma(g) == g]

    def sigma_pow(self, g, j):
        for _ in range(j % self.p):
            g = self.sigma(g)
        return g

    def fixed_subgroup(self):
        H = self.fixed_elements
        return FiniteGroup(H, self.G.mul, name=f"{self.G.name}^sigma", verify=False)


def base_change_group(H, p):
    """G = H^p with the cyclic-rotation automorphism; the base-change case."""
    G = direct_power(H, p)
    return SigmaGroup(G, cyclic_shift_automorphism(G, p), p)


class GroupRep:
    """Finite-dimensional matrix representation, lazily evaluated.

    Matrices are produced by a function on elements and cached; generator
    relations are spot-checked on the multiplication table at construction.
    """

    def __init__(self, group, dim, mat_fn, ctx, name="rep", check=True):
        self.group = group
        self.dim = dim
        self.ctx = ctx
        self._fn = mat_fn
        self._cache = {}
        self.name = name
        if check:
            self.spot_check()

    def mat(self, g):
        if g not in self._cache:
            self._cache[g] = self._fn(g)
        return self._cache[g]

    def spot_check(self, limit=None):
        G = self.group
        if limit is None:
            limit = max_brute_order()
        if G.order <= limit:
            pairs = itertools.product(G.elements, G.elements)
        else:
            rng = random.Random(1)
            pairs = [(rng.choice(G.elements), rng.choice(G.elements))
                     for _ in range(200)]
        for a, b in pairs:
            if self.mat(G.mul(a, b)).entries != self.mat(a).mul(self.mat(b)).entries:
                raise GroupError("matrices do not satisfy the group relations")
        ident = self.mat(G.identity)
        if ident.entries != Mat.identity(self.ctx, self.dim).entries:
            raise GroupError("identity does not map to the identity matrix")

    def gen_mats(self, gens=None):
        gens = gens if gens is not None else self.group.generating_set()
        return gens, [self.mat(g) for g in gens]

    def compose_aut(self, aut, name=None):
        """The representation g -> self(aut(g))."""
        return GroupRep(self.group, self.dim, lambda g: self.mat(aut(g)),
                        self.ctx, name=name or f"{self.name}∘aut", check=False)


def trivial_rep(group, ctx):
    one = Mat.identity(ctx, 1)
    return GroupRep(group, 1, lambda g: one, ctx, name="triv", check=False)


def regular_rep(group, ctx):
    n = group.order
    def mat(g):
        rows = [[0] * n for _ in range(n)]
        for j, x in enumerate(group.elements):
            rows[group.index[group.mul(g, x)]][j] = ctx.one
        return Mat.from_rows(ctx, rows)
    return GroupRep(group, n, mat, ctx, name="reg",
                    check=group.order <= max_brute_order())


def permutation_rep(group, points, act, ctx, name="perm"):
    idx = {x: i for i, x in enumerate(points)}
    n = len(points)
    def mat(g):
        rows = [[0] * n for _ in range(n)]
        for j, x in enumerate(points):
            rows[idx[act(g, x)]][j] = ctx.one
        return Mat.from_rows(ctx, rows)
    return GroupRep(group, n, mat, ctx, name=name,
                    check=group.order <= max_brute_order())


def character_rep(group, values, ctx, name="chi"):
    """One-dimensional representation from a dict element -> scalar."""
    return GroupRep(group, 1, lambda g: Mat(ctx, 1, 1, ((values[g],),)),
                    ctx, name=name)


def sign_rep_s3(group, ctx):
    minus = ctx.neg(ctx.one)
    vals = {g: (ctx.one if _perm_sign(g) == 1 else minus) for g in group.elements}
    return character_rep(group, vals, ctx, name="sign")


def _perm_sign(p):
    n = len(p)
    seen = [False] * n
    sign = 1
    for i in range(n):
        if seen[i]:
            continue
        j, ln = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            ln += 1
        if ln % 2 == 0:
            sign = -sign
    return sign


def standard_rep_s3(group, ctx):
    """The 2-dimensional representation of S_3: permutation rep on 3 points
    restricted to the sum-zero plane, in the basis e0-e1, e1-e2."""
    one = ctx.one
    m1 = ctx.neg(one)
    def mat(g):
        # images of basis vectors f0 = e0-e1, f1 = e1-e2 under permuting e_i
        cols = []
        for f in ((one, m1, 0), (0, one, m1)):
            img = [0, 0, 0]
            for i, c in enumerate(f):
                img[g[i]] = c
            # express img = a*f0 + b*f1 using e-coordinates: a = img[0], b = -img[2]
            cols.append((img[0], ctx.neg(img[2])))
        return Mat(ctx, 2, 2, ((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1])))
    return GroupRep(group, 2, mat, ctx, name="std2")


def box_product_rep(reps, group, ctx, name=None):
    """External tensor product over a direct product/power group whose
    elements are tuples matching the factor list."""
    dim = 1
    for r in reps:
        dim *= r.dim
    def mat(g):
        out = reps[0].mat(g[0])
        for r, comp in zip(reps[1:], g[1:]):
            out = kron(out, r.mat(comp))
        return out
    return GroupRep(group, dim, mat, ctx, name=name or "boxtimes", check=False)
