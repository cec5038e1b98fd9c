"""Finite-group Hecke algebras as G-invariant kernels on (G/K)^2, the
Brauer homomorphism for plain subgroups, Hecke actions on invariants, the
Tate/Hecke compatibility square, and norm/character extension for
commutative algebras with sigma-action.

A kernel f is stored by the values y |-> f(K, yK): G-invariance makes
this a function on K\\G/K, which is validated. Convolution follows
(f*g)(x,z) = sum_y f(x,y) g(y,z), implemented sparsely on supports.
No measure normalization anywhere (division by |K| is unavailable in
characteristic p, and unnecessary in this model).
"""

from __future__ import annotations

from .field import (Mat, Subquotient, columns, image, kernel,
                    mat_from_columns, rank, solve)
from .groups import FiniteGroup, SigmaGroup
from .linkage import SigmaExtendedRep


class HeckeError(ValueError):
    pass


class CosetSpace:
    """Left cosets G/K with deterministic representatives (first element
    in group order)."""

    def __init__(self, G, K_elements):
        self.G = G
        self.K = list(K_elements)
        kset = set(self.K)
        if G.identity not in kset:
            raise HeckeError("K must contain the identity")
        self.coset_of = {}
        self.reps = []
        for g in G.elements:
            if g in self.coset_of:
                continue
            idx = len(self.reps)
            self.reps.append(g)
            for k in self.K:
                self.coset_of[G.mul(g, k)] = idx
        self.n = len(self.reps)

    def same_as(self, other):
        """Indexing is deterministic in (G, K), so structural equality of
        the data means identical coset numbering."""
        return self.G is other.G and set(self.K) == set(other.K)


class HeckeElement:
    """Sparse K\\G/K-function: values[coset index] = f(K, yK)."""

    def __init__(self, space, values, ctx, validate=True):
        self.space = space
        self.ctx = ctx
        self.values = {c: v for c, v in values.items() if v}
        if validate:
            self._validate()

    def _validate(self):
        G, sp = self.space.G, self.space
        for c in list(self.values):
            for k in sp.K:
                c2 = sp.coset_of[G.mul(k, sp.reps[c])]
                if self.values.get(c2, 0) != self.values[c]:
                    raise HeckeError("values not constant on double cosets")

    def __eq__(self, other):
        return self.space.same_as(other.space) and self.values == other.values

    def support(self):
        return sorted(self.values)

    def scale(self, c):
        ctx = self.ctx
        return HeckeElement(self.space,
                            {k: ctx.mul(c, v) for k, v in self.values.items()},
                            ctx, validate=False)

    def add(self, other):
        ctx = self.ctx
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = ctx.add(out.get(k, 0), v)
        return HeckeElement(self.space, out, ctx, validate=False)


class HeckeContext:
    """A SigmaGroup together with a sigma-stable subgroup K; owns the coset
    spaces for (G, K) and (H, U = K ∩ H)."""

    def __init__(self, sg, K_elements, ctx):
        self.sg = sg
        self.ctx = ctx
        self.G = sg.G
        self.K = list(K_elements)
        kset = set(self.K)
        for k in self.K:
            if sg.sigma(k) not in kset:
                raise HeckeError("K is not sigma-stable")
        self.space = CosetSpace(self.G, self.K)
        self.H = sg.fixed_subgroup()
        self.U = [h for h in self.H.elements if h in kset]
        self.hspace = CosetSpace(self.H, self.U)
        self._h_coset_set = {self.space.coset_of[h] for h in self.H.elements}

    # -- constructors --

    def unit(self):
        return HeckeElement(self.space,
                            {self.space.coset_of[self.G.identity]: self.ctx.one},
                            self.ctx, validate=False)

    def double_coset_of(self, g):
        """Indicator of the G-orbit of (K, gK): the double coset KgK."""
        sp = self.space
        seen = set()
        queue = [sp.coset_of[g]]
        while queue:
            c = queue.pop()
            if c in seen:
                continue
            seen.add(c)
            for k in self.K:
                queue.append(sp.coset_of[self.G.mul(k, sp.reps[c])])
        return HeckeElement(sp, {c: self.ctx.one for c in seen},
                            self.ctx, validate=False)

    def basis(self):
        """All double-coset indicators, ordered by smallest coset index."""
        sp = self.space
        out, seen = [], set()
        for c in range(sp.n):
            if c in seen:
                continue
            e = self.double_coset_of(sp.reps[c])
            seen.update(e.values)
            out.append(e)
        return out

    # -- algebra operations --

    def convolve(self, f, g):
        if not (f.space.same_as(self.space) and g.space.same_as(self.space)):
            raise HeckeError("mismatched coset spaces")
        ctx, G, sp = self.ctx, self.G, self.space
        out = {}
        for cy, fy in f.values.items():
            y = sp.reps[cy]
            for cw, gw in g.values.items():
                z = sp.coset_of[G.mul(y, sp.reps[cw])]
                out[z] = ctx.add(out.get(z, 0), ctx.mul(fy, gw))
        return HeckeElement(sp, out, self.ctx, validate=False)

    def sigma_transport(self, f):
        sp = self.space
        out = {}
        for c, v in f.values.items():
            out[sp.coset_of[self.sg.sigma(sp.reps[c])]] = v
        return HeckeElement(sp, out, self.ctx, validate=False)

    def is_sigma_invariant(self, f):
        return self.sigma_transport(f).values == f.values

    def sigma_orbit_sum(self, f):
        out = f
        cur = f
        for _ in range(self.sg.p - 1):
            cur = self.sigma_transport(cur)
            if cur.values == f.values:
                break
            out = out.add(cur)
        return out

    def sigma_invariant_basis(self):
        """Sums over sigma-orbits of the double-coset basis."""
        out, seen = [], set()
        for e in self.basis():
            key = min(e.values)
            if key in seen:
                continue
            s = self.sigma_orbit_sum(e)
            seen.update(s.values)
            out.append(s)
        return out

    # -- plainness and the Brauer homomorphism --

    def fixed_cosets(self):
        sp = self.space
        return [c for c in range(sp.n)
                if sp.coset_of[self.sg.sigma(sp.reps[c])] == c]

    def is_plain(self):
        """(G/K)^sigma = H/U: every sigma-fixed coset contains an H-point."""
        return all(c in self._h_coset_set for c in self.fixed_cosets())

    def restriction(self, f):
        """Naive restriction of the kernel to (H/U)^2 (no plainness check;
        not an algebra map in general -- the negative control uses this)."""
        hs = self.hspace
        out = {}
        for c, h in enumerate(hs.reps):
            v = f.values.get(self.space.coset_of[h], 0)
            if v:
                out[c] = v
        return HeckeElement(hs, out, self.ctx, validate=False)

    def brauer(self, f):
        if not self.is_plain():
            raise HeckeError("Brauer homomorphism requires a plain subgroup")
        if not self.is_sigma_invariant(f):
            raise HeckeError("Brauer homomorphism needs a sigma-invariant kernel")
        return self.restriction(f)

    def h_context(self):
        """The (H, U) context, for convolving Brauer images."""
        triv = SigmaGroup(self.H, lambda h: h, self.sg.p)
        return HeckeContext(triv, self.U, self.ctx)

    # -- actions on representations --

    def invariants(self, rep):
        """Subquotient presenting Pi^K inside Pi (kernel of all Pi(k) - 1)."""
        ctx = self.ctx
        gens = _subgroup_gens(self.G, self.K)
        if not gens:
            cols = columns(Mat.identity(ctx, rep.dim))
            return Subquotient(ctx, cols, [], rep.dim)
        rows = []
        ident = Mat.identity(ctx, rep.dim)
        for k in gens:
            rows.extend(rep.mat(k).sub(ident).entries)
        K = kernel(Mat.from_rows(ctx, rows))
        return Subquotient(ctx, columns(K), [], rep.dim)

    def action_operator(self, f, rep):
        """The ambient operator sum_y f(K, yK) Pi(y)."""
        ctx = self.ctx
        out = Mat.zero(ctx, rep.dim, rep.dim)
        for c, v in f.values.items():
            out = out.add(rep.mat(self.space.reps[c]).scale(v))
        return out

    def hecke_action(self, f, rep):
        """Matrix of f on Pi^K in the chosen invariant basis."""
        sq = self.invariants(rep)
        return sq.induced_matrix(self.action_operator(f, rep)), sq


def _subgroup_gens(G, K_elements):
    kset = set(K_elements)
    gens = []
    generated = {G.identity}
    for e in K_elements:
        if e in generated:
            continue
        gens.append(e)
        queue = [e]
        generated.add(e)
        while queue:
            x = queue.pop()
            for g in gens:
                y = G.mul(x, g)
                if y not in generated:
                    generated.add(y)
                    queue.append(y)
        if len(generated) == len(kset):
            break
    return gens


def tate_hecke_diagram(hctx, ext, f):
    """Commutativity of the square relating T^i(Pi^K) with T^i(Pi)^U:
    the inclusion intertwines the f-action with the Br(f)-action.

    ext must extend a representation of hctx's group; f must be
    sigma-invariant and K plain. Returns a report; report["pass"] is the
    verdict for both parities.
    """
    ctx = hctx.ctx
    if ext.sg.G is not hctx.G:
        raise HeckeError("extension and context use different groups")
    if not hctx.is_plain():
        raise HeckeError("diagram requires a plain subgroup")
    if not hctx.is_sigma_invariant(f):
        raise HeckeError("diagram requires a sigma-invariant kernel")
    rep, A = ext.rep, ext.A
    dim = rep.dim

    sqK = hctx.invariants(rep)
    AK = sqK.induced_matrix(A)
    FK = sqK.induced_matrix(hctx.action_operator(f, rep))

    def tate_pair(amb_dim, sigma_mat):
        ident = Mat.identity(ctx, amb_dim)
        one_minus = ident.sub(sigma_mat)
        N = ident
        acc = ident
        for _ in range(hctx.sg.p - 1):
            acc = acc.mul(sigma_mat)
            N = N.add(acc)
        t0 = Subquotient(ctx, columns(kernel(one_minus)), columns(image(N)), amb_dim)
        t1 = Subquotient(ctx, columns(kernel(N)), columns(image(one_minus)), amb_dim)
        return t0, t1

    tK = tate_pair(sqK.dim, AK)
    tPi = tate_pair(dim, A)

    br = hctx.brauer(f)
    br_op = Mat.zero(ctx, dim, dim)
    for c, v in br.values.items():
        br_op = br_op.add(rep.mat(hctx.hspace.reps[c]).scale(v))

    results = []
    ok = True
    for i in range(2):
        src, tgt = tK[i], tPi[i]
        inc_cols = [tgt.coords(sqK.lift(rv)) for rv in src.reps]
        inc = mat_from_columns(ctx, inc_cols, tgt.dim)
        f_on_src = src.induced_matrix(FK)
        br_on_tgt = tgt.induced_matrix(br_op)
        lhs = inc.mul(f_on_src)
        rhs = br_on_tgt.mul(inc)
        u_invariant = all(
            tgt.induced_matrix(rep.mat(u)).mul(inc).sub(inc).is_zero()
            for u in _subgroup_gens(hctx.H, hctx.U))
        good = lhs.sub(rhs).is_zero() and u_invariant
        results.append({"parity": i, "dims": (src.dim, tgt.dim),
                        "commutes": lhs.sub(rhs).is_zero(),
                        "lands_in_U_invariants": u_invariant})
        ok = ok and good
    return {"pass": ok, "parities": results}


# -- commutative algebras with sigma-action; norm and character extension --

class SigmaAlgebra:
    """Associative k-algebra with basis, structure constants and an
    order-p algebra automorphism."""

    def __init__(self, ctx, struct, unit, sigma_mat, p, labels=None):
        self.ctx = ctx
        self.dim = len(struct)
        self.struct = struct  # struct[i][j] = vector of b_i * b_j
        self.unit = tuple(unit)
        self.sigma_mat = sigma_mat
        self.p = p
        self.labels = labels or list(range(self.dim))
        self._validate()

    def _validate(self):
        ctx = self.ctx
        ident = Mat.identity(ctx, self.dim)
        if not self.sigma_mat.pow(self.p).sub(ident).is_zero():
            raise HeckeError("algebra automorphism does not have order p")
        basis = [tuple(ctx.one if i == j else 0 for j in range(self.dim))
                 for i in range(self.dim)]
        for i in range(self.dim):
            for j in range(self.dim):
                lhs = self.sigma(self.mult(basis[i], basis[j]))
                rhs = self.mult(self.sigma(basis[i]), self.sigma(basis[j]))
                if lhs != rhs:
                    raise HeckeError("sigma does not respect multiplication")

    def mult(self, u, v):
        ctx = self.ctx
        out = [0] * self.dim
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                c = ctx.mul(ui, vj)
                for t, s in enumerate(self.struct[i][j]):
                    if s:
                        out[t] = ctx.add(out[t], ctx.mul(c, s))
        return tuple(out)

    def sigma(self, v):
        return self.sigma_mat.apply(v)

    def is_commutative(self):
        ctx = self.ctx
        basis = [tuple(ctx.one if i == j else 0 for j in range(self.dim))
                 for i in range(self.dim)]
        return all(self.mult(basis[i], basis[j]) == self.mult(basis[j], basis[i])
                   for i in range(self.dim) for j in range(self.dim))

    def norm_matrix(self):
        ctx = self.ctx
        out = Mat.identity(ctx, self.dim)
        acc = Mat.identity(ctx, self.dim)
        for _ in range(self.p - 1):
            acc = acc.mul(self.sigma_mat)
            out = out.add(acc)
        return out


def fun_sigma_algebra(ctx, n_points, sigma_perm, p):
    """Fun(S, k) for a finite sigma-set S; sigma_perm[i] is the image point
    of i, and sigma acts on functions by precomposition with its inverse
    (so on delta functions, delta_s -> delta_{sigma(s)})."""
    zero = tuple(0 for _ in range(n_points))
    struct = [[zero] * n_points for _ in range(n_points)]
    for i in range(n_points):
        struct[i][i] = tuple(ctx.one if t == i else 0 for t in range(n_points))
    unit = tuple(ctx.one for _ in range(n_points))
    rows = [[0] * n_points for _ in range(n_points)]
    for i in range(n_points):
        rows[sigma_perm[i]][i] = ctx.one
    return SigmaAlgebra(ctx, struct, unit, Mat.from_rows(ctx, rows), p)


def ring_norm(A, a):
    """Nm(a) = a * sigma(a) * ... * sigma^(p-1)(a); multiplicative, not
    additive, but additive into A^sigma / N.A."""
    out = tuple(a)
    cur = tuple(a)
    for _ in range(A.p - 1):
        cur = tuple(A.sigma(cur))
        out = A.mult(out, cur)
    return out


def ring_N(A, a):
    """N.a = a + sigma(a) + ... + sigma^(p-1)(a)."""
    return tuple(A.norm_matrix().apply(a))


def _coords_in(ctx, basis_cols, vec):
    M = mat_from_columns(ctx, basis_cols, len(vec))
    return solve(M, tuple(vec))


def char_extend(A, aprime_cols, chi_values):
    """Extend a character chi of A' (given on the A'-basis columns, killing
    N.A) to the unique character of A: chi~(a) = frobenius_inv(chi(Nm a)).

    Returns the value vector of chi~ on the basis of A. Raises if chi does
    not kill N.A, if A is not commutative, or if A' misses Nm(A) or N.A.
    """
    ctx = A.ctx
    if not A.is_commutative():
        raise HeckeError("character extension needs a commutative algebra")
    basis = [tuple(ctx.one if i == j else 0 for j in range(A.dim))
             for i in range(A.dim)]

    def chi(vec):
        coords = _coords_in(ctx, aprime_cols, vec)
        if coords is None:
            raise HeckeError("vector not in A'")
        out = 0
        for c, val in zip(coords, chi_values):
            if c and val:
                out = ctx.add(out, ctx.mul(c, val))
        return out

    n_img = image(A.norm_matrix())
    for j in range(n_img.cols):
        v = n_img.col(j)
        if _coords_in(ctx, aprime_cols, v) is None:
            raise HeckeError("A' does not contain N.A")
        if chi(v) != 0:
            raise HeckeError("chi does not kill N.A")
    for b in basis:
        if _coords_in(ctx, aprime_cols, ring_norm(A, b)) is None:
            raise HeckeError("A' does not contain Nm(A)")

    ext = [ctx.frobenius_inv(chi(ring_norm(A, b))) for b in basis]

    def chi_ext(vec):
        out = 0
        for c, val in zip(vec, ext):
            if c and val:
                out = ctx.add(out, ctx.mul(c, val))
        return out

    # the linear extension must agree with the nonlinear formula
    for b in basis:
        for b2 in basis:
            s = tuple(ctx.add(x, y) for x, y in zip(b, b2))
            if chi_ext(s) != ctx.frobenius_inv(chi(ring_norm(A, s))):
                raise HeckeError("extension formula is not additive")
    for i in range(A.dim):
        for j in range(A.dim):
            if chi_ext(A.mult(basis[i], basis[j])) != \
                    ctx.mul(chi_ext(basis[i]), chi_ext(basis[j])):
                raise HeckeError("extension formula is not multiplicative")
    if chi_ext(A.unit) != ctx.one:
        raise HeckeError("extension does not send 1 to 1")
    for b in basis:
        if chi_ext(A.sigma(b)) != chi_ext(b):
            raise HeckeError("extension is not sigma-invariant")
    return ext


def fun_algebra_characters(A):
    """All characters of a Fun(S) model: the point evaluations."""
    ctx = A.ctx
    return [[ctx.one if i == j else 0 for i in range(A.dim)]
            for j in range(A.dim)]
