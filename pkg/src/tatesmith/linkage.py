"""sigma-fixed representations of G = H^p and Tate cohomology as an
H-representation: the finite base-change demonstration.

The key identity: for absolutely irreducible pi, T^0(pi^{box p}) is
H-equivariantly isomorphic to the Frobenius twist pi^(p), certified here
by an explicit invertible intertwiner.
"""

from __future__ import annotations

from .field import (Mat, Subquotient, columns, image, intertwiner_space,
                    kernel, mat_from_columns, rank)
from .groups import (FiniteGroup, GroupRep, SigmaGroup, box_product_rep,
                     direct_power, cyclic_shift_automorphism, regular_rep)
from .sigma import frobenius_twist_rep, tensor_induce


class LinkageError(ValueError):
    pass


class SigmaExtendedRep:
    """A G-representation with a compatible sigma-matrix A:
    Pi(sigma(g)) = A Pi(g) A^-1 and A^p = 1 (both verified on generators)."""

    def __init__(self, rep, A, sigma_group, check_gens=None):
        self.rep = rep
        self.A = A
        self.sg = sigma_group
        self.p = sigma_group.p
        ctx = rep.ctx
        if not A.pow(self.p).sub(Mat.identity(ctx, rep.dim)).is_zero():
            raise LinkageError("A^p is not the identity")
        gens = check_gens if check_gens is not None else \
            sigma_group.G.generating_set()
        for g in gens:
            lhs = A.mul(rep.mat(g))
            rhs = rep.mat(sigma_group.sigma(g)).mul(A)
            if not lhs.sub(rhs).is_zero():
                raise LinkageError("A does not intertwine Pi with Pi∘sigma")

    @property
    def ctx(self):
        return self.rep.ctx

    def norm_matrix(self):
        out = Mat.identity(self.ctx, self.rep.dim)
        acc = Mat.identity(self.ctx, self.rep.dim)
        for _ in range(self.p - 1):
            acc = acc.mul(self.A)
            out = out.add(acc)
        return out


def box_power(pi, p):
    """pi^{box p} on G = H^p with the canonical factor-rotation matrix.

    Returns (SigmaGroup for G, SigmaExtendedRep). sigma sends slot i to
    slot i+1, so the rotation matrix carries the last factor to the front.
    """
    H = pi.group
    G = direct_power(H, p)
    sg = SigmaGroup(G, cyclic_shift_automorphism(G, p), p)
    Pi = box_product_rep([pi] * p, G, pi.ctx, name=f"{pi.name}^box{p}")
    A = tensor_induce(pi.ctx, pi.dim).sigma
    gens = [_slot(H, g, i, p) for g in H.generating_set() for i in range(p)]
    return sg, SigmaExtendedRep(Pi, A, sg, check_gens=gens)


def _slot(H, g, i, p):
    t = [H.identity] * p
    t[i] = g
    return tuple(t)


def regular_extended(sg, ctx):
    """The regular representation of G with A permuting the group basis
    by sigma (works for any G, irreducible or not)."""
    G = sg.G
    rep = regular_rep(G, ctx)
    n = G.order
    rows = [[0] * n for _ in range(n)]
    for j, g in enumerate(G.elements):
        rows[G.index[sg.sigma(g)]][j] = ctx.one
    A = Mat.from_rows(ctx, rows)
    return SigmaExtendedRep(rep, A, sg, check_gens=G.generating_set())


def normalize_intertwiner(rep, sg, A0):
    """Rescale a nonzero intertwiner A0 so that A^p = 1.

    By Schur, A0^p = c * id; the unique rescaling is A0 / c^(1/p), the p-th
    root being frobenius_inv since char k = p.
    """
    ctx = rep.ctx
    Ap = A0.pow(sg.p)
    c = Ap.entries[0][0]
    if c == 0 or not Ap.sub(Mat.scalar(ctx, rep.dim, c)).is_zero():
        raise LinkageError("A0^p is not a nonzero scalar (Schur failure)")
    root = ctx.frobenius_inv(c)
    return A0.scale(ctx.inv(root))


def extend_action(rep, sg, basis_order=None):
    """The unique sigma-extension of an absolutely irreducible sigma-fixed
    representation. basis_order permutes the intertwiner basis (the result
    must not depend on it)."""
    gens = sg.G.generating_set()
    mats = [rep.mat(g) for g in gens]
    self_int = intertwiner_space(mats, mats)
    if len(self_int) != 1:
        raise LinkageError("representation is not absolutely irreducible")
    twisted = [rep.mat(sg.sigma(g)) for g in gens]
    space = intertwiner_space(mats, twisted)
    if not space:
        raise LinkageError("representation is not sigma-fixed")
    order = basis_order if basis_order is not None else range(len(space))
    A0 = None
    for idx in order:
        if rank(space[idx]) == space[idx].rows:
            A0 = space[idx]
            break
    if A0 is None:
        raise LinkageError("no invertible intertwiner found")
    A = normalize_intertwiner(rep, sg, A0)
    return SigmaExtendedRep(rep, A, sg, check_gens=gens)


def tate_of_rep(ext, H_group=None, embed=None):
    """T^0 and T^1 of the sigma-action, as representations of H = G^sigma.

    H_group/embed allow presenting the fixed subgroup abstractly (e.g. the
    base group under the diagonal embedding into H^p).
    """
    ctx = ext.ctx
    A = ext.A
    dim = ext.rep.dim
    one_minus = Mat.identity(ctx, dim).sub(A)
    N = ext.norm_matrix()
    t0 = Subquotient(ctx, columns(kernel(one_minus)), columns(image(N)), dim)
    t1 = Subquotient(ctx, columns(kernel(N)), columns(image(one_minus)), dim)
    if H_group is None:
        H_group = ext.sg.fixed_subgroup()
        embed = lambda h: h
    reps = []
    for sq in (t0, t1):
        def mat_fn(h, sq=sq):
            return sq.induced_matrix(ext.rep.mat(embed(h)))
        reps.append(GroupRep(H_group, sq.dim, mat_fn, ctx,
                             name="tate", check=False))
    return reps[0], reps[1], t0, t1


def equivariant_isomorphism(rep_a, rep_b, gens=None):
    """An invertible intertwiner rep_a -> rep_b, or None."""
    if rep_a.dim != rep_b.dim:
        return None
    if rep_a.dim == 0:
        return Mat(rep_a.ctx, 0, 0, ())
    gens = gens if gens is not None else rep_a.group.generating_set()
    space = intertwiner_space([rep_a.mat(g) for g in gens],
                              [rep_b.mat(g) for g in gens])
    for T in space:
        if rank(T) == T.rows:
            return T
    # small search over two-element combinations
    ctx = rep_a.ctx
    for i in range(len(space)):
        for j in range(i + 1, len(space)):
            for c in range(1, ctx.q):
                T = space[i].add(space[j].scale(c))
                if rank(T) == T.rows:
                    return T
    return None


def diagonal_embedding(p):
    return lambda h: tuple([h] * p)


def linkage_report(pi, p):
    """Build pi^{box p}, take T^0/T^1, certify T^0 = pi^(p) as H-reps.

    T^1's isomorphism type is recorded as an observation only.
    """
    ctx = pi.ctx
    if ctx.p != p:
        raise LinkageError("the twist degree must equal the field characteristic")
    H = pi.group
    sg, ext = box_power(pi, p)
    t0_rep, t1_rep, t0, t1 = tate_of_rep(ext, H_group=H,
                                         embed=diagonal_embedding(p))
    twist = frobenius_twist_rep(pi)
    gens = H.generating_set()
    iso = equivariant_isomorphism(t0_rep, twist, gens=gens)
    t1_obs = equivariant_isomorphism(t1_rep, twist, gens=gens)
    return {
        "dim_pi": pi.dim,
        "dims": (t0.dim, t1.dim),
        "t0_isomorphic_to_twist": iso is not None,
        "iso": iso,
        "t1_matches_twist_observation": t1_obs is not None,
        "pass": iso is not None and t0.dim == pi.dim,
        "t0_rep": t0_rep,
        "t1_rep": t1_rep,
        "ext": ext,
    }
