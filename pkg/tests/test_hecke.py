import random

import pytest

from tatesmith.field import Mat, field_make
from tatesmith.groups import (SigmaGroup, cyclic_group,
                              cyclic_shift_automorphism, direct_power,
                              regular_rep, standard_rep_s3, symmetric_group,
                              trivial_rep, _perm_sign)
from tatesmith.hecke import (HeckeContext, HeckeError, char_extend,
                             fun_algebra_characters, fun_sigma_algebra,
                             ring_N, ring_norm, tate_hecke_diagram)
from tatesmith.linkage import SigmaExtendedRep, box_power, regular_extended

CTX3 = field_make(3, 1)
CTX5 = field_make(5, 1)


def trivial_sigma(G, p):
    return SigmaGroup(G, lambda g: g, p)


def kernel_matrix(hctx, f):
    """[f(xK, yK)]_{x,y} via G-invariance f(xK, yK) = f(K, x^-1 yK)."""
    sp = hctx.space
    G = hctx.G
    rows = []
    for x in sp.reps:
        xi = G.inv(x)
        rows.append([f.values.get(sp.coset_of[G.mul(xi, y)], 0)
                     for y in sp.reps])
    return Mat.from_rows(hctx.ctx, rows)


def test_unit_is_neutral():
    S3 = symmetric_group(3)
    A3 = [g for g in S3.elements if _perm_sign(g) == 1]
    hc = HeckeContext(trivial_sigma(S3, 5), A3, CTX5)
    e = hc.unit()
    for f in hc.basis():
        assert hc.convolve(e, f) == f
        assert hc.convolve(f, e) == f


def test_s3_mod_c3_involution():
    # two cosets; the off-diagonal orbit indicator squares to the unit
    S3 = symmetric_group(3)
    A3 = [g for g in S3.elements if _perm_sign(g) == 1]
    hc = HeckeContext(trivial_sigma(S3, 5), A3, CTX5)
    assert hc.space.n == 2
    e = hc.unit()
    t = next(b for b in hc.basis() if b.values != e.values)
    # direct 2-coset sum oracle through the kernel matrices
    tt = hc.convolve(t, t)
    assert kernel_matrix(hc, tt).entries == \
        kernel_matrix(hc, t).mul(kernel_matrix(hc, t)).entries
    assert tt == e


def test_full_group_subgroup_is_scalar_algebra():
    C4 = cyclic_group(4)
    hc = HeckeContext(trivial_sigma(C4, 3), C4.elements, CTX3)
    assert hc.space.n == 1
    assert len(hc.basis()) == 1
    f = hc.unit().scale(2)
    g = hc.unit().scale(2)
    assert hc.convolve(f, g).values == {0: CTX3.mul(2, 2)}


def test_convolution_matches_kernel_matrix_product():
    rng = random.Random(0)
    S3 = symmetric_group(3)
    hc = HeckeContext(trivial_sigma(S3, 3), [S3.identity], CTX3)
    basis = hc.basis()
    for _ in range(20):
        f, g = rng.choice(basis), rng.choice(basis)
        conv = hc.convolve(f, g)
        assert kernel_matrix(hc, conv).entries == \
            kernel_matrix(hc, f).mul(kernel_matrix(hc, g)).entries


def test_convolution_associative_random():
    rng = random.Random(1)
    S3 = symmetric_group(3)
    A3 = [g for g in S3.elements if _perm_sign(g) == 1]
    hc = HeckeContext(trivial_sigma(S3, 3), A3, CTX3)
    basis = hc.basis()
    for _ in range(20):
        f = rng.choice(basis).scale(rng.randrange(1, 3))
        g = rng.choice(basis)
        h = rng.choice(basis)
        assert hc.convolve(hc.convolve(f, g), h) == \
            hc.convolve(f, hc.convolve(g, h))


def test_plainness():
    # K = 1 in H^p with the shift: plain
    C2 = cyclic_group(2)
    G = direct_power(C2, 3)
    sg = SigmaGroup(G, cyclic_shift_automorphism(G, 3), 3)
    assert HeckeContext(sg, [G.identity], CTX3).is_plain()
    # K = G: a single fixed coset equal to H/U
    assert HeckeContext(sg, G.elements, CTX3).is_plain()
    # C_4 with inversion, K = {0,2}: the coset 1+K is fixed but misses H
    C4 = cyclic_group(4)
    sg4 = SigmaGroup(C4, lambda g: (-g) % 4, 2)
    hc = HeckeContext(sg4, [0, 2], field_make(2, 1))
    assert not hc.is_plain()
    assert len(hc.fixed_cosets()) == 2 and hc.hspace.n == 1


def test_brauer_examples_c2_cube():
    C2 = cyclic_group(2)
    G = direct_power(C2, 3)
    sg = SigmaGroup(G, cyclic_shift_automorphism(G, 3), 3)
    hc = HeckeContext(sg, [G.identity], CTX3)
    free = hc.sigma_orbit_sum(hc.double_coset_of((1, 0, 0)))
    assert hc.brauer(free).values == {}
    diag = hc.double_coset_of((1, 1, 1))
    br = hc.brauer(diag)
    assert br.values == {hc.hspace.coset_of[(1, 1, 1)]: CTX3.one}


@pytest.mark.parametrize("K_kind", ["one", "c3cube"])
def test_brauer_multiplicative_exhaustive(K_kind):
    S3 = symmetric_group(3)
    G = direct_power(S3, 3)
    sg = SigmaGroup(G, cyclic_shift_automorphism(G, 3), 3)
    if K_kind == "one":
        K = [G.identity]
    else:
        A3 = [g for g in S3.elements if _perm_sign(g) == 1]
        K = [(a, b, c) for a in A3 for b in A3 for c in A3]
    hc = HeckeContext(sg, K, CTX3)
    assert hc.is_plain()
    hh = hc.h_context()
    basis = hc.sigma_invariant_basis()
    for f in basis:
        brf = hc.brauer(f)
        for g in basis:
            assert hc.brauer(hc.convolve(f, g)).values == \
                hh.convolve(brf, hc.brauer(g)).values


def test_diagonal_subgroup_brauer_is_delta():
    # K = L^p for L <= H: U is the diagonal L and Br(delta of (h,..,h)) = delta_h
    S3 = symmetric_group(3)
    G = direct_power(S3, 3)
    sg = SigmaGroup(G, cyclic_shift_automorphism(G, 3), 3)
    A3 = [g for g in S3.elements if _perm_sign(g) == 1]
    K = [(a, b, c) for a in A3 for b in A3 for c in A3]
    hc = HeckeContext(sg, K, CTX3)
    assert set(hc.U) == {(a, a, a) for a in A3}
    for h in S3.elements:
        f = hc.sigma_orbit_sum(hc.double_coset_of((h, h, h)))
        br = hc.brauer(f)
        assert br.values == {hc.hspace.coset_of[(h, h, h)]: CTX3.one}


def test_brauer_negative_control():
    C4 = cyclic_group(4)
    sg4 = SigmaGroup(C4, lambda g: (-g) % 4, 2)
    hc = HeckeContext(sg4, [0, 2], field_make(2, 1))
    t = next(b for b in hc.basis() if b.values != hc.unit().values)
    hh = hc.h_context()
    lhs = hc.restriction(hc.convolve(t, t))
    rhs = hh.convolve(hc.restriction(t), hc.restriction(t))
    assert lhs.values != rhs.values
    with pytest.raises(HeckeError):
        hc.brauer(t)


def test_brauer_rejects_non_invariant():
    S3 = symmetric_group(3)
    G = direct_power(S3, 3)
    sg = SigmaGroup(G, cyclic_shift_automorphism(G, 3), 3)
    hc = HeckeContext(sg, [G.identity], CTX3)
    f = hc.double_coset_of((S3.elements[1], S3.identity, S3.identity))
    with pytest.raises(HeckeError):
        hc.brauer(f)


def test_hecke_action_unit_and_algebra_map():
    rng = random.Random(2)
    S3 = symmetric_group(3)
    A3 = [g for g in S3.elements if _perm_sign(g) == 1]
    hc = HeckeContext(trivial_sigma(S3, 5), A3, CTX5)
    Pi = regular_rep(S3, CTX5)
    e_mat, sq = hc.hecke_action(hc.unit(), Pi)
    assert e_mat.entries == Mat.identity(CTX5, sq.dim).entries
    basis = hc.basis()
    for _ in range(10):
        f, g = rng.choice(basis), rng.choice(basis)
        fg, _ = hc.hecke_action(hc.convolve(f, g), Pi)
        mf, _ = hc.hecke_action(f, Pi)
        mg, _ = hc.hecke_action(g, Pi)
        assert fg.entries == mf.mul(mg).entries


def test_hecke_action_yoneda():
    # on Pi = k[G/K] the action matrices reproduce convolution itself
    S3 = symmetric_group(3)
    A3 = [g for g in S3.elements if _perm_sign(g) == 1]
    hc = HeckeContext(trivial_sigma(S3, 5), A3, CTX5)
    e = hc.unit()
    t = next(b for b in hc.basis() if b.values != e.values)
    from tatesmith.groups import permutation_rep
    Pi = permutation_rep(S3, hc.space.reps,
                         lambda g, r: hc.space.reps[
                             hc.space.coset_of[S3.mul(g, r)]], CTX5)
    m, sq = hc.hecke_action(t, Pi)
    assert sq.dim == 2  # invariants of the coset rep = Hecke algebra
    assert m.mul(m).entries == Mat.identity(CTX5, 2).entries  # t*t = e


def test_tate_hecke_diagram_trivial_rep():
    C2 = cyclic_group(2)
    G = direct_power(C2, 3)
    sg = SigmaGroup(G, cyclic_shift_automorphism(G, 3), 3)
    hc = HeckeContext(sg, [G.identity], CTX3)
    ext = SigmaExtendedRep(trivial_rep(G, CTX3), Mat.identity(CTX3, 1), sg,
                           check_gens=G.generating_set())
    for f in hc.sigma_invariant_basis():
        assert tate_hecke_diagram(hc, ext, f)["pass"]


def test_tate_hecke_diagram_regular():
    C2 = cyclic_group(2)
    G = direct_power(C2, 3)
    sg = SigmaGroup(G, cyclic_shift_automorphism(G, 3), 3)
    hc = HeckeContext(sg, [G.identity], CTX3)
    ext = regular_extended(sg, CTX3)
    for f in hc.sigma_invariant_basis():
        assert tate_hecke_diagram(hc, ext, f)["pass"]


def test_tate_hecke_diagram_box_power():
    rng = random.Random(3)
    S3 = symmetric_group(3)
    sg, ext = box_power(standard_rep_s3(S3, CTX5), 5)
    hc = HeckeContext(sg, [sg.G.identity], CTX5)
    for _ in range(2):
        f = hc.sigma_orbit_sum(hc.double_coset_of(rng.choice(sg.G.elements)))
        assert tate_hecke_diagram(hc, ext, f)["pass"]
    h = rng.choice(S3.elements)
    f = hc.sigma_orbit_sum(hc.double_coset_of((h,) * 5))
    assert tate_hecke_diagram(hc, ext, f)["pass"]


def test_diagram_rejects_non_invariant_kernel():
    C2 = cyclic_group(2)
    G = direct_power(C2, 3)
    sg = SigmaGroup(G, cyclic_shift_automorphism(G, 3), 3)
    hc = HeckeContext(sg, [G.identity], CTX3)
    ext = regular_extended(sg, CTX3)
    f = hc.double_coset_of((1, 0, 0))
    with pytest.raises(HeckeError):
        tate_hecke_diagram(hc, ext, f)


# -- norm / character extension --

def fun_s_example():
    """Fun({*, a, b, c}) with sigma rotating {a, b, c} and fixing *."""
    A = fun_sigma_algebra(CTX3, 4, [0, 2, 3, 1], 3)
    one = CTX3.one
    aprime = [(one, 0, 0, 0), (0, one, one, one)]  # basis of A^sigma
    return A, aprime


def test_ring_norm_and_n():
    A, _ = fun_s_example()
    one = CTX3.one
    # Nm on a sigma-fixed element is the cube
    a = (2, one, one, one)
    assert ring_norm(A, a) == tuple(CTX3.pow(v, 3) for v in a)
    # N.A = functions vanishing at the fixed point
    assert ring_N(A, (0, one, 0, 0)) == (0, one, one, one)
    assert ring_N(A, (one, 0, 0, 0)) == (0, 0, 0, 0)  # 3 = 0


def test_char_extend_point_evaluation():
    A, aprime = fun_s_example()
    one = CTX3.one
    chi = [one, 0]  # evaluation at the fixed point, kills N.A
    ext = char_extend(A, aprime, chi)
    assert ext == [one, 0, 0, 0]
    # consistency on A^sigma: chi~(a) = chi(a) there
    assert ext[0] == chi[0]


def test_char_extend_unique_among_enumerated():
    A, aprime = fun_s_example()
    one = CTX3.one
    chi = [one, 0]
    ext = char_extend(A, aprime, chi)
    extenders = []
    for cv in fun_algebra_characters(A):
        vals = []
        for w in aprime:
            s = 0
            for c, v in zip(w, cv):
                if c and v:
                    s = CTX3.add(s, CTX3.mul(c, v))
            vals.append(s)
        if vals == chi:
            extenders.append(list(cv))
    assert extenders == [list(ext)]


def test_char_extend_rejects_bad_chi():
    A, aprime = fun_s_example()
    # evaluation at the free orbit does not kill N.A
    with pytest.raises(HeckeError):
        char_extend(A, aprime, [0, CTX3.one])


def test_char_extend_rejects_noncommutative():
    # group algebra of S_3 with trivial sigma is not commutative
    S3 = symmetric_group(3)
    n = S3.order
    one = CTX3.one
    struct = [[None] * n for _ in range(n)]
    for i, a in enumerate(S3.elements):
        for j, b in enumerate(S3.elements):
            k = S3.index[S3.mul(a, b)]
            struct[i][j] = tuple(one if t == k else 0 for t in range(n))
    unit = tuple(one if S3.elements[t] == S3.identity else 0 for t in range(n))
    from tatesmith.hecke import SigmaAlgebra
    A = SigmaAlgebra(CTX3, struct, unit, Mat.identity(CTX3, n), 3)
    with pytest.raises(HeckeError):
        char_extend(A, [unit], [one])
