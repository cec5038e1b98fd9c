import random

import pytest

from tatesmith.field import (FieldError, Mat, field_make, frobenius,
                             frobenius_inv, image, intertwiner_space, kernel,
                             rref, solve, subquotient_dim)


# -- oracles --

def poly_eval(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def smallest_irreducible_quadratic(p):
    """Enumerate monic quadratics in lexicographic coefficient order and
    return the first with no root (degree 2: rootless = irreducible)."""
    for n in range(p * p):
        c0, c1 = n % p, (n // p) % p
        f = [c0, c1, 1]
        if all(poly_eval(f, x, p) != 0 for x in range(p)):
            return tuple(f)
    raise AssertionError("no irreducible quadratic found")


def pow_by_squares(ctx, x, n):
    out = ctx.one
    for _ in range(n):
        out = ctx.mul(out, x)
    return out


from tests.oracles import brute_kernel_dim


def test_field_make_prime_field():
    ctx = field_make(5, 1)
    assert ctx.q == 5
    assert ctx.mul(2, 3) == 1
    assert ctx.add(4, 3) == 2


def test_field_make_f9_modulus_matches_enumeration_oracle():
    ctx = field_make(3, 2)
    assert ctx.modulus_poly == smallest_irreducible_quadratic(3)


def test_field_make_rejects_bad_input():
    with pytest.raises(FieldError):
        field_make(4, 1)
    with pytest.raises(FieldError):
        field_make(5, 0)


def test_frobenius_fixes_prime_field():
    ctx = field_make(5, 1)
    assert frobenius(ctx, 2) == 2


def test_frobenius_f9_is_negation_of_generator():
    # F_9 = F_3[x]/(x^2+1): x^3 = x * x^2 = -x
    ctx = field_make(3, 2)
    x = ctx.gen()
    assert frobenius(ctx, x) == pow_by_squares(ctx, x, 3)
    assert frobenius(ctx, x) == ctx.neg(x)
    assert frobenius_inv(ctx, ctx.neg(x)) == x


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2),
                                 (2, 3), (3, 3), (3, 4)])
def test_frobenius_inverse_exhaustive(p, m):
    ctx = field_make(p, m)
    for a in ctx.elements():
        assert frobenius_inv(ctx, frobenius(ctx, a)) == a
        assert frobenius_inv(ctx, a) == pow_by_squares(ctx, a, p ** (m - 1)) \
            or a == 0


@pytest.mark.parametrize("p,m", [(3, 2), (2, 3), (5, 1)])
def test_frobenius_is_field_automorphism(p, m):
    ctx = field_make(p, m)
    rng = random.Random(0)
    for _ in range(60):
        a, b = rng.randrange(ctx.q), rng.randrange(ctx.q)
        assert frobenius(ctx, ctx.add(a, b)) == \
            ctx.add(frobenius(ctx, a), frobenius(ctx, b))
        assert frobenius(ctx, ctx.mul(a, b)) == \
            ctx.mul(frobenius(ctx, a), frobenius(ctx, b))


def test_rank_of_singular_matrix():
    ctx = field_make(5, 1)
    M = Mat.from_rows(ctx, [[1, 2], [2, 4]])
    assert rref(M)[1] == 1


def test_kernel_of_identity_is_empty():
    ctx = field_make(5, 1)
    assert kernel(Mat.identity(ctx, 3)).cols == 0


def test_solve_against_back_substitution():
    ctx = field_make(5, 1)
    M = Mat.from_rows(ctx, [[1, 1], [0, 1]])
    # back-substitution oracle: x1 = 3, x0 = 2 - x1 = -1 = 4
    assert solve(M, (2, 3)) == (4, 3)


def test_solve_inconsistent_returns_none():
    ctx = field_make(3, 1)
    M = Mat.from_rows(ctx, [[1, 0], [1, 0]])
    assert solve(M, (1, 2)) is None


def test_rank_nullity_random():
    rng = random.Random(1)
    for p, m in [(2, 1), (3, 1), (5, 1), (3, 2)]:
        ctx = field_make(p, m)
        for _ in range(25):
            r, c = rng.randint(0, 5), rng.randint(0, 5)
            rows = [[rng.randrange(ctx.q) for _ in range(c)] for _ in range(r)]
            M = Mat.from_rows(ctx, rows) if r else Mat(ctx, 0, c, ())
            assert rref(M)[1] + kernel(M).cols == c


def test_kernel_rank_against_brute_enumeration():
    rng = random.Random(2)
    ctx = field_make(3, 1)
    for _ in range(15):
        r, c = rng.randint(1, 3), rng.randint(1, 3)
        M = Mat.from_rows(ctx, [[rng.randrange(3) for _ in range(c)]
                                for _ in range(r)])
        assert kernel(M).cols == brute_kernel_dim(M)


def test_rref_idempotent_and_deterministic():
    rng = random.Random(3)
    ctx = field_make(5, 1)
    for _ in range(20):
        M = Mat.from_rows(ctx, [[rng.randrange(5) for _ in range(4)]
                                for _ in range(3)])
        R1 = rref(M)[0]
        assert rref(R1)[0].entries == R1.entries
        assert rref(M)[0].entries == R1.entries


def test_image_is_reduced_and_spans():
    ctx = field_make(3, 1)
    M = Mat.from_rows(ctx, [[1, 2, 0], [2, 1, 0], [0, 0, 0]])
    B = image(M)
    assert B.cols == rref(M)[1]
    for j in range(M.cols):
        assert solve(B, M.col(j)) is not None


def test_subquotient_dims():
    ctx = field_make(5, 1)
    U = Mat.identity(ctx, 2)
    W0 = Mat(ctx, 2, 0, ((), ()))
    assert subquotient_dim(U, W0)[0] == 2
    W = Mat.from_rows(ctx, [[1], [1]])
    assert subquotient_dim(U, W)[0] == 1


def test_subquotient_rejects_noncontainment():
    from tatesmith.field import SubquotientError
    ctx = field_make(5, 1)
    U = Mat.from_rows(ctx, [[1], [0]])
    W = Mat.from_rows(ctx, [[0], [1]])
    with pytest.raises(SubquotientError):
        subquotient_dim(U, W)


def test_subquotient_nilpotent_jordan_image():
    # image of (sigma - 1) inside J_3 for p = 3 has dimension 2 over 0
    from tatesmith.sigma import jordan_block
    from tatesmith.field import image, columns
    ctx = field_make(3, 1)
    J3 = jordan_block(ctx, 3)
    U = image(J3.sigma_minus_one())
    assert subquotient_dim(U, Mat(ctx, 3, 0, ((), (), ())))[0] == 2


def test_intertwiner_trivial_vs_trivial():
    ctx = field_make(5, 1)
    one = Mat.identity(ctx, 1)
    assert len(intertwiner_space([one], [one])) == 1


def test_intertwiner_trivial_vs_sign_is_zero():
    ctx = field_make(5, 1)
    one = Mat.identity(ctx, 1)
    minus = Mat(ctx, 1, 1, ((ctx.neg(ctx.one),),))
    assert len(intertwiner_space([minus], [one])) == 0


def test_intertwiner_standard_rep_absolutely_irreducible():
    from tatesmith.groups import symmetric_group, standard_rep_s3
    ctx = field_make(5, 1)
    S3 = symmetric_group(3)
    std = standard_rep_s3(S3, ctx)
    gens, mats = std.gen_mats()
    space = intertwiner_space(mats, mats)
    assert len(space) == 1


def test_scalar_serialization_roundtrip():
    ctx = field_make(3, 2)
    for a in ctx.elements():
        assert ctx.encode(ctx.decode(a)) == a


def test_mat_json_roundtrip():
    ctx = field_make(3, 2)
    rng = random.Random(4)
    M = Mat.from_rows(ctx, [[rng.randrange(9) for _ in range(3)]
                            for _ in range(2)])
    assert Mat.from_json(ctx, M.to_json()).entries == M.entries
