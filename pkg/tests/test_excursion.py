import random

import pytest

from tatesmith.field import field_make
from tatesmith.groups import cyclic_group, symmetric_group
from tatesmith import excursion as exc
from tatesmith.excursion import (ExcGen, ExcGen2, ExcursionError,
                                 InvariantFunction, ProductRep, RepStack,
                                 TargetMap, base_change_target, bridge_f,
                                 character_bijection_report, character_lrep,
                                 constant_invariant, construction_matches_eval,
                                 eval_construction, eval_gen, eval_gen2,
                                 functoriality_check, indicator_invariant,
                                 make_target, n_dot_gen, norm_gen,
                                 norm_identities_check, phi_bc, phi_pullback,
                                 random_gen2, random_invariant, relation_suite,
                                 reparam_gammas, sigma_gen, split_target,
                                 trivial_lrep, value_vector, value_vector2,
                                 TautFamily)

CTX5 = field_make(5, 1)
CTX3 = field_make(3, 1)


def stack_c2():
    C2 = cyclic_group(2)
    return RepStack(C2, {g: 0 for g in C2.elements}, split_target(C2))


def stack_s3():
    S3 = symmetric_group(3)
    return RepStack(S3, {g: 0 for g in S3.elements}, split_target(S3))


def all_homs_brute(gamma, target, surj):
    """Enumeration oracle: try every map gamma -> L and keep homomorphisms
    lying over Q."""
    import itertools
    L = target.L
    n = gamma.order
    out = []
    for images in itertools.product(range(L.order), repeat=n - 1):
        img = {}
        img[gamma.identity] = L.index[L.identity]
        rest = [g for g in gamma.elements if g != gamma.identity]
        for g, i in zip(rest, images):
            img[g] = i
        good = True
        for a in gamma.elements:
            for b in gamma.elements:
                lhs = target.mul_idx(img[a], img[b])
                if lhs != img[gamma.mul(a, b)]:
                    good = False
                    break
            if not good:
                break
        if good and all(target.proj(L.elements[img[g]]) == surj[g]
                        for g in gamma.elements):
            out.append(tuple(img[g] for g in gamma.elements))
    return sorted(set(out))


def test_rep_stack_c2():
    st = stack_c2()
    assert len(st.points) == 2
    assert len(st.all_homs) == 2


def test_rep_stack_s3_against_brute_enumeration():
    st = stack_s3()
    surj = {g: 0 for g in st.gamma.elements}
    brute = all_homs_brute(st.gamma, st.target, surj)
    assert st.all_homs == brute
    assert len(st.all_homs) == 10  # 1 trivial + 3 sign + 6 automorphisms
    assert len(st.points) == 3


def test_rep_stack_q_only():
    S3 = symmetric_group(3)
    T = make_target(exc.trivial_group(), S3,
                    {q: {0: 0} for q in S3.elements})
    st = RepStack(S3, {g: g for g in S3.elements}, T)
    assert len(st.points) == 1


def test_rep_stack_rejects_non_homomorphism():
    C2 = cyclic_group(2)
    C4 = cyclic_group(4)
    T = make_target(exc.trivial_group(), C2, {q: {0: 0} for q in C2.elements})
    with pytest.raises(ExcursionError):
        RepStack(C4, {0: 0, 1: 1, 2: 1, 3: 0}, T)


def test_eval_gen_basics():
    st = stack_c2()
    T = st.target
    # single-coordinate: the value is f(rho(gamma))
    f = random_invariant(T, 1, CTX5, random.Random(0))
    gen = ExcGen(T, f, (1,))
    for pt in st.points:
        assert eval_gen(st, gen, pt) == f.eval((pt[st.gamma.index[1]],))
    # constant functions give constants
    c = 3
    gen = ExcGen(T, constant_invariant(T, 2, c), (0, 1))
    assert value_vector(st, gen) == (c, c)


def test_eval_constant_on_conjugacy_classes():
    st = stack_s3()
    rng = random.Random(1)
    for _ in range(5):
        gen = random_gen2(st, CTX5, rng)
        assert exc.conjugation_invariance_check(st, gen)
        f = random_invariant(st.target, 2, CTX5, rng)
        g1 = ExcGen(st.target, f, (rng.choice(st.gamma.elements),
                                   rng.choice(st.gamma.elements)))
        assert exc.conjugation_invariance_check(st, g1)


def test_invariant_function_validation():
    st = stack_s3()
    T = st.target
    table = {t: 0 for t in exc.all_tuples(T, 1)}
    table[(1,)] = 1  # breaks bi-invariance
    with pytest.raises(ExcursionError):
        InvariantFunction(T, 1, table)


def test_bridge_examples():
    st = stack_c2()
    T = st.target
    # trivial W, x = xi = 1: the constant function 1
    W = ProductRep([trivial_lrep(T, CTX3)], T, CTX3)
    f = bridge_f(T, W, (CTX3.one,), (CTX3.one,))
    assert all(v == CTX3.one for v in f.table.values())
    # chi boxtimes chi^{-1} for the sign character of C_2
    minus = CTX3.neg(CTX3.one)
    chi = character_lrep(T, CTX3, {(0, 0): CTX3.one, (1, 0): minus})
    W2 = ProductRep([chi, chi], T, CTX3)
    f2 = bridge_f(T, W2, (CTX3.one,), (CTX3.one,))
    for t in exc.all_tuples(T, 2):
        want = CTX3.mul(chi.mat(t[0]).entries[0][0],
                        chi.mat(t[1]).entries[0][0])
        assert f2.table[t] == want


def test_bridge_direct_summand():
    # x, xi supported on the first summand: f agrees with the one from W'
    st = stack_c2()
    T = st.target
    minus = CTX3.neg(CTX3.one)
    chi = character_lrep(T, CTX3, {(0, 0): CTX3.one, (1, 0): minus})
    Wp = ProductRep([chi, chi], T, CTX3)
    W = exc.SumRep([Wp, ProductRep([trivial_lrep(T, CTX3)] * 2, T, CTX3)])
    f_small = bridge_f(T, Wp, (CTX3.one,), (CTX3.one,))
    f_big = bridge_f(T, W, (CTX3.one, 0), (CTX3.one, 0))
    assert f_big.table == f_small.table


def test_relation_suite_passes():
    rng = random.Random(2)
    rep = relation_suite(stack_s3(), CTX5, rng, count=6)
    assert rep["pass"], rep["checks"]
    rep = relation_suite(stack_c2(), CTX5, rng, count=6)
    assert rep["pass"], rep["checks"]


def test_relation_suite_semidirect_target():
    S3 = symmetric_group(3)
    C3 = cyclic_group(3)
    c = next(g for g in S3.elements if g != S3.identity
             and S3.mul(g, S3.mul(g, g)) == S3.identity
             and S3.mul(g, g) != S3.identity)
    powers = {0: S3.identity, 1: c, 2: S3.mul(c, c)}
    action = {q: {h: S3.conj(powers[q], h) for h in S3.elements}
              for q in (0, 1, 2)}
    T = make_target(S3, C3, action)
    st = RepStack(C3, {g: g for g in C3.elements}, T)
    rep = relation_suite(st, CTX3, random.Random(3), count=4)
    assert rep["pass"], rep["checks"]


def test_reparam_ties_conventions():
    st = stack_s3()
    rng = random.Random(4)
    for _ in range(10):
        f = random_invariant(st.target, 2, CTX5, rng)
        gammas = (rng.choice(st.gamma.elements), rng.choice(st.gamma.elements))
        gen = ExcGen(st.target, f, gammas)
        gen_rep = ExcGen(st.target, f, reparam_gammas(st.gamma, gammas))
        assert value_vector(st, gen, "last") == \
            value_vector(st, gen_rep, "naive")


def test_both_conventions_generate_same_algebra():
    # over a gamma-closed family (all pairs for each f) the two conventions
    # give identical generator sets, hence identical subalgebras
    st = stack_s3()
    rng = random.Random(5)
    from tatesmith.excursion import generated_subalgebra
    vec_last, vec_naive = [], []
    for _ in range(3):
        f = random_invariant(st.target, 2, CTX5, rng)
        for g0 in st.gamma.elements:
            for g1 in st.gamma.elements:
                gen = ExcGen(st.target, f, (g0, g1))
                vec_last.append(value_vector(st, gen, "last"))
                vec_naive.append(value_vector(st, gen, "naive"))
    b1 = generated_subalgebra(CTX5, vec_last)
    b2 = generated_subalgebra(CTX5, vec_naive)
    assert b1 == b2  # echelon bases of the same span


def test_construction_oracle():
    st = stack_s3()
    rng = random.Random(6)
    for _ in range(5):
        gen = random_gen2(st, CTX5, rng)
        assert construction_matches_eval(st, CTX5, gen)


def test_construction_identity_for_unit_data():
    st = stack_s3()
    T = st.target
    W = ProductRep([trivial_lrep(T, CTX5)], T, CTX5)
    gen = ExcGen2(T, W, (CTX5.one,), (CTX5.one,), (st.gamma.elements[1],))
    M = eval_construction(st, CTX5, gen)
    from tatesmith.field import Mat
    assert M.entries == Mat.identity(CTX5, len(st.points)).entries


def test_construction_one_point_stack_scalar():
    S3 = symmetric_group(3)
    T = make_target(exc.trivial_group(), S3, {q: {0: 0} for q in S3.elements})
    st = RepStack(S3, {g: g for g in S3.elements}, T)
    rng = random.Random(7)
    gen = random_gen2(st, CTX5, rng)
    M = eval_construction(st, CTX5, gen)
    assert M.rows == 1
    assert M.entries[0][0] == eval_gen2(st, gen, st.points[0], "naive")


def test_fusion_self_test():
    st = stack_s3()
    fam = TautFamily(st, CTX5)
    gen = random_gen2(st, CTX5, random.Random(8), n=2)
    assert fam.fusion_self_test(gen.W, st.gamma.elements[1])


def test_phi_identity_pullback():
    st = stack_s3()
    T = st.target
    ident = TargetMap(T, T, lambda l: l)
    rng = random.Random(9)
    for _ in range(4):
        gen = random_gen2(st, CTX5, rng)
        assert functoriality_check(st, ident, gen)


def test_phi_bc_pullback_pointwise():
    C2 = cyclic_group(2)
    TH, TG, bc = phi_bc(C2, 3)
    stH = RepStack(C2, {g: 0 for g in C2.elements}, TH)
    stG = RepStack(C2, {g: 0 for g in C2.elements}, TG)
    rng = random.Random(10)
    for _ in range(5):
        gen = random_gen2(stG, CTX3, rng)
        assert functoriality_check(stH, bc, gen)
    f = random_invariant(TG, 2, CTX3, rng)
    gen1 = ExcGen(TG, f, (1, 0))
    assert functoriality_check(stH, bc, gen1)


def test_phi_bc_cube_collapse():
    # product-of-coordinates pair function pulls back to the same character
    # pattern: chi(h)^3 = chi(h) in characteristic 3
    C2 = cyclic_group(2)
    TH, TG, bc = phi_bc(C2, 3)
    minus = CTX3.neg(CTX3.one)
    table = {}
    for t in exc.all_tuples(TG, 2):
        g0 = TG.L.elements[t[0]][0]
        g1 = TG.L.elements[t[1]][0]
        s = sum(g0) + sum(g1)
        table[t] = CTX3.one if s % 2 == 0 else minus
    f = InvariantFunction(TG, 2, table)
    gen = ExcGen(TG, f, (1, 0))
    pulled = phi_pullback(bc, gen)
    stH = RepStack(C2, {g: 0 for g in C2.elements}, TH)
    for pt in stH.points:
        h0 = TH.L.elements[pt[stH.gamma.index[1]]][0]
        expect = CTX3.one if (3 * h0) % 2 == 0 else minus
        assert eval_gen(stH, pulled, pt, "naive") == expect


def test_phi_rejects_non_admissible():
    C2 = cyclic_group(2)
    TH = split_target(C2)
    S3 = symmetric_group(3)
    T3 = make_target(exc.trivial_group(), S3, {q: {0: 0} for q in S3.elements})
    with pytest.raises(ExcursionError):
        TargetMap(T3, TH, lambda l: (0, 0))


def test_sigma_and_norm_identities():
    C2 = cyclic_group(2)
    T = base_change_target(C2, 3)
    st = RepStack(C2, {g: 0 for g in C2.elements}, T)
    rng = random.Random(11)
    for _ in range(8):
        gen = random_gen2(st, CTX3, rng)
        assert norm_identities_check(st, CTX3, gen)


def test_norm_trivial_sigma_is_power():
    C2 = cyclic_group(2)
    T = split_target(C2)
    T.set_sigma(lambda l: l, 3)
    st = RepStack(C2, {g: 0 for g in C2.elements}, T)
    gen = random_gen2(st, CTX3, random.Random(12))
    vals = value_vector2(st, gen)
    assert value_vector2(st, norm_gen(gen)) == \
        tuple(CTX3.pow(v, 3) for v in vals)
    assert value_vector2(st, n_dot_gen(gen)) == tuple(0 for _ in vals)


def test_sigma_gen_order():
    C2 = cyclic_group(2)
    T = base_change_target(C2, 3)
    st = RepStack(C2, {g: 0 for g in C2.elements}, T)
    gen = random_gen2(st, CTX3, random.Random(13))
    assert value_vector2(st, sigma_gen(gen, 3)) == value_vector2(st, gen)


def test_norm_requires_sigma_data():
    st = stack_c2()
    gen = random_gen2(st, CTX3, random.Random(14))
    with pytest.raises(ExcursionError):
        norm_gen(gen)


@pytest.mark.parametrize("maker,expect", [
    (stack_c2, 2), (stack_s3, 3)])
def test_character_bijection(maker, expect):
    st = maker()
    rep = character_bijection_report(st, CTX5)
    assert rep["pass"]
    assert rep["points"] == expect == rep["characters"]


def test_character_bijection_one_point():
    S3 = symmetric_group(3)
    T = make_target(exc.trivial_group(), S3, {q: {0: 0} for q in S3.elements})
    st = RepStack(S3, {g: g for g in S3.elements}, T)
    rep = character_bijection_report(st, CTX5)
    assert rep["points"] == 1 == rep["characters"]


def test_indicator_invariant_is_invariant():
    st = stack_s3()
    T = st.target
    member = (1, 2)
    f = indicator_invariant(T, 2, member, CTX5)
    InvariantFunction(T, 2, f.table)  # re-validates bi-invariance
