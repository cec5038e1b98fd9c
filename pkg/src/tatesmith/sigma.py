"""Finite-dimensional modules over k[sigma] with sigma^p = 1 and char k = p.

A module is stored as the matrix of sigma. Since (sigma - 1)^p = 0 in
characteristic p, every module is a direct sum of Jordan blocks J_1..J_p
for sigma - 1; the block multiset (the Jordan profile) is a complete
isomorphism invariant and J_p is the free module k[sigma].

Tate cohomology convention, used by every other module:
    T^0 = ker(1 - sigma) / im N,   T^1 = ker N / im(1 - sigma),
with N = 1 + sigma + ... + sigma^(p-1).
"""

from __future__ import annotations

from collections import Counter

from .field import (Mat, Subquotient, block_diag, image, kernel, columns,
                    kron, rank)


class SigmaModuleError(ValueError):
    pass


class SigmaModule:
    def __init__(self, ctx, sigma):
        self.ctx = ctx
        self.p = ctx.p
        self.sigma = sigma
        self.dim = sigma.rows
        if sigma.rows != sigma.cols:
            raise SigmaModuleError("sigma must be square")
        if not sigma.pow(self.p).sub(Mat.identity(ctx, self.dim)).is_zero():
            raise SigmaModuleError("sigma^p is not the identity")

    def __repr__(self):
        return f"SigmaModule(p={self.p}, dim={self.dim})"

    def sigma_minus_one(self):
        return self.sigma.sub(Mat.identity(self.ctx, self.dim))

    def to_json(self):
        return {"p": self.ctx.p, "m": self.ctx.m, "dim": self.dim,
                "sigma": self.sigma.to_json()}


def zero_module(ctx):
    return SigmaModule(ctx, Mat(ctx, 0, 0, ()))


def trivial_module(ctx, dim=1):
    return SigmaModule(ctx, Mat.identity(ctx, dim))


def jordan_block(ctx, size):
    """J_size: sigma = 1 + (nilpotent Jordan block); needs size <= p."""
    if size < 1 or size > ctx.p:
        raise SigmaModuleError(f"Jordan block size must be in [1, {ctx.p}]")
    one = ctx.one
    rows = [[one if i == j else (one if j == i + 1 else 0) for j in range(size)]
            for i in range(size)]
    return SigmaModule(ctx, Mat.from_rows(ctx, rows))


def jordan_module(ctx, sizes):
    if not sizes:
        return zero_module(ctx)
    return SigmaModule(ctx, block_diag(ctx, [jordan_block(ctx, s).sigma for s in sizes]))


def norm_operator(M):
    """Matrix of N = 1 + sigma + ... + sigma^(p-1)."""
    out = Mat.identity(M.ctx, M.dim)
    acc = Mat.identity(M.ctx, M.dim)
    for _ in range(M.p - 1):
        acc = acc.mul(M.sigma)
        out = out.add(acc)
    return out


def tate_subquotients(M):
    """(Subquotient for T^0, Subquotient for T^1)."""
    ctx = M.ctx
    one_minus = Mat.identity(ctx, M.dim).sub(M.sigma)
    N = norm_operator(M)
    t0 = Subquotient(ctx, columns(kernel(one_minus)), columns_of_image(N), M.dim)
    t1 = Subquotient(ctx, columns(kernel(N)), columns_of_image(one_minus), M.dim)
    return t0, t1


def columns_of_image(M):
    return columns(image(M))


def tate_dims(M):
    """(dim T^0, dim T^1) with chosen subquotient bases attached."""
    t0, t1 = tate_subquotients(M)
    return (t0.dim, t1.dim), (t0, t1)


def jordan_profile(M):
    """Multiset of Jordan block sizes of sigma - 1, via the rank staircase."""
    if M.dim == 0:
        return Counter()
    nil = M.sigma_minus_one()
    ranks = [M.dim]
    power = Mat.identity(M.ctx, M.dim)
    for _ in range(M.p):
        power = power.mul(nil)
        ranks.append(rank(power))
    profile = Counter()
    for s in range(1, M.p + 1):
        count = ranks[s - 1] - 2 * ranks[s] + (ranks[s + 1] if s < M.p else 0)
        if count:
            profile[s] = count
    return profile


def is_perfect(M):
    prof = jordan_profile(M)
    return all(s == M.p for s in prof)


def tate_equivalent(M, M2):
    """Isomorphic after deleting free (J_p) summands."""
    if M.ctx != M2.ctx:
        raise SigmaModuleError("mismatched field contexts")
    a, b = jordan_profile(M), jordan_profile(M2)
    a.pop(M.p, None)
    b.pop(M.p, None)
    return a == b


def direct_sum(M, M2):
    if M.ctx != M2.ctx:
        raise SigmaModuleError("mismatched field contexts")
    return SigmaModule(M.ctx, block_diag(M.ctx, [M.sigma, M2.sigma]))


def tensor(M, M2):
    if M.ctx != M2.ctx:
        raise SigmaModuleError("mismatched field contexts")
    if M.dim == 0 or M2.dim == 0:
        return zero_module(M.ctx)
    return SigmaModule(M.ctx, kron(M.sigma, M2.sigma))


def dual(M):
    """Contragredient: sigma acts by the inverse transpose."""
    inv = M.sigma.pow(M.p - 1)  # sigma^-1 since sigma^p = 1
    return SigmaModule(M.ctx, inv.transpose())


def tensor_induce(ctx, d):
    """V^{tensor p} for dim V = d, sigma rotating the factors.

    Pure permutation of the product basis; profile {1}^d + {p}^((d^p-d)/p).
    """
    p = ctx.p
    if d == 0:
        return zero_module(ctx)
    n = d ** p
    one = ctx.one
    rows = [[0] * n for _ in range(n)]
    for idx in range(n):
        # digits of idx, most significant = first tensor factor
        digits = []
        t = idx
        for _ in range(p):
            digits.append(t % d)
            t //= d
        digits.reverse()
        rot = [digits[-1]] + digits[:-1]
        tgt = 0
        for dg in rot:
            tgt = tgt * d + dg
        rows[tgt][idx] = one
    return SigmaModule(ctx, Mat.from_rows(ctx, rows))


def induced(ctx, d):
    """V tensor k[sigma] for dim V = d: the free module of rank d."""
    p = ctx.p
    if d == 0:
        return zero_module(ctx)
    n = d * p
    one = ctx.one
    rows = [[0] * n for _ in range(n)]
    for blk in range(p):
        tgt = (blk + 1) % p
        for i in range(d):
            rows[tgt * d + i][blk * d + i] = one
    return SigmaModule(ctx, Mat.from_rows(ctx, rows))


def frobenius_twist_rep(R):
    """Frobenius twist of a representation: every matrix entry to the p-th
    power (x -> x^p is the coefficient-field Frobenius)."""
    from .groups import GroupRep
    ctx = R.ctx
    return GroupRep(R.group, R.dim, lambda g: R.mat(g).entrywise(ctx.frobenius),
                    ctx, name=f"{R.name}^(p)", check=False)


def module_from_json(obj):
    from .field import field_make
    ctx = field_make(obj["p"], obj["m"])
    return SigmaModule(ctx, Mat.from_json(ctx, obj["sigma"]))


def profile_to_json(profile):
    out = []
    for s in sorted(profile):
        out.extend([s] * profile[s])
    return out
