"""Seeded random generators for modules, equivariant maps, complexes and
short exact sequences. Everything is driven by a caller-supplied
random.Random so suites are reproducible from a single seed.
"""

from __future__ import annotations

from .field import Mat, block_diag, kernel
from .sigma import SigmaModule, jordan_module
from .complexes import SigmaChainComplex


def random_scalar(ctx, rng):
    return rng.randrange(ctx.q)


def random_profile(rng, p, max_dim, free=False):
    sizes = []
    total = 0
    while total < max_dim:
        s = p if free else rng.randint(1, p)
        if total + s > max_dim:
            break
        sizes.append(s)
        total += s
        if rng.random() < 0.25:
            break
    return sizes


def random_sigma_module(ctx, rng, max_dim=8, free=False, trivial=False):
    if trivial:
        d = rng.randint(0, max_dim)
        return jordan_module(ctx, [1] * d)
    return jordan_module(ctx, random_profile(rng, ctx.p, max_dim, free=free))


def equivariant_map_space(Msrc, Mtgt, post=None):
    """Basis (as Mats) of {T : sigma_tgt T = T sigma_src, post.T = 0}."""
    ctx = Msrc.ctx
    ns, nt = Msrc.dim, Mtgt.dim
    if ns == 0 or nt == 0:
        return []
    rows = []
    S, T = Msrc.sigma, Mtgt.sigma
    for i in range(nt):
        for k in range(ns):
            row = [0] * (ns * nt)
            for j in range(ns):
                row[i * ns + j] = ctx.add(row[i * ns + j], S.entries[j][k])
            for j in range(nt):
                row[j * ns + k] = ctx.sub(row[j * ns + k], T.entries[i][j])
            rows.append(row)
    if post is not None:
        for i in range(post.rows):
            for k in range(ns):
                row = [0] * (ns * nt)
                for j in range(nt):
                    row[j * ns + k] = post.entries[i][j]
                rows.append(row)
    K = kernel(Mat.from_rows(ctx, rows))
    basis = []
    for c in range(K.cols):
        v = K.col(c)
        basis.append(Mat(ctx, nt, ns,
                         tuple(tuple(v[i * ns + j] for j in range(ns)) for i in range(nt))))
    return basis


def random_combo(ctx, rng, basis, rows, cols):
    out = Mat.zero(ctx, rows, cols)
    for B in basis:
        c = random_scalar(ctx, rng)
        if c:
            out = out.add(B.scale(c))
    return out


def random_complex(ctx, rng, max_len=3, max_dim=6, free=False, trivial=False,
                   zero_diff=False, base_degree=None):
    """Random bounded complex; differentials are random equivariant maps
    composed into kernels so d^2 = 0 holds by construction."""
    length = rng.randint(1, max_len)
    a = base_degree if base_degree is not None else rng.randint(-2, 2)
    modules = [random_sigma_module(ctx, rng, max_dim, free=free, trivial=trivial)
               for _ in range(length)]
    diffs = []
    if length > 1:
        # build right-to-left so each d lands in the kernel of the next
        diffs = [None] * (length - 1)
        nxt = None
        for i in range(length - 2, -1, -1):
            src, tgt = modules[i], modules[i + 1]
            if zero_diff:
                diffs[i] = Mat.zero(ctx, tgt.dim, src.dim)
            else:
                basis = equivariant_map_space(src, tgt, post=nxt)
                diffs[i] = random_combo(ctx, rng, basis, tgt.dim, src.dim)
            nxt = diffs[i]
    return SigmaChainComplex(ctx, a, modules, diffs)


def inclusion_mats(ctx, sub_dims, quot_dims):
    inc, proj = [], []
    for ds, dq in zip(sub_dims, quot_dims):
        n = ds + dq
        inc.append(Mat(ctx, n, ds,
                       tuple(tuple(ctx.one if i == j else 0 for j in range(ds))
                             for i in range(n))))
        proj.append(Mat(ctx, dq, n,
                        tuple(tuple(ctx.one if j == ds + i else 0 for j in range(n))
                              for i in range(dq))))
    return inc, proj


def random_ses(ctx, rng, max_len=2, max_dim=4, split=False):
    """(Csub, C, Cquot, inc, proj): an extension of two random complexes by
    a random compatible gluing map, giving a degreewise SES."""
    length = rng.randint(1, max_len)
    a = rng.randint(-1, 1)
    sub_mods = [random_sigma_module(ctx, rng, max_dim) for _ in range(length)]
    quot_mods = [random_sigma_module(ctx, rng, max_dim) for _ in range(length)]
    Csub = _rand_complex_on(ctx, rng, a, sub_mods)
    Cquot = _rand_complex_on(ctx, rng, a, quot_mods)

    hs = [Mat.zero(ctx, sub_mods[i + 1].dim, quot_mods[i].dim)
          for i in range(length - 1)]
    if not split and length > 1:
        hs = _random_gluing(ctx, rng, Csub, Cquot)

    mods = [SigmaModule(ctx, block_diag(ctx, [ms.sigma, mq.sigma]))
            for ms, mq in zip(sub_mods, quot_mods)]
    diffs = []
    for i in range(length - 1):
        ds, dq, h = Csub.diffs[i], Cquot.diffs[i], hs[i]
        top = ds.hstack(h)
        bot = Mat.zero(ctx, dq.rows, ds.cols).hstack(dq)
        rows = list(top.entries) + list(bot.entries)
        diffs.append(Mat.from_rows(ctx, rows) if rows else
                     Mat(ctx, 0, ds.cols + dq.cols, ()))
    C = SigmaChainComplex(ctx, a, mods, diffs)
    inc, proj = inclusion_mats(ctx, [m.dim for m in sub_mods],
                               [m.dim for m in quot_mods])
    return Csub, C, Cquot, inc, proj


def _rand_complex_on(ctx, rng, a, modules):
    length = len(modules)
    diffs = []
    if length > 1:
        diffs = [None] * (length - 1)
        nxt = None
        for i in range(length - 2, -1, -1):
            basis = equivariant_map_space(modules[i], modules[i + 1], post=nxt)
            diffs[i] = random_combo(ctx, rng, basis, modules[i + 1].dim,
                                    modules[i].dim)
            nxt = diffs[i]
    return SigmaChainComplex(ctx, a, modules, diffs)


def _random_gluing(ctx, rng, Csub, Cquot):
    """Random h_j: Mquot_j -> Msub_(j+1), sigma-equivariant, with
    dsub h + h dquot = 0, solved jointly across degrees."""
    length = Csub.length
    shapes = [(Csub.modules[i + 1].dim, Cquot.modules[i].dim)
              for i in range(length - 1)]
    sizes = [r * c for r, c in shapes]
    total = sum(sizes)
    if total == 0:
        return [Mat.zero(ctx, r, c) for r, c in shapes]
    offs = [0]
    for s in sizes[:-1]:
        offs.append(offs[-1] + s)

    rows = []

    def entry(block, i, j):
        return offs[block] + i * shapes[block][1] + j

    # sigma-equivariance per block
    for b in range(length - 1):
        r, c = shapes[b]
        Ssub = Csub.modules[b + 1].sigma
        Squo = Cquot.modules[b].sigma
        for i in range(r):
            for k in range(c):
                row = [0] * total
                for j in range(c):
                    row[entry(b, i, j)] = ctx.add(row[entry(b, i, j)],
                                                  Squo.entries[j][k])
                for j in range(r):
                    row[entry(b, j, k)] = ctx.sub(row[entry(b, j, k)],
                                                  Ssub.entries[i][j])
                rows.append(row)
    # dsub_(j+1) h_j + h_(j+1) dquot_j = 0
    for b in range(length - 2):
        dsub = Csub.diffs[b + 1]
        dquo = Cquot.diffs[b]
        r2, c1 = shapes[b + 1][0], shapes[b][1]
        for i in range(r2):
            for k in range(c1):
                row = [0] * total
                for j in range(shapes[b][0]):
                    row[entry(b, j, k)] = ctx.add(row[entry(b, j, k)],
                                                  dsub.entries[i][j])
                for j in range(shapes[b + 1][1]):
                    row[entry(b + 1, i, j)] = ctx.add(row[entry(b + 1, i, j)],
                                                      dquo.entries[j][k])
                rows.append(row)
    K = kernel(Mat.from_rows(ctx, rows)) if rows else None
    vec = [0] * total
    if K is not None and K.cols:
        coeffs = [random_scalar(ctx, rng) for _ in range(K.cols)]
        for cidx in range(K.cols):
            c = coeffs[cidx]
            if c:
                col = K.col(cidx)
                for i in range(total):
                    vec[i] = ctx.add(vec[i], ctx.mul(c, col[i]))
    out = []
    for b in range(length - 1):
        r, c = shapes[b]
        out.append(Mat(ctx, r, c,
                       tuple(tuple(vec[entry(b, i, j)] for j in range(c))
                             for i in range(r))))
    return out
