"""Bounded complexes of sigma-modules and their Tate hypercohomology.

The Tate groups are computed from a finite window of the vertically
2-periodic double complex whose rows alternate the maps (1 - sigma) and
N: row r carries (1 - sigma) out of it when r is even, N when r is odd,
so for a module in a single degree the even total degrees compute
T^0 = ker(1 - sigma)/im N and the odd ones T^1 = ker N/im(1 - sigma).

Totalization sign convention: horizontal differential d as given,
vertical maps multiplied by (-1)^column. The window is wide enough that
middle-degree cohomology is exact; stability under widening by two rows
is verified on every call, never assumed.
"""

from __future__ import annotations

from .field import (Mat, Subquotient, columns, image, kernel, mat_from_columns,
                    rank, rref, solve)
from .sigma import SigmaModule, norm_operator, tate_dims


class ComplexError(ValueError):
    pass


class TateInstabilityError(RuntimeError):
    """Window dims changed under widening; signals an implementation bug."""


class SigmaChainComplex:
    """Cohomological complex M^a -> ... -> M^b of sigma-modules.

    differentials[i] maps modules[i] to modules[i+1]; d compose to zero and
    commute with sigma (both checked).
    """

    def __init__(self, ctx, a, modules, differentials):
        self.ctx = ctx
        self.a = a
        self.b = a + len(modules) - 1
        self.modules = list(modules)
        self.diffs = list(differentials)
        if len(self.diffs) != max(0, len(self.modules) - 1):
            raise ComplexError("need one differential per adjacent pair")
        for i, d in enumerate(self.diffs):
            src, tgt = self.modules[i], self.modules[i + 1]
            if d.cols != src.dim or d.rows != tgt.dim:
                raise ComplexError(f"differential {i} has wrong shape")
            if not d.mul(src.sigma).sub(tgt.sigma.mul(d)).is_zero():
                raise ComplexError(f"differential {i} is not sigma-equivariant")
        for i in range(len(self.diffs) - 1):
            if not self.diffs[i + 1].mul(self.diffs[i]).is_zero():
                raise ComplexError(f"d^2 != 0 at degree {self.a + i}")

    @property
    def length(self):
        return self.b - self.a + 1

    def module(self, j):
        if self.a <= j <= self.b:
            return self.modules[j - self.a]
        return None

    def diff(self, j):
        """d^j: M^j -> M^(j+1), or None outside the range."""
        if self.a <= j < self.b:
            return self.diffs[j - self.a]
        return None

    def dims(self):
        return [m.dim for m in self.modules]

    def shift(self, k=1):
        """C[k]: degree j holds old degree j+k; differentials scale by (-1)^k."""
        sign = self.ctx.one if k % 2 == 0 else self.ctx.neg(self.ctx.one)
        return SigmaChainComplex(self.ctx, self.a - k, self.modules,
                                 [d.scale(sign) for d in self.diffs])

    def is_trivial_action(self):
        return all(m.sigma.sub(Mat.identity(self.ctx, m.dim)).is_zero()
                   for m in self.modules)

    def to_json(self):
        return {"degrees": [self.a, self.b],
                "modules": [m.to_json() for m in self.modules],
                "differentials": [d.to_json() for d in self.diffs]}


def single_module_complex(M, degree=0):
    return SigmaChainComplex(M.ctx, degree, [M], [])


def complex_from_json(obj):
    from .sigma import module_from_json
    mods = [module_from_json(m) for m in obj["modules"]]
    if not mods:
        raise ComplexError("empty complex JSON")
    ctx = mods[0].ctx
    diffs = [Mat.from_json(ctx, d) for d in obj["differentials"]]
    return SigmaChainComplex(ctx, obj["degrees"][0], mods, diffs)


def cohomology(C, j):
    """H^j(C) = ker d^j / im d^(j-1) as a SigmaModule, with its Subquotient."""
    ctx = C.ctx
    M = C.module(j)
    if M is None:
        sq = Subquotient(ctx, [], [], 0)
        return SigmaModule(ctx, Mat(ctx, 0, 0, ())), sq
    dj = C.diff(j)
    dprev = C.diff(j - 1)
    Z = columns(kernel(dj)) if dj is not None else columns(Mat.identity(ctx, M.dim))
    B = columns(image(dprev)) if dprev is not None else []
    sq = Subquotient(ctx, Z, B, M.dim)
    induced = sq.induced_matrix(M.sigma)
    return SigmaModule(ctx, induced), sq


# -- the window --

class TateWindow:
    """Finite truncation of the 2-periodic double complex of C.

    Rows r in [-w, w]; component (column j, row r) contributes to total
    degree n = j + r. Row parity fixes the vertical map out of the row:
    1 - sigma for even r, N for odd r.
    """

    def __init__(self, C, w=None):
        self.C = C
        self.ctx = C.ctx
        self.w = w if w is not None else C.length + 4
        self._nmats = {}
        self._ids = {m.dim: Mat.identity(C.ctx, m.dim) for m in C.modules}

    def components(self, n):
        """Ordered [(j, dim)] with r = n - j inside the window."""
        out = []
        for j in range(self.C.a, self.C.b + 1):
            r = n - j
            if -self.w <= r <= self.w:
                out.append((j, self.C.module(j).dim))
        return out

    def total_dim(self, n):
        return sum(d for _, d in self.components(n))

    def _vertical(self, j, r):
        M = self.C.module(j)
        if r % 2 == 0:
            v = self._ids[M.dim].sub(M.sigma)
        else:
            key = j
            if key not in self._nmats:
                self._nmats[key] = norm_operator(M)
            v = self._nmats[key]
        if j % 2 != 0:
            v = v.scale(self.ctx.neg(self.ctx.one))
        return v

    def d_total(self, n):
        """Matrix of D: Tot^n -> Tot^(n+1)."""
        ctx = self.ctx
        src = self.components(n)
        tgt = self.components(n + 1)
        soff, off = {}, 0
        for j, d in src:
            soff[j] = off
            off += d
        sdim = off
        toff, off = {}, 0
        for j, d in tgt:
            toff[j] = off
            off += d
        tdim = off
        rows = [[0] * sdim for _ in range(tdim)]
        for j, d in src:
            r = n - j
            dh = self.C.diff(j)
            if dh is not None and (j + 1) in toff:
                for i in range(dh.rows):
                    ri = rows[toff[j + 1] + i]
                    for c in range(d):
                        ri[soff[j] + c] = dh.entries[i][c]
            if -self.w <= r + 1 <= self.w and j in toff:
                dv = self._vertical(j, r)
                add = ctx.add
                for i in range(dv.rows):
                    ri = rows[toff[j] + i]
                    for c in range(d):
                        if dv.entries[i][c]:
                            ri[soff[j] + c] = add(ri[soff[j] + c], dv.entries[i][c])
        return Mat(ctx, tdim, sdim, tuple(tuple(r) for r in rows))

    def cohomology_at(self, n):
        """Subquotient ker D^n / im D^(n-1)."""
        ctx = self.ctx
        dn = self.d_total(n)
        dprev = self.d_total(n - 1)
        Z = columns(kernel(dn))
        B = columns(image(dprev))
        return Subquotient(ctx, Z, B, self.total_dim(n))

    def embed(self, j, vec, n):
        """Place a vector of M^j into Tot^n coordinates (r = n - j)."""
        out = [0] * self.total_dim(n)
        off = 0
        for jj, d in self.components(n):
            if jj == j:
                out[off:off + d] = list(vec)
                break
            off += d
        return tuple(out)

    def shift_map(self, n):
        """The degree-2 shift Tot^n -> Tot^(n+2), identity on components
        (j, r) -> (j, r+2); valid at middle degrees."""
        ctx = self.ctx
        src = self.components(n)
        tgt = self.components(n + 2)
        tgt_off, off = {}, 0
        for j, d in tgt:
            tgt_off[j] = off
            off += d
        tdim = off
        sdim = sum(d for _, d in src)
        rows = [[0] * sdim for _ in range(tdim)]
        soff = 0
        for j, d in src:
            if j not in tgt_off:
                raise ComplexError("shift map leaves the window")
            for i in range(d):
                rows[tgt_off[j] + i][soff + i] = ctx.one
            soff += d
        return Mat(ctx, tdim, sdim, tuple(tuple(r) for r in rows))


def _middle_degree(C, parity):
    n = (C.a + C.b) // 2
    if n % 2 != parity % 2:
        n += 1
    return n


def tate_hyper(C, i):
    """dim and basis of T^i(C), with the stability certificate.

    Returns (dim, Subquotient, TateWindow, degree used).
    """
    win = TateWindow(C)
    n = _middle_degree(C, i)
    sq = win.cohomology_at(n)
    wide = TateWindow(C, w=win.w + 2)
    if wide.cohomology_at(n).dim != sq.dim:
        raise TateInstabilityError(
            f"Tate window unstable at degree {n}: widening changed the dimension")
    return sq.dim, sq, win, n


def tate_hyper_dims(C):
    """(dim T^0, dim T^1)."""
    return tate_hyper(C, 0)[0], tate_hyper(C, 1)[0]


# -- long exact sequence --

def _induced_map(win_src, win_tgt, degreewise, n):
    """Total-complex matrix of a degreewise chain map at total degree n."""
    ctx = win_src.ctx
    src = win_src.components(n)
    tgt = win_tgt.components(n)
    sdim = sum(d for _, d in src)
    tdim = sum(d for _, d in tgt)
    rows = [[0] * sdim for _ in range(tdim)]
    soff = 0
    toffs, off = {}, 0
    for j, d in tgt:
        toffs[j] = off
        off += d
    for j, d in src:
        f = degreewise[j - win_src.C.a]
        if j in toffs:
            for i in range(f.rows):
                for c in range(d):
                    if f.entries[i][c]:
                        rows[toffs[j] + i][soff + c] = f.entries[i][c]
        soff += d
    return Mat(ctx, tdim, sdim, tuple(tuple(r) for r in rows))


def _map_on_cohomology(sq_src, sq_tgt, total_mat):
    cols = [sq_tgt.coords(total_mat.apply(rep)) for rep in sq_src.reps]
    return mat_from_columns(total_mat.ctx, cols, sq_tgt.dim)


def _mat_inverse(M):
    ctx = M.ctx
    if M.rows != M.cols:
        raise ComplexError("inverse of non-square matrix")
    n = M.rows
    aug = M.hstack(Mat.identity(ctx, n))
    R, rk, piv = rref(aug)
    if rk < n or piv[:n] != list(range(n)):
        raise ComplexError("matrix not invertible")
    return Mat(ctx, n, n, tuple(tuple(r[n:]) for r in R.entries[:n]))


def verify_ses(Csub, C, Cquot, inc, proj):
    """Degreewise short-exactness plus sigma/d compatibility; raises on failure."""
    if (Csub.a, Csub.b) != (C.a, C.b) or (C.a, C.b) != (Cquot.a, Cquot.b):
        raise ComplexError("SES complexes must share the degree range")
    for idx in range(C.length):
        f, g = inc[idx], proj[idx]
        m1, m2, m3 = Csub.modules[idx], C.modules[idx], Cquot.modules[idx]
        if rank(f) != m1.dim:
            raise ComplexError(f"inclusion not injective at index {idx}")
        if rank(g) != m3.dim:
            raise ComplexError(f"projection not surjective at index {idx}")
        if not g.mul(f).is_zero():
            raise ComplexError(f"proj∘inc != 0 at index {idx}")
        if rank(f) + rank(g) != m2.dim:
            raise ComplexError(f"not exact in the middle at index {idx}")
        if not f.mul(m1.sigma).sub(m2.sigma.mul(f)).is_zero():
            raise ComplexError(f"inclusion not sigma-equivariant at index {idx}")
        if not g.mul(m2.sigma).sub(m3.sigma.mul(g)).is_zero():
            raise ComplexError(f"projection not sigma-equivariant at index {idx}")
    for idx in range(C.length - 1):
        if not inc[idx + 1].mul(Csub.diffs[idx]).sub(C.diffs[idx].mul(inc[idx])).is_zero():
            raise ComplexError(f"inclusion does not commute with d at index {idx}")
        if not proj[idx + 1].mul(C.diffs[idx]).sub(Cquot.diffs[idx].mul(proj[idx])).is_zero():
            raise ComplexError(f"projection does not commute with d at index {idx}")


def les_check(Csub, C, Cquot, inc, proj):
    """Compute the six Tate groups and connecting maps; report exactness.

    inc and proj are lists of degreewise matrices. Returns a report dict;
    report["exact"] must be True for a genuine short exact sequence.
    """
    verify_ses(Csub, C, Cquot, inc, proj)
    ctx = C.ctx
    w = C.length + 4
    wins = {id(X): TateWindow(X, w=w) for X in (Csub, C, Cquot)}
    n0 = _middle_degree(C, 0)
    n1 = n0 + 1

    sq = {}
    for X in (Csub, C, Cquot):
        for n in (n0, n1, n0 + 2):
            sq[(id(X), n)] = wins[id(X)].cohomology_at(n)

    def cmap(Xs, Xt, mats, n):
        tot = _induced_map(wins[id(Xs)], wins[id(Xt)], mats, n)
        return _map_on_cohomology(sq[(id(Xs), n)], sq[(id(Xt), n)], tot)

    def connecting(n):
        """T^n(Cquot) -> T^(n+1)(Csub) by the zig-zag."""
        src = sq[(id(Cquot), n)]
        tgt = sq[(id(Csub), n + 1)]
        proj_tot = _induced_map(wins[id(C)], wins[id(Cquot)], proj, n)
        inc_tot = _induced_map(wins[id(Csub)], wins[id(C)], inc, n + 1)
        d_tot = wins[id(C)].d_total(n)
        cols = []
        for rep in src.reps:
            z = solve(proj_tot, rep)
            if z is None:
                raise ComplexError("lift through projection failed")
            dz = d_tot.apply(z)
            wv = solve(inc_tot, dz)
            if wv is None:
                raise ComplexError("boundary does not pull back to the sub")
            cols.append(tgt.coords(wv))
        return mat_from_columns(ctx, cols, tgt.dim)

    f0 = cmap(Csub, C, inc, n0)
    f1 = cmap(C, Cquot, proj, n0)
    f2 = connecting(n0)
    f3 = cmap(Csub, C, inc, n1)
    f4 = cmap(C, Cquot, proj, n1)
    d5 = connecting(n1)  # lands in T at degree n0+2; fold back by the shift
    shift_tot = wins[id(Csub)].shift_map(n0)
    sh = _map_on_cohomology(sq[(id(Csub), n0)], sq[(id(Csub), n0 + 2)], shift_tot)
    f5 = _mat_inverse(sh).mul(d5)

    spaces = [sq[(id(Csub), n0)].dim, sq[(id(C), n0)].dim, sq[(id(Cquot), n0)].dim,
              sq[(id(Csub), n1)].dim, sq[(id(C), n1)].dim, sq[(id(Cquot), n1)].dim]
    maps = [f0, f1, f2, f3, f4, f5]
    nodes = []
    exact = True
    for i in range(6):
        fprev, fnext = maps[i], maps[(i + 1) % 6]
        comp_zero = fnext.mul(fprev).is_zero()
        ok = comp_zero and (rank(fprev) + rank(fnext) == spaces[(i + 1) % 6])
        nodes.append({"node": (i + 1) % 6, "dim": spaces[(i + 1) % 6],
                      "rank_in": rank(fprev), "rank_out": rank(fnext),
                      "composite_zero": comp_zero, "exact": ok})
        exact = exact and ok
    return {"dims": spaces, "exact": exact, "nodes": nodes}


# -- spectral sequence bound --

def tate_ss(C):
    """E_2 dims T^i(H^j(C)) and the filtration bound report.

    Verifies dim T^n(C) <= sum_j dim T^(n-j)(H^j(C)) for both parities,
    with equality when all differentials vanish.
    """
    e2 = {}
    for j in range(C.a, C.b + 1):
        H, _ = cohomology(C, j)
        (d0, d1), _ = tate_dims(H)
        e2[j] = (d0, d1)
    bounds = {0: 0, 1: 0}
    for j, (d0, d1) in e2.items():
        bounds[0] += d0 if j % 2 == 0 else d1
        bounds[1] += d1 if j % 2 == 0 else d0
    t0, t1 = tate_hyper_dims(C)
    zero_diff = all(d.is_zero() for d in C.diffs)
    ok = t0 <= bounds[0] and t1 <= bounds[1]
    if zero_diff:
        ok = ok and t0 == bounds[0] and t1 == bounds[1]
    return {"e2": e2, "bound": (bounds[0], bounds[1]), "actual": (t0, t1),
            "zero_differential": zero_diff, "pass": ok}


def trivial_action_factor(C):
    """For trivial sigma-action: dim T^n(C) = sum_j dim H^j(C), each parity."""
    if not C.is_trivial_action():
        raise ComplexError("sigma does not act as the identity")
    total_h = 0
    for j in range(C.a, C.b + 1):
        H, _ = cohomology(C, j)
        total_h += H.dim
    t0, t1 = tate_hyper_dims(C)
    return {"tate": (t0, t1), "sum_h": total_h,
            "pass": t0 == total_h and t1 == total_h}
