"""Exact arithmetic in F_{p^m} and dense exact linear algebra.

Scalars are stored as small ints in [0, p^m): the encoding of the
little-endian coefficient vector c_0 + c_1*p + ... + c_{m-1}*p^(m-1).
A FieldCtx owns the modulus polynomial and (for small fields) dense
add/mul/inv lookup tables, so all arithmetic is table lookups.

Everything here is deterministic: the modulus polynomial is the
lexicographically smallest monic irreducible of its degree, rref uses
the leftmost-pivot / topmost-row rule, and all reported bases are in
reduced echelon form.
"""

from __future__ import annotations

from dataclasses import dataclass

_TABLE_LIMIT = 1024  # precompute dense op tables up to this field size


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# -- polynomial helpers over F_p (little-endian int lists, used only at
#    context-construction time; runtime arithmetic goes through tables) --

def _poly_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _poly_trim(out)


def _poly_divmod(f, g, p):
    f = list(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    q = [0] * max(0, len(f) - dg)
    while len(f) - 1 >= dg and _poly_trim(f):
        shift = len(f) - 1 - dg
        c = (f[-1] * inv_lead) % p
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - c * b) % p
        _poly_trim(f)
    return _poly_trim(q), f


def _poly_mod(f, g, p):
    return _poly_divmod(f, g, p)[1]


def _monic_polys(deg, p):
    """All monic polynomials of the given degree, lexicographically by
    encoded low coefficients (c_0 fastest)."""
    for n in range(p ** deg):
        coeffs = []
        t = n
        for _ in range(deg):
            coeffs.append(t % p)
            t //= p
        yield coeffs + [1]


def _is_irreducible(f, p):
    """Trial division by all monic polynomials of degree <= deg(f)/2."""
    deg = len(f) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for g in _monic_polys(d, p):
            if not _poly_mod(f, g, p):
                return False
    return True


class FieldError(ValueError):
    pass


class FieldCtx:
    """The field F_{p^m} with its reduction modulus and op tables."""

    def __init__(self, p, m, modulus_poly):
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus_poly = tuple(modulus_poly)
        self.zero = 0
        self.one = 1 % self.q
        self._build_tables()

    def _encode(self, coeffs):
        n = 0
        for c in reversed(coeffs):
            n = n * self.p + (c % self.p)
        return n

    def decode(self, x):
        """Little-endian coefficient list of a scalar."""
        out = []
        for _ in range(self.m):
            out.append(x % self.p)
            x //= self.p
        return out

    def encode(self, coeffs):
        if len(coeffs) > self.m:
            raise FieldError("coefficient vector longer than extension degree")
        return self._encode(list(coeffs) + [0] * (self.m - len(coeffs)))

    def _raw_mul(self, a, b):
        fa, fb = self.decode(a), self.decode(b)
        prod = _poly_mul(_poly_trim(fa), _poly_trim(fb), self.p)
        rem = _poly_mod(prod, list(self.modulus_poly), self.p)
        return self._encode(rem + [0] * (self.m - len(rem)))

    def _build_tables(self):
        q, p, m = self.q, self.p, self.m
        if q > _TABLE_LIMIT:
            self._add_t = self._mul_t = self._inv_t = None
            return
        if m == 1:
            self._add_t = [[(a + b) % p for b in range(q)] for a in range(q)]
            self._mul_t = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            self._add_t = [[0] * q for _ in range(q)]
            self._mul_t = [[0] * q for _ in range(q)]
            for a in range(q):
                da = self.decode(a)
                for b in range(a, q):
                    db = self.decode(b)
                    s = self._encode([(x + y) % p for x, y in zip(da, db)])
                    self._add_t[a][b] = self._add_t[b][a] = s
                    t = self._raw_mul(a, b)
                    self._mul_t[a][b] = self._mul_t[b][a] = t
        self._inv_t = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self._mul_t[a][b] == 1:
                    self._inv_t[a] = b
                    break
        self._neg_t = [0] * q
        for a in range(q):
            for b in range(q):
                if self._add_t[a][b] == 0:
                    self._neg_t[a] = b
                    break

    # scalar ops

    def add(self, a, b):
        if self._add_t is not None:
            return self._add_t[a][b]
        return self._encode([(x + y) % self.p
                             for x, y in zip(self.decode(a), self.decode(b))])

    def neg(self, a):
        if self._add_t is not None:
            return self._neg_t[a]
        return self._encode([(-x) % self.p for x in self.decode(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self._mul_t is not None:
            return self._mul_t[a][b]
        return self._raw_mul(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("field inverse of zero")
        if self._inv_t is not None:
            return self._inv_t[a]
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if a == 0:
            return self.one if n == 0 else 0
        n %= self.q - 1
        out, base = self.one, a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def from_int(self, n):
        return n % self.p

    def elements(self):
        return range(self.q)

    def frobenius(self, x):
        """x -> x^p, the arithmetic Frobenius."""
        return self.pow(x, self.p)

    def frobenius_inv(self, x):
        """The unique p-th root: x -> x^(p^(m-1))."""
        out = x
        for _ in range(self.m - 1):
            out = self.frobenius(out)
        return out

    def gen(self):
        """Image of the polynomial variable (a generator when m > 1)."""
        return self.encode([0, 1]) if self.m > 1 else self.one

    def __eq__(self, other):
        return (isinstance(other, FieldCtx) and self.p == other.p
                and self.m == other.m and self.modulus_poly == other.modulus_poly)

    def __repr__(self):
        return f"FieldCtx(p={self.p}, m={self.m}, modulus={list(self.modulus_poly)})"


_CTX_CACHE = {}


def field_make(p, m):
    """Build F_{p^m} with the lexicographically smallest monic irreducible
    modulus polynomial (deterministic across runs)."""
    if not isinstance(p, int) or not _is_prime(p):
        raise FieldError(f"{p} is not prime")
    if not isinstance(m, int) or m < 1:
        raise FieldError(f"extension degree must be >= 1, got {m}")
    key = (p, m)
    if key not in _CTX_CACHE:
        for f in _monic_polys(m, p):
            if _is_irreducible(f, p):
                _CTX_CACHE[key] = FieldCtx(p, m, f)
                break
    return _CTX_CACHE[key]


def frobenius(ctx, x):
    return ctx.frobenius(x)


def frobenius_inv(ctx, x):
    return ctx.frobenius_inv(x)


# -- dense matrices --

@dataclass(frozen=True)
class Mat:
    """Dense matrix over a FieldCtx; entries are scalar ints, row-major."""
    ctx: FieldCtx
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise FieldError("matrix dimensions inconsistent with entries")

    @staticmethod
    def from_rows(ctx, rows):
        rows = tuple(tuple(r) for r in rows)
        return Mat(ctx, len(rows), len(rows[0]) if rows else 0, rows)

    @staticmethod
    def zero(ctx, rows, cols):
        return Mat(ctx, rows, cols, tuple((0,) * cols for _ in range(rows)))

    @staticmethod
    def identity(ctx, n):
        return Mat(ctx, n, n,
                   tuple(tuple(ctx.one if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def scalar(ctx, n, c):
        return Mat(ctx, n, n,
                   tuple(tuple(c if i == j else 0 for j in range(n)) for i in range(n)))

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def row(self, i):
        return self.entries[i]

    def col(self, j):
        return tuple(r[j] for r in self.entries)

    def add(self, other):
        add = self.ctx.add
        return Mat(self.ctx, self.rows, self.cols,
                   tuple(tuple(add(a, b) for a, b in zip(r1, r2))
                         for r1, r2 in zip(self.entries, other.entries)))

    def sub(self, other):
        return self.add(other.scale(self.ctx.neg(self.ctx.one)))

    def scale(self, c):
        mul = self.ctx.mul
        return Mat(self.ctx, self.rows, self.cols,
                   tuple(tuple(mul(c, a) for a in r) for r in self.entries))

    def mul(self, other):
        if self.cols != other.rows:
            raise FieldError("matrix product dimension mismatch")
        ctx = self.ctx
        add, mul = ctx.add, ctx.mul
        ocols = other.cols
        ot = [other.col(j) for j in range(ocols)]
        out = []
        for r in self.entries:
            orow = []
            for j in range(ocols):
                c = ot[j]
                s = 0
                for a, b in zip(r, c):
                    if a and b:
                        s = add(s, mul(a, b))
                orow.append(s)
            out.append(tuple(orow))
        return Mat(ctx, self.rows, ocols, tuple(out))

    def apply(self, vec):
        """Matrix times column vector (vector as tuple/list)."""
        ctx = self.ctx
        add, mul = ctx.add, ctx.mul
        out = []
        for r in self.entries:
            s = 0
            for a, b in zip(r, vec):
                if a and b:
                    s = add(s, mul(a, b))
            out.append(s)
        return tuple(out)

    def transpose(self):
        return Mat(self.ctx, self.cols, self.rows,
                   tuple(tuple(self.entries[i][j] for i in range(self.rows))
                         for j in range(self.cols)))

    def hstack(self, other):
        return Mat(self.ctx, self.rows, self.cols + other.cols,
                   tuple(r1 + r2 for r1, r2 in zip(self.entries, other.entries)))

    def is_zero(self):
        return all(all(a == 0 for a in r) for r in self.entries)

    def pow(self, n):
        out = Mat.identity(self.ctx, self.rows)
        base = self
        while n:
            if n & 1:
                out = out.mul(base)
            base = base.mul(base)
            n >>= 1
        return out

    def entrywise(self, fn):
        return Mat(self.ctx, self.rows, self.cols,
                   tuple(tuple(fn(a) for a in r) for r in self.entries))

    def to_json(self):
        return {"rows": self.rows, "cols": self.cols,
                "entries": [[self.ctx.decode(a) for a in r] for r in self.entries]}

    @staticmethod
    def from_json(ctx, obj):
        rows = [[ctx.encode(c) for c in r] for r in obj["entries"]]
        m = Mat(ctx, obj["rows"], obj["cols"], tuple(tuple(r) for r in rows))
        return m


def kron(a, b):
    """Kronecker product (row-major, left factor outer)."""
    ctx = a.ctx
    mul = ctx.mul
    rows = []
    for i in range(a.rows):
        for k in range(b.rows):
            row = []
            for j in range(a.cols):
                x = a.entries[i][j]
                if x == 0:
                    row.extend([0] * b.cols)
                else:
                    row.extend(mul(x, y) for y in b.entries[k])
            rows.append(tuple(row))
    return Mat(ctx, a.rows * b.rows, a.cols * b.cols, tuple(rows))


def block_diag(ctx, mats):
    n = sum(m.rows for m in mats)
    c = sum(m.cols for m in mats)
    out = [[0] * c for _ in range(n)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            out[r0 + i][c0:c0 + m.cols] = list(m.entries[i])
        r0 += m.rows
        c0 += m.cols
    return Mat.from_rows(ctx, out) if n else Mat(ctx, 0, c, ())


def rref(M):
    """Reduced row echelon form. Returns (R, rank, pivot column list)."""
    ctx = M.ctx
    add, mul, neg, inv = ctx.add, ctx.mul, ctx.neg, ctx.inv
    rows = [list(r) for r in M.entries]
    nr, nc = M.rows, M.cols
    pivots = []
    r = 0
    for c in range(nc):
        pr = None
        for i in range(r, nr):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = inv(rows[r][c])
        if pv != ctx.one:
            rows[r] = [mul(pv, a) for a in rows[r]]
        else:
            rows[r] = list(rows[r])
        for i in range(nr):
            if i != r and rows[i][c]:
                f = neg(rows[i][c])
                ri, rr = rows[i], rows[r]
                for j in range(c, nc):
                    if rr[j]:
                        ri[j] = add(ri[j], mul(f, rr[j]))
        pivots.append(c)
        r += 1
        if r == nr:
            break
    R = Mat(ctx, nr, nc, tuple(tuple(row) for row in rows))
    return R, len(pivots), pivots


def rank(M):
    return rref(M)[1]


def row_space_basis(M):
    """Nonzero rows of rref(M): the canonical reduced-echelon basis of the
    row space, as a Mat (possibly with 0 rows)."""
    R, rk, _ = rref(M)
    return Mat(M.ctx, rk, M.cols, R.entries[:rk])


def kernel(M):
    """Basis of the right kernel, columns of the returned Mat, in reduced
    echelon form (deterministic)."""
    ctx = M.ctx
    R, rk, pivots = rref(M)
    free = [c for c in range(M.cols) if c not in pivots]
    vecs = []
    for fc in free:
        v = [0] * M.cols
        v[fc] = ctx.one
        for r, pc in enumerate(pivots):
            v[pc] = ctx.neg(R.entries[r][fc])
        vecs.append(v)
    if not vecs:
        return Mat(ctx, M.cols, 0, tuple(() for _ in range(M.cols)))
    basis = row_space_basis(Mat.from_rows(ctx, vecs))
    return basis.transpose()


def image(M):
    """Basis of the column space, columns of the returned Mat, reduced."""
    basis = row_space_basis(M.transpose())
    return basis.transpose()


def solve(M, b):
    """One solution x of M x = b, or None. Free variables are set to 0."""
    if len(b) != M.rows:
        raise FieldError("solve: right-hand side has wrong length")
    ctx = M.ctx
    aug = M.hstack(Mat(ctx, M.rows, 1, tuple((x,) for x in b)))
    R, rk, pivots = rref(aug)
    if M.cols in pivots:
        return None
    x = [0] * M.cols
    for r, pc in enumerate(pivots):
        x[pc] = R.entries[r][M.cols]
    return tuple(x)


def columns(M):
    return [M.col(j) for j in range(M.cols)]


def mat_from_columns(ctx, cols, nrows=None):
    if not cols:
        return Mat(ctx, nrows or 0, 0, tuple(() for _ in range(nrows or 0)))
    return Mat.from_rows(ctx, [list(c) for c in cols]).transpose()


def _in_span(basis_rows, vec, ctx):
    if not basis_rows:
        return all(a == 0 for a in vec)
    M = Mat.from_rows(ctx, basis_rows).transpose()
    return solve(M, vec) is not None


class SubquotientError(ValueError):
    pass


class Subquotient:
    """U/W for explicit subspaces W <= U of an ambient k^n.

    Chooses deterministic representatives extending an echelon basis of W
    to one of U (echelon-pivot extension), and provides coordinates of any
    vector of U in the induced basis of U/W.
    """

    def __init__(self, ctx, U_cols, W_cols, ambient_dim):
        self.ctx = ctx
        self.ambient = ambient_dim
        ub = row_space_basis(mat_from_columns(ctx, U_cols, ambient_dim).transpose())
        wb = row_space_basis(mat_from_columns(ctx, W_cols, ambient_dim).transpose())
        for wrow in wb.entries:
            if not _in_span(list(ub.entries), wrow, ctx):
                raise SubquotientError("W is not contained in U")
        reps = []
        cur = [list(r) for r in wb.entries]
        for urow in ub.entries:
            cand = cur + [list(r) for r in reps] + [list(urow)]
            if rank(Mat.from_rows(ctx, cand)) > len(cur) + len(reps):
                reps.append(urow)
        self.reps = [tuple(r) for r in reps]
        self.dim = len(self.reps)
        self._w_rows = [tuple(r) for r in wb.entries]
        cols = [list(r) for r in self.reps] + [list(r) for r in self._w_rows]
        self._solve_mat = (mat_from_columns(ctx, cols, ambient_dim)
                           if cols else Mat(ctx, ambient_dim, 0,
                                            tuple(() for _ in range(ambient_dim))))

    def coords(self, vec):
        """Class of vec in the U/W basis; vec must lie in U."""
        if self.dim == 0 and not self._w_rows:
            if any(a != 0 for a in vec):
                raise SubquotientError("vector not in U")
            return ()
        sol = solve(self._solve_mat, tuple(vec))
        if sol is None:
            raise SubquotientError("vector not in U")
        return tuple(sol[:self.dim])

    def lift(self, coeffs):
        ctx = self.ctx
        out = [0] * self.ambient
        for c, rep in zip(coeffs, self.reps):
            if c:
                for i, a in enumerate(rep):
                    out[i] = ctx.add(out[i], ctx.mul(c, a))
        return tuple(out)

    def induced_matrix(self, op):
        """Matrix of a linear map on U/W, given the ambient operator
        (a Mat or a vector->vector callable) preserving U and W."""
        apply = op.apply if isinstance(op, Mat) else op
        cols = [self.coords(apply(rep)) for rep in self.reps]
        return mat_from_columns(self.ctx, cols, self.dim)


def subquotient_dim(U, W):
    """dim U/W together with chosen representative columns.

    U, W are matrices whose columns span the respective subspaces of k^n;
    span(W) <= span(U) is checked.
    """
    ctx = U.ctx
    if U.rows != W.rows:
        raise SubquotientError("ambient dimensions differ")
    sq = Subquotient(ctx, columns(U), columns(W), U.rows)
    return sq.dim, mat_from_columns(ctx, sq.reps, U.rows)


def intertwiner_space(A_rep, B_rep):
    """Basis of {T : T A_g = B_g T for all g}, as a list of Mats.

    A_rep and B_rep are matched lists of square matrices (generator images);
    T has shape (dim B) x (dim A).
    """
    if len(A_rep) != len(B_rep):
        raise FieldError("generator lists have different lengths")
    if not A_rep:
        raise FieldError("need at least one generator")
    ctx = A_rep[0].ctx
    na, nb = A_rep[0].rows, B_rep[0].rows
    for A, B in zip(A_rep, B_rep):
        if A.rows != A.cols or B.rows != B.cols:
            raise FieldError("generator matrices must be square")
    # unknowns T[i][j], i < nb, j < na, flattened row-major
    rows = []
    for A, B in zip(A_rep, B_rep):
        for i in range(nb):
            for k in range(na):
                row = [0] * (na * nb)
                for j in range(na):
                    row[i * na + j] = ctx.add(row[i * na + j], A.entries[j][k])
                for j in range(nb):
                    row[j * na + k] = ctx.sub(row[j * na + k], B.entries[i][j])
                rows.append(row)
    K = kernel(Mat.from_rows(ctx, rows))
    out = []
    for v in columns(K):
        out.append(Mat(ctx, nb, na,
                       tuple(tuple(v[i * na + j] for j in range(na)) for i in range(nb))))
    return out


def scalar_to_json(ctx, x):
    return ctx.decode(x)


def scalar_from_json(ctx, coeffs):
    return ctx.encode(coeffs)
