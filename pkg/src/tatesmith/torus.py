"""The explicit torus case of the base-change functor.

Objects are finitely supported multiplicity assignments on Z^r (r = p on
the source side, 1 on the target side): the affine Grassmannian of a
torus is a discrete set of points labeled by cocharacters, and every
object is a sum of point sheaves. The functor sends a label
(n_1, ..., n_p) to n_1 + ... + n_p; on morphisms the raw norm map raises
scalars to the p-th power and the inverse Frobenius twist brings them
back, so the net effect on matrix blocks is the identity, computed (not
assumed) through the field's frobenius_inv.
"""

from __future__ import annotations

from .field import Mat, block_diag


class TorusError(ValueError):
    pass


class TorusParityObj:
    """rank: label length; support: dict label-tuple -> multiplicity >= 0."""

    def __init__(self, rank, support):
        self.rank = rank
        self.support = {}
        for label, mult in support.items():
            label = tuple(int(x) for x in label)
            if len(label) != rank:
                raise TorusError("label length does not match rank")
            if mult < 0:
                raise TorusError("negative multiplicity")
            if mult:
                self.support[label] = int(mult)

    def labels(self):
        return sorted(self.support)

    def __eq__(self, other):
        return self.rank == other.rank and self.support == other.support

    def direct_sum(self, other):
        if self.rank != other.rank:
            raise TorusError("rank mismatch in direct sum")
        out = dict(self.support)
        for l, m in other.support.items():
            out[l] = out.get(l, 0) + m
        return TorusParityObj(self.rank, out)

    def to_json(self):
        return {"p": self.rank,
                "support": [{"label": list(l), "mult": m}
                            for l, m in sorted(self.support.items())]}

    @staticmethod
    def from_json(obj):
        return TorusParityObj(obj["p"],
                              {tuple(e["label"]): e["mult"]
                               for e in obj["support"]})


class TorusMorphism:
    """Blocks: dict label -> Mat between the multiplicity spaces of source
    and target at that label; absent labels carry zero blocks."""

    def __init__(self, src, tgt, blocks):
        self.src = src
        self.tgt = tgt
        self.blocks = {}
        for label, m in blocks.items():
            label = tuple(label)
            if m.rows != tgt.support.get(label, 0) or \
                    m.cols != src.support.get(label, 0):
                raise TorusError(f"block at {label} has wrong shape")
            self.blocks[label] = m

    def compose(self, other):
        """self ∘ other."""
        if other.tgt != self.src:
            raise TorusError("composition mismatch")
        ctx = _any_ctx(self, other)
        out = {}
        for label in set(self.blocks) & set(other.blocks):
            out[label] = self.blocks[label].mul(other.blocks[label])
        return TorusMorphism(other.src, self.tgt, out)


def _any_ctx(*mors):
    for m in mors:
        for blk in m.blocks.values():
            return blk.ctx
    return None


def _require_odd(p):
    if p % 2 == 0:
        raise TorusError("torus base change requires odd p")


def nm_obj(F):
    """Norm to the diagonal: (n_1,...,n_p) -> (s,...,s) with s the sum."""
    _require_odd(F.rank)
    out = {}
    for label, mult in F.support.items():
        s = sum(label)
        diag = tuple([s] * F.rank)
        out[diag] = out.get(diag, 0) + mult
    return TorusParityObj(F.rank, out)


def bc_obj(F):
    """Base change on objects: labels map by coordinate sum."""
    _require_odd(F.rank)
    out = {}
    for label, mult in F.support.items():
        s = (sum(label),)
        out[s] = out.get(s, 0) + mult
    return TorusParityObj(1, out)


def bc_mor(phi, ctx):
    """Base change on morphisms: blocks pass entrywise through
    lambda -> frobenius_inv(lambda^p) (the identity, computed honestly),
    then merge along the label sum, ordered by source label."""
    p = phi.src.rank
    _require_odd(p)
    if ctx.p != p:
        raise TorusError("morphism base change needs char k = p")
    src, tgt = bc_obj(phi.src), bc_obj(phi.tgt)

    def net(x):
        return ctx.frobenius_inv(ctx.pow(x, p))

    grouped = {}
    for label in sorted(set(phi.src.support) | set(phi.tgt.support)):
        s = (sum(label),)
        r = phi.tgt.support.get(label, 0)
        c = phi.src.support.get(label, 0)
        blk = phi.blocks.get(label, Mat.zero(ctx, r, c))
        grouped.setdefault(s, []).append(blk.entrywise(net))
    blocks = {}
    for s, blks in grouped.items():
        blocks[s] = block_diag(ctx, blks)
    return TorusMorphism(src, tgt, blocks)


def res_bc_oracle(labels_with_mult):
    """Character-restriction oracle: each (n_1,...,n_p) -> sum, multiplicity
    preserved. Input and output are multisets as dicts."""
    out = {}
    for label, mult in labels_with_mult.items():
        s = (sum(label),)
        out[s] = out.get(s, 0) + mult
    return out


def bc_matches_oracle(F):
    return bc_obj(F).support == res_bc_oracle(F.support)
