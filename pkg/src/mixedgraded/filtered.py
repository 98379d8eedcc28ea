"""Decreasing filtered complexes  ... → N_{p+1} → N_p → N_{p-1} → ...

A tower is stored on a window ``[lo, hi]``.  Below ``lo`` it is constant with
identity transitions.  Above ``hi`` it is either zero (``ZERO``) or constant
with identity transitions (``CONSTANT``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .chain import (ChainComplex, ChainMap, Layout, _cone_layout, cone, homology,
                    hom_chain, hom_layout, identity_map, is_acyclic, is_coconnective,
                    homology_basis, homology_coordinates, post_compose, pre_compose,
                    shift, tensor_chain, tensor_maps, zero_map)
from .errors import InvariantViolation, NotInHeart, UnsupportedInput
from .linalg import Matrix, quotient, rank

ZERO = "zero"
CONSTANT = "constant"


class FilteredComplex:
    __slots__ = ("lo", "hi", "_terms", "_trans", "above")

    def __init__(self, lo: int, hi: int, terms: Mapping[int, ChainComplex],
                 transitions: Mapping[int, ChainMap] | None = None, above: str = ZERO,
                 check: bool = True):
        if hi < lo:
            raise ValueError("empty window")
        if above not in (ZERO, CONSTANT):
            raise ValueError(f"unknown above flag {above!r}")
        self.lo, self.hi, self.above = int(lo), int(hi), above
        self._terms = {p: terms.get(p) or ChainComplex.zero() for p in range(self.lo, self.hi + 1)}
        self._trans = {}
        for p in range(self.lo, self.hi):
            f = (transitions or {}).get(p)
            if f is None:
                f = zero_map(self._terms[p + 1], self._terms[p])
            if f.source != self._terms[p + 1] or f.target != self._terms[p]:
                raise InvariantViolation("transition endpoints", f"weight {p}")
            self._trans[p] = f
        if check:
            self.validate()

    @property
    def window(self):
        return (self.lo, self.hi)

    def term(self, p: int) -> ChainComplex:
        if p < self.lo:
            return self._terms[self.lo]
        if p > self.hi:
            return ChainComplex.zero() if self.above == ZERO else self._terms[self.hi]
        return self._terms[p]

    def transition(self, p: int) -> ChainMap:
        """The map term(p+1) -> term(p)."""
        if self.lo <= p < self.hi:
            return self._trans[p]
        if p < self.lo:
            return identity_map(self._terms[self.lo])
        if self.above == CONSTANT:
            return identity_map(self._terms[self.hi])
        return zero_map(self.term(p + 1), self.term(p))

    def composite(self, p: int, q: int) -> ChainMap:
        """term(q) -> term(p) for q >= p."""
        if q < p:
            raise ValueError("composite needs q >= p")
        f = identity_map(self.term(q))
        for r in range(q - 1, p - 1, -1):
            f = self.transition(r) @ f
        return f

    def validate(self):
        for p, c in self._terms.items():
            try:
                c.validate()
            except InvariantViolation as exc:
                raise InvariantViolation(exc.law, f"weight {p}, {exc.where}") from None
        for p, f in self._trans.items():
            n = f.first_failure()
            if n is not None:
                raise InvariantViolation("transition commutes with d", f"weight {p}, degree {n}")
        return self

    def is_zero(self):
        return self.above == ZERO and all(c.is_zero() for c in self._terms.values())

    def extend(self, lo: int, hi: int) -> "FilteredComplex":
        """The same tower stored on a larger window."""
        lo, hi = min(lo, self.lo), max(hi, self.hi)
        terms = {p: self.term(p) for p in range(lo, hi + 1)}
        trans = {p: self.transition(p) for p in range(lo, hi)}
        return FilteredComplex(lo, hi, terms, trans, self.above, check=False)

    def __repr__(self):
        inner = ", ".join(f"{p}: {c.dims()}" for p, c in self._terms.items())
        return f"FilteredComplex([{self.lo}, {self.hi}], {{{inner}}}, above={self.above})"


@dataclass(frozen=True, eq=False)
class FilteredMap:
    """A strict map of towers: components commute with the transitions on the nose."""

    source: FilteredComplex
    target: FilteredComplex
    comps: dict = field(default_factory=dict)

    def window(self):
        return (min(self.source.lo, self.target.lo), max(self.source.hi, self.target.hi))

    def at(self, p) -> ChainMap:
        lo, hi = self.window()
        if p < lo:
            return self.at(lo)
        if p > hi:
            f = self.at(hi)
            s, t = self.source.term(p), self.target.term(p)
            if s == f.source and t == f.target:
                return f
            return zero_map(s, t)
        f = self.comps.get(p)
        return f if f is not None else zero_map(self.source.term(p), self.target.term(p))

    def validate(self):
        lo, hi = self.window()
        for p in range(lo, hi + 1):
            f = self.at(p)
            n = f.first_failure()
            if n is not None:
                raise InvariantViolation("chain map commutes with d", f"weight {p}, degree {n}")
        for p in range(lo - 1, hi + 1):
            left = self.target.transition(p) @ self.at(p + 1)
            right = self.at(p) @ self.source.transition(p)
            if left.comps != right.comps:
                raise InvariantViolation("filtered map commutes with transitions", f"weight {p}")
        return self


# ---------------------------------------------------------------- basic objects

def zero_tower() -> FilteredComplex:
    return FilteredComplex(0, 0, {}, {}, ZERO, check=False)


def unit_fil() -> FilteredComplex:
    """k^{≤0}: Q in degree 0 for p ≤ 0 and zero above."""
    return FilteredComplex(0, 0, {0: ChainComplex.point(0)}, {}, ZERO, check=False)


def constant_tower(c: ChainComplex) -> FilteredComplex:
    return FilteredComplex(0, 0, {0: c}, {}, CONSTANT, check=False)


def filtered_shift(m: FilteredComplex, k: int) -> FilteredComplex:
    """Degree shift applied to every term."""
    from .chain import shift_map
    terms = {p: shift(m.term(p), k) for p in range(m.lo, m.hi + 1)}
    trans = {p: shift_map(m.transition(p), k) for p in range(m.lo, m.hi)}
    return FilteredComplex(m.lo, m.hi, terms, trans, m.above, check=False)


def r_fil(g) -> FilteredComplex:
    """R(g): term p is g_{-p}[-2p] with zero transitions."""
    ws = g.weights()
    if not ws:
        return zero_tower()
    lo, hi = -ws[-1] - 1, -ws[0]
    terms = {p: shift(g.part(-p), -2 * p) for p in range(lo, hi + 1)}
    return FilteredComplex(lo, hi, terms, {}, ZERO, check=False)


def limit_infty(m: FilteredComplex) -> ChainComplex:
    """lim_{p→∞} N_p."""
    return ChainComplex.zero() if m.above == ZERO else m.term(m.hi)


def colimit_neg_infty(m: FilteredComplex) -> ChainComplex:
    """colim_{p→-∞} N_p, the underlying object."""
    return m.term(m.lo)


def is_complete(m: FilteredComplex) -> bool:
    return m.above == ZERO or is_acyclic(m.term(m.hi))


# ---------------------------------------------------------------- associated graded

def gr(m: FilteredComplex, p: int) -> ChainComplex:
    """gr_p = cone(N_{p+1} -> N_p)."""
    return cone(m.transition(p), check=False)


def gr_layout(m: FilteredComplex, p: int) -> Layout:
    """Blocks 't' (N_p) and 's' (N_{p+1} shifted up) of gr_p."""
    return _cone_layout(m.transition(p))


def connecting(m: FilteredComplex, p: int) -> ChainMap:
    """δ: gr_p -> gr_{p+1}[1], (a, b) ↦ (b, 0)."""
    src = gr(m, p)
    tgt = shift(gr(m, p + 1), 1)
    ls, lt = gr_layout(m, p), gr_layout(m, p + 1)
    comps = {}
    for n in src.degrees():
        if ls.has(n, "s") and lt.has(n - 1, "t"):
            comps[n] = lt.injection(n - 1, "t") @ ls.projection(n, "s")
    return ChainMap(src, tgt, comps)


def gr_support(m: FilteredComplex) -> list:
    """Weights whose gr need not be acyclic."""
    top = m.hi if m.above == ZERO else m.hi - 1
    return list(range(m.lo, top + 1))


def complete(m: FilteredComplex) -> FilteredComplex:
    """The completion: cofibre of the constant tower on lim N → N."""
    if m.above == ZERO:
        return m
    lim = m.term(m.hi)
    terms, trans, incl = {}, {}, {}
    for p in range(m.hi, m.lo - 1, -1):
        g = m.composite(p, m.hi)
        terms[p] = cone(g, check=False)
        incl[p] = (g, _cone_layout(g))
    for p in range(m.lo, m.hi):
        f = m.transition(p)
        (gs, ls), (gt, lt) = incl[p + 1], incl[p]
        comps = {}
        for n in terms[p + 1].degrees():
            parts = {("s", "s"): Matrix.identity(lim.dim(n - 1))}
            if m.term(p + 1).dim(n):
                parts[("t", "t")] = f.at(n)
            comps[n] = ls.matrix(lt, n, n, parts)
        trans[p] = ChainMap(terms[p + 1], terms[p], comps)
    return FilteredComplex(m.lo, m.hi, terms, trans, ZERO, check=False)


# ---------------------------------------------------------------- sums and quotients

def _sum(cs: Mapping) -> tuple[ChainComplex, Layout]:
    """Direct sum of keyed complexes with its layout."""
    lay = Layout()
    for key, c in cs.items():
        for n, k in c.dims().items():
            lay.add(n, key, k)
    diffs = {}
    for n in lay.degrees():
        parts = {(key, key): c.d(n) for key, c in cs.items() if c.dim(n) and c.dim(n - 1)}
        diffs[n] = lay.matrix(lay, n - 1, n, parts)
    return ChainComplex(lay.dims(), diffs, check=False), lay


def _sum_map(src, slay, tgt, tlay, parts: Mapping) -> ChainMap:
    """Assemble a map of sums from components {(target key, source key): ChainMap}."""
    comps = {}
    for n in src.degrees():
        blocks = {}
        for (tk, sk), f in parts.items():
            if slay.has(n, sk) and tlay.has(n, tk):
                blocks[(tk, sk)] = f.at(n)
        if blocks and tgt.dim(n):
            comps[n] = slay.matrix(tlay, n, n, blocks)
    return ChainMap(src, tgt, comps)


def _quotient_complex(c: ChainComplex, sigma: ChainMap):
    """c / im(sigma) with degree-wise projections Q and sections S."""
    qs, ss, dims = {}, {}, {}
    for n in c.degrees():
        q, s = quotient(c.dim(n), sigma.at(n))
        qs[n], ss[n] = q, s
        dims[n] = q.rows
    diffs = {}
    for n in c.degrees():
        if n - 1 in qs and dims[n] and dims[n - 1]:
            diffs[n] = qs[n - 1] @ c.d(n) @ ss[n]
    return ChainComplex(dims, diffs, check=False), qs, ss


def _is_injective(f: ChainMap) -> bool:
    return all(rank(f.at(n)) == k for n, k in f.source.dims().items())


# ---------------------------------------------------------------- tensor

def _irange(a, b, p):
    return range(min(a.lo, p - b.hi), max(a.hi, p - b.lo) + 1)


def _staircase(a: FilteredComplex, b: FilteredComplex, p: int):
    """Diagonal sum, its layout, and the quotient model of the colimit at weight p."""
    ir = list(_irange(a, b, p))
    diag, dlay = _sum({i: tensor_chain(a.term(i), b.term(p - i)) for i in ir})
    stair_terms = {i: tensor_chain(a.term(i), b.term(p + 1 - i)) for i in ir[1:]}
    stair, slay = _sum(stair_terms)
    parts = {}
    for i in ir[1:]:
        j = p + 1 - i
        parts[(i - 1, i)] = tensor_maps(a.transition(i - 1), identity_map(b.term(j)))
        parts[(i, i)] = -tensor_maps(identity_map(a.term(i)), b.transition(j - 1))
    sigma = _sum_map(stair, slay, diag, dlay, parts)
    quot, qs, ss = _quotient_complex(diag, sigma)
    return ir, diag, dlay, quot, qs, ss


def tensor_fil(a: FilteredComplex, b: FilteredComplex) -> FilteredComplex:
    """Day convolution (a⊗b)_p = colim_{i+j≥p} a_i ⊗ b_j, via the staircase cokernel.

    The staircase model is only homotopy-correct when transitions are
    injective; other inputs raise UnsupportedInput.
    """
    for name, m in (("left", a), ("right", b)):
        for p in range(m.lo, m.hi):
            if not _is_injective(m.transition(p)):
                raise UnsupportedInput(f"{name} tower has a non-injective transition at weight {p}")
    lo, hi = a.lo + b.lo, a.hi + b.hi
    above = ZERO if (a.above == ZERO and b.above == ZERO) else CONSTANT
    st = {p: _staircase(a, b, p) for p in range(lo, hi + 1)}
    terms = {p: st[p][3] for p in st}
    trans = {}
    for p in range(lo, hi):
        ir1, diag1, dlay1, _, _, ss1 = st[p + 1]
        ir0, diag0, dlay0, _, qs0, _ = st[p]
        parts = {}
        for i in ir1:
            j = p + 1 - i
            if i - 1 >= ir0[0]:
                parts[(i - 1, i)] = tensor_maps(a.transition(i - 1), identity_map(b.term(j)))
            else:
                parts[(i, i)] = tensor_maps(identity_map(a.term(i)), b.transition(j - 1))
        mid = _sum_map(diag1, dlay1, diag0, dlay0, parts)
        comps = {}
        for n in terms[p + 1].degrees():
            if terms[p].dim(n):
                comps[n] = qs0[n] @ mid.at(n) @ ss1[n]
        trans[p] = ChainMap(terms[p + 1], terms[p], comps)
    return FilteredComplex(lo, hi, terms, trans, above, check=False)


# ---------------------------------------------------------------- hom

def _hom_pieces(a, b, p, qs):
    """Sum of Hom(a_q, b_{p+q}) and sum of Hom(a_{q+1}, b_{p+q}) with the difference map."""
    big, blay = _sum({q: hom_chain(a.term(q), b.term(p + q)) for q in qs})
    small, slay = _sum({q: hom_chain(a.term(q + 1), b.term(p + q)) for q in qs[:-1]})
    comps = {}
    for n in big.degrees():
        blocks = {}
        for q in qs[:-1]:
            src_q1 = a.term(q + 1)
            tgt_b = b.term(p + q)
            beta = b.transition(p + q)
            alpha = a.transition(q)
            lay_hi = hom_layout(src_q1, b.term(p + q + 1))
            lay_lo = hom_layout(a.term(q), tgt_b)
            lay_t = hom_layout(src_q1, tgt_b)
            # β∘φ_{q+1}
            if blay.has(n, q + 1) and slay.has(n, q):
                parts = {}
                for m, _ in lay_hi.blocks(n):
                    if lay_t.has(n, m):
                        parts[(m, m)] = post_compose(beta.at(m + n), src_q1.dim(m))
                blocks[(q, q + 1)] = lay_hi.matrix(lay_t, n, n, parts)
            # -φ_q∘α
            if blay.has(n, q) and slay.has(n, q):
                parts = {}
                for m, _ in lay_lo.blocks(n):
                    if lay_t.has(n, m):
                        parts[(m, m)] = -pre_compose(alpha.at(m), tgt_b.dim(m + n))
                blocks[(q, q)] = lay_lo.matrix(lay_t, n, n, parts)
        if blocks and small.dim(n):
            comps[n] = blay.matrix(slay, n, n, blocks)
    return big, blay, small, slay, ChainMap(big, small, comps)


def _post_beta(a, b, p, qs, src, slay, tgt, tlay, shift_q):
    """Post-composition with the b-transitions from weight p+1 pieces to weight p pieces."""
    comps = {}
    for n in src.degrees():
        blocks = {}
        for q in qs:
            if not slay.has(n, q):
                continue
            aq = a.term(q + shift_q)
            lay_s = hom_layout(aq, b.term(p + 1 + q))
            lay_t = hom_layout(aq, b.term(p + q))
            beta = b.transition(p + q)
            parts = {}
            for m, _ in lay_s.blocks(n):
                if lay_t.has(n, m):
                    parts[(m, m)] = post_compose(beta.at(m + n), aq.dim(m))
            blocks[(q, q)] = lay_s.matrix(lay_t, n, n, parts)
        if blocks and tgt.dim(n):
            comps[n] = slay.matrix(tlay, n, n, blocks)
    return ChainMap(src, tgt, comps)


def hom_fil(a: FilteredComplex, b: FilteredComplex) -> FilteredComplex:
    """Internal hom: weight p is the end of Hom(a_q, b_{p+q}) over q.

    Each weight is modelled as the fibre of the difference map between the two
    products of a homotopy end, taken over a q range outside of which both
    towers are constant.
    """
    lo = b.lo - a.hi - 1
    hi = b.hi - a.lo + 1
    qs = list(range(min(a.lo, b.lo - hi) - 1, max(a.hi, b.hi - lo) + 2))
    pieces = {p: _hom_pieces(a, b, p, qs) for p in range(lo, hi + 1)}
    terms = {p: shift(cone(pc[4], check=False), -1) for p, pc in pieces.items()}
    trans = {}
    for p in range(lo, hi):
        big1, blay1, small1, slay1, d1 = pieces[p + 1]
        big0, blay0, small0, slay0, d0 = pieces[p]
        tb = _post_beta(a, b, p, qs, big1, blay1, big0, blay0, 0)
        ts = _post_beta(a, b, p, qs[:-1], small1, slay1, small0, slay0, 1)
        l1, l0 = _cone_layout(d1), _cone_layout(d0)
        comps = {}
        for n in terms[p + 1].degrees():
            # fibre degree n is cone degree n + 1
            parts = {}
            if l1.has(n + 1, "t") and l0.has(n + 1, "t"):
                parts[("t", "t")] = ts.at(n + 1)
            if l1.has(n + 1, "s") and l0.has(n + 1, "s"):
                parts[("s", "s")] = tb.at(n)
            if parts and terms[p].dim(n):
                comps[n] = l1.matrix(l0, n + 1, n + 1, parts)
        trans[p] = ChainMap(terms[p + 1], terms[p], comps)
    above = ZERO if b.above == ZERO else CONSTANT
    return FilteredComplex(lo, hi, terms, trans, above, check=False)


# ---------------------------------------------------------------- Beilinson t-structure

def beilinson_truncate(m: FilteredComplex, direction: str, n: int) -> FilteredComplex:
    from .bridge import beilinson_truncate as _bt
    return _bt(m, direction, n)


def heart_obstruction(m: FilteredComplex):
    """None when m lies in the Beilinson heart, else a reason string."""
    if m.above == CONSTANT and not is_acyclic(m.term(m.hi)):
        return "limit is not zero"
    for p in range(m.lo, m.hi + 1):
        if not is_coconnective(m.term(p), -p):
            return f"term {p} has homology above degree {-p}"
        h = homology(gr(m, p))
        bad = [k for k in h.betti if k != -p]
        if bad:
            return f"gr_{p} has homology in degree {bad[0]}, expected only {-p}"
    return None


def beilinson_heart_to_chain(m: FilteredComplex) -> ChainComplex:
    """C_{-p} = H_{-p}(gr_p) with differential induced by the negated connecting map."""
    why = heart_obstruction(m)
    if why is not None:
        raise NotInHeart(why)
    reps = {}
    for p in gr_support(m):
        g = gr(m, p)
        reps[p] = (g,) + homology_basis(g, -p, prefer="right")
    dims = {-p: r[1].cols for p, r in reps.items()}
    diffs = {}
    for p, (g, rp, _) in reps.items():
        if p + 1 not in reps or not rp.cols or not reps[p + 1][1].cols:
            continue
        delta = connecting(m, p)
        _, rq, bq = reps[p + 1]
        img = -(delta.at(-p) @ rp)
        diffs[-p] = homology_coordinates(rq, bq, img)
    return ChainComplex(dims, diffs)


def chain_to_beilinson_heart(c: ChainComplex) -> FilteredComplex:
    """The stupid filtration N_p = σ_{≤ -p} C."""
    span = c.span()
    if span is None:
        return zero_tower()
    lo, hi = -span[1], -span[0]

    def stupid(p):
        dims = {k: v for k, v in c.dims().items() if k <= -p}
        return ChainComplex(dims, {k: c.d(k) for k in dims if k - 1 in dims}, check=False)

    terms = {p: stupid(p) for p in range(lo, hi + 1)}
    trans = {}
    for p in range(lo, hi):
        s, t = terms[p + 1], terms[p]
        trans[p] = ChainMap(s, t, {k: Matrix.identity(v) for k, v in s.dims().items()})
    return FilteredComplex(lo, hi, terms, trans, ZERO, check=False)
