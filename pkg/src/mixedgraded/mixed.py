"""Mixed graded complexes.

A mixed complex is a graded complex with a square-zero operator ``ε`` sending
``(M_p)_n`` to ``(M_{p-1})_{n+1}``.  Internally ``dε + εd = 0``; the commuting
presentation is available through :func:`convert_convention`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import mutations
from .chain import (ChainComplex, ChainMap, Layout, homology, is_quasi_iso,
                    post_compose, pre_compose, shift)
from .errors import InvariantViolation
from .graded import (GradedComplex, GradedMap, _hom_diff, _tensor_diff, hom_layouts,
                     tensor_layouts, weight_shift as _graded_weight_shift)
from .linalg import Matrix

ANTICOMMUTING = "anticommuting"
COMMUTING = "commuting"


class MixedComplex:
    __slots__ = ("graded", "_eps")

    def __init__(self, graded: GradedComplex, eps: Mapping | None = None, check: bool = True):
        self.graded = graded
        clean: dict[int, dict[int, Matrix]] = {}
        for p, byn in (eps or {}).items():
            for n, m in byn.items():
                src = graded.part(p).dim(n)
                tgt = graded.part(p - 1).dim(n + 1)
                if m.shape != (tgt, src):
                    raise InvariantViolation("ε shape", f"weight {p}, degree {n}",
                                             f"got {m.shape}, expected {(tgt, src)}")
                if not m.is_zero():
                    clean.setdefault(int(p), {})[int(n)] = m
        self._eps = clean
        if check:
            rep = validate_mixed(self)
            if not rep.ok:
                raise InvariantViolation(rep.law, rep.where)

    def part(self, p) -> ChainComplex:
        return self.graded.part(p)

    def weights(self):
        return self.graded.weights()

    def eps(self, p, n) -> Matrix:
        m = self._eps.get(p, {}).get(n)
        if m is None:
            return Matrix.zeros(self.part(p - 1).dim(n + 1), self.part(p).dim(n))
        return m

    def eps_items(self):
        for p in sorted(self._eps):
            for n in sorted(self._eps[p]):
                yield p, n, self._eps[p][n]

    def eps_dict(self):
        return {p: dict(v) for p, v in self._eps.items()}

    def is_zero(self):
        return self.graded.is_zero()

    def total_dim(self):
        return self.graded.total_dim()

    def validate(self):
        rep = validate_mixed(self)
        if not rep.ok:
            raise InvariantViolation(rep.law, rep.where)
        return self

    def __eq__(self, other):
        if not isinstance(other, MixedComplex):
            return NotImplemented
        return self.graded == other.graded and self._eps == other._eps

    __hash__ = None

    def __repr__(self):
        return f"MixedComplex({self.graded!r}, eps at {sorted(self._eps)})"


@dataclass(frozen=True)
class MixedReport:
    ok: bool
    law: str = ""
    weight: int | None = None
    degree: int | None = None

    @property
    def where(self):
        if self.weight is None:
            return None
        return f"weight {self.weight}, degree {self.degree}"

    def __bool__(self):
        return self.ok


def validate_mixed(m: MixedComplex, convention: str = ANTICOMMUTING) -> MixedReport:
    """Check d² = 0, ε² = 0 and the d/ε relation; report the first failure."""
    g = m.graded
    for p in g.weights():
        c = g.part(p)
        for n in c.degrees():
            if c.dim(n - 2) and not (c.d(n - 1) @ c.d(n)).is_zero():
                return MixedReport(False, "d∘d = 0", p, n)
    for p in sorted(set(g.weights())):
        c, c1 = g.part(p), g.part(p - 1)
        for n in c.degrees():
            e = m.eps(p, n)
            if g.part(p - 2).dim(n + 2) and not (m.eps(p - 1, n + 1) @ e).is_zero():
                return MixedReport(False, "ε∘ε = 0", p, n)
            lhs = c1.d(n + 1) @ e
            rhs = m.eps(p, n - 1) @ c.d(n)
            bad = (lhs + rhs) if convention == ANTICOMMUTING else (lhs - rhs)
            if not bad.is_zero():
                law = "dε + εd = 0" if convention == ANTICOMMUTING else "dε = εd"
                return MixedReport(False, law, p, n)
    return MixedReport(True)


def convert_convention(m: MixedComplex, source: str, target: str) -> MixedComplex:
    """Multiply ε by (-1)^n on degree-n inputs when the conventions differ."""
    rep = validate_mixed(m, convention=source)
    if not rep.ok:
        raise InvariantViolation(rep.law, rep.where, f"input is not valid in the {source} convention")
    if source == target:
        return m
    eps = {p: {n: e.scale(-1 if n % 2 else 1) for n, e in byn.items()}
           for p, byn in m.eps_dict().items()}
    out = MixedComplex(m.graded, eps, check=False)
    rep = validate_mixed(out, convention=target)
    if not rep.ok:
        raise InvariantViolation(rep.law, rep.where)
    return out


@dataclass(frozen=True, eq=False)
class MixedMap:
    source: MixedComplex
    target: MixedComplex
    comps: dict = field(default_factory=dict)   # weight -> ChainMap

    def at(self, p) -> ChainMap:
        f = self.comps.get(p)
        if f is None:
            return ChainMap(self.source.part(p), self.target.part(p), {})
        return f

    def weights(self):
        return sorted(set(self.source.weights()) | set(self.target.weights()))

    def first_failure(self):
        for p in self.weights():
            f = self.at(p)
            n = f.first_failure()
            if n is not None:
                return ("commutes with d", p, n)
            for n in self.source.part(p).degrees():
                lhs = self.at(p - 1).at(n + 1) @ self.source.eps(p, n)
                rhs = self.target.eps(p, n) @ f.at(n)
                if lhs != rhs:
                    return ("commutes with ε", p, n)
        return None

    def validate(self):
        bad = self.first_failure()
        if bad is not None:
            raise InvariantViolation(bad[0], f"weight {bad[1]}, degree {bad[2]}")
        return self

    def is_weightwise_quasi_iso(self):
        return all(is_quasi_iso(self.at(p)) for p in self.weights())


# ---------------------------------------------------------------- basic objects

def oblv(m: MixedComplex) -> GradedComplex:
    return m.graded


def triv(g: GradedComplex) -> MixedComplex:
    return MixedComplex(g, {}, check=False)


def unit_mixed(q: int = 0, n: int = 0) -> MixedComplex:
    """k(q)[n] with trivial mixed structure."""
    return triv(GradedComplex({q: ChainComplex.point(n)}))


def zero_mixed() -> MixedComplex:
    return triv(GradedComplex())


def mixed_weight_shift(m: MixedComplex, q: int) -> MixedComplex:
    return MixedComplex(_graded_weight_shift(m.graded, q),
                        {p + q: byn for p, byn in m.eps_dict().items()}, check=False)


def mixed_shift(m: MixedComplex, k: int) -> MixedComplex:
    """Degree shift; both d and ε pick up (-1)^k."""
    sign = -1 if k % 2 else 1
    g = GradedComplex({p: shift(c, k) for p, c in m.graded.parts().items()})
    eps = {p: {n + k: e.scale(sign) for n, e in byn.items()} for p, byn in m.eps_dict().items()}
    return MixedComplex(g, eps, check=False)


def l_eps(g: GradedComplex) -> MixedComplex:
    """(L g)_p = g_p ⊕ g_{p+1}[1]; ε identifies g_p with the shifted summand one weight down."""
    parts, eps = {}, {}
    ws = sorted(set(g.weights()) | {p - 1 for p in g.weights()})
    lays = {}
    for p in ws:
        a, b = g.part(p), shift(g.part(p + 1), 1)
        lay = Layout()
        for n in sorted(set(a.degrees()) | set(b.degrees())):
            lay.add(n, "g", a.dim(n))
            lay.add(n, "s", b.dim(n))
        lays[p] = lay
        parts[p] = ChainComplex(lay.dims(), {n: lay.matrix(lay, n - 1, n, {("g", "g"): a.d(n), ("s", "s"): b.d(n)})
                                             for n in lay.degrees()}, check=False)
    for p in ws:
        src = g.part(p)
        if p - 1 not in lays:
            continue
        for n in src.degrees():
            e = lays[p].matrix(lays[p - 1], n + 1, n, {("s", "g"): Matrix.identity(src.dim(n))})
            eps.setdefault(p, {})[n] = e
    return MixedComplex(GradedComplex(parts), eps)


def r_eps(g: GradedComplex) -> MixedComplex:
    """(R g)_p = g_p ⊕ g_{p-1}[-1]; ε identifies the shifted summand with g_{p-1}."""
    parts, eps = {}, {}
    ws = sorted(set(g.weights()) | {p + 1 for p in g.weights()})
    lays = {}
    for p in ws:
        a, b = g.part(p), shift(g.part(p - 1), -1)
        lay = Layout()
        for n in sorted(set(a.degrees()) | set(b.degrees())):
            lay.add(n, "g", a.dim(n))
            lay.add(n, "s", b.dim(n))
        lays[p] = lay
        parts[p] = ChainComplex(lay.dims(), {n: lay.matrix(lay, n - 1, n, {("g", "g"): a.d(n), ("s", "s"): b.d(n)})
                                             for n in lay.degrees()}, check=False)
    for p in ws:
        if p - 1 not in lays:
            continue
        src = g.part(p - 1)
        for n in src.degrees():
            # (g_{p-1}[-1])_{n-1} = (g_{p-1})_n in weight p, to (g_{p-1})_n in weight p-1
            e = lays[p].matrix(lays[p - 1], n, n - 1, {("g", "s"): Matrix.identity(src.dim(n))})
            eps.setdefault(p, {})[n - 1] = e
    return MixedComplex(GradedComplex(parts), eps)


def free_mixed(c: ChainComplex, q: int) -> MixedComplex:
    """Free_ε(c)((q)): c in weight q, c[1] in weight q-1, ε the identity."""
    g = GradedComplex({q: c, q - 1: shift(c, 1)})
    eps = {q: {n: Matrix.identity(c.dim(n)) for n in c.degrees()}}
    return MixedComplex(g, eps)


# ---------------------------------------------------------------- tensor, hom

def tensor_mixed(a: MixedComplex, b: MixedComplex) -> MixedComplex:
    """ε(x⊗y) = εx⊗y + (-1)^|x| x⊗εy on each summand a_i ⊗ b_j."""
    lays = tensor_layouts(a.graded, b.graded)
    parts = {}
    for p, lay in lays.items():
        parts[p] = ChainComplex(lay.dims(),
                                {n: _tensor_diff(a.graded, b.graded, p, lay, n) for n in lay.degrees()},
                                check=False)
    koszul = not mutations.active("tensor-eps-sign")
    eps = {}
    for p, lay in lays.items():
        tgt = lays.get(p - 1)
        if tgt is None:
            continue
        for n in lay.degrees():
            blocks = {}
            for (i, di), _ in lay.blocks(n):
                j, dj = p - i, n - di
                ea = a.eps(i, di)
                if ea.rows:
                    blocks[((i - 1, di + 1), (i, di))] = ea.kron(Matrix.identity(b.part(j).dim(dj)))
                eb = b.eps(j, dj)
                if eb.rows:
                    sign = -1 if (koszul and di % 2) else 1
                    blocks[((i, di), (i, di))] = Matrix.identity(a.part(i).dim(di)).kron(eb).scale(sign)
            if blocks:
                eps.setdefault(p, {})[n] = lay.matrix(tgt, n + 1, n, blocks)
    return MixedComplex(GradedComplex(parts), eps, check=False)


def hom_mixed(a: MixedComplex, b: MixedComplex) -> MixedComplex:
    """Internal hom; ε(φ) = ε_b∘φ - (-1)^|φ| φ∘ε_a."""
    lays = hom_layouts(a.graded, b.graded)
    parts = {}
    for p, lay in lays.items():
        parts[p] = ChainComplex(lay.dims(),
                                {n: _hom_diff(a.graded, b.graded, p, lay, n) for n in lay.degrees()},
                                check=False)
    eps = {}
    for p, lay in lays.items():
        tgt = lays.get(p - 1)
        if tgt is None:
            continue
        for n in lay.degrees():
            sign = 1 if n % 2 else -1
            blocks = {}
            for (q, m), _ in lay.blocks(n):
                ca, cb = a.part(q), b.part(q + p)
                eb = b.eps(q + p, m + n)
                if eb.rows:
                    blocks[((q, m), (q, m))] = post_compose(eb, ca.dim(m))
                ea = a.eps(q + 1, m - 1)
                if ea.cols:
                    blocks[((q + 1, m - 1), (q, m))] = pre_compose(ea, cb.dim(m + n)).scale(sign)
            if blocks:
                eps.setdefault(p, {})[n] = lay.matrix(tgt, n + 1, n, blocks)
    return MixedComplex(GradedComplex(parts), eps, check=False)


# ---------------------------------------------------------------- totalization

def totalize(m: MixedComplex, weights: Iterable[int], base: int = 0):
    """Total complex of ⊕_{w} M_w placed so (M_w)_k sits in degree k + 2(w - base).

    The differential is d + ε between the selected weights.  Returns the
    complex and its layout (blocks keyed by weight).
    """
    ws = sorted(w for w in set(weights) if not m.part(w).is_zero())
    lay = Layout()
    for w in ws:
        c = m.part(w)
        for k in c.degrees():
            lay.add(k + 2 * (w - base), w, c.dim(k))
    wset = set(ws)
    diffs = {}
    for N in lay.degrees():
        blocks = {}
        for w, _ in lay.blocks(N):
            k = N - 2 * (w - base)
            c = m.part(w)
            if c.dim(k - 1):
                blocks[(w, w)] = c.d(k)
            if w - 1 in wset:
                e = m.eps(w, k)
                if e.rows:
                    blocks[(w - 1, w)] = e
        diffs[N] = lay.matrix(lay, N - 1, N, blocks)
    return ChainComplex(lay.dims(), diffs, check=False), lay


def realization(m: MixedComplex) -> ChainComplex:
    """|m|: total complex of ⊕_{p≥0} M_{-p}[-2p]."""
    return totalize(m, [w for w in m.weights() if w <= 0])[0]


def tate_realization(m: MixedComplex) -> ChainComplex:
    """|m|^t: the same totalization over every weight."""
    return totalize(m, m.weights())[0]


def mapping_complex(a: MixedComplex, b: MixedComplex) -> ChainComplex:
    """Derived mapping complex Map(a, b) = |Hom(a, b)|."""
    return realization(hom_mixed(a, b))


def ncw(m: MixedComplex, weights: Iterable[int] | None = None) -> GradedComplex:
    """Weighted negative cyclic complex, NC^w(m)_p = |m((-p))|, on a window of weights."""
    if weights is None:
        span = m.graded.weight_span()
        weights = [] if span is None else range(span[0], span[1] + 1)
    return GradedComplex({p: totalize(m, [w for w in m.weights() if w <= p], base=p)[0]
                          for p in weights})


# ---------------------------------------------------------------- truncations

def _norm_dir(direction):
    if direction in ("<=", "≤", "le"):
        return "le"
    if direction in (">=", "≥", "ge"):
        return "ge"
    raise ValueError(f"unknown direction {direction!r}")


def naive_truncate(m: MixedComplex, direction: str, p: int) -> MixedComplex:
    d = _norm_dir(direction)
    keep = (lambda w: w <= p) if d == "le" else (lambda w: w >= p)
    g = GradedComplex({w: c for w, c in m.graded.parts().items() if keep(w)})
    eps = {w: byn for w, byn in m.eps_dict().items() if keep(w) and keep(w - 1)}
    return MixedComplex(g, eps, check=False)


def clever_truncate(m: MixedComplex, direction: str, p: int) -> MixedComplex:
    """θ_{≤p} (left adjoint) or θ_{≥p} (right adjoint) to the weight-window inclusions.

    θ_{≤p} replaces weight p by the total complex of ⊕_{j≥0} M_{p+j}[2j];
    θ_{≥p} replaces it by the total complex of ⊕_{j≥0} M_{p-j}[-2j].
    """
    d = _norm_dir(direction)
    if d == "le":
        tot, lay = totalize(m, [w for w in m.weights() if w >= p], base=p)
        parts = {w: c for w, c in m.graded.parts().items() if w < p}
        parts[p] = tot
        eps = {w: byn for w, byn in m.eps_dict().items() if w < p}
        tgt = m.part(p - 1)
        for N in lay.degrees():
            if lay.has(N, p) and tgt.dim(N + 1):
                e = m.eps(p, N) @ lay.projection(N, p)
                if not e.is_zero():
                    eps.setdefault(p, {})[N] = e
    else:
        tot, lay = totalize(m, [w for w in m.weights() if w <= p], base=p)
        parts = {w: c for w, c in m.graded.parts().items() if w > p}
        parts[p] = tot
        eps = {w: byn for w, byn in m.eps_dict().items() if w > p + 1}
        src = m.part(p + 1)
        for n in src.degrees():
            if lay.has(n + 1, p):
                e = lay.injection(n + 1, p) @ m.eps(p + 1, n)
                if not e.is_zero():
                    eps.setdefault(p + 1, {})[n] = e
    return MixedComplex(GradedComplex(parts), eps, check=False)


# ---------------------------------------------------------------- duality

def dual(m: MixedComplex) -> MixedComplex:
    return hom_mixed(m, unit_mixed(0, 0))


def duality_comparison(m: MixedComplex, n: MixedComplex) -> MixedMap:
    """The strict map m^∨ ⊗ n -> Hom(m, n), φ⊗y ↦ (-1)^{|φ||y|} y·φ."""
    dm = dual(m)
    src = tensor_mixed(dm, n)
    tgt = hom_mixed(m, n)
    slays = tensor_layouts(dm.graded, n.graded)
    tlays = hom_layouts(m.graded, n.graded)
    comps = {}
    for p, slay in slays.items():
        tlay = tlays.get(p)
        mats = {}
        for N in slay.degrees():
            rows = tlay.dim(N) if tlay else 0
            data = {}
            for (i, di), size in slay.blocks(N):
                q, k = -i, -di                       # φ ∈ Hom((m_q)_k, Q)
                dm_dim = m.part(q).dim(k)
                r = p - i                            # y ∈ (n_r)_{N - di}
                dy = N - di
                dn_dim = n.part(r).dim(dy)
                off_s = slay.offset(N, (i, di))
                off_t = tlay.offset(N, (q, k))
                sign = -1 if (di * dy) % 2 else 1
                for c in range(dm_dim):
                    for rr in range(dn_dim):
                        data[(off_t + rr * dm_dim + c, off_s + c * dn_dim + rr)] = sign
            mats[N] = Matrix(rows, slay.dim(N), data)
        comps[p] = ChainMap(src.part(p), tgt.part(p), mats)
    return MixedMap(src, tgt, comps)


def dualizability_check(m: MixedComplex, n: MixedComplex) -> bool:
    f = duality_comparison(m, n)
    if f.first_failure() is not None:
        return False
    return f.is_weightwise_quasi_iso()
