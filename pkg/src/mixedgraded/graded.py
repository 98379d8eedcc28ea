"""Graded complexes: finitely supported families of chain complexes indexed by weight."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .chain import ChainComplex, ChainMap, HomologyTable, Layout, homology, shift
from .chain import post_compose, pre_compose
from .errors import InvariantViolation
from .linalg import Matrix


class GradedComplex:
    __slots__ = ("_parts",)

    def __init__(self, parts: Mapping[int, ChainComplex] | None = None):
        self._parts = {int(p): c for p, c in (parts or {}).items() if not c.is_zero()}

    def part(self, p: int) -> ChainComplex:
        return self._parts.get(p) or ChainComplex.zero()

    def parts(self) -> dict:
        return dict(self._parts)

    def weights(self) -> list:
        return sorted(self._parts)

    def weight_span(self):
        if not self._parts:
            return None
        return (min(self._parts), max(self._parts))

    def is_zero(self):
        return not self._parts

    def validate(self):
        for p, c in self._parts.items():
            try:
                c.validate()
            except InvariantViolation as exc:
                raise InvariantViolation(exc.law, f"weight {p}, {exc.where}") from None
        return self

    def homology(self) -> dict:
        return {p: homology(c) for p, c in self._parts.items()}

    def total_dim(self):
        return sum(c.total_dim() for c in self._parts.values())

    def __eq__(self, other):
        if not isinstance(other, GradedComplex):
            return NotImplemented
        return self._parts == other._parts

    __hash__ = None

    def __repr__(self):
        inner = ", ".join(f"{p}: {c.dims()}" for p, c in sorted(self._parts.items()))
        return f"GradedComplex({{{inner}}})"


@dataclass(frozen=True, eq=False)
class GradedMap:
    source: GradedComplex
    target: GradedComplex
    comps: dict = field(default_factory=dict)

    def at(self, p) -> ChainMap:
        f = self.comps.get(p)
        if f is None:
            return ChainMap(self.source.part(p), self.target.part(p), {})
        return f

    def weights(self):
        return sorted(set(self.source.weights()) | set(self.target.weights()))

    def validate(self):
        for p in self.weights():
            f = self.at(p)
            n = f.first_failure()
            if n is not None:
                raise InvariantViolation("chain map commutes with d", f"weight {p}, degree {n}")
        return self


def weight_part(m: GradedComplex, p: int) -> ChainComplex:
    return m.part(p)


def insert_at_weight(c: ChainComplex, q: int) -> GradedComplex:
    return GradedComplex({q: c})


def unit_graded(q: int = 0, n: int = 0) -> GradedComplex:
    """k(q)[n]: Q in weight q and degree n."""
    return GradedComplex({q: ChainComplex.point(n)})


def weight_shift(m: GradedComplex, q: int) -> GradedComplex:
    """M((q))_p = M_{p-q}."""
    return GradedComplex({p + q: c for p, c in m.parts().items()})


def degree_shift(m: GradedComplex, k: int) -> GradedComplex:
    return GradedComplex({p: shift(c, k) for p, c in m.parts().items()})


def graded_sum(*ms: GradedComplex) -> GradedComplex:
    from .chain import direct_sum
    ws = sorted({p for m in ms for p in m.weights()})
    return GradedComplex({p: direct_sum(*(m.part(p) for m in ms)) for p in ws})


def homology_tables(m: GradedComplex) -> dict:
    """weight -> HomologyTable, dropping acyclic weights."""
    out = {}
    for p, c in m.parts().items():
        h = homology(c)
        if not h.is_zero():
            out[p] = h
    return out


# ---------------------------------------------------------------- tensor

def tensor_layouts(a: GradedComplex, b: GradedComplex) -> dict:
    """weight p -> Layout with blocks keyed (i, di): (a_i)_{di} ⊗ (b_{p-i})_{n-di}."""
    lays: dict[int, Layout] = {}
    for i, ca in a.parts().items():
        for j, cb in b.parts().items():
            lay = lays.setdefault(i + j, Layout())
            for di in ca.degrees():
                for dj in cb.degrees():
                    lay.add(di + dj, (i, di), ca.dim(di) * cb.dim(dj))
    return lays


def _tensor_diff(a, b, p, lay, n):
    parts = {}
    for (i, di), _ in lay.blocks(n):
        ca, cb = a.part(i), b.part(p - i)
        dj = n - di
        if ca.dim(di - 1):
            parts[((i, di - 1), (i, di))] = ca.d(di).kron(Matrix.identity(cb.dim(dj)))
        if cb.dim(dj - 1):
            parts[((i, di), (i, di))] = Matrix.identity(ca.dim(di)).kron(cb.d(dj)).scale(
                -1 if di % 2 else 1)
    return lay.matrix(lay, n - 1, n, parts)


def tensor_graded(a: GradedComplex, b: GradedComplex) -> GradedComplex:
    out = {}
    for p, lay in tensor_layouts(a, b).items():
        out[p] = ChainComplex(lay.dims(), {n: _tensor_diff(a, b, p, lay, n) for n in lay.degrees()},
                              check=False)
    return GradedComplex(out)


# ---------------------------------------------------------------- hom

def hom_layouts(a: GradedComplex, b: GradedComplex) -> dict:
    """weight p -> Layout with blocks keyed (q, m): Hom((a_q)_m, (b_{q+p})_{m+n})."""
    lays: dict[int, Layout] = {}
    for q, ca in a.parts().items():
        for r, cb in b.parts().items():
            lay = lays.setdefault(r - q, Layout())
            for m in ca.degrees():
                for k in cb.degrees():
                    lay.add(k - m, (q, m), ca.dim(m) * cb.dim(k))
    return lays


def _hom_diff(a, b, p, lay, n):
    sign = 1 if n % 2 else -1  # -(-1)^n
    parts = {}
    for (q, m), _ in lay.blocks(n):
        ca, cb = a.part(q), b.part(q + p)
        if cb.dim(m + n - 1):
            parts[((q, m), (q, m))] = post_compose(cb.d(m + n), ca.dim(m))
        if ca.dim(m + 1):
            parts[((q, m + 1), (q, m))] = pre_compose(ca.d(m + 1), cb.dim(m + n)).scale(sign)
    return lay.matrix(lay, n - 1, n, parts)


def hom_graded(a: GradedComplex, b: GradedComplex) -> GradedComplex:
    out = {}
    for p, lay in hom_layouts(a, b).items():
        out[p] = ChainComplex(lay.dims(), {n: _hom_diff(a, b, p, lay, n) for n in lay.degrees()},
                              check=False)
    return GradedComplex(out)
