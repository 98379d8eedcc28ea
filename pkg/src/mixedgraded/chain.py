"""Chain complexes of finite-dimensional Q-vector spaces.

Homological indexing: ``d_n`` maps degree ``n`` to degree ``n - 1``.  The shift
is ``(c[k])_n = c_{n-k}`` with differential ``(-1)^k d``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InvariantViolation
from .linalg import Matrix, column_space, kernel, quotient, rank, solve


class Layout:
    """Degree-wise direct-sum bookkeeping: degree -> ordered (key, size) blocks."""

    def __init__(self):
        self._blocks: dict[int, list] = {}
        self._offsets: dict[int, dict] = {}
        self._dims: dict[int, int] = {}

    def add(self, n: int, key, size: int):
        if size <= 0:
            return
        offs = self._offsets.setdefault(n, {})
        if key in offs:
            raise KeyError(f"duplicate block {key!r} in degree {n}")
        offs[key] = self._dims.get(n, 0)
        self._blocks.setdefault(n, []).append((key, size))
        self._dims[n] = self._dims.get(n, 0) + size

    def dim(self, n):
        return self._dims.get(n, 0)

    def dims(self):
        return dict(self._dims)

    def blocks(self, n):
        return list(self._blocks.get(n, []))

    def has(self, n, key):
        return key in self._offsets.get(n, {})

    def offset(self, n, key):
        return self._offsets[n][key]

    def size(self, n, key):
        for k, s in self._blocks.get(n, []):
            if k == key:
                return s
        return 0

    def degrees(self):
        return sorted(self._dims)

    def matrix(self, tgt: "Layout", n_tgt: int, n_src: int, parts: Mapping) -> Matrix:
        """Assemble a map from degree ``n_src`` of self to degree ``n_tgt`` of tgt.

        ``parts`` maps (target key, source key) -> Matrix; absent blocks are zero.
        """
        tb = tgt.blocks(n_tgt)
        sb = self.blocks(n_src)
        tix = {k: i for i, (k, _) in enumerate(tb)}
        six = {k: i for i, (k, _) in enumerate(sb)}
        blocks = {}
        for (tk, sk), m in parts.items():
            if tk not in tix or sk not in six:
                if m.rows and m.cols and not m.is_zero():
                    raise KeyError(f"block {(tk, sk)} outside layout")
                continue
            key = (tix[tk], six[sk])
            blocks[key] = blocks[key] + m if key in blocks else m
        return Matrix.assemble([s for _, s in tb], [s for _, s in sb], blocks)

    def injection(self, n, key) -> Matrix:
        size = self.size(n, key)
        off = self.offset(n, key)
        return Matrix(self.dim(n), size, {(off + i, i): 1 for i in range(size)})

    def projection(self, n, key) -> Matrix:
        return self.injection(n, key).T


class ChainComplex:
    """Bounded chain complex; ``dims`` and ``diffs`` store only nonzero data."""

    __slots__ = ("_dims", "_diffs")

    def __init__(self, dims: Mapping[int, int] | None = None,
                 diffs: Mapping[int, Matrix] | None = None, check: bool = True):
        self._dims = {int(n): int(k) for n, k in (dims or {}).items() if k}
        self._diffs = {}
        for n, m in (diffs or {}).items():
            n = int(n)
            if m.shape != (self.dim(n - 1), self.dim(n)):
                raise InvariantViolation("differential shape", f"degree {n}",
                                         f"got {m.shape}, expected {(self.dim(n - 1), self.dim(n))}")
            if not m.is_zero():
                self._diffs[n] = m
        if check:
            self.validate()

    @classmethod
    def zero(cls):
        return cls({}, {}, check=False)

    @classmethod
    def point(cls, n: int = 0, dim: int = 1):
        """Q^dim concentrated in degree n."""
        return cls({n: dim}, {}, check=False)

    def dim(self, n: int) -> int:
        return self._dims.get(n, 0)

    def dims(self) -> dict:
        return dict(self._dims)

    def d(self, n: int) -> Matrix:
        m = self._diffs.get(n)
        if m is None:
            return Matrix.zeros(self.dim(n - 1), self.dim(n))
        return m

    def diffs(self) -> dict:
        return dict(self._diffs)

    def degrees(self) -> list:
        return sorted(self._dims)

    def span(self):
        if not self._dims:
            return None
        return (min(self._dims), max(self._dims))

    def total_dim(self):
        return sum(self._dims.values())

    def is_zero(self):
        return not self._dims

    def validate(self):
        for n in self._diffs:
            if n - 1 in self._diffs:
                if not (self._diffs[n - 1] @ self._diffs[n]).is_zero():
                    raise InvariantViolation("d∘d = 0", f"degree {n}")
        return self

    def euler(self) -> int:
        return sum((-1) ** (n % 2) * k for n, k in self._dims.items())

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return self._dims == other._dims and self._diffs == other._diffs

    __hash__ = None

    def __repr__(self):
        return f"ChainComplex(dims={dict(sorted(self._dims.items()))})"


@dataclass(frozen=True, eq=False)
class ChainMap:
    """Degree-0 chain map; ``comps[n]`` has shape (dim target_n, dim source_n)."""

    source: ChainComplex
    target: ChainComplex
    comps: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for n, m in self.comps.items():
            if m.shape != (self.target.dim(n), self.source.dim(n)):
                raise InvariantViolation("chain map shape", f"degree {n}",
                                         f"got {m.shape}")
            if not m.is_zero():
                clean[n] = m
        object.__setattr__(self, "comps", clean)

    def at(self, n) -> Matrix:
        m = self.comps.get(n)
        if m is None:
            return Matrix.zeros(self.target.dim(n), self.source.dim(n))
        return m

    def degrees(self):
        return sorted(set(self.source.degrees()) | set(self.target.degrees()))

    def is_chain_map(self) -> bool:
        return self.first_failure() is None

    def first_failure(self):
        for n in self.degrees():
            if self.target.d(n) @ self.at(n) != self.at(n - 1) @ self.source.d(n):
                return n
        return None

    def validate(self):
        n = self.first_failure()
        if n is not None:
            raise InvariantViolation("chain map commutes with d", f"degree {n}")
        return self

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        degs = set(self.degrees()) | set(other.degrees())
        return ChainMap(other.source, self.target,
                        {n: self.at(n) @ other.at(n) for n in degs})

    def __add__(self, other):
        degs = set(self.degrees()) | set(other.degrees())
        return ChainMap(self.source, self.target, {n: self.at(n) + other.at(n) for n in degs})

    def __neg__(self):
        return ChainMap(self.source, self.target, {n: -m for n, m in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (isinstance(other, ChainMap) and self.source == other.source
                and self.target == other.target and self.comps == other.comps)

    __hash__ = None


def identity_map(c: ChainComplex) -> ChainMap:
    return ChainMap(c, c, {n: Matrix.identity(k) for n, k in c.dims().items()})


def zero_map(a: ChainComplex, b: ChainComplex) -> ChainMap:
    return ChainMap(a, b, {})


def scalar_map(c: ChainComplex, s) -> ChainMap:
    return ChainMap(c, c, {n: Matrix.scalar(k, s) for n, k in c.dims().items()})


# ---------------------------------------------------------------- homology

@dataclass(frozen=True)
class HomologyTable:
    betti: dict

    def __post_init__(self):
        object.__setattr__(self, "betti", {n: b for n, b in sorted(self.betti.items()) if b})

    def __getitem__(self, n):
        return self.betti.get(n, 0)

    def is_zero(self):
        return not self.betti

    def shifted(self, k):
        return HomologyTable({n + k: b for n, b in self.betti.items()})

    def lines(self):
        if not self.betti:
            return ["H = 0"]
        return [f"H_{n} = {b}" for n, b in self.betti.items()]

    def __str__(self):
        return "\n".join(self.lines())


def homology(c: ChainComplex) -> HomologyTable:
    ranks = {n: rank(m) for n, m in c.diffs().items()}
    return HomologyTable({n: k - ranks.get(n, 0) - ranks.get(n + 1, 0)
                          for n, k in c.dims().items()})


def is_acyclic(c: ChainComplex) -> bool:
    for n, k in c.dims().items():
        if k != rank(c.d(n)) + rank(c.d(n + 1)):
            return False
    return True


def cycles(c: ChainComplex, n: int, prefer: str = "left") -> Matrix:
    return kernel(c.d(n), prefer=prefer)


def boundaries(c: ChainComplex, n: int) -> Matrix:
    return column_space(c.d(n + 1))


def homology_basis(c: ChainComplex, n: int, prefer: str = "left"):
    """(reps, bounds): cycle representatives of a basis of H_n and a basis of B_n."""
    bounds = boundaries(c, n)
    z = cycles(c, n, prefer=prefer)
    if bounds.cols == 0:
        return z, bounds
    both = Matrix.hstack([bounds, z], rows=c.dim(n))
    from .linalg import reduce as _reduce
    red = _reduce(both)
    picks = [j - bounds.cols for j in red.pivots if j >= bounds.cols]
    reps = z.submatrix(list(range(z.rows)), picks)
    return reps, bounds


def homology_coordinates(reps: Matrix, bounds: Matrix, vectors: Matrix) -> Matrix:
    """Coordinates of the classes of cycle columns ``vectors`` in the basis ``reps``."""
    if reps.cols == 0:
        return Matrix.zeros(0, vectors.cols)
    both = Matrix.hstack([bounds, reps], rows=reps.rows)
    x = solve(both, vectors)
    if x is None:
        raise InvariantViolation("homology coordinates", None, "vector is not a cycle")
    return x.submatrix(list(range(bounds.cols, bounds.cols + reps.cols)),
                       list(range(vectors.cols)))


def induced_homology_map(f: ChainMap, n: int) -> Matrix:
    rs, _ = homology_basis(f.source, n)
    rt, bt = homology_basis(f.target, n)
    return homology_coordinates(rt, bt, f.at(n) @ rs)


def is_quasi_iso(f: ChainMap) -> bool:
    f.validate()
    hs, ht = homology(f.source), homology(f.target)
    if hs != ht:
        return False
    for n, b in hs.betti.items():
        if rank(induced_homology_map(f, n)) != b:
            return False
    return True


# ---------------------------------------------------------------- shift, cone

def shift(c: ChainComplex, k: int) -> ChainComplex:
    sign = -1 if k % 2 else 1
    return ChainComplex({n + k: v for n, v in c.dims().items()},
                        {n + k: m.scale(sign) for n, m in c.diffs().items()}, check=False)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(shift(f.source, k), shift(f.target, k),
                    {n + k: m for n, m in f.comps.items()})


def direct_sum(*cs: ChainComplex) -> ChainComplex:
    lay = Layout()
    for i, c in enumerate(cs):
        for n, k in c.dims().items():
            lay.add(n, i, k)
    diffs = {}
    for n in lay.degrees():
        parts = {(i, i): c.d(n) for i, c in enumerate(cs) if c.dim(n) and c.dim(n - 1)}
        m = lay.matrix(lay, n - 1, n, parts)
        diffs[n] = m
    return ChainComplex(lay.dims(), diffs, check=False)


def _cone_layout(f: ChainMap):
    lay = Layout()
    degs = set(f.target.degrees()) | {n + 1 for n in f.source.degrees()}
    for n in sorted(degs):
        lay.add(n, "t", f.target.dim(n))
        lay.add(n, "s", f.source.dim(n - 1))
    return lay


def cone(f: ChainMap, check: bool = True) -> ChainComplex:
    """cone(f)_n = target_n ⊕ source_{n-1}, d = [[d_t, f], [0, -d_s]]."""
    if check:
        f.validate()
    lay = _cone_layout(f)
    s, t = f.source, f.target
    diffs = {}
    for n in lay.degrees():
        parts = {("t", "t"): t.d(n), ("t", "s"): f.at(n - 1), ("s", "s"): -s.d(n - 1)}
        diffs[n] = lay.matrix(lay, n - 1, n, parts)
    return ChainComplex(lay.dims(), diffs, check=False)


def cone_inclusion(f: ChainMap) -> ChainMap:
    """The target summand inclusion target -> cone(f)."""
    lay = _cone_layout(f)
    c = cone(f, check=False)
    return ChainMap(f.target, c, {n: lay.injection(n, "t") for n in f.target.degrees()})


def cone_projection(f: ChainMap) -> ChainMap:
    """The projection cone(f) -> source[1]."""
    lay = _cone_layout(f)
    c = cone(f, check=False)
    src1 = shift(f.source, 1)
    return ChainMap(c, src1, {n: lay.projection(n, "s") for n in src1.degrees()})


def fiber(f: ChainMap) -> ChainComplex:
    return shift(cone(f), -1)


# ---------------------------------------------------------------- tensor, hom

def tensor_layout(a: ChainComplex, b: ChainComplex) -> Layout:
    lay = Layout()
    for i in a.degrees():
        for j in b.degrees():
            lay.add(i + j, (i, j), a.dim(i) * b.dim(j))
    return lay


def tensor_chain(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """(a⊗b)_n = ⊕ a_i⊗b_j with d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy."""
    lay = tensor_layout(a, b)
    diffs = {}
    for n in lay.degrees():
        parts = {}
        for (i, j), _ in lay.blocks(n):
            if a.dim(i - 1):
                parts[((i - 1, j), (i, j))] = a.d(i).kron(Matrix.identity(b.dim(j)))
            if b.dim(j - 1):
                parts[((i, j - 1), (i, j))] = Matrix.identity(a.dim(i)).kron(b.d(j)).scale(
                    -1 if i % 2 else 1)
        diffs[n] = lay.matrix(lay, n - 1, n, parts)
    return ChainComplex(lay.dims(), diffs, check=False)


def tensor_maps(f: ChainMap, g: ChainMap) -> ChainMap:
    src = tensor_chain(f.source, g.source)
    tgt = tensor_chain(f.target, g.target)
    ls = tensor_layout(f.source, g.source)
    lt = tensor_layout(f.target, g.target)
    comps = {}
    for n in ls.degrees():
        parts = {}
        for (i, j), _ in ls.blocks(n):
            if lt.has(n, (i, j)):
                parts[((i, j), (i, j))] = f.at(i).kron(g.at(j))
        comps[n] = ls.matrix(lt, n, n, parts)
    return ChainMap(src, tgt, comps)


def hom_layout(a: ChainComplex, b: ChainComplex) -> Layout:
    """Hom(a,b)_n = ⊕_m Hom(a_m, b_{m+n}); blocks keyed by m, row-major vec."""
    lay = Layout()
    for m in a.degrees():
        for k in b.degrees():
            lay.add(k - m, m, a.dim(m) * b.dim(k))
    return lay


def post_compose(g: Matrix, src_cols: int) -> Matrix:
    """Matrix of φ ↦ g∘φ on row-major vectorised φ with ``src_cols`` columns."""
    return g.kron(Matrix.identity(src_cols))


def pre_compose(h: Matrix, tgt_rows: int) -> Matrix:
    """Matrix of φ ↦ φ∘h on row-major vectorised φ with ``tgt_rows`` rows."""
    return Matrix.identity(tgt_rows).kron(h.T)


def hom_chain(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Internal hom with D φ = d∘φ - (-1)^|φ| φ∘d."""
    lay = hom_layout(a, b)
    diffs = {}
    for n in lay.degrees():
        sign = 1 if n % 2 else -1  # -(-1)^n
        parts = {}
        for m, _ in lay.blocks(n):
            if b.dim(m + n - 1):
                parts[(m, m)] = post_compose(b.d(m + n), a.dim(m))
            if a.dim(m + 1) and b.dim(m + n):
                # φ_m ∘ d_a lands in the block m+1 of degree n-1
                parts[(m + 1, m)] = pre_compose(a.d(m + 1), b.dim(m + n)).scale(sign)
        diffs[n] = lay.matrix(lay, n - 1, n, parts)
    return ChainComplex(lay.dims(), diffs, check=False)


def hom_element_to_map(a: ChainComplex, b: ChainComplex, n: int, vec) -> dict:
    """Unpack a vector of Hom(a,b)_n into blocks m -> Matrix a_m -> b_{m+n}."""
    lay = hom_layout(a, b)
    out = {}
    for m, size in lay.blocks(n):
        off = lay.offset(n, m)
        r, c = b.dim(m + n), a.dim(m)
        out[m] = Matrix(r, c, {(i, j): vec[off + i * c + j] for i in range(r) for j in range(c)})
    return out


def chain_maps_mod_homotopy(a: ChainComplex, b: ChainComplex) -> int:
    """dim of {chain maps a -> b} / {dh + hd}, by direct linear algebra."""
    degs = sorted(set(a.degrees()) | set(b.degrees()))
    # unknowns: f_n for each degree, flattened row-major
    fl, hl = Layout(), Layout()
    for n in degs:
        fl.add(0, n, b.dim(n) * a.dim(n))
        hl.add(0, n, b.dim(n + 1) * a.dim(n))
    eq = Layout()
    for n in degs:
        eq.add(0, n, b.dim(n - 1) * a.dim(n))
    parts = {}
    for n in degs:
        if not (b.dim(n - 1) and a.dim(n)):
            continue
        if fl.has(0, n):
            parts[(n, n)] = post_compose(b.d(n), a.dim(n))
        if fl.has(0, n - 1):
            parts[(n, n - 1)] = -pre_compose(a.d(n), b.dim(n - 1))
    constraint = fl.matrix(eq, 0, 0, parts)
    nmaps = fl.dim(0) - rank(constraint)
    hparts = {}
    for n in degs:
        if not (b.dim(n) and a.dim(n)):
            continue
        if hl.has(0, n):      # h_n: a_n -> b_{n+1}, then d_b
            hparts[(n, n)] = post_compose(b.d(n + 1), a.dim(n))
        if hl.has(0, n - 1):  # h_{n-1}: a_{n-1} -> b_n, after d_a
            hparts[(n, n - 1)] = pre_compose(a.d(n), b.dim(n))
    hmat = hl.matrix(fl, 0, 0, hparts)
    return nmaps - rank(hmat)


# ---------------------------------------------------------------- truncation

def truncate_ge(c: ChainComplex, n: int):
    """Kernel model τ_{≥n} with its inclusion into c."""
    dims, diffs, inc = {}, {}, {}
    k = kernel(c.d(n))
    for m in c.degrees():
        if m > n:
            dims[m] = c.dim(m)
            inc[m] = Matrix.identity(c.dim(m))
    dims[n] = k.cols
    inc[n] = k
    for m in dims:
        if m > n + 1:
            diffs[m] = c.d(m)
    if n + 1 in dims:
        x = solve(k, c.d(n + 1))
        diffs[n + 1] = x
    t = ChainComplex(dims, diffs, check=False)
    return t, ChainMap(t, c, {m: v for m, v in inc.items() if v.rows and v.cols})


def truncate_le(c: ChainComplex, n: int, sections: bool = False):
    """Cokernel model τ_{≤n} with the projection from c.

    With ``sections=True`` also return degree-wise sections of the projection.
    """
    q, s = quotient(c.dim(n), c.d(n + 1))
    dims, diffs, proj, sec = {}, {}, {}, {}
    for m in c.degrees():
        if m < n:
            dims[m] = c.dim(m)
            proj[m] = Matrix.identity(c.dim(m))
            sec[m] = proj[m]
    dims[n] = q.rows
    proj[n] = q
    sec[n] = s
    for m in dims:
        if m < n:
            diffs[m] = c.d(m)
    diffs[n] = c.d(n) @ s
    t = ChainComplex(dims, diffs, check=False)
    pm = ChainMap(c, t, {m: v for m, v in proj.items() if v.rows and v.cols})
    if sections:
        return t, pm, sec
    return t, pm


def smart_truncate(c: ChainComplex, direction: str, n: int) -> ChainComplex:
    if direction in (">=", "≥", "ge"):
        return truncate_ge(c, n)[0]
    if direction in ("<=", "≤", "le"):
        return truncate_le(c, n)[0]
    raise ValueError(f"unknown direction {direction!r}")


def is_connective(c: ChainComplex, n: int) -> bool:
    """H_k(c) = 0 for k < n."""
    return all(k >= n for k in homology(c).betti)


def is_coconnective(c: ChainComplex, n: int) -> bool:
    """H_k(c) = 0 for k > n."""
    return all(k <= n for k in homology(c).betti)


def chains_isomorphic(a: ChainComplex, b: ChainComplex) -> bool:
    """Over a field a complex is determined up to isomorphism by dims and ranks."""
    if a.dims() != b.dims():
        return False
    degs = set(a.diffs()) | set(b.diffs())
    return all(rank(a.d(n)) == rank(b.d(n)) for n in degs)
