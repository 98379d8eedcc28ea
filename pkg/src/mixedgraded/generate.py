"""Random small objects for property checks.

Objects are assembled from elementary blocks whose laws hold by
construction (a lone vector, a d-pair, an ε-pair, a d/ε square, zigzags) and
then conjugated cell by cell with random invertible matrices, which preserves
every law while scrambling the bases.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .chain import ChainComplex, ChainMap, hom_chain, hom_element_to_map, cycles
from .errors import GenerationFailure
from .filtered import CONSTANT, ZERO, FilteredComplex
from .graded import GradedComplex
from .linalg import Matrix
from .mixed import MixedComplex, validate_mixed

KINDS = ("chain", "graded", "mixed", "filtered-injective", "filtered-constant",
         "filtered-zero", "mixed-heart")


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_dim: int = 4
    degree_span: tuple = (-6, 6)
    weight_span: tuple = (-4, 4)
    trials: int = 20

    def __post_init__(self):
        if self.max_dim < 1:
            raise ValueError("max_dim must be at least 1")
        for name in ("degree_span", "weight_span"):
            lo, hi = getattr(self, name)
            if hi < lo:
                raise ValueError(f"{name} is empty")
        if self.trials < 0:
            raise ValueError("trials must be non-negative")


def rng_for(cfg: GenConfig, *tags) -> random.Random:
    """A generator keyed by the seed and tags, stable across processes."""
    return random.Random(":".join(str(t) for t in (cfg.seed,) + tags))


def random_invertible(rng: random.Random, n: int) -> tuple[Matrix, Matrix]:
    """(P, P^{-1}) as a product of a few elementary operations."""
    p = Matrix.identity(n)
    pinv = Matrix.identity(n)
    if n == 0:
        return p, pinv
    for _ in range(rng.randint(0, 2 * n)):
        kind = rng.random()
        if n > 1 and kind < 0.7:
            i, j = rng.sample(range(n), 2)
            c = rng.choice([-2, -1, 1, 2])
            e = Matrix(n, n, {**{(k, k): 1 for k in range(n)}, (i, j): c})
            ei = Matrix(n, n, {**{(k, k): 1 for k in range(n)}, (i, j): -c})
        else:
            i = rng.randrange(n)
            s = rng.choice([-1, 2, -2])
            e = Matrix(n, n, {**{(k, k): 1 for k in range(n)}, (i, i): s})
            ei = Matrix(n, n, {**{(k, k): 1 for k in range(n)}, (i, i): Fraction(1, s)})
        p = e @ p
        pinv = pinv @ ei
    return p, pinv


class _Cells:
    """Basis vectors placed in (weight, degree) cells with d- and ε-edges."""

    def __init__(self, max_dim):
        self.max_dim = max_dim
        self.count: dict = {}
        self.d_edges: list = []
        self.e_edges: list = []

    def fits(self, cells):
        need = {}
        for c in cells:
            need[c] = need.get(c, 0) + 1
        return all(self.count.get(c, 0) + k <= self.max_dim for c, k in need.items())

    def add(self, cell):
        i = self.count.get(cell, 0)
        self.count[cell] = i + 1
        return (cell, i)

    def build(self, rng, conjugate=True):
        w_ = {}
        for (w, n), k in self.count.items():
            w_.setdefault(w, {})[n] = k
        conj = {}
        for cell, k in self.count.items():
            conj[cell] = random_invertible(rng, k) if conjugate else (Matrix.identity(k), Matrix.identity(k))
        d_raw, e_raw = {}, {}
        for (sc, si), (tc, ti), c in self.d_edges:
            d_raw.setdefault(sc, {})[(ti, si)] = c
        for (sc, si), (tc, ti), c in self.e_edges:
            e_raw.setdefault(sc, {})[(ti, si)] = c
        parts = {}
        for w, byn in w_.items():
            diffs = {}
            for n, k in byn.items():
                if (w, n) in d_raw and byn.get(n - 1):
                    m = Matrix(byn[n - 1], k, d_raw[(w, n)])
                    diffs[n] = conj[(w, n - 1)][0] @ m @ conj[(w, n)][1]
            parts[w] = ChainComplex(byn, diffs, check=False)
        eps = {}
        for (w, n), entries in e_raw.items():
            tgt = (w - 1, n + 1)
            m = Matrix(self.count[tgt], self.count[(w, n)], entries)
            eps.setdefault(w, {})[n] = conj[tgt][0] @ m @ conj[(w, n)][1]
        return GradedComplex(parts), eps


def _window(rng, span, width):
    lo, hi = span
    width = min(width, hi - lo)
    a = rng.randint(lo, hi - width)
    return a, a + width


_BLOCKS = ("single", "dpair", "epair", "square", "zigzag-d", "zigzag-e")


def _block_cells(kind, w, n, length=2):
    """Cells of the block vectors and the d/ε edges between their indices."""
    if kind == "single":
        return [(w, n)], [], []
    if kind == "dpair":
        return [(w, n), (w, n - 1)], [(0, 1, 1)], []
    if kind == "epair":
        return [(w, n), (w - 1, n + 1)], [], [(0, 1, 1)]
    if kind == "square":
        # x, dx, εx, dεx with ε(dx) = -dεx
        return ([(w, n), (w, n - 1), (w - 1, n + 1), (w - 1, n)],
                [(0, 1, 1), (2, 3, 1)], [(0, 2, 1), (1, 3, -1)])
    cells, d, e = [], [], []
    if kind == "zigzag-d":
        # x1 -d-> y1 <-ε- x2 -d-> y2 <-ε- x3 ...
        for k in range(length):
            cells += [(w + k, n - 2 * k), (w + k, n - 2 * k - 1)]
            d.append((2 * k, 2 * k + 1, 1))
            if k:
                e.append((2 * k, 2 * k - 1, 1))
        return cells, d, e
    if kind == "zigzag-e":
        # x1 -ε-> y1 <-d- x2 -ε-> y2 <-d- x3 ...
        for k in range(length):
            cells += [(w - k, n + 2 * k), (w - k - 1, n + 2 * k + 1)]
            e.append((2 * k, 2 * k + 1, 1))
            if k:
                d.append((2 * k, 2 * k - 1, 1))
        return cells, d, e
    raise ValueError(kind)


def _fill(rng, cfg, kinds, nblocks, wwin, dwin, cells=None):
    cells = cells or _Cells(cfg.max_dim)
    for _ in range(nblocks):
        for _attempt in range(8):
            kind = rng.choice(kinds)
            w = rng.randint(*wwin)
            n = rng.randint(*dwin)
            cs, d, e = _block_cells(kind, w, n, rng.randint(2, 3))
            inside = all(wwin[0] - 1 <= c[0] <= wwin[1] + 1 and
                         cfg.weight_span[0] <= c[0] <= cfg.weight_span[1] and
                         cfg.degree_span[0] <= c[1] <= cfg.degree_span[1] for c in cs)
            if inside and cells.fits(cs):
                vecs = [cells.add(c) for c in cs]
                for s, t, c in d:
                    cells.d_edges.append((vecs[s], vecs[t], c))
                for s, t, c in e:
                    cells.e_edges.append((vecs[s], vecs[t], c))
                break
    return cells


def gen_chain(rng, cfg) -> ChainComplex:
    dwin = _window(rng, cfg.degree_span, 3)
    cells = _fill(rng, cfg, ("single", "dpair", "dpair"), rng.randint(0, 4), (0, 0), dwin)
    g, _ = cells.build(rng)
    return g.part(0)


def gen_graded(rng, cfg) -> GradedComplex:
    wwin = _window(rng, cfg.weight_span, 2)
    dwin = _window(rng, cfg.degree_span, 3)
    cells = _fill(rng, cfg, ("single", "dpair"), rng.randint(0, 4), wwin, dwin)
    return cells.build(rng)[0]


def gen_mixed(rng, cfg) -> MixedComplex:
    wwin = _window(rng, cfg.weight_span, 2)
    dwin = _window(rng, cfg.degree_span, 3)
    cells = _fill(rng, cfg, _BLOCKS, rng.randint(0, 3), wwin, dwin)
    g, eps = cells.build(rng)
    return MixedComplex(g, eps, check=False)


def gen_mixed_heart(rng, cfg) -> MixedComplex:
    """Heart objects: weight q homology in degree -q, with acyclic noise."""
    lo, hi = _window(rng, cfg.weight_span, 2)
    cells = _Cells(cfg.max_dim)
    for _ in range(rng.randint(0, 3)):
        q = rng.randint(lo, hi)
        kind = rng.choice(("single", "epair", "noise"))
        if kind == "single" and cells.fits([(q, -q)]):
            cells.add((q, -q))
        elif kind == "epair" and cells.fits([(q, -q), (q - 1, -q + 1)]):
            x, y = cells.add((q, -q)), cells.add((q - 1, -q + 1))
            cells.e_edges.append((x, y, 1))
        else:
            n = rng.randint(-q - 1, -q + 2)
            if cells.fits([(q, n), (q, n - 1)]):
                x, y = cells.add((q, n)), cells.add((q, n - 1))
                cells.d_edges.append((x, y, 1))
    g, eps = cells.build(rng)
    return MixedComplex(g, eps, check=False)


def gen_filtered_injective(rng, cfg) -> FilteredComplex:
    """Subcomplex filtrations of a block complex, in randomly chosen bases per term."""
    lo, hi = _window(rng, cfg.weight_span, 2)
    dwin = _window(rng, cfg.degree_span, 2)
    vecs = []      # (degree, filtration weight)
    edges = []
    for _ in range(rng.randint(0, 3)):
        n = rng.randint(*dwin)
        if rng.random() < 0.5:
            vecs.append((n, rng.randint(lo, hi)))
        else:
            a = rng.randint(lo, hi)
            b = rng.randint(a, hi)
            vecs.append((n, a))
            vecs.append((n - 1, b))
            edges.append((len(vecs) - 2, len(vecs) - 1))
    terms, bases, conj = {}, {}, {}
    for p in range(lo, hi + 1):
        keep = [i for i, (n, w) in enumerate(vecs) if w >= p]
        pos = {}
        dims = {}
        for i in keep:
            n = vecs[i][0]
            pos[i] = dims.get(n, 0)
            dims[n] = dims.get(n, 0) + 1
        raw = {}
        for s, t in edges:
            if s in pos and t in pos:
                raw.setdefault(vecs[s][0], {})[(pos[t], pos[s])] = 1
        conj[p] = {n: random_invertible(rng, k) for n, k in dims.items()}
        diffs = {}
        for n, entries in raw.items():
            m = Matrix(dims[n - 1], dims[n], entries)
            diffs[n] = conj[p][n - 1][1] @ m @ conj[p][n][0]
        terms[p] = ChainComplex(dims, diffs, check=False)
        bases[p] = pos
    trans = {}
    for p in range(lo, hi):
        src, tgt = terms[p + 1], terms[p]
        comps = {}
        for n in src.degrees():
            entries = {(bases[p][i], bases[p + 1][i]) : 1 for i in bases[p + 1] if vecs[i][0] == n}
            j = Matrix(tgt.dim(n), src.dim(n), entries)
            comps[n] = conj[p][n][1] @ j @ conj[p + 1][n][0]
        trans[p] = ChainMap(src, tgt, comps)
    return FilteredComplex(lo, hi, terms, trans, ZERO, check=False)


def random_chain_map(rng, a: ChainComplex, b: ChainComplex) -> ChainMap:
    """A random degree-0 chain map, drawn from the cycles of Hom(a, b)."""
    h = hom_chain(a, b)
    z = cycles(h, 0)
    vec = [0] * h.dim(0)
    for j in range(z.cols):
        c = rng.choice([-1, 0, 1, 1, 2])
        if c:
            col = z.column(j)
            vec = [x + c * y for x, y in zip(vec, col)]
    blocks = hom_element_to_map(a, b, 0, vec)
    return ChainMap(a, b, {m: f for m, f in blocks.items() if f.rows and f.cols})


def _gen_maps_tower(rng, cfg, above) -> FilteredComplex:
    lo, hi = _window(rng, cfg.weight_span, rng.randint(0, 2))
    small = GenConfig(cfg.seed, min(cfg.max_dim, 2), cfg.degree_span, cfg.weight_span, cfg.trials)
    dwin = _window(rng, cfg.degree_span, 2)
    terms = {}
    for p in range(lo, hi + 1):
        cells = _fill(rng, small, ("single", "dpair"), rng.randint(0, 2), (0, 0), dwin)
        terms[p] = cells.build(rng)[0].part(0)
    trans = {p: random_chain_map(rng, terms[p + 1], terms[p]) for p in range(lo, hi)}
    return FilteredComplex(lo, hi, terms, trans, above, check=False)


def gen_random(kind: str, cfg: GenConfig, rng: random.Random | None = None):
    """One random object of the given kind; deterministic under the seed."""
    if rng is None:
        rng = rng_for(cfg, kind)
    makers = {
        "chain": gen_chain,
        "graded": gen_graded,
        "mixed": gen_mixed,
        "mixed-heart": gen_mixed_heart,
        "filtered-injective": gen_filtered_injective,
        "filtered-constant": lambda r, c: _gen_maps_tower(r, c, CONSTANT),
        "filtered-zero": lambda r, c: _gen_maps_tower(r, c, ZERO),
    }
    if kind not in makers:
        raise ValueError(f"unknown kind {kind!r}")
    for _ in range(5):
        obj = makers[kind](rng, cfg)
        if isinstance(obj, MixedComplex):
            if validate_mixed(obj).ok:
                return obj
        else:
            return obj
    raise GenerationFailure(f"could not generate a valid {kind} object")
