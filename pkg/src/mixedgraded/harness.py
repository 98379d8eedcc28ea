"""Property suites over random objects, with counterexample shrinking.

Each property draws its objects from a generator keyed by (seed, property,
trial), so a recorded counterexample replays deterministically.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .bridge import (beilinson_truncate, counit_check, is_postnikov_coconnective,
                     is_postnikov_connective, monoidal_comparison, postnikov_heart_to_chain,
                     postnikov_truncate, tate_via_colimit_check, to_filtered, to_mixed,
                     unit_check, unit_fiber, chain_to_postnikov_heart)
from .chain import (ChainComplex, chain_maps_mod_homotopy, chains_isomorphic, cone,
                    homology, hom_chain, identity_map, is_acyclic, is_quasi_iso, shift,
                    shift_map, tensor_chain, truncate_ge, truncate_le)
from .filtered import (FilteredComplex, beilinson_heart_to_chain, chain_to_beilinson_heart,
                       complete, connecting, gr, is_complete, limit_infty, tensor_fil,
                       hom_fil, unit_fil, constant_tower)
from .generate import GenConfig, gen_random, random_chain_map, rng_for
from .graded import hom_graded, tensor_graded
from .linalg import rank
from .mixed import (ANTICOMMUTING, COMMUTING, MixedComplex, clever_truncate,
                    convert_convention, dualizability_check, hom_mixed, mapping_complex,
                    mixed_weight_shift, naive_truncate, ncw, realization, tate_realization,
                    tensor_mixed, totalize, unit_mixed, validate_mixed)

SUITES = ("core", "mixed-laws", "filtered-laws", "adjunction", "tstructure", "monoidal")


@dataclass(frozen=True)
class Property:
    name: str
    suite: str
    kinds: tuple                      # generator kinds for the drawn objects
    check: Callable                   # (*objects) -> None on success, else a location string


@dataclass
class VerificationReport:
    suite: str
    seed: int
    trials: int
    properties: dict = field(default_factory=dict)   # name -> {"trials", "passed"}
    counterexample: dict | None = None

    @property
    def ok(self):
        return self.counterexample is None and all(
            v["passed"] == v["trials"] for v in self.properties.values())

    def to_json(self):
        return {"suite": self.suite, "seed": self.seed, "trials": self.trials,
                "ok": self.ok, "properties": self.properties,
                "counterexample": self.counterexample}


# ---------------------------------------------------------------- helpers

def _betti_conv(a, b, sign=1):
    out = {}
    for i, x in a.betti.items():
        for j, y in b.betti.items():
            k = i + j if sign > 0 else j - i
            out[k] = out.get(k, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _fail(cond, where):
    return None if cond else where


def _window_of(*towers):
    return (min(t.lo for t in towers) - 1, max(t.hi for t in towers) + 1)


# ---------------------------------------------------------------- core

def _chain_valid(c):
    c.validate()
    for n, k in c.dims().items():
        ker = k - rank(c.d(n))
        if homology(c)[n] != ker - rank(c.d(n + 1)):
            return f"degree {n}"
    return None


def _chain_shift(c):
    for k in (-3, -1, 2):
        if homology(shift(c, k)) != homology(c).shifted(k):
            return f"shift {k}"
        shift(c, k).validate()
    return None


def _cone_identity(c):
    return _fail(is_acyclic(cone(identity_map(c))), "cone of the identity")


def _cone_les(a, b, seed):
    import random
    f = random_chain_map(random.Random(seed), a, b)
    c = cone(f)
    c.validate()
    if c.euler() != b.euler() - a.euler():
        return "euler characteristic"
    return _fail(is_quasi_iso(f) == is_acyclic(c), "quasi-iso iff acyclic cone")


def _kunneth(a, b):
    t = tensor_chain(a, b)
    t.validate()
    if homology(t).betti != _betti_conv(homology(a), homology(b)):
        return "tensor"
    h = hom_chain(a, b)
    h.validate()
    return _fail(homology(h).betti == _betti_conv(homology(a), homology(b), sign=-1), "hom")


def _truncations(c):
    h = homology(c)
    for n in range(-3, 4):
        t, inc = truncate_ge(c, n)
        t.validate(); inc.validate()
        if homology(t).betti != {k: v for k, v in h.betti.items() if k >= n}:
            return f"τ≥{n}"
        s, pr = truncate_le(c, n)
        s.validate(); pr.validate()
        if homology(s).betti != {k: v for k, v in h.betti.items() if k <= n}:
            return f"τ≤{n}"
    return None


def _maps_mod_homotopy(a, b):
    return _fail(homology(hom_chain(a, b))[0] == chain_maps_mod_homotopy(a, b), "H_0 Hom")


def _graded_kunneth(a, b):
    t = tensor_graded(a, b).validate()
    ha, hb = a.homology(), b.homology()
    for p in set(t.weights()):
        want = {}
        for i, x in ha.items():
            if p - i in hb:
                for k, v in _betti_conv(x, hb[p - i]).items():
                    want[k] = want.get(k, 0) + v
        if homology(t.part(p)).betti != {k: v for k, v in want.items() if v}:
            return f"weight {p}"
    hom_graded(a, b).validate()
    return None


# ---------------------------------------------------------------- mixed laws

def _mixed_report(m):
    rep = validate_mixed(m)
    return None if rep.ok else f"{rep.law} at {rep.where}"


def _mixed_valid(m):
    return _mixed_report(m)


def _tensor_valid(a, b):
    return _mixed_report(tensor_mixed(a, b))


def _hom_valid(a, b):
    return _mixed_report(hom_mixed(a, b))


def _tensor_unit(m):
    return _fail(tensor_mixed(unit_mixed(0, 0), m) == m, "k(0) ⊗ m = m")


def _realization_consistency(m):
    r = realization(m)
    r.validate()
    return _fail(homology(r) == homology(mapping_complex(unit_mixed(0, 0), m)), "|m| vs Map(k(0), m)")


def _totalizations_valid(m):
    tate_realization(m).validate()
    realization(m).validate()
    g = ncw(m)
    g.validate()
    for p in g.weights():
        alt = realization(mixed_weight_shift(m, -p))
        if homology(alt) != homology(g.part(p)):
            return f"NC^w weight {p}"
    return None


def _convention_roundtrip(m):
    c = convert_convention(m, ANTICOMMUTING, COMMUTING)
    if not validate_mixed(c, COMMUTING).ok:
        return "commuting form"
    return _fail(convert_convention(c, COMMUTING, ANTICOMMUTING) == m, "round trip")


def _truncations_valid(m):
    for p in range(-4, 5):
        for d in ("le", "ge"):
            for f in (naive_truncate, clever_truncate):
                bad = _mixed_report(f(m, d, p))
                if bad:
                    return f"{f.__name__} {d} {p}: {bad}"
    ws = m.weights()
    if ws:
        lo, hi = ws[0], ws[-1]
        # clever truncation outside the support changes nothing up to homology
        for d, p in (("le", hi), ("ge", lo)):
            t = clever_truncate(m, d, p)
            if any(homology(t.part(q)) != homology(m.part(q)) for q in ws):
                return f"clever {d} {p}"
    return None


# ---------------------------------------------------------------- filtered laws

def _fil_valid(m):
    m.validate()
    return None


def _connecting_square(m):
    for p in range(m.lo - 1, m.hi + 1):
        d0 = connecting(m, p)
        d1 = shift_map(connecting(m, p + 1), 1)
        if any(not mat.is_zero() for mat in (d1 @ d0).comps.values()):
            return f"weight {p}"
    return None


def _euler_additivity(m):
    for p in range(m.lo - 1, m.hi + 1):
        if m.term(p).euler() != m.term(p + 1).euler() + gr(m, p).euler():
            return f"weight {p}"
    return None


def _completion(m):
    c = complete(m)
    c.validate()
    if not is_complete(c):
        return "completion is complete"
    for p in range(m.lo - 1, m.hi + 2):
        if homology(gr(c, p)) != homology(gr(m, p)):
            return f"gr_{p}"
    c2 = complete(c)
    for p in range(m.lo - 1, m.hi + 1):
        if homology(c2.term(p)) != homology(c.term(p)):
            return f"idempotence at {p}"
    return None


def _tensor_unit_fil(m):
    t = tensor_fil(unit_fil(), m)
    t.validate()
    lo, hi = _window_of(t, m)
    for p in range(lo, hi + 1):
        if not chains_isomorphic(t.term(p), m.term(p)):
            return f"weight {p}"
    return None


def _gr_additivity(a, b):
    t = tensor_fil(a, b)
    t.validate()
    lo, hi = _window_of(t)
    for p in range(lo, hi + 1):
        want = {}
        for i in range(a.lo - 1, a.hi + 2):
            for k, v in _betti_conv(homology(gr(a, i)), homology(gr(b, p - i))).items():
                want[k] = want.get(k, 0) + v
        if homology(gr(t, p)).betti != {k: v for k, v in want.items() if v}:
            return f"weight {p}"
    return None


def _hom_unit_fil(m):
    h = hom_fil(unit_fil(), m)
    h.validate()
    lo, hi = _window_of(h, m)
    for p in range(lo, hi + 1):
        if homology(h.term(p)) != homology(m.term(p)):
            return f"weight {p}"
    return None


def _beilinson_laws(m):
    lo, hi = m.lo - 1, m.hi + 1
    for n in (-2, 0, 1):
        le = beilinson_truncate(m, "le", n)
        ge = beilinson_truncate(m, "ge", n + 1)
        le.validate(); ge.validate()
        if not is_complete(le):
            return f"τ≤{n} is complete"
        for p in range(lo, hi + 1):
            if any(k > n - p for k in homology(le.term(p)).betti):
                return f"τ≤{n} coconnective at {p}"
            if any(k < n + 1 - p for k in homology(gr(ge, p)).betti):
                return f"τ≥{n + 1} connective at {p}"
            if m.term(p).euler() != le.term(p).euler() + ge.term(p).euler():
                return f"fibre sequence at {p}"
        le2 = beilinson_truncate(le, "le", n - 1)
        le1 = beilinson_truncate(m, "le", n - 1)
        for p in range(lo, hi + 1):
            if homology(le2.term(p)) != homology(le1.term(p)):
                return f"τ≤{n - 1}τ≤{n} at {p}"
    return None


# ---------------------------------------------------------------- adjunction

def _gr_of_embedding(m):
    f = to_filtered(m)
    f.validate()
    lo, hi = _window_of(f)
    for p in range(lo, hi + 1):
        if homology(gr(f, p)) != homology(shift(m.part(-p), -2 * p)):
            return f"weight {p}"
    return None


def _counit(m):
    w = counit_check(m)
    if w.failures:
        law, q, k = w.failures[0]
        return f"{law} at weight {q}, degree {k}"
    return _fail(w.verdict, "weight-wise quasi-iso")


def _to_mixed_valid(n):
    return _mixed_report(to_mixed(n))


def _unit_complete(n):
    w = unit_check(n)
    if w.failures:
        law, p, k = w.failures[0]
        return f"{law} at weight {p}, degree {k}"
    return _fail(w.verdict, "unit is a weight-wise quasi-iso")


def _unit_dichotomy(n):
    w = unit_check(n)
    if w.failures:
        law, p, k = w.failures[0]
        return f"{law} at weight {p}, degree {k}"
    if w.verdict != is_complete(n):
        return "verdict iff complete"
    lim = homology(limit_infty(n))
    for p in range(n.lo - 1, n.hi + 2):
        if homology(unit_fiber(n, p)) != lim:
            return f"fibre at {p}"
    return None


def _tate(m):
    return _fail(tate_via_colimit_check(m), "Tate vs colimit")


# ---------------------------------------------------------------- t-structures

def _postnikov_formula(m):
    for n in (0, -1, 2):
        for model in ("weightwise", "bridge"):
            ge = postnikov_truncate(m, "ge", n, model)
            le = postnikov_truncate(m, "le", n, model)
            for t in (ge, le):
                bad = _mixed_report(t)
                if bad:
                    return f"{model} τ at {n}: {bad}"
            for q in sorted(set(m.weights()) | set(ge.weights()) | set(le.weights())):
                c = m.part(q)
                if homology(ge.part(q)) != homology(truncate_ge(c, n - q)[0]):
                    return f"{model} τ≥{n} weight {q}"
                if homology(le.part(q)) != homology(truncate_le(c, n - q)[0]):
                    return f"{model} τ≤{n} weight {q}"
    return None


def _left_complete(m):
    ws = m.weights()
    if not ws:
        return None
    degs = [k for q in ws for k in m.part(q).degrees()]
    # past max degree + max weight every class of a survivor would have to vanish
    top = max(degs) + ws[-1] + 1
    survives = True
    for n in range(min(degs) + ws[0] - 1, top + 1):
        t = postnikov_truncate(m, "ge", n)
        if any(homology(t.part(q)) != homology(m.part(q)) for q in ws):
            survives = False
            break
    if survives:
        return _fail(all(is_acyclic(m.part(q)) for q in ws), "survivor is acyclic")
    return None


def _beilinson_constant(n):
    c = constant_tower(ChainComplex.point(0))
    t = beilinson_truncate(c, "ge", n)
    t.validate()
    if all(is_acyclic(t.term(p)) for p in range(t.lo - 1, t.hi + 2)):
        return "τ≥ of the constant tower vanished"
    if any(not is_acyclic(gr(t, p)) for p in range(t.lo - 2, t.hi + 2)):
        return "graded pieces"
    ct = complete(t)
    return _fail(all(is_acyclic(ct.term(p)) for p in range(ct.lo - 1, ct.hi + 2)), "completion")


def _heart_roundtrip(m):
    c = postnikov_heart_to_chain(m)
    back = chain_to_postnikov_heart(c)
    if any(homology(back.part(q)) != homology(m.part(q)) for q in set(m.weights()) | set(back.weights())):
        return "postnikov round trip"
    if postnikov_heart_to_chain(back) != c:
        return "postnikov chain round trip"
    f = to_filtered(m)
    cf = beilinson_heart_to_chain(f)
    if not chains_isomorphic(cf, c):
        return "extractors disagree through the bridge"
    nf = chain_to_beilinson_heart(c)
    if beilinson_heart_to_chain(nf) != c:
        return "beilinson chain round trip"
    if postnikov_heart_to_chain(to_mixed(nf)) != c:
        return "to_mixed of the heart object"
    back_f = chain_to_beilinson_heart(cf)
    for p in range(f.lo - 1, f.hi + 2):
        if homology(back_f.term(p)) != homology(f.term(p)):
            return f"beilinson round trip at {p}"
    return None


def _t_exactness(m):
    con = postnikov_truncate(m, "ge", 0)
    if not is_postnikov_connective(con):
        return "τ≥0 connective"
    f = to_filtered(con)
    for p in range(f.lo - 1, f.hi + 2):
        if any(k < -p for k in homology(gr(f, p)).betti):
            return f"gr_{p} connective"
    coc = postnikov_truncate(m, "le", 0)
    if not is_postnikov_coconnective(coc):
        return "τ≤0 coconnective"
    f = to_filtered(coc)
    for p in range(f.lo - 1, f.hi + 2):
        if any(k > -p for k in homology(f.term(p)).betti):
            return f"term {p} coconnective"
    return None


# ---------------------------------------------------------------- monoidal

def _monoidal(a, b):
    w = monoidal_comparison(a, b)
    if w.failures:
        return str(w.failures[0])
    return _fail(w.verdict, "legs are quasi-isos")


def _dualizable(m, n):
    return _fail(dualizability_check(m, n), "m^∨ ⊗ n -> Hom(m, n)")


def _completed_tensor(a, b):
    lhs = complete(tensor_fil(a, b))
    rhs = to_filtered(tensor_mixed(to_mixed(a), to_mixed(b)))
    lo, hi = _window_of(lhs, rhs)
    for p in range(lo, hi + 1):
        if homology(lhs.term(p)) != homology(rhs.term(p)):
            return f"weight {p}"
    return None


PROPERTIES = [
    Property("chain.valid", "core", ("chain",), _chain_valid),
    Property("chain.shift", "core", ("chain",), _chain_shift),
    Property("chain.cone-identity", "core", ("chain",), _cone_identity),
    Property("chain.cone-les", "core", ("chain", "chain", "int"), _cone_les),
    Property("chain.kunneth", "core", ("chain", "chain"), _kunneth),
    Property("chain.truncation", "core", ("chain",), _truncations),
    Property("chain.maps-mod-homotopy", "core", ("chain", "chain"), _maps_mod_homotopy),
    Property("graded.kunneth", "core", ("graded", "graded"), _graded_kunneth),
    Property("mixed.valid", "mixed-laws", ("mixed",), _mixed_valid),
    Property("mixed.tensor-valid", "mixed-laws", ("mixed", "mixed"), _tensor_valid),
    Property("mixed.hom-valid", "mixed-laws", ("mixed", "mixed"), _hom_valid),
    Property("mixed.tensor-unit", "mixed-laws", ("mixed",), _tensor_unit),
    Property("mixed.realization", "mixed-laws", ("mixed",), _realization_consistency),
    Property("mixed.totalizations", "mixed-laws", ("mixed",), _totalizations_valid),
    Property("mixed.convention", "mixed-laws", ("mixed",), _convention_roundtrip),
    Property("mixed.truncations", "mixed-laws", ("mixed",), _truncations_valid),
    Property("filtered.valid", "filtered-laws", ("filtered-constant",), _fil_valid),
    Property("filtered.connecting", "filtered-laws", ("filtered-constant",), _connecting_square),
    Property("filtered.euler", "filtered-laws", ("filtered-zero",), _euler_additivity),
    Property("filtered.completion", "filtered-laws", ("filtered-constant",), _completion),
    Property("filtered.tensor-unit", "filtered-laws", ("filtered-injective",), _tensor_unit_fil),
    Property("filtered.gr-additivity", "filtered-laws", ("filtered-injective", "filtered-injective"),
             _gr_additivity),
    Property("filtered.hom-unit", "filtered-laws", ("filtered-zero",), _hom_unit_fil),
    Property("filtered.beilinson", "filtered-laws", ("filtered-zero",), _beilinson_laws),
    Property("adjunction.gr-embedding", "adjunction", ("mixed",), _gr_of_embedding),
    Property("adjunction.counit", "adjunction", ("mixed",), _counit),
    Property("adjunction.to-mixed-valid", "adjunction", ("filtered-zero",), _to_mixed_valid),
    Property("adjunction.unit-complete", "adjunction", ("filtered-injective",), _unit_complete),
    Property("adjunction.unit-dichotomy", "adjunction", ("filtered-constant",), _unit_dichotomy),
    Property("adjunction.tate-colimit", "adjunction", ("mixed",), _tate),
    Property("tstructure.postnikov", "tstructure", ("mixed",), _postnikov_formula),
    Property("tstructure.left-complete", "tstructure", ("mixed",), _left_complete),
    Property("tstructure.beilinson-constant", "tstructure", ("int",), _beilinson_constant),
    Property("tstructure.heart", "tstructure", ("mixed-heart",), _heart_roundtrip),
    Property("tstructure.t-exact", "tstructure", ("mixed",), _t_exactness),
    Property("monoidal.comparison", "monoidal", ("filtered-injective", "filtered-injective"),
             _monoidal),
    Property("monoidal.dualizable", "monoidal", ("mixed", "mixed"), _dualizable),
    Property("monoidal.completed-tensor", "monoidal", ("filtered-injective", "filtered-injective"),
             _completed_tensor),
]


# ---------------------------------------------------------------- running

def draw(prop: Property, cfg: GenConfig, trial: int):
    rng = rng_for(cfg, prop.name, trial)
    objs = []
    for kind in prop.kinds:
        if kind == "int":
            objs.append(rng.randint(*cfg.degree_span))
        else:
            objs.append(gen_random(kind, cfg, rng))
    return tuple(objs)


def evaluate(prop: Property, objs) -> str | None:
    try:
        return prop.check(*objs)
    except Exception as exc:     # a law violation raised deep inside counts as a failure
        return f"{type(exc).__name__}: {exc}"


def shrink(prop: Property, objs):
    """Narrow the weight windows of mixed inputs while the property keeps failing."""
    objs = list(objs)
    progress = True
    while progress:
        progress = False
        for i, o in enumerate(objs):
            if not isinstance(o, MixedComplex) or len(o.weights()) < 2:
                continue
            ws = o.weights()
            for cand in (naive_truncate(o, "le", ws[-2]), naive_truncate(o, "ge", ws[1])):
                trial = objs[:i] + [cand] + objs[i + 1:]
                if evaluate(prop, trial) is not None:
                    objs = trial
                    progress = True
                    break
            if progress:
                break
    return tuple(objs)


def _encode(o):
    from .serialize import to_json
    if isinstance(o, int):
        return {"kind": "int", "payload": o}
    kind, payload = to_json(o)
    return {"kind": kind, "payload": payload}


def select(name: str):
    if name == "all":
        return list(PROPERTIES)
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    return [p for p in PROPERTIES if p.suite == name]


def run_suite(name: str, cfg: GenConfig) -> VerificationReport:
    report = VerificationReport(name, cfg.seed, cfg.trials)
    for prop in select(name):
        passed = ran = 0
        for t in range(cfg.trials):
            objs = draw(prop, cfg, t)
            ran += 1
            where = evaluate(prop, objs)
            if where is None:
                passed += 1
                continue
            if report.counterexample is None:
                small = shrink(prop, objs)
                report.counterexample = {
                    "property": prop.name, "trial": t, "seed": cfg.seed,
                    "where": evaluate(prop, small) or where,
                    "objects": [_encode(o) for o in small],
                }
            break
        report.properties[prop.name] = {"trials": ran, "passed": passed}
    return report


def replay(counterexample: dict) -> str | None:
    """Re-run the recorded property on the recorded objects."""
    from .serialize import chain_from_json, filtered_from_json, graded_from_json, mixed_from_json
    readers = {"chain": chain_from_json, "graded": graded_from_json,
               "mixed": mixed_from_json, "filtered": filtered_from_json}
    prop = next(p for p in PROPERTIES if p.name == counterexample["property"])
    objs = []
    for o in counterexample["objects"]:
        if o["kind"] == "int":
            objs.append(o["payload"])
        else:
            objs.append(readers[o["kind"]](o["payload"]))
    return evaluate(prop, objs)
