"""Acceptance criteria 1-13, one pass/fail line each, exact arithmetic throughout.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""
import os
import subprocess
import sys
from pathlib import Path

import pytest

from mixedgraded.bridge import (chain_to_postnikov_heart, counit_check, monoidal_comparison,
                                postnikov_heart_to_chain, postnikov_truncate, tate_via_colimit_check,
                                to_filtered, to_mixed, unit_check, unit_fiber)
from mixedgraded.chain import (ChainComplex, chains_isomorphic, cone, hom_chain, homology, is_acyclic,
                               shift, tensor_chain, truncate_ge, truncate_le)
from mixedgraded.filtered import (beilinson_heart_to_chain, beilinson_truncate, chain_to_beilinson_heart,
                                  complete, constant_tower, gr, hom_fil, tensor_fil)
from mixedgraded.generate import GenConfig, gen_random, random_chain_map, rng_for
from mixedgraded.graded import hom_graded, tensor_graded
from mixedgraded.mixed import (dualizability_check, hom_mixed, mapping_complex, ncw, realization,
                               tate_realization, tensor_mixed, totalize, triv, unit_mixed,
                               validate_mixed)
from mixedgraded.serialize import parse, serialize

ROOT = Path(__file__).resolve().parent.parent
CFG = GenConfig(seed=2024)
Q0 = ChainComplex.point(0)


def objects(kind, n, tag):
    rng = rng_for(CFG, "acceptance", tag, kind)
    return [gen_random(kind, CFG, rng) for _ in range(n)]


def window(*towers):
    return range(min(t.lo for t in towers) - 1, max(t.hi for t in towers) + 2)


# ---------------------------------------------------------------- criteria
# each returns None on success or a short description of the first failure

def c1_structural_laws():
    for kind in ("chain", "graded", "mixed", "filtered-injective", "filtered-constant", "filtered-zero"):
        for i, obj in enumerate(objects(kind, 1000, 1)):
            try:
                if kind == "mixed":
                    if not validate_mixed(obj).ok:
                        return f"{kind} #{i}"
                else:
                    obj.validate()
            except Exception as exc:
                return f"{kind} #{i}: {exc}"
    rng = rng_for(CFG, "acceptance", 1, "composites")
    for i in range(100):
        a, b = gen_random("chain", CFG, rng), gen_random("chain", CFG, rng)
        f = random_chain_map(rng, a, b)
        for c in (cone(f), tensor_chain(a, b), hom_chain(a, b)):
            c.validate()
        ga, gb = gen_random("graded", CFG, rng), gen_random("graded", CFG, rng)
        tensor_graded(ga, gb).validate()
        hom_graded(ga, gb).validate()
        ma, mb = gen_random("mixed", CFG, rng), gen_random("mixed", CFG, rng)
        for m in (tensor_mixed(ma, mb), hom_mixed(ma, mb)):
            if not validate_mixed(m).ok:
                return f"mixed composite #{i}"
        totalize(ma, ma.weights())[0].validate()
        realization(ma).validate()
        fa, fb = gen_random("filtered-injective", CFG, rng), gen_random("filtered-injective", CFG, rng)
        tensor_fil(fa, fb).validate()
        hom_fil(fa, gen_random("filtered-constant", CFG, rng)).validate()
    return None


def c2_realization_consistency():
    for i, m in enumerate(objects("mixed", 200, 2)):
        if homology(realization(m)) != homology(mapping_complex(unit_mixed(0), m)):
            return f"m #{i}"
    return None


def c3_closed_form_values():
    for i in range(-3, 4):
        h = homology(mapping_complex(unit_mixed(i, -2 * i), unit_mixed(i - 1, -2 * (i - 1))))
        if h.betti != {0: 1}:
            return f"Map(k({i})[{-2 * i}], k({i - 1})[{-2 * (i - 1)}]) = {h.betti}"
    n = ncw(triv(unit_mixed(0).graded), range(-3, 5))
    for p in range(0, 5):
        if homology(n.part(p)).betti != {-2 * p: 1}:
            return f"NC^w weight {p}"
    for p in range(-3, 0):
        if not homology(n.part(p)).is_zero():
            return f"NC^w weight {p} nonzero"
    if homology(tate_realization(unit_mixed(1))).betti != {2: 1}:
        return "Tate realization of k(1)"
    if not homology(realization(unit_mixed(1))).is_zero():
        return "realization of k(1)"
    return None


def c4_graded_pieces():
    for i, m in enumerate(objects("mixed", 200, 4)):
        f = to_filtered(m)
        for p in window(f):
            if homology(gr(f, p)) != homology(shift(m.part(-p), -2 * p)):
                return f"m #{i}, weight {p}"
    return None


def c5_counit():
    for i, m in enumerate(objects("mixed", 200, 5)):
        w = counit_check(m)
        if not w.verdict or w.failures:
            return f"m #{i}: {w.failures[:1]}"
    return None


def c6_unit_dichotomy():
    complete_towers = objects("filtered-injective", 50, 6) + objects("filtered-zero", 50, 6)
    for i, n in enumerate(complete_towers):
        w = unit_check(n)
        if not w.verdict or w.failures:
            return f"tower #{i}"
    c = constant_tower(Q0)
    if unit_check(c).verdict:
        return "unit on the constant tower claimed an equivalence"
    for p in range(-6, 7):
        if homology(unit_fiber(c, p)).betti != {0: 1}:
            return f"unit fibre at {p}"
    return None


def c7_left_completeness():
    c = constant_tower(Q0)
    for n in range(-6, 7):
        t = beilinson_truncate(c, "ge", n)
        ws = window(t)
        if all(is_acyclic(t.term(p)) for p in ws):
            return f"τ≥{n} vanished"
        if any(not is_acyclic(gr(t, p)) for p in ws):
            return f"τ≥{n} has a nonzero gr"
        ct = complete(t)
        if any(not is_acyclic(ct.term(p)) for p in window(ct)):
            return f"completion of τ≥{n}"
    for i, m in enumerate(objects("mixed", 200, 7)):
        ws = m.weights()
        if not ws:
            continue
        degs = [k for q in ws for k in m.part(q).degrees()]
        bounds = range(min(degs) + ws[0] - 1, max(degs) + ws[-1] + 2)
        survives = all(all(homology(postnikov_truncate(m, "ge", n).part(q)) == homology(m.part(q))
                           for q in ws) for n in bounds)
        if survives and not all(is_acyclic(m.part(q)) for q in ws):
            return f"m #{i} survives every truncation but is not acyclic"
    return None


def c8_postnikov_formula():
    for i, m in enumerate(objects("mixed", 100, 8)):
        for n in (-2, 0, 3):
            ge, le = postnikov_truncate(m, "ge", n), postnikov_truncate(m, "le", n)
            for q in sorted(set(m.weights()) | set(ge.weights()) | set(le.weights())):
                if homology(ge.part(q)) != homology(truncate_ge(m.part(q), n - q)[0]):
                    return f"m #{i}, τ≥{n}, weight {q}"
                if homology(le.part(q)) != homology(truncate_le(m.part(q), n - q)[0]):
                    return f"m #{i}, τ≤{n}, weight {q}"
    return None


def c9_hearts():
    for i, m in enumerate(objects("mixed-heart", 50, 9)):
        c = postnikov_heart_to_chain(m)
        back = chain_to_postnikov_heart(c)
        if any(homology(back.part(q)) != homology(m.part(q)) for q in set(m.weights()) | set(back.weights())):
            return f"mixed round trip #{i}"
        if postnikov_heart_to_chain(back) != c:
            return f"chain round trip #{i}"
        f = to_filtered(m)
        cf = beilinson_heart_to_chain(f)
        if not chains_isomorphic(cf, c):
            return f"extractors disagree through the bridge #{i}"
        nf = chain_to_beilinson_heart(cf)
        if any(homology(nf.term(p)) != homology(f.term(p)) for p in window(f, nf)):
            return f"filtered round trip #{i}"
        if beilinson_heart_to_chain(nf) != cf:
            return f"filtered chain round trip #{i}"
    return None


def c10_monoidality():
    pairs = zip(objects("filtered-injective", 100, 10), objects("filtered-injective", 100, 11))
    for i, (a, b) in enumerate(pairs):
        w = monoidal_comparison(a, b)
        if not w.verdict or w.failures:
            return f"pair #{i}: {w.failures[:1]}"
    return None


def c11_dualizability():
    pairs = zip(objects("mixed", 100, 12), objects("mixed", 100, 13))
    for i, (m, n) in enumerate(pairs):
        if not dualizability_check(m, n):
            return f"pair #{i}"
    return None


def c12_tate_colimit():
    for i, m in enumerate(objects("mixed", 100, 14)):
        if not tate_via_colimit_check(m):
            return f"m #{i}"
    return None


def _cli(*args, mutation=None):
    env = {k: v for k, v in os.environ.items() if k != "MIXEDGRADED_MUTATION"}
    if mutation:
        env["MIXEDGRADED_MUTATION"] = mutation
    return subprocess.run([sys.executable, "-m", "mixedgraded", *args], cwd=ROOT, env=env,
                          capture_output=True, text=True)


def c13_cli_determinism():
    for path in sorted((ROOT / "golden").glob("*.json")):
        text = path.read_text(encoding="utf-8")
        if serialize(parse(text)) != text:
            return f"round trip of {path.name}"
    first = _cli("check", "--suite", "all", "--trials", "200", "--seed", "7")
    if first.returncode != 0:
        return f"check --suite all exited {first.returncode}"
    again = _cli("check", "--suite", "all", "--trials", "200", "--seed", "7")
    if again.stdout != first.stdout:
        return "report differs between runs"
    for name in ("tensor-eps-sign", "drop-connecting", "truncation-bound"):
        r = _cli("check", "--suite", "all", "--seed", "7", mutation=name)
        if r.returncode != 1:
            return f"mutation {name} exited {r.returncode}"
    return None


CRITERIA = [
    (1, "structural laws", c1_structural_laws),
    (2, "realization consistency", c2_realization_consistency),
    (3, "closed-form values", c3_closed_form_values),
    (4, "graded pieces of the embedding", c4_graded_pieces),
    (5, "counit equivalence", c5_counit),
    (6, "unit dichotomy", c6_unit_dichotomy),
    (7, "left completeness", c7_left_completeness),
    (8, "Postnikov truncation formula", c8_postnikov_formula),
    (9, "heart equivalences", c9_hearts),
    (10, "monoidality", c10_monoidality),
    (11, "dualizability", c11_dualizability),
    (12, "Tate as colimit", c12_tate_colimit),
    (13, "CLI determinism", c13_cli_determinism),
]


def line(number, title, failure):
    status = "PASS" if failure is None else "FAIL"
    text = f"criterion {number} {status}: {title}"
    return text if failure is None else f"{text} ({failure})"


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion-{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check):
    from .conftest import ACCEPTANCE_LINES
    failure = check()
    out = line(number, title, failure)
    ACCEPTANCE_LINES.append(out)
    print(out)
    assert failure is None, out


if __name__ == "__main__":
    bad = 0
    for number, title, check in CRITERIA:
        failure = check()
        bad += failure is not None
        print(line(number, title, failure), flush=True)
    sys.exit(1 if bad else 0)
