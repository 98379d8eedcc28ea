"""Algebraic laws over hypothesis-chosen seeds and parameters."""
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from mixedgraded.bridge import counit_check, postnikov_truncate, tate_via_colimit_check, to_filtered, to_mixed, unit_check
from mixedgraded.chain import cone, hom_chain, homology, is_acyclic, shift, tensor_chain, truncate_ge, truncate_le
from mixedgraded.filtered import complete, gr, is_complete
from mixedgraded.generate import GenConfig, gen_random, random_chain_map
from mixedgraded.mixed import (ANTICOMMUTING, COMMUTING, clever_truncate, convert_convention,
                               hom_mixed, mapping_complex, naive_truncate, realization,
                               tate_realization, tensor_mixed, unit_mixed, validate_mixed)
from mixedgraded.serialize import dumps, loads

CFG = GenConfig(max_dim=3, degree_span=(-3, 3), weight_span=(-2, 2))
seeds = st.integers(0, 2**32)
towers = st.sampled_from(["filtered-injective", "filtered-constant", "filtered-zero"])
fast = settings(max_examples=40, deadline=None)


def draw(kind, seed, n=1):
    rng = random.Random(seed)
    objs = [gen_random(kind, CFG, rng) for _ in range(n)]
    return objs if n > 1 else objs[0]


@fast
@given(seeds)
def test_chain_constructions_square_to_zero(seed):
    rng = random.Random(seed)
    a, b = gen_random("chain", CFG, rng), gen_random("chain", CFG, rng)
    f = random_chain_map(rng, a, b)
    for c in (cone(f), tensor_chain(a, b), hom_chain(a, b), shift(a, 3)):
        c.validate()
    assert cone(f).euler() == b.euler() - a.euler()


@fast
@given(seeds, st.integers(-3, 3))
def test_smart_truncation_splits_homology(seed, n):
    c = draw("chain", seed)
    h = homology(c).betti
    hi, lo = truncate_ge(c, n)[0], truncate_le(c, n - 1)[0]
    joined = dict(homology(hi).betti)
    joined.update(homology(lo).betti)
    assert joined == h


@fast
@given(seeds)
def test_mixed_constructions_validate(seed):
    a, b = draw("mixed", seed, 2)
    assert validate_mixed(tensor_mixed(a, b)).ok
    assert validate_mixed(hom_mixed(a, b)).ok
    realization(a).validate()
    tate_realization(a).validate()


@fast
@given(seeds)
def test_realization_is_mapping_complex_from_unit(seed):
    m = draw("mixed", seed)
    assert homology(realization(m)) == homology(mapping_complex(unit_mixed(0), m))


@fast
@given(seeds)
def test_convention_is_involution(seed):
    m = draw("mixed", seed)
    assert convert_convention(convert_convention(m, ANTICOMMUTING, COMMUTING), COMMUTING, ANTICOMMUTING) == m


@fast
@given(st.sampled_from(["chain", "graded", "mixed", "filtered-injective", "filtered-constant"]), seeds)
def test_serialization_round_trip(kind, seed):
    obj = draw(kind, seed)
    text = dumps(obj)
    assert dumps(loads(text)) == text


@fast
@given(seeds, st.integers(-2, 2))
def test_truncations_validate(seed, p):
    m = draw("mixed", seed)
    for d in ("le", "ge"):
        assert validate_mixed(naive_truncate(m, d, p)).ok
        assert validate_mixed(clever_truncate(m, d, p)).ok


@fast
@given(seeds)
def test_counit_and_tate(seed):
    m = draw("mixed", seed)
    assert counit_check(m).verdict
    assert tate_via_colimit_check(m)


@fast
@given(towers, seeds)
def test_unit_iff_complete_and_completion_keeps_gr(kind, seed):
    n = draw(kind, seed)
    assert unit_check(n).verdict == is_complete(n)
    c = complete(n)
    assert is_complete(c)
    for p in range(n.lo - 1, n.hi + 2):
        assert homology(gr(c, p)) == homology(gr(n, p))
    assert validate_mixed(to_mixed(n)).ok


@fast
@given(seeds, st.integers(-3, 3))
def test_postnikov_formula(seed, n):
    m = draw("mixed", seed)
    ge, le = postnikov_truncate(m, "ge", n), postnikov_truncate(m, "le", n)
    for q in range(-3, 4):
        assert homology(ge.part(q)) == homology(truncate_ge(m.part(q), n - q)[0])
        assert homology(le.part(q)) == homology(truncate_le(m.part(q), n - q)[0])


@fast
@given(seeds)
def test_embedding_gr(seed):
    m = draw("mixed", seed)
    f = to_filtered(m)
    for p in range(f.lo - 1, f.hi + 2):
        assert homology(gr(f, p)) == homology(shift(m.part(-p), -2 * p))
    assert all(is_acyclic(f.term(p)) for p in (f.hi + 1, f.hi + 5))
