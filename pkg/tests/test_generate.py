import random

import pytest

from mixedgraded.generate import KINDS, GenConfig, gen_random, random_invertible, rng_for
from mixedgraded.linalg import Matrix, rank
from mixedgraded.mixed import validate_mixed
from mixedgraded.serialize import dumps


def test_determinism():
    cfg = GenConfig(seed=1)
    a = gen_random("chain", cfg, rng_for(cfg, "x"))
    b = gen_random("chain", cfg, rng_for(cfg, "x"))
    assert a == b
    assert dumps(gen_random("mixed", cfg, rng_for(cfg, 3))) == dumps(gen_random("mixed", cfg, rng_for(cfg, 3)))


def test_config_validation():
    with pytest.raises(ValueError):
        GenConfig(max_dim=0)
    with pytest.raises(ValueError):
        GenConfig(degree_span=(2, 1))
    with pytest.raises(ValueError):
        GenConfig(trials=-1)


def test_unknown_kind():
    with pytest.raises(ValueError):
        gen_random("sheaf", GenConfig())


def test_random_invertible():
    rng = random.Random(0)
    for n in range(5):
        p, q = random_invertible(rng, n)
        assert p @ q == Matrix.identity(n)


def test_mixed_draws_validate():
    cfg = GenConfig(seed=2)
    rng = rng_for(cfg, "mixed")
    for _ in range(300):
        assert validate_mixed(gen_random("mixed", cfg, rng)).ok


def test_respects_bounds():
    cfg = GenConfig(max_dim=2, degree_span=(-1, 1), weight_span=(0, 1))
    rng = random.Random(4)
    for _ in range(100):
        m = gen_random("mixed", cfg, rng)
        for p in m.weights():
            assert 0 <= p <= 1
            assert all(-1 <= n <= 1 and d <= 2 for n, d in m.part(p).dims().items())


def test_injective_transitions_by_rank():
    cfg = GenConfig(seed=5)
    rng = rng_for(cfg, "inj")
    for _ in range(100):
        t = gen_random("filtered-injective", cfg, rng)
        for p in range(t.lo, t.hi):
            f = t.transition(p)
            assert all(rank(f.at(n)) == f.source.dim(n) for n in f.source.degrees())


@pytest.mark.parametrize("kind", KINDS)
def test_every_kind_draws(kind):
    cfg = GenConfig(seed=6)
    rng = rng_for(cfg, kind)
    objs = [gen_random(kind, cfg, rng) for _ in range(20)]
    assert any(not o.is_zero() for o in objs)
