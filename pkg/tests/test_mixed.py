import random

import pytest

from mixedgraded.chain import ChainComplex, hom_chain, homology, is_acyclic, shift
from mixedgraded.errors import InvariantViolation
from mixedgraded.generate import GenConfig, gen_chain, gen_graded, gen_mixed
from mixedgraded.graded import GradedComplex, hom_graded, homology_tables, tensor_graded
from mixedgraded.linalg import Matrix
from mixedgraded.mixed import (ANTICOMMUTING, COMMUTING, MixedComplex, clever_truncate,
                               convert_convention, dual, dualizability_check, free_mixed, hom_mixed,
                               l_eps, mapping_complex, naive_truncate, ncw, oblv, r_eps,
                               realization, tate_realization, tensor_mixed, triv, unit_mixed,
                               validate_mixed, zero_mixed)

from .oracles import mixed_count

CFG = GenConfig(max_dim=3, degree_span=(-3, 3), weight_span=(-2, 2))
Q0 = ChainComplex.point(0)


def randoms(n, seed, cfg=CFG):
    rng = random.Random(seed)
    return [gen_mixed(rng, cfg) for _ in range(n)]


def tables(m):
    return homology_tables(m.graded)


def test_validate_examples():
    g = gen_graded(random.Random(1), CFG)
    assert validate_mixed(triv(g)).ok
    assert validate_mixed(free_mixed(Q0, 0)).ok


def test_validate_catches_eps_square():
    # weights 2, 1, 0 with ε identities: ε∘ε from weight 2 is nonzero
    g = GradedComplex({2: ChainComplex.point(0), 1: ChainComplex.point(1), 0: ChainComplex.point(2)})
    eps = {2: {0: Matrix.identity(1)}, 1: {1: Matrix.identity(1)}}
    rep = validate_mixed(MixedComplex(g, eps, check=False))
    assert not rep.ok and rep.law.startswith("ε") and rep.weight == 2
    with pytest.raises(InvariantViolation):
        MixedComplex(g, eps)


def test_convert_convention():
    m = unit_mixed(0)
    assert convert_convention(m, COMMUTING, ANTICOMMUTING) == m
    # Free(Q[0] ⊕ Q[1]): ε from degree 1 flips sign, from degree 0 does not
    f = free_mixed(ChainComplex({0: 1, 1: 1}), 0)
    g = convert_convention(f, ANTICOMMUTING, COMMUTING)
    assert g.eps(0, 0) == f.eps(0, 0)
    assert g.eps(0, 1) == -f.eps(0, 1)
    for m in randoms(20, 2):
        back = convert_convention(convert_convention(m, ANTICOMMUTING, COMMUTING), COMMUTING, ANTICOMMUTING)
        assert back == m


def test_oblv_and_triv():
    assert triv(GradedComplex({0: Q0})) == unit_mixed(0)
    for a, b in zip(randoms(10, 3), randoms(10, 4)):
        assert tables(a) == homology_tables(oblv(a))
        assert oblv(tensor_mixed(a, b)) == tensor_graded(oblv(a), oblv(b))


def test_l_and_r_eps_on_unit():
    k = GradedComplex({0: Q0})
    l = l_eps(k)
    assert l.part(0).dims() == {0: 1} and l.part(-1).dims() == {1: 1}
    assert l.eps(0, 0) == Matrix.identity(1)
    r = r_eps(k)
    assert r.part(0).dims() == {0: 1} and r.part(1).dims() == {-1: 1}
    assert r.eps(1, -1) == Matrix.identity(1)


def test_l_eps_adjunction():
    rng = random.Random(5)
    small = GenConfig(max_dim=2, degree_span=(-2, 2), weight_span=(-1, 1))
    for _ in range(10):
        g, n = gen_graded(rng, small), gen_mixed(rng, small)
        lhs = homology(mapping_complex(l_eps(g), n))
        assert lhs == homology(hom_graded(g, oblv(n)).part(0))


def test_free_mixed_examples():
    f = free_mixed(Q0, 0)
    assert f.weights() == [-1, 0]
    assert f.eps(0, 0) == Matrix.identity(1)
    assert free_mixed(ChainComplex.zero(), 4).is_zero()
    assert is_acyclic(realization(f))


def test_free_weight_adjunction():
    rng = random.Random(6)
    small = GenConfig(max_dim=2, degree_span=(-2, 2), weight_span=(-2, 2))
    for _ in range(20):
        c, n = gen_chain(rng, small), gen_mixed(rng, small)
        q = rng.randint(-2, 2)
        assert homology(mapping_complex(free_mixed(c, q), n)) == homology(hom_chain(c, n.part(q)))


def test_tensor_examples():
    for m in randoms(10, 7):
        assert tensor_mixed(unit_mixed(0), m) == m
    assert tensor_mixed(unit_mixed(1, 2), unit_mixed(-2, 1)) == unit_mixed(-1, 3)
    f = free_mixed(Q0, 0)
    t = tensor_mixed(f, f)
    assert validate_mixed(t).ok
    assert {p: t.part(p).total_dim() for p in t.weights()} == {-2: 1, -1: 2, 0: 1}


def test_tensor_and_hom_validate():
    for a, b in zip(randoms(30, 8), randoms(30, 9)):
        assert validate_mixed(tensor_mixed(a, b)).ok
        assert validate_mixed(hom_mixed(a, b)).ok


def test_mapping_complex_of_consecutive_units():
    for i in range(-3, 4):
        h = homology(mapping_complex(unit_mixed(i, -2 * i), unit_mixed(i - 1, -2 * (i - 1))))
        assert h.betti == {0: 1}


def test_hom_unit():
    for m in randoms(10, 10):
        assert hom_mixed(unit_mixed(0), m) == m


def test_mapping_complex_counts_maps_mod_homotopy():
    # free sources are cofibrant, so strict maps modulo homotopy compute H_0
    rng = random.Random(11)
    small = GenConfig(max_dim=2, degree_span=(-1, 1), weight_span=(-1, 0))
    for _ in range(12):
        a = free_mixed(gen_chain(rng, small), 0)
        b = gen_mixed(rng, small)
        assert homology(mapping_complex(a, b))[0] == mixed_count(a, b)


def test_realization_examples():
    assert homology(realization(unit_mixed(0))).betti == {0: 1}
    assert realization(unit_mixed(1)).is_zero()
    assert homology(realization(unit_mixed(-1))).betti == {-2: 1}


def test_tate_examples():
    assert homology(tate_realization(unit_mixed(1))).betti == {2: 1}
    assert tate_realization(unit_mixed(0)) == realization(unit_mixed(0))
    assert is_acyclic(tate_realization(free_mixed(Q0, 1)))


def test_tate_agrees_on_nonpositive_support():
    for m in randoms(20, 12):
        m = naive_truncate(m, "le", 0)
        assert tate_realization(m) == realization(m)


def test_ncw_values():
    n = ncw(unit_mixed(0), range(-3, 5))
    for p in range(0, 5):
        assert homology(n.part(p)).betti == {-2 * p: 1}
    for p in range(-3, 0):
        assert homology(n.part(p)).is_zero()


def test_ncw_recovers_weight_three():
    c = gen_chain(random.Random(13), CFG)
    n = ncw(triv(GradedComplex({3: c})), [3])
    assert n.part(3) == c


def test_naive_truncation():
    f = free_mixed(Q0, 1)
    assert naive_truncate(f, "le", 0) == triv(GradedComplex({0: ChainComplex.point(1)}))
    assert naive_truncate(f, "ge", 1) == unit_mixed(1)
    for m in randoms(10, 14):
        for p in (-1, 0, 1):
            for q in (-2, 0, 2):
                both = naive_truncate(naive_truncate(m, "le", p), "le", q)
                assert both == naive_truncate(m, "le", min(p, q))
            t = naive_truncate(m, "le", p)
            for w in range(-4, 5):
                assert t.part(w).total_dim() == (m.part(w).total_dim() if w <= p else 0)


def test_clever_truncation_examples():
    f = free_mixed(Q0, 1)
    t = clever_truncate(f, "le", 0)
    assert all(is_acyclic(t.part(w)) for w in t.weights())
    assert is_acyclic(tate_realization(clever_truncate(f, "ge", 1)))
    for m in randoms(10, 15):
        pos = naive_truncate(m, "ge", 0)
        assert clever_truncate(pos, "ge", 0) == pos


def test_clever_truncation_adjunctions():
    rng = random.Random(16)
    small = GenConfig(max_dim=2, degree_span=(-2, 2), weight_span=(-2, 2))
    for _ in range(200):
        m, x = gen_mixed(rng, small), gen_mixed(rng, small)
        p = rng.randint(-1, 1)
        lo = naive_truncate(x, "le", p)
        assert homology(mapping_complex(clever_truncate(m, "le", p), lo)) == homology(mapping_complex(m, lo))
        hi = naive_truncate(x, "ge", p)
        assert homology(mapping_complex(hi, clever_truncate(m, "ge", p))) == homology(mapping_complex(hi, m))


def test_dual_rank_one():
    for p, n in [(0, 0), (2, -1), (-1, 3)]:
        assert dual(unit_mixed(p, n)) == unit_mixed(-p, -n)


def test_dualizability():
    for n in randoms(10, 17):
        assert dualizability_check(unit_mixed(1, -2), n)
        assert dualizability_check(free_mixed(Q0, 0), n)


def test_zero():
    assert zero_mixed().is_zero()
    assert realization(zero_mixed()).is_zero()
