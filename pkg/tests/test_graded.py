import random

from mixedgraded.chain import ChainComplex, direct_sum, homology
from mixedgraded.generate import GenConfig, gen_graded
from mixedgraded.graded import (GradedComplex, graded_sum, hom_graded, homology_tables,
                                insert_at_weight, tensor_graded, unit_graded, weight_part,
                                weight_shift)

CFG = GenConfig(max_dim=3, degree_span=(-3, 3), weight_span=(-2, 2))


def randoms(n, seed):
    rng = random.Random(seed)
    return [gen_graded(rng, CFG) for _ in range(n)]


def test_insert_and_part():
    g = insert_at_weight(ChainComplex.point(0), 3)
    assert weight_part(g, 3) == ChainComplex.point(0)
    assert weight_part(g, 2).is_zero()


def test_part_commutes_with_sums():
    a, b = randoms(2, 1)
    s = graded_sum(a, b)
    for p in range(-3, 4):
        assert s.part(p).dims() == direct_sum(a.part(p), b.part(p)).dims()


def test_weight_shift():
    assert weight_shift(unit_graded(0), 2) == unit_graded(2)
    for m in randoms(5, 2):
        assert weight_shift(weight_shift(m, 1), -1) == m
        shifted = homology_tables(weight_shift(m, 2))
        assert shifted == {p + 2: h for p, h in homology_tables(m).items()}


def test_rank_one_tensor_and_hom():
    for a, m, b, n in [(0, 0, 1, 2), (-1, 3, 2, -1), (2, -2, -2, 2)]:
        assert tensor_graded(unit_graded(a, m), unit_graded(b, n)) == unit_graded(a + b, m + n)
        h = hom_graded(unit_graded(a, m), unit_graded(b, n))
        assert homology_tables(h) == homology_tables(unit_graded(b - a, n - m))


def test_weightwise_kunneth():
    for a, b in zip(randoms(6, 3), randoms(6, 4)):
        t = tensor_graded(a, b)
        for p in range(-5, 6):
            expect = {}
            for i in a.weights():
                for x, u in homology(a.part(i)).betti.items():
                    for y, v in homology(b.part(p - i)).betti.items():
                        expect[x + y] = expect.get(x + y, 0) + u * v
            assert homology(t.part(p)).betti == {k: v for k, v in sorted(expect.items()) if v}


def test_unit_laws_and_support():
    for m in randoms(5, 5):
        assert tensor_graded(unit_graded(0), m) == m
        assert hom_graded(unit_graded(0), m) == m
    for a, b in zip(randoms(5, 6), randoms(5, 7)):
        sums = {i + j for i in a.weights() for j in b.weights()}
        assert set(tensor_graded(a, b).weights()) <= sums


def test_tensor_associative_dims():
    a, b, c = randoms(3, 8)
    l = tensor_graded(tensor_graded(a, b), c)
    r = tensor_graded(a, tensor_graded(b, c))
    assert {p: x.dims() for p, x in l.parts().items()} == {p: x.dims() for p, x in r.parts().items()}
    assert homology_tables(l) == homology_tables(r)


def test_empty_graded():
    assert GradedComplex().is_zero()
