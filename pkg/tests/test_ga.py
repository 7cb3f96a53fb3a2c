import itertools
import random

import pytest

from cluspt.decoder import Decoder, is_valid
from cluspt.errors import InfeasibleError, InstanceError
from cluspt.ga import (
    GAConfig,
    crossover,
    diversity,
    format_run_record,
    init_individual,
    mutate,
    run,
)
from cluspt.graph import INF, ClusteredInstance
from cluspt.instance_io import random_euclidean_instance
from support import ScriptedRng, random_explicit, valid_chromosomes


def test_config_defaults():
    c = GAConfig()
    assert (c.population_size, c.generations, c.crossover_probability, c.mutation_rate) == (100, 500, 0.5, 0.05)
    assert c.evaluation_budget == 50_000
    with pytest.raises(InstanceError):
        GAConfig(population_size=1)
    with pytest.raises(InstanceError):
        GAConfig(mutation_rate=1.5)


def test_init_single_cluster():
    inst = random_euclidean_instance(6, 1, 0)
    chrom = init_individual(inst, random.Random(1))
    assert len(chrom) == 1 and chrom[0] in inst.clusters[0]


def test_init_micro4_always_valid(inst4):
    allowed = {(1, 3), (1, 4), (2, 3), (2, 4)}
    assert all(is_valid(inst4, c) for c in allowed)
    seen = {init_individual(inst4, random.Random(s)) for s in range(100)}
    assert seen <= allowed and len(seen) == 4


def test_init_deterministic(inst18):
    assert init_individual(inst18, random.Random(5)) == init_individual(inst18, random.Random(5))


def test_init_gives_up_on_infeasible_instance():
    m = [[0, INF], [INF, 0]]
    inst = ClusteredInstance("apart", 2, ((1,), (2,)), 1, matrix=m)
    with pytest.raises(InfeasibleError, match="no valid individual"):
        init_individual(inst, random.Random(0), max_attempts=50)


def test_crossover_one_gene_segment(inst18):
    p1 = (3, 4, 11, 9, 16, 14)
    p2 = (1, 5, 7, 8, 15, 12)
    # cut points both at gene 5: child 1 becomes (3, 4, 11, 9, 15, 14), which is disconnected
    kids = crossover(inst18, p1, p2, ScriptedRng(randranges=[4, 4]))
    assert kids == [(1, 5, 7, 8, 16, 12)]
    for kid, parent in zip(kids, [p2]):
        assert sum(a != b for a, b in zip(kid, parent)) == 1


def test_crossover_full_swap(inst18):
    p1 = (3, 4, 11, 9, 16, 14)
    p2 = (1, 5, 7, 8, 15, 12)
    assert crossover(inst18, p1, p2, ScriptedRng(randranges=[5, 0])) == [p2, p1]


def test_crossover_orders_cut_points(inst4):
    kids = crossover(inst4, (1, 3), (2, 4), ScriptedRng(randranges=[1, 0]))
    assert kids == [(2, 4), (1, 3)]


def test_mutate_singleton_cluster():
    inst = ClusteredInstance("s", 3, ((1,), (2, 3)), 1, coords=((0, 0), (1, 0), (2, 0)))
    assert mutate(inst, (1, 2), ScriptedRng(randranges=[0], samples=[[]])) == (1, 2)


def test_mutate_micro4(inst4):
    assert mutate(inst4, (2, 3), ScriptedRng(randranges=[0], samples=[[1]])) == (1, 3)


def test_mutate_skips_invalid_replacement(inst18):
    p = (3, 4, 11, 9, 16, 14)
    assert not is_valid(inst18, (3, 4, 11, 9, 16, 13))
    out = mutate(inst18, p, ScriptedRng(randranges=[5], samples=[[13, 12]]))
    assert out == (3, 4, 11, 9, 16, 12)


def test_mutate_returns_parent_when_exhausted():
    # vertex 3 only connects to 1; re-rooting cluster 2 at 4 disconnects the roots
    m = [[0, 1, 1, INF], [1, 0, INF, INF], [1, INF, 0, 1], [INF, INF, 1, 0]]
    inst = ClusteredInstance("x", 4, ((1, 2), (3, 4)), 1, matrix=m)
    assert mutate(inst, (1, 3), ScriptedRng(randranges=[1], samples=[[4]])) == (1, 3)


def test_mutation_changes_at_most_one_gene(inst18):
    rng = random.Random(4)
    dec = Decoder(inst18)
    for p in valid_chromosomes(inst18, rng, 200, dec):
        c = mutate(inst18, p, rng, dec)
        assert sum(a != b for a, b in zip(p, c)) <= 1
        assert dec.is_valid(c)


def test_operators_preserve_membership_and_validity():
    rng = random.Random(9)
    for _ in range(20):
        n = rng.randint(4, 20)
        inst = random_explicit(rng, n, rng.randint(2, min(6, n)), density=0.5)
        dec = Decoder(inst)
        try:
            parents = [init_individual(inst, rng, 200, dec) for _ in range(10)]
        except InfeasibleError:
            continue
        for a, b in itertools.combinations(parents, 2):
            for kid in crossover(inst, a, b, rng, dec):
                assert all(inst.cluster_of(v) == i for i, v in enumerate(kid))
                assert dec.is_valid(kid)


def test_diversity_examples():
    assert diversity([(1, 3)] * 5) == 0.0
    assert diversity([(1, 3), (2, 4)]) == 1.0
    assert diversity([(1, 3), (1, 4), (2, 3)]) == pytest.approx(2 / 3)
    assert diversity([(1, 3)]) == 0.0


def test_diversity_matches_pairwise_definition():
    rng = random.Random(0)
    for _ in range(30):
        k = rng.randint(1, 6)
        pop = [tuple(rng.randint(1, 3) for _ in range(k)) for _ in range(rng.randint(2, 12))]
        pairs = list(itertools.combinations(pop, 2))
        brute = sum(sum(a != b for a, b in zip(x, y)) / k for x, y in pairs) / len(pairs)
        assert diversity(pop) == pytest.approx(brute, rel=1e-12)


def test_run_finds_micro4_optimum(inst4):
    for seed in range(5):
        rec = run(inst4, GAConfig(seed=seed))
        assert rec.best_cost == 8.0 and rec.best_chromosome == (2, 3)


def test_run_is_deterministic():
    inst = random_euclidean_instance(40, 6, 2)
    cfg = GAConfig(population_size=30, generations=40, seed=17)
    a, b = run(inst, cfg), run(inst, cfg)
    assert a == b
    assert format_run_record(a) == format_run_record(b)


def test_run_history_and_budget():
    inst = random_euclidean_instance(50, 7, 5)
    cfg = GAConfig(population_size=20, generations=60, seed=3)
    rec = run(inst, cfg)
    h = rec.best_cost_history
    assert all(b <= a for a, b in zip(h, h[1:]))
    assert len(h) == len(rec.mean_cost_history) == len(rec.diversity_history)
    assert all(0.0 <= d <= 1.0 for d in rec.diversity_history)
    assert rec.evaluations_used <= cfg.population_size * cfg.generations + cfg.population_size
    assert rec.generations_run <= cfg.generations
    assert rec.best_cost == h[-1] == pytest.approx(min(h))


def test_run_without_elitism_still_valid():
    inst = random_euclidean_instance(30, 5, 1)
    rec = run(inst, GAConfig(population_size=10, generations=20, seed=1, elitism_count=0))
    assert Decoder(inst).cost(rec.best_chromosome) == rec.best_cost


def test_run_record_format(inst4):
    rec = run(inst4, GAConfig(population_size=4, generations=3, seed=0))
    lines = format_run_record(rec).splitlines()
    assert lines[0] == "INSTANCE micro4"
    assert lines[1] == "SEED 0"
    assert lines[2].startswith("CONFIG pop=4 gens=3")
    gens = [ln for ln in lines if ln.startswith("GEN ")]
    assert len(gens) == rec.generations_run + 1
    assert lines[-1] == "SOURCE 1"
    assert any(ln.startswith("COST ") for ln in lines)
