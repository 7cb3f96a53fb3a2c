import math
import random

import pytest

from cluspt.decoder import (
    Decoder,
    SolutionTree,
    check_clustered_tree,
    decode,
    evaluate_direct,
    evaluate_fast,
    format_solution,
    is_valid,
    parse_solution,
    verify_solution,
)
from cluspt.errors import ContractError, DecodeError, InstanceError, ParseError
from cluspt.graph import INF, ClusteredInstance
from cluspt.instance_io import random_euclidean_instance
from support import random_explicit, valid_chromosomes


def _pairs(tree):
    return {(u, v) for u, v, _ in tree.edges}


def test_validity_examples(inst4, inst18):
    single = random_euclidean_instance(5, 1, 0)
    assert all(is_valid(single, (v,)) for v in single.vertices)
    assert is_valid(inst4, (2, 3))
    assert not is_valid(inst18, (3, 4, 11, 9, 15, 14))
    assert is_valid(inst18, (3, 4, 11, 9, 16, 14))


def test_validity_rejects_membership_violation(inst4):
    with pytest.raises(InstanceError):
        is_valid(inst4, (3, 1))
    with pytest.raises(InstanceError):
        is_valid(inst4, (1,))


def test_decode_micro4(inst4):
    assert _pairs(decode(inst4, (2, 3)).tree) == {(1, 2), (2, 3), (3, 4)}
    assert _pairs(decode(inst4, (1, 4)).tree) == {(1, 2), (1, 4), (3, 4)}


def test_decode_single_cluster_ignores_chromosome():
    inst = random_euclidean_instance(7, 1, 3)
    trees = {decode(inst, (v,)).tree for v in inst.vertices}
    assert len(trees) == 1
    tree = trees.pop()
    assert tree.inter_edges == ()
    costs = {evaluate_direct(inst, decode(inst, (v,)).tree) for v in inst.vertices}
    assert len(costs) == 1


def test_decode_source_cluster_rooted_at_source(inst4):
    d = decode(inst4, (2, 3))
    assert d.cluster_trees[0].root == 1
    assert d.cluster_trees[1].root == 3
    assert d.inter_tree.root == 2


def test_decode_rejects_invalid(inst18):
    with pytest.raises(ContractError):
        decode(inst18, (3, 4, 11, 9, 15, 14))


def test_decode_reports_disconnected_cluster():
    m = [[0, 1, INF], [1, 0, 1], [INF, 1, 0]]
    # cluster {1, 3} has no internal edge
    inst = ClusteredInstance("split", 3, ((1, 3), (2,)), 1, matrix=m)
    with pytest.raises(DecodeError, match="cluster 1"):
        decode(inst, (1, 2))


@pytest.mark.parametrize("chrom, expected", [((2, 3), 8.0), ((1, 4), 22.0), ((1, 3), 12.0), ((2, 4), 12.0)])
def test_costs_micro4(inst4, chrom, expected):
    d = decode(inst4, chrom)
    assert evaluate_direct(inst4, d.tree) == expected
    assert evaluate_fast(inst4, d).total == expected


def test_fast_breakdown_micro4(inst4):
    b = evaluate_fast(inst4, decode(inst4, (2, 3)))
    # cluster 1 hangs from the source: 0 + 1; cluster 2 from root 3 at distance 3: 2*3 + 1
    assert b.per_cluster == ((0.0, 1.0), (3.0, 1.0))
    b = evaluate_fast(inst4, decode(inst4, (1, 3)))
    assert b.per_cluster == ((0.0, 1.0), (5.0, 1.0))
    assert _pairs(decode(inst4, (1, 3)).tree) == {(1, 2), (1, 3), (3, 4)}


def test_single_vertex_cost_zero():
    inst = random_euclidean_instance(1, 1, 0)
    d = decode(inst, (1,))
    assert evaluate_direct(inst, d.tree) == 0.0
    assert evaluate_fast(inst, d).total == 0.0


def test_single_cluster_fast_is_plain_spt_cost():
    inst = random_euclidean_instance(9, 1, 8)
    d = decode(inst, (inst.source,))
    b = evaluate_fast(inst, d)
    assert b.total == sum(d.cluster_trees[0].dist.values())


def _random_case(rng):
    if rng.random() < 0.5:
        k = rng.randint(1, 8)
        return random_euclidean_instance(rng.randint(k, 40), k, rng.randrange(10**6))
    n = rng.randint(1, 25)
    return random_explicit(rng, n, rng.randint(1, n), density=1.0, integer=rng.random() < 0.3)


def test_clustered_tree_and_evaluator_equivalence_on_random_instances():
    rng = random.Random(11)
    checked = 0
    for _ in range(60):
        inst = _random_case(rng)
        dec = Decoder(inst)
        for chrom in valid_chromosomes(inst, rng, 20, dec):
            d = dec.decode(chrom)
            check_clustered_tree(inst, d.tree)
            roots = set(chrom)
            assert all(u in roots and v in roots for u, v, _ in d.tree.inter_edges)
            direct = evaluate_direct(inst, d.tree)
            fast = evaluate_fast(inst, d).total
            assert math.isclose(fast, direct, rel_tol=1e-9, abs_tol=1e-12)
            assert math.isclose(dec.cost(chrom), direct, rel_tol=1e-9, abs_tol=1e-12)
            checked += 1
    assert checked == 1200


def test_sparse_instances_decode_when_clusters_connected(inst18):
    rng = random.Random(2)
    dec = Decoder(inst18)
    for chrom in valid_chromosomes(inst18, rng, 50, dec):
        d = dec.decode(chrom)
        check_clustered_tree(inst18, d.tree)
        assert math.isclose(evaluate_fast(inst18, d).total, evaluate_direct(inst18, d.tree), rel_tol=1e-9)


def test_decode_is_deterministic():
    inst = random_euclidean_instance(30, 5, 4)
    for chrom in valid_chromosomes(inst, random.Random(0), 10, Decoder(inst)):
        assert decode(inst, chrom).tree == decode(inst, chrom).tree


def test_checker_rejects_broken_trees(inst4):
    good = decode(inst4, (2, 3)).tree
    check_clustered_tree(inst4, good)
    short = SolutionTree.from_edges(inst4, [(1, 2), (2, 3)])
    with pytest.raises(ContractError, match="edges"):
        check_clustered_tree(inst4, short)
    # spanning tree, but cluster {3, 4} is split by two inter-cluster edges
    split = SolutionTree.from_edges(inst4, [(1, 2), (2, 3), (1, 4)])
    with pytest.raises(ContractError):
        check_clustered_tree(inst4, split)
    cyclic = SolutionTree.from_edges(inst4, [(1, 2), (2, 3), (1, 3)])
    with pytest.raises(ContractError, match="cycle"):
        check_clustered_tree(inst4, cyclic)


def test_evaluate_direct_rejects_non_spanning(inst4):
    bad = SolutionTree.from_edges(inst4, [(1, 2), (3, 4), (2, 1)])
    with pytest.raises(ContractError):
        evaluate_direct(inst4, bad)


def test_solution_file_round_trip(inst4):
    d = decode(inst4, (2, 3))
    text = format_solution(d.tree, 8.0)
    assert text.splitlines() == ["COST 8", "EDGE 1 2 1", "EDGE 2 3 2", "EDGE 3 4 1", "SOURCE 1"]
    cost, edges, source = parse_solution(text)
    assert (cost, source) == (8.0, 1) and len(edges) == 3
    assert verify_solution(inst4, text) == 8.0


def test_verify_solution_catches_lies(inst4):
    d = decode(inst4, (2, 3))
    with pytest.raises(ContractError, match="declared cost"):
        verify_solution(inst4, format_solution(d.tree, 7.0))
    bad = "COST 12\nEDGE 1 2 1\nEDGE 2 4 4\nEDGE 1 3 5\nSOURCE 1\n"
    with pytest.raises(ContractError):
        verify_solution(inst4, bad)
    with pytest.raises(ParseError):
        parse_solution("COST x\nSOURCE 1\n")
