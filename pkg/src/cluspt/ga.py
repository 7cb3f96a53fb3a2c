"""Evolutionary search over root vectors.

Operators:

* ``init_individual`` redraws one root per cluster until the roots induce a
  connected subgraph.
* ``crossover`` is two-point: the gene segment between two cut points is
  swapped and any child whose roots are disconnected is dropped.
* ``mutate`` re-roots one random cluster, trying its other vertices in random
  order until the chromosome is valid, and gives up unchanged otherwise.

The generational loop uses binary tournaments and elitist truncation of
parents plus offspring.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .decoder import Decoder, SolutionTree, format_solution, is_valid
from .errors import InfeasibleError, InstanceError
from .graph import ClusteredInstance

DEFAULT_ATTEMPTS = 1000


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 100
    generations: int = 500
    crossover_probability: float = 0.5
    mutation_rate: float = 0.05
    seed: int = 0
    elitism_count: int = 1
    max_init_attempts: int = DEFAULT_ATTEMPTS

    def __post_init__(self):
        if self.population_size < 2:
            raise InstanceError("population_size must be at least 2")
        if self.generations < 0:
            raise InstanceError("generations must be nonnegative")
        for name in ("crossover_probability", "mutation_rate"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise InstanceError(f"{name} must lie in [0, 1], got {p}")
        if not 0 <= self.elitism_count <= self.population_size:
            raise InstanceError("elitism_count must lie in [0, population_size]")

    @property
    def evaluation_budget(self) -> int:
        return self.population_size * self.generations


@dataclass
class Individual:
    chromosome: tuple
    cost: float
    birth: int


@dataclass
class RunRecord:
    instance: str
    config: GAConfig
    seed: int
    best_cost_history: list
    mean_cost_history: list
    diversity_history: list
    best_chromosome: tuple
    best_cost: float
    best_tree: SolutionTree
    evaluations_used: int
    wall_time: float = field(default=0.0, compare=False)

    @property
    def generations_run(self) -> int:
        return len(self.best_cost_history) - 1


def init_individual(inst: ClusteredInstance, rng: random.Random,
                    max_attempts: int = DEFAULT_ATTEMPTS, decoder: Optional[Decoder] = None) -> tuple:
    check = decoder.is_valid if decoder is not None else _validity(inst)
    clusters = inst.clusters
    for _ in range(max_attempts):
        chrom = tuple(rng.choice(members) for members in clusters)
        if check(chrom):
            return chrom
    raise InfeasibleError(
        f"no valid individual found for {inst.name!r} after {max_attempts} attempts")


def _validity(inst):
    return lambda chrom: is_valid(inst, chrom)


def crossover(inst: ClusteredInstance, p1: Sequence[int], p2: Sequence[int],
              rng: random.Random, decoder: Optional[Decoder] = None) -> list:
    """Two-point crossover; returns the valid children (zero, one or two)."""
    check = decoder.is_valid if decoder is not None else _validity(inst)
    k = len(p1)
    x1, x2 = rng.randrange(k), rng.randrange(k)
    if x1 > x2:
        x1, x2 = x2, x1
    c1, c2 = list(p1), list(p2)
    c1[x1:x2 + 1], c2[x1:x2 + 1] = c2[x1:x2 + 1], c1[x1:x2 + 1]
    return [c for c in (tuple(c1), tuple(c2)) if check(c)]


def mutate(inst: ClusteredInstance, p: Sequence[int], rng: random.Random,
           decoder: Optional[Decoder] = None) -> tuple:
    check = decoder.is_valid if decoder is not None else _validity(inst)
    p = tuple(p)
    j = rng.randrange(len(p))
    candidates = [v for v in inst.clusters[j] if v != p[j]]
    for x in rng.sample(candidates, len(candidates)):
        child = p[:j] + (x,) + p[j + 1:]
        if check(child):
            return child
    return p


def diversity(chromosomes: Sequence[Sequence[int]]) -> float:
    """Mean pairwise Hamming distance divided by chromosome length."""
    chromosomes = [c.chromosome if isinstance(c, Individual) else c for c in chromosomes]
    size = len(chromosomes)
    if size == 0:
        raise InstanceError("diversity of an empty population")
    if size == 1:
        return 0.0
    k = len(chromosomes[0])
    pairs = size * (size - 1) // 2
    differing = 0
    # pairs that disagree at gene j = all pairs minus pairs sharing a value
    for j in range(k):
        counts: dict = {}
        for c in chromosomes:
            counts[c[j]] = counts.get(c[j], 0) + 1
        differing += pairs - sum(c * (c - 1) // 2 for c in counts.values())
    return differing / (pairs * k)


def _tournament(pop, rng):
    a = rng.randrange(len(pop))
    b = rng.randrange(len(pop) - 1)
    if b >= a:
        b += 1
    ia, ib = pop[a], pop[b]
    if ib.cost < ia.cost or (ib.cost == ia.cost and b < a):
        return ib
    return ia


def _rank_key(ind):
    return (ind.cost, ind.birth, ind.chromosome)


def run(inst: ClusteredInstance, config: GAConfig = GAConfig(),
        decoder: Optional[Decoder] = None) -> RunRecord:
    start = time.perf_counter()
    dec = decoder if decoder is not None else Decoder(inst)
    rng = random.Random(config.seed)
    size = config.population_size
    budget = config.evaluation_budget
    births = 0
    pop = []
    for _ in range(size):
        chrom = init_individual(inst, rng, config.max_init_attempts, dec)
        pop.append(Individual(chrom, dec.cost(chrom), births))
        births += 1
    evaluations = size
    pop.sort(key=_rank_key)

    best_hist, mean_hist, div_hist = [], [], []

    def record():
        best_hist.append(pop[0].cost)
        mean_hist.append(sum(ind.cost for ind in pop) / len(pop))
        div_hist.append(diversity([ind.chromosome for ind in pop]))

    record()
    for _ in range(config.generations):
        if evaluations >= budget:
            break
        children = []
        for _ in range((size + 1) // 2):
            a = _tournament(pop, rng)
            b = _tournament(pop, rng)
            if rng.random() < config.crossover_probability:
                offspring = crossover(inst, a.chromosome, b.chromosome, rng, dec)
            else:
                offspring = [a.chromosome, b.chromosome]
            for chrom in offspring:
                if rng.random() < config.mutation_rate:
                    chrom = mutate(inst, chrom, rng, dec)
                children.append(Individual(chrom, dec.cost(chrom), births))
                births += 1
        evaluations += len(children)
        if config.elitism_count >= 1:
            pool = pop + children
        else:
            # non-elitist: offspring replace parents, parents only backfill
            children.sort(key=_rank_key)
            pool = children + pop[:max(0, size - len(children))]
        pool.sort(key=_rank_key)
        pop = pool[:size]
        record()

    best = pop[0]
    tree = dec.decode(best.chromosome).tree
    return RunRecord(
        instance=inst.name, config=config, seed=config.seed,
        best_cost_history=best_hist, mean_cost_history=mean_hist,
        diversity_history=div_hist, best_chromosome=best.chromosome,
        best_cost=best.cost, best_tree=tree, evaluations_used=evaluations,
        wall_time=time.perf_counter() - start)


def _fmt(x):
    return format(x, ".17g")


def format_run_record(record: RunRecord) -> str:
    """Line-delimited run trace.

    Wall time is left out so that equal seeds give byte-identical files.
    """
    c = record.config
    lines = [
        f"INSTANCE {record.instance}",
        f"SEED {record.seed}",
        f"CONFIG pop={c.population_size} gens={c.generations} cx={_fmt(c.crossover_probability)} "
        f"mut={_fmt(c.mutation_rate)} elitism={c.elitism_count}",
        f"EVALUATIONS {record.evaluations_used}",
    ]
    for i, (b, m, d) in enumerate(zip(record.best_cost_history, record.mean_cost_history,
                                      record.diversity_history)):
        lines.append(f"GEN {i} {_fmt(b)} {_fmt(m)} {_fmt(d)}")
    lines.append("CHROMOSOME " + " ".join(map(str, record.best_chromosome)))
    return "\n".join(lines) + "\n" + format_solution(record.best_tree, record.best_cost)
