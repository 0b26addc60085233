"""NSGA-II over refactoring sequences."""

import logging
import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from archopt.model import Architecture
from archopt.objectives import Evaluator, Objective, ObjectiveVector, ordered
from archopt.refactor import (
    RefactoringAction,
    RefactoringSequence,
    apply_sequence,
    random_action,
    random_sequence,
    repair,
)

from .config import ExperimentConfig

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class Individual:
    """A refactoring sequence and its objectives.

    Args:
        genotype (RefactoringSequence): The sequence
        phenotype (ObjectiveVector): Its objectives
        rank (int): Non-domination rank, 0 for the first front
        crowding (float): Crowding distance within its front
        solution_id (str): Id given once the individual is written to a front file
        run (int | None): Run that produced the individual

    """

    genotype: RefactoringSequence
    phenotype: ObjectiveVector
    rank: int = 0
    crowding: float = 0.0
    solution_id: str = ""
    run: int | None = None


def _dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    strictly_better = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            strictly_better = True
    return strictly_better


def dominates(
    a: ObjectiveVector,
    b: ObjectiveVector,
    objective_set: Iterable[Objective] | None = None,
) -> bool:
    """Pareto dominance under minimization.

    Args:
        a (ObjectiveVector): Candidate dominating vector
        b (ObjectiveVector): Candidate dominated vector
        objective_set (Iterable[Objective] | None): Objectives compared, the active
            objectives of ``a`` by default

    Returns:
        bool: Whether ``a`` is no worse than ``b`` on every objective and better on
        at least one; infinite values compare as worst

    """
    objectives = a.active if objective_set is None else frozenset(objective_set)
    return _dominates(a.values(objectives), b.values(objectives))


def fast_nondominated_sort(
    population: list[Individual], objective_set: Iterable[Objective]
) -> list[list[Individual]]:
    """Partition a population into ranked fronts, setting each ``rank``.

    Args:
        population (list[Individual]): Evaluated individuals
        objective_set (Iterable[Objective]): Objectives compared

    Returns:
        list[list[Individual]]: Fronts, best first

    """
    objectives = frozenset(objective_set)
    values = [ind.phenotype.values(objectives) for ind in population]
    dominated_by: list[list[int]] = [[] for _ in population]
    domination_count = [0] * len(population)
    current: list[int] = []
    for i, first in enumerate(values):
        for j in range(i + 1, len(values)):
            if _dominates(first, values[j]):
                dominated_by[i].append(j)
                domination_count[j] += 1
            elif _dominates(values[j], first):
                dominated_by[j].append(i)
                domination_count[i] += 1
    current = [i for i, count in enumerate(domination_count) if count == 0]
    fronts: list[list[Individual]] = []
    rank = 0
    while current:
        following: list[int] = []
        for i in current:
            population[i].rank = rank
            for j in dominated_by[i]:
                domination_count[j] -= 1
                if domination_count[j] == 0:
                    following.append(j)
        fronts.append([population[i] for i in current])
        current = sorted(following)
        rank += 1
    return fronts


def crowding_distance(front: list[Individual], objective_set: Iterable[Objective]):
    """Assign crowding distances within a front.

    Boundary individuals of every objective get infinity; interior ones accumulate
    the gap between their neighbors normalized by the objective's range. Objectives
    with a zero or infinite range add nothing to interior individuals.

    """
    for individual in front:
        individual.crowding = 0.0
    if len(front) <= 2:
        for individual in front:
            individual.crowding = math.inf
        return
    for objective in ordered(objective_set):
        ranked = sorted(front, key=lambda ind, o=objective: ind.phenotype.value(o))
        low = ranked[0].phenotype.value(objective)
        high = ranked[-1].phenotype.value(objective)
        ranked[0].crowding = ranked[-1].crowding = math.inf
        span = high - low
        if span == 0 or not math.isfinite(span):
            continue
        for previous, current, following in zip(ranked, ranked[1:], ranked[2:]):
            gap = following.phenotype.value(objective) - previous.phenotype.value(
                objective
            )
            current.crowding += gap / span


def nondominated(
    individuals: Iterable[Individual], objective_set: Iterable[Objective]
) -> list[Individual]:
    """Individuals no other individual dominates, in input order."""
    pool = list(individuals)
    objectives = frozenset(objective_set)
    values = [ind.phenotype.values(objectives) for ind in pool]
    return [
        ind
        for ind, mine in zip(pool, values)
        if not any(_dominates(other, mine) for other in values)
    ]


def super_front(
    fronts: Iterable[Iterable[Individual]], objective_set: Iterable[Objective]
) -> list[Individual]:
    """Non-dominated individuals of the union of several fronts.

    Individuals with the same genotype and the same four objective values are kept
    once.

    """
    seen: set[tuple] = set()
    union: list[Individual] = []
    for front in fronts:
        for individual in front:
            key = (individual.genotype, tuple(individual.phenotype.as_dict().values()))
            if key not in seen:
                seen.add(key)
                union.append(individual)
    return [
        Individual(
            ind.genotype, ind.phenotype, 0, ind.crowding, ind.solution_id, ind.run
        )
        for ind in nondominated(union, objective_set)
    ]


class NSGA2:
    """One NSGA-II run.

    Args:
        config (ExperimentConfig): Experiment settings
        arch0 (Architecture): The initial architecture
        rng (random.Random): Generator owned by this run
        evaluator (Evaluator | None): Evaluator to use, one is built from the
            configuration by default

    """

    def __init__(
        self,
        config: ExperimentConfig,
        arch0: Architecture,
        rng: random.Random,
        evaluator: Evaluator | None = None,
    ):
        self.config = config
        self.arch0 = arch0
        self.rng = rng
        self.objectives = config.objective_set
        self.evaluator = evaluator or Evaluator(
            arch0, config.params, config.complexity, config.objective_set
        )
        self.generation = 0
        self.history: list[dict[Objective, float]] = []

    def _individual(self, genotype: RefactoringSequence) -> Individual:
        return Individual(genotype, self.evaluator(genotype))

    def initial_population(self) -> list[Individual]:
        """Random feasible sequences of length 1 to the maximum."""
        return [
            self._individual(
                random_sequence(self.arch0, self.rng, self.config.max_sequence_length)
            )
            for _ in range(self.config.population_size)
        ]

    def tournament(self, population: list[Individual]) -> Individual:
        """Binary tournament on rank, then crowding distance."""
        first, second = self.rng.sample(population, 2)
        if (second.rank, -second.crowding) < (first.rank, -first.crowding):
            return second
        return first

    def crossover(
        self, first: RefactoringSequence, second: RefactoringSequence
    ) -> tuple[RefactoringSequence, RefactoringSequence]:
        """Swap tails at a cut point chosen independently in each parent."""
        limit = self.config.max_sequence_length
        i = self.rng.randint(0, len(first))
        j = self.rng.randint(0, len(second))
        return (
            RefactoringSequence((first[:i] + second[j:])[:limit], limit),
            RefactoringSequence((second[:j] + first[i:])[:limit], limit),
        )

    def mutate(self, genotype: RefactoringSequence) -> RefactoringSequence:
        """Replace one uniformly chosen gene, or add one to an empty sequence.

        The replacement is drawn against the architecture produced by the genes
        before it, so ``genotype`` must be feasible.

        """
        actions: list[RefactoringAction] = list(genotype)
        index = self.rng.randrange(len(actions)) if actions else 0
        prefix = RefactoringSequence(tuple(actions[:index]), genotype.max_length)
        arch = apply_sequence(prefix, self.arch0).architecture
        replacement = random_action(arch, self.rng)
        if actions:
            actions[index] = replacement
        else:
            actions.append(replacement)
        return RefactoringSequence(tuple(actions), genotype.max_length)

    def offspring(self, population: list[Individual]) -> list[Individual]:
        """Generate as many offspring as the population size."""
        children: list[Individual] = []
        while len(children) < self.config.population_size:
            first = self.tournament(population).genotype
            second = self.tournament(population).genotype
            if self.rng.random() < self.config.crossover_prob:
                first, second = self.crossover(first, second)
            for genotype in (first, second):
                genotype = repair(genotype, self.arch0, self.rng)
                if self.rng.random() < self.config.mutation_prob:
                    genotype = repair(self.mutate(genotype), self.arch0, self.rng)
                children.append(self._individual(genotype))
        return children[: self.config.population_size]

    def select(self, candidates: list[Individual]) -> list[Individual]:
        """(mu + lambda) environmental selection by rank, then crowding."""
        survivors: list[Individual] = []
        for front in fast_nondominated_sort(candidates, self.objectives):
            crowding_distance(front, self.objectives)
            room = self.config.population_size - len(survivors)
            if len(front) <= room:
                survivors.extend(front)
                continue
            survivors.extend(
                sorted(front, key=lambda ind: ind.crowding, reverse=True)[:room]
            )
            break
        return survivors

    def _record(self, population: list[Individual]):
        best = {
            objective: min(ind.phenotype.value(objective) for ind in population)
            for objective in ordered(self.objectives)
        }
        self.history.append(best)
        logger.debug("Generation %d best: %s", self.generation, best)

    def evolve(self) -> list[Individual]:
        """Run all generations.

        Returns:
            list[Individual]: The first front of the final population

        Raises:
            ActionSamplingError: If the architecture admits no action at all

        """
        population = self.select(self.initial_population())
        self._record(population)
        for self.generation in range(1, self.config.max_generations + 1):
            population = self.select(population + self.offspring(population))
            self._record(population)
        front = fast_nondominated_sort(population, self.objectives)[0]
        crowding_distance(front, self.objectives)
        return front


def evolve(
    config: ExperimentConfig,
    arch0: Architecture,
    rng: random.Random,
    evaluator: Evaluator | None = None,
) -> list[Individual]:
    """Run NSGA-II once and return the first front of the final population."""
    return NSGA2(config, arch0, rng, evaluator).evolve()
