"""Binary genetic algorithm minimizing a nonnegative objective.

Chromosomes are fixed-length bit arrays (uint8 of 0/1). Each gene is an
unsigned integer decoded affinely onto a closed interval. Selection is
roulette wheel on fitness = 1 / (1 + objective), recombination is
one-point crossover (an n-point variant is available), mutation flips
each bit independently, and the best individuals are carried unchanged
into the next generation. All randomness flows through one
numpy Generator, so a run is reproducible from its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, GaRunError


@dataclass(frozen=True)
class Gene:
    """One search variable: closed interval [lower, upper] on `bits` bits."""

    lower: float
    upper: float
    bits: int = 16

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise DomainError("gene bounds must be finite")
        if not self.lower < self.upper:
            raise DomainError(f"need lower < upper, got [{self.lower}, {self.upper}]")
        if not 1 <= self.bits <= 53:
            raise DomainError(f"bits must be in [1, 53], got {self.bits}")


@dataclass(frozen=True)
class GeneLayout:
    genes: tuple[Gene, ...]

    def __post_init__(self):
        genes = tuple(self.genes)
        if len(genes) < 1:
            raise DomainError("layout needs at least one gene")
        object.__setattr__(self, "genes", genes)

    @property
    def total_bits(self) -> int:
        return sum(g.bits for g in self.genes)

    @property
    def num_genes(self) -> int:
        return len(self.genes)


@dataclass(frozen=True)
class GaConfig:
    """Run parameters. Defaults are the classic small-population set
    (population 50, crossover 0.6, mutation 0.001 per bit).

    max_generations is always the hard stop; a plateau rule
    (plateau_window generations with best-so-far improvement below
    plateau_epsilon) or a uniform-population rule can end the run
    earlier, at most one of the two.
    """

    population_size: int = 50
    crossover_prob: float = 0.6
    mutation_prob: float = 0.001
    elitism_count: int = 1
    max_generations: int = 500
    plateau_window: int | None = None
    plateau_epsilon: float = 0.0
    stop_on_uniform: bool = False
    crossover_points: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 2:
            raise DomainError(f"population_size must be >= 2, got {self.population_size}")
        for name in ("crossover_prob", "mutation_prob"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"{name} must be in [0, 1], got {v}")
        if not 0 <= self.elitism_count < self.population_size:
            raise DomainError(
                f"elitism_count must be in [0, population_size), got {self.elitism_count}"
            )
        if self.max_generations < 1:
            raise DomainError(f"max_generations must be >= 1, got {self.max_generations}")
        if self.plateau_window is not None and self.plateau_window < 1:
            raise DomainError(f"plateau_window must be >= 1, got {self.plateau_window}")
        if self.plateau_window is not None and self.stop_on_uniform:
            raise DomainError("enable at most one of plateau_window and stop_on_uniform")
        if self.crossover_points < 1:
            raise DomainError(f"crossover_points must be >= 1, got {self.crossover_points}")


@dataclass
class Individual:
    chromosome: np.ndarray
    objective_value: float
    fitness: float


@dataclass
class GaResult:
    """Best decoded parameters plus per-generation convergence history."""

    best_params: np.ndarray
    best_objective: float
    best_per_generation: np.ndarray
    mean_per_generation: np.ndarray

    @property
    def generations(self) -> int:
        """Generational updates performed after the initial population."""
        return self.best_per_generation.size - 1


@lru_cache(maxsize=None)
def _bit_weights(bits: int) -> np.ndarray:
    # MSB first
    return 2 ** np.arange(bits - 1, -1, -1, dtype=np.int64)


def decode(chromosome: np.ndarray, layout: GeneLayout) -> np.ndarray:
    """Map a chromosome to per-gene values.

    Gene value = lower + u * (upper - lower) / (2^bits - 1) for the
    unsigned MSB-first integer u, so all-zero bits decode to the lower
    bound exactly and all-one bits to the upper bound exactly.
    """
    if chromosome.size != layout.total_bits:
        raise DomainError(
            f"chromosome has {chromosome.size} bits, layout needs {layout.total_bits}"
        )
    values = np.empty(layout.num_genes)
    pos = 0
    for i, gene in enumerate(layout.genes):
        word = chromosome[pos : pos + gene.bits]
        u = int(word.astype(np.int64) @ _bit_weights(gene.bits))
        full = (1 << gene.bits) - 1
        if u == 0:
            values[i] = gene.lower
        elif u == full:
            values[i] = gene.upper
        else:
            frac = u / full
            values[i] = min(max(gene.lower + frac * (gene.upper - gene.lower),
                                gene.lower), gene.upper)
        pos += gene.bits
    return values


def fitness_from_objective(objective_value: float) -> float:
    """Default transform 1 / (1 + E), mapping E in [0, inf) to (0, 1]."""
    return 1.0 / (1.0 + objective_value)


def select_parent(population: list[Individual], rng: np.random.Generator) -> Individual:
    """Roulette wheel: selection probability proportional to fitness."""
    fits = np.array([ind.fitness for ind in population])
    if np.any(fits < 0):
        raise DomainError("fitness values must be nonnegative")
    total = float(fits.sum())
    if total <= 0.0:
        raise DomainError("all-zero fitness: roulette selection undefined")
    cum = np.cumsum(fits)
    draw = rng.random() * total
    idx = int(np.searchsorted(cum, draw, side="right"))
    return population[min(idx, len(population) - 1)]


def cross_at(p1: np.ndarray, p2: np.ndarray, cuts) -> tuple[np.ndarray, np.ndarray]:
    """Exchange suffix segments at the given sorted cut positions.

    A cut at position c splits a chromosome into [:c] and [c:]; segments
    alternate between parents after each cut.
    """
    c1 = p1.copy()
    c2 = p2.copy()
    swap = False
    bounds = list(cuts) + [p1.size]
    start = 0
    for stop in bounds:
        if swap:
            c1[start:stop] = p2[start:stop]
            c2[start:stop] = p1[start:stop]
        swap = not swap
        start = stop
    return c1, c2


def crossover_one_point(
    p1: np.ndarray,
    p2: np.ndarray,
    rng: np.random.Generator,
    crossover_prob: float,
) -> tuple[np.ndarray, np.ndarray]:
    """With probability crossover_prob, swap suffixes at a uniform cut
    in {1 .. len-1}; otherwise return copies of the parents."""
    if p1.size != p2.size:
        raise DomainError("parents must have equal length")
    if p1.size < 2:
        raise DomainError("chromosomes must have at least 2 bits to cross")
    if rng.random() >= crossover_prob:
        return p1.copy(), p2.copy()
    cut = int(rng.integers(1, p1.size))
    return cross_at(p1, p2, (cut,))


def crossover_n_point(
    p1: np.ndarray,
    p2: np.ndarray,
    rng: np.random.Generator,
    crossover_prob: float,
    points: int,
) -> tuple[np.ndarray, np.ndarray]:
    """n-point variant: `points` distinct cuts drawn without replacement."""
    if p1.size != p2.size:
        raise DomainError("parents must have equal length")
    if points >= p1.size:
        raise DomainError(f"{points} cut points need a chromosome longer than {p1.size}")
    if rng.random() >= crossover_prob:
        return p1.copy(), p2.copy()
    cuts = np.sort(rng.choice(p1.size - 1, size=points, replace=False) + 1)
    return cross_at(p1, p2, cuts)


def mutate_bitflip(
    chromosome: np.ndarray, rng: np.random.Generator, mutation_prob: float
) -> np.ndarray:
    """Flip each bit independently with probability mutation_prob."""
    mask = rng.random(chromosome.size) < mutation_prob
    return chromosome ^ mask.astype(np.uint8)


def _evaluate(chromosome: np.ndarray, objective, layout: GeneLayout) -> Individual:
    params = decode(chromosome, layout)
    value = float(objective(params))
    if not math.isfinite(value) or value < 0.0:
        raise GaRunError(
            f"objective returned {value!r} at parameters {params.tolist()}; "
            "a finite nonnegative value is required"
        )
    return Individual(chromosome, value, fitness_from_objective(value))


def run_ga(
    objective,
    layout: GeneLayout,
    config: GaConfig,
    rng: np.random.Generator | None = None,
) -> GaResult:
    """Minimize objective(decoded_params) over the layout's box.

    The population size stays constant; the elitism_count best
    individuals of each generation are carried over unevaluated, the
    rest are bred by roulette selection (self-pairing draws rejected),
    crossover, and bit-flip mutation. History tracks each generation's
    best and mean objective; the returned best is the best ever seen,
    which elitism makes non-increasing generation to generation.

    The objective must be finite and nonnegative everywhere on the box;
    anything else raises GaRunError naming the offending parameters.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)
    gamma = layout.total_bits
    pop_size = config.population_size

    chroms = rng.integers(0, 2, size=(pop_size, gamma), dtype=np.uint8)
    population = [_evaluate(c, objective, layout) for c in chroms]

    def gen_best(pop):
        return min(pop, key=lambda ind: ind.objective_value)

    best_ever = gen_best(population)
    best_ever = Individual(
        best_ever.chromosome.copy(), best_ever.objective_value, best_ever.fitness
    )
    hist_best = [best_ever.objective_value]
    hist_mean = [float(np.mean([ind.objective_value for ind in population]))]
    best_trace = [best_ever.objective_value]

    for _ in range(config.max_generations):
        if config.plateau_window is not None and len(best_trace) > config.plateau_window:
            gain = best_trace[-1 - config.plateau_window] - best_trace[-1]
            if gain < config.plateau_epsilon:
                break
        if config.stop_on_uniform and all(
            np.array_equal(ind.chromosome, population[0].chromosome)
            for ind in population[1:]
        ):
            break

        elites = sorted(population, key=lambda ind: ind.objective_value)
        next_pop = [
            Individual(e.chromosome.copy(), e.objective_value, e.fitness)
            for e in elites[: config.elitism_count]
        ]
        while len(next_pop) < pop_size:
            p1 = select_parent(population, rng)
            p2 = select_parent(population, rng)
            while p2 is p1:
                p2 = select_parent(population, rng)
            if config.crossover_points == 1:
                c1, c2 = crossover_one_point(
                    p1.chromosome, p2.chromosome, rng, config.crossover_prob
                )
            else:
                c1, c2 = crossover_n_point(
                    p1.chromosome, p2.chromosome, rng, config.crossover_prob,
                    config.crossover_points,
                )
            # mutate both children even when only one fits, so the rng
            # stream does not depend on population parity
            c1 = mutate_bitflip(c1, rng, config.mutation_prob)
            c2 = mutate_bitflip(c2, rng, config.mutation_prob)
            next_pop.append(_evaluate(c1, objective, layout))
            if len(next_pop) < pop_size:
                next_pop.append(_evaluate(c2, objective, layout))
        population = next_pop

        current = gen_best(population)
        if current.objective_value < best_ever.objective_value:
            best_ever = Individual(
                current.chromosome.copy(), current.objective_value, current.fitness
            )
        hist_best.append(min(ind.objective_value for ind in population))
        hist_mean.append(float(np.mean([ind.objective_value for ind in population])))
        best_trace.append(best_ever.objective_value)

    return GaResult(
        best_params=decode(best_ever.chromosome, layout),
        best_objective=best_ever.objective_value,
        best_per_generation=np.array(hist_best),
        mean_per_generation=np.array(hist_mean),
    )
