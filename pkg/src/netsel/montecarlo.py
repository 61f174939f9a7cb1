"""Seeded stochastic simulation of the imitation chain.

Every run is reproducible from its spec alone.  Randomness comes from
the counter-based Philox generator: replica r of a run draws from the
stream ``Philox(key=seed).jumped(r)``, so replicas never share random
numbers, adding replicas never disturbs existing ones, and any
(spec, kernel) pair replays bit for bit.  Each imitation event consumes
exactly one uniform draw.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .chain import ChainStructureError, StationaryDistribution, TransitionKernel, classify

__all__ = [
    "SimulationSpec",
    "OccupancyHistogram",
    "RunResult",
    "AbsorptionFrequency",
    "step",
    "run",
    "absorption_frequency",
]

# Uniform draws are pulled from the generator in blocks of this size and
# consumed from a plain list; this keeps the per-event cost at python-loop
# speed without per-event generator calls.
_BLOCK = 65536

INITIAL_UNIFORM = "uniform-interior"


@dataclass(frozen=True)
class SimulationSpec:
    """What to simulate and how to seed it.

    seed            64-bit key of the Philox stream family
    steps           imitation events per replica (absorption runs treat
                    this as a cap instead)
    burn_in         events discarded before occupancy counting starts;
                    None resolves to min(10 * n^2, steps // 2) at run
                    time — a diffusive-mixing heuristic for a chain of
                    n states, floored at steps // 2 so counting always
                    happens
    replicas        independent repetitions
    initial_state   a concrete state, or "uniform-interior" to draw one
                    uniformly from 1..n-1 per replica (that draw is the
                    replica's first)
    """

    seed: int
    steps: int
    burn_in: int | None = None
    replicas: int = 1
    initial_state: int | str = INITIAL_UNIFORM

    def __post_init__(self) -> None:
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an integer in [0, 2^64), got {self.seed!r}")
        if not isinstance(self.steps, (int, np.integer)) or self.steps < 1:
            raise ValueError(f"steps must be a positive integer, got {self.steps!r}")
        if self.burn_in is not None:
            if not isinstance(self.burn_in, (int, np.integer)) or self.burn_in < 0:
                raise ValueError(f"burn_in must be a nonnegative integer, got {self.burn_in!r}")
            if self.burn_in >= self.steps:
                raise ValueError(
                    f"burn_in ({self.burn_in}) must be smaller than steps ({self.steps}), "
                    "otherwise no events remain to count"
                )
        if not isinstance(self.replicas, (int, np.integer)) or self.replicas < 1:
            raise ValueError(f"replicas must be a positive integer, got {self.replicas!r}")
        if isinstance(self.initial_state, str):
            if self.initial_state != INITIAL_UNIFORM:
                raise ValueError(
                    f"initial_state must be an integer or {INITIAL_UNIFORM!r}, "
                    f"got {self.initial_state!r}"
                )
        elif not isinstance(self.initial_state, (int, np.integer)) or self.initial_state < 0:
            raise ValueError(f"initial_state must be a nonnegative state, got {self.initial_state!r}")

    def resolve_burn_in(self, n: int) -> int:
        if self.burn_in is not None:
            return int(self.burn_in)
        return min(10 * n * n, self.steps // 2)


@dataclass(frozen=True)
class OccupancyHistogram:
    """Post-burn-in visit counts over the states k = 0..n."""

    counts: np.ndarray
    events_counted: int

    def __post_init__(self) -> None:
        counts = np.array(self.counts, dtype=np.int64)
        if counts.ndim != 1 or counts.size < 2 or counts.min() < 0:
            raise ValueError("counts must be a nonnegative vector over at least two states")
        if int(counts.sum()) != self.events_counted:
            raise ValueError(
                f"counts sum to {int(counts.sum())} but events_counted is {self.events_counted}"
            )
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    def frequencies(self) -> np.ndarray:
        """Visit frequencies; the empirical occupancy law."""
        return self.counts / self.events_counted

    def to_distribution(self) -> StationaryDistribution:
        return StationaryDistribution(psi=self.frequencies(), kind="empirical")


@dataclass(frozen=True)
class RunResult:
    """Everything a run produced.

    histogram     pooled post-burn-in occupancy over all replicas
    final_states  last state of each replica, in replica order
    trajectory    (event index, state) samples of replica 0 when a
                  decimation was requested, else None; row 0 is the
                  initial state at event 0
    """

    histogram: OccupancyHistogram
    final_states: np.ndarray
    trajectory: np.ndarray | None


@dataclass(frozen=True)
class AbsorptionFrequency:
    """Empirical absorption statistics over many replicas.

    Fractions and the mean cover absorbed replicas only; ``unabsorbed``
    counts replicas still interior when the event cap ran out.
    """

    fraction_at_0: float
    fraction_at_n: float
    mean_steps: float
    replicas: int
    unabsorbed: int


def step(kernel: TransitionKernel, state: int, rng: np.random.Generator) -> int:
    """Advance the chain by one imitation event, consuming one uniform draw.

    The draw u moves the state up when u < up[k], down when it falls in
    the next down[k]-wide slice, and leaves it in place otherwise.
    """
    n = kernel.n
    if not 0 <= state <= n:
        raise ValueError(f"state must lie in 0..{n}, got {state}")
    u = rng.random()
    if u < kernel.up[state]:
        return state + 1
    if u < kernel.up[state] + kernel.down[state]:
        return state - 1
    return state


def _resolve_initial(spec: SimulationSpec, n: int, gen: np.random.Generator) -> int:
    if isinstance(spec.initial_state, str):
        return int(gen.integers(1, n))
    k0 = int(spec.initial_state)
    if k0 > n:
        raise ValueError(f"initial_state {k0} exceeds the largest state {n}")
    return k0


def _advance(
    up: list[float],
    move: list[float],
    k: int,
    n_events: int,
    gen: np.random.Generator,
    counts: list[int] | None,
) -> int:
    """Advance n_events events; tally each post-event state when counting."""
    done = 0
    while done < n_events:
        m = min(_BLOCK, n_events - done)
        draws = gen.random(m).tolist()
        if counts is None:
            for u in draws:
                if u < up[k]:
                    k += 1
                elif u < move[k]:
                    k -= 1
        else:
            for u in draws:
                if u < up[k]:
                    k += 1
                elif u < move[k]:
                    k -= 1
                counts[k] += 1
        done += m
    return k


def _walk_traced(
    up: list[float],
    move: list[float],
    k: int,
    steps: int,
    burn: int,
    gen: np.random.Generator,
    counts: list[int],
    decimation: int,
) -> tuple[int, np.ndarray]:
    """Walk one replica while sampling its path every ``decimation`` events.

    Returns the final state and the (event, state) samples, which always
    include event 0 and the final event.  Post-burn-in states are tallied
    into ``counts`` exactly as the untraced walk would.
    """
    k0 = k
    if decimation == 1:
        states: list[int] = []
        done = 0
        while done < steps:
            m = min(_BLOCK, steps - done)
            for u in gen.random(m).tolist():
                if u < up[k]:
                    k += 1
                elif u < move[k]:
                    k -= 1
                states.append(k)
            done += m
        for s in states[burn:]:
            counts[s] += 1
        events = np.arange(steps + 1, dtype=np.int64)
        return k, np.column_stack((events, np.array([k0] + states, dtype=np.int64)))
    samples = [(0, k0)]
    t = 0
    while t < steps:
        # Stop at the next sampling point or at the burn-in boundary,
        # whichever comes first, so counting flips exactly at burn.
        nxt = min(steps, (t // decimation + 1) * decimation)
        if t < burn:
            nxt = min(nxt, burn)
        k = _advance(up, move, k, nxt - t, gen, counts if t >= burn else None)
        t = nxt
        if t % decimation == 0 or t == steps:
            samples.append((t, k))
    return k, np.array(samples, dtype=np.int64)


def run(
    spec: SimulationSpec,
    kernel: TransitionKernel,
    trajectory_decimation: int | None = None,
) -> RunResult:
    """Run all replicas of a spec and pool the post-burn-in occupancy.

    A decimation of d records replica 0's state every d events (plus the
    initial and final states); d = 1 keeps the full path.  Occupancy
    counts the state *after* each post-burn-in event, over all replicas.
    """
    if trajectory_decimation is not None and trajectory_decimation < 1:
        raise ValueError(f"trajectory_decimation must be >= 1, got {trajectory_decimation}")
    n = kernel.n
    burn = spec.resolve_burn_in(n)
    up = kernel.up.tolist()
    move = (kernel.up + kernel.down).tolist()
    counts = [0] * (n + 1)
    finals = np.zeros(spec.replicas, dtype=np.int64)
    trajectory: np.ndarray | None = None
    for r in range(spec.replicas):
        gen = np.random.Generator(np.random.Philox(key=spec.seed).jumped(r))
        k = _resolve_initial(spec, n, gen)
        if r == 0 and trajectory_decimation is not None:
            k, trajectory = _walk_traced(
                up, move, k, spec.steps, burn, gen, counts, trajectory_decimation
            )
        else:
            k = _advance(up, move, k, burn, gen, None)
            k = _advance(up, move, k, spec.steps - burn, gen, counts)
        finals[r] = k
    histogram = OccupancyHistogram(
        counts=np.array(counts, dtype=np.int64),
        events_counted=(spec.steps - burn) * spec.replicas,
    )
    return RunResult(histogram=histogram, final_states=finals, trajectory=trajectory)


def absorption_frequency(spec: SimulationSpec, kernel: TransitionKernel) -> AbsorptionFrequency:
    """Empirical absorption split over many replicas of an absorbing kernel.

    All replicas advance in lockstep from the single stream
    ``Philox(key=seed)``: each event consumes one uniform per still-active
    replica, in replica-index order, so results are bit-reproducible for a
    given (spec, kernel).  ``spec.steps`` caps each replica; replicas still
    interior at the cap are excluded from the fractions and the mean, and a
    warning is raised when they exceed 1% of the total.  ``spec.burn_in``
    is ignored — absorption has no stationary phase to wait for.
    """
    structure = classify(kernel)
    if structure.kind != "absorbing":
        raise ChainStructureError(
            f"absorption sampling needs an absorbing kernel, got {structure.kind} "
            f"({structure.detail})"
        )
    n = kernel.n
    total = spec.replicas
    gen = np.random.Generator(np.random.Philox(key=spec.seed))
    if isinstance(spec.initial_state, str):
        states = gen.integers(1, n, size=total).astype(np.int64)
    else:
        k0 = int(spec.initial_state)
        if k0 > n:
            raise ValueError(f"initial_state {k0} exceeds the largest state {n}")
        states = np.full(total, k0, dtype=np.int64)
    absorbed_at = np.full(total, -1, dtype=np.int64)
    steps_taken = np.zeros(total, dtype=np.int64)
    at_boundary = (states == 0) | (states == n)
    absorbed_at[at_boundary] = states[at_boundary]
    active_idx = np.flatnonzero(~at_boundary)
    k = states[active_idx]
    up = kernel.up
    move = kernel.up + kernel.down
    t = 0
    while active_idx.size and t < spec.steps:
        t += 1
        u = gen.random(k.size)
        p_up = up[k]
        p_move = move[k]
        k = k + (u < p_up).astype(np.int64) - ((u >= p_up) & (u < p_move)).astype(np.int64)
        hit = (k == 0) | (k == n)
        if hit.any():
            absorbed_at[active_idx[hit]] = k[hit]
            steps_taken[active_idx[hit]] = t
            keep = ~hit
            active_idx = active_idx[keep]
            k = k[keep]
    unabsorbed = int(active_idx.size)
    if unabsorbed > 0.01 * total:
        warnings.warn(
            f"{unabsorbed} of {total} replicas were still interior after {spec.steps} "
            "events; fractions cover absorbed replicas only",
            stacklevel=2,
        )
    done = absorbed_at >= 0
    n_done = int(done.sum())
    if n_done == 0:
        return AbsorptionFrequency(
            fraction_at_0=float("nan"),
            fraction_at_n=float("nan"),
            mean_steps=float("nan"),
            replicas=total,
            unabsorbed=unabsorbed,
        )
    return AbsorptionFrequency(
        fraction_at_0=float((absorbed_at == 0).sum() / n_done),
        fraction_at_n=float((absorbed_at == n).sum() / n_done),
        mean_steps=float(steps_taken[done].mean()),
        replicas=total,
        unabsorbed=unabsorbed,
    )
