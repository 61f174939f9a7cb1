"""Birth-death Markov chain of the imitation process.

The state k counts the genuine primary users in a population of n; one
imitation event moves k by at most one.  Each network operator may plant
*anchored* users — shills that never revise their own choice but are
sampled as opponents like anyone else.  Anchors tilt the transition
weights and, crucially, remove the absorbing all-primary/all-secondary
traps of the plain chain: with at least one anchor on each side and a
strictly positive rule the chain is irreducible and its stationary law
exists in closed form.

Three independent routes to the stationary distribution are provided:
the birth-death product form, a linear-algebra eigenvector route, and
(in :mod:`netsel.montecarlo`) empirical occupancy.  They are kept
separate on purpose so each can cross-check the others.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from . import model
from .model import NetworkParams
from .protocols import ImitationRule, PairwiseProportional

__all__ = [
    "ChainStructureError",
    "PopulationConfig",
    "TransitionKernel",
    "ChainClass",
    "StationaryDistribution",
    "AbsorptionResult",
    "build_kernel",
    "classify",
    "stationary_noise_free",
    "stationary_product",
    "stationary_eigen",
    "absorption_analysis",
    "distribution_mode",
    "total_variation",
    "detailed_balance_residual",
]

_DISTRIBUTION_KINDS = ("two_point_noise_free", "product_form", "eigenvector", "empirical")


class ChainStructureError(ValueError):
    """An analysis was asked of a kernel whose structure does not support it."""


@dataclass(frozen=True)
class PopulationConfig:
    """Genuine population size plus per-operator anchored users.

    n                   genuine (revising) users; at least 2
    anchored_primary    operator-planted users pinned to the primary network
    anchored_secondary  operator-planted users pinned to the secondary network
    """

    n: int
    anchored_primary: int = 0
    anchored_secondary: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool) or self.n < 2:
            raise ValueError(f"population needs at least 2 genuine users, got n={self.n!r}")
        for name in ("anchored_primary", "anchored_secondary"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")


@dataclass(frozen=True)
class TransitionKernel:
    """Per-state move probabilities of the birth-death chain.

    ``up``, ``down`` and ``stay`` are read-only vectors indexed by the
    state k = 0..n; each row satisfies up + down + stay = 1 with the
    structural zeros up[n] = down[0] = 0.  ``params``, ``population``
    and ``rule`` record what the kernel was built from and stay None for
    hand-made kernels.
    """

    up: np.ndarray
    down: np.ndarray
    stay: np.ndarray
    params: NetworkParams | None = None
    population: PopulationConfig | None = None
    rule: ImitationRule | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        up = np.array(self.up, dtype=float)
        down = np.array(self.down, dtype=float)
        stay = np.array(self.stay, dtype=float)
        if not (up.shape == down.shape == stay.shape) or up.ndim != 1 or up.size < 3:
            raise ValueError("up/down/stay must be equal-length vectors over k = 0..n with n >= 2")
        for name, arr in (("up", up), ("down", down), ("stay", stay)):
            if not np.isfinite(arr).all() or arr.min() < 0.0 or arr.max() > 1.0:
                raise ValueError(f"{name} entries must be probabilities in [0, 1]")
        if np.abs(up + down + stay - 1.0).max() > 1e-12:
            raise ValueError("rows must sum to 1: stay must absorb what up and down leave")
        if up[-1] != 0.0 or down[0] != 0.0:
            raise ValueError("structural zeros violated: need up[n] == 0 and down[0] == 0")
        for arr in (up, down, stay):
            arr.flags.writeable = False
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "down", down)
        object.__setattr__(self, "stay", stay)

    @property
    def n(self) -> int:
        """Largest state index (genuine population size)."""
        return self.up.size - 1

    def matrix(self) -> np.ndarray:
        """Dense (n+1) x (n+1) transition matrix; intended for small n."""
        size = self.n + 1
        p = np.zeros((size, size))
        idx = np.arange(size)
        p[idx, idx] = self.stay
        p[idx[:-1], idx[:-1] + 1] = self.up[:-1]
        p[idx[1:], idx[1:] - 1] = self.down[1:]
        return p


@dataclass(frozen=True)
class ChainClass:
    """Structural class of a kernel, decided from its zero pattern alone.

    kind is "irreducible" (every state reaches every other),
    "absorbing" (both boundary states trap and every interior state
    eventually drains into one of them), or "other".
    """

    kind: str
    absorbing_states: tuple[int, ...] = ()
    detail: str = ""


@dataclass(frozen=True)
class StationaryDistribution:
    """Probability vector over the states k = 0..n plus how it was obtained.

    kind is one of "two_point_noise_free", "product_form", "eigenvector"
    or "empirical".  The vector is validated (nonnegative, sums to 1
    within 1e-9) and stored read-only.
    """

    psi: np.ndarray
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in _DISTRIBUTION_KINDS:
            raise ValueError(f"kind must be one of {_DISTRIBUTION_KINDS}, got {self.kind!r}")
        psi = np.array(self.psi, dtype=float)
        if psi.ndim != 1 or psi.size < 2:
            raise ValueError("psi must be a vector over at least two states")
        if not np.isfinite(psi).all():
            raise ValueError("psi entries must be finite")
        if psi.min() < 0.0:
            if psi.min() < -1e-12:
                raise ValueError(f"negative probability in psi: min entry {psi.min()!r}")
            psi = np.clip(psi, 0.0, None)
        if abs(float(psi.sum()) - 1.0) > 1e-9:
            raise ValueError(f"psi must sum to 1, got {float(psi.sum())!r}")
        psi.flags.writeable = False
        object.__setattr__(self, "psi", psi)

    @property
    def n(self) -> int:
        return self.psi.size - 1


@dataclass(frozen=True)
class AbsorptionResult:
    """Exact absorption behaviour from one start state.

    prob_absorb_at_0 / prob_absorb_at_n   chance of ending all-secondary
                                          respectively all-primary
    expected_steps                        mean number of imitation events
                                          until either boundary is hit
    """

    prob_absorb_at_0: float
    prob_absorb_at_n: float
    expected_steps: float


def build_kernel(
    params: NetworkParams, population: PopulationConfig, rule: ImitationRule
) -> TransitionKernel:
    """Assemble the per-state move probabilities for one imitation event.

    An event samples a focal genuine user uniformly, then an opponent
    uniformly among the other genuine users plus every anchored user.
    The state climbs when a secondary focal meets a primary opponent
    (genuine or anchored) and imitates; it descends in the mirror case:

        up[k]   = (n-k)/n * (k + a_p) / (n - 1 + a_p + a_s) * q(pi_p(k) - pi_s)
        down[k] = k/n * (n-k + a_s) / (n - 1 + a_p + a_s) * q(pi_s - pi_p(k))

    The counting numerators are multiplied in integer arithmetic before
    the single division, so symmetric weights cancel exactly (a fair-coin
    rule on an anchored chain gives a *bitwise* uniform stationary law).
    Payoff differences within a few ulps of zero are snapped to an exact
    tie: when the equilibrium share falls exactly on a lattice point k/n,
    the difference there is zero in exact arithmetic, and propagating its
    float residue through a noise-free rule would fabricate transitions
    of magnitude ~1e-19.
    """
    n = population.n
    a_p = population.anchored_primary
    a_s = population.anchored_secondary
    denom = n * (n - 1 + a_p + a_s)
    pi_s = model.utility_secondary(params)
    tie_snap = 32.0 * np.finfo(float).eps
    up = np.zeros(n + 1)
    down = np.zeros(n + 1)
    for k in range(n + 1):
        pi_p = model.utility_primary(params, k, n)
        gain = pi_p - pi_s
        if abs(gain) <= tie_snap * max(abs(pi_p), abs(pi_s)):
            gain = 0.0
        up[k] = ((n - k) * (k + a_p)) / denom * rule.probability(gain)
        down[k] = (k * (n - k + a_s)) / denom * rule.probability(-gain)
    stay = 1.0 - up - down
    return TransitionKernel(
        up=up, down=down, stay=stay, params=params, population=population, rule=rule
    )


def classify(kernel: TransitionKernel) -> ChainClass:
    """Decide the structural class of a kernel from its zero pattern.

    Irreducible: every interior move is possible (up positive below n,
    down positive above 0).  Absorbing: both boundaries trap (up[0] =
    down[n] = 0) and every interior state has an all-positive path to at
    least one boundary.  Anything else — e.g. the one-way flow of a
    noise-free rule — is classed "other" with the zero pattern spelled
    out in ``detail``.
    """
    up, down = kernel.up, kernel.down
    n = kernel.n
    up_pos = up > 0.0
    down_pos = down > 0.0
    if up_pos[:n].all() and bool(down_pos[1:].all()):
        return ChainClass(kind="irreducible", detail="all interior moves possible")
    if not up_pos[0] and not down_pos[n]:
        # State k reaches n iff every up move from k onwards is possible,
        # and reaches 0 iff every down move below it is.
        suffix_up = np.ones(n + 1, dtype=bool)
        for k in range(n - 1, -1, -1):
            suffix_up[k] = suffix_up[k + 1] and up_pos[k]
        prefix_down = np.ones(n + 1, dtype=bool)
        for k in range(1, n + 1):
            prefix_down[k] = prefix_down[k - 1] and down_pos[k]
        if all(suffix_up[k] or prefix_down[k] for k in range(1, n)):
            return ChainClass(
                kind="absorbing",
                absorbing_states=(0, n),
                detail="boundary states trap and every interior state drains to a boundary",
            )
    zero_up = np.flatnonzero(~up_pos[:n]).tolist()
    zero_down = (np.flatnonzero(~down_pos[1:]) + 1).tolist()
    return ChainClass(
        kind="other",
        detail=f"blocked up moves at k={zero_up}, blocked down moves at k={zero_down}",
    )


def stationary_noise_free(
    params: NetworkParams,
    population: PopulationConfig,
    rule: ImitationRule | None = None,
) -> StationaryDistribution:
    """Long-run law under a noise-free rule started inside the interior.

    With q(z) = 0 for z <= 0 the chain can only climb while k is below
    the critical state k* and only descend from k* or above, so from any
    interior start it ends up oscillating on the pair {k*-1, k*}.  The
    long-run weights follow from balance across that single edge:

        psi[k*-1] = down[k*] / (up[k*-1] + down[k*]),  psi[k*] = 1 - psi[k*-1]

    computed so the two weights sum to exactly 1.0.  When the
    equilibrium share falls exactly on the lattice point k*/n the chain
    freezes at k* and the formula degenerates gracefully to a point
    mass there.  Requires an interior critical state (1 <= k* <= n-1)
    and a rule whose kernel shows the one-way zero pattern; ValueError
    otherwise.
    """
    if rule is None:
        rule = PairwiseProportional()
    n = population.n
    k_star = model.critical_state(params, n)
    if not 1 <= k_star <= n - 1:
        raise ValueError(
            f"critical state k*={k_star} sits on the boundary of 0..{n}; "
            "the two-point law needs an interior critical state"
        )
    kernel = build_kernel(params, population, rule)
    below = kernel.down[1:k_star]
    above = kernel.up[k_star:]
    if (below.size and below.max() > 0.0) or (above.size and above.max() > 0.0):
        raise ValueError(
            "rule is not noise-free: the kernel allows moves away from the critical pair"
        )
    t_up = float(kernel.up[k_star - 1])
    t_down = float(kernel.down[k_star])
    if t_up + t_down == 0.0:
        raise ValueError("chain is frozen around the critical state; two-point law undefined")
    psi = np.zeros(n + 1)
    psi[k_star - 1] = t_down / (t_up + t_down)
    psi[k_star] = 1.0 - psi[k_star - 1]
    return StationaryDistribution(psi=psi, kind="two_point_noise_free")


def _log_profile(kernel: TransitionKernel) -> np.ndarray:
    """log psi up to a constant: cumulative sum of log(up[k-1]/down[k])."""
    log_ratio = np.log(kernel.up[:-1]) - np.log(kernel.down[1:])
    return np.concatenate(([0.0], np.cumsum(log_ratio)))


def stationary_product(kernel: TransitionKernel) -> StationaryDistribution:
    """Stationary law of an irreducible kernel via the birth-death product form.

    psi[k] is proportional to the product of up[j-1]/down[j] for j = 1..k.
    The product is accumulated as a log sum and re-centred on its maximum
    before exponentiation, so populations in the thousands neither
    overflow nor underflow even at high selection intensity.
    """
    structure = classify(kernel)
    if structure.kind != "irreducible":
        raise ChainStructureError(
            f"product form needs an irreducible kernel, got {structure.kind} ({structure.detail})"
        )
    log_psi = _log_profile(kernel)
    log_psi -= log_psi.max()
    psi = np.exp(log_psi)
    psi /= psi.sum()
    return StationaryDistribution(psi=psi, kind="product_form")


def _solve_balance_block(
    kernel: TransitionKernel, lo: int, hi: int, anchor_above: bool
) -> np.ndarray:
    """Solve the global-balance equations for psi[lo..hi] with one
    neighbouring state pinned to weight 1 (above hi or below lo)."""
    up, down = kernel.up, kernel.down
    size = hi - lo + 1
    ab = np.zeros((3, size))
    rhs = np.zeros(size)
    for s in range(lo, hi + 1):
        r = s - lo
        ab[1, r] = -(up[s] + down[s])
        if r + 1 < size:
            ab[0, r + 1] = down[s + 1]
        if r - 1 >= 0:
            ab[2, r - 1] = up[s - 1]
    if anchor_above:
        rhs[size - 1] = -down[hi + 1]
    else:
        rhs[0] = -up[lo - 1]
    return solve_banded((1, 1), ab, rhs)


def stationary_eigen(
    kernel: TransitionKernel,
    method: str = "balance",
    tol: float = 1e-13,
    max_iter: int = 200_000,
) -> StationaryDistribution:
    """Stationary law as the fixed point of the transition operator.

    method="balance" (default) pins the state where the one-step drift
    ratios peak, then solves the two tridiagonal blocks of the global
    balance equations on either side with a banded LU factorisation.
    Anchoring at the likeliest state keeps every unknown at or below the
    anchor's scale, so the solve is overflow-free at any population size.

    method="power" iterates the tridiagonal operator from the uniform
    vector until the sup change drops below ``tol``; it is retained as a
    slow structural cross-check and raises RuntimeError with iteration
    diagnostics when ``max_iter`` is exhausted first.

    Both routes are deliberately independent of the product form in
    :func:`stationary_product` (the peak location is the only thing
    shared, and it only selects the anchor, never the values).
    """
    structure = classify(kernel)
    if structure.kind != "irreducible":
        raise ChainStructureError(
            f"eigenvector route needs an irreducible kernel, got {structure.kind} "
            f"({structure.detail})"
        )
    n = kernel.n
    if method == "power":
        psi = np.full(n + 1, 1.0 / (n + 1))
        up, down, stay = kernel.up, kernel.down, kernel.stay
        delta = np.inf
        for _ in range(max_iter):
            nxt = psi * stay
            nxt[1:] += psi[:-1] * up[:-1]
            nxt[:-1] += psi[1:] * down[1:]
            nxt /= nxt.sum()
            delta = float(np.abs(nxt - psi).max())
            psi = nxt
            if delta < tol:
                return StationaryDistribution(psi=psi / psi.sum(), kind="eigenvector")
        raise RuntimeError(
            f"power iteration did not converge: {max_iter} iterations, "
            f"last sup-norm change {delta:.3e} (tolerance {tol:.1e})"
        )
    if method != "balance":
        raise ValueError(f"method must be 'balance' or 'power', got {method!r}")
    anchor = int(np.argmax(_log_profile(kernel)))
    psi = np.zeros(n + 1)
    psi[anchor] = 1.0
    if anchor > 0:
        psi[:anchor] = _solve_balance_block(kernel, 0, anchor - 1, anchor_above=True)
    if anchor < n:
        psi[anchor + 1 :] = _solve_balance_block(kernel, anchor + 1, n, anchor_above=False)
    psi = np.clip(psi, 0.0, None)
    psi /= psi.sum()
    return StationaryDistribution(psi=psi, kind="eigenvector")


def absorption_analysis(kernel: TransitionKernel, initial: int) -> AbsorptionResult:
    """Exact absorption split and mean hitting time from one start state.

    The first-step equations on the interior states form one tridiagonal
    system with three right-hand sides (hit 0, hit n, accumulate time),
    solved by a banded LU.  The two hitting probabilities are computed
    independently, so their sum is a genuine consistency diagnostic for
    the caller — it should be 1 up to solver round-off.
    """
    structure = classify(kernel)
    if structure.kind != "absorbing":
        raise ChainStructureError(
            f"absorption analysis needs an absorbing kernel, got {structure.kind} "
            f"({structure.detail})"
        )
    n = kernel.n
    if not 0 <= initial <= n:
        raise ValueError(f"initial state must lie in 0..{n}, got {initial}")
    if initial == 0:
        return AbsorptionResult(1.0, 0.0, 0.0)
    if initial == n:
        return AbsorptionResult(0.0, 1.0, 0.0)
    up, down = kernel.up, kernel.down
    size = n - 1
    ab = np.zeros((3, size))
    rhs = np.zeros((size, 3))
    for j in range(1, n):
        r = j - 1
        ab[1, r] = up[j] + down[j]
        if r + 1 < size:
            ab[0, r + 1] = -up[j]
        if r - 1 >= 0:
            ab[2, r - 1] = -down[j]
        rhs[r, 2] = 1.0
    rhs[0, 0] = down[1]
    rhs[size - 1, 1] = up[n - 1]
    solution = solve_banded((1, 1), ab, rhs)
    row = solution[initial - 1]
    return AbsorptionResult(
        prob_absorb_at_0=float(row[0]),
        prob_absorb_at_n=float(row[1]),
        expected_steps=float(row[2]),
    )


def distribution_mode(distribution, rel_tol: float = 1e-12) -> tuple[int, ...]:
    """States attaining the distribution's maximum, with ties within rel_tol.

    The tolerance makes genuinely tied weights (equal adjacent masses)
    robust to last-ulp accumulation noise; a uniform vector returns every
    state.  Accepts a StationaryDistribution or a bare array.
    """
    psi = np.asarray(getattr(distribution, "psi", distribution), dtype=float)
    peak = float(psi.max())
    return tuple(int(k) for k in np.flatnonzero(psi >= peak * (1.0 - rel_tol)))


def total_variation(p, q) -> float:
    """Total variation distance: half the L1 distance between two laws."""
    a = np.asarray(getattr(p, "psi", p), dtype=float)
    b = np.asarray(getattr(q, "psi", q), dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"distributions live on different state spaces: {a.shape} vs {b.shape}")
    return 0.5 * float(np.abs(a - b).sum())


def detailed_balance_residual(kernel: TransitionKernel, distribution) -> float:
    """Largest violation of psi[k] * up[k] == psi[k+1] * down[k+1] over all edges."""
    psi = np.asarray(getattr(distribution, "psi", distribution), dtype=float)
    if psi.size != kernel.n + 1:
        raise ValueError("distribution and kernel sizes disagree")
    flow_up = psi[:-1] * kernel.up[:-1]
    flow_down = psi[1:] * kernel.down[1:]
    return float(np.abs(flow_up - flow_down).max())
