"""Strong Markov typicality, Supremus typicality, path sampling and the
exhaustive enumeration oracles behind the counting lemmas.

A path is a numpy integer array of state indices.  The typicality tests
need the chain's invariant distribution and, for the Supremus test, the
stochastic complement of every watched subset; ``SupremusTester``
precomputes those once so that enumeration loops stay fast.

Unvisited states: the defining inequalities leave the empirical
transition row of a state with N(i; x) = 0 undefined.  Such a state is
treated as compatible iff its stationary mass is below eps (the state
*should* be this rare); no constraint is put on its unobserved
transition row.  This choice keeps sampled paths typical with
probability tending to one.
"""

from dataclasses import dataclass
from itertools import chain as _chain, combinations, product

import numpy as np

from .markov import (
    MarkovChain,
    invariant_distribution,
    reduced_invariant,
    stochastic_complement,
)

__all__ = [
    "TransitionCounts",
    "SupremusVerdict",
    "SupremusTester",
    "transition_counts",
    "is_strongly_markov_typical",
    "is_supremus_typical",
    "supremus_verdict",
    "sample_path",
    "enumerate_typical_paths",
    "enumerate_confusable",
]


@dataclass
class TransitionCounts:
    """Pair counts N(i, j; x) and their row sums N(i; x); total is n - 1."""

    pair: np.ndarray
    visits: np.ndarray

    @property
    def total(self) -> int:
        return int(self.pair.sum())


def transition_counts(x, num_states: int) -> TransitionCounts:
    """Count occurrences of every sub-sequence [i, j] in the path."""
    x = np.asarray(x, dtype=int)
    if len(x) < 2:
        raise ValueError("a path needs length at least 2")
    pair = np.zeros((num_states, num_states), dtype=np.int64)
    np.add.at(pair, (x[:-1], x[1:]), 1)
    return TransitionCounts(pair, pair.sum(axis=1))


def _strong_test(counts: TransitionCounts, n: int, P: np.ndarray, pi: np.ndarray,
                 eps: float, mode: str) -> bool:
    N = counts.visits
    if mode == "entrywise":
        if np.abs(N / n - pi).max() >= eps:
            return False
        for i in range(len(pi)):
            if N[i] == 0:
                continue  # occupancy already checked; row unconstrained
            if np.abs(counts.pair[i] / N[i] - P[i]).max() >= eps:
                return False
        return True
    if mode == "summed":
        if np.abs(N / n - pi).sum() >= eps:
            return False
        dev = 0.0
        for i in range(len(pi)):
            if N[i] == 0:
                continue
            dev += np.abs(counts.pair[i] / N[i] - P[i]).sum()
        return dev < eps
    raise ValueError(f"unknown mode {mode!r}")


def is_strongly_markov_typical(x, chain: MarkovChain, eps: float,
                               mode: str = "entrywise") -> bool:
    """Empirical state and transition frequencies within eps of (pi, P).

    ``mode`` selects the per-entry inequalities or their summed variant;
    the two agree asymptotically but differ at finite n, so both are
    exposed.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    counts = transition_counts(x, chain.n)
    pi = invariant_distribution(chain)
    return _strong_test(counts, len(x), chain.P, pi, eps, mode)


def _nonempty_subsets(n: int):
    return _chain.from_iterable(combinations(range(n), r) for r in range(1, n + 1))


@dataclass
class SupremusVerdict:
    """Outcome of a Supremus test with per-subset detail."""

    ok: bool
    failed_subset: tuple | None
    vacuous_subsets: list

    def __bool__(self):
        return self.ok


class SupremusTester:
    """Precomputed Supremus typicality test for one chain.

    ``subsets`` defaults to every non-empty subset of the state space; a
    restricted family (e.g. the cosets of some quotient partitions) may be
    supplied instead.  Subset data (stochastic complement and reduced
    invariant) is computed once at construction.
    """

    def __init__(self, chain: MarkovChain, eps: float, subsets=None,
                 mode: str = "entrywise"):
        if eps <= 0:
            raise ValueError("eps must be positive")
        self.chain = chain
        self.eps = eps
        self.mode = mode
        # the 2|X| length floor belongs to the canonical all-subsets test;
        # a caller-supplied family only needs watchable sub-paths
        self._floor = 2 * chain.n if subsets is None else 2
        fam = [tuple(sorted(s)) for s in (subsets if subsets is not None
                                          else _nonempty_subsets(chain.n))]
        if not fam:
            raise ValueError("subset family must be non-empty")
        full = tuple(range(chain.n))
        # test the full set first: it is the strong Markov test and the
        # cheapest reject for most non-typical paths
        fam = sorted(set(fam), key=lambda s: (s != full, len(s), s))
        self.subsets = fam
        self._data = []
        for s in fam:
            lut = np.full(chain.n, -1, dtype=np.int64)
            lut[list(s)] = np.arange(len(s))
            S = stochastic_complement(chain, s)
            pa = reduced_invariant(chain, s)
            self._data.append((np.array(s), lut, S, pa))

    def min_length(self) -> int:
        return self._floor

    def verdict(self, x) -> SupremusVerdict:
        x = np.asarray(x, dtype=int)
        if len(x) < self.min_length():
            raise ValueError(
                f"Supremus test needs length >= {self.min_length()}"
            )
        vacuous = []
        for s, lut, S, pa in self._data:
            sub = x[np.isin(x, s)]
            if len(sub) < 2:
                # watched subset visited at most once: the sub-path carries
                # no transitions, flagged rather than failed
                vacuous.append(tuple(int(v) for v in s))
                continue
            counts = transition_counts(lut[sub], len(s))
            if not _strong_test(counts, len(sub), S, pa, self.eps, self.mode):
                return SupremusVerdict(False, tuple(int(v) for v in s), vacuous)
        return SupremusVerdict(True, None, vacuous)

    def __call__(self, x) -> bool:
        return self.verdict(x).ok


def supremus_verdict(x, chain: MarkovChain, eps: float, subsets=None,
                     mode: str = "entrywise") -> SupremusVerdict:
    """Supremus test with per-subset detail (vacuous subsets flagged)."""
    return SupremusTester(chain, eps, subsets=subsets, mode=mode).verdict(x)


def is_supremus_typical(x, chain: MarkovChain, eps: float, subsets=None,
                        mode: str = "entrywise") -> bool:
    """True iff every watched sub-path is strongly typical for its
    stochastic complement (all non-empty subsets by default)."""
    return supremus_verdict(x, chain, eps, subsets=subsets, mode=mode).ok


def sample_path(source, n: int, rng, init=None) -> np.ndarray:
    """Ancestral sampling of a path of length n; deterministic per seed.

    ``source`` is a MarkovChain or a sequence of chains applied
    cyclically (the transition used from step t to t+1 is
    ``source[t % len(source)]``, for periodically time-varying sources).
    ``init`` defaults to the invariant distribution of a single chain and
    to uniform for a schedule.
    """
    rng = np.random.default_rng(rng)
    schedule = [source] if isinstance(source, MarkovChain) else list(source)
    m = schedule[0].n
    if any(c.n != m for c in schedule):
        raise ValueError("all chains in a schedule must share the state space")
    if init is None:
        init = invariant_distribution(schedule[0]) if len(schedule) == 1 else np.full(m, 1.0 / m)
    init = np.asarray(init, dtype=float)
    cums = [np.cumsum(c.P, axis=1) for c in schedule]
    out = np.empty(n, dtype=np.int64)
    u = rng.random(n)
    out[0] = np.searchsorted(np.cumsum(init), u[0], side="right")
    for t in range(1, n):
        cum = cums[(t - 1) % len(schedule)]
        out[t] = np.searchsorted(cum[out[t - 1]], u[t], side="right")
    np.clip(out, 0, m - 1, out=out)
    return out


def enumerate_typical_paths(chain: MarkovChain, n: int, eps: float,
                            supremus: bool = True, subsets=None,
                            mode: str = "entrywise"):
    """Exhaustively enumerate the typical set at length n (oracle-grade).

    Depth-first search over all paths with two sound prunes derived from
    the occupancy inequality |N(i)/n - p_i| < eps: visit counts have hard
    caps, and the remaining length must cover every state's deficit.
    Leaves get the full (strong or Supremus) test.  Yields paths as numpy
    arrays.
    """
    pi = invariant_distribution(chain)
    m = chain.n
    tester = SupremusTester(chain, eps, subsets=subsets, mode=mode) if supremus else None
    caps = np.floor(n * (pi + eps) - 1e-12).astype(int)  # N(i) < n(p_i+eps)
    need = np.ceil(n * (pi - eps) + 1e-12).astype(int)  # N(i) > n(p_i-eps)
    need = np.maximum(need, 0)

    path = np.empty(n, dtype=np.int64)
    visits = np.zeros(m, dtype=np.int64)
    pair = np.zeros((m, m), dtype=np.int64)

    def leaf_ok():
        tc = TransitionCounts(pair.copy(), pair.sum(axis=1))
        if not _strong_test(tc, n, chain.P, pi, eps, mode):
            return False
        if tester is None:
            return True
        return tester(path)

    def rec(t):
        # visits[] counts positions 0..t-1 among the first n-1 (count base)
        remaining = (n - 1) - min(t, n - 1)
        deficit = np.maximum(need - visits, 0).sum()
        if deficit > remaining:
            return
        if t == n:
            if leaf_ok():
                yield path.copy()
            return
        counted = t < n - 1  # last position carries no outgoing transition
        for s in range(m):
            if counted and visits[s] + 1 > caps[s]:
                continue
            path[t] = s
            if counted:
                visits[s] += 1
            if t > 0:
                pair[path[t - 1], s] += 1
            yield from rec(t + 1)
            if t > 0:
                pair[path[t - 1], s] -= 1
            if counted:
                visits[s] -= 1

    yield from rec(0)


def enumerate_confusable(x, blocks, chain: MarkovChain, eps: float,
                         budget: int = 10**7, mode: str = "entrywise",
                         coset_family: bool = False) -> int:
    """Count typical paths sharing x's block pattern.

    ``blocks`` is a partition of the state indices (e.g. the cosets of a
    left ideal); candidate paths agree with x on which block each position
    falls in, so only block members vary per position.  The membership
    test is full Supremus typicality by default; with ``coset_family``
    only the whole path and the per-block sub-paths are tested (the family
    the counting bound's argument actually uses), which admits a
    vectorized scan over all candidates.  Refuses when the candidate
    count exceeds ``budget``.
    """
    x = np.asarray(x, dtype=int)
    block_of = {}
    for b, members in enumerate(blocks):
        for s in members:
            block_of[int(s)] = b
    if sorted(block_of) != list(range(chain.n)):
        raise ValueError("blocks must partition the state indices")
    options = [list(map(int, blocks[block_of[int(v)]])) for v in x]
    total = 1
    for opt in options:
        total *= len(opt)
        if total > budget:
            raise ValueError(f"{total}+ candidates exceed the budget {budget}")
    if coset_family:
        return _batch_confusable(x, blocks, options, total, chain, eps, mode)
    tester = SupremusTester(chain, eps, mode=mode)
    count = 0
    for cand in product(*options):
        if tester(np.array(cand, dtype=int)):
            count += 1
    return count


def _batch_confusable(x, blocks, options, total, chain, eps, mode) -> int:
    """Vectorized count over all pattern-sharing candidates.

    Tested subsets are unions of pattern blocks (the whole path plus every
    block), so each candidate's sub-path occupies the same positions and
    the per-subset transition counts reduce to row-wise bincounts.
    """
    if mode != "entrywise":
        raise ValueError("batch counting supports the entrywise mode only")
    n = len(x)
    sizes = np.array([len(o) for o in options], dtype=np.int64)
    states = np.empty((total, n), dtype=np.int8)
    weight = total
    idx = np.arange(total, dtype=np.int64)
    for j in range(n):
        weight //= sizes[j]
        col = (idx // weight) % sizes[j]
        states[:, j] = np.asarray(options[j], dtype=np.int8)[col]
    ok = np.ones(total, dtype=bool)
    pi = invariant_distribution(chain)
    full = list(range(chain.n))
    watched = [(full, chain.P, pi)]
    for block in blocks:
        block = list(map(int, block))
        if len(block) < 2:
            continue
        watched.append((block, stochastic_complement(chain, block),
                        reduced_invariant(chain, block)))
    for subset, S, pa in watched:
        pos = np.nonzero(np.isin(x, subset))[0]
        if len(pos) < 2:
            continue  # vacuous sub-path
        m = len(subset)
        lut = np.zeros(chain.n, dtype=np.int64)
        lut[subset] = np.arange(m)
        sub = lut[states[:, pos].astype(np.int64)]
        L = len(pos)
        codes = sub[:, :-1] * m + sub[:, 1:]
        offsets = np.arange(total, dtype=np.int64)[:, None] * (m * m)
        flat = np.bincount((offsets + codes).reshape(-1), minlength=total * m * m)
        pair = flat.reshape(total, m, m)
        visits = pair.sum(axis=2)
        ok &= (np.abs(visits / L - pa) < eps).all(axis=1)
        denom = np.maximum(visits, 1)[:, :, None]
        ratio_ok = (np.abs(pair / denom - S[None, :, :]) < eps) | (visits == 0)[:, :, None]
        ok &= ratio_ok.all(axis=(1, 2))
    return int(ok.sum())
