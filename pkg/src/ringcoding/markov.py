"""Finite Markov chain analysis: invariant distributions, stochastic
complements, lumpings and entropy-rate bounds for label processes.

Distributions are plain numpy vectors; a labeling is a sequence of block
labels aligned with the chain's states.  All entropies are in bits
(base-2 logarithms).  Chains are stored without a designated start
distribution; operations that need stationarity compute the invariant
distribution on demand.  Everything here assumes a finite state space.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "MarkovChain",
    "BurkeForm",
    "EntropyRateBounds",
    "is_irreducible",
    "invariant_distribution",
    "stochastic_complement",
    "reduced_invariant",
    "entropy",
    "conditional_entropy",
    "blockdiag_complement_entropy",
    "is_lumpable",
    "lump",
    "check_burke_form",
    "quotient_entropy_rate_bounds",
]


class MarkovChain:
    """A finite-state chain: ordered state labels + row-stochastic matrix."""

    def __init__(self, transition, states=None, tolerance: float = 1e-9):
        P = np.asarray(transition, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise ValueError("transition matrix must be square")
        if P.min() < 0:
            raise ValueError("transition probabilities must be non-negative")
        sums = P.sum(axis=1)
        if np.abs(sums - 1.0).max() > tolerance:
            worst = int(np.abs(sums - 1.0).argmax())
            raise ValueError(
                f"row {worst} sums to {sums[worst]:.12g}; renormalize on load "
                "or loosen the tolerance"
            )
        self.P = P
        self.states = list(states) if states is not None else list(range(P.shape[0]))
        if len(self.states) != P.shape[0]:
            raise ValueError("state label count does not match the matrix")
        self.tolerance = tolerance
        self._index = {s: i for i, s in enumerate(self.states)}

    @classmethod
    def from_decimal_rows(cls, rows, states=None, renormalize: bool = True):
        """Build from decimal-string rows (exact), renormalizing each row.

        Keeps 4-decimal published matrices exact: strings are parsed as
        rationals and each row is divided by its exact sum before the
        float conversion.
        """
        frac = [[Fraction(str(v)) for v in row] for row in rows]
        if renormalize:
            frac = [[v / sum(row) for v in row] for row in frac]
        P = np.array([[float(v) for v in row] for row in frac])
        return cls(P, states=states)

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def index(self, state) -> int:
        return self._index[state]

    def __repr__(self):
        return f"MarkovChain(n={self.n})"


@dataclass
class BurkeForm:
    """Decomposition P = c1*U + (1-c1)*Id with all rows of U equal to u."""

    c1: float
    u: np.ndarray
    residual: float


@dataclass
class EntropyRateBounds:
    """Truncated bounds on the entropy rate of a label process.

    ``lower <= rate <= upper``; ``exact`` marks the lumpable case where both
    sides collapse to the lumped chain's conditional entropy.
    """

    lower: float
    upper: float
    depth: int
    exact: bool = False


def is_irreducible(chain: MarkovChain) -> bool:
    """True iff the digraph of positive transitions is strongly connected."""
    n = chain.n
    adj = chain.P > 0
    return _reaches_all(adj, 0) and _reaches_all(adj.T, 0)


def _reaches_all(adj: np.ndarray, start: int) -> bool:
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[start] = True
    stack = [start]
    while stack:
        v = stack.pop()
        for w in np.nonzero(adj[v])[0]:
            if not seen[w]:
                seen[w] = True
                stack.append(int(w))
    return bool(seen.all())


def invariant_distribution(chain: MarkovChain) -> np.ndarray:
    """The unique pi with pi P = pi, sum(pi) = 1, by direct linear solve.

    Solves the stacked system [P^T - I; 1] pi = [0; 1] in least squares;
    for an irreducible chain the residual is at machine precision
    (checked against 1e-12).  Power iteration is kept out of the library
    and used only as a test oracle.
    """
    if not is_irreducible(chain):
        raise ValueError("invariant distribution requires an irreducible chain")
    n = chain.n
    A = np.vstack([chain.P.T - np.eye(n), np.ones((1, n))])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(A, b, rcond=None)
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    resid = np.abs(pi @ chain.P - pi).max()
    if resid > 1e-12:
        raise ArithmeticError(f"invariant solve residual {resid:.3e} exceeds 1e-12")
    return pi


def stochastic_complement(chain: MarkovChain, subset, cond_warn: float = 1e12) -> np.ndarray:
    """Transition matrix of the chain watched only at visits to ``subset``.

    S_A = P_AA + P_A,Ac (I - P_Ac,Ac)^{-1} P_Ac,A.  The inverse exists for
    irreducible chains because A^c then has no closed subset; a singular
    or ill-conditioned (I - P_Ac,Ac) is reported as an error.  Rows and
    columns follow the order of ``subset``.
    """
    idx = np.asarray(list(subset), dtype=int)
    if len(idx) == 0:
        raise ValueError("subset must be non-empty")
    comp = np.setdiff1d(np.arange(chain.n), idx)
    if len(comp) == 0:
        return chain.P.copy()
    P = chain.P
    core = np.eye(len(comp)) - P[np.ix_(comp, comp)]
    if np.linalg.cond(core) > cond_warn:
        raise ArithmeticError(
            "I - P_AcAc is singular or near-singular: the complement of the "
            "watched set contains an (almost) absorbing closed subset"
        )
    S = P[np.ix_(idx, idx)] + P[np.ix_(idx, comp)] @ np.linalg.solve(core, P[np.ix_(comp, idx)])
    return S


def reduced_invariant(chain: MarkovChain, subset) -> np.ndarray:
    """pi restricted to ``subset`` and renormalized; fixed point of S_A."""
    idx = np.asarray(list(subset), dtype=int)
    pi = invariant_distribution(chain)
    pa = pi[idx]
    pa = pa / pa.sum()
    S = stochastic_complement(chain, idx)
    resid = np.abs(pa @ S - pa).max()
    if resid > 1e-10:
        raise ArithmeticError(f"reduced invariant residual {resid:.3e} exceeds 1e-10")
    return pa


def entropy(w) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    w = np.asarray(w, dtype=float)
    nz = w > 0
    return float(-(w[nz] * np.log2(w[nz])).sum())


def conditional_entropy(P, w) -> float:
    """H(next | current) = -sum_i w_i sum_j P_ij log2 P_ij, in bits."""
    P = np.asarray(P, dtype=float)
    w = np.asarray(w, dtype=float)
    if P.shape[0] != len(w):
        raise ValueError("weight vector does not match the matrix")
    rows = np.array([entropy(P[i]) for i in range(P.shape[0])])
    return float(w @ rows)


def blockdiag_complement_entropy(chain: MarkovChain, partition) -> float:
    """Weighted complement entropy sum_A pi(A) H(S_A | pi_A) over a partition."""
    pi = invariant_distribution(chain)
    covered = sorted(i for block in partition for i in block)
    if covered != list(range(chain.n)):
        raise ValueError("partition must cover every state exactly once")
    total = 0.0
    for block in partition:
        idx = np.asarray(list(block), dtype=int)
        mass = pi[idx].sum()
        if len(idx) == 1:
            continue  # S_A = [1], zero entropy
        S = stochastic_complement(chain, idx)
        pa = pi[idx] / mass
        total += mass * conditional_entropy(S, pa)
    return total


def _blocks_of(labels):
    order = []
    seen = {}
    for i, l in enumerate(labels):
        if l not in seen:
            seen[l] = len(order)
            order.append(l)
    blocks = [[] for _ in order]
    for i, l in enumerate(labels):
        blocks[seen[l]].append(i)
    return order, blocks


def is_lumpable(chain: MarkovChain, labels, tol: float = 1e-9) -> bool:
    """Strong lumpability: block-sum rows constant within every block."""
    if len(labels) != chain.n:
        raise ValueError("labeling must assign every state a block")
    _, blocks = _blocks_of(labels)
    for target in blocks:
        col = chain.P[:, target].sum(axis=1)
        for src in blocks:
            vals = col[src]
            if vals.max() - vals.min() > tol:
                return False
    return True


def lump(chain: MarkovChain, labels, tol: float = 1e-9) -> MarkovChain:
    """Block-level chain of a lumpable labeling (blocks in first-appearance
    order); raises on a non-lumpable labeling."""
    if not is_lumpable(chain, labels, tol):
        raise ValueError("labeling is not lumpable")
    order, blocks = _blocks_of(labels)
    m = len(blocks)
    Q = np.empty((m, m))
    for a, src in enumerate(blocks):
        for b, dst in enumerate(blocks):
            Q[a, b] = chain.P[np.ix_(src, dst)].sum(axis=1).mean()
    Q /= Q.sum(axis=1, keepdims=True)
    return MarkovChain(Q, states=order)


def check_burke_form(chain: MarkovChain, tol: float = 1e-9) -> BurkeForm | None:
    """Try to write P = c1*U + (1-c1)*Id with identical rows of U.

    Succeeds iff every off-diagonal column is constant and the diagonal
    excess over that constant is shared by all states; returns None
    otherwise.  A chain in this form keeps every function of it Markov,
    which is what certifies lumpability for arbitrary labelings.
    """
    P = chain.P
    n = chain.n
    if n == 1:
        return BurkeForm(1.0, np.array([1.0]), 0.0)
    v = np.empty(n)
    for y in range(n):
        col = np.delete(P[:, y], y)
        if col.max() - col.min() > tol:
            return None
        v[y] = col.mean()
    excess = np.diag(P) - v
    if excess.max() - excess.min() > tol:
        return None
    c1 = float(1.0 - excess.mean())
    if c1 <= tol or v.sum() <= tol:
        # P is (numerically) the identity: U is arbitrary; report uniform.
        u = np.full(n, 1.0 / n)
        return BurkeForm(0.0, u, float(np.abs(P - np.eye(n)).max()))
    u = v / v.sum()
    recon = c1 * np.tile(u, (n, 1)) + (1.0 - c1) * np.eye(n)
    residual = float(np.abs(recon - P).max())
    if residual > tol:
        return None
    return BurkeForm(c1, u, residual)


def quotient_entropy_rate_bounds(
    chain: MarkovChain,
    labels,
    depth: int = 6,
    max_depth: int = 10,
    budget: int = 2_000_000,
) -> EntropyRateBounds:
    """Two-sided entropy-rate bounds for the label process of a stationary
    chain.

    When the labeling is lumpable the label process is Markov and both
    bounds equal the lumped chain's conditional entropy exactly (depth is
    ignored).  Otherwise exact forward filtering over label sequences of
    length ``depth`` gives

        lower = H(Y_m | Y_{m-1..1}, X_1)   <=  rate  <=
        upper = H(Y_m | Y_{m-1..1}),

    both monotone in ``depth``.  Cost grows as ``(#labels)^depth``, so the
    depth is capped and the sequence count is checked against ``budget``.
    """
    if len(labels) != chain.n:
        raise ValueError("labeling must assign every state a block")
    pi = invariant_distribution(chain)
    if is_lumpable(chain, labels):
        lumped = lump(chain, labels)
        _, blocks = _blocks_of(labels)
        w = np.array([pi[b].sum() for b in blocks])
        h = conditional_entropy(lumped.P, w)
        return EntropyRateBounds(h, h, depth, exact=True)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if depth > max_depth:
        raise ValueError(f"depth {depth} exceeds the cap {max_depth}")
    _, blocks = _blocks_of(labels)
    m = len(blocks)
    if m**depth > budget:
        raise ValueError(
            f"{m}^{depth} label sequences exceed the filtering budget {budget}"
        )
    masks = np.zeros((m, chain.n))
    for b, block in enumerate(blocks):
        masks[b, block] = 1.0

    def extend(alphas):
        prop = alphas @ chain.P
        out = np.concatenate([prop * masks[b] for b in range(m)], axis=0)
        keep = out.sum(axis=1) > 0
        return out[keep]

    def seq_entropy(alphas):
        return entropy(alphas.sum(axis=1))

    # upper: filter on Y only; lower: additionally split by the first state
    upper_alphas = np.concatenate([(pi * masks[b])[None, :] for b in range(m)], axis=0)
    upper_alphas = upper_alphas[upper_alphas.sum(axis=1) > 0]
    lower_alphas = np.diag(pi)
    upper = entropy(upper_alphas.sum(axis=1))
    lower = 0.0
    for t in range(2, depth + 1):
        h_upper_prev = seq_entropy(upper_alphas)
        h_lower_prev = seq_entropy(lower_alphas)
        upper_alphas = extend(upper_alphas)
        lower_alphas = extend(lower_alphas)
        upper = seq_entropy(upper_alphas) - h_upper_prev
        lower = seq_entropy(lower_alphas) - h_lower_prev
    return EntropyRateBounds(float(lower), float(upper), depth, exact=False)
