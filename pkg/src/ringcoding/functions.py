"""Discrete target functions and their additive presentations over a ring.

A presentation of g factors it as g(x_1..x_s) = h(sum_t k_t(x_t)) with the
sum taken in a finite ring.  With such a factorization every source can use
the *same* linear encoder and the codewords combine by ring addition, so
the decoder only has to recover the sum process.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from .markov import (
    EntropyRateBounds,
    MarkovChain,
    check_burke_form,
    is_lumpable,
    lump,
    quotient_entropy_rate_bounds,
)
from .rings import FiniteRing, make_modular_ring, make_product_ring

__all__ = [
    "FunctionSpec",
    "Presentation",
    "SumProcess",
    "verify_presentation",
    "canonical_presentation",
    "induced_sum_labeling",
    "sum_process_chain",
    "injectivity_obstruction_check",
]


class FunctionSpec:
    """A total function on a product of finite alphabets, as a dense table."""

    def __init__(self, domains, codomain, table):
        self.domains = [list(d) for d in domains]
        self.codomain = list(codomain)
        self.table = np.asarray(table, dtype=np.int64)
        shape = tuple(len(d) for d in self.domains)
        if self.table.shape != shape:
            raise ValueError(f"table shape {self.table.shape} != domain shape {shape}")
        if self.table.min() < 0 or self.table.max() >= len(self.codomain):
            raise ValueError("table entries must index the codomain")
        self._dom_index = [{v: i for i, v in enumerate(d)} for d in self.domains]

    @classmethod
    def from_callable(cls, domains, codomain, fn):
        domains = [list(d) for d in domains]
        codomain = list(codomain)
        out_index = {v: i for i, v in enumerate(codomain)}
        shape = tuple(len(d) for d in domains)
        table = np.empty(shape, dtype=np.int64)
        for combo in product(*(range(len(d)) for d in domains)):
            args = tuple(domains[t][i] for t, i in enumerate(combo))
            table[combo] = out_index[fn(*args)]
        return cls(domains, codomain, table)

    @property
    def arity(self) -> int:
        return len(self.domains)

    def value_index(self, arg_indices) -> int:
        return int(self.table[tuple(arg_indices)])

    def __call__(self, *args):
        idx = tuple(self._dom_index[t][a] for t, a in enumerate(args))
        return self.codomain[self.table[idx]]


class Presentation:
    """Maps k_t into a ring plus a partial h on the reachable sum set.

    ``maps[t][i]`` is the ring element for the i-th letter of alphabet t;
    ``h`` maps ring element -> codomain index and only needs to cover the
    sums that actually occur (unreached elements stay absent).
    """

    def __init__(self, ring: FiniteRing, maps, h: dict):
        self.ring = ring
        self.maps = [np.asarray(m, dtype=np.int64) for m in maps]
        for m in self.maps:
            if m.min() < 0 or m.max() >= ring.order:
                raise ValueError("k_t image outside the ring")
        self.h = {int(k): int(v) for k, v in h.items()}

    @property
    def arity(self) -> int:
        return len(self.maps)

    def sum_element(self, arg_indices) -> int:
        acc = self.ring.zero
        for t, i in enumerate(arg_indices):
            acc = int(self.ring.add[acc, self.maps[t][i]])
        return acc

    def reachable_sums(self) -> list:
        """Ring elements hit by some input tuple, in first-hit order."""
        seen = []
        for combo in product(*(range(len(m)) for m in self.maps)):
            z = self.sum_element(combo)
            if z not in seen:
                seen.append(z)
        return seen


def verify_presentation(g: FunctionSpec, p: Presentation):
    """Exhaustive check of g(x) == h(sum_t k_t(x_t)); returns (ok, witness).

    The witness is the first failing tuple of argument indices, or None.
    """
    if p.arity != g.arity:
        raise ValueError("presentation arity does not match the function")
    for t in range(g.arity):
        if len(p.maps[t]) != len(g.domains[t]):
            raise ValueError(f"k_{t} does not cover alphabet {t}")
    for combo in product(*(range(len(d)) for d in g.domains)):
        z = p.sum_element(combo)
        if z not in p.h or p.h[z] != g.value_index(combo):
            return False, combo
    return True, None


def canonical_presentation(g: FunctionSpec, prime: int) -> Presentation:
    """Presentation over the product ring (Z_p)^s with coordinatewise
    injections.

    k_t embeds alphabet t into coordinate t (zero elsewhere), so the sum
    determines the whole argument tuple and h = g on the reachable set.
    Valid by construction whenever p >= |X_t| for every t.
    """
    sizes = [len(d) for d in g.domains]
    if prime < max(sizes):
        raise ValueError(f"prime {prime} smaller than the largest alphabet")
    s = g.arity
    if s == 1:
        ring = make_modular_ring(prime)
        maps = [np.arange(sizes[0])]
        h = {i: g.value_index((i,)) for i in range(sizes[0])}
        return Presentation(ring, maps, h)
    factors = [make_modular_ring(prime) for _ in range(s)]
    ring = make_product_ring(*factors)
    # element index of the tuple with value v in coordinate t, zero elsewhere
    weights = [prime ** (s - 1 - t) for t in range(s)]
    maps = [np.array([v * weights[t] for v in range(sizes[t])]) for t in range(s)]
    h = {}
    for combo in product(*(range(m) for m in sizes)):
        z = sum(combo[t] * weights[t] for t in range(s))
        h[z] = g.value_index(combo)
    return Presentation(ring, maps, h)


def induced_sum_labeling(joint: MarkovChain, p: Presentation, domains=None) -> list:
    """Per-state ring element sum_t k_t(x_t) for a joint chain whose states
    are s-tuples of alphabet letters.

    ``domains`` supplies the alphabets for letter lookup; without it the
    letters are taken to be the alphabet indices themselves.
    """
    lookup = None
    if domains is not None:
        lookup = [{v: i for i, v in enumerate(d)} for d in domains]
    labels = []
    for state in joint.states:
        if not isinstance(state, (tuple, list)) or len(state) != p.arity:
            raise ValueError(f"state {state!r} is not an {p.arity}-tuple")
        idx = []
        for t, letter in enumerate(state):
            i = lookup[t][letter] if lookup else int(letter)
            if not 0 <= i < len(p.maps[t]):
                raise ValueError(f"letter {letter!r} outside alphabet {t}")
            idx.append(i)
        labels.append(p.sum_element(idx))
    return labels


@dataclass
class SumProcess:
    """The process Z = sum_t k_t(X_t) derived from a joint chain.

    mode = "lumped": Z is certified Markov (strong lumpability, with the
    Burke/identical-rows form as a sufficient witness) and ``chain`` holds
    its transition matrix on the reachable elements.  mode = "bounded":
    only truncated entropy-rate bounds are available.
    """

    mode: str
    labeling: list
    elements: list
    chain: MarkovChain | None = None
    bounds: EntropyRateBounds | None = None
    burke: bool = False


def sum_process_chain(joint: MarkovChain, p: Presentation, depth: int = 6,
                      domains=None, tol: float = 1e-9) -> SumProcess:
    """Derive the sum process: a lumped chain when certified Markov, else
    truncated entropy-rate bounds at the given depth.

    ``tol`` is the lumpability slack; matrices transcribed at few decimals
    need a correspondingly loose tolerance.
    """
    labels = induced_sum_labeling(joint, p, domains=domains)
    burke = check_burke_form(joint, tol=tol) is not None
    if burke or is_lumpable(joint, labels, tol=tol):
        chain = lump(joint, labels, tol=tol)
        elements = list(chain.states)
        return SumProcess("lumped", labels, elements, chain=chain, burke=burke)
    bounds = quotient_entropy_rate_bounds(joint, labels, depth=depth)
    elements = sorted(set(labels))
    return SumProcess("bounded", labels, elements, bounds=bounds, burke=False)


def injectivity_obstruction_check(g: FunctionSpec, p: Presentation) -> bool:
    """True iff h restricted to the reachable sum set is injective.

    Non-injectivity is the mechanism that makes a presentation lossy: the
    sum process then carries strictly more entropy than the function
    process it encodes.
    """
    seen = {}
    for combo in product(*(range(len(d)) for d in g.domains)):
        z = p.sum_element(combo)
        y = p.h.get(z)
        if y is None:
            raise ValueError("h does not cover the reachable sum set")
        if z in seen and seen[z] != y:
            raise ValueError("h is not a function on the reachable set")
        seen[z] = y
    values = list(seen.values())
    return len(set(values)) == len(values)
