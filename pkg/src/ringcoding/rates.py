"""Achievable-rate computations for linear coding over a finite ring.

For a Markov source on (a subset of) a ring R the achievable threshold is

    R0 = max over non-zero left ideals I of
         (log|R| / log|I|) * min( H(S_{R/I} | pi),
                                  H(P | pi) - rate of the coset process )

where S_{R/I} stacks the stochastic complements of the cosets of I and the
coset process is the chain watched through the quotient map R -> R/I.  When
the coset process is lumpable its rate is exact; otherwise truncated
entropy-rate bounds make every downstream quantity an interval
[lo, hi], and consumers use the hi end conservatively.  All rates are in
bits per symbol; a k-of-n code over R spends (k/n) log2|R| bits per symbol.
"""

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from .functions import (
    FunctionSpec,
    Presentation,
    injectivity_obstruction_check,
    sum_process_chain,
    verify_presentation,
)
from .markov import (
    MarkovChain,
    blockdiag_complement_entropy,
    conditional_entropy,
    invariant_distribution,
    quotient_entropy_rate_bounds,
)
from .rings import FiniteRing, enumerate_left_ideals, quotient_partition

__all__ = [
    "IdealTerm",
    "RateReport",
    "InjectionReport",
    "ComputingReport",
    "CoverConstraint",
    "ComparisonReport",
    "single_source_rate",
    "injection_search_rate",
    "computing_rate",
    "cover_region",
    "compare_presentations",
]


@dataclass
class IdealTerm:
    """Rate contribution of one non-zero left ideal.

    ``complement`` is H(S_{R/I} | pi) (always exact).  The quotient-side
    term H(P|pi) - rate(coset process) and everything derived from it are
    intervals that collapse when the coset process is lumpable.
    ``scaled_complement`` is the complement branch alone times the scale;
    this is the per-ideal candidate as conventionally displayed.
    """

    members: tuple
    scale: float
    complement: float
    quotient_lo: float
    quotient_hi: float
    quotient_exact: bool
    label: str = ""

    @property
    def min_lo(self) -> float:
        return min(self.complement, self.quotient_lo)

    @property
    def min_hi(self) -> float:
        return min(self.complement, self.quotient_hi)

    @property
    def scaled_lo(self) -> float:
        return self.scale * self.min_lo

    @property
    def scaled_hi(self) -> float:
        return self.scale * self.min_hi

    @property
    def scaled_complement(self) -> float:
        return self.scale * self.complement

    @property
    def exact(self) -> bool:
        return self.quotient_exact or self.complement <= self.quotient_lo


@dataclass
class RateReport:
    """Threshold R0 with its per-ideal breakdown.

    ``r0_lo == r0_hi`` whenever every contributing term is exact; otherwise
    the true threshold lies in [r0_lo, r0_hi].
    """

    ring: str
    source_entropy: float
    terms: list
    notes: list = field(default_factory=list)

    @property
    def r0_lo(self) -> float:
        return max(t.scaled_lo for t in self.terms)

    @property
    def r0_hi(self) -> float:
        return max(t.scaled_hi for t in self.terms)

    @property
    def exact(self) -> bool:
        return all(t.exact for t in self.terms) or self.r0_lo == self.r0_hi

    @property
    def r0(self) -> float:
        """Conservative threshold (upper end of the interval)."""
        return self.r0_hi

    def candidate_values(self) -> list:
        """Per-ideal complement-branch candidates, largest scale last."""
        return [t.scaled_complement for t in self.terms]

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "source_entropy": self.source_entropy,
            "r0": [self.r0_lo, self.r0_hi],
            "exact": self.exact,
            "terms": [
                {
                    "ideal": list(t.members),
                    "label": t.label,
                    "scale": t.scale,
                    "complement": t.complement,
                    "quotient": [t.quotient_lo, t.quotient_hi],
                    "quotient_exact": t.quotient_exact,
                    "min": [t.min_lo, t.min_hi],
                    "scaled": [t.scaled_lo, t.scaled_hi],
                    "scaled_complement": t.scaled_complement,
                }
                for t in self.terms
            ],
            "notes": self.notes,
        }

    def format_table(self) -> str:
        lines = [
            f"ring: {self.ring}   H(P|pi) = {self.source_entropy:.4f}",
            f"{'ideal':<22}{'scale':>7}{'complement':>12}{'quotient':>20}{'scaled term':>20}",
        ]
        for t in self.terms:
            quot = (
                f"{t.quotient_lo:.4f}"
                if t.quotient_exact
                else f"[{t.quotient_lo:.4f}, {t.quotient_hi:.4f}]"
            )
            scaled = (
                f"{t.scaled_hi:.4f}"
                if t.scaled_lo == t.scaled_hi
                else f"[{t.scaled_lo:.4f}, {t.scaled_hi:.4f}]"
            )
            lines.append(f"{t.label:<22}{t.scale:>7.3f}{t.complement:>12.4f}{quot:>20}{scaled:>20}")
        r0 = f"{self.r0_hi:.4f}" if self.r0_lo == self.r0_hi else f"[{self.r0_lo:.4f}, {self.r0_hi:.4f}]"
        lines.append(f"R0 = {r0}  ({'exact' if self.exact else 'bounded'})")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)


def _ideal_terms(ring: FiniteRing, chain: MarkovChain, element_of_state, depth: int) -> list:
    """Per-ideal terms for a chain whose states carry distinct ring elements."""
    elements = [int(e) for e in element_of_state]
    if len(set(elements)) != len(elements):
        raise ValueError("states must map to distinct ring elements")
    if chain.n != len(elements):
        raise ValueError("element map must cover every state")
    h_source = conditional_entropy(chain.P, invariant_distribution(chain))
    terms = []
    for ideal in enumerate_left_ideals(ring):
        if ideal.order == 1:
            continue  # the zero ideal is excluded from the max
        part = quotient_partition(ideal)
        blocks = []
        labels = np.empty(chain.n, dtype=np.int64)
        for ci, coset in enumerate(part.cosets):
            block = [s for s, e in enumerate(elements) if e in coset]
            labels[block] = ci
            if block:
                blocks.append(block)
        scale = math.log2(ring.order) / math.log2(ideal.order)
        complement = blockdiag_complement_entropy(chain, blocks)
        bounds = quotient_entropy_rate_bounds(chain, list(labels), depth=depth)
        terms.append(
            IdealTerm(
                members=ideal.members,
                scale=scale,
                complement=complement,
                quotient_lo=h_source - bounds.upper,
                quotient_hi=h_source - bounds.lower,
                quotient_exact=bounds.exact,
                label=ideal.label(),
            )
        )
    return terms


def single_source_rate(ring: FiniteRing, chain: MarkovChain, depth: int = 6) -> RateReport:
    """Threshold for losslessly coding a Markov source on the ring itself.

    The chain's i-th state is identified with ring element i.  For a field
    the only non-zero ideal is R and the report collapses to H(P|pi).
    """
    if chain.n != ring.order:
        raise ValueError(
            f"chain has {chain.n} states but the ring has order {ring.order}"
        )
    pi = invariant_distribution(chain)
    report = RateReport(
        ring=ring.description,
        source_entropy=conditional_entropy(chain.P, pi),
        terms=_ideal_terms(ring, chain, list(range(ring.order)), depth),
    )
    return report


@dataclass
class InjectionReport:
    """Best injection of the source alphabet into the ring (smallest r)."""

    ring: str
    best_injection: tuple
    best: RateReport
    rates: list  # (injection, r_lo, r_hi) per injection

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "best_injection": list(self.best_injection),
            "best": self.best.to_dict(),
            "rates": [
                {"injection": list(phi), "r": [lo, hi]} for phi, lo, hi in self.rates
            ],
        }


def injection_search_rate(
    ring: FiniteRing,
    chain: MarkovChain,
    depth: int = 6,
    max_injections: int = 50_000,
) -> InjectionReport:
    """Sweep all injections of the source alphabet into the ring.

    Relabeling the alphabet changes which states share a coset, hence the
    threshold; the achievable region is the union over injections, so the
    report keeps the injection minimizing the (conservative) threshold.
    """
    m = chain.n
    if m > ring.order:
        raise ValueError("alphabet larger than the ring")
    count = math.perm(ring.order, m)
    if count > max_injections:
        raise ValueError(
            f"{count} injections exceed the sweep bound {max_injections}"
        )
    rates = []
    best = None
    best_phi = None
    for phi in permutations(range(ring.order), m):
        report = RateReport(
            ring=ring.description,
            source_entropy=conditional_entropy(chain.P, invariant_distribution(chain)),
            terms=_ideal_terms(ring, chain, list(phi), depth),
        )
        rates.append((phi, report.r0_lo, report.r0_hi))
        if best is None or report.r0_hi < best.r0_hi:
            best = report
            best_phi = phi
    return InjectionReport(ring.description, best_phi, best, rates)


@dataclass
class ComputingReport:
    """Symmetric-rate threshold for computing g through identical encoders.

    The region is the diagonal { [R, ..., R] : R > r0 } in bits per symbol
    per source.  mode = "lumped" means the sum process was certified
    Markov and the full per-ideal machinery applies; mode = "bounded"
    falls back to the sum process's entropy-rate interval.
    """

    mode: str
    arity: int
    ring: str
    rate: RateReport | None
    r0_lo: float
    r0_hi: float
    injective_on_sums: bool
    burke_certified: bool
    notes: list = field(default_factory=list)

    @property
    def r0(self) -> float:
        return self.r0_hi

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "arity": self.arity,
            "ring": self.ring,
            "r0": [self.r0_lo, self.r0_hi],
            "injective_on_sums": self.injective_on_sums,
            "burke_certified": self.burke_certified,
            "rate": self.rate.to_dict() if self.rate else None,
            "notes": self.notes,
        }


def computing_rate(
    g: FunctionSpec,
    p: Presentation,
    joint: MarkovChain,
    depth: int = 6,
) -> ComputingReport:
    """Threshold for computing g = h(sum k_t) when every source uses the
    same linear encoder over the presentation's ring."""
    ok, witness = verify_presentation(g, p)
    if not ok:
        raise ValueError(f"presentation does not realize the function (at {witness})")
    sp = sum_process_chain(joint, p, depth=depth, domains=g.domains)
    injective = injectivity_obstruction_check(g, p)
    if sp.mode == "lumped":
        report = RateReport(
            ring=p.ring.description,
            source_entropy=conditional_entropy(sp.chain.P, invariant_distribution(sp.chain)),
            terms=_ideal_terms(p.ring, sp.chain, sp.elements, depth),
        )
        return ComputingReport(
            mode="lumped",
            arity=g.arity,
            ring=p.ring.description,
            rate=report,
            r0_lo=report.r0_lo,
            r0_hi=report.r0_hi,
            injective_on_sums=injective,
            burke_certified=sp.burke,
        )
    return ComputingReport(
        mode="bounded",
        arity=g.arity,
        ring=p.ring.description,
        rate=None,
        r0_lo=sp.bounds.lower,
        r0_hi=sp.bounds.upper,
        injective_on_sums=injective,
        burke_certified=False,
        notes=[
            "sum process not certified Markov; threshold interval is its "
            f"entropy-rate bound at depth {sp.bounds.depth}"
        ],
    )


@dataclass
class CoverConstraint:
    """One sum-rate constraint: sum over T of R_t > bound."""

    subset: tuple
    lo: float
    hi: float
    exact: bool


def cover_region(joint: MarkovChain, depth: int = 6) -> list:
    """Sum-rate constraints for losslessly coding all sources jointly.

    For every non-empty T the constraint is the joint conditional entropy
    minus the entropy rate of the complementary sources' projection; the
    projection process is generally hidden-Markov, so non-lumpable cases
    yield interval constraints.
    """
    first = joint.states[0]
    if not isinstance(first, (tuple, list)):
        raise ValueError("joint chain states must be tuples")
    s = len(first)
    pi = invariant_distribution(joint)
    h_joint = conditional_entropy(joint.P, pi)
    constraints = []
    for r in range(1, s + 1):
        for T in combinations(range(s), r):
            comp = tuple(t for t in range(s) if t not in T)
            if not comp:
                constraints.append(CoverConstraint(T, h_joint, h_joint, True))
                continue
            labels = [tuple(state[t] for t in comp) for state in joint.states]
            bounds = quotient_entropy_rate_bounds(joint, labels, depth=depth)
            constraints.append(
                CoverConstraint(
                    T, h_joint - bounds.upper, h_joint - bounds.lower, bounds.exact
                )
            )
    return constraints


@dataclass
class ComparisonReport:
    """Thresholds of several presentations of one function, best first."""

    entries: list  # (name, ComputingReport)

    @property
    def best(self):
        return min(self.entries, key=lambda e: e[1].r0_hi)

    def to_dict(self) -> dict:
        return {
            "best": self.best[0],
            "entries": [
                {"name": name, "report": rep.to_dict()} for name, rep in self.entries
            ],
        }

    def format_table(self) -> str:
        lines = [f"{'presentation':<18}{'ring':<14}{'r0':>20}{'h injective on sums':>22}"]
        for name, rep in self.entries:
            r0 = f"{rep.r0_hi:.4f}" if rep.r0_lo == rep.r0_hi else f"[{rep.r0_lo:.4f}, {rep.r0_hi:.4f}]"
            lines.append(
                f"{name:<18}{rep.ring:<14}{r0:>20}{str(rep.injective_on_sums):>22}"
            )
        lines.append(f"best threshold: {self.best[0]}")
        return "\n".join(lines)


def compare_presentations(g: FunctionSpec, presentations, joint: MarkovChain,
                          depth: int = 6) -> ComparisonReport:
    """Evaluate named presentations of g side by side.

    ``presentations`` maps names to Presentation objects; conservative
    (upper) thresholds decide the ranking.
    """
    entries = []
    for name, p in presentations.items():
        entries.append((name, computing_rate(g, p, joint, depth=depth)))
    return ComparisonReport(entries)
