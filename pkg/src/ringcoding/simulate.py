"""Monte Carlo simulation of random linear coding over a finite ring.

The encoder is a uniformly random k x n matrix A over the ring; decoding
searches the solution coset {x : A x = z}.  At desk scale the whole
sequence space (|alphabet|^n, bounded by a budget) is enumerated once per
matrix, so cosets come from exact bucketing rather than algebra over the
ring, and the maximum-likelihood decoder is exact.  ML decoding within
the coset can only beat the typical-set decoder used by the achievability
argument, so measured error rates are honest upper-bound surrogates;
``typicality_decode`` mirrors the proof's error-event split on tiny
instances.
"""

from dataclasses import dataclass, field

import numpy as np

from .functions import FunctionSpec, Presentation, sum_process_chain
from .markov import MarkovChain, invariant_distribution
from .rings import FiniteRing, RingMatrix, random_linear_map
from .typicality import sample_path

__all__ = [
    "SimConfig",
    "SimResult",
    "SequenceSpace",
    "TypicalSetDecoder",
    "solution_coset",
    "ml_decode",
    "typicality_decode",
    "run_single_source_sim",
    "run_computing_sim",
]

DEFAULT_BUDGET = 10**7


@dataclass
class SimConfig:
    """Configuration for one simulation run.

    Exactly one source form applies: ``chain`` (single source over the
    ring), or ``joint``/``schedule`` plus ``function`` and
    ``presentation`` (function computing with identical encoders; a
    schedule is a list of chains applied cyclically).
    """

    ring: FiniteRing
    n: int
    k: int
    trials: int
    seed: int = 0
    decoder: str = "ml"  # "ml" | "typicality"
    eps: float = 0.3
    budget: int = DEFAULT_BUDGET
    keep_trials: bool = False
    chain: MarkovChain | None = None
    joint: MarkovChain | None = None
    schedule: list | None = None
    function: FunctionSpec | None = None
    presentation: Presentation | None = None

    def __post_init__(self):
        if self.n < 2 or self.k < 1 or self.trials < 1:
            raise ValueError("need n >= 2, k >= 1, trials >= 1")
        if self.decoder not in ("ml", "typicality"):
            raise ValueError(f"unknown decoder {self.decoder!r}")


@dataclass
class SimResult:
    """Aggregated outcome of a simulation run."""

    trials: int
    errors: int
    ties: int
    error_prob: float
    stderr: float
    coset_sizes: dict
    decode_modes: dict = field(default_factory=dict)
    identity_checked: int = 0
    identity_failures: int = 0
    trial_rows: list | None = None  # (trial, outcome, coset_size) when kept

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "errors": self.errors,
            "ties": self.ties,
            "error_prob": self.error_prob,
            "stderr": self.stderr,
            "coset_sizes": {str(k): v for k, v in sorted(self.coset_sizes.items())},
            "decode_modes": dict(self.decode_modes),
            "identity_checked": self.identity_checked,
            "identity_failures": self.identity_failures,
        }


def _aggregate(trials, errors, ties, sizes, modes=None, checked=0, id_fail=0,
               rows=None) -> SimResult:
    p = errors / trials
    se = float(np.sqrt(p * (1 - p) / trials))
    return SimResult(trials, errors, ties, p, se, sizes, modes or {}, checked,
                     id_fail, rows)


class SequenceSpace:
    """All length-n words over an element alphabet, mixed-radix indexed.

    ``elements`` lists the ring elements the source can emit (the whole
    ring for a single source, the reachable sum set for computing runs);
    digit d at a position means element ``elements[d]``.
    """

    def __init__(self, ring: FiniteRing, elements, n: int, budget: int = DEFAULT_BUDGET):
        self.ring = ring
        self.elements = np.asarray(list(elements), dtype=np.int64)
        self.n = n
        m = len(self.elements)
        count = m**n
        if count > budget:
            raise ValueError(
                f"{m}^{n} sequences exceed the enumeration budget {budget}"
            )
        self.count = count
        radix = m ** np.arange(n - 1, -1, -1, dtype=np.int64)
        self._radix = radix
        idx = np.arange(count, dtype=np.int64)
        self.digits = ((idx[:, None] // radix[None, :]) % m).astype(np.int8)

    def index_of(self, digit_seq) -> int:
        return int(np.asarray(digit_seq, dtype=np.int64) @ self._radix)

    def encode_keys(self, a: RingMatrix) -> np.ndarray:
        """Key of A x for every word x, packing the k outputs base-|R|."""
        ring = self.ring
        if ring.order**a.rows > 2**62:
            raise ValueError("codeword space too large to pack into int64 keys")
        keys = np.zeros(self.count, dtype=np.int64)
        weight = 1
        for i in range(a.rows):
            acc = np.full(self.count, ring.zero, dtype=np.int64)
            for j in range(self.n):
                lut = ring.mul[a.entries[i, j], self.elements]
                acc = ring.add[acc, lut[self.digits[:, j]]]
            keys += acc * weight
            weight *= ring.order
        return keys

    def codeword_key(self, z) -> int:
        z = np.asarray(z, dtype=np.int64)
        weight = self.ring.order ** np.arange(len(z), dtype=np.int64)
        return int(z @ weight)

    def log_probs(self, chain: MarkovChain, init=None) -> np.ndarray:
        """log2 probability of every word under a stationary (or given-init)
        chain whose state i corresponds to digit i."""
        if chain.n != len(self.elements):
            raise ValueError("chain state count must match the alphabet")
        init = invariant_distribution(chain) if init is None else np.asarray(init, float)
        with np.errstate(divide="ignore"):
            l_init = np.log2(init)
            l_p = np.log2(chain.P)
        lp = l_init[self.digits[:, 0].astype(np.int64)].copy()
        for t in range(self.n - 1):
            lp += l_p[self.digits[:, t].astype(np.int64), self.digits[:, t + 1].astype(np.int64)]
        return lp


class _CosetIndex:
    """Groups all words by codeword key for O(log N) coset lookup."""

    def __init__(self, space: SequenceSpace, a: RingMatrix):
        self.space = space
        self.keys = space.encode_keys(a)
        self.order = np.argsort(self.keys, kind="stable")
        self.sorted_keys = self.keys[self.order]

    def coset_members(self, key: int) -> np.ndarray:
        lo = np.searchsorted(self.sorted_keys, key, side="left")
        hi = np.searchsorted(self.sorted_keys, key, side="right")
        return self.order[lo:hi]


def solution_coset(a: RingMatrix, z, elements=None, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """All words x (rows, as element vectors) with A x = z, by exact
    enumeration of the word space."""
    space = SequenceSpace(a.ring, elements if elements is not None else range(a.ring.order), a.cols, budget)
    index = _CosetIndex(space, a)
    members = index.coset_members(space.codeword_key(z))
    return space.elements[space.digits[np.sort(members)].astype(np.int64)]


def ml_decode(a: RingMatrix, z, chain: MarkovChain, elements=None,
              budget: int = DEFAULT_BUDGET):
    """Most probable coset member under the stationary chain.

    Returns (word or None, tie_flag); ties are decided lexicographically
    but flagged (and counted as errors by the simulators).
    """
    space = SequenceSpace(a.ring, elements if elements is not None else range(a.ring.order), a.cols, budget)
    index = _CosetIndex(space, a)
    members = index.coset_members(space.codeword_key(z))
    if len(members) == 0:
        return None, False
    lp = space.log_probs(chain)[members]
    best = lp.max()
    hits = members[lp >= best - 1e-12]
    word = space.elements[space.digits[hits.min()].astype(np.int64)]
    return word, len(hits) > 1


class TypicalSetDecoder:
    """Decoder that searches the Supremus typical set instead of the coset.

    A coset member is accepted iff it is typical, so intersecting the
    (exhaustively enumerated, usually tiny) typical set with the coset
    gives the same verdict as scanning the coset, at a fraction of the
    cost.  The typical words are enumerated once per (chain, n, eps).
    """

    def __init__(self, ring: FiniteRing, chain: MarkovChain, n: int, eps: float,
                 elements=None, budget: int = DEFAULT_BUDGET):
        from .typicality import enumerate_typical_paths

        self.ring = ring
        self.eps = eps
        self.elements = np.asarray(
            list(elements if elements is not None else range(ring.order)),
            dtype=np.int64,
        )
        if chain.n != len(self.elements):
            raise ValueError("chain state count must match the alphabet")
        words = []
        for path in enumerate_typical_paths(chain, n, eps, supremus=True):
            words.append(path)
            if len(words) > budget:
                raise ValueError(f"typical set exceeds the budget {budget}")
        self.typical_digits = (
            np.array(words, dtype=np.int64) if words else np.empty((0, n), dtype=np.int64)
        )
        self.typical_words = self.elements[self.typical_digits]

    def decode(self, a: RingMatrix, z):
        """Unique typical word with A x = z; (word or None, failure kind).

        failure is None on success, "atypical" when no typical word maps
        to z, "ambiguous" when several do.
        """
        z = np.asarray(z, dtype=np.int64)
        hits = []
        for word in self.typical_words:
            if np.array_equal(_encode(self.ring, a, word), z):
                hits.append(word)
                if len(hits) > 1:
                    return None, "ambiguous"
        if not hits:
            return None, "atypical"
        return hits[0], None


def typicality_decode(a: RingMatrix, z, chain: MarkovChain, eps: float,
                      elements=None, budget: int = DEFAULT_BUDGET):
    """One-shot Supremus typical-set decode (see TypicalSetDecoder)."""
    decoder = TypicalSetDecoder(a.ring, chain, a.cols, eps, elements, budget)
    return decoder.decode(a, z)


def run_single_source_sim(cfg: SimConfig) -> SimResult:
    """Encode/decode trials for one Markov source over the ring's elements."""
    if cfg.chain is None:
        raise ValueError("single-source simulation needs cfg.chain")
    if cfg.chain.n != cfg.ring.order:
        raise ValueError("chain must have one state per ring element")
    seeds = np.random.SeedSequence(cfg.seed).spawn(2)
    a = random_linear_map(cfg.ring, cfg.k, cfg.n, np.random.default_rng(seeds[0]))
    space = SequenceSpace(cfg.ring, range(cfg.ring.order), cfg.n, cfg.budget)
    index = _CosetIndex(space, a)
    lp = typ_idx = typ_keys = None
    if cfg.decoder == "ml":
        lp = space.log_probs(cfg.chain)
    else:
        dec = TypicalSetDecoder(cfg.ring, cfg.chain, cfg.n, cfg.eps, budget=cfg.budget)
        typ_idx = np.array([space.index_of(w) for w in dec.typical_digits], dtype=np.int64)
        typ_keys = index.keys[typ_idx] if len(typ_idx) else np.empty(0, dtype=np.int64)
    rng = np.random.default_rng(seeds[1])
    errors = ties = 0
    sizes = {}
    modes = {"unique_ml": 0, "tie": 0, "wrong": 0,
             "atypical": 0, "ambiguous": 0, "typical_ok": 0}
    rows = [] if cfg.keep_trials else None
    for trial in range(cfg.trials):
        path = sample_path(cfg.chain, cfg.n, rng)
        true_idx = space.index_of(path)
        true_key = int(index.keys[true_idx])
        members = index.coset_members(true_key)
        sizes[len(members)] = sizes.get(len(members), 0) + 1
        if cfg.decoder == "ml":
            vals = lp[members]
            best = vals.max()
            hits = members[vals >= best - 1e-12]
            if len(hits) > 1:
                ties += 1
                errors += 1
                outcome = "tie"
            elif hits[0] != true_idx:
                errors += 1
                outcome = "wrong"
            else:
                outcome = "unique_ml"
        else:
            hits = typ_idx[typ_keys == true_key]
            if len(hits) == 1 and hits[0] == true_idx:
                outcome = "typical_ok"
            elif len(hits) > 1:
                errors += 1
                outcome = "ambiguous"
            elif len(hits) == 1:
                errors += 1
                outcome = "wrong"
            else:
                errors += 1
                outcome = "atypical"
        modes[outcome] += 1
        if rows is not None:
            rows.append((trial, outcome, len(members)))
    return _aggregate(cfg.trials, errors, ties, sizes, modes, rows=rows)


def _decode_model(cfg: SimConfig):
    """Sum-process chain used by the decoder, with its element alphabet.

    Every schedule member must induce the same Markov sum process (this is
    what makes a time-varying source decodable with one homogeneous
    model); tolerances allow for matrices published at 4 decimals.
    """
    sources = [cfg.joint] if cfg.joint is not None else list(cfg.schedule)
    lumps = []
    for ch in sources:
        sp = sum_process_chain(ch, cfg.presentation, domains=cfg.function.domains,
                               tol=1e-3)
        if sp.mode != "lumped":
            raise ValueError(
                "sum process is not certified Markov; the simulator needs a "
                "lumpable joint model"
            )
        lumps.append(sp)
    base = lumps[0]
    for other in lumps[1:]:
        if other.elements != base.elements or np.abs(other.chain.P - base.chain.P).max() > 1e-3:
            raise ValueError("schedule members induce different sum processes")
    return base


def run_computing_sim(cfg: SimConfig) -> SimResult:
    """Function-computing trials: every source applies the same matrix.

    Per trial the joint path is sampled, each embedded source sequence
    k_t(X_t^n) is encoded separately, and the codewords are combined by
    ring addition; the decoder recovers the sum word, applies h
    symbolwise and is scored against the true function path.  The
    linearity identity (sum of codewords = codeword of the sum word) is
    verified exactly on every trial.
    """
    if cfg.presentation is None or cfg.function is None:
        raise ValueError("computing simulation needs a presentation and function")
    if cfg.joint is None and not cfg.schedule:
        raise ValueError("computing simulation needs a joint chain or schedule")
    ring = cfg.ring
    pres = cfg.presentation
    if pres.ring is not ring and pres.ring != ring:
        raise ValueError("presentation ring differs from cfg.ring")
    model = _decode_model(cfg)
    zchain, elements = model.chain, [int(e) for e in model.elements]

    seeds = np.random.SeedSequence(cfg.seed).spawn(2)
    a = random_linear_map(ring, cfg.k, cfg.n, np.random.default_rng(seeds[0]))
    space = SequenceSpace(ring, elements, cfg.n, cfg.budget)
    index = _CosetIndex(space, a)
    lp = typ_idx = typ_keys = None
    if cfg.decoder == "ml":
        lp = space.log_probs(zchain)
    else:
        dec = TypicalSetDecoder(ring, zchain, cfg.n, cfg.eps,
                                elements=elements, budget=cfg.budget)
        typ_idx = np.array([space.index_of(w) for w in dec.typical_digits], dtype=np.int64)
        typ_keys = index.keys[typ_idx] if len(typ_idx) else np.empty(0, dtype=np.int64)

    source = cfg.joint if cfg.joint is not None else cfg.schedule
    joint_states = (cfg.joint or cfg.schedule[0]).states
    letter_idx = [{v: i for i, v in enumerate(d)} for d in cfg.function.domains]
    state_letters = [
        tuple(letter_idx[t][v] for t, v in enumerate(st)) for st in joint_states
    ]
    sum_label = model.labeling  # ring element per joint state

    rng = np.random.default_rng(seeds[1])
    errors = ties = 0
    sizes = {}
    checked = id_fail = 0
    rows = [] if cfg.keep_trials else None
    add = ring.add
    for trial in range(cfg.trials):
        jpath = sample_path(source, cfg.n, rng)
        zpath = np.array([sum_label[s] for s in jpath], dtype=np.int64)
        # encode each source with the same matrix, combine codewords
        combined = np.full(cfg.k, ring.zero, dtype=np.int64)
        for t in range(pres.arity):
            seq_t = pres.maps[t][[state_letters[s][t] for s in jpath]]
            zw = _encode(ring, a, seq_t)
            combined = add[combined, zw]
        direct = _encode(ring, a, zpath)
        checked += 1
        if not np.array_equal(combined, direct):
            id_fail += 1
        true_key = space.codeword_key(combined)
        members = index.coset_members(true_key)
        sizes[len(members)] = sizes.get(len(members), 0) + 1
        gpath = [cfg.presentation.h[int(e)] for e in zpath]
        decoded = None
        outcome = "ok"
        if cfg.decoder == "ml":
            vals = lp[members]
            best = vals.max()
            hits = members[vals >= best - 1e-12]
            if len(hits) > 1:
                ties += 1
                outcome = "tie"
            else:
                decoded = space.elements[space.digits[hits[0]].astype(np.int64)]
        else:
            hits = typ_idx[typ_keys == true_key]
            if len(hits) != 1:
                outcome = "ambiguous" if len(hits) > 1 else "atypical"
            else:
                decoded = space.elements[space.digits[hits[0]].astype(np.int64)]
        if decoded is not None:
            g_decoded = [pres.h.get(int(e)) for e in decoded]
            if g_decoded != gpath:
                outcome = "wrong"
        if outcome != "ok":
            errors += 1
        if rows is not None:
            rows.append((trial, outcome, len(members)))
    return _aggregate(cfg.trials, errors, ties, sizes, checked=checked,
                      id_fail=id_fail, rows=rows)


def _encode(ring: FiniteRing, a: RingMatrix, seq) -> np.ndarray:
    out = np.empty(a.rows, dtype=np.int64)
    for i in range(a.rows):
        acc = ring.zero
        for j in range(a.cols):
            acc = int(ring.add[acc, ring.mul[a.entries[i, j], seq[j]]])
        out[i] = acc
    return out
