import numpy as np
import pytest

from ringcoding import (
    MarkovChain,
    SimConfig,
    apply_linear_map,
    enumerate_typical_paths,
    make_modular_ring,
    ml_decode,
    random_linear_map,
    run_computing_sim,
    run_single_source_sim,
    solution_coset,
    typicality_decode,
)
from ringcoding import reference
from ringcoding.rings import RingMatrix
from ringcoding.simulate import SequenceSpace, _CosetIndex


def test_solution_coset_identity(z4):
    eye = RingMatrix(z4, np.eye(4, dtype=int))
    sols = solution_coset(eye, [1, 2, 3, 0])
    assert sols.shape == (1, 4)
    assert sols[0].tolist() == [1, 2, 3, 0]


def test_solution_coset_zero_matrix(z4):
    zero = RingMatrix(z4, np.zeros((2, 3), dtype=int))
    sols = solution_coset(zero, [0, 0])
    assert sols.shape == (4**3, 3)


def test_coset_sizes_uniform_and_account(z4):
    """Non-empty cosets of a linear map all have kernel size, and
    |kernel| * |image| = |R|^n."""
    rng = np.random.default_rng(9)
    for _ in range(5):
        a = random_linear_map(z4, 2, 6, rng)
        space = SequenceSpace(z4, range(4), 6)
        index = _CosetIndex(space, a)
        _, counts = np.unique(index.keys, return_counts=True)
        assert counts.min() == counts.max()
        assert counts[0] * len(counts) == 4**6


def test_solution_matches_apply(z4):
    rng = np.random.default_rng(2)
    a = random_linear_map(z4, 2, 5, rng)
    z = [3, 1]
    for x in solution_coset(a, z):
        assert np.array_equal(apply_linear_map(a, x), z)


def test_ml_decode_unique_solution(z4, source_chain):
    eye = RingMatrix(z4, np.eye(5, dtype=int))
    word, tie = ml_decode(eye, [2, 0, 1, 3, 3], source_chain)
    assert word.tolist() == [2, 0, 1, 3, 3]
    assert not tie


def test_ml_decode_tie_flagged(z4):
    uniform = MarkovChain(np.full((4, 4), 0.25))
    zero = RingMatrix(z4, np.zeros((1, 2), dtype=int))
    word, tie = ml_decode(zero, [0], uniform)
    assert tie


def test_ml_decode_finds_max_probability(z4, source_chain):
    rng = np.random.default_rng(4)
    a = random_linear_map(z4, 2, 6, rng)
    space = SequenceSpace(z4, range(4), 6)
    lp = space.log_probs(source_chain)
    index = _CosetIndex(space, a)
    for z in ([1, 2], [0, 3], [2, 2]):
        word, tie = ml_decode(a, z, source_chain)
        members = index.coset_members(space.codeword_key(z))
        best = lp[members].max()
        assert abs(lp[space.index_of(word)] - best) < 1e-12
        if tie:  # the symmetric rows of this source can tie exactly
            assert (np.abs(lp[members] - best) < 1e-12).sum() >= 2


def test_typicality_decode_modes(z4, source_chain):
    n, eps = 10, 0.2
    typical = list(enumerate_typical_paths(source_chain, n, eps))
    assert typical
    x = typical[0]
    eye = RingMatrix(z4, np.eye(n, dtype=int))
    word, failure = typicality_decode(eye, x, source_chain, eps)
    assert failure is None and word.tolist() == list(x)
    atyp = np.zeros(n, dtype=int)
    _, failure = typicality_decode(eye, atyp, source_chain, eps)
    assert failure == "atypical"
    collapse = RingMatrix(z4, np.zeros((1, n), dtype=int))
    _, failure = typicality_decode(collapse, [0], source_chain, eps)
    assert failure == "ambiguous"


def test_error_events_match_decoder_outcomes(z4, source_chain):
    """The typical-set decoder fails exactly on the two proof events:
    source word atypical, or a typical word collides under the encoder."""
    n, eps = 8, 0.2
    rng = np.random.default_rng(6)
    a = random_linear_map(z4, 2, n, rng)
    space = SequenceSpace(z4, range(4), n)
    index = _CosetIndex(space, a)
    typical = list(enumerate_typical_paths(source_chain, n, eps))
    typ_idx = {space.index_of(t) for t in typical}
    keys_of_typical = {}
    for t in typical:
        keys_of_typical.setdefault(int(index.keys[space.index_of(t)]), []).append(
            space.index_of(t)
        )
    probe = [space.digits[i].astype(np.int64) for i in
             rng.integers(0, space.count, 150)] + typical
    for x in probe:
        xi = space.index_of(x)
        key = int(index.keys[xi])
        word, failure = typicality_decode(a, apply_linear_map(a, x), source_chain, eps)
        decoded_ok = failure is None and word is not None and np.array_equal(word, x)
        e1 = xi not in typ_idx
        e2 = any(other != xi for other in keys_of_typical.get(key, []))
        assert decoded_ok == (not e1 and not e2)


def test_single_source_error_ordering(z4, source_chain):
    results = {}
    for k in (1, 4):
        cfg = SimConfig(ring=z4, n=10, k=k, trials=400, seed=2024, chain=source_chain)
        results[k] = run_single_source_sim(cfg)
    assert results[4].error_prob < results[1].error_prob
    assert results[4].stderr <= 0.5 / np.sqrt(400)


def test_single_source_high_rate_low_error(z4, source_chain):
    cfg = SimConfig(ring=z4, n=10, k=4, trials=400, seed=2024, chain=source_chain)
    res = run_single_source_sim(cfg)
    assert res.error_prob < 0.1


def test_budget_refusal(z4, source_chain):
    cfg = SimConfig(ring=z4, n=30, k=2, trials=10, seed=0, chain=source_chain)
    with pytest.raises(ValueError):
        run_single_source_sim(cfg)


def test_trial_determinism(z4, source_chain):
    cfg = SimConfig(ring=z4, n=8, k=2, trials=100, seed=7, chain=source_chain)
    a = run_single_source_sim(cfg)
    b = run_single_source_sim(cfg)
    assert a.to_dict() == b.to_dict()


def test_computing_identity_presentation_matches_single_source(z4, source_chain):
    """Arity-1 identity presentation: the computing pipeline reduces to
    plain single-source simulation."""
    from ringcoding import FunctionSpec, Presentation

    ident = FunctionSpec.from_callable([[0, 1, 2, 3]], [0, 1, 2, 3], lambda x: x)
    pres = Presentation(z4, [[0, 1, 2, 3]], {0: 0, 1: 1, 2: 2, 3: 3})
    joint = MarkovChain(source_chain.P, states=[(s,) for s in range(4)])
    cfg_c = SimConfig(ring=z4, n=8, k=2, trials=200, seed=11, joint=joint,
                      function=ident, presentation=pres)
    cfg_s = SimConfig(ring=z4, n=8, k=2, trials=200, seed=11, chain=source_chain)
    rc = run_computing_sim(cfg_c)
    rs = run_single_source_sim(cfg_s)
    assert rc.errors == rs.errors
    assert rc.identity_failures == 0


def test_computing_sim_reference(z4, joint8):
    cfg = SimConfig(ring=z4, n=8, k=3, trials=300, seed=3, joint=joint8,
                    function=reference.target_function(),
                    presentation=reference.presentation_z4())
    res = run_computing_sim(cfg)
    assert res.identity_checked == 300 and res.identity_failures == 0
    assert res.error_prob < 0.5


def test_computing_sim_schedule_matches_homogeneous(z4, joint8):
    """The alternating schedule drives the same function-value process, so
    its error rate is statistically indistinguishable from the
    homogeneous joint chain's."""
    g = reference.target_function()
    pres = reference.presentation_z4()
    base = dict(ring=z4, n=8, k=3, trials=600, function=g, presentation=pres)
    r_hom = run_computing_sim(SimConfig(**base, seed=21, joint=joint8))
    r_alt = run_computing_sim(
        SimConfig(**base, seed=21, schedule=reference.alternating_schedule())
    )
    assert r_alt.identity_failures == 0
    p, q = r_hom.error_prob, r_alt.error_prob
    se = np.sqrt(p * (1 - p) / 600 + q * (1 - q) / 600)
    assert abs(p - q) <= 3 * max(se, 1e-3)


def test_decode_model_requires_lumpable(z4):
    from ringcoding import FunctionSpec

    g = reference.target_function()
    rows = np.array(
        [
            [0.30, 0.10, 0.10, 0.10, 0.10, 0.10, 0.10, 0.10],
            [0.05, 0.40, 0.05, 0.10, 0.10, 0.10, 0.10, 0.10],
            [0.10, 0.10, 0.30, 0.10, 0.10, 0.10, 0.10, 0.10],
            [0.10, 0.10, 0.10, 0.30, 0.10, 0.10, 0.10, 0.10],
            [0.10, 0.10, 0.10, 0.10, 0.30, 0.10, 0.10, 0.10],
            [0.10, 0.10, 0.10, 0.10, 0.10, 0.30, 0.10, 0.10],
            [0.10, 0.10, 0.10, 0.10, 0.10, 0.10, 0.30, 0.10],
            [0.05, 0.10, 0.10, 0.10, 0.10, 0.10, 0.10, 0.35],
        ]
    )
    joint = MarkovChain(rows, states=reference.joint_chain().states)
    cfg = SimConfig(ring=z4, n=6, k=2, trials=5, seed=0, joint=joint,
                    function=g, presentation=reference.presentation_z4())
    with pytest.raises(ValueError):
        run_computing_sim(cfg)


def test_full_rate_invertible_matrix_decodes_exactly(z4, source_chain):
    """k = n with an invertible draw: singleton cosets, zero error."""
    cfg = SimConfig(ring=z4, n=6, k=6, trials=60, seed=0, chain=source_chain)
    res = run_single_source_sim(cfg)
    assert sorted(res.coset_sizes) == [1]
    assert res.error_prob == 0.0
