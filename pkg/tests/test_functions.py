import numpy as np
import pytest

from ringcoding import (
    FunctionSpec,
    MarkovChain,
    Presentation,
    canonical_presentation,
    check_burke_form,
    conditional_entropy,
    induced_sum_labeling,
    injectivity_obstruction_check,
    invariant_distribution,
    is_lumpable,
    lump,
    make_modular_ring,
    sum_process_chain,
    verify_presentation,
)
from ringcoding import reference


@pytest.fixture(scope="module")
def g3():
    return reference.target_function()


def test_function_spec_lookup(g3):
    assert g3(0, 0, 0) == 0
    assert g3(1, 1, 1) == 2
    assert g3(0, 0, 1) == 3


def test_min_presentation_over_z3():
    # min{x, y} on {0,1}^2 written as h(x + y) over Z3 with h = s - s^2
    gmin = FunctionSpec.from_callable([[0, 1], [0, 1]], [0, 1], min)
    z3 = make_modular_ring(3)
    pres = Presentation(z3, [[0, 1], [0, 1]], {0: 0, 1: 0, 2: 1})
    ok, witness = verify_presentation(gmin, pres)
    assert ok and witness is None


def test_reference_presentations_verify(g3):
    assert verify_presentation(g3, reference.presentation_z4()) == (True, None)
    assert verify_presentation(g3, reference.presentation_z5()) == (True, None)


def test_published_z5_form_verifies(g3):
    # same sum written with coefficients (1, 2, 4) and h folding 4 onto 3
    z5 = make_modular_ring(5)
    pres = Presentation(z5, [[0, 1], [0, 2], [0, 4]], {0: 0, 1: 1, 2: 2, 3: 3, 4: 3})
    assert verify_presentation(g3, pres) == (True, None)
    assert injectivity_obstruction_check(g3, pres) is False


def test_verify_presentation_counterexample(g3):
    z4 = make_modular_ring(4)
    broken = Presentation(z4, [[0, 1], [0, 2], [0, 3]], {0: 0, 1: 1, 2: 2, 3: 0})
    ok, witness = verify_presentation(g3, broken)
    assert not ok
    assert g3.value_index(witness) != 0


def test_canonical_presentation_single_identity():
    ident = FunctionSpec.from_callable([[0, 1]], [0, 1], lambda x: x)
    pres = canonical_presentation(ident, 2)
    assert pres.ring.order == 2
    assert verify_presentation(ident, pres) == (True, None)
    assert injectivity_obstruction_check(ident, pres) is True


def test_canonical_presentation_min():
    gmin = FunctionSpec.from_callable([[0, 1], [0, 1]], [0, 1], min)
    pres = canonical_presentation(gmin, 2)
    assert pres.ring.order == 4  # (Z2)^2
    assert verify_presentation(gmin, pres) == (True, None)


def test_canonical_presentation_reference_function(g3):
    pres = canonical_presentation(g3, 2)
    assert pres.ring.order == 8  # (Z2)^3
    assert verify_presentation(g3, pres) == (True, None)


def test_canonical_presentation_prime_too_small():
    g = FunctionSpec.from_callable([[0, 1, 2]], [0, 1, 2], lambda x: x)
    with pytest.raises(ValueError):
        canonical_presentation(g, 2)


def test_induced_sum_labeling_patterns(joint8, g3):
    labels = induced_sum_labeling(joint8, reference.presentation_z4(), domains=g3.domains)
    assert labels == [0, 3, 2, 1, 1, 0, 3, 2]
    labels5 = induced_sum_labeling(joint8, reference.presentation_z5(), domains=g3.domains)
    assert sorted(set(labels5)) == [0, 1, 2, 3, 4]


def test_induced_sum_labeling_single_source():
    ident = FunctionSpec.from_callable([[0, 1]], [0, 1], lambda x: x)
    pres = canonical_presentation(ident, 2)
    chain = MarkovChain([[0.5, 0.5], [0.4, 0.6]], states=[(0,), (1,)])
    assert induced_sum_labeling(chain, pres, domains=ident.domains) == [0, 1]


def test_sum_process_iid_rows_always_lumps(g3):
    row = np.full(8, 1 / 8)
    joint = MarkovChain(np.tile(row, (8, 1)), states=reference.joint_chain().states)
    assert check_burke_form(joint).c1 == pytest.approx(1.0)
    sp = sum_process_chain(joint, reference.presentation_z4(), domains=g3.domains)
    assert sp.mode == "lumped" and sp.burke


def test_sum_process_reference_lump(joint8, value_chain, g3):
    sp = sum_process_chain(joint8, reference.presentation_z4(), domains=g3.domains)
    assert sp.mode == "lumped"
    perm = [sp.chain.states.index(s) for s in value_chain.states]
    assert np.abs(sp.chain.P[np.ix_(perm, perm)] - value_chain.P).max() < 2e-3


def test_sum_process_z5_entropy(joint8, g3):
    sp = sum_process_chain(joint8, reference.presentation_z5(), domains=g3.domains)
    h = conditional_entropy(sp.chain.P, invariant_distribution(sp.chain))
    assert abs(h - 0.4623) < 5e-3


def test_sum_process_bounded_mode(g3):
    # a joint chain that is not lumpable for the sum labeling
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
    pres = reference.presentation_z4()
    labels = induced_sum_labeling(joint, pres, domains=g3.domains)
    assert not is_lumpable(joint, labels)
    sp = sum_process_chain(joint, pres, depth=5, domains=g3.domains)
    assert sp.mode == "bounded"
    assert sp.bounds.lower <= sp.bounds.upper


def test_burke_implies_every_labeling_lumpable(joint8):
    """With the identical-rows + identity form, every labeling lumps."""
    assert check_burke_form(joint8, tol=1e-6) is not None
    rng = np.random.default_rng(0)
    for _ in range(25):
        labels = rng.integers(0, 3, joint8.n).tolist()
        assert is_lumpable(joint8, labels, tol=1e-6)


def test_lumped_entropy_never_exceeds_joint(joint8, g3):
    pi = invariant_distribution(joint8)
    h_joint = conditional_entropy(joint8.P, pi)
    for pres in (reference.presentation_z4(), reference.presentation_z5()):
        sp = sum_process_chain(joint8, pres, domains=g3.domains)
        h = conditional_entropy(sp.chain.P, invariant_distribution(sp.chain))
        assert h <= h_joint + 1e-9


def test_injectivity_reference_cases(g3):
    assert injectivity_obstruction_check(g3, reference.presentation_z4()) is True
    assert injectivity_obstruction_check(g3, reference.presentation_z5()) is False
