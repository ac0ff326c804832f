import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from meannorm.errors import DomainError
from meannorm.matrices import SpacedSequence, WeightSequence
from meannorm.rng import TrialRng
from meannorm.verify import (
    SUITES,
    CheckReport,
    Y_FORM_MAX_ALPHA,
    check_alzer,
    check_bennett_increasing,
    check_final_L_s,
    check_gamma_ge_maxinv,
    check_gamma_le_m,
    check_hadamard_midpoint,
    check_majorization,
    check_scalar_14,
    check_similarity_suite,
    check_x_psd,
    format_table,
    majorization_margins,
    random_unit_vectors,
    reports_to_json,
    resolve_suites,
    run_suites,
    scalar_14_t_form,
    verify_hardy_type,
    verify_mv_bound,
)

# reference SplitMix64 outputs
SPLITMIX_1234567 = [6457827717110365317, 3203168211198807973, 9817491932198370423,
                    4593380528125082431, 16408922859458223821]


def test_splitmix_reference():
    rng = TrialRng(1234567)
    assert [rng.next_u64() for _ in range(5)] == SPLITMIX_1234567
    assert TrialRng(0).next_u64() == 0xE220A8397B1DCDAF


@given(seed=st.integers(0, 2 ** 64 - 1), n=st.integers(0, 50))
def test_vectorised_uniforms_match_scalar(seed, n):
    a, b = TrialRng(seed), TrialRng(seed)
    vec = a.uniforms(n)
    assert vec.tolist() == [b.uniform() for _ in range(n)]
    assert a.state == b.state
    assert np.all((vec >= 0) & (vec < 1))


def test_derived_streams_stable():
    assert TrialRng.derive(42, "x").seed == TrialRng.derive(42, "x").seed
    assert TrialRng.derive(42, "x").seed != TrialRng.derive(42, "y").seed


@given(p=st.floats(1.1, 5.0), seed=st.integers(0, 2 ** 32))
def test_random_unit_vectors(p, seed):
    a = random_unit_vectors(TrialRng(seed), 4, 7, p)
    assert np.all(a >= 0)
    assert np.allclose(np.sum(a ** p, axis=1), 1.0, rtol=1e-12)


@pytest.mark.parametrize("family,alpha", [("bennett7", 1.0), ("bennett7", 1.5), ("bennett7", 0.6),
                                          ("bennett8", 0.6), ("bennett8", 1.0)])
def test_hardy_type_p2(family, alpha):
    r = verify_hardy_type(family, alpha, 2.0, 256, 100, TrialRng(5))
    assert r.passed and r.asserted
    assert r.instances_tested == 102


def test_hardy_type_open_case_not_asserted():
    r = verify_hardy_type("bennett8", 1.5, 3.0, 64, 20, TrialRng(1))
    assert not r.asserted and r.ok
    # alpha = 1 + 1/p is a proven case
    assert verify_hardy_type("bennett8", 1.5, 2.0, 64, 20, TrialRng(1)).asserted


def test_hardy_type_domain():
    with pytest.raises(DomainError):
        verify_hardy_type("bennett7", 0.4, 2.0, 8, 1, TrialRng(0))
    with pytest.raises(DomainError):
        verify_hardy_type("cesaro", 1.0, 2.0, 8, 1, TrialRng(0))


def test_gamma_le_m():
    r = check_gamma_le_m(1.0, 64)
    assert r.passed and r.worst_margin == 0.0
    r = check_gamma_le_m(1.2, 64)
    assert r.passed and r.worst_margin > 0.0
    assert check_gamma_le_m(0.6, 64).passed
    with pytest.raises(DomainError):
        check_gamma_le_m(1.6, 8)


def test_gamma_ge_maxinv():
    assert check_gamma_ge_maxinv(WeightSequence.ones(20)).worst_margin == 0.0
    assert check_gamma_ge_maxinv(WeightSequence.from_weights(1.0 / np.arange(1, 33))).passed
    assert check_gamma_ge_maxinv(WeightSequence.from_weights(2.0 ** -np.arange(1, 17))).passed
    with pytest.raises(DomainError):
        check_gamma_ge_maxinv(WeightSequence.from_weights([1.0, 2.0]))


def test_majorization():
    assert check_majorization(1.0, 50).worst_margin == pytest.approx(0.0, abs=1e-15)
    lhs = (1 + 2 ** -0.2) / (1 + 2 ** -0.2 + 3 ** -0.2)
    assert majorization_margins(0.8, 3)[2, 1] == pytest.approx((2 / 3) ** 0.8 - lhs, rel=1e-13)
    assert (2 / 3) ** 0.8 >= lhs
    assert check_majorization(0.51, 100).passed


def test_scalar_14_examples():
    assert scalar_14_t_form(1.0, np.array([2.0, 17.0])) == pytest.approx([3.0, 3.0], rel=1e-15)
    assert scalar_14_t_form(2.0, np.array([2.0]))[0] == pytest.approx((2 + math.sqrt(2) * 3) / 9, rel=1e-15)
    for alpha in (1.0, 1.5, 2.0, 4.0, 8.0):
        assert check_scalar_14(alpha, form="t").passed
    for alpha in (1.5, 2.0, 4.0, 5.0):
        r = check_scalar_14(alpha, form="y")
        assert r.passed and r.asserted


def test_scalar_14_y_form_fails_beyond_five():
    # the reduced form is false for alpha > 5; it is recorded, not asserted
    r = check_scalar_14(8.0, form="y")
    assert not r.passed and not r.asserted and r.ok
    assert r.worst_margin < -0.02
    assert Y_FORM_MAX_ALPHA == 5.0


def test_hadamard_examples():
    r = check_hadamard_midpoint(np.square, 0.0, 2.0)
    assert r.passed and r.worst_margin == pytest.approx(0.25, rel=1e-12)
    assert check_hadamard_midpoint(lambda x: -np.log(x), 1.0, 3.0).passed
    r = check_hadamard_midpoint(np.exp, 0.0, 1.0)
    assert r.passed
    # concave function violates the lower inequality
    assert not check_hadamard_midpoint(np.sqrt, 1.0, 4.0).passed


def test_mv_bound():
    r = verify_mv_bound(SpacedSequence.integers(2), 1.0)
    assert r.passed and r.worst_margin == pytest.approx((math.pi - 1) / math.pi, rel=1e-12)
    powers = SpacedSequence.from_values([2.0 ** k for k in range(16)], 1.0)
    assert verify_mv_bound(powers, 2.0).passed


def test_x_psd():
    r = check_x_psd(SpacedSequence.from_values([1, 2, 3, 4, 5]), 2.0)
    assert r.passed and r.worst_margin == 0.0  # diagonal is exactly 1/alpha
    assert check_x_psd(SpacedSequence.from_values([1, 2, 3, 4, 5]), 1.0).passed


@pytest.mark.parametrize("alpha,n", [(1.0, 8), (0.75, 16), (1.5, 4)])
def test_similarity(alpha, n):
    r = check_similarity_suite(alpha, n)
    assert r.passed and r.slack == 0.0


def test_final_L_s():
    a = check_final_L_s(1.25, 1.25, 128, 200, TrialRng(3))
    b = check_final_L_s(1.25, 1.5, 128, 200, TrialRng(3))
    assert a.passed and b.passed
    assert b.worst_margin < a.worst_margin
    assert check_final_L_s(1.0, 1.0, 64, 50, TrialRng(3)).passed
    with pytest.raises(DomainError):
        check_final_L_s(1.25, 1.6, 16, 1, TrialRng(0))


def test_bennett_increasing():
    assert check_bennett_increasing(WeightSequence.ones(64), 2.0, 64, 20, TrialRng(1)).passed
    w = WeightSequence.from_weights(np.arange(1, 65) ** 2.0)
    assert check_bennett_increasing(w, 3.0, 64, 20, TrialRng(1)).passed
    with pytest.raises(DomainError):
        check_bennett_increasing(WeightSequence.from_weights([2.0, 1.0]), 2.0, 2, 1, TrialRng(1))


def test_alzer():
    assert check_alzer(50, (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)).passed


def test_report_invariant_and_json():
    r = CheckReport("x", False, -0.5, "w", 3, 1e-9)
    d = json.loads(reports_to_json([r]))[0]
    assert d == {"suite": "x", "passed": False, "worst_margin": -0.5, "witness": "w",
                 "instances_tested": 3, "slack": 1e-9, "asserted": True}
    for rep in run_suites(["check_gamma_le_m", "check_scalar_14"], 1):
        assert rep.passed == (rep.worst_margin >= -rep.slack)
    assert "FAIL" in format_table([r])


def test_registry_resolution():
    assert resolve_suites(["all"]) == list(SUITES)
    picked = resolve_suites(["check_hilbert", "check_alzer"])
    assert sorted(picked) == ["check_alzer", "check_hilbert"]
    assert picked == [k for k in SUITES if k in picked]
    with pytest.raises(DomainError):
        resolve_suites(["nope"])


def test_full_run_deterministic_and_passes():
    a = reports_to_json(run_suites(["all"], seed=42))
    b = reports_to_json(run_suites(["all"], seed=42, jobs=3))
    assert a == b
    assert all(r.ok for r in run_suites(["all"], seed=42))


@given(c=st.floats(0.01, 100.0))
def test_margins_invariant_under_weight_scaling(c):
    w = WeightSequence.from_weights(1.0 / np.arange(1, 25))
    base = check_gamma_ge_maxinv(w)
    scaled = check_gamma_ge_maxinv(w.scaled(c))
    assert scaled.worst_margin == pytest.approx(base.worst_margin, abs=1e-12)
