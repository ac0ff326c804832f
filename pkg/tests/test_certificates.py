import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from meannorm.certificates import (
    hardy_certificate,
    hardy_row_bound,
    hardy_row_sums_streaming,
    m_alpha_certificate,
    m_alpha_limit,
    m_alpha_row_bound,
    m_alpha_row_majorants,
    schur_test,
)
from meannorm.errors import DomainError
from meannorm.matrices import m_alpha_matrix
from meannorm.spectral import operator_norm_p, spectral_norm_sym


def test_hardy_certificate_n100():
    cert = hardy_certificate(100)
    assert cert.analytic_bound == pytest.approx(3.8, rel=1e-15)
    assert cert.bound == 4.0
    assert not cert.violated and cert.violations == []
    assert cert.U1 == cert.U2
    assert np.all(cert.row_values <= cert.analytic_bound)


def test_m_alpha_one_matches_hardy():
    assert m_alpha_certificate(1.0, 100).to_dict() == {
        **hardy_certificate(100).to_dict(), "family": "m_alpha"}


def test_m_alpha_075():
    cert = m_alpha_certificate(0.75, 256)
    assert cert.bound == 9.0
    assert cert.analytic_bound == pytest.approx(9.0 * (1 - 1 / 32), rel=1e-15)
    assert not cert.violated
    d = json.loads(cert.to_json())
    assert d["bound"] == 9.0 and d["violated"] is False and d["N"] == 256


@pytest.mark.parametrize("alpha", [0.55, 0.6, 0.75, 0.9, 1.0, 1.2, 1.5])
@pytest.mark.parametrize("n", [1, 7, 128])
def test_rows_below_per_row_majorants(alpha, n):
    cert = m_alpha_certificate(alpha, n)
    maj = m_alpha_row_majorants(alpha, n)
    assert np.all(cert.row_values <= maj + 1e-12 * max(1.0, m_alpha_limit(alpha)))
    assert np.all(maj <= m_alpha_limit(alpha))


def test_advertised_row_bound_exact_at_alpha_one():
    assert np.allclose(m_alpha_row_majorants(1.0, 64)[0], m_alpha_row_bound(1.0, 64), rtol=1e-15)


@pytest.mark.parametrize("alpha", [0.6, 0.75, 1.0, 1.25, 1.5])
def test_sandwich(alpha):
    n = 128
    cert = m_alpha_certificate(alpha, n)
    est = spectral_norm_sym(m_alpha_matrix(alpha, n)).value
    schur = math.sqrt(cert.U1 * cert.U2)
    assert est <= schur + 1e-9
    assert schur <= cert.bound + 1e-9


def test_certificate_domain():
    with pytest.raises(DomainError):
        m_alpha_certificate(0.5, 10)
    with pytest.raises(DomainError):
        m_alpha_certificate(1.6, 10)
    with pytest.raises(DomainError):
        hardy_certificate(0)


def test_schur_test_validation():
    with pytest.raises(DomainError):
        schur_test(np.ones((2, 2)), [1, 1], [1, 0])
    with pytest.raises(DomainError):
        schur_test(-np.ones((2, 2)), [1, 1], [1, 1])
    with pytest.raises(DomainError):
        schur_test(np.ones((2, 3)), [1, 1], [1, 1])
    with pytest.raises(DomainError):
        schur_test(np.ones((2, 2)), [1, 1], [1, 1], p=1.0)


@given(
    a=hnp.arrays(np.float64, (5, 4), elements=st.floats(0.0, 10.0)),
    c=hnp.arrays(np.float64, 4, elements=st.floats(0.1, 10.0)),
    d=hnp.arrays(np.float64, 5, elements=st.floats(0.1, 10.0)),
    p=st.floats(1.1, 6.0),
)
def test_schur_bound_dominates_norm(a, c, d, p):
    cert = schur_test(a, c, d, p)
    q = p / (p - 1)
    assert cert.bound == pytest.approx(cert.U1 ** (1 / q) * cert.U2 ** (1 / p), rel=1e-15)
    assert operator_norm_p(a, p).value <= cert.bound * (1 + 1e-9) + 1e-12


def test_streaming_matches_dense():
    n = 300
    # chunked accumulation may differ from the dense product by an ulp
    np.testing.assert_allclose(hardy_row_sums_streaming(n, chunk=64), hardy_certificate(n).row_values, rtol=1e-14)


def test_streaming_large_n():
    n = 10_000
    rows = hardy_row_sums_streaming(n)
    assert np.all(rows <= hardy_row_bound(n) + 1e-12 * 4)
