import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finitekey.keyrate import KeyRateParams, default_delta_bar, key_length, leak_model


def test_zero_ambiguity_gives_no_key():
    assert key_length(KeyRateParams(10**6), 0.0) == 0


def test_all_penalties_off():
    params = KeyRateParams(10**6, eps_pa=1.0)
    assert key_length(params, 0.71360304) == math.floor(10**6 * 0.71360304)


def test_worked_example():
    params = KeyRateParams(10**6, eps_pa=1e-10, delta_bar=0.01, leak_ec=2e5)
    assert key_length(params, 0.6) == 389933


def test_leak_model_examples():
    assert leak_model(10**6, 0.0) == 0.0
    assert leak_model(10**6, 0.05) == pytest.approx(286397, abs=1)
    assert leak_model(10**6, 0.05, 1.2) == pytest.approx(343676, abs=1)


@pytest.mark.parametrize("kwargs", [dict(n_raw=0), dict(n_raw=10, eps_pe=0.0), dict(n_raw=10, eps_pa=0.0),
                                    dict(n_raw=10, delta_bar=-0.1), dict(n_raw=10, leak_ec=-1.0)])
def test_params_validated(kwargs):
    with pytest.raises(ValueError):
        KeyRateParams(**kwargs)


def test_bad_inputs():
    with pytest.raises(ValueError):
        key_length(KeyRateParams(10), 1.2)
    with pytest.raises(ValueError):
        leak_model(10, 0.6)
    with pytest.raises(ValueError):
        leak_model(10, 0.1, 0.9)


def test_default_delta_bar():
    assert default_delta_bar(10**6, 1e-10) == pytest.approx(7 * math.sqrt(math.log2(2e10) / 1e6))


amb = st.floats(0.0, 1.0)
n = st.integers(1, 10**9)


@given(n, amb, amb)
def test_monotone_in_ambiguity(n_raw, a, b):
    lo, hi = sorted((a, b))
    p = KeyRateParams(n_raw, delta_bar=0.01, leak_ec=10.0)
    assert 0 <= key_length(p, lo) <= key_length(p, hi)


@given(n, n, amb)
def test_monotone_in_n(n1, n2, a):
    lo, hi = sorted((n1, n2))
    assert key_length(KeyRateParams(lo), a) <= key_length(KeyRateParams(hi), a)


@given(n, amb, st.floats(0, 0.5), st.floats(0, 0.5), st.floats(0, 1e6), st.floats(0, 1e6),
       st.floats(1e-30, 1.0), st.floats(1e-30, 1.0))
def test_monotone_in_penalties(n_raw, a, d1, d2, l1, l2, e1, e2):
    base = dict(n_raw=n_raw)
    dl, dh = sorted((d1, d2))
    assert key_length(KeyRateParams(**base, delta_bar=dh), a) <= key_length(KeyRateParams(**base, delta_bar=dl), a)
    ll, lh = sorted((l1, l2))
    assert key_length(KeyRateParams(**base, leak_ec=lh), a) <= key_length(KeyRateParams(**base, leak_ec=ll), a)
    el, eh = sorted((e1, e2))
    assert key_length(KeyRateParams(**base, eps_pa=el), a) <= key_length(KeyRateParams(**base, eps_pa=eh), a)


@given(n, amb)
def test_rate_matches_ambiguity_without_penalties(n_raw, a):
    rate = key_length(KeyRateParams(n_raw, eps_pa=1.0), a) / n_raw
    assert a - 1 / n_raw <= rate <= a + 1e-12
