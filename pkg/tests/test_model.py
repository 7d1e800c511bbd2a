import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from csbattery.errors import NonFiniteEnergy, NonPositiveB, NonPositiveCount, OutOfRangeM
from csbattery.model import (
    ModelParams,
    build_hamiltonian,
    ladder_energies,
    subspace_dimension,
    validate_params,
)

from .conftest import model_params

BASE = dict(B=1, h=1, A=1, delta=0, n_b=1, n_c=2, m=1)


def test_validate_accepts_plain_record():
    p = validate_params({"B": 1, "h": 1, "A": 1, "Delta": 0, "N_b": 1, "N_c": 2, "m": 1})
    assert p == ModelParams(**BASE)
    assert isinstance(p.B, float) and isinstance(p.n_b, int)


@pytest.mark.parametrize(
    "override, error, field",
    [
        ({"B": -1}, NonPositiveB, "B"),
        ({"B": 0}, NonPositiveB, "B"),
        ({"m": 21, "n_c": 20}, OutOfRangeM, "m"),
        ({"m": -1}, OutOfRangeM, "m"),
        ({"n_b": 0}, NonPositiveCount, "n_b"),
        ({"n_c": 0, "m": 0}, NonPositiveCount, "n_c"),
        ({"n_b": 1.5}, NonPositiveCount, "n_b"),
        ({"A": math.inf}, NonFiniteEnergy, "A"),
        ({"h": math.nan}, NonFiniteEnergy, "h"),
    ],
)
def test_validate_rejects(override, error, field):
    with pytest.raises(error) as exc:
        validate_params(BASE | override)
    assert exc.value.field == field


def test_validate_rejects_unknown_and_missing_keys():
    with pytest.raises(TypeError):
        validate_params(BASE | {"gamma": 1})
    with pytest.raises(TypeError):
        validate_params({k: v for k, v in BASE.items() if k != "A"})


def test_params_are_immutable():
    p = ModelParams(**BASE)
    with pytest.raises(AttributeError):
        p.B = 2.0


@pytest.mark.parametrize("nb, m, d", [(2, 100, 3), (6, 3, 4), (1, 0, 1)])
def test_subspace_dimension(nb, m, d):
    p = ModelParams(**BASE | {"n_b": nb, "n_c": max(m, 1), "m": m})
    assert subspace_dimension(p) == d


@pytest.mark.parametrize(
    "override, diag, offdiag",
    [
        ({}, [-0.5, -0.5], [math.sqrt(2)]),
        ({"h": 4, "n_c": 20, "m": 20}, [39.5, 36.5], [math.sqrt(20)]),
        ({"delta": 0.5}, [-0.5, -1.0], [math.sqrt(2)]),
    ],
)
def test_build_hamiltonian_hand_values(override, diag, offdiag):
    H = build_hamiltonian(ModelParams(**BASE | override))
    np.testing.assert_allclose(H.diag, diag, rtol=0, atol=1e-14)
    np.testing.assert_allclose(H.offdiag, offdiag, rtol=1e-15)


@given(model_params(coupled=False))
def test_zero_coupling_has_no_offdiagonal(p):
    from dataclasses import replace

    H = build_hamiltonian(replace(p, A=0.0))
    assert np.all(H.offdiag == 0)


def test_couplings_positive_exhaustive():
    for nb in range(1, 13):
        for nc in range(1, 13):
            for m in range(nc + 1):
                p = ModelParams(B=1, h=1, A=1, delta=0, n_b=nb, n_c=nc, m=m)
                H = build_hamiltonian(p)
                assert H.dim == min(nb, m) + 1
                assert H.dim <= nb + 1 and H.dim <= m + 1
                assert np.all(H.offdiag > 0)


def test_mirror_symmetric_couplings():
    for nb in range(1, 11):
        for nc in range(nb, 30):
            if (nb + nc) % 2:
                continue
            m = (nb + nc) // 2
            u = build_hamiltonian(ModelParams(B=1, h=1, A=1, delta=0, n_b=nb, n_c=nc, m=m)).offdiag
            np.testing.assert_allclose(u, u[::-1], rtol=1e-14)


@given(model_params())
def test_matrix_is_real_symmetric(p):
    D = build_hamiltonian(p).dense()
    assert D.dtype == float
    np.testing.assert_array_equal(D, D.T)


@given(st.integers(1, 8), st.floats(0.1, 3))
def test_ladder_energies(nb, B):
    p = ModelParams(B=B, h=1, A=1, delta=0, n_b=nb, n_c=nb, m=nb)
    eps = ladder_energies(p)
    assert eps[0] == pytest.approx(-B * nb / 2)
    assert eps[-1] == pytest.approx(B * nb / 2)
