import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from csbattery import thermo
from csbattery.dynamics import BatteryPopulations, trace
from csbattery.model import ModelParams

from .conftest import model_params


def params_for(nb, B=1.0):
    return ModelParams(B=B, h=1, A=1, delta=0, n_b=nb, n_c=nb, m=nb)


def pop(p, nb=None, B=1.0):
    nb = max(len(p) - 1, 1) if nb is None else nb
    return BatteryPopulations(0.0, p, params_for(nb, B))


@st.composite
def distributions(draw, max_d=6):
    d = draw(st.integers(1, max_d))
    w = np.array(draw(st.lists(st.floats(0, 1), min_size=d, max_size=d)))
    if w.sum() == 0:
        w[0] = 1.0
    return w / w.sum()


def brute_passive(p, eps):
    return min(float(np.dot(p[list(s)], eps)) for s in itertools.permutations(range(len(p))))


@pytest.mark.parametrize(
    "p, S",
    [([1, 0], 0.0), ([0.5, 0.5], 1.0), ([0.25, 0.5, 0.25], 1.5)],
)
def test_entropy_values(p, S):
    assert thermo.entropy(pop(p)) == pytest.approx(S, abs=1e-15)


def test_energy_values():
    assert thermo.battery_energy(pop([1, 0, 0, 0])) == -1.5
    assert thermo.battery_energy(pop([0, 0, 0, 1])) == 1.5
    assert thermo.battery_energy(pop([1 / 49, 0, 48 / 49])) == pytest.approx(47 / 49, abs=1e-15)


def test_passive_values():
    assert thermo.passive_energy(pop([0.2, 0.5, 0.3])) == pytest.approx(-0.3, abs=1e-15)
    assert thermo.passive_energy(pop([1 / 49, 0, 48 / 49])) == pytest.approx(-48 / 49, abs=1e-15)
    p = pop([0.6, 0.3, 0.1])
    assert thermo.passive_energy(p) == thermo.battery_energy(p)


def test_ergotropy_values():
    assert thermo.ergotropy(pop([1, 0, 0])) == 0
    r = -71 / 89
    assert thermo.ergotropy(pop([(1 + r) / 2, (1 - r) / 2])) == pytest.approx(71 / 89, abs=1e-15)
    assert thermo.ergotropy(pop([1 / 49, 0, 48 / 49])) == pytest.approx(95 / 49, abs=1e-15)


def test_injected_energy_values():
    assert thermo.injected_energy(pop([1, 0])) == 0
    assert thermo.injected_energy(pop([0, 1], B=2.5)) == pytest.approx(2.5)
    assert thermo.injected_energy(pop([1 / 49, 0, 48 / 49])) == pytest.approx(96 / 49, abs=1e-15)


@given(distributions(), st.floats(0.1, 5))
def test_ergotropy_nonnegative(p, B):
    assert thermo.ergotropy(pop(p, B=B)) >= 0


@given(distributions(), st.floats(0.1, 5))
def test_passive_matches_permutation_minimum(p, B):
    x = pop(p, B=B)
    eps = B * (np.arange(len(p)) - x.params.n_b / 2)
    assert thermo.passive_energy(x) == pytest.approx(brute_passive(np.asarray(p), eps), abs=1e-14)


@given(distributions(), st.integers(0, 3))
def test_entropy_bounds(p, extra):
    S = thermo.entropy(pop(p, nb=max(len(p) - 1, 1) + extra))
    assert 0 <= S <= math.log2(len(p)) + 1e-12


@given(distributions(max_d=5), distributions(max_d=5), st.floats(0, 1))
def test_entropy_concave(p, q, lam):
    d = max(len(p), len(q))
    p = np.pad(p, (0, d - len(p)))
    q = np.pad(q, (0, d - len(q)))
    mix = lam * p + (1 - lam) * q
    S = lambda v: thermo.entropy(pop(v))  # noqa: E731
    assert S(mix) >= lam * S(p) + (1 - lam) * S(q) - 1e-12


@given(st.floats(-1, 1), st.floats(0.1, 5))
def test_single_cell_restatement(r, B):
    x = pop([(1 + r) / 2, (1 - r) / 2], B=B)
    assert thermo.ergotropy(x) == pytest.approx(max(0.0, -B * r), abs=1e-14)
    # near |r| = 1 the two routes round 1e-16 populations differently
    assert thermo.entropy(x) == pytest.approx(thermo.binary_entropy((1 + r) / 2), abs=1e-13)


@given(st.floats(-1, 0), st.floats(-1, 0), st.floats(0.1, 5))
def test_single_cell_antiordering(ra, rb, B):
    a = pop([(1 + ra) / 2, (1 - ra) / 2], B=B)
    b = pop([(1 + rb) / 2, (1 - rb) / 2], B=B)
    ea, eb = thermo.ergotropy(a), thermo.ergotropy(b)
    sa, sb = thermo.entropy(a), thermo.entropy(b)
    if ea > 0 and eb > 0 and abs(ea - eb) > 1e-9 and abs(sa - sb) > 1e-9:
        assert (ea > eb) == (sa < sb)


@given(model_params(max_nb=8, max_nc=30))
def test_ergotropy_bounded_by_injected_energy(p):
    tr = trace(p, np.linspace(0, 10, 129))
    assert np.all(tr.erg <= tr.dE + 1e-12)
    assert np.all(tr.erg >= 0)


def test_report_fields():
    r = thermo.report(pop([1 / 49, 0, 48 / 49]))
    assert r.E0 == -1
    assert r.dE == pytest.approx(96 / 49)
    assert r.erg == pytest.approx(r.E - r.Ep)
