import numpy as np
import pytest

from hubloc.scenarios import (ALTERNATIVE_SPACINGS, DEFAULT_MULTIPLIERS, MultiplierFamily, build_seasonal_demands,
                              build_setup_scenarios)

SPRING = [9205, 10459, 48022, 14412, 10590, 4424, 6270, 17022, 13764, 7996, 6142, 4044, 18519, 4272]


def test_identity_multiplier():
    base = np.array([1.0, 2.0, 3.0])
    np.testing.assert_array_equal(build_setup_scenarios(base, [1.0]), base[None])


def test_rasht_endpoints_match_table():
    F = build_setup_scenarios([1300.80], [0.7, 1.3])
    assert F[0, 0] == pytest.approx(910.56, abs=5e-3)
    assert F[1, 0] == pytest.approx(1691.04, abs=5e-3)


def test_default_family_has_five_scenarios(casestudy):
    assert len(DEFAULT_MULTIPLIERS) == 5
    assert casestudy.setup_costs.shape == (5, 14)
    np.testing.assert_allclose(casestudy.setup_costs[2], casestudy.mean_setup())


def test_alternative_spacings_are_valid_families():
    for name, mult in ALTERNATIVE_SPACINGS.items():
        fam = MultiplierFamily(np.ones(3), mult)
        assert fam.scenarios().shape == (len(mult), 3)
        assert fam.multipliers[0] == 0.7 and fam.multipliers[-1] == 1.3


@pytest.mark.parametrize("mult", [[], [0.0], [-1.0, 1.0]])
def test_bad_multipliers(mult):
    with pytest.raises(ValueError):
        build_setup_scenarios([1.0], mult)
    with pytest.raises(ValueError):
        MultiplierFamily(np.ones(1), mult)


def test_unsorted_family_rejected():
    with pytest.raises(ValueError):
        MultiplierFamily(np.ones(1), (1.3, 0.7))


def test_spring_row_and_origin_self_demand(casestudy):
    W = casestudy.demands
    origin = casestudy.names.index("Tabriz")
    assert casestudy.origin == origin
    np.testing.assert_array_equal(W[0, origin], SPRING)
    assert W[0, origin, origin] == 48022
    others = np.delete(W[0], origin, axis=0)
    assert not others.any()


def test_single_season():
    W, p = build_seasonal_demands(np.array(SPRING, float), 2)
    assert W.shape == (1, 14, 14) and p.tolist() == [1.0]


def test_seasonal_validation():
    with pytest.raises(ValueError):
        build_seasonal_demands(np.ones((3, 2)), 5)
    with pytest.raises(ValueError):
        build_seasonal_demands(-np.ones((3, 2)), 0)
    with pytest.raises(ValueError):
        build_seasonal_demands(np.ones((3, 2)), 0, [0.5, 0.6])
