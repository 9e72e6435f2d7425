"""Benchmark bounds: Helstrom, SQL, gain."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pidr.bounds import gain_db, helstrom_bound, sql_limit
from pidr.errors import NegativeEnergy, NonPositiveProbability
from pidr.model import Priors

EQ = Priors.equal()


class TestHelstrom:
    def test_indistinguishable_at_zero_energy(self):
        assert helstrom_bound(0.0, EQ) == pytest.approx(0.5, abs=1e-15)

    def test_certain_prior(self):
        assert helstrom_bound(1.0, Priors(1.0, 0.0)) == 0.0
        assert helstrom_bound(3.7, Priors(0.0, 1.0)) == 0.0

    def test_oracle_value(self):
        # 1/2 (1 - sqrt(1 - e^-4)), high-precision oracle
        assert helstrom_bound(1.0, EQ) == pytest.approx(
            0.004600070369588713113086, rel=1e-13
        )

    def test_negative_energy(self):
        with pytest.raises(NegativeEnergy):
            helstrom_bound(-0.1, EQ)

    def test_strictly_decreasing(self):
        grid = np.geomspace(0.01, 20.0, 300)
        vals = [helstrom_bound(float(n), EQ) for n in grid]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    @given(st.floats(min_value=0.0, max_value=30.0))
    def test_range(self, nbar):
        assert 0.0 <= helstrom_bound(nbar, EQ) <= 0.5


class TestSql:
    def test_zero_energy(self):
        assert sql_limit(0.0) == pytest.approx(0.5, abs=1e-15)

    def test_oracle_value(self):
        # 1/2 erfc(sqrt(2)), high-precision oracle
        assert sql_limit(1.0) == pytest.approx(0.02275013194817920720028, rel=1e-13)

    def test_monotone(self):
        assert sql_limit(2.0) < sql_limit(1.0)

    def test_negative_energy(self):
        with pytest.raises(NegativeEnergy):
            sql_limit(-1e-6)

    def test_helstrom_below_sql_on_sweep(self):
        for nbar in np.geomspace(0.05, 10.0, 60):
            assert helstrom_bound(float(nbar), EQ) <= sql_limit(float(nbar))


class TestGain:
    def test_equal_is_zero(self):
        assert gain_db(0.01, 0.01) == 0.0

    def test_tenfold_is_ten_db(self):
        assert gain_db(0.001, 0.01) == pytest.approx(10.0, abs=1e-12)

    def test_twofold_worse(self):
        assert gain_db(0.02, 0.01) == pytest.approx(-3.0102999566398, abs=1e-10)

    def test_rejects_nonpositive(self):
        with pytest.raises(NonPositiveProbability):
            gain_db(0.0, 0.01)
        with pytest.raises(NonPositiveProbability):
            gain_db(0.01, -1.0)

    @given(
        st.floats(min_value=1e-12, max_value=0.5),
        st.floats(min_value=1e-12, max_value=0.5),
    )
    def test_sign_tracks_comparison(self, pe, p_sql):
        g = gain_db(pe, p_sql)
        if pe < p_sql:
            assert g > 0.0
        elif pe > p_sql:
            assert g < 0.0
        else:
            assert g == 0.0
