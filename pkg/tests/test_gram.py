"""Gram sequence: defining residuals, range queries, count scale."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetalab import (
    DomainError,
    gram_count_estimate,
    gram_point,
    gram_points,
    gram_range,
    theta,
)
from zetalab.gram import gram_csv_rows

TWO_PI = 2.0 * math.pi

# mpmath.grampoint anchors (30 digits)
GRAM_1 = 23.170282701246309
GRAM_2 = 27.670182217816071


class TestGramPoint:
    def test_first(self):
        assert gram_point(1).t == pytest.approx(GRAM_1, abs=1e-9)

    def test_second(self):
        assert gram_point(2).t == pytest.approx(GRAM_2, abs=1e-9)

    def test_oracle_spot_checks(self):
        for nu in [10, 1000, 50000]:
            ref = float(mp.grampoint(nu))
            assert gram_point(nu).t == pytest.approx(ref, rel=1e-12)

    def test_defining_residual_at_1e4(self):
        p = gram_point(10000)
        assert abs(theta(p.t) - math.pi * 10000) <= 1e-10

    def test_rejects_nu_zero(self):
        with pytest.raises(DomainError):
            gram_point(0)

    @given(st.integers(min_value=1, max_value=200000))
    @settings(max_examples=40, deadline=None)
    def test_residual_property(self, nu):
        # 1e-10 until the double-precision floor (a few ulp of pi*nu)
        # takes over near nu ~ 1.2e5
        gate = max(1e-10, 8.0 * 2.23e-16 * math.pi * nu)
        assert gram_point(nu).residual <= gate


class TestGramRange:
    def test_empty_below_first_point(self):
        rng = gram_range(7.0, 17.0)
        assert rng.count == 0 and rng.points == []

    def test_count_formula_1000_2000(self):
        rng = gram_range(1000.0, 2000.0)
        expected = math.floor(theta(2000.0) / math.pi) - math.ceil(theta(1000.0) / math.pi) + 1
        assert rng.count == expected
        # direct enumeration cross-check: all residuals small, all t in window
        assert all(1000.0 <= p.t < 2000.0 for p in rng.points)
        assert all(p.residual <= 1e-10 for p in rng.points)

    def test_index_contiguity(self):
        rng = gram_range(500.0, 800.0)
        nus = [p.nu for p in rng.points]
        assert nus == list(range(nus[0], nus[0] + len(nus)))

    def test_half_open_partition_exact(self):
        a, b, c = 300.0, 450.0, 600.0
        left = gram_range(a, b).points
        right = gram_range(b, c).points
        whole = gram_range(a, c).points
        assert [(p.nu, p.t) for p in left + right] == [(p.nu, p.t) for p in whole]

    def test_monotone_in_nu(self):
        pts = gram_points(1, 3000)
        ts = np.array([p.t for p in pts])
        assert np.all(np.diff(ts) > 0)

    def test_rejects_bad_window(self):
        with pytest.raises(DomainError):
            gram_range(3.0, 10.0)


class TestCountEstimate:
    def test_formula_at_1e4(self):
        # direct arithmetic of (1/2pi) T ln T
        assert gram_count_estimate(1e4) == pytest.approx(14658.7177, abs=0.1)

    def test_formula_at_2pi_e(self):
        T = TWO_PI * math.e
        assert gram_count_estimate(T) == pytest.approx(math.e * (1.0 + math.log(TWO_PI)), rel=1e-12)

    def test_mean_gap_matches_local_density(self):
        # mean Gram gap in [T, 2T] tracks 2pi/ln(T/2pi), the actual local
        # density scale (the crude ln T scale is ~25% off at T = 1e4)
        rng = gram_range(1e4, 2e4)
        ts = [p.t for p in rng.points]
        mean_gap = (ts[-1] - ts[0]) / (len(ts) - 1)
        assert mean_gap == pytest.approx(TWO_PI / math.log(1.5e4 / TWO_PI), rel=0.10)

    def test_enumerated_count_tracks_density_scale(self):
        # enumeration vs the count scale with the local-density log; the
        # crude ln T scale misses by ~30% at this height
        count = gram_range(100.0, 1e4).count
        local = 1e4 * math.log(1e4 / TWO_PI) / TWO_PI
        assert abs(count / local - 1.0) <= 0.15

    def test_rejects_small_T(self):
        with pytest.raises(DomainError):
            gram_count_estimate(2.0)


def test_csv_rows_format():
    rows = gram_csv_rows(gram_range(100.0, 120.0).points)
    assert all(len(r) == 3 for r in rows)
    nu, t, res = rows[0]
    assert int(nu) >= 1 and float(t) >= 100.0 and float(res) >= 0.0
