"""Chain kernel, reduced covariance, and the rate sweep."""

import numpy as np
import pytest

from fgdistill import dense
from fgdistill.chain import ChainSpec, chain_covariance, hopping_kernel, rate_sweep
from fgdistill.covariance import (
    covariance_from_two_point,
    mode_doubled_indices,
    validate_covariance,
)
from fgdistill.distill import run_protocol


class TestKernel:
    def test_diagonal_occupation(self):
        assert hopping_kernel(0) == pytest.approx(0.5, abs=1e-14)

    def test_nearest_neighbor(self):
        assert hopping_kernel(1) == pytest.approx(1 / np.pi, abs=1e-14)
        assert hopping_kernel(-1) == pytest.approx(1 / np.pi, abs=1e-14)

    def test_even_separations_vanish(self):
        values = hopping_kernel([2, 4, 6, -2, -8])
        np.testing.assert_allclose(values, 0.0, atol=1e-12)

    def test_quadrature_matches_closed_form(self):
        r = np.arange(0, 129)
        closed = hopping_kernel(r)
        quad = hopping_kernel(r, resolution=2**14)
        assert np.max(np.abs(closed - quad)) < 1e-10

    def test_quadrature_pins_the_stated_values(self):
        assert hopping_kernel(0, resolution=2**14) == pytest.approx(0.5, abs=1e-10)
        assert hopping_kernel(1, resolution=2**14) == pytest.approx(1 / np.pi, abs=1e-10)
        assert abs(hopping_kernel(2, resolution=2**14)) < 1e-10


class TestChainCovariance:
    def test_validates_up_to_64(self):
        for d in range(1, 65):
            cov = chain_covariance(ChainSpec(d))
            report = validate_covariance(cov.m, d, d)
            assert report.ok, f"d={d}: {report}"

    def test_translation_invariance(self):
        base = chain_covariance(ChainSpec(4, offset=0))
        base_report = run_protocol(base, 2)
        for offset in (1, 2, 3):
            shifted = chain_covariance(ChainSpec(4, offset=offset))
            np.testing.assert_allclose(shifted.m, base.m, atol=1e-15)
            report = run_protocol(shifted, 2)
            assert report == base_report

    def test_nested_blocks_are_consistent(self):
        # entries supported on the first 2d sites agree between the d and
        # d+1 constructions (the bipartition label moves, the state does not)
        for d in (2, 3):
            small = chain_covariance(ChainSpec(d))
            large = chain_covariance(ChainSpec(d + 1))
            idx_s = mode_doubled_indices(d, d)
            idx_l = mode_doubled_indices(d + 1, d + 1)
            sites = list(range(2 * d))

            def site_mode(site, block):
                # mode index of a site in the (block, block) bipartite layout
                return site if site < block else block + (site - block)

            for s in sites:
                for t in sites:
                    ms, mt = site_mode(s, d), site_mode(t, d)
                    ml, nl = site_mode(s, d + 1), site_mode(t, d + 1)
                    assert small.m[idx_s[ms, 0], idx_s[mt, 1]] == pytest.approx(
                        large.m[idx_l[ml, 0], idx_l[nl, 1]], abs=1e-12
                    )

    def test_quadrature_route_matches_closed_form(self):
        closed = chain_covariance(ChainSpec(3))
        quad = chain_covariance(ChainSpec(3, resolution=2**14))
        assert np.max(np.abs(closed.m - quad.m)) < 1e-10


class TestRateSweep:
    def test_row_count_and_bounds(self):
        reports = rate_sweep(2, 8)
        assert len(reports) == 7
        for r in reports:
            assert 0.0 < r.p <= 1.0
            assert 0.0 <= r.f <= 1.0
            assert r.rate is not None and r.rate_per_site is not None

    def test_even_odd_alternation_in_success_probability(self):
        # the equal-parity probability alternates between even and odd
        # block lengths; this is the origin of the zigzag
        reports = rate_sweep(2, 11)
        p = [r.p for r in reports]
        diffs = np.diff(p)
        signs = np.sign(diffs)
        assert all(s1 * s2 < 0 for s1, s2 in zip(signs, signs[1:]))

    def test_d_range_validation(self):
        with pytest.raises(ValueError, match="below n_keep"):
            rate_sweep(1, 4, n_keep=2)
        with pytest.raises(ValueError, match="exceed"):
            rate_sweep(5, 4)

    def test_rows_match_single_runs(self):
        reports = rate_sweep(3, 5)
        for r, d in zip(reports, (3, 4, 5)):
            single = run_protocol(chain_covariance(ChainSpec(d)), 2)
            assert r.f == single.f and r.p == single.p
            assert r.rate_per_site == pytest.approx(r.rate / d, abs=1e-15)


class TestFiniteChainOracle:
    def test_sweep_rows_agree_with_exact_diagonalization(self):
        # ring of length 32 d (well above the required 4 d) reproduces the
        # infinite-chain f and p to 2e-3
        for d in range(2, 7):
            ref = run_protocol(chain_covariance(ChainSpec(d)), 2)
            n_sites = 32 * d
            g = dense.finite_chain_two_point(n_sites)
            block = list(range(2 * d))
            cov = covariance_from_two_point(g[np.ix_(block, block)], d, d)
            got = run_protocol(cov, 2)
            assert got.f == pytest.approx(ref.f, abs=2e-3)
            assert got.p == pytest.approx(ref.p, abs=2e-3)
