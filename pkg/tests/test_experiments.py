import csv
import io
import json
import math

import numpy as np
import pytest

from monoplex.errors import InputError
from monoplex.experiments import (
    EmpiricalDistribution,
    ExperimentConfig,
    GapRow,
    compare,
    complement_multiplex,
    erdos_renyi,
    gamma_draws,
    ks_statistics,
    path_blowup_multiplexes,
    run_experiment,
    sample_correlated_er,
)
from monoplex.graphs import Multiplex, complete


class TestGenerators:
    def test_erdos_renyi_deterministic(self):
        assert erdos_renyi(30, 0.4, seed=5) == erdos_renyi(30, 0.4, seed=5)
        assert erdos_renyi(30, 0.4, seed=5) != erdos_renyi(30, 0.4, seed=6)

    def test_erdos_renyi_density(self):
        g = erdos_renyi(300, 0.3, seed=1)
        pairs = 300 * 299 / 2
        assert abs(g.edge_count / pairs - 0.3) < 4 * math.sqrt(0.3 * 0.7 / pairs)

    def test_edge_cases(self):
        assert erdos_renyi(10, 0.0).edge_count == 0
        assert erdos_renyi(10, 1.0).edge_count == 45
        with pytest.raises(InputError):
            erdos_renyi(10, 1.5)

    def test_correlated_first_layer_is_plain_er(self):
        m = sample_correlated_er(50, 0.4, 0.3, 0.05, seed=9)
        assert m[0] == erdos_renyi(50, 0.4, seed=9)

    def test_correlated_overlap(self):
        p, q, rho = 0.5, 0.4, 0.08
        m = sample_correlated_er(400, p, q, rho, seed=2)
        pairs = 400 * 399 / 2
        p12 = rho + p * q
        assert abs(len(m[0].edges & m[1].edges) / pairs - p12) < 4 * math.sqrt(p12 * (1 - p12) / pairs)
        assert abs(m[1].edge_count / pairs - q) < 4 * math.sqrt(q * (1 - q) / pairs)

    def test_independent_when_rho_zero_extremes(self):
        # p12 = max(p+q-1, 0) is the most negative feasible coupling
        m = sample_correlated_er(60, 0.5, 0.5, -0.25, seed=0)
        assert not (m[0].edges & m[1].edges)
        with pytest.raises(InputError):
            sample_correlated_er(60, 0.5, 0.5, -0.3)

    def test_complement(self):
        m = complement_multiplex(25, 0.3, seed=4)
        assert m[0].edge_count + m[1].edge_count == 300
        assert not (m[0].edges & m[1].edges)

    def test_path_blowup(self):
        a, b = path_blowup_multiplexes(5)
        assert a.n == 20 and a[0].edge_count == 75
        assert a[1].edge_count == b[1].edge_count == 25
        assert a[1].edges <= a[0].edges and b[1].edges <= a[0].edges
        assert not (a[1].edges & b[1].edges)


class TestEmpiricalDistribution:
    def test_moments(self):
        x = np.array([[1.0, 0.0], [3.0, 2.0], [2.0, 1.0], [2.0, 5.0]])
        e = EmpiricalDistribution(x)
        np.testing.assert_allclose(e.mean, [2.0, 2.0])
        np.testing.assert_allclose(e.central_moment(2), [0.5, 3.5])
        assert e.difference_moment(0, 1) == pytest.approx((1 + 1 + 1 + 81) / 4)
        s = e.summary()
        assert s["count"] == 4 and "0,1" in s["difference_fourth"]

    def test_one_dimensional_input(self):
        assert EmpiricalDistribution(np.arange(5.0)).d == 1
        with pytest.raises(InputError):
            EmpiricalDistribution(np.zeros((1, 2)))


class TestCompare:
    def test_identical_samples_have_zero_gap(self, rng):
        x = rng.standard_normal((1000, 2))
        rows = compare(EmpiricalDistribution(x), x)
        assert all(r.gap == 0 for r in rows)
        names = [r.name for r in rows]
        assert names[:2] == ["mean[0]", "mean[1]"] and "diff4[0,1]" in names and "cov[0,1]" in names

    def test_shift_is_detected(self, rng):
        x = rng.standard_normal((20000, 1))
        rows = compare(EmpiricalDistribution(x + 0.1), rng.standard_normal((20000, 1)))
        assert not rows[0].within(4.0)
        assert rows[0].stderr == pytest.approx(math.sqrt(2 / 20000), rel=0.05)

    def test_dimension_mismatch(self, rng):
        with pytest.raises(InputError):
            compare(EmpiricalDistribution(rng.standard_normal((10, 2))), rng.standard_normal((10, 3)))

    def test_ks(self, rng):
        x = rng.standard_normal((500, 1))
        assert ks_statistics(EmpiricalDistribution(x), x) == [0.0]

    def test_gap_row(self):
        assert GapRow("m", 1.0, 0.0, 1.0, 0.3).within(4)
        assert not GapRow("m", 1.0, 0.0, 1.0, 0.2).within(4)


class TestGammaDraws:
    def test_shared_coloring_on_identical_layers(self):
        g = erdos_renyi(30, 0.5, seed=1)
        x = gamma_draws([complete(3), complete(3)], Multiplex((g, g)), 2, 500, seed=3)
        np.testing.assert_array_equal(x[:, 0], x[:, 1])

    def test_deterministic_across_workers(self):
        g = erdos_renyi(30, 0.5, seed=1)
        a = gamma_draws([complete(2)], Multiplex((g,)), 3, 2500, seed=4, chunk=500, workers=1)
        b = gamma_draws([complete(2)], Multiplex((g,)), 3, 2500, seed=4, chunk=500, workers=3)
        np.testing.assert_array_equal(a, b)

    def test_edge_statistic_variance(self):
        # Var Gamma for K2 is 4 c |E| (1/c)(1 - 1/c) / n^2 exactly at finite n
        n, c = 40, 2
        g = erdos_renyi(n, 0.5, seed=8)
        x = gamma_draws([complete(2)], Multiplex((g,)), c, 40_000, seed=6)[:, 0]
        exact = 4 * c * g.edge_count * (1 / c) * (1 - 1 / c) / n**2
        assert abs(x.mean()) < 4 * math.sqrt(exact / x.size)
        assert x.var() == pytest.approx(exact, rel=0.03)

    def test_layer_count(self):
        g = erdos_renyi(10, 0.5)
        with pytest.raises(InputError):
            gamma_draws([complete(2)] * 2, Multiplex((g,)), 2, 10)


class TestRunExperiment:
    def test_config_validation(self):
        with pytest.raises(InputError):
            ExperimentConfig(preset="nope")
        with pytest.raises(InputError):
            ExperimentConfig(c=1)

    def test_er_correlated_report(self):
        cfg = ExperimentConfig(preset="er-correlated", n=60, p=0.5, q=0.4, rho=0.05, colorings=2000, limit_draws=5000)
        report = run_experiment(cfg)
        d = json.loads(report.to_json())
        assert d["config"]["preset"] == "er-correlated"
        assert {"rows", "empirical", "limit", "passed", "ks"} <= set(d)
        rows = list(csv.reader(io.StringIO(report.to_csv())))
        assert rows[0] == ["name", "empirical", "limit", "gap", "stderr"]
        assert len(rows) == len(report.rows) + 1
        assert run_experiment(cfg).to_json() == report.to_json()

    def test_complement_direction(self):
        report = run_experiment(ExperimentConfig(preset="complement", n=40, p=0.3, colorings=500, limit_draws=2000))
        assert report.extra["sigma_rank"] == 1
        np.testing.assert_allclose(report.extra["gaussian_direction"], report.extra["gaussian_direction_target"], atol=1e-9)

    def test_path_blowup_extras(self):
        report = run_experiment(ExperimentConfig(preset="path-blowup", n=5, colorings=500, limit_draws=2000))
        assert report.extra["overlap_A"] == pytest.approx(2 * 25 / 400)
        assert report.extra["overlap_B"] == pytest.approx(2 * 25 / 400)
        assert report.rows[-1].name == "diff4[0,1] vs B" and not report.rows[-1].tagged
