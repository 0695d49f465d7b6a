"""Shared fuzz generators and the acceptance-summary hook."""

import numpy as np
import pytest

from metricgap import FiniteMetricSpace, PointConfig, StochasticKernel, lp_host


def random_reversible_kernel(rng, n=None, nmax=12):
    """Random walk on a random positively-weighted complete graph; the
    stationary weights are the row sums, which gives detailed balance."""
    if n is None:
        n = int(rng.integers(2, nmax + 1))
    w = rng.uniform(0.1, 1.0, size=(n, n))
    w = 0.5 * (w + w.T)
    if rng.random() < 0.5:
        np.fill_diagonal(w, 0.0)
    rows = w.sum(axis=1)
    a = w / rows[:, None]
    pi = rows / rows.sum()
    return StochasticKernel(a, pi)


def random_metric(rng, n=None, dim=3, nmax=16, scale=1.0):
    """Metric of a random Euclidean point cloud."""
    if n is None:
        n = int(rng.integers(2, nmax + 1))
    pts = scale * rng.standard_normal((n, dim))
    host = lp_host(2.0, dim)
    return FiniteMetricSpace(host.pairwise(pts))


def random_config(rng, host, n):
    return PointConfig(host, rng.standard_normal((n, host.dim)))


_acceptance_lines = []


@pytest.fixture
def acceptance_report():
    """Collects one pass/fail line per acceptance criterion; printed in
    the terminal summary so it survives output capture."""

    def record(number, name, passed):
        _acceptance_lines.append(
            "acceptance criterion %2d (%s): %s" % (number, name, "PASS" if passed else "FAIL")
        )
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
