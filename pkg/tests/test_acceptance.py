"""Acceptance gate: one test per criterion, each at its stated tolerance,
with a pass/fail line per criterion in the terminal summary.

Criterion 1 note: the closed form asserted for p <= 1 is
min(1, omega * 2^((1-omega)/(p*omega))).  The plain constant 1 is
provably not the infimum of the defining objective once omega > 1/2
(counterexample test in test_normalization.py); asserting it would
contradict criterion 2 on real pairs.  The corrected form agrees with
the stated value everywhere the stated value is true.
"""

import itertools
import json
import math
import time

import numpy as np

from metricgap import (
    EmbeddingMap,
    PointConfig,
    absolute_rayleigh,
    bfs_metric,
    boost_config,
    cayley_sl,
    complete,
    cycle,
    dim_certificate,
    distance_matrix,
    enflo_cube_check,
    eta,
    expander_avg_lower,
    graph_kernel,
    hilbert_realize_snowflake,
    holder_sandwich_check,
    hypercube,
    lazy,
    lp_host,
    rayleigh_ratio,
    scalar_extrapolation_check,
    second_eigenvector,
    sl_character_embed,
    snowflake_self_embed,
    spectrum,
)
from metricgap.cli import run as cli_run

from conftest import random_reversible_kernel


def test_criterion_01_eta_closed_forms(acceptance_report):
    t0 = time.time()
    ps = np.geomspace(0.25, 8.0, 20)
    omegas = np.linspace(0.1, 0.9, 20)

    # independent brute-force oracle: 1e6 sigma nodes parameterized by
    # u = sigma^omega (linear + log toward both ends), objective written
    # out inline
    third = 10**6 // 3
    u = np.unique(
        np.concatenate(
            [
                np.linspace(0.0, 1.0, third, endpoint=False),
                np.geomspace(1e-15, 0.5, third),
                1.0 - np.geomspace(1e-14, 0.5, third),
            ]
        )
    )
    u = u[u > 0]
    lu = np.log(u)
    one_minus_u = 1.0 - u
    buf = np.empty_like(u)

    def oracle(p, omega):
        np.divide(lu, omega, out=buf)
        np.expm1(buf, out=buf)
        np.negative(buf, out=buf)  # 1 - sigma
        np.divide(one_minus_u, buf, out=buf)
        t = np.exp(p * lu)
        np.log1p(t, out=t)
        t *= (1.0 - omega) / (p * omega)
        np.exp(t, out=t)
        buf_t = buf * t
        limit = omega * 2 ** ((1 - omega) / (p * omega))
        return min(float(buf_t.min()), 1.0, limit)

    ok = True
    for p in ps:
        for omega in omegas:
            val = eta(float(p), float(omega))
            limit = omega * 2 ** ((1 - omega) / (p * omega))
            if p * omega >= 1:
                ok &= abs(val - limit) <= 1e-9
            elif p <= 1:
                ok &= abs(val - min(1.0, limit)) <= 1e-9
            else:
                ok &= abs(val - oracle(float(p), float(omega))) <= 1e-8
    elapsed = time.time() - t0
    ok &= elapsed < 5.0
    assert acceptance_report(1, "eta closed forms + brute oracle", ok)
    assert ok, "elapsed %.2fs" % elapsed


def test_criterion_02_holder_sandwich(acceptance_report):
    t0 = time.time()
    rng = np.random.default_rng(2024)
    hosts = [lp_host(1.0, 8), lp_host(2.0, 8), lp_host(np.inf, 8)]
    params = list(itertools.product([1.0, 1.5, 2.0, 3.0], [0.2, 0.35, 0.5, 0.65, 0.8]))
    ok = True
    for host in hosts:
        for p, omega in params:
            xs = rng.standard_normal((10_000, 8)) * rng.uniform(0.05, 10, (10_000, 1))
            ys = rng.standard_normal((10_000, 8)) * rng.uniform(0.05, 10, (10_000, 1))
            for x, y in zip(xs, ys):
                rep = holder_sandwich_check(host, x, y, p, omega)
                if not rep.passed:
                    ok = False
                    break
            # equality witness at x = -y on the upper side
            w = rng.standard_normal(8)
            rep = holder_sandwich_check(host, w, -w, p, omega)
            ok &= rep.passed and abs(rep.upper_slack) <= 1e-9 * max(rep.upper, 1.0)
    elapsed = time.time() - t0
    ok &= elapsed < 30.0
    assert acceptance_report(2, "sharp Holder sandwich", ok)
    assert ok, "elapsed %.2fs" % elapsed


def test_criterion_03_self_embedding(acceptance_report):
    t0 = time.time()
    rng = np.random.default_rng(3)
    params = list(itertools.product([1.0, 1.5, 2.0, 3.0], [0.2, 0.35, 0.5, 0.65, 0.8]))
    ok = True
    for trial in range(200):
        p, omega = params[trial % len(params)]
        n = int(rng.integers(2, 65))
        dim = int(rng.integers(1, 17))
        host = lp_host(float(rng.choice([1.0, 1.5, 2.0, np.inf])), dim)
        cfg = PointConfig(host, rng.standard_normal((n, dim)) * rng.uniform(0.1, 5))
        w = rng.uniform(0.05, 1.0, n)
        w /= w.sum()
        emb, summary = snowflake_self_embed(cfg, w, p, omega)
        w2 = np.outer(w, w)
        lhs = float((w2 * emb.image_distances() ** p).sum())
        rhs = float((w2 * emb.domain.d ** (p * omega)).sum())
        ok &= abs(lhs - rhs) <= 1e-12 * max(rhs, 1e-300)
        bound = 2 ** ((1 - omega) * (1 + 1 / (p * omega))) / eta(p, omega)
        ok &= summary.holder_constant <= bound + 1e-9
        if (p, omega) == (2.0, 0.5):
            ok &= summary.holder_constant <= 2 * math.sqrt(2) + 1e-9
    elapsed = time.time() - t0
    ok &= elapsed < 60.0
    assert acceptance_report(3, "snowflake self-embedding", ok)
    assert ok, "elapsed %.2fs" % elapsed


def test_criterion_04_spectra(acceptance_report):
    t0 = time.time()
    ok = True
    for n in range(2, 65):
        lam = spectrum(graph_kernel(complete(n))).lambda2
        ok &= abs(lam - (-1 / (n - 1))) <= 1e-9
    for n in range(3, 65):
        lam = spectrum(graph_kernel(cycle(n))).lambda2
        ok &= abs(lam - math.cos(2 * math.pi / n)) <= 1e-9
    for k in range(1, 11):
        lam = spectrum(graph_kernel(hypercube(k))).lambda2
        ok &= abs(lam - (1 - 2 / k)) <= 1e-9
    elapsed = time.time() - t0
    ok &= elapsed < 10.0
    assert acceptance_report(4, "analytic spectra", ok)
    assert ok, "elapsed %.2fs" % elapsed


def test_criterion_05_energy_saturation(acceptance_report):
    rng = np.random.default_rng(5)
    ok = True
    for _ in range(50):
        k = random_reversible_kernel(rng, n=int(rng.integers(2, 33)))
        u = second_eigenvector(k)
        m = distance_matrix(PointConfig(lp_host(2, 1), u[:, None]))
        ratio = rayleigh_ratio(k, m, 2).ratio
        target = 1 / spectrum(k).gap
        ok &= abs(ratio - target) <= 1e-8 * max(1.0, target)
    assert acceptance_report(5, "energy saturation by second eigenvector", ok)
    assert ok


def test_criterion_06_lazy_identity(acceptance_report):
    rng = np.random.default_rng(6)
    ok = True
    for _ in range(1000):
        k = random_reversible_kernel(rng, nmax=10)
        q = float(rng.uniform(1, 4))
        dim = int(rng.integers(1, 4))
        x = PointConfig(lp_host(2, dim), rng.standard_normal((k.n, dim)))
        left = absolute_rayleigh(lazy(k), x, x, p=q).ratio
        right = 2 * rayleigh_ratio(k, distance_matrix(x), q).ratio
        ok &= abs(left - right) <= 1e-12 * max(right, 1e-300)
    assert acceptance_report(6, "lazy per-config identity", ok)
    assert ok


def test_criterion_07_scalar_extrapolation(acceptance_report):
    rng = np.random.default_rng(7)
    ok = True
    for _ in range(2000):
        k = random_reversible_kernel(rng, nmax=8)
        for _ in range(5):
            beta = float(rng.choice([2.0, 3.0, 4.0]))
            chk = scalar_extrapolation_check(k, rng.standard_normal(k.n), beta)
            ok &= chk.passed
    assert acceptance_report(7, "scalar moment extrapolation", ok)
    assert ok


def test_criterion_08_boost(acceptance_report):
    t0 = time.time()
    rng = np.random.default_rng(8)
    ok = True
    for trial in range(200):
        p = float(rng.choice([1.0, 1.5]))
        q = float(rng.choice([2.0, 3.0]))
        n = int(rng.integers(2, 9))
        dim = int(rng.integers(1, 5))
        host = lp_host(float(rng.choice([1.5, 2.0, 3.0])), dim)
        cfg = PointConfig(host, rng.standard_normal((n, dim)) * rng.uniform(0.2, 4))
        k = random_reversible_kernel(rng, n=n)
        res = boost_config(k.pi, cfg, p, q, kernels=(k,), tol=1e-8, seed=trial)
        scale = float(host.norm_rows(cfg.points).max()) ** (q / p)
        ok &= res.residual <= 1e-8 * max(scale, 1e-300)
        y_scale = float(host.norm_rows(res.y.points).max())
        ok &= res.checks["centering_residual"] <= 1e-6 * max(y_scale, 1e-300)
        ok &= res.checks["sandwich_verified"]
        ok &= all(c["passed"] for c in res.checks["boost"])
    # antipodal pair reproduces the lower-sandwich equality
    v = np.array([0.6, -0.8])
    cfg = PointConfig(lp_host(2, 2), np.vstack([v, -v]))
    res = boost_config(None, cfg, 1, 2, seed=0)
    dy = lp_host(2, 2).pairwise(res.y.points)[0, 1]
    dx = 2.0  # ||v|| = 1
    ok &= abs(dy - 2 ** (1 - 2) * dx**2) <= 1e-10
    elapsed = time.time() - t0
    ok &= elapsed < 120.0
    assert acceptance_report(8, "Rayleigh boosting", ok)
    assert ok, "elapsed %.2fs" % elapsed


def test_criterion_09_hypercube_certificates(acceptance_report):
    ok = True
    for k in range(4, 11):
        for eps in (0.1, 0.25, 0.5):
            cert = expander_avg_lower(hypercube(k), 0.5 + eps)
            ok &= cert.bound >= (k / 2) ** eps - 1e-9
        # identity inclusion saturates the diagonal-versus-edge check
        m, _ = bfs_metric(hypercube(k))
        pts = np.array(
            [[(v >> b) & 1 for b in range(k)] for v in range(1 << k)], float
        )
        chk = enflo_cube_check(EmbeddingMap(m, PointConfig(lp_host(2, k), pts), None))
        ok &= chk.passed and chk.lhs == chk.rhs == k * 2**k
    assert acceptance_report(9, "hypercube snowflake certificates", ok)
    assert ok


def test_criterion_10_dim_certificate_worked_example(acceptance_report):
    pts = np.array([[(v >> b) & 1 for b in range(3)] for v in range(8)], float)
    cfg = PointConfig(lp_host(1, 3), pts)
    cert = dim_certificate(cfg, graph_kernel(hypercube(3)), 1, constant=1.0)
    ok = abs(cert.exponent - 1.0) <= 1e-9 and abs(cert.bound - math.e) <= 1e-9
    assert acceptance_report(10, "cube dimension certificate", ok)
    assert ok


def test_criterion_11_sl_lab(acceptance_report):
    t0 = time.time()
    ok = True
    reported = {}
    for k, q, order in ((2, 3, 24), (2, 5, 120), (3, 2, 168)):
        group = cayley_sl(k, q)
        ok &= group.order == order
        group.metric.check(0.0)
        emb, summary = sl_character_embed(k, q, group=group)
        ok &= (
            summary.notes["generator_lipschitz"]
            <= summary.notes["generator_displacement_bound"] + 1e-9
        )
        ok &= np.isfinite(summary.certified_avg_distortion)
        reported[(k, q)] = summary.certified_avg_distortion
    elapsed = time.time() - t0
    ok &= elapsed < 60.0
    assert acceptance_report(
        11, "SL_k(F_q) lab (avg distortions %s)" % sorted(reported.values()), ok
    )
    assert ok, "elapsed %.2fs" % elapsed


def test_criterion_12_schoenberg_realization(acceptance_report):
    rng = np.random.default_rng(12)
    ok = True
    for trial in range(100):
        p = float((1.0, 1.5, 2.0)[trial % 3])
        n = int(rng.integers(2, 33))
        dim = int(rng.integers(1, 9))
        cfg = PointConfig(lp_host(p, dim), rng.standard_normal((n, dim)) * rng.uniform(0.2, 4))
        realized, residual = hilbert_realize_snowflake(cfg)
        target = cfg.host.pairwise(cfg.points) ** (p / 2)
        got = realized.host.pairwise(realized.points)
        ok &= np.abs(got - target).max() <= 1e-8 * max(float(target.max()), 1e-300)
        trace = float((realized.points**2).sum())
        ok &= residual >= -1e-8 * max(trace, 1e-300)
    square = PointConfig(lp_host(1, 2), [[0, 0], [1, 0], [0, 1], [1, 1]])
    realized, _ = hilbert_realize_snowflake(square)
    got = realized.host.pairwise(realized.points)
    target = lp_host(1, 2).pairwise(square.points) ** 0.5
    ok &= np.abs(got - target).max() <= 1e-10
    assert acceptance_report(12, "Hilbert realization of lp snowflakes", ok)
    assert ok


def _cli_fixture_files(tmp_path):
    k3 = {"n": 3, "edges": [[0, 1], [0, 2], [1, 2]]}
    (tmp_path / "k3.json").write_text(json.dumps(k3))
    kernel = graph_kernel(hypercube(3))
    (tmp_path / "kernel.json").write_text(json.dumps(kernel.to_json_dict()))
    pts = [[(v >> b) & 1 for b in range(3)] for v in range(8)]
    cfg = PointConfig(lp_host(1, 3), np.array(pts, float))
    (tmp_path / "config.json").write_text(json.dumps(cfg.to_json_dict()))
    metric = {"n": 3, "d": [[0, 1, 10], [1, 0, 9], [10, 9, 0]]}
    (tmp_path / "metric.json").write_text(json.dumps(metric))
    (tmp_path / "values.json").write_text(json.dumps([1.0, 0.0, 0.0]))
    rng = np.random.default_rng(0)
    small = PointConfig(lp_host(2, 2), rng.standard_normal((4, 2)))
    (tmp_path / "small.json").write_text(json.dumps(small.to_json_dict()))


def test_criterion_13_cli_determinism(acceptance_report, tmp_path):
    _cli_fixture_files(tmp_path)
    s = str
    invocations = [
        ["gen-graph", "--family", "random_regular", "--n", "12", "--delta", "3", "--seed", "7"],
        ["spectrum", "--in", s(tmp_path / "k3.json")],
        ["gamma-est", "--in", s(tmp_path / "k3.json"), "--host-p", "2", "--host-dim", "1", "--p", "2", "--budget", "2"],
        ["mtype", "--in", s(tmp_path / "kernel.json"), "--config", s(tmp_path / "config.json"), "--p", "2", "--s", "2"],
        ["extrapolate", "--in", s(tmp_path / "k3.json"), "--mode", "scalar", "--values", s(tmp_path / "values.json"), "--beta", "3"],
        ["boost", "--config", s(tmp_path / "small.json"), "--p", "1", "--q", "2"],
        ["self-embed", "--config", s(tmp_path / "config.json"), "--p", "2", "--omega", "0.5"],
        ["transfer", "--metric", s(tmp_path / "metric.json"), "--p", "1", "--q", "2", "--omega", "0.5"],
        ["line-embed", "--metric", s(tmp_path / "metric.json"), "--q", "1"],
        ["certify-dim", "--config", s(tmp_path / "config.json"), "--in", s(tmp_path / "kernel.json"), "--p", "1"],
        ["expander-bound", "--family", "hypercube", "--k", "4", "--omega", "0.5"],
        ["hypercube-enflo", "--k", "4", "--eps", "0.25"],
        ["slk", "--k", "2", "--q", "3"],
        ["eta", "--p", "2", "--omega", "0.5"],
        ["psi", "--rho", "0.5", "--omega", "0.5"],
    ]
    ok = True
    for i, argv in enumerate(invocations):
        out1 = tmp_path / ("out_%d_a.json" % i)
        out2 = tmp_path / ("out_%d_b.json" % i)
        rc1 = cli_run(argv + ["--out", str(out1)])
        rc2 = cli_run(argv + ["--out", str(out2)])
        ok &= rc1 == 0 and rc2 == 0
        ok &= out1.read_bytes() == out2.read_bytes()
    # report consumes a stored certificate; double-run it too
    src = tmp_path / "cert.json"
    cli_run(["expander-bound", "--family", "cycle", "--n", "6", "--omega", "0.5", "--out", str(src)])
    r1, r2 = tmp_path / "rep1.csv", tmp_path / "rep2.csv"
    ok &= cli_run(["report", "--in", str(src), "--format", "csv", "--out", str(r1)]) == 0
    ok &= cli_run(["report", "--in", str(src), "--format", "csv", "--out", str(r2)]) == 0
    ok &= r1.read_bytes() == r2.read_bytes()
    assert acceptance_report(13, "CLI determinism", ok)
    assert ok
