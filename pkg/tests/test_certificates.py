import math

import numpy as np
import pytest

from metricgap import (
    Certificate,
    EmbeddingMap,
    FiniteMetricSpace,
    PointConfig,
    ValidationError,
    avg_distortion,
    bfs_metric,
    complete,
    cycle,
    dim_certificate,
    distance_matrix,
    enflo_cube_check,
    enflo_lower,
    expander_avg_lower,
    frechet_embed,
    general_target_lower,
    graph_kernel,
    hilbert_realize_snowflake,
    holder_constant,
    hypercube,
    lp_host,
    second_eigenvector,
    snowflake,
    spectrum,
)
from conftest import random_reversible_kernel


def cube_config(k):
    pts = np.array([[(v >> b) & 1 for b in range(k)] for v in range(1 << k)], float)
    return PointConfig(lp_host(1, k), pts)


def test_holder_constant_identity_and_constant():
    m = FiniteMetricSpace([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    f = EmbeddingMap(m, frechet_embed(m), None)
    assert holder_constant(f) == pytest.approx(1.0)
    const = EmbeddingMap(m, PointConfig(lp_host(2, 1), np.zeros((3, 1))), None)
    assert holder_constant(const) == 0.0


def test_holder_constant_glued_points():
    m = FiniteMetricSpace([[0, 0], [0, 0]])
    split = EmbeddingMap(m, PointConfig(lp_host(2, 1), [[0.0], [1.0]]), None)
    assert holder_constant(split) == math.inf


def test_holder_constant_matches_sandwich_upper():
    from metricgap import f_omega

    h = lp_host(2, 2)
    x, y = np.array([1.0, 0.0]), np.array([-1.0, 0.0])
    m = FiniteMetricSpace(h.pairwise(np.vstack([x, y])))
    img = PointConfig(h, np.vstack([f_omega(h, x, 0.5), f_omega(h, y, 0.5)]))
    f = EmbeddingMap(m, img, None)
    assert holder_constant(f, 0.5) == pytest.approx(2 ** 0.5, rel=1e-12)


def test_avg_distortion_scale_invariance():
    rng = np.random.default_rng(0)
    pts = rng.standard_normal((6, 3))
    m = FiniteMetricSpace(lp_host(2, 3).pairwise(pts))
    img = PointConfig(lp_host(2, 3), rng.standard_normal((6, 3)))
    f = EmbeddingMap(m, img, None)
    base = avg_distortion(f, 2).certified_avg_distortion
    for c in (0.1, 3.7):
        scaled = EmbeddingMap(m, PointConfig(img.host, c * img.points), None)
        assert avg_distortion(scaled, 2).certified_avg_distortion == pytest.approx(
            base, rel=1e-12
        )
    assert base >= 1 - 1e-9


def test_avg_distortion_infinite_on_collapse():
    m = FiniteMetricSpace([[0, 1], [1, 0]])
    const = EmbeddingMap(m, PointConfig(lp_host(2, 1), np.zeros((2, 1))), None)
    assert avg_distortion(const, 2).certified_avg_distortion == math.inf


def test_dim_certificate_cube_worked_example():
    cert = dim_certificate(cube_config(3), graph_kernel(hypercube(3)), 1)
    assert cert.exponent == pytest.approx(1.0, abs=1e-12)
    assert cert.bound == pytest.approx(math.e, abs=1e-9)
    assert cert.provenance["gap"] == pytest.approx(2 / 3)
    assert cert.provenance["ratio"] == pytest.approx(1.5)


def test_dim_certificate_trivial_for_identical_points():
    cfg = PointConfig(lp_host(2, 2), np.ones((4, 2)))
    k = graph_kernel(cycle(4))
    cert = dim_certificate(cfg, k, 2)
    assert cert.bound == 1.0


def test_dim_certificate_eigenvector_sqrt_gap():
    k = graph_kernel(cycle(5))
    u = second_eigenvector(k)
    cfg = PointConfig(lp_host(2, 1), u[:, None])
    cert = dim_certificate(cfg, k, 2)
    gap = spectrum(k).gap
    assert cert.exponent == pytest.approx(math.sqrt(gap), rel=1e-9)


def test_dim_certificate_monotone_in_ratio_and_gap():
    rng = np.random.default_rng(1)
    k = random_reversible_kernel(rng, n=6)
    cfg = PointConfig(lp_host(2, 2), rng.standard_normal((6, 2)))
    cert = dim_certificate(cfg, k, 2)
    # recompute from provenance
    prov = cert.provenance
    again = prov["gap"] * prov["ratio"] ** (1 / prov["p"])
    assert cert.exponent == pytest.approx(again, rel=1e-12)
    assert cert.bound == pytest.approx(
        math.exp(cert.exponent / (cert.parametric_constant * prov["p"])), rel=1e-12
    )
    # fuzz: with the kernel fixed, bound order follows Rayleigh ratio order
    for _ in range(50):
        a = PointConfig(lp_host(2, 2), rng.standard_normal((6, 2)))
        b = PointConfig(lp_host(2, 2), rng.standard_normal((6, 2)))
        ca, cb = dim_certificate(a, k, 2), dim_certificate(b, k, 2)
        ra, rb = ca.provenance["ratio"], cb.provenance["ratio"]
        if ra != rb:
            assert (ra < rb) == (ca.bound < cb.bound)


def test_expander_avg_lower_examples():
    assert expander_avg_lower(hypercube(4), 0.5).bound == pytest.approx(1.0, abs=1e-9)
    assert expander_avg_lower(complete(5), 1.0).bound == pytest.approx(1.0, abs=1e-9)
    for k in (4, 6):
        for eps in (0.1, 0.25):
            cert = expander_avg_lower(hypercube(k), 0.5 + eps)
            assert cert.bound >= (k / 2) ** eps - 1e-9


def even_cycle_l1_config(m):
    # cyclic length-m window indicators, halved: an isometric l1
    # representation of the 2m-cycle (each edge flips two coordinates)
    n = 2 * m
    pts = np.zeros((n, n))
    for i in range(n):
        for k in range(n):
            pts[i, k] = 1.0 if (i - k) % n < m else 0.0
    return PointConfig(lp_host(1, n), 0.5 * pts)


def test_expander_bound_sound_against_explicit_realizations():
    # an isometric Hilbert realization of the half-snowflake exists for
    # l1-representable graph metrics; the certificate can never exceed
    # its measured quadratic distortion
    for g, cfg in [
        (hypercube(3), cube_config(3)),
        (complete(4), PointConfig(lp_host(1, 4), 0.5 * np.eye(4))),
        (cycle(6), even_cycle_l1_config(3)),
        (cycle(8), even_cycle_l1_config(4)),
    ]:
        assert np.allclose(distance_matrix(cfg).d, bfs_metric(g)[0].d)
        cert = expander_avg_lower(g, 0.5)
        realized, _ = hilbert_realize_snowflake(cfg)
        dom = snowflake(distance_matrix(cfg), 0.5)
        emb = EmbeddingMap(dom, realized, None)
        measured = avg_distortion(emb, 2).certified_avg_distortion
        assert cert.bound <= measured + 1e-9


def test_general_target_reduces_to_expander_up_to_chain_constant():
    g = hypercube(4)
    a = expander_avg_lower(g, 0.5).bound
    b = general_target_lower(g, 0.5, 2, 2)
    assert b.provenance["route"] == "plain"
    assert a / b.bound == pytest.approx(4.0, rel=1e-9)  # 2q/sqrt(gap) vs sqrt(gap)


def test_general_target_omega_one_sqrt_gap():
    g = hypercube(4)
    cert = general_target_lower(g, 1.0, 2, 2)
    m, _ = bfs_metric(g)
    gap = spectrum(graph_kernel(g)).gap
    moment = (float((m.d**2).sum()) / g.n**2) ** 0.5
    assert cert.bound == pytest.approx(moment * math.sqrt(gap) / 4, rel=1e-9)


def test_general_target_small_omega_uses_lazy_power():
    cert = general_target_lower(cycle(64), 0.25, 2, 2)
    assert cert.provenance["route"] == "lazy-power"
    assert cert.bound > 0
    s = cert.provenance["s"]
    assert s == math.ceil(1 / spectrum(graph_kernel(cycle(64))).gap)


def test_enflo_identity_saturates():
    for k in (2, 3, 5):
        m, _ = bfs_metric(hypercube(k))
        pts = np.array([[(v >> b) & 1 for b in range(k)] for v in range(1 << k)], float)
        emb = EmbeddingMap(m, PointConfig(lp_host(2, k), pts), None)
        chk = enflo_cube_check(emb)
        assert chk.passed
        assert chk.lhs == chk.rhs == k * 2**k


def test_enflo_constant_map():
    m, _ = bfs_metric(hypercube(3))
    emb = EmbeddingMap(m, PointConfig(lp_host(2, 2), np.zeros((8, 2))), None)
    chk = enflo_cube_check(emb)
    assert chk.passed and chk.lhs == 0.0 and chk.rhs == 0.0


def test_enflo_random_maps_fuzz():
    rng = np.random.default_rng(2)
    for k in (2, 4, 6, 8):
        m, _ = bfs_metric(hypercube(k))
        for _ in range(250):
            img = PointConfig(lp_host(2, 5), rng.standard_normal((1 << k, 5)))
            assert enflo_cube_check(EmbeddingMap(m, img, None)).passed


def test_enflo_rejects_non_cube():
    m, _ = bfs_metric(cycle(8))
    emb = EmbeddingMap(m, PointConfig(lp_host(2, 1), np.zeros((8, 1))), None)
    with pytest.raises(ValidationError):
        enflo_cube_check(emb)


def test_enflo_lower_example():
    cert = enflo_lower(8, 0.25)
    assert cert.bound == pytest.approx(math.sqrt(2), abs=1e-12)
    assert cert.provenance["advisory_sharp_value"] == pytest.approx(8**0.25)
    assert cert.bound <= cert.provenance["explicit_spectral_value"] + 1e-9


def test_certificate_csv_row():
    cert = dim_certificate(cube_config(3), graph_kernel(hypercube(3)), 1)
    row = cert.to_csv_row()
    fields = row.split(",")
    assert fields[0] == "dim_lower"
    assert Certificate.csv_header().split(",")[0] == "kind"
    assert float(fields[-1]) == pytest.approx(math.e)
