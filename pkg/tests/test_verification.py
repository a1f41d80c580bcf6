import numpy as np
import pytest

import tdchan as td
from tdchan.errors import (
    BadK,
    BadLength,
    BadSignPattern,
    BadT,
    ConfigError,
    NearZeroNu,
)
from tdchan.sampling import philox_stream
from tdchan.verification import (
    SCAN_KINDS,
    _batch_polytope,
    _cell_key,
    _rhs_coefficient,
    box_ratio,
    default_t_grid,
    extreme_point_defect,
    final_polynomial,
    first_term_value,
    k0_defect,
    main_inequality_lhs,
    polytope_vertices,
    run_scan,
    sample_polytope,
    second_term_value,
)


# ------------------------------------------------------------- scalar formulas


def test_box_ratio_and_coefficient():
    assert box_ratio(4, -1.0 / 3.0) == pytest.approx(-2.0)
    assert box_ratio(3, -0.5) == pytest.approx(-2.0)
    assert _rhs_coefficient(4, -1.0 / 3.0) == pytest.approx(0.0)
    # coefficient is <= 0 on the whole negative range
    for d in (3, 4, 6):
        for t in default_t_grid(d):
            assert _rhs_coefficient(d, float(t)) <= 1e-12


def test_main_inequality_frozen_values():
    # d=4, t=-1/3 puts the coefficient at 0, so only the first term remains
    assert main_inequality_lhs(np.array([1.0, 1.0]), 0, 4, -1.0 / 3.0) == pytest.approx(0.0)
    assert main_inequality_lhs(np.array([-1.0, 1.0]), 0, 4, -1.0 / 3.0) == pytest.approx(2.0)
    assert main_inequality_lhs(np.array([-1.0, 1.0]), 1, 4, -1.0 / 3.0) == pytest.approx(2.0)
    assert main_inequality_lhs(np.array([0.5, 0.75]), 0, 4, -1.0 / 3.0) == pytest.approx(0.5)
    assert main_inequality_lhs(np.array([0.5, 0.75]), 1, 4, -1.0 / 3.0) == pytest.approx(0.75)


def test_main_inequality_all_ones_reduces_to_rhs_term():
    from math import comb

    for d in (3, 4, 5):
        n = d - 2
        for t in (-0.9 / (d - 1), -0.2 / (d - 1)):
            coef = _rhs_coefficient(d, t)
            for k in range(n):
                lhs = main_inequality_lhs(np.ones(n), k, d, t)
                assert lhs == pytest.approx(-coef * comb(n, n - k), rel=1e-12, abs=1e-12)
                assert lhs >= -1e-12


def test_main_inequality_guards():
    with pytest.raises(ConfigError):
        main_inequality_lhs(np.array([]), 0, 2, -0.5)
    with pytest.raises(BadLength):
        main_inequality_lhs(np.array([1.0, 1.0, 1.0]), 0, 4, -0.25)
    with pytest.raises(BadK):
        main_inequality_lhs(np.array([1.0, 1.0]), 2, 4, -0.25)
    with pytest.raises(BadT):
        main_inequality_lhs(np.array([1.0, 1.0]), 0, 4, 0.1)
    with pytest.raises(BadT):
        main_inequality_lhs(np.array([1.0, 1.0]), 0, 4, -0.5)  # below -1/(d-1)


def test_first_and_second_term_frozen():
    assert first_term_value(np.array([-1.0, 1.0]), 0) == pytest.approx(2.0)
    assert second_term_value(np.array([-1.0, 1.0]), 1) == pytest.approx(0.0)
    assert second_term_value(np.array([-0.5, 0.9, 1.0]), 2) == pytest.approx(1.4)
    with pytest.raises(BadK):
        second_term_value(np.array([-1.0, 1.0]), 0)
    with pytest.raises(BadK):
        second_term_value(np.array([-1.0, 1.0]), 3)


def test_second_term_can_go_negative_on_feasible_points():
    # the standalone lower bound on s_{n-k} fails for n >= 3 at steep t:
    # this point is feasible (box floor -1, sum floor 1.0) yet s_2 < 0.
    # The full inequality is unharmed there because its second-term
    # coefficient vanishes at t = -1/(d-1) and the first term dominates
    # nearby, which the main scans confirm at scale.
    nu = np.array([-0.99, 1.0, 1.0])
    d, t = 5, -0.25
    assert 1.0 + box_ratio(d, t) == pytest.approx(-1.0)
    assert np.sum(nu) >= (nu.size + box_ratio(d, t)) - 1e-12
    assert second_term_value(nu, 1) == pytest.approx(-0.98)
    for k in range(3):
        assert main_inequality_lhs(nu, k, d, t) >= -1e-9
    for t2 in (-0.24, -0.2, -0.15):
        assert main_inequality_lhs(nu, 1, d, t2) >= -1e-9

    reports = run_scan("second_term", [5], samples=4000, seed=2)
    assert any(r.violations > 0 for r in reports)
    reports = run_scan("second_term", [3, 4], samples=4000, seed=2)
    assert all(r.violations == 0 for r in reports)


def test_k0_defect_frozen_and_guards():
    assert k0_defect(np.array([-1.0, 1.0]), 4, -1.0 / 3.0) == pytest.approx(2.0)
    assert k0_defect(np.array([-0.25, 0.5, 1.0]), 5, -0.25) == pytest.approx(4.0)
    with pytest.raises(BadSignPattern):
        k0_defect(np.array([0.5, 1.0]), 4, -1.0 / 3.0)  # no negative entry
    with pytest.raises(BadSignPattern):
        k0_defect(np.array([-0.5, -0.1, 1.0]), 5, -0.25)  # two negatives
    with pytest.raises(NearZeroNu):
        k0_defect(np.array([-1e-13, 1.0]), 4, -1.0 / 3.0)


def test_extreme_point_defect():
    assert extreme_point_defect(4, -1.0 / 3.0) == pytest.approx(2.0)
    assert extreme_point_defect(3, -0.5) == pytest.approx(2.0)
    # box floor is nonnegative for t >= -1/(2d-1): nothing to check
    assert extreme_point_defect(4, -0.1) is None
    assert extreme_point_defect(5, -1.0 / 9.0) is None
    with pytest.raises(BadT):
        extreme_point_defect(4, 0.1)
    # nonnegative across the admissible range
    for d in range(3, 11):
        for t in np.linspace(-1.0 / (d - 1), -1e-6, 101):
            v = extreme_point_defect(d, float(t))
            assert v is None or v >= -1e-9


def test_final_polynomial():
    assert final_polynomial(3, -0.5) == pytest.approx(2.25)
    assert final_polynomial(4, -1.0 / 3.0) == pytest.approx(16.0 / 9.0)
    # 3x^2 + 3(1-t)x + (1-t)^2 with x = td has minimum (1-t)^2/4 > 0
    for d in range(3, 11):
        for t in np.linspace(-1.0 / (d - 1), -1e-6, 51):
            v = final_polynomial(d, float(t))
            assert v >= (1.0 - t) ** 2 / 4.0 - 1e-12
            assert v > 0.0


# ------------------------------------------------------------------- sampling


def test_sample_polytope_feasibility():
    rng = np.random.default_rng(401)
    for d, t in ((3, -0.5), (4, -1.0 / 3.0), (5, -0.05), (6, -0.2)):
        n = d - 2
        lower = 1.0 + box_ratio(d, t)
        floor = n + 2.0 * t * d / (1.0 - t)
        for _ in range(200):
            nu = sample_polytope(n, d, t, rng)
            v = nu.nu
            assert v.size == n
            assert np.all(v <= 1.0 + 1e-12)
            assert np.all(v >= lower - 1e-12)
            assert np.sum(v) >= floor - 1e-12
            assert int(np.sum(v < 0.0)) <= 1


def test_sample_polytope_deterministic():
    a = [sample_polytope(3, 5, -0.25, np.random.default_rng(7)).nu for _ in range(1)]
    b = [sample_polytope(3, 5, -0.25, np.random.default_rng(7)).nu for _ in range(1)]
    assert np.array_equal(a[0], b[0])
    with pytest.raises(ConfigError):
        sample_polytope(0, 2, -0.5, np.random.default_rng(1))


def test_batch_polytope_feasibility_and_determinism():
    for d, t, force in ((5, -0.25, False), (5, -0.25, True), (6, -0.19, False), (4, -0.01, True)):
        n = d - 2
        ratio = box_ratio(d, t)
        lower = 1.0 + ratio
        gen_a = philox_stream(42, _cell_key("main", d, 0, 1))
        gen_b = philox_stream(42, _cell_key("main", d, 0, 1))
        rows_a = _batch_polytope(gen_a, n, ratio, 512, force)
        rows_b = _batch_polytope(gen_b, n, ratio, 512, force)
        assert np.array_equal(rows_a, rows_b)
        if force and lower >= 0.0:
            assert rows_a.shape == (0, n)
            continue
        assert rows_a.shape == (512, n)
        assert np.all(rows_a <= 1.0 + 1e-12)
        assert np.all(rows_a >= lower - 1e-12)
        assert np.all(np.sum(rows_a, axis=1) >= n + ratio - 1e-12)
        assert np.all(np.sum(rows_a < 0.0, axis=1) <= 1)
        if force:
            assert np.all(np.sum(rows_a < 0.0, axis=1) == 1)


def test_polytope_vertices_frozen():
    v = polytope_vertices(1, 3, -0.5)
    assert sorted(map(tuple, v)) == [(-1.0,), (1.0,)]
    v = polytope_vertices(2, 4, -1.0 / 3.0)
    assert sorted(map(tuple, v)) == [(-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)]
    # shallow t: the sum plane cuts the box edges strictly inside
    v = polytope_vertices(2, 4, -0.15)
    lo = 2.0 + box_ratio(4, -0.15) - 1.0
    assert sorted(map(tuple, np.round(v, 8))) == [
        (round(lo, 8), 1.0),
        (1.0, round(lo, 8)),
        (1.0, 1.0),
    ]
    with pytest.raises(ConfigError):
        polytope_vertices(5, 7, -0.1)


def test_polytope_vertices_feasible():
    for d in (3, 4, 5, 6):
        for t in default_t_grid(d, points=5):
            t = float(t)
            n = d - 2
            verts = polytope_vertices(n, d, t)
            lower = 1.0 + box_ratio(d, t)
            for v in verts:
                assert np.all(v <= 1.0 + 1e-9)
                assert np.all(v >= lower - 1e-9)
                assert np.sum(v) >= n + box_ratio(d, t) - 1e-9


# ------------------------------------------------------------------- run_scan


def test_run_scan_reports_clean():
    for kind in SCAN_KINDS:
        reports = run_scan(kind, [3, 4], samples=200, seed=3)
        assert len(reports) == 2 * 9
        for rep in reports:
            assert rep.kind == kind
            assert rep.d in (3, 4)
            assert rep.violations == 0
            assert rep.seed == 3
            d = rep.as_dict()
            assert d["kind"] == kind and d["violations"] == 0


def test_run_scan_margins_nonnegative():
    reports = run_scan("main", [4], samples=500, seed=1)
    for rep in reports:
        assert rep.worst_margin is None or rep.worst_margin >= -1e-9


def test_run_scan_thread_determinism():
    a = run_scan("main", [3, 4, 5], samples=400, seed=9, threads=1)
    b = run_scan("main", [3, 4, 5], samples=400, seed=9, threads=8)
    assert len(a) == len(b)
    for ra, rb in zip(a, b):
        assert ra == rb


def test_run_scan_custom_grid_and_guards():
    reports = run_scan("extreme", [5], t_grid=np.array([-0.25, -0.125]), samples=1)
    assert len(reports) == 2
    assert [r.t_values[0] for r in reports] == [-0.25, -0.125]
    with pytest.raises(ConfigError):
        run_scan("nope", [3])
    with pytest.raises(ConfigError):
        run_scan("main", [2])  # polytope kinds need d >= 3
    with pytest.raises(ConfigError):
        run_scan("main", [3], samples=0)


def test_run_scan_d2_allowed_for_nonpolytope():
    reports = run_scan("extreme", [2], samples=1, seed=0)
    assert len(reports) == 9
    for rep in reports:
        assert rep.violations == 0
