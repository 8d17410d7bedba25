import math

import numpy as np
import pytest

import ektau


def test_metric_and_fiber():
    sp = ektau.Space(-1.0, 0.5)
    p = np.array([0.3, -0.2, 1.0])
    g = sp.metric(p)
    assert np.allclose(g, g.T)
    assert np.all(np.linalg.eigvalsh(g) > 0)
    assert sp.norm(p, sp.xi(p)) == pytest.approx(1.0, abs=1e-14)


def test_euclidean_sphere():
    s = ektau.coordinate_sphere(ektau.SpaceParams(0, 0), [0.3, -0.2, 0.5], 2.0, 0.5)
    d = ektau.analyze(s, s.at(0.4, 0.3))
    assert d["K_e"] == pytest.approx(0.25, abs=1e-12)
    assert d["H"] == pytest.approx(0.5, abs=1e-12)
    assert d["grad_theta_norm"] == pytest.approx(0.5, abs=1e-10)
    assert d["phi"] == pytest.approx(math.pi / 2, abs=1e-10)
    assert len(ektau.find_horizontal_points(s)) == 2


def test_solve_theta_and_errors():
    nu = ektau.solve_theta(0.5, 1.0, ektau.SpaceParams(-1, 0))
    assert nu[0] == pytest.approx(math.sqrt(0.5))
    with pytest.raises(ektau.DegenerateSpace):
        ektau.solve_theta(1.0, 1.0, ektau.SpaceParams(1, 0.5))
    with pytest.raises(ektau.DomainError):
        ektau.coordinate_sphere(ektau.SpaceParams(0, 0.5), [0, 0, 0], -1.0)


def test_suite_and_congruence():
    sp = ektau.SpaceParams(0, 0.5)
    ref = ektau.coordinate_sphere(sp, [0.1, -0.05, 0.2], 0.1, 0.3, "reference")
    ok, rows = ektau.run_suite(ref, samples=10)
    assert ok
    assert any(r["id"] == "eq1" for r in rows)
    member = ref.moved(ektau.Isometry.fiber_rotation(0.7).then(ektau.Isometry.vertical_translation(0.3)), "m")
    v = ektau.congruence_test(ref, member, [[1.2, 0.7], [1.8, 2.0], [1.0, 4.0]])
    assert v["verdict"] == "congruent"
    assert v["alpha_discrepancy"] < 1e-6
    assert v["witness"]
