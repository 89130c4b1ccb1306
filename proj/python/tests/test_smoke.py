import json

import numpy as np
import pytest

import circlepat


@pytest.fixture(params=["hex-torus", "bolza"])
def pattern(request):
    return circlepat.example(request.param)


def random_kernel_vector(p, rng):
    k = p.kernel()
    return k @ (rng.standard_normal(k.shape[1]) + 1j * rng.standard_normal(k.shape[1]))


def test_counts():
    hex_torus = circlepat.example("hex-torus")
    assert (hex_torus.n_vertices, hex_torus.n_edges, hex_torus.n_faces, hex_torus.genus) == (1, 3, 2, 1)
    bolza = circlepat.example("bolza")
    assert bolza.genus == 2
    assert bolza.n_vertices - bolza.n_edges + bolza.n_faces == -2


def test_residuals(pattern):
    assert pattern.max_residual() < 1e-10


def test_kernel_dimensions():
    assert circlepat.example("hex-torus").kernel().shape[1] == 2
    assert circlepat.example("hex-torus").kernel("real").shape[1] == 2
    bolza = circlepat.example("bolza")
    assert bolza.kernel().shape[1] == 7
    assert bolza.kernel("real").shape[1] == 6


def test_json_round_trip(pattern):
    back = circlepat.Pattern.from_json(pattern.to_json())
    assert back.theta == pattern.theta
    assert back.log_mag == pattern.log_mag


def test_forms_agree(pattern):
    rng = np.random.default_rng(7)
    x = random_kernel_vector(pattern, rng)
    y = random_kernel_vector(pattern, rng)
    g = pattern.omega_G(x, y)
    assert abs(g - pattern.omega_cup(x, y)) < 1e-8
    assert abs(2 * g - pattern.omega_P(x, y)) < 1e-8
    assert abs(g + pattern.omega_G(y, x)) < 1e-8


def test_check_theorem(pattern):
    report = pattern.check_theorem(tol=1e-8)
    assert report["passed"]
    assert report["max_discrepancy"] < 1e-8


def test_vertex_moves(pattern):
    for i in range(pattern.n_vertices):
        x = pattern.vertex_move_field(i)
        assert pattern.max_linearized_residual(x) < 1e-10
        assert pattern.coboundary_distance(x) < 1e-8


def test_solve_recovers(pattern):
    rng = np.random.default_rng(3)
    u0 = list(np.array(pattern.log_mag) + np.log1p(1e-2 * rng.uniform(size=pattern.n_edges)))
    solved, iterations, residual = circlepat.solve(pattern, u0, tol=1e-10, max_iter=20)
    assert iterations <= 20
    assert solved.max_residual() < 1e-10
    assert solved.theta == pattern.theta


def test_trace_identity():
    lhs, rhs = circlepat.trace_pair_identity(0.3 + 0.1j, -1.0 + 0.5j, 0.7 - 0.2j, 2.0j)
    assert abs(lhs - rhs) < 1e-12


def test_errors_carry_kind():
    with pytest.raises(circlepat.CirclepatError) as info:
        circlepat.trace_pair_identity(1.0, 1.0, 0.0, 2.0)
    assert info.value.kind == "DegeneratePair"
    with pytest.raises(circlepat.CirclepatError) as info:
        circlepat.Pattern.from_json("{not json")
    assert info.value.kind == "Format"
    with pytest.raises(circlepat.CirclepatError):
        circlepat.example("klein")


def test_cli():
    code, out, _ = circlepat.run_cli(["example", "bolza"])
    assert code == 0
    assert circlepat.Pattern.from_json(out).genus == 2
    code, out, _ = circlepat.run_cli(["--version"])
    assert code == 0
    assert circlepat.__version__ in out


def test_reports(pattern):
    assert pattern.delaunay()["ok"]
    assert len(pattern.holonomy()["generators"]) == 2 * pattern.genus + (pattern.n_vertices - 1)
    json.dumps(pattern.rigidity())
