import json
import math
import warnings

import numpy as np
import pytest

from h2rcmc import hyperbolic as hyp
from h2rcmc.pde import (DomainError, DomainSpec, GeodesicDisk, HypothesisWarning, LevelSet,
                        SolverError, boundary_curvature_min, build_grid, pde_residual,
                        sample_solution, solve_dirichlet, symmetry_deviation,
                        write_diagnostics_json, write_solution_csv)
from h2rcmc.pde.solver import operator_residual

from oracles import node_distance, observed_orders, ode_error, rotational_graph, solve_disk


def star_domain(radius_fn, name="star"):
    """Level set ``d(z, 0) < R(arg z)`` in the disk model."""
    return LevelSet(lambda x, y: hyp.disk_distance_array(x, y, 0.0, 0.0) - radius_fn(np.arctan2(y, x)),
                    name=name)


def ellipse(a, b):
    return LevelSet(lambda x, y: (x / a) ** 2 + (y / b) ** 2 - 1, name="ellipse")


# ---------------------------------------------------------------- domains

def test_domain_validation():
    with pytest.raises(DomainError):
        DomainSpec(GeodesicDisk((0, 0), 1.0), 7)
    with pytest.raises(DomainError):
        GeodesicDisk((0, 0), -1.0)
    with pytest.raises(hyp.GeometryError):
        GeodesicDisk((1.2, 0), 1.0)
    with pytest.raises(DomainError):
        GeodesicDisk((0, 1), 1.0, model="sphere")
    with pytest.raises(DomainError):
        LevelSet(lambda x, y: 1 + 0 * x)


def test_geodesic_disk_circle():
    c, r = GeodesicDisk((0.3, -0.2), 0.8).euclidean_circle()
    ang = np.linspace(0, 2 * np.pi, 50)
    z = c + r * np.exp(1j * ang)
    d = hyp.disk_distance_array(z.real, z.imag, 0.3, -0.2)
    assert np.allclose(d, 0.8, atol=1e-12)


def test_grid_links_hit_the_boundary():
    spec = DomainSpec(GeodesicDisk((0.1, 0.2), 0.9), 40)
    g = build_grid(spec)
    assert np.all(spec.phi(g.x, g.y) < 0)
    k, j = np.nonzero(g.nb < 0)
    step = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]])[j]
    x = g.x[k] + g.dist[k, j] * step[:, 0]
    y = g.y[k] + g.dist[k, j] * step[:, 1]
    assert np.max(np.abs(spec.phi(x, y))) < 1e-10
    assert np.all((g.dist[k, j] > 0) & (g.dist[k, j] <= g.h * (1 + 1e-12)))


# ---------------------------------------------------------------- solve

@pytest.mark.parametrize("kind", [GeodesicDisk((0, 0), 1.0), GeodesicDisk((0.2, 0.5), 0.5),
                                  GeodesicDisk((0.0, 1.0), 1.0, "halfplane"), ellipse(0.6, 0.4)])
def test_zero_mean_curvature_gives_zero(kind):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisWarning)
        sol = solve_dirichlet(DomainSpec(kind, 48), 0.0)
    assert np.all(sol.u == 0.0)
    assert pde_residual(sol) == 0.0
    assert sol.converged


def test_matches_rotational_profile():
    for n in (64, 128):
        sol = solve_disk(0.3, n)
        assert ode_error(sol) <= 0.5 * sol.grid.h ** 2


def test_off_center_disk_is_congruent():
    s = 0.8
    center = (math.tanh(s / 2), 0.0)
    for n in (64, 128):
        sol = solve_disk(0.3, n, center)
        # oracle through the distance to the new center
        assert ode_error(sol, center) <= 0.5 * sol.grid.h ** 2
    # direct comparison: translate nodes (positive s heads toward -1) onto the centered disk
    off, ref = solve_disk(0.3, 128, center), solve_disk(0.3, 128)
    back = [hyp.translate_along_gamma(hyp.SpacePoint(hyp.DiskPoint(x, y), u), s)
            for x, y, u in zip(off.grid.x, off.grid.y, off.u)]
    assert all(q.t == u for q, u in zip(back, off.u))
    bx = np.array([q.base.x for q in back])
    by = np.array([q.base.y for q in back])
    pulled = sample_solution(ref, bx, by)
    ok = np.isfinite(pulled)
    assert ok.all()
    assert np.max(np.abs(off.u - pulled)) <= 2 * ref.grid.h ** 2


def test_halfplane_model_agrees():
    sol = solve_disk(0.3, 96, (0.0, 1.0), 1.0, "halfplane")
    assert ode_error(sol, (0.0, 1.0)) <= 0.5 * sol.grid.h ** 2
    # transport to the disk model and compare with the disk solve
    ref = solve_disk(0.3, 128)
    w = hyp.halfplane_to_disk_array(sol.grid.x + 1j * sol.grid.y)
    pulled = sample_solution(ref, w.real, w.imag)
    assert np.isfinite(pulled).all()
    assert np.max(np.abs(sol.u - pulled)) <= 2 * ref.grid.h ** 2


def test_sign_and_maximum_principle():
    sol = solve_disk(0.3, 64)
    assert np.all(sol.u < 0)
    k = int(np.argmax(np.abs(sol.u)))
    assert np.all(sol.grid.nb[k] >= 0)
    assert node_distance(sol)[k] < 2 * sol.grid.h
    neg = solve_dirichlet(DomainSpec(GeodesicDisk((0, 0), 1.0), 64), -0.3)
    assert np.allclose(neg.u, -sol.u, rtol=0, atol=1e-12)


def test_continuation_trace():
    sol = solve_disk(0.5, 64)
    ts = [t for t, _, _ in sol.continuation_trace]
    assert all(b > a for a, b in zip(ts, ts[1:])) and ts[-1] == 1.0
    assert all(r <= sol.tol for _, _, r in sol.continuation_trace)
    assert sol.residual_norm == sol.continuation_trace[-1][2] <= 1e-8


def test_solution_is_zero_outside():
    sol = solve_disk(0.3, 64)
    U = sol.u_grid()
    assert np.all(U[~sol.grid.inside] == 0.0)
    assert U.shape == sol.grid.inside.shape


def test_residual_detects_noise():
    sol = solve_disk(0.3, 64)
    base = pde_residual(sol)
    assert base <= 1e-8
    noisy = sol.u + 1e-3 * np.random.default_rng(7).standard_normal(sol.u.shape)
    assert np.max(np.abs(operator_residual(sol.grid, sol.H, noisy))) >= 10 * base


def test_truncation_error_is_second_order():
    # the discrete operator applied to the exact solution on a fixed interior region
    errs = []
    for n in (64, 128, 256):
        sol = solve_disk(0.3, n)
        rho = node_distance(sol)
        res = operator_residual(sol.grid, 0.3, rotational_graph(0.3, 1.0)(rho))
        errs.append(np.max(np.abs(res[rho <= 0.7])))
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    assert all(3.5 <= q <= 4.5 for q in ratios)


def test_pde_residual_interior_only():
    sol = solve_disk(0.3, 64)
    assert pde_residual(sol, interior_only=True) <= pde_residual(sol) <= 1e-8


@pytest.mark.parametrize("H", [0.1, 0.25, 0.4, 0.5])
def test_rotational_oracle_order(H):
    errs = [ode_error(solve_disk(H, n)) for n in (64, 128)]
    assert observed_orders(errs)[0] >= 1.8


def test_large_H_guard():
    spec = DomainSpec(GeodesicDisk((0, 0), 0.5), 32)
    with pytest.raises(ValueError):
        solve_dirichlet(spec, 0.6)
    with pytest.warns(HypothesisWarning):
        sol = solve_dirichlet(spec, 0.6, allow_large_H=True)
    assert sol.converged


def test_invalid_arguments():
    spec = DomainSpec(GeodesicDisk((0, 0), 0.5), 32)
    with pytest.raises(ValueError):
        solve_dirichlet(spec, float("nan"))
    with pytest.raises(ValueError):
        solve_dirichlet(spec, 0.2, tol=0.0)


def test_continuation_failure_carries_trace():
    # a graph with H = 3 cannot span a disk of radius 2: the sphere of that
    # curvature has radius about 0.33
    spec = DomainSpec(GeodesicDisk((0, 0), 2.0), 24)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisWarning)
        with pytest.raises(SolverError) as info:
            solve_dirichlet(spec, 3.0, allow_large_H=True)
    trace = info.value.trace
    assert isinstance(trace, list)
    assert all(0 < t < 1 for t, _, _ in trace)


# ---------------------------------------------------------------- curvature

@pytest.mark.parametrize("center, R, model", [((0, 0), 0.5, "disk"), ((0, 0), 1.0, "disk"),
                                              ((0.3, -0.4), 2.0, "disk"), ((0.5, 2.0), 0.7, "halfplane")])
def test_circle_curvature(center, R, model):
    k = boundary_curvature_min(DomainSpec(GeodesicDisk(center, R, model)), 128)
    assert k == pytest.approx(1 / math.tanh(R), abs=1e-6)


def test_large_circles_approach_one():
    ks = [boundary_curvature_min(DomainSpec(GeodesicDisk((0, 0), R)), 256) for R in (2.0, 4.0, 6.0)]
    assert all(k > 1 for k in ks)
    assert ks[0] > ks[1] > ks[2]
    assert ks[2] - 1 < 1e-4


def test_ellipse_curvature_matches_parametric_formula():
    a, b = 0.9, 0.2
    t = np.linspace(0, 2 * np.pi, 200001)
    x, y = a * np.cos(t), b * np.sin(t)
    kE = a * b / (a * a * np.sin(t) ** 2 + b * b * np.cos(t) ** 2) ** 1.5
    nx, ny = b * np.cos(t), a * np.sin(t)
    nn = np.hypot(nx, ny)
    q = 1 - x * x - y * y
    want = np.min((kE + 2 * (x * nx + y * ny) / nn / q) * q / 2)
    got = boundary_curvature_min(DomainSpec(ellipse(a, b)), 256)
    assert got == pytest.approx(want, abs=1e-6)
    assert got < 1


def test_low_curvature_warns():
    with pytest.warns(HypothesisWarning):
        solve_dirichlet(DomainSpec(ellipse(0.9, 0.2), 32), 0.1)


def test_degenerate_boundary_raises():
    degenerate = LevelSet(lambda x, y: (x * x + y * y - 0.25) ** 3)
    with pytest.raises(DomainError):
        boundary_curvature_min(DomainSpec(degenerate), 64)
    with pytest.raises(ValueError):
        boundary_curvature_min(DomainSpec(GeodesicDisk()), 4)


# ---------------------------------------------------------------- symmetry

# off-axis reflections sample the solution between nodes, so the deviation
# carries the O(h^2) bilinear interpolation error on top of the solve error

@pytest.mark.parametrize("angle", [0.0, 0.7, math.pi / 2, 2.0])
def test_circle_symmetric_about_diameters(angle):
    devs = [symmetry_deviation(solve_disk(0.3, n), (0.0, 0.0), angle) for n in (64, 128)]
    h = solve_disk(0.3, 128).grid.h
    assert devs[1] <= 2 * h * h
    assert devs[1] <= devs[0] / 3 or devs[0] < 1e-14


def test_off_center_circle_symmetric_about_geodesics_through_center():
    center = (math.tanh(0.4), 0.0)
    sol = solve_disk(0.3, 128, center)
    for angle in (0.0, 1.1):
        assert symmetry_deviation(sol, center, angle) <= 3 * sol.grid.h ** 2


def test_sampling_is_second_order_to_the_boundary():
    rng = np.random.default_rng(1)
    r = np.sqrt(rng.random(3000)) * math.tanh(0.5)
    a = 2 * np.pi * rng.random(3000)
    x, y = r * np.cos(a), r * np.sin(a)
    exact = rotational_graph(0.3, 1.0)(hyp.disk_distance_array(x, y, 0.0, 0.0))
    errs = []
    for n in (64, 128, 256):
        got = sample_solution(solve_disk(0.3, n), x, y)
        assert not np.any(np.isnan(got))
        errs.append(np.max(np.abs(got - exact)))
    assert min(observed_orders(errs)) >= 1.8


def test_mirror_domain_symmetric():
    dom = star_domain(lambda t: 0.9 + 0.15 * np.cos(t) + 0.1 * np.cos(2 * t), "mirror")
    sol = solve_dirichlet(DomainSpec(dom, 96), 0.3)
    assert symmetry_deviation(sol, (0.0, 0.0), 0.0) <= 5 * ode_error(solve_disk(0.3, 96))


def test_asymmetric_reflection_rejected_or_large():
    dom = star_domain(lambda t: 0.9 + 0.15 * np.cos(t) + 0.1 * np.sin(2 * t) + 0.05 * np.sin(3 * t))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisWarning)
        sol = solve_dirichlet(DomainSpec(dom, 64), 0.3)
    with pytest.raises(DomainError):
        symmetry_deviation(sol, (0.0, 0.0), 0.0)
    dev = symmetry_deviation(sol, (0.0, 0.0), 0.0, strict=False)
    assert dev > 0.1 * np.max(np.abs(sol.u))


def test_reflection_off_center_raises():
    sol = solve_disk(0.3, 64)
    with pytest.raises(DomainError):
        symmetry_deviation(sol, (0.3, 0.0), math.pi / 2)


# ---------------------------------------------------------------- export

def test_solution_csv(tmp_path):
    sol = solve_disk(0.3, 64)
    path = tmp_path / "u.csv"
    write_solution_csv(sol, path, header=("h2rcmc solve",))
    lines = path.read_text().splitlines()
    assert lines[0] == "# h2rcmc solve" and lines[1] == "x,y,u"
    data = np.loadtxt(path, delimiter=",", comments="#", skiprows=2)
    assert np.array_equal(data[:, 2], sol.u)
    assert np.array_equal(data[:, 0], sol.grid.x)
    again = tmp_path / "v.csv"
    write_solution_csv(sol, again, header=("h2rcmc solve",))
    assert path.read_bytes() == again.read_bytes()


def test_diagnostics_json(tmp_path):
    sol = solve_disk(0.3, 64)
    path = tmp_path / "d.json"
    write_diagnostics_json(sol, path, provenance={"command": "x"})
    doc = json.loads(path.read_text())
    assert doc["provenance"] == {"command": "x"}
    assert doc["residual_norm"] == sol.residual_norm
    assert [e["t"] for e in doc["continuation_trace"]] == [t for t, _, _ in sol.continuation_trace]
    assert doc["kernel"] in ("cython", "python")
