import numpy as np
import pytest

from radial_dtn import oracle
from radial_dtn.dtn import Potential, spectrum_array
from radial_dtn.exceptions import DomainError
from radial_dtn.oracle import IntegratorConfig, convergence_study, mesh, solve_radial, solve_radial_batch


def test_single_mode_matches_closed_form():
    p = Potential(1.0, 0.5)
    assert solve_radial(p, 0) == pytest.approx(-0.14175937299894908, abs=1e-10)
    assert solve_radial(p, 1) == pytest.approx(0.9838265774123337, abs=1e-10)


def test_zero_potential_gives_n():
    for n in range(5):
        assert solve_radial(Potential(0.0, 0.5), n) == pytest.approx(n, abs=1e-12)


def test_batch_matches_scalar():
    cfg = IntegratorConfig(step_count=4000)
    g = np.array([0.2, 0.9])[:, None]
    n = np.arange(4)[None, :]
    batch = solve_radial_batch(g, 0.7, n, cfg)
    for i, gamma in enumerate((0.2, 0.9)):
        for k in range(4):
            assert batch[i, k] == solve_radial(Potential(gamma, 0.7), k, cfg)


def test_initial_scale_invariance():
    p = Potential(0.6, 0.3)
    cfg = IntegratorConfig(step_count=4000)
    base = solve_radial(p, 3, cfg)
    assert solve_radial(p, 3, cfg, initial_scale=1e-100) == pytest.approx(base, rel=1e-13)
    assert solve_radial(p, 3, cfg, initial_scale=1e100) == pytest.approx(base, rel=1e-13)


def test_high_mode_rescaling():
    # a ~ r^16 grows by 1e96 over the mesh; rescaling must keep it finite
    p = Potential(1.0, 0.9)
    v = solve_radial(p, 16, IntegratorConfig(r_start=1e-12, step_count=8000))
    assert v == pytest.approx(spectrum_array(1.0, 0.9, 16)[16], abs=1e-9)


def test_fourth_order_convergence():
    rows = convergence_study(Potential(1.0, 0.5), 1, [1000, 2000, 4000])
    assert rows[0]["error_estimate"] is None
    assert 3.7 < rows[2]["observed_order"] < 4.3
    assert rows[2]["error_estimate"] < 1e-10


def test_mesh_contains_support_radius():
    cfg = IntegratorConfig(step_count=1000)
    r = mesh(cfg, 0.37)
    assert np.any(np.isclose(r, 0.37, rtol=0, atol=1e-15))
    assert r[0] == pytest.approx(1e-6) and r[-1] == 1.0
    assert sum(oracle.split_steps(cfg, 0.37)) == 1000


def test_config_and_domain_errors():
    with pytest.raises(ValueError):
        IntegratorConfig(step_count=10)
    with pytest.raises(ValueError):
        IntegratorConfig(scheme_order=2)
    with pytest.raises(ValueError):
        IntegratorConfig(r_start=0.0)
    with pytest.raises(DomainError):
        solve_radial(Potential(1.0, 0.5), 17)
    with pytest.raises(DomainError):
        solve_radial(Potential(1.0, 0.5), -1)
    with pytest.raises(DomainError):
        solve_radial(Potential(1.0, 1e-7), 0)
    with pytest.raises(DomainError):
        convergence_study(Potential(1.0, 0.5), 0, [2000, 1000])


def test_documented_convergence_cases():
    rows = convergence_study(Potential(0.0, 0.5), 2, [1000, 2000, 4000])
    assert all(abs(r["value"] - 2) < 1e-12 for r in rows)
    rows = convergence_study(Potential(1.0, 0.5), 1, [2000, 4000, 8000])
    assert 3.5 <= rows[-1]["observed_order"] <= 4.5
    rows = convergence_study(Potential(1.0, 0.9), 8, [4000, 8000])
    assert rows[-1]["error_estimate"] < 1e-9


def test_cutoff_robustness():
    p = Potential(0.8, 0.4)
    ns = np.arange(9)
    a = solve_radial_batch(0.8, 0.4, ns, IntegratorConfig(r_start=1e-6, step_count=4000))
    b = solve_radial_batch(0.8, 0.4, ns, IntegratorConfig(r_start=5e-7, step_count=4000))
    assert np.max(np.abs(a - b)) < 1e-8
    assert solve_radial(p, 2, IntegratorConfig(step_count=4000)) == a[2]


def test_scale_factor_1e3():
    p = Potential(1.0, 0.5)
    cfg = IntegratorConfig(step_count=2000)
    assert solve_radial(p, 2, cfg, initial_scale=1e3) == pytest.approx(solve_radial(p, 2, cfg), rel=1e-14)
