import numpy as np
import pytest

from gl3ff.bethe import (
    VACUUM,
    BetheRoots,
    SolveConfig,
    bethe_residual,
    bethe_residual_vector,
    newton_refine,
    solve_bethe,
    tau,
)
from gl3ff.chain import ChainSpec, transfer_matrix
from gl3ff.errors import ConvergenceError, DegenerateJacobianError
from gl3ff.vectors import bethe_vector, on_shell_residual


def test_vacuum_is_on_shell(chain3):
    assert bethe_residual_vector(chain3, VACUUM).size == 0
    assert bethe_residual(chain3, VACUUM) == 0.0


def test_closed_form_root(chain2_homogeneous):
    # the single first-level equation reduces to ((u+c)/u)^2 = 1, so u = -c/2
    roots = BetheRoots((-0.5,), ())
    assert bethe_residual(chain2_homogeneous, roots) <= 1e-14
    off = BetheRoots((-0.4,), (), residual=1.0, on_shell=False)
    assert bethe_residual(chain2_homogeneous, off) >= 1e-2


def test_solver_finds_closed_form_root(chain2_homogeneous):
    sols = solve_bethe(chain2_homogeneous, 1, 0, SolveConfig(), np.random.default_rng(0))
    assert len(sols) == 1
    assert sols[0].u[0] == pytest.approx(-0.5, abs=1e-10)


def test_solver_vacuum(chain3):
    assert solve_bethe(chain3, 0, 0) == [VACUUM]


def test_solver_dedup_and_certification(chain3, solutions):
    sols = solutions(chain3, 1, 0)
    assert len(sols) == 2  # the first-level equation has degree L - 1 = 2
    keys = {s.sorted_key() for s in sols}
    assert len(keys) == len(sols)
    for s in sols:
        assert s.on_shell and bethe_residual(chain3, s) <= 1e-12
        assert on_shell_residual(chain3, s) <= 1e-8


def test_solver_cross_validation_twisted(chain3_twisted, solutions):
    for a, b in ((1, 0), (1, 1), (2, 1)):
        for s in solutions(chain3_twisted, a, b):
            assert bethe_residual(chain3_twisted, s) <= 1e-12
            assert on_shell_residual(chain3_twisted, s) <= 1e-8


def test_degenerate_sector_returns_nothing(chain3):
    # the second-level equation for (0,1) is identically satisfied untwisted:
    # a continuum, not isolated roots; isolation certification rejects it
    assert solve_bethe(chain3, 0, 1, SolveConfig(n_seeds=10)) == []
    with pytest.raises((DegenerateJacobianError, ConvergenceError)):
        newton_refine(chain3, [], [0.3 + 0.2j])


def test_newton_quadratic_convergence(chain2_homogeneous):
    _, trace = newton_refine(chain2_homogeneous, [-0.43 + 0.05j], [])
    ratios = trace.quad_ratios()
    assert ratios, "expected a multi-step trace"
    assert all(r < 1e3 for r in ratios[1:])


def test_tau_vacuum(chain3_twisted):
    from gl3ff.chain import vacuum_ratios

    ratios = vacuum_ratios(chain3_twisted)
    z = 0.4 + 0.8j
    expected = ratios.r1(z) + 1.0 + ratios.r3(z)
    assert tau(chain3_twisted, z, VACUUM) == pytest.approx(expected, rel=1e-13)


def test_tau_golden_and_matrix_eigenvalue(chain2_homogeneous):
    roots = BetheRoots((-0.5,), ())
    # hand evaluation: r1(1) = 4, f(-1/2, 1) = 1/3, f(1, -1/2) = 5/3
    assert tau(chain2_homogeneous, 1.0, roots) == pytest.approx(4.0, rel=1e-13)
    eig = np.linalg.eigvals(transfer_matrix(chain2_homogeneous, 1.0))
    assert min(abs(eig - 4.0)) <= 1e-8


def test_tau_infinite_root_reduction(chain2_homogeneous):
    z = 1.0 + 0.5j
    big = BetheRoots((1e8,), (), residual=0.0, on_shell=True)
    assert abs(tau(chain2_homogeneous, z, big) - tau(chain2_homogeneous, z, VACUUM)) <= 1e-6


def test_tau_pole_cancellation_on_shell(chain3, solutions):
    roots = solutions(chain3, 1, 0)[0]
    u = roots.u[0]
    near = abs(tau(chain3, u + 1e-6, roots))
    nearer = abs(tau(chain3, u + 1e-7, roots))
    assert near < 1e3 and nearer < 1e3
    assert nearer / near < 5.0  # bounded, no pole growth


def test_branch_ambiguity_reported():
    from gl3ff.errors import BranchAmbiguityError

    spec = ChainSpec(1, (0.0,), 1.0)
    # at u = -c the ratio function vanishes and no log branch is consistent
    with pytest.raises(BranchAmbiguityError):
        bethe_residual(spec, BetheRoots((-1.0,), (), residual=1.0, on_shell=False))


def test_solve_config_validation():
    with pytest.raises(ValueError):
        SolveConfig(tol=0.0)
    with pytest.raises(ValueError):
        SolveConfig(damping=1.5)
    with pytest.raises(ValueError):
        SolveConfig(seed_strategy="nope")


def test_seed_strategies(chain2_homogeneous):
    known = [((-0.47 + 0.02j,), ())]
    cfg = SolveConfig(seed_strategy="perturbed-known", known_roots=known, n_seeds=8)
    sols = solve_bethe(chain2_homogeneous, 1, 0, cfg, np.random.default_rng(4))
    assert sols and sols[0].u[0] == pytest.approx(-0.5, abs=1e-10)
    cfg = SolveConfig(seed_strategy="user-supplied", known_roots=known)
    sols = solve_bethe(chain2_homogeneous, 1, 0, cfg, np.random.default_rng(4))
    assert sols and sols[0].u[0] == pytest.approx(-0.5, abs=1e-10)
