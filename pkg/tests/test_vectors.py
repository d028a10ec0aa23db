import numpy as np
import pytest

from gl3ff.bethe import BetheRoots, VACUUM
from gl3ff.chain import ChainSpec, monodromy, vacuum_ratios, vacuum_state, zero_modes
from gl3ff.errors import SizeError, TwistError
from gl3ff.kernels import f, g
from gl3ff.vectors import (
    bethe_vector,
    dual_on_shell_residual,
    dual_vector,
    infinite_root_ket,
    on_shell_residual,
    zero_mode_action,
)


def test_empty_sets_give_vacuum(chain3):
    assert np.array_equal(bethe_vector(chain3, (), ()), vacuum_state(chain3))
    assert np.array_equal(dual_vector(chain3, (), ()), vacuum_state(chain3))


def test_single_u_root(chain3):
    u = 0.3 + 0.2j
    expected = monodromy(chain3, u).block(1, 2) @ vacuum_state(chain3)
    assert np.allclose(bethe_vector(chain3, (u,), ()), expected, atol=1e-14)
    expected_dual = vacuum_state(chain3) @ monodromy(chain3, u).block(2, 1)
    assert np.allclose(dual_vector(chain3, (u,), ()), expected_dual, atol=1e-14)


def test_two_term_expansion_golden():
    # Independent hand expansion at one first- and one second-level root:
    # f(v,u)^{-1} [ T12(u) T23(v) + g(v,u) T13(u) ] applied to the vacuum.
    spec = ChainSpec(2, (0.15 + 0.05j, -0.25 - 0.1j), 1.0)
    u, v = 0.4 + 0.3j, -0.6 + 0.7j
    m_u, m_v = monodromy(spec, u), monodromy(spec, v)
    vac = vacuum_state(spec)
    expected = (
        m_u.block(1, 2) @ (m_v.block(2, 3) @ vac) + g(v, u, 1.0) * (m_u.block(1, 3) @ vac)
    ) / f(v, u, 1.0)
    assert np.allclose(bethe_vector(spec, (u,), (v,)), expected, atol=1e-13)


def test_dual_pairing_against_double_expansion():
    spec = ChainSpec(2, (0.15 + 0.05j, -0.25 - 0.1j), 1.0)
    u, up = 0.4 + 0.3j, -0.7 + 0.2j
    bra = dual_vector(spec, (u,), ())
    ket = bethe_vector(spec, (up,), ())
    explicit = vacuum_state(spec) @ monodromy(spec, u).block(2, 1) @ (
        monodromy(spec, up).block(1, 2) @ vacuum_state(spec)
    )
    assert complex(bra @ ket) == pytest.approx(complex(explicit), rel=1e-13)


def test_permutation_invariance(chain3):
    rng = np.random.default_rng(8)
    u = tuple(rng.standard_normal(2) + 1j * rng.standard_normal(2))
    v = tuple(rng.standard_normal(2) + 1j * rng.standard_normal(2))
    base = bethe_vector(chain3, u, v)
    swapped = bethe_vector(chain3, (u[1], u[0]), (v[1], v[0]))
    assert np.linalg.norm(base - swapped) / np.linalg.norm(base) <= 1e-10


def test_cardinality_cap(chain3):
    with pytest.raises(SizeError):
        bethe_vector(chain3, (0.1, 0.2, 0.3, 0.4, 0.5), ())


def test_on_shell_residuals(chain2_homogeneous, solutions):
    assert on_shell_residual(chain2_homogeneous, VACUUM) <= 1e-13
    roots = solutions(chain2_homogeneous, 1, 0)[0]
    assert on_shell_residual(chain2_homogeneous, roots) <= 1e-10
    assert dual_on_shell_residual(chain2_homogeneous, roots) <= 1e-10
    off = BetheRoots((roots.u[0] + 0.1,), ())
    assert on_shell_residual(chain2_homogeneous, off) >= 1e-3


def test_diagonal_actions_generic_roots(chain3):
    roots = BetheRoots((0.31 + 0.11j, -0.72 + 0.41j), (0.22 - 0.52j,), residual=1, on_shell=False)
    for mode, eig in (((1, 1), 3 - 2), ((2, 2), 2 - 1), ((3, 3), 0 + 1)):
        rep = zero_mode_action(chain3, mode, roots)
        assert rep.defect <= 1e-10
        assert rep.extras["eigenvalue"] == eig
        rep_bra = zero_mode_action(chain3, mode, roots, side="bra")
        assert rep_bra.defect <= 1e-10


def test_raising_actions_converge(chain3):
    roots = BetheRoots((0.31 + 0.11j,), (), residual=1, on_shell=False)
    for mode in ((1, 2), (2, 3)):
        rep = zero_mode_action(chain3, mode, roots, w_mags=(1e4, 1e5))
        (m1, d1), (m2, d2) = rep.extras["w_defects"]
        assert d2 <= 1e-4
        assert d2 / d1 == pytest.approx(m1 / m2, rel=0.5)  # O(1/w)


def test_raising_both_sets_converges_off_diagonal(chain3):
    # the double-raising limit is checked just off the singular diagonal, so
    # the attainable accuracy is coarser than for the single-set raisings
    roots = BetheRoots((0.31 + 0.11j,), (), residual=1, on_shell=False)
    rep = zero_mode_action(chain3, (1, 3), roots, w_mags=(1e3, 1e4))
    (_, d1), (_, d2) = rep.extras["w_defects"]
    assert d1 <= 5e-3 and d2 <= 1e-3
    assert d2 < d1


def test_lowering_action_explicit_sum(chain3):
    roots = BetheRoots((0.31 + 0.11j, -0.72 + 0.41j), (0.22 - 0.52j,), residual=1, on_shell=False)
    for mode in ((2, 1), (3, 2)):
        assert zero_mode_action(chain3, mode, roots).defect <= 1e-10


def test_raising_shifts_diagonal_weights(chain3):
    # weight additivity: the raised state is again a diagonal eigenvector,
    # with the first weight lowered and the middle one raised by one
    zm = zero_modes(chain3)
    base = bethe_vector(chain3, (0.31 + 0.11j,), (0.22 - 0.52j,))
    raised = zm.mode(1, 2) @ base  # (a, b) = (1, 1) -> (2, 1)
    L = chain3.length
    for mode, eig in (((1, 1), L - 2), ((2, 2), 2 - 1), ((3, 3), 0 + 1)):
        defect = np.linalg.norm(zm.mode(*mode) @ raised - eig * raised)
        assert defect / np.linalg.norm(raised) <= 1e-12


def test_singular_weight_vectors(chain3, solutions):
    roots = solutions(chain3, 1, 0)[0]
    assert zero_mode_action(chain3, (2, 1), roots).defect <= 1e-8
    assert zero_mode_action(chain3, (3, 2), roots).defect <= 1e-8
    assert zero_mode_action(chain3, (1, 2), roots, side="bra").defect <= 1e-8
    assert zero_mode_action(chain3, (2, 3), roots, side="bra").defect <= 1e-8


def test_bra_raising_converges(chain3, solutions):
    roots = solutions(chain3, 1, 0)[0]
    rep = zero_mode_action(chain3, (2, 1), roots, side="bra", w_mags=(1e4, 1e5))
    assert rep.extras["w_defects"][-1][1] <= 1e-4


def test_infinite_root_actions(chain3, solutions):
    roots = solutions(chain3, 1, 0)[0]
    rep = zero_mode_action(chain3, (2, 1), roots, infinite_root="u")
    assert rep.defect <= 1e-10
    assert rep.extras["coefficient"] == pytest.approx(chain3.length + 0 - 2 * 1)
    rep = zero_mode_action(chain3, (2, 1), roots, infinite_root="v")
    assert rep.defect <= 1e-10
    rep = zero_mode_action(chain3, (2, 3), roots, side="bra", infinite_root="v")
    assert rep.defect <= 1e-10
    assert rep.extras["coefficient"] == pytest.approx(1 - 0 - 0)


def test_infinite_root_state_matches_numeric_limit(chain3, solutions):
    roots = solutions(chain3, 1, 0)[0]
    state = infinite_root_ket(chain3, roots.u, roots.v, "u")
    w = 1e6 * np.exp(0.31j)
    approx = w * bethe_vector(chain3, tuple(roots.u) + (w,), roots.v)
    assert np.linalg.norm(state - approx) / np.linalg.norm(state) <= 1e-5


def test_inconsistent_infinite_context(chain3, solutions):
    roots = solutions(chain3, 1, 0)[0]
    with pytest.raises(ValueError):
        zero_mode_action(chain3, (3, 2), roots, infinite_root="u")


def test_actions_require_trivial_twist(chain3_twisted):
    with pytest.raises(TwistError):
        zero_mode_action(chain3_twisted, (2, 2), VACUUM)
