"""Node selection: exchange optimality, cardinal bounds, norming constants.

Oracle strategy: on coarse grids the optimal node set is found by exhaustive
enumeration over all index subsets and compared against the exchange result;
on fine grids we check the certificates (swap optimality, cardinal sup,
norming inequality on sampled polynomials) rather than node identity.
"""

import itertools

import numpy as np
import pytest

from normmesh import meshgen, polyspace, sets
from normmesh.errors import NonDeterminingError, ValidationError
from normmesh.meshgen import (grid_norming_constant, lagrange, make_node_set,
                              norming_certificate, select_nodes)
from normmesh.polyspace import CoefVector, evaluate, poly_space, vandermonde


def brute_force_max_det(space, grid_points):
    """Enumerate all node subsets; return (best |det|, best index tuple)."""
    best = (-1.0, None)
    for combo in itertools.combinations(range(grid_points.shape[0]), space.dim):
        v = vandermonde(space, grid_points[list(combo)])
        a = abs(np.linalg.det(v))
        if a > best[0]:
            best = (a, combo)
    return best


class TestIntervalSelection:
    def test_degree_one_picks_endpoints(self):
        space = poly_space(1, 1)
        model = sets.box([(-1.0, 1.0)], 2001)
        ns = select_nodes(space, model)
        assert ns.swap_optimal
        assert sorted(ns.nodes.ravel().tolist()) == [-1.0, 1.0]
        assert ns.lagrange_sup <= 1.0 + ns.tol_swap
        assert abs(grid_norming_constant(ns, model) - 1.0) <= 1e-12

    def test_degree_two_picks_symmetric_triple(self):
        space = poly_space(1, 2)
        model = sets.box([(-1.0, 1.0)], 2001)
        ns = select_nodes(space, model)
        assert ns.swap_optimal
        assert sorted(ns.nodes.ravel().tolist()) == [-1.0, 0.0, 1.0]
        # sum of |cardinals| peaks at +-1/2 with value 5/4
        assert abs(grid_norming_constant(ns, model) - 1.25) <= 1e-12

    def test_degree_zero_single_node(self):
        space = poly_space(1, 0)
        model = sets.box([(-1.0, 1.0)], 101)
        ns = select_nodes(space, model)
        assert ns.nodes.shape == (1, 1)
        assert ns.swap_optimal
        assert abs(grid_norming_constant(ns, model) - 1.0) <= 1e-12

    def test_matches_exhaustive_search_on_coarse_grid(self):
        space = poly_space(1, 2)
        model = sets.box([(-1.0, 1.0)], 21)
        grid_points = sets.grid(model)
        best_det, best_combo = brute_force_max_det(space, grid_points)
        assert best_det == pytest.approx(2.0, abs=1e-12)
        assert set(best_combo) == {0, 10, 20}
        ns = select_nodes(space, model)
        got = abs(np.linalg.det(vandermonde(space, ns.nodes)))
        assert got == pytest.approx(best_det, rel=1e-12)

    def test_exhaustive_search_degree_three(self):
        space = poly_space(1, 3)
        model = sets.box([(-1.0, 1.0)], 11)
        grid_points = sets.grid(model)
        best_det, _ = brute_force_max_det(space, grid_points)
        ns = select_nodes(space, model)
        got = abs(np.linalg.det(vandermonde(space, ns.nodes)))
        # exchange reaches swap-local optimality; on this grid it is global
        assert ns.swap_optimal
        assert got == pytest.approx(best_det, rel=1e-12)

    def test_sweep_budget_exhaustion_reported(self):
        space = poly_space(1, 5)
        model = sets.box([(-1.0, 1.0)], 2001)
        ns = select_nodes(space, model, max_sweeps=1)
        assert not ns.swap_optimal
        assert ns.sweeps == 1
        done = select_nodes(space, model)
        assert done.swap_optimal
        assert done.sweeps < meshgen.DEFAULT_MAX_SWEEPS
        assert done.lagrange_sup <= 1.0 + done.tol_swap

    def test_log_abs_det_conditioned_basis_nonpositive(self):
        # any dim-row submatrix of an orthonormal-column Q has |det| <= 1
        for d in (1, 2, 4, 6):
            ns = select_nodes(poly_space(1, d), sets.box([(-1.0, 1.0)], 301))
            assert ns.log_abs_det <= 1e-12


class TestPlaneSelection:
    def test_quadratics_on_square(self):
        space = poly_space(2, 2)
        model = sets.box([(-1.0, 1.0), (-1.0, 1.0)], 21)
        ns = select_nodes(space, model)
        assert ns.swap_optimal
        assert ns.nodes.shape == (6, 2)
        assert len(set(ns.node_indices)) == 6
        lam = grid_norming_constant(ns, model)
        assert 1.0 <= lam <= space.dim * (1.0 + ns.tol_swap)

    def test_norming_inequality_on_sampled_polynomials(self):
        space = poly_space(2, 3)
        model = sets.box([(-1.0, 1.0), (-1.0, 1.0)], 31)
        ns = select_nodes(space, model)
        lam = grid_norming_constant(ns, model)
        grid_points = sets.grid(model)
        rng = np.random.default_rng(11)
        for _ in range(200):
            f = CoefVector(space, rng.standard_normal(space.dim))
            grid_sup = np.abs(evaluate(f, grid_points)).max()
            node_sup = np.abs(evaluate(f, ns.nodes)).max()
            assert grid_sup <= lam * node_sup * (1.0 + 1e-12)

    def test_ball_grid_selection(self):
        space = poly_space(2, 2)
        model = sets.ball([0.0, 0.0], 1.0, 15)
        ns = select_nodes(space, model)
        assert ns.swap_optimal
        assert np.sqrt((ns.nodes ** 2).sum(axis=1)).max() <= 1.0 + 1e-12


class TestExplicitNodes:
    def test_known_triple_certifies_optimal(self):
        space = poly_space(1, 2)
        model = sets.box([(-1.0, 1.0)], 21)
        ns = make_node_set(space, model, [0, 10, 20])
        assert ns.swap_optimal
        np.testing.assert_array_equal(ns.nodes.ravel(), [-1.0, 0.0, 1.0])
        assert abs(grid_norming_constant(ns, model) - 1.25) <= 1e-12

    def test_poor_triple_flagged_suboptimal(self):
        space = poly_space(1, 2)
        model = sets.box([(-1.0, 1.0)], 21)
        ns = make_node_set(space, model, [8, 10, 12])
        assert not ns.swap_optimal
        assert ns.lagrange_sup > 1.0 + ns.tol_swap

    def test_index_validation(self):
        space = poly_space(1, 2)
        model = sets.box([(-1.0, 1.0)], 21)
        with pytest.raises(ValidationError):
            make_node_set(space, model, [0, 10])
        with pytest.raises(ValidationError):
            make_node_set(space, model, [0, 10, 10])
        with pytest.raises(ValidationError):
            make_node_set(space, model, [0, 10, 21])


class TestCardinalSystem:
    def test_center_cardinal_is_one_minus_x_squared(self):
        space = poly_space(1, 2)
        model = sets.box([(-1.0, 1.0)], 2001)
        system = lagrange(select_nodes(space, model))
        nodes = system.node_set.nodes.ravel()
        center_col = int(np.argmin(np.abs(nodes)))
        np.testing.assert_allclose(
            system.coef[:, center_col], [1.0, 0.0, -1.0], atol=1e-12)
        assert system.residual <= 1e-8

    def test_cardinal_delta_property(self):
        space = poly_space(2, 2)
        model = sets.box([(-1.0, 1.0), (-1.0, 1.0)], 15)
        ns = select_nodes(space, model)
        system = lagrange(ns)
        values = vandermonde(space, ns.nodes) @ system.coef
        np.testing.assert_allclose(values, np.eye(space.dim), atol=1e-9)

    def test_monomial_route_agrees_with_conditioned_route(self):
        # the norming constant must not depend on the working basis
        space = poly_space(1, 4)
        model = sets.box([(-1.0, 1.0)], 201)
        ns = select_nodes(space, model)
        lam = grid_norming_constant(ns, model)
        system = lagrange(ns)
        grid_points = sets.grid(model)
        card = vandermonde(space, grid_points) @ system.coef
        lam_monomial = np.abs(card).sum(axis=1).max()
        assert lam == pytest.approx(lam_monomial, rel=1e-9)
        assert norming_certificate(system, model) == lam

    def test_certificate_requires_matching_grid(self):
        space = poly_space(1, 2)
        ns = select_nodes(space, sets.box([(-1.0, 1.0)], 21))
        with pytest.raises(ValidationError):
            grid_norming_constant(ns, sets.box([(-1.0, 1.0)], 41))


class TestRankGuards:
    def test_grid_smaller_than_dimension(self):
        space = poly_space(1, 5)
        model = sets.from_points([[-1.0], [-0.3], [0.3], [1.0]])
        with pytest.raises(ValidationError):
            select_nodes(space, model)

    def test_nondetermining_grid_names_rank(self):
        # plane quadratics restricted to the x-axis span only 1, x1, x1^2
        space = poly_space(2, 2)
        model = sets.from_points([[x, 0.0] for x in np.linspace(-1.0, 1.0, 10)])
        with pytest.raises(NonDeterminingError) as info:
            select_nodes(space, model)
        assert info.value.rank == 3
        assert info.value.dim == 6

    def test_parameter_validation(self):
        space = poly_space(1, 2)
        model = sets.box([(-1.0, 1.0)], 21)
        with pytest.raises(ValidationError):
            select_nodes(space, model, max_sweeps=0)
        with pytest.raises(ValidationError):
            select_nodes(space, model, tol_swap=0.0)


class TestDeterminism:
    def test_repeat_runs_identical(self):
        space = poly_space(2, 3)
        model = sets.box([(-1.0, 1.0), (0.0, 2.0)], 17)
        a = select_nodes(space, model, seed=5)
        b = select_nodes(space, model, seed=5)
        assert a.node_indices == b.node_indices
        assert a.nodes.tobytes() == b.nodes.tobytes()
        assert a.log_abs_det == b.log_abs_det
        assert a.lagrange_sup == b.lagrange_sup

    def test_indices_point_into_grid(self):
        space = poly_space(1, 3)
        model = sets.box([(-1.0, 1.0)], 51)
        ns = select_nodes(space, model)
        grid_points = sets.grid(model)
        np.testing.assert_array_equal(grid_points[list(ns.node_indices)], ns.nodes)

    def test_json_dict_shape(self):
        space = poly_space(1, 2)
        ns = select_nodes(space, sets.box([(-1.0, 1.0)], 21))
        payload = ns.to_json_dict()
        assert set(payload) == {"degree", "ambient_dim", "points",
                                "log_abs_det", "swap_optimal", "lagrange_sup"}
        assert payload["degree"] == 2
        assert payload["ambient_dim"] == 1
        assert payload["swap_optimal"] is True
        assert len(payload["points"]) == 3
