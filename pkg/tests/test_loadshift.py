"""Tests for load-shifting plans."""

import functools

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from coldseq.core.config import ColdSeqConfig
from coldseq.core.context import LoadProfile
from coldseq.core.errors import (
    InfeasibleStageError,
    ParameterError,
    SearchSpaceError,
    SurplusCapError,
)
from coldseq.core.fleet import prop3_ratios
from coldseq.core.loadshift import (
    dp_slack,
    fixed_order_extremes,
    fixed_order_trajectory,
    infeasible_stages,
    optimal_shift,
    required_carry,
    savings_gap,
    static_trajectory,
    tiny_oracle,
    worst_case_profiles,
)
from coldseq.core.static import all_orders
from coldseq.io import bundled_fleet

from .strategies import plant_profiles

OPTIMAL_3100 = 124.0 + 142.0 + 2715.0 * 138.0 / 2780.0


class TestFeasibilityHelpers:
    """Tests for carry and stage-feasibility helpers."""

    def test_required_carry(self, c1_fleet):
        """Test the surplus that must be banked ahead of an overload."""
        p = LoadProfile([0.0, 0.0, 4000.0])
        np.testing.assert_allclose(required_carry(c1_fleet, p), [0.0, 0.0, 1000.0, 0.0])

    def test_infeasible_stages(self, c1_fleet):
        """Test prefixes that exceed cumulative capacity."""
        p = LoadProfile([4000.0, 0.0, 7000.0])
        assert infeasible_stages(c1_fleet, p) == [0, 2]

    def test_dp_slack(self, c1_fleet):
        """Test the grid error budget."""
        assert dp_slack(c1_fleet, 10.0) == pytest.approx(10.0 * 124.0 / 220.0)


class TestOptimalShift:
    """Tests for the load-shifting dynamic program."""

    def test_full_capacity_profile(self, butterball):
        """Test that a flat full-capacity profile leaves nothing to shift."""
        plan = optimal_shift(butterball, LoadProfile.constant(9237.0, 6))

        assert plan.label == 'optimal_ls'
        assert plan.avg_power == pytest.approx(1539.0)
        np.testing.assert_allclose(plan.shifted, 9237.0)

    def test_zero_profile(self, butterball):
        """Test that zero demand costs nothing."""
        plan = optimal_shift(butterball, LoadProfile.constant(0.0, 5))
        assert plan.avg_power == 0.0
        assert all(a.on_ids() == [] for a in plan.assignments)

    def test_small_instance(self, small_fleet):
        """Test a hand-checked instance: pre-cool at the cheapest load."""
        p = LoadProfile([0.0, 30.0, 60.0, 10.0])
        plan = optimal_shift(
            small_fleet, p, 10.0, stage_policy='optimal', decision_mode='grid', surplus_cap=1000.0
        )

        np.testing.assert_allclose(plan.shifted, [30.0, 30.0, 30.0, 10.0])
        assert plan.avg_power == pytest.approx(29.0 / 4)

    def test_plan_is_feasible(self, butterball, weekly_profile):
        """Test cumulative and per-stage service on a two-day profile."""
        plan = optimal_shift(butterball, weekly_profile, 25.0)

        assert len(plan) == len(weekly_profile)
        assert plan.is_feasible()
        for a in plan.assignments:
            a.validate(butterball)

    def test_beats_static_sequencing(self, butterball, weekly_profile):
        """Test that shifting is never worse than sequencing each stage on its own."""
        static = static_trajectory(butterball, weekly_profile)
        for policy in ('fixed_order', 'optimal'):
            plan = optimal_shift(butterball, weekly_profile, 25.0, stage_policy=policy)
            assert plan.avg_power <= static.avg_power + dp_slack(butterball, 25.0)
        assert plan.avg_power < static.avg_power

    def test_config_supplies_defaults(self, butterball, weekly_profile):
        """Test that keyword arguments override the config."""
        config = ColdSeqConfig(surplus_step=50.0, stage_policy='optimal')
        from_config = optimal_shift(butterball, weekly_profile, config=config)
        explicit = optimal_shift(
            butterball, weekly_profile, 50.0, stage_policy='optimal', config=ColdSeqConfig()
        )
        assert from_config.avg_power == pytest.approx(explicit.avg_power)

    def test_banks_ahead_of_overload(self, c1_fleet):
        """Test that a stage above capacity is covered by earlier surplus."""
        plan = optimal_shift(c1_fleet, LoadProfile([0.0, 0.0, 4000.0]), 10.0)

        assert plan.is_feasible()
        assert plan.shifted[2] <= 3000.0 + 1e-6
        assert plan.shifted.sum() >= 4000.0 - 1e-6

    def test_surplus_cap_too_small_raises_error(self, c1_fleet):
        """Test that carry beyond the cap is refused."""
        with pytest.raises(SurplusCapError, match='banked surplus') as exc:
            optimal_shift(c1_fleet, LoadProfile([0.0, 0.0, 4000.0]), 10.0, surplus_cap=500.0)
        assert exc.value.required_cap == pytest.approx(1000.0)

    def test_unservable_profile_raises_error(self, c1_fleet):
        """Test that a prefix beyond cumulative capacity names the stage."""
        with pytest.raises(InfeasibleStageError, match='first infeasible stage 0') as exc:
            optimal_shift(c1_fleet, LoadProfile([4000.0, 0.0]), 10.0)
        assert exc.value.stage == 0
        assert exc.value.shortfall_kw == pytest.approx(1000.0)

    def test_single_trim_stage_matches_static_optimum(self, butterball):
        """Test that one stage at 3100 kW costs the static optimum, not the fixed-order cost."""
        plan = optimal_shift(butterball, LoadProfile([3100.0]), 10.0)

        assert plan.label == 'optimal_ls'
        assert plan.avg_power == pytest.approx(OPTIMAL_3100)
        assert plan.is_feasible()

    @pytest.mark.parametrize('policy', ['fixed_order', 'optimal'])
    def test_front_loaded_profile_never_costs_more_than_static(self, butterball, policy):
        """Test a demand followed by idle stages against sequencing each stage on its own."""
        p = LoadProfile([3100.0, 0.0, 0.0, 0.0])
        static = static_trajectory(butterball, p)
        plan = optimal_shift(butterball, p, 10.0, stage_policy=policy)

        assert static.avg_power == pytest.approx(OPTIMAL_3100 / 4)
        assert plan.avg_power <= static.avg_power + 1e-9
        assert savings_gap(butterball, p, 10.0) >= -1e-9
        assert plan.is_feasible()

    def test_grid_too_large_raises_error(self, butterball, weekly_profile):
        """Test the DP size guard."""
        with pytest.raises(ParameterError, match='coarser surplus_step'):
            optimal_shift(butterball, weekly_profile, config=ColdSeqConfig(max_dp_cells=100))


class TestTinyOracle:
    """Tests for exhaustive trajectory search."""

    @pytest.mark.parametrize('policy', ['optimal', 'fixed_order'])
    def test_small_instance(self, small_fleet, policy):
        """Test the hand-checked instance under both stage policies."""
        plan = tiny_oracle(small_fleet, LoadProfile([0.0, 30.0, 60.0, 10.0]), 10.0, policy)

        assert plan.label == 'tiny_oracle'
        assert plan.avg_power == pytest.approx(29.0 / 4)
        assert plan.is_feasible()

    @settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(
        loads=st.lists(st.integers(min_value=0, max_value=7), min_size=1, max_size=5),
        policy=st.sampled_from(['optimal', 'fixed_order']),
    )
    def test_agrees_with_dynamic_program(self, small_fleet, loads, policy):
        """Test that the DP on the oracle's lattice finds the same cost."""
        p = LoadProfile([10.0 * q for q in loads])

        oracle = tiny_oracle(small_fleet, p, 10.0, policy)
        plan = optimal_shift(
            small_fleet, p, 10.0, stage_policy=policy, decision_mode='grid', surplus_cap=1000.0
        )

        assert plan.avg_power == pytest.approx(oracle.avg_power, abs=1e-9)
        assert plan.is_feasible()

    def test_search_space_guard(self, small_fleet):
        """Test that long horizons are refused."""
        with pytest.raises(SearchSpaceError, match='trajectories'):
            tiny_oracle(small_fleet, LoadProfile.constant(10.0, 20), 10.0)

    def test_default_guard_comes_from_config(self, small_fleet, monkeypatch):
        """Test that the guard defaults to ColdSeqConfig.max_oracle_points."""
        monkeypatch.setattr(
            'coldseq.core.loadshift.ColdSeqConfig', functools.partial(ColdSeqConfig, max_oracle_points=1000)
        )
        with pytest.raises(SearchSpaceError, match=r'limit 1000\)'):
            tiny_oracle(small_fleet, LoadProfile.constant(10.0, 8), 10.0)

    def test_invalid_grid_step_raises_error(self, small_fleet):
        """Test grid step validation."""
        with pytest.raises(ParameterError, match='grid_step must be positive'):
            tiny_oracle(small_fleet, LoadProfile([10.0]), -1.0)


class TestTrajectories:
    """Tests for the non-shifting baselines."""

    def test_static_trajectory(self, butterball, weekly_profile):
        """Test that static sequencing serves demand as it arrives."""
        plan = static_trajectory(butterball, weekly_profile)

        assert plan.label == 'static_cs'
        np.testing.assert_array_equal(plan.shifted, weekly_profile.loads)
        assert plan.is_feasible()

    def test_fixed_order_extremes(self, butterball, weekly_profile):
        """Test that best and worst orders bracket every order."""
        (best_order, best), (worst_order, worst) = fixed_order_extremes(butterball, weekly_profile)
        static = static_trajectory(butterball, weekly_profile)

        assert best.label == 'best_fixed_order'
        assert worst.label == 'worst_fixed_order'
        assert static.avg_power <= best.avg_power + 1e-6
        assert best.avg_power <= worst.avg_power
        for order in all_orders(butterball):
            avg = fixed_order_trajectory(butterball, weekly_profile, order).avg_power
            assert best.avg_power - 1e-9 <= avg <= worst.avg_power + 1e-9
        assert best_order != worst_order

    def test_stage_over_capacity_raises_error(self, c1_fleet):
        """Test that baselines cannot shift load away from an overload."""
        with pytest.raises(InfeasibleStageError, match='more than total capacity'):
            static_trajectory(c1_fleet, LoadProfile([0.0, 4000.0]))


class TestWorstCase:
    """Tests for the worst-case profile construction."""

    def test_profile_shapes(self, c1):
        """Test block lengths and cumulative dominance."""
        q1, q2 = worst_case_profiles(c1, 0.05, 162)

        assert len(q1) == len(q2) == 163
        assert np.count_nonzero(q1.loads) == 150
        assert np.all(q1.loads[-150:] == 220.0)
        assert np.count_nonzero(q2.loads) == 11
        assert np.all(q2.loads[:11] == 3000.0)
        assert q1.total() == q2.total() == 33000.0
        assert np.all(q2.cumulative() >= q1.cumulative())

    def test_savings_reach_the_bound(self, c1, c1_fleet):
        """Test that shifting saves close to the single-machine bound."""
        q1, _ = worst_case_profiles(c1, 0.05, 162)
        gap = savings_gap(c1_fleet, q1, 10.0)

        assert gap >= 0.9 * 5.454
        assert gap == pytest.approx((150 * 124.0 - 11 * 262.0) / (11 * 262.0), rel=1e-6)

    def test_blocks_overlap_raises_error(self, c1):
        """Test that a short horizon is refused."""
        with pytest.raises(ParameterError, match='blocks overlap'):
            worst_case_profiles(c1, 0.05, 100)

    @pytest.mark.parametrize('scale', [0.0, -1.0, 0.001])
    def test_invalid_scale_raises_error(self, c1, scale):
        """Test that the scale must give both blocks at least one stage."""
        with pytest.raises(ParameterError):
            worst_case_profiles(c1, scale, 1000)

    def test_savings_gap_of_zero_profile(self, c1_fleet):
        """Test that nothing to serve means nothing to save."""
        assert savings_gap(c1_fleet, LoadProfile.constant(0.0, 3), 10.0) == 0.0


class TestPlantShiftProperties:
    """Property tests of optimal_shift on short plant profiles."""

    @settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(p=plant_profiles(max_stages=4))
    def test_halving_the_step_stays_within_slack(self, p):
        """Test that a finer surplus grid never costs more than one coarse cell's slack."""
        fleet = bundled_fleet()
        coarse = optimal_shift(fleet, p, 100.0)
        fine = optimal_shift(fleet, p, 50.0)

        assert fine.avg_power <= coarse.avg_power + dp_slack(fleet, 100.0) + 1e-6
        assert fine.is_feasible()

    @pytest.mark.slow
    @settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(p=plant_profiles(max_stages=8))
    def test_savings_within_worst_case_bound(self, p):
        """Test that the saving over static sequencing lies between zero and the fleet bound."""
        fleet = bundled_fleet()
        _, _, bound = prop3_ratios(fleet)

        gap = savings_gap(fleet, p, 25.0)

        assert gap >= -1e-9
        assert gap <= bound + 1e-6
