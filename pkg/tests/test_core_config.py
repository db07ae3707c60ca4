"""Tests for solver configuration."""

import pytest

from coldseq.core.config import ColdSeqConfig


class TestColdSeqConfig:
    """Tests for ColdSeqConfig."""

    def test_defaults(self):
        """Test default configuration values."""
        config = ColdSeqConfig()

        assert config.tolerance_kw == 1e-6
        assert config.surplus_step == 1.0
        assert config.surplus_cap_hours == 24.0
        assert config.stage_policy == 'fixed_order'
        assert config.decision_mode == 'breakpoints'
        assert config.full_capacity_threshold == 0.99
        assert config.filter_window_minutes == 20.0
        assert config.log_level == 'WARNING'

    def test_custom_values(self):
        """Test custom solver settings."""
        config = ColdSeqConfig(surplus_step=25.0, stage_policy='optimal', decision_mode='grid')
        assert config.surplus_step == 25.0
        assert config.stage_policy == 'optimal'
        assert config.decision_mode == 'grid'

    def test_log_level_is_upper_cased(self):
        """Test that log levels are normalized."""
        assert ColdSeqConfig(log_level='debug').log_level == 'DEBUG'

    def test_invalid_stage_policy_raises_error(self):
        """Test that an unknown stage policy raises ValueError."""
        with pytest.raises(ValueError, match='stage_policy must be one of'):
            ColdSeqConfig(stage_policy='greedy')

    def test_invalid_decision_mode_raises_error(self):
        """Test that an unknown decision mode raises ValueError."""
        with pytest.raises(ValueError, match='decision_mode must be one of'):
            ColdSeqConfig(decision_mode='random')

    @pytest.mark.parametrize('field', ['tolerance_kw', 'surplus_step', 'surplus_cap_hours'])
    def test_non_positive_values_raise_error(self, field):
        """Test that zero tolerances, steps and caps are rejected."""
        with pytest.raises(ValueError, match=f'{field} must be positive'):
            ColdSeqConfig(**{field: 0.0})

    @pytest.mark.parametrize('threshold', [0.0, 1.5])
    def test_invalid_threshold_raises_error(self, threshold):
        """Test that the full-capacity threshold must lie in (0, 1]."""
        with pytest.raises(ValueError, match='full_capacity_threshold'):
            ColdSeqConfig(full_capacity_threshold=threshold)

    def test_invalid_log_level_raises_error(self):
        """Test that unknown log levels are rejected."""
        with pytest.raises(ValueError, match='log_level must be one of'):
            ColdSeqConfig(log_level='LOUD')

    def test_with_overrides_ignores_none(self):
        """Test that None overrides keep the current value."""
        base = ColdSeqConfig(surplus_step=10.0)
        config = base.with_overrides(surplus_step=None, stage_policy='optimal')

        assert config.surplus_step == 10.0
        assert config.stage_policy == 'optimal'
        assert base.stage_policy == 'fixed_order'

    def test_from_dict(self):
        """Test creating config from dictionary."""
        config = ColdSeqConfig.from_dict({'surplus_step': 5.0, 'max_dp_cells': 1000})

        assert config.surplus_step == 5.0
        assert config.max_dp_cells == 1000

    def test_to_dict_round_trip(self):
        """Test that to_dict feeds back into from_dict."""
        config = ColdSeqConfig(surplus_cap_hours=12.0)
        assert ColdSeqConfig.from_dict(config.to_dict()) == config

    def test_from_env(self, monkeypatch):
        """Test creating config from environment variables."""
        monkeypatch.setenv('COLDSEQ_SURPLUS_STEP', '25')
        monkeypatch.setenv('COLDSEQ_STAGE_POLICY', 'optimal')
        monkeypatch.setenv('COLDSEQ_MAX_DP_CELLS', '5000')
        monkeypatch.setenv('COLDSEQ_LOG', 'info')

        config = ColdSeqConfig.from_env()

        assert config.surplus_step == 25.0
        assert config.stage_policy == 'optimal'
        assert config.max_dp_cells == 5000
        assert config.log_level == 'INFO'

    def test_from_env_blank_values_keep_defaults(self, monkeypatch):
        """Test that empty environment variables are ignored."""
        monkeypatch.setenv('COLDSEQ_SURPLUS_STEP', '  ')
        assert ColdSeqConfig.from_env().surplus_step == 1.0

    def test_from_env_invalid_value_raises_error(self, monkeypatch):
        """Test that unparsable environment values raise ValueError."""
        monkeypatch.setenv('COLDSEQ_MAX_DP_CELLS', 'lots')
        with pytest.raises(ValueError, match='Invalid value for COLDSEQ_MAX_DP_CELLS'):
            ColdSeqConfig.from_env()
