"""Tests for the command-line interface."""

import json

import pytest

from coldseq.cli.main import EXIT_INFEASIBLE, EXIT_IO, EXIT_OK, EXIT_USAGE, main
from coldseq.io.profiles import save_csv


@pytest.fixture
def profile_csv(tmp_path, weekly_profile):
    """The two-day profile written as a CSV file."""
    path = tmp_path / 'weekly.csv'
    save_csv(weekly_profile, path)
    return path


def run(capsys, *argv):
    """Run the CLI and return (exit code, stdout)."""
    code = main(list(argv))
    return code, capsys.readouterr().out


class TestSequence:
    """Tests for `coldseq sequence`."""

    def test_water_fill(self, capsys):
        """Test the canonical-order dispatch of 3100 kW."""
        code, out = run(capsys, 'sequence', '3100')
        data = json.loads(out)

        assert code == EXIT_OK
        assert data['mode'] == 'water_fill'
        assert {row['id']: row['load_kw'] for row in data['assignment']} == {
            'C1': 2861.0, 'C2': 239.0, 'C3': 0.0, 'C4': 0.0,
        }
        assert data['total_power_kw'] == pytest.approx(428.1)

    def test_optimal(self, capsys):
        """Test the exact optimum and its realizing order."""
        code, out = run(capsys, 'sequence', '3100', '--optimal')
        data = json.loads(out)

        assert code == EXIT_OK
        assert data['order'] == 'C1,C3,C2,C4'
        assert data['total_power_kw'] == pytest.approx(400.773, abs=1e-3)

    def test_explicit_order_as_csv(self, capsys):
        """Test --order with tabular output."""
        code, out = run(capsys, 'sequence', '3100', '--order', 'C4,C3,C2,C1', '--format', 'csv')

        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == 'id,load_kw,power_kw'
        assert lines[4].startswith('C4,2351.0,')

    def test_over_capacity(self, capsys):
        """Test the infeasible-demand exit code."""
        code, _ = run(capsys, 'sequence', '10000')
        assert code == EXIT_INFEASIBLE

    def test_unknown_compressor_in_order(self, capsys):
        """Test that bad orders are usage errors."""
        code, _ = run(capsys, 'sequence', '3100', '--order', 'C1,C9')
        assert code == EXIT_USAGE


class TestAnalyses:
    """Tests for the fleet-only analyses."""

    def test_bounds(self, capsys):
        """Test the worst-case savings bound of the bundled fleet."""
        code, out = run(capsys, 'bounds')
        data = json.loads(out)

        assert code == EXIT_OK
        assert data['bound'] == pytest.approx(8.85, abs=0.01)
        assert data['total_capacity_kw'] == 9237.0
        assert data['min_turn_on_kw'] == 165.0
        assert len(data['efficiency']) == 4

    def test_gap(self, capsys):
        """Test the fixed-order gap sweep summary."""
        code, out = run(capsys, 'gap', '--q-lo', '1000', '--q-hi', '2000', '--step', '100')
        data = json.loads(out)

        assert code == EXIT_OK
        assert data['points'] == 11
        assert 1000.0 <= data['max_gap_q_in_kw'] <= 2000.0
        assert data['max_gap'] >= 0

    def test_partition(self, capsys):
        """Test the optimal-order partition."""
        code, out = run(capsys, 'partition', '--step', '50')
        intervals = json.loads(out)['intervals']

        assert code == EXIT_OK
        assert intervals[0]['q_lo_kw'] == 165.0
        assert intervals[-1]['q_hi_kw'] == 9237.0

    def test_gen(self, capsys):
        """Test synthesizing the bundled demo profile."""
        code, out = run(capsys, 'gen', '--seed', '11')
        lines = out.splitlines()

        assert code == EXIT_OK
        assert lines[0] == 'stage_or_timestamp,load_kw'
        assert len(lines) == 1 + 7 * 24

    def test_out_file(self, capsys, tmp_path):
        """Test writing output to a file."""
        target = tmp_path / 'bounds.json'
        code, out = run(capsys, 'bounds', '--out', str(target))

        assert code == EXIT_OK
        assert out == ''
        assert json.loads(target.read_text())['bound'] > 0


class TestProfileCommands:
    """Tests for the commands that read a load profile."""

    def test_compare_and_cdf(self, capsys, tmp_path, profile_csv):
        """Test compare with saved plans, then the capacity distribution of one."""
        plans_dir = tmp_path / 'plans'
        plans_dir.mkdir()
        code, out = run(
            capsys, 'compare', '--profile', str(profile_csv), '--step-minutes', '60',
            '--surplus-step', '25', '--plans-dir', str(plans_dir),
        )
        data = json.loads(out)

        assert code == EXIT_OK
        assert data['savings_vs_static_pct']['optimal_ls'] > 0
        assert set(data['capacity_distribution']) == set(data['avg_power_kw'])
        assert (plans_dir / 'online_ls.csv').exists()

        code, out = run(capsys, 'cdf', '--plan', str(plans_dir / 'online_ls.csv'))
        rows = json.loads(out)['capacity_distribution']

        assert code == EXIT_OK
        assert [row['id'] for row in rows] == ['C1', 'C2', 'C3', 'C4']
        assert all(row['trim_fraction'] == 0.0 for row in rows)

    def test_compare_as_csv(self, capsys, profile_csv):
        """Test the tabular comparison."""
        code, out = run(
            capsys, 'compare', '--profile', str(profile_csv), '--surplus-step', '25',
            '--format', 'csv',
        )
        assert code == EXIT_OK
        assert out.splitlines()[0] == 'method,avg_power_kw,savings_vs_static_pct'

    def test_shift(self, capsys, profile_csv):
        """Test the optimal plan with the optimal stage policy."""
        code, out = run(
            capsys, 'shift', '--profile', str(profile_csv), '--surplus-step', '25',
            '--stage-policy', 'optimal',
        )
        data = json.loads(out)

        assert code == EXIT_OK
        assert data['method'] == 'optimal_ls'
        assert data['feasible'] is True
        assert len(data['plan']) == 48

    def test_online_with_filter(self, capsys, profile_csv):
        """Test the online plan on a smoothed profile."""
        code, out = run(
            capsys, 'online', '--profile', str(profile_csv), '--step-minutes', '60',
            '--filter-window', '180',
        )
        assert code == EXIT_OK
        assert json.loads(out)['method'] == 'online_ls'

    def test_filter_uses_configured_window(self, capsys, profile_csv, monkeypatch):
        """Test that --filter smooths with COLDSEQ_FILTER_WINDOW_MINUTES."""
        argv = ['online', '--profile', str(profile_csv), '--step-minutes', '60']
        _, raw = run(capsys, *argv)
        _, explicit = run(capsys, *argv, '--filter-window', '180')
        monkeypatch.setenv('COLDSEQ_FILTER_WINDOW_MINUTES', '180')
        code, configured = run(capsys, *argv, '--filter')

        assert code == EXIT_OK
        assert json.loads(configured)['plan'] == json.loads(explicit)['plan']
        assert json.loads(configured)['plan'] != json.loads(raw)['plan']

    def test_compare_front_loaded_profile(self, capsys, tmp_path):
        """Test compare on one trim-level stage followed by idle stages."""
        path = tmp_path / 'front.csv'
        path.write_text('stage_or_timestamp,load_kw\n0,3100\n1,0\n2,0\n3,0\n')

        code, out = run(capsys, 'compare', '--profile', str(path))
        data = json.loads(out)

        assert code == EXIT_OK
        assert data['avg_power_kw']['optimal_ls'] <= data['avg_power_kw']['static_cs'] + 1e-9

    def test_dp_size_guard(self, capsys, profile_csv, monkeypatch):
        """Test that an oversized DP is a usage error."""
        monkeypatch.setenv('COLDSEQ_MAX_DP_CELLS', '10')
        code, _ = run(capsys, 'shift', '--profile', str(profile_csv))
        assert code == EXIT_USAGE

    def test_missing_profile(self, capsys, tmp_path):
        """Test the I/O exit code."""
        code, _ = run(capsys, 'shift', '--profile', str(tmp_path / 'missing.csv'))
        assert code == EXIT_IO

    def test_malformed_profile(self, capsys, tmp_path):
        """Test that parse errors use the I/O exit code."""
        path = tmp_path / 'bad.csv'
        path.write_text('stage_or_timestamp,load_kw\n0,-1\n')
        code, _ = run(capsys, 'online', '--profile', str(path))
        assert code == EXIT_IO


class TestUsage:
    """Tests for argument errors."""

    @pytest.mark.parametrize('argv', [[], ['sequence'], ['explode'], ['shift']])
    def test_bad_arguments(self, capsys, argv):
        """Test that argument errors exit with 1."""
        assert main(argv) == EXIT_USAGE

    def test_help(self, capsys):
        """Test that --help succeeds."""
        assert main(['--help']) == EXIT_OK
        assert 'compare' in capsys.readouterr().out
