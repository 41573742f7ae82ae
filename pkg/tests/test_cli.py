import json

import pandas as pd
import pytest
from click.testing import CliRunner

from cutoff_kit.cli.commands import EXPERIMENT_COMMANDS
from cutoff_kit.cli.main import cutoff_kit_group


@pytest.fixture
def runner(mock_home, monkeypatch):
    monkeypatch.chdir(mock_home)
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cutoff_kit_group, [str(arg) for arg in args], catch_exceptions=False)


class TestExperimentCommands:
    def test_bl_tv_csv(self, runner, mock_home):
        out = mock_home / 'bl.csv'

        result = invoke(runner, 'bl-tv', '--n', 64, '--start', 64, '--rmax', 400, '--out', out)

        assert result.exit_code == 0
        frame = pd.read_csv(out)
        assert len(frame) == 401
        assert list(frame.columns) == ['time', 'value', 'kind']
        assert frame['value'].iloc[0] == pytest.approx(1.0, abs=1e-9)
        assert (frame['value'].diff().iloc[1:150] <= 1e-12).all()
        assert set(frame['kind']) == {'exact'}

    def test_bl_tv_moments(self, runner, mock_home):
        out = mock_home / 'bl.csv'

        invoke(runner, 'bl-tv', '--n', 10, '--rmax', 5, '--moments', '--out', out)

        frame = pd.read_csv(out)
        assert frame['mean'].iloc[0] == 10
        assert frame['variance'].iloc[0] == 0

    def test_conc_bounds_json(self, runner, mock_home):
        out = mock_home / 'bound.json'

        result = invoke(runner, 'conc-bounds', '--bound', 'discrete', '--m', 20, '--beta', 1, '--a-k', 50, '--out', out)

        assert result.exit_code == 0
        payload = json.loads(out.read_text())
        assert payload['bound'] == pytest.approx(0.08503, abs=5e-5)
        assert payload['name'] == 'discrete'

    def test_missing_bound_field_is_reported(self, runner):
        result = runner.invoke(cutoff_kit_group, ['conc-bounds', '--bound', 'discrete', '--m', '20', '--beta', '1'])

        assert result.exit_code == 1
        assert 'a_k' in result.output

    @pytest.mark.parametrize('args', [
        ('walk-hitting', '--r', 100, '--t0', 1, '--t0', 4, '--trials', 500),
        ('bl-coupling', '--n', 10, '--trials', 500),
    ])
    def test_seeded_runs_are_reproducible(self, runner, mock_home, args):
        first, second, threaded = mock_home / 'a.csv', mock_home / 'b.csv', mock_home / 'c.csv'

        invoke(runner, *args, '--seed', 42, '--out', first)
        invoke(runner, *args, '--seed', 42, '--out', second)
        invoke(runner, *args, '--seed', 42, '--threads', 3, '--out', threaded)

        assert first.read_bytes() == second.read_bytes() == threaded.read_bytes()

    def test_different_seeds_differ(self, runner, mock_home):
        args = ('walk-hitting', '--r', 100, '--t0', 1, '--trials', 500)
        first, second = mock_home / 'a.csv', mock_home / 'b.csv'

        invoke(runner, *args, '--seed', 1, '--out', first)
        invoke(runner, *args, '--seed', 2, '--out', second)

        assert first.read_bytes() != second.read_bytes()

    def test_epi_mean(self, runner, mock_home):
        out = mock_home / 'mean.json'

        invoke(runner, 'epi-mean', '--start', 150, 150, '--t-max', 1, '--steps', 2, '--format', 'json', '--out', out)

        payload = json.loads(out.read_text())
        assert payload['travel_time'] == pytest.approx(1.9560, abs=1e-4)
        assert payload['rho'] == pytest.approx(1.0)
        assert payload['trajectory'][-1]['x1'] == pytest.approx(118.39, abs=5e-3)

    def test_relative_out_uses_output_dir(self, runner, mock_home, monkeypatch):
        monkeypatch.setenv('CUTOFF_KIT_OUTPUT_DIR', str(mock_home / 'results'))

        invoke(runner, 'bl-tv', '--n', 4, '--rmax', 3, '--out', 'bl.csv')

        assert len(pd.read_csv(mock_home / 'results' / 'bl.csv')) == 4

    def test_epi_coalesce_s_column_is_the_requested_grid(self, runner, mock_home):
        out = mock_home / 'coalesce.csv'

        invoke(runner, 'epi-coalesce', '--n', 20, '--start', 30, 30, '--s', 1, '--s', 0, '--s', 1,
               '--trials', 1000, '--seed', 3, '--out', out)

        frame = pd.read_csv(out)
        assert frame['s'].tolist() == [0.0, 1.0]
        assert (frame['time'].diff().iloc[1:] > 0).all()


class TestSideOutputs:
    ARGS = ('epi-cutoff', '--n', 25, '--angles', 1, '--s-max', 0.5, '--trials', 1000, '--seed', 5)

    def test_profiles_written_with_main_output(self, runner, mock_home):
        out, profiles = mock_home / 'cutoff.csv', mock_home / 'profiles.csv'

        invoke(runner, *self.ARGS, '--out', out, '--profiles', profiles)

        assert list(pd.read_csv(out).columns) == ['epsilon', 's', 'pass']
        frame = pd.read_csv(profiles)
        assert list(frame.columns) == ['x1', 'x2', 'side', 'time', 'value', 'se']
        assert set(frame['side']) == {'lower', 'upper'}

    def test_failed_main_write_leaves_no_profiles(self, runner, mock_home, mocker):
        out, profiles = mock_home / 'cutoff.csv', mock_home / 'profiles.csv'
        mocker.patch('cutoff_kit.cli.options.write_text_atomic', side_effect=OSError('disk full'))

        result = runner.invoke(cutoff_kit_group, [str(a) for a in (*self.ARGS, '--out', out, '--profiles', profiles)])

        assert isinstance(result.exception, OSError)
        assert not out.exists()
        assert not profiles.exists()

    def test_dry_run_writes_nothing(self, runner, mock_home):
        profiles = mock_home / 'profiles.csv'

        result = invoke(runner, *self.ARGS, '--profiles', profiles, '--dry-run')

        assert json.loads(result.stdout)['params']['profiles_out'] == str(profiles)
        assert not profiles.exists()


class TestRunConfig:
    def test_dry_run_prints_resolved_parameters(self, runner):
        result = invoke(runner, 'bl-coupling', '--n', 20, '--seed', 7, '--dry-run')

        payload = json.loads(result.stdout)
        assert payload['command'] == 'bl-coupling'
        assert payload['seed'] == 7
        assert payload['params']['n'] == 20
        assert payload['params']['trials'] == 10_000

    @pytest.mark.parametrize('extra', [(), ('--dry-run',)])
    def test_supercritical_model_fails_with_or_without_dry_run(self, runner, extra):
        result = runner.invoke(cutoff_kit_group, ['epi-mean', '--alpha', '5', *extra])

        assert result.exit_code == 1
        assert 'must be < 1' in result.output

    @pytest.mark.parametrize('args, message', [
        (('bl-tv', '--n', '10', '--start', '11'), 'outside 0..10'),
        (('bl-coupling', '--n', '10', '--lo', '10', '--seed', '1'), 'exceeds n=10'),
        (('bl-surrogate', '--k', '2', '--y0', '3'), 'outside -2..2'),
        (('bl-window', '--upper-min', '1'), 'go together'),
        (('conc-bounds', '--bound', 'discrete', '--m', '20', '--beta', '1'), 'a_k'),
        (('epi-simulate', '--gamma', '0.4', '--seed', '1'), 'must be < 1'),
    ])
    def test_dry_run_rejects_what_the_run_would(self, runner, args, message):
        result = runner.invoke(cutoff_kit_group, [*args, '--dry-run'])

        assert result.exit_code == 1
        assert message in result.output

    def test_missing_seed_is_a_usage_error(self, runner):
        result = runner.invoke(cutoff_kit_group, ['bl-coupling', '--n', '20'])

        assert result.exit_code == 2
        assert 'seed' in result.output

    def test_config_file_fills_parameters(self, runner, mock_home):
        path = mock_home / 'run.json'
        path.write_text(json.dumps({'command': 'bl-coupling', 'n': 12, 'seed': 3, 'trials': 100}))

        result = invoke(runner, 'bl-coupling', '--config', path, '--trials', 50, '--dry-run')

        payload = json.loads(result.stdout)
        assert payload['seed'] == 3
        assert payload['params']['n'] == 12
        # the command line wins over the file
        assert payload['params']['trials'] == 50

    @pytest.mark.parametrize('content, expected', [
        ('{\n  "n": 12,\n  "bogus": 1\n}', "[line 3, field 'bogus']"),
        ('{\n  "n": 1\n}', "[line 2, field 'n']"),
        ('{\n  "command": "bl-tv"\n}', "[line 2, field 'command']"),
        ('{\n  "n": 12,\n  oops\n}', '[line 3]'),
    ])
    def test_config_file_errors_point_at_the_line(self, runner, mock_home, content, expected):
        path = mock_home / 'run.json'
        path.write_text(content)

        result = runner.invoke(cutoff_kit_group, ['bl-coupling', '--seed', '1', '--config', str(path)])

        assert result.exit_code == 2
        assert expected in result.output

    @pytest.mark.parametrize('command', EXPERIMENT_COMMANDS, ids=lambda c: c.name)
    def test_help_lists_every_option(self, runner, command):
        result = invoke(runner, command.name, '--help')

        assert result.exit_code == 0
        for param in command.params:
            for opt in param.opts:
                if opt.startswith('--'):
                    assert opt in result.output


class TestConfigCommands:
    def test_where(self, runner, mock_home):
        result = invoke(runner, 'config', 'where')

        assert result.stdout.strip() == str(mock_home / '.cutoff_kit' / 'config')

    def test_set_and_list(self, runner):
        result = invoke(runner, 'config', 'set', '--threads', 3, '--chunk-size', 512)

        assert 'threads -> 3' in result.stdout
        listed = invoke(runner, 'config', 'list').stdout
        assert "'threads': 3" in listed
        assert "'chunk_size': 512" in listed

    def test_set_needs_a_value(self, runner):
        result = runner.invoke(cutoff_kit_group, ['config', 'set'])

        assert result.exit_code == 1

    def test_reset_backs_up(self, runner, mock_home):
        invoke(runner, 'config', 'set', '--max-jumps', 1234)
        config_dir = mock_home / '.cutoff_kit' / 'config'

        result = invoke(runner, 'config', 'reset', '--config')

        assert 'Backed up' in result.stdout
        assert 'max_jumps: 1234' in (config_dir / 'cutoff_kit.yml.bak').read_text()
        assert 'max_jumps: 1234' not in (config_dir / 'cutoff_kit.yml').read_text()
