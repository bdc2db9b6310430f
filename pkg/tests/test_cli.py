import csv
import json

import numpy as np
import pytest

from uqlab.cli import EXIT_COMPUTATION, EXIT_OK, EXIT_USAGE, UsageError, main, parse_config
from uqlab._core.games import GameRule
from uqlab._core.memory import werner_state
from uqlab._core.steering import LGModeSpec

SUBCOMMAND_FLAGS = {
    'purity': ['--state', '--obs-a', '--obs-b', '--epsilon', '--sweep-werner'],
    'steer': ['--mode', '--n', '--m', '--grid-extent', '--grid-points', '--criterion', '--dump-grid'],
    'game': ['--rule', '--bias', '--theory', '--mc-rounds'],
    'memory': ['--state', '--obs-r', '--obs-s', '--scan-step'],
}
COMMON_FLAGS = ['--format', '--output', '--seed', '--log-level']


def _run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    assert code == EXIT_OK
    return json.loads(out), out


class TestParseConfig:
    def test_game(self):
        config = parse_config(['game', '--rule', 'chsh', '--theory', 'all'])
        assert config.subcommand == 'game'
        assert config.options['spec'].rule is GameRule.CHSH
        assert config.options['spec'].bias == (0.5, 0.5)
        assert config.options['theory'] == 'all'

    def test_steer_defaults(self):
        config = parse_config(['steer', '--mode', 'lg', '--n', '1', '--m', '0'])
        assert config.options['mode'] == LGModeSpec(1, 0)
        assert config.options['grid'].half_extent == 6.0
        assert config.options['grid'].points_per_axis == 201

    def test_memory_werner(self):
        config = parse_config(['memory', '--state', 'werner:0.72', '--obs-r', 'sz', '--obs-s', 'sx'])
        assert np.allclose(config.options['state'].matrix, werner_state(0.72).matrix)

    def test_common_options(self, tmp_path):
        out = str(tmp_path / 'r.json')
        config = parse_config(['game', '--rule', 'box1', '--format', 'table', '--output', out,
                               '--seed', '7', '--log-level', 'DEBUG'])
        assert (config.output_format, config.output_path, config.seed, config.log_level) == \
            ('table', out, 7, 'DEBUG')

    @pytest.mark.parametrize("argv", [
        [],
        ['game'],
        ['game', '--rule', 'poker'],
        ['game', '--rule', 'chsh', '--bias', '1.5'],
        ['game', '--rule', 'box1', '--bias', '0.5,0.5'],
        ['steer', '--grid-points', '32'],
        ['steer', '--n', '5', '--m', '3'],
        ['purity', '--state', 'mixed:2'],
        ['purity', '--sweep-werner', '5', '--state', 'mixed:4'],
        ['purity', '--sweep-werner', '5', '--obs-a', 'sx', '--obs-b', 'sz'],
        ['purity', '--state', 'mixed:3', '--obs-a', 'sx', '--obs-b', 'sz'],
        ['memory', '--state', 'bell-diagonal:1,1,1'],
        ['memory', '--state', 'werner:0.5', '--obs-r', 'singlet'],
        ['memory', '--state', 'werner:0.5', '--scan-step', '0'],
        ['memory', '--state', 'werner:0.5', '--bogus'],
    ])
    def test_usage_errors(self, argv):
        with pytest.raises(UsageError):
            parse_config(argv)


class TestExitCodes:
    def test_usage(self, capsys):
        assert main(['game', '--rule', 'poker']) == EXIT_USAGE
        assert 'usage' in capsys.readouterr().err

    def test_computation_error(self, capsys):
        argv = ['steer', '--criterion', 'entropic', '--grid-extent', '1.0', '--grid-points', '64']
        assert main(argv) == EXIT_COMPUTATION

    @pytest.mark.parametrize("subcommand", sorted(SUBCOMMAND_FLAGS))
    def test_help_lists_flags(self, capsys, subcommand):
        assert main([subcommand, '--help']) == EXIT_OK
        text = capsys.readouterr().out
        for flag in SUBCOMMAND_FLAGS[subcommand] + COMMON_FLAGS:
            assert flag in text


class TestReports:
    def test_purity_json(self, capsys):
        data, _ = _run_json(capsys, ['purity', '--state', 'mixed:2', '--obs-a', 'sx', '--obs-b', 'sz'])
        assert data['lhs_name'] == 'Q'
        assert data['lhs_value'] == pytest.approx(1.0)
        assert [entry['name'] for entry in data['rhs']] == ['epsilon', 'linear_entropy', 'linear_entropy_raw']
        assert data['verdict'] == 'mixed'

    def test_purity_sweep(self, capsys):
        data, _ = _run_json(capsys, ['purity', '--sweep-werner', '5'])
        assert len(data) == 5
        assert data[0]['lhs_value'] == pytest.approx(1.0)
        assert data[-1]['lhs_value'] == pytest.approx(0.0, abs=1e-12)

    def test_game_all_theories(self, capsys):
        data, _ = _run_json(capsys, ['game', '--rule', 'chsh', '--theory', 'all', '--starts', '2'])
        values = {entry['name']: entry['value'] for entry in data['rhs']}
        assert set(values) == {'classical', 'quantum', 'no-signaling'}
        assert values['classical'] == pytest.approx(0.75)
        assert values['quantum'] == pytest.approx(0.853553390593, abs=1e-6)
        assert values['no-signaling'] == pytest.approx(1.0)
        assert data['verdict'] == 'quantum advantage'

    def test_game_seeded_output_is_identical(self, capsys):
        argv = ['game', '--rule', 'box1', '--bias', '0.6', '--starts', '3', '--mc-rounds', '10000', '--seed', '11']
        _, first = _run_json(capsys, argv)
        _, second = _run_json(capsys, argv)
        assert first == second

    def test_memory_report(self, capsys):
        data, _ = _run_json(capsys, ['memory', '--state', 'werner:0.72', '--scan-step', '5'])
        values = {entry['name']: entry['value'] for entry in data['rhs']}
        for name in ('maassen_uffink', 'berta', 'coles_piani', 'pati', 'fine_grained'):
            assert name in values
        assert values['maassen_uffink'] == pytest.approx(1.0)
        assert data['lhs_value'] >= values['berta'] - 1e-9
        assert data['metadata']['p_inf'] == pytest.approx(0.86, abs=1e-9)

    def test_table_and_output_file(self, tmp_path, capsys):
        path = tmp_path / 'report.txt'
        argv = ['purity', '--state', 'mixed:2', '--obs-a', 'sx', '--obs-b', 'sz',
                '--format', 'table', '--output', str(path)]
        assert main(argv) == EXIT_OK
        assert capsys.readouterr().out == ''
        text = path.read_text(encoding='utf-8')
        assert 'RS purity witness' in text
        assert 'verdict: mixed' in text

    def test_steer_grid_dump(self, tmp_path, capsys):
        path = tmp_path / 'grid.csv'
        argv = ['steer', '--n', '1', '--criterion', 'reid', '--grid-points', '64', '--dump-grid', str(path)]
        data, _ = _run_json(capsys, argv)
        assert data['lhs_value'] == pytest.approx(9 / 16, abs=1e-9)
        with open(path, newline='', encoding='utf-8') as f:
            rows = list(csv.reader(f))
        assert rows[0] == ['u', 'v', 'p']
        assert len(rows) == 64 * 64 + 1
