import json
from os.path import dirname, join, realpath

import pytest

from lib.exceptions import EmptyCone, NonIntegrable, ScenarioError, UnknownCell
from lib.kms_reports import TableReport
from lib.scenario import (EXIT_CONFIG, EXIT_FAIL, EXIT_UNKNOWN_CELL, Scenario, exit_code_for,
                          load_scenario, read_scenario_file, write_output)
from lib.utils import parse_constant, parse_coords

FIXTURES = join(dirname(dirname(realpath(__file__))), 'fixtures')


def test_defaults():
    scenario = Scenario({'example': 'btorus'})
    assert scenario.betas == [1.0]
    assert scenario.seed == 0
    assert scenario.format == 'json'
    assert scenario.coords is None


def test_unknown_keys_are_rejected():
    with pytest.raises(ScenarioError):
        Scenario({'example': 'btorus', 'temperature': 2.0})
    with pytest.raises(ScenarioError):
        load_scenario(join(FIXTURES, 'unknown-key.toml'))


def test_beta_lists_and_strings():
    assert Scenario({'beta': [0.5, 1, 2]}).betas == [0.5, 1.0, 2.0]
    assert Scenario({'beta': '0.25, 0.5'}).betas == [0.25, 0.5]
    assert Scenario({'beta': '2,'}).beta == 2.0
    with pytest.raises(ScenarioError):
        Scenario({'beta': ''})
    with pytest.raises(ScenarioError):
        Scenario({'beta': 'hot'})


@pytest.mark.parametrize("values", [
    {'seed': True},
    {'pairs': 'many'},
    {'pairs': 0},
    {'format': 'csv'},
    {'example': 'klein-bottle'},
    {'coords': 'a,b'},
    {'c': 'pi/4'},
])
def test_invalid_values(values):
    with pytest.raises(ScenarioError):
        Scenario(values)


def test_require_example():
    with pytest.raises(ScenarioError):
        Scenario({}).require_example()


def test_scenario_file_with_overrides():
    path = join(FIXTURES, 'btorus-quadrant.toml')
    assert read_scenario_file(path)['example'] == 'btorus'

    scenario = load_scenario(path, {'beta': '2.0', 'pairs': None, 'format': 'md'})
    assert scenario.example == 'btorus'
    assert scenario.coords == [1.0, -1.0, 0.0]
    assert scenario.betas == [2.0]
    assert scenario.pairs == 4
    assert scenario.format == 'md'


def test_torus_scenario_builds_its_manifold():
    scenario = load_scenario(join(FIXTURES, 'torus3-sqrt2.toml'))
    manifold = scenario.manifold()
    assert manifold.name == 'torus3'
    assert not manifold.rational
    assert scenario.to_json()['c'] == 'sqrt2'


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(ScenarioError):
        load_scenario(str(tmp_path / 'missing.toml'))
    broken = tmp_path / 'broken.toml'
    broken.write_text('example = "btorus\n')
    with pytest.raises(ScenarioError):
        load_scenario(str(broken))


def test_exit_codes():
    assert exit_code_for(UnknownCell("beta must be positive")) == EXIT_UNKNOWN_CELL
    assert exit_code_for(ScenarioError("bad key")) == EXIT_CONFIG
    assert exit_code_for(ValueError("bad value")) == EXIT_CONFIG
    assert exit_code_for(EmptyCone("no generators")) == EXIT_FAIL
    assert exit_code_for(NonIntegrable('z', -1.5)) == EXIT_FAIL


def test_write_output(tmp_path, capsys):
    table = TableReport('demo', '[X]', 'a')
    table.build_report([('0', 'a>0', 'Quadrant'), ('0', 'a<0', 'Zero')])

    out = tmp_path / 'demo.md'
    write_output(table, str(out), 'md')
    assert out.read_text() == "# demo\n\n| [X] \\ a | a>0 | a<0 |\n|---|---|---|\n| 0 | Quadrant | Zero |\n"

    write_output(table, None, 'json')
    data = json.loads(capsys.readouterr().out)
    assert data['entries'] == [['Quadrant', 'Zero']]
    assert data['columns'] == ['a>0', 'a<0']


def test_parse_helpers():
    assert parse_coords('1,-1,0') == [1.0, -1.0, 0.0]
    assert parse_coords([1, 2]) == [1.0, 2.0]
    assert parse_coords('') == []
    assert str(parse_constant('sqrt2')) == 'sqrt(2)'
    assert parse_constant('0.5') == parse_constant('1/2')
    assert parse_constant('-1/3') < 0
