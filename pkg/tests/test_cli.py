import json
import subprocess
import sys
from os.path import dirname, join, realpath

import pytest

ROOT = dirname(dirname(realpath(__file__)))


def run(script, *args):
    return subprocess.run([sys.executable, join(ROOT, 'bin', script)] + list(args),
                          cwd=ROOT, capture_output=True, text=True, check=False)


def test_verify_scenario_file():
    result = run('kmsverify.py', '-c', 'fixtures/btorus-quadrant.toml')
    assert result.returncode == 0, result.stderr
    report = json.loads(result.stdout)
    assert report['verified'] is True
    assert report['cone']['isoClass'] == 'Quadrant'


def test_unknown_scenario_key_is_a_configuration_error():
    assert run('kmsverify.py', '-c', 'fixtures/unknown-key.toml').returncode == 2


def test_non_positive_beta_is_an_unknown_cell():
    assert run('kmsclassify.py', '-e', 'btorus', '--coords', '1,-1,0', '-b', '0').returncode == 3


def test_table_matches_its_fixture(tmp_path):
    out = tmp_path / 'btorus.md'
    result = run('kmstable.py', '-e', 'btorus', '-o', str(out))
    assert result.returncode == 0, result.stderr
    with open(join(ROOT, 'fixtures', 'btorus.md'), 'r') as fixture_file:
        assert out.read_text() == fixture_file.read()


def test_table_against_a_wrong_fixture_fails():
    result = run('kmstable.py', '-e', 'btorus', '--fixture', 'fixtures/spiral.md')
    assert result.returncode == 1
    assert 'computed' in result.stderr


def test_resonant_transport_is_obstructed():
    result = run('kmssolve.py', 'transport', '--tau', '(sin theta1)')
    assert result.returncode == 4
    assert json.loads(result.stdout)['obstructed'] is True


@pytest.mark.parametrize("n, p, q", [(12, 17, 12), (5, 7, 5)])
def test_diophantine_approximation(n, p, q):
    result = run('kmssolve.py', 'dioph', '--n', str(n))
    assert result.returncode == 0, result.stderr
    answer = json.loads(result.stdout)['result']
    assert (answer['p'], answer['q']) == (p, q)
    assert answer['withinBound'] is True
