"""Tests for the command line: payloads and exit codes."""

from __future__ import annotations

import json

import pytest

from pmaxent import cli, const
from pmaxent.verify import pipeline
from pmaxent.verify.base import Check, at_most


def _fails(rng, ctx):
    return at_most(1.0, 0.5)


class TestVerify:
    """Test the verify command."""

    def test_pass(self, capsys):
        """Test a passing suite."""
        assert cli.main(['verify', 'cramer-rao', '--cases', '1', '--seed', '4']) == const.EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data['suite'] == 'cramer-rao'
        assert data['seed'] == 4
        assert data['pass'] is True
        assert 'wall_time' not in data

    def test_concavity_classes(self, capsys):
        """Test that the class suite runs to a clean exit."""
        assert cli.main(['verify', 'concavity-classes', '--cases', '2', '--seed', '42']) == const.EXIT_OK
        data = json.loads(capsys.readouterr().out)
        tail = [c for c in data['cases'] if c['id'].startswith('ulc-conditional-tail')]
        assert tail
        assert all(c['pass'] for c in tail)

    def test_byte_identical(self, capsys):
        """Test that repeated runs print the same bytes."""
        cli.main(['verify', 'cramer-rao', '--cases', '1'])
        first = capsys.readouterr().out
        cli.main(['verify', 'cramer-rao', '--cases', '1'])
        assert capsys.readouterr().out == first

    def test_timing(self, capsys):
        """Test that --timing adds the wall time."""
        cli.main(['verify', 'cramer-rao', '--cases', '0', '--timing'])
        assert 'wall_time' in json.loads(capsys.readouterr().out)

    def test_only(self, capsys):
        """Test replaying one case."""
        assert cli.main(['verify', 'cramer-rao', '--cases', '2', '--only', 'cr1-lower-bound-0001']) == const.EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert [c['id'] for c in data['cases']] == ['cr1-lower-bound-0001']

    def test_only_unknown(self):
        """Test that an unknown case id is a usage error."""
        assert cli.main(['verify', 'cramer-rao', '--only', 'nope-0000']) == const.EXIT_USAGE

    def test_failure(self, capsys, monkeypatch):
        """Test that a failing case exits with the property code."""
        cfg = pipeline.SuiteConfig(name='maxent', checks=(Check('fails', _fails),))
        monkeypatch.setitem(pipeline.SUITE_CONFIGS, 'maxent', lambda: cfg)
        assert cli.main(['verify', 'maxent', '--cases', '1']) == const.EXIT_PROPERTY
        captured = capsys.readouterr()
        assert json.loads(captured.out)['n_failed'] == 1
        assert '--only fails-0000' in captured.err

    def test_unknown_suite(self):
        """Test that argparse rejects unknown suites."""
        assert cli.main(['verify', 'nope']) == const.EXIT_USAGE

    def test_out_file(self, tmp_path, capsys):
        """Test writing the report to a file."""
        out = tmp_path / 'report.json'
        assert cli.main(['verify', 'algebra', '--cases', '0', '--out', str(out)]) == const.EXIT_OK
        assert capsys.readouterr().out == ''
        assert json.loads(out.read_text())['suite'] == 'algebra'


class TestCurve:
    """Test the curve command."""

    def test_family(self, capsys):
        """Test a named family on a small grid."""
        assert cli.main(['curve', '--family', 'binomial:8,0.25', '--grid', '0:1:0.25']) == const.EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == ','.join(const.CURVE_COLS)
        assert len(lines) == 6

    def test_input_file(self, tmp_path, capsys):
        """Test a mass function read from JSON."""
        path = tmp_path / 'x.json'
        path.write_text('[0.25, 0.5, 0.25]')
        assert cli.main(['curve', '--input', str(path), '--grid', '0.5:1:0.5', '--check']) == const.EXIT_OK
        assert len(capsys.readouterr().out.splitlines()) == 3

    def test_mean_mismatch(self):
        """Test that a wrong lambda fails the precondition."""
        assert cli.main(['curve', '--family', 'binomial:8,0.25', '--lambda', '3']) == const.EXIT_PRECONDITION

    def test_non_ulc_check(self):
        """Test that --check refuses a geometric input."""
        assert cli.main(['curve', '--family', 'geometric:0.5', '--check']) == const.EXIT_PROPERTY

    def test_missing_file(self, tmp_path):
        """Test that an unreadable input fails the precondition."""
        assert cli.main(['curve', '--input', str(tmp_path / 'missing.json')]) == const.EXIT_PRECONDITION

    def test_bad_json(self, tmp_path):
        """Test that malformed JSON fails the precondition."""
        path = tmp_path / 'x.json'
        path.write_text('{oops')
        assert cli.main(['curve', '--input', str(path)]) == const.EXIT_PRECONDITION

    @pytest.mark.parametrize('argv', [
        ['curve', '--family', 'zipf:2'],
        ['curve', '--family', 'binomial:8,0.25', '--grid', '1:0:0.1'],
        ['curve'],
        ['curve', '--family', 'poisson:1', '--input', 'x.json'],
    ])
    def test_usage(self, argv):
        """Test malformed arguments."""
        assert cli.main(argv) == const.EXIT_USAGE


class TestAccumulate:
    """Test the accumulate command."""

    def test_default(self, capsys):
        """Test the default counts."""
        assert cli.main(['accumulate']) == const.EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == 'n,tv'
        assert [int(line.split(',')[0]) for line in lines[1:]] == const.DEFAULT_N_LIST

    def test_check(self):
        """Test the strict check on the default counts."""
        assert cli.main(['accumulate', '--check']) == const.EXIT_OK

    def test_bad_list(self):
        """Test a decreasing count list."""
        assert cli.main(['accumulate', '--n', '2,1']) == const.EXIT_USAGE

    def test_unreachable_mean(self):
        """Test that a Bernoulli base at mean 2 fails the member contract."""
        assert cli.main(['accumulate', '--lambda', '2', '--n', '1']) == const.EXIT_PROPERTY


class TestMaxentProbe:
    """Test the maxent-probe command."""

    def test_probe(self, capsys):
        """Test a small probe."""
        assert cli.main(['maxent-probe', '--n', '5', '--lambda', '2', '--trials', '10']) == const.EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data['summary']['trials'] == 10
        assert data['n_cases'] == 11

    def test_lambda_too_large(self):
        """Test that lambda must stay below n."""
        assert cli.main(['maxent-probe', '--n', '5', '--lambda', '6']) == const.EXIT_USAGE

    def test_required(self):
        """Test that n and lambda are required."""
        assert cli.main(['maxent-probe']) == const.EXIT_USAGE


class TestParser:
    """Test global options."""

    def test_no_command(self):
        """Test that a subcommand is required."""
        assert cli.main([]) == const.EXIT_USAGE

    def test_log_level_case(self, capsys):
        """Test that log levels are case-insensitive."""
        assert cli.main(['--log-level', 'info', 'verify', 'algebra', '--cases', '0']) == const.EXIT_OK
        capsys.readouterr()
