"""Unit tests for text formats, payload output and config loading."""

from __future__ import annotations

import json
import math

import pandas as pd
import pytest

from pmaxent import const
from pmaxent.core import flow, pmf_core
from pmaxent.core.domain.contracts import CaseResult, VerificationReport
from pmaxent.core.domain.errors import ConstructionError
from pmaxent.io import files, param, serialize


@pytest.fixture
def report():
    """Small report with a failing case and a non-finite value."""
    return VerificationReport(
        suite='algebra',
        cases=(
            CaseResult(case_id='a-0000', passed=True, value=1e-15, tolerance=1e-12, details={'lam': 2.0}),
            CaseResult(case_id='b-0000', passed=False, value=math.nan, tolerance=1e-12, details={'error': 'x'}),
        ),
        seed=7,
        wall_time=1.5,
        summary={'checks': {'a': {'cases': 1, 'failed': 0}}},
    )


class TestPmfJson:
    """Test mass function JSON."""

    def test_write_read(self, tmp_path):
        """Test that a written mass function reads back bit for bit."""
        Z = pmf_core.poisson(1.7)
        path = tmp_path / 'z.json'
        path.write_text(serialize.pmf_to_json(Z))
        back = serialize.read_pmf(str(path))
        assert back.probs.tolist() == Z.probs.tolist()
        assert back.deficit == Z.deficit

    def test_bare_list(self):
        """Test that a bare list reads as masses with no deficit."""
        P = serialize.pmf_from_json('[0.25, 0.5, 0.25]')
        assert P.probs.tolist() == [0.25, 0.5, 0.25]
        assert P.deficit == 0.0

    @pytest.mark.parametrize('text, match', [
        ('{not json', 'not valid JSON'),
        ('"text"', 'object or a list'),
        ('{"deficit": 0.0}', 'probs'),
        ('[0.5, 0.6]', 'is not 1'),
    ])
    def test_invalid(self, text, match):
        """Test malformed inputs."""
        with pytest.raises(ConstructionError, match=match):
            serialize.pmf_from_json(text)


class TestReportJson:
    """Test report JSON."""

    def test_layout(self, report):
        """Test key order, verdict and non-finite values."""
        data = json.loads(serialize.report_to_json(report))
        assert list(data) == ['suite', 'seed', 'pass', 'n_cases', 'n_failed', 'summary', 'cases']
        assert data['pass'] is False
        assert data['n_failed'] == 1
        assert data['cases'][1]['value'] == 'nan'
        assert data['cases'][0]['id'] == 'a-0000'

    def test_timing_optional(self, report):
        """Test that wall time only appears on request."""
        assert 'wall_time' not in json.loads(serialize.report_to_json(report))
        assert json.loads(serialize.report_to_json(report, include_timing=True))['wall_time'] == 1.5

    def test_stable(self, report):
        """Test that serialization is repeatable."""
        assert serialize.report_to_json(report) == serialize.report_to_json(report)


class TestCsv:
    """Test curve and accumulation CSV."""

    def test_curve(self, tmp_path):
        """Test the curve header and a write-read cycle with nan cells."""
        curve = flow.entropy_curve(pmf_core.binomial(4, 0.5), 2.0, [0.0, 0.5, 1.0])
        text = serialize.curve_to_csv(curve)
        assert text.splitlines()[0] == ','.join(const.CURVE_COLS)
        assert len(text.splitlines()) == 4
        path = tmp_path / 'curve.csv'
        path.write_text(text)
        back = serialize.curve_from_csv(str(path), 2.0)
        assert back.column('H').tolist() == curve.column('H').tolist()
        assert math.isnan(back.column('dD')[0])

    def test_accumulation(self):
        """Test the accumulation header."""
        text = serialize.accumulation_to_csv(pd.DataFrame({'n': [1, 2], 'tv': [0.5, 0.25]}))
        assert text == 'n,tv\n1,0.5\n2,0.25\n'


class TestFiles:
    """Test payload output."""

    def test_stdout(self, capsys):
        """Test that no path means stdout, with a trailing newline."""
        files.write_text('payload')
        assert capsys.readouterr().out == 'payload\n'
        files.write_text('dash\n', '-')
        assert capsys.readouterr().out == 'dash\n'

    def test_file(self, tmp_path):
        """Test that missing folders are created."""
        out = tmp_path / 'a' / 'b' / 'out.txt'
        files.write_text('x', str(out))
        assert out.read_bytes() == b'x\n'
        assert files.read_text(str(out)) == 'x\n'

    def test_exists(self, tmp_path):
        """Test path existence."""
        assert files.exists(str(tmp_path))
        assert not files.exists('')
        assert not files.exists(str(tmp_path / 'missing'))


class TestParam:
    """Test defaults loading."""

    def test_load_section(self):
        """Test loading one section."""
        assert param.load_config('policy')['default']['max_support'] == 4096

    def test_missing_section(self):
        """Test that unknown sections are refused."""
        with pytest.raises(KeyError, match='missing'):
            param.load_config('nope')

    def test_override(self, tmp_path, monkeypatch):
        """Test that the environment variable points at another file."""
        cfg = tmp_path / 'defaults.yml'
        cfg.write_text('policy:\n  default:\n    tail_epsilon: 1.0e-9\n    max_support: 64\n')
        monkeypatch.setenv(param.CONFIG_ENV, str(cfg))
        assert param.config_file() == cfg.as_posix()
        assert param.load_config('policy')['default']['max_support'] == 64

    def test_override_missing_file(self, tmp_path, monkeypatch):
        """Test that a missing override falls back to the packaged file."""
        monkeypatch.setenv(param.CONFIG_ENV, str(tmp_path / 'missing.yml'))
        assert param.config_file().endswith('core/config/defaults.yml')
