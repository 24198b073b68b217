"""Tests for sweep report generation."""

import csv
import json
from pathlib import Path

import pytest

from src.utils.report_utils import REPORT_FIELDS, generate_report, summarize


@pytest.fixture
def sample_records():
    """Sweep records with one failure."""
    return [
        {'loop': 'i=0 lt 5 step 1', 'transform': 'tile sizes(2)', 'backend': 'shadow',
         'passed': True, 'message': 'verify: OK (traces equal, generated loops canonical)'},
        {'loop': 'i=0 lt 5 step 1', 'transform': 'tile sizes(2)', 'backend': 'irbuilder',
         'passed': True, 'message': 'verify: OK (traces equal, skeleton valid)'},
        {'loop': 'i=5 gt 0 step -2', 'transform': 'unroll full', 'backend': 'irbuilder',
         'passed': False, 'message': 'verify: FAILED (traces differ under exact-order: event 0 differs)'},
    ]


def test_summarize(sample_records):
    """Test totals and per-transformation counts."""
    summary = summarize(sample_records)

    assert summary['total'] == 3
    assert summary['passed'] == 2
    assert summary['failed'] == 1
    assert summary['by_transform']['tile sizes(2) [shadow]'] == {'passed': 1}
    assert summary['by_transform']['unroll full [irbuilder]'] == {'failed': 1}


def test_generate_json_report(sample_records, tmp_path):
    """Test the JSON report holds the summary and the failures."""
    output = tmp_path / 'report.json'

    result_path = generate_report(sample_records, 'json', str(output))

    assert Path(result_path).exists()
    with open(result_path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    assert data['summary']['failed'] == 1
    assert [r['transform'] for r in data['failures']] == ['unroll full']


def test_generate_csv_report(sample_records, tmp_path):
    """Test the CSV report has one row per run."""
    output = tmp_path / 'report.csv'

    result_path = generate_report(sample_records, 'CSV', str(output))

    with open(result_path, 'r', encoding='utf-8') as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 3
    assert list(rows[0]) == REPORT_FIELDS
    assert rows[2]['passed'] == 'False'


def test_generate_csv_report_empty(tmp_path):
    """Test an empty sweep still writes the header."""
    result_path = generate_report([], 'csv', str(tmp_path / 'empty.csv'))

    assert Path(result_path).read_text(encoding='utf-8').strip() == ','.join(REPORT_FIELDS)


def test_generate_txt_report(sample_records, tmp_path):
    """Test the text report lists totals and failures."""
    output = tmp_path / 'nested' / 'report.txt'

    result_path = generate_report(sample_records, 'txt', str(output))

    content = Path(result_path).read_text(encoding='utf-8')
    assert 'LOOP TRANSFORMATION SWEEP' in content
    assert 'Runs: 3  Passed: 2  Failed: 1' in content
    assert 'i=5 gt 0 step -2 | unroll full | irbuilder' in content


def test_generate_report_default_path(sample_records, tmp_path, monkeypatch):
    """Test a timestamped name is used when no path is given."""
    monkeypatch.chdir(tmp_path)

    result_path = generate_report(sample_records, 'json')

    assert Path(result_path).name.startswith('sweep_report_')
    assert (tmp_path / result_path).exists()


def test_generate_report_invalid_format(sample_records):
    """Test an unknown format is refused."""
    with pytest.raises(ValueError, match='Unsupported format'):
        generate_report(sample_records, 'xml')
