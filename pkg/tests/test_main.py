"""Tests for the command-line driver."""

from io import StringIO
from unittest.mock import patch

import pytest

from main import parse_env, run_cli, UsageError


def cli(*argv):
    stdout, stderr = StringIO(), StringIO()
    code = run_cli(list(argv), stdout, stderr)
    return code, stdout.getvalue(), stderr.getvalue()


def test_emit_trace(corpus_path):
    """Test printing the trace of the transformed program."""
    code, out, _ = cli('--emit=trace', corpus_path('full_over_partial.c'))

    assert code == 0
    assert out == "body(7)\nbody(10)\nbody(13)\nbody(16)\n"


@pytest.mark.parametrize('backend', ['shadow', 'irbuilder'])
@pytest.mark.parametrize('source,expected', [
    ("#pragma omp unroll full\nfor (int i = 0; i < 2; ++i)\n    for (int j = 0; j < 3; ++j) body(i, j);\n",
     ''.join(f"body({i}, {j})\n" for i in range(2) for j in range(3))),
    ("#pragma omp unroll full\n#pragma omp tile sizes(2)\nfor (int i = 0; i < 5; ++i) body(i);\n",
     ''.join(f"body({i})\n" for i in range(5))),
])
def test_emit_trace_full_unroll_of_outer_loop(tmp_path, backend, source, expected):
    """Test full unroll over a nest or a tile prints the reference trace."""
    path = tmp_path / 'outer.c'
    path.write_text(source, encoding='utf-8')

    code, out, err = cli(f'--backend={backend}', '--emit=trace', str(path))

    assert code == 0, err
    assert out == expected


@pytest.mark.parametrize('backend,summary', [
    ('irbuilder', 'verify: OK (traces equal, skeleton valid)'),
    ('shadow', 'verify: OK (traces equal, generated loops canonical)'),
])
def test_verify(corpus_path, backend, summary):
    """Test the verification summary goes to stderr."""
    code, out, err = cli(f'--backend={backend}', '--verify', corpus_path('full_over_partial.c'))

    assert code == 0
    assert out == ''
    assert summary in err


def test_verify_failure_exit_code(corpus_path):
    """Test a failed verification exits with 2."""
    with patch('main.verify_pipeline') as verify:
        verify.return_value.passed = False
        verify.return_value.problems = []
        verify.return_value.summary.return_value = 'verify: FAILED (traces differ under exact-order)'
        code, _, err = cli('--verify', corpus_path('full_over_partial.c'))

    assert code == 2
    assert 'verify: FAILED' in err


def test_syntax_only_dump(corpus_path):
    """Test --syntax-only stops after sema and may dump the AST."""
    code, out, _ = cli('--syntax-only', '--emit=ast', corpus_path('stride3.c'))

    assert code == 0
    assert out.startswith('TranslationUnitDecl')


def test_syntax_only_reports_errors(corpus_path):
    """Test a semantic error exits with 1 and a rendered diagnostic."""
    code, out, err = cli('--syntax-only', corpus_path('bad_depth.c'))

    assert code == 1
    assert out == ''
    assert 'error: insufficient loop nest depth' in err


def test_syntax_only_refuses_other_artifacts(corpus_path):
    """Test only the AST can be emitted without a backend."""
    code, _, err = cli('--syntax-only', '--emit=ir', corpus_path('stride3.c'))

    assert code == 3
    assert "--syntax-only cannot emit 'ir'" in err


def test_env_and_strategy(corpus_path):
    """Test runtime bindings reach the interpreter."""
    code, out, _ = cli('--run', '--env', 'N=5', '--unroll-strategy=remainder-loop', corpus_path('remainder.c'))

    assert code == 0
    assert out.count('body(') == 5


def test_trace_file(corpus_path, tmp_path):
    """Test --trace writes the trace to a file."""
    trace = tmp_path / 'trace.txt'

    code, out, _ = cli('--trace', str(trace), corpus_path('stride3.c'))

    assert code == 0
    assert out == ''
    assert trace.read_text(encoding='utf-8') == "body(7)\nbody(10)\nbody(13)\nbody(16)\n"


def test_usage_errors(corpus_path):
    """Test bad command lines exit with 3."""
    assert cli('--emit=bitcode', corpus_path('stride3.c'))[0] == 3
    assert cli('--emit=ast')[0] == 3
    assert cli('--threads', '0', corpus_path('stride3.c'))[0] == 3
    assert cli('--env', 'N', corpus_path('remainder.c'))[0] == 3


def test_missing_file(tmp_path):
    """Test an unreadable input exits with 1."""
    code, _, err = cli(str(tmp_path / 'absent.c'))

    assert code == 1
    assert 'loomp: error:' in err


def test_sweep(tmp_path):
    """Test the sweep summary, the report and the failure exit code."""
    records = [
        {'loop': 'i=0 lt 4 step 1', 'transform': 'unroll full', 'backend': 'shadow', 'passed': True, 'message': 'ok'},
        {'loop': 'i=0 lt 4 step 1', 'transform': 'unroll full', 'backend': 'irbuilder', 'passed': False,
         'message': 'bad'},
    ]
    report = tmp_path / 'sweep.json'

    with patch('main.run_sweep', return_value=records) as run_sweep:
        code, _, err = cli('--sweep', '--sweep-stride', '4', '--report', 'json', '--output', str(report))

    assert code == 2
    assert run_sweep.call_args.args[:2] == (None, 4)
    assert 'sweep: 1/2 run(s) passed' in err
    assert report.exists()


def test_sweep_stride_must_be_positive():
    """Test a zero stride is a usage error."""
    assert cli('--sweep', '--sweep-stride', '0')[0] == 3


def test_parse_env():
    """Test bindings accept any integer literal base."""
    assert parse_env(['n=10', 'm = 0x10']) == {'n': 10, 'm': 16}
    with pytest.raises(UsageError):
        parse_env(['n=ten'])
