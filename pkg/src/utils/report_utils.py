"""Report generation utilities for sweep results in several formats."""

import csv
import json
import logging
import sys
from collections import Counter
from datetime import datetime
from pathlib import Path
from typing import Dict, List

try:
    from colorama import Fore, Style
    COLORAMA_AVAILABLE = True
except ImportError:
    COLORAMA_AVAILABLE = False

logger = logging.getLogger(__name__)

REPORT_FORMATS = ('json', 'csv', 'txt')
REPORT_FIELDS = ['loop', 'transform', 'backend', 'passed', 'message']


def generate_report(records: List[Dict], format: str, output_path: str = None) -> str:
    """Generate a sweep report in the specified format.

    Args:
        records: Sweep records as returned by ``run_sweep``
        format: Report format (json, csv, txt)
        output_path: Optional output file path; a timestamped name is used if None

    Returns:
        str: Path to the generated report file

    Raises:
        ValueError: If format is not supported
    """
    format = format.lower()

    if format == 'json':
        return _generate_json_report(records, output_path)
    elif format == 'csv':
        return _generate_csv_report(records, output_path)
    elif format == 'txt':
        return _generate_txt_report(records, output_path)
    else:
        raise ValueError(f"Unsupported format: {format}. Use json, csv, or txt.")


def _default_path(output_path: str | None, extension: str) -> Path:
    if output_path is None:
        output_path = f"sweep_report_{datetime.now().strftime('%Y%m%d_%H%M%S')}.{extension}"
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def summarize(records: List[Dict]) -> Dict:
    """Pass/fail totals overall and per transformation and backend."""
    per_transform: Dict[str, Counter] = {}
    for record in records:
        key = f"{record['transform']} [{record['backend']}]"
        per_transform.setdefault(key, Counter())['passed' if record['passed'] else 'failed'] += 1
    return {
        'total': len(records),
        'passed': sum(1 for r in records if r['passed']),
        'failed': sum(1 for r in records if not r['passed']),
        'by_transform': {k: dict(v) for k, v in per_transform.items()},
    }


def _generate_json_report(records: List[Dict], output_path: str = None) -> str:
    """Generate JSON format report: a summary plus the failing records."""
    try:
        path = _default_path(output_path, 'json')
        content = {
            'generated': datetime.now().isoformat(timespec='seconds'),
            'summary': summarize(records),
            'failures': [r for r in records if not r['passed']],
        }
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(content, f, indent=2, ensure_ascii=False)

        logger.info(f"JSON report generated: {path}")
        return str(path)
    except Exception as e:
        logger.error(f"Error generating JSON report: {e}")
        raise


def _generate_csv_report(records: List[Dict], output_path: str = None) -> str:
    """Generate CSV format report with one row per run."""
    try:
        path = _default_path(output_path, 'csv')

        if not records:
            logger.warning("No sweep records to write to CSV")

        with open(path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=REPORT_FIELDS)
            writer.writeheader()
            writer.writerows({k: r.get(k, '') for k in REPORT_FIELDS} for r in records)

        logger.info(f"CSV report generated: {path}")
        return str(path)
    except Exception as e:
        logger.error(f"Error generating CSV report: {e}")
        raise


def _generate_txt_report(records: List[Dict], output_path: str = None) -> str:
    """Generate TXT format report with totals and the first failures."""
    try:
        path = _default_path(output_path, 'txt')
        summary = summarize(records)

        lines = []
        lines.append("=" * 80)
        lines.append("LOOP TRANSFORMATION SWEEP")
        lines.append(f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
        lines.append("=" * 80)
        lines.append(f"\nRuns: {summary['total']}  Passed: {summary['passed']}  Failed: {summary['failed']}\n")

        for name, counts in sorted(summary['by_transform'].items()):
            lines.append(f"  {name:<45} {counts.get('passed', 0):>7} passed {counts.get('failed', 0):>5} failed")

        failures = [r for r in records if not r['passed']]
        if failures:
            lines.append(f"\n--- Failures (first {min(len(failures), 50)}) ---")
            for record in failures[:50]:
                lines.append(f"{record['loop']} | {record['transform']} | {record['backend']}")
                lines.append(f"  {record['message']}")

        lines.append("\n" + "=" * 80)
        report_text = "\n".join(lines)

        with open(path, 'w', encoding='utf-8') as f:
            f.write(report_text)

        if COLORAMA_AVAILABLE:
            color = Fore.GREEN if not failures else Fore.RED
            print(color + f"Sweep: {summary['passed']}/{summary['total']} passed" + Style.RESET_ALL, file=sys.stderr)

        logger.info(f"TXT report generated: {path}")
        return str(path)
    except Exception as e:
        logger.error(f"Error generating TXT report: {e}")
        raise
