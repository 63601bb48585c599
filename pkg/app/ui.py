"""
Output components for the selection command line.

Machine-readable results go to stdout (JSON for single objects, CSV for
tables); human-oriented summaries go to stderr so they never mix with data.
"""
import json
import sys
from typing import Any, Dict, List, Mapping, Optional, TextIO

from config.settings import INDENT_LEVEL


def render_json(data: Any) -> str:
    """Render ``data`` as indented JSON with keys in insertion order."""
    return json.dumps(data, indent=INDENT_LEVEL, ensure_ascii=False)


def emit_json(data: Any, stream: Optional[TextIO] = None) -> None:
    print(render_json(data), file=stream or sys.stdout)


def emit_text(text: str, stream: Optional[TextIO] = None) -> None:
    """Write text verbatim, adding a final newline only when missing."""
    out = stream or sys.stdout
    out.write(text if text.endswith('\n') else text + '\n')


def emit_csv(csv_text: str, config: Mapping[str, Any], stream: Optional[TextIO] = None) -> None:
    """
    Write a CSV table preceded by one ``#`` comment line holding the effective configuration.

    Args:
        csv_text: The table, header row included
        config: Effective settings echoed before the table
        stream: Destination, stdout by default
    """
    emit_text(f"# config: {json.dumps(config, sort_keys=True)}\n" + csv_text, stream)


def display_header(title: str, stream: Optional[TextIO] = None) -> None:
    """
    Display a formatted header.

    Args:
        title: The title to display in the header
        stream: Destination, stderr by default
    """
    out = stream or sys.stderr
    print("=" * 60, file=out)
    print(f"{title:^60}", file=out)
    print("=" * 60, file=out)


def display_verification(report: Mapping[str, Any], stream: Optional[TextIO] = None) -> None:
    """
    Display a verification summary.

    Args:
        report: A verification report as produced by ``to_json``
        stream: Destination, stderr by default
    """
    out = stream or sys.stderr
    display_header(f"Verification: {report['suite']}", out)
    status = "PASS" if report['passed'] else "FAIL"
    print(f"{status}: {report['checks']} checks, {len(report['failures'])} failures", file=out)
    _display_failure_table(report['failures'], out)


def _display_failure_table(failures: List[Dict[str, Any]], out: TextIO) -> None:
    if not failures:
        return

    # Print table header
    print(" | ".join(["#", "Suite", "Check", "Details"]), file=out)
    print("-" * 60, file=out)

    # Only the first rows; the JSON output carries the full list
    for i, entry in enumerate(failures[:10], 1):
        details = {k: v for k, v in entry.items() if k not in ('suite', 'check')}
        row = [
            str(i).rjust(3),
            str(entry.get('suite', '')).ljust(12),
            str(entry.get('check', '')).ljust(24),
            json.dumps(details, default=str)[:80],
        ]
        print(" | ".join(row), file=out)
