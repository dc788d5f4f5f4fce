import json
from typing import Literal

from src.schemas.report import ReportDocument


def render_json(report: ReportDocument) -> str:
    return json.dumps(report.model_dump(), indent=2, sort_keys=True, ensure_ascii=False)


def render_text(report: ReportDocument) -> str:
    lines = [f"command: {report.command}"]
    if report.inputs:
        lines.append("inputs:")
        lines += [f"  {key}: {value}" for key, value in sorted(report.inputs.items()) if value is not None]
    if report.results:
        lines.append("results:")
        for key, value in report.results.items():
            if isinstance(value, list):
                lines.append(f"  {key}: {', '.join(value)}")
            else:
                lines.append(f"  {key}: {value}")
    if report.certificates:
        lines.append("certificates:")
        lines += [f"  {key}: {'ok' if ok else 'FAILED'}" for key, ok in sorted(report.certificates.items())]
    if report.verdicts:
        lines.append("entries:")
        for entry in report.verdicts:
            status = "PASS" if entry.passed else ("FAIL" if entry.hard else "FLAG")
            lines.append(f"  [{status}] {entry.suite}: {entry.name}: expected {entry.expected}, computed {entry.computed}")
    if report.notes:
        lines.append("notes:")
        lines += [f"  - {note}" for note in report.notes]
    if report.summary:
        lines.append(report.summary)
    return "\n".join(lines)


def render(report: ReportDocument, fmt: Literal["text", "json"]) -> str:
    return render_json(report) if fmt == "json" else render_text(report)
