"""
Machine and human renderings of a run report.

The machine form is one JSON document with sorted keys and no timings, so
two runs on the same scene and options produce identical bytes.
"""
import json
from typing import Any, Dict, List

from semisep.core.errors import ExitStatus
from semisep.core.records import Report

SCHEMA_VERSION = 1

_STATUS_TEXT = {
    ExitStatus.SEPARABLE: "separable",
    ExitStatus.GENERIC_ONLY: "generically separable only",
    ExitStatus.NOT_SEPARABLE: "not separable",
    ExitStatus.UNSUPPORTED: "unsupported instance",
    ExitStatus.INPUT_ERROR: "input error",
}


def _strip_timing(data: Dict[str, Any]) -> Dict[str, Any]:
    data = dict(data)
    data.pop("timing", None)
    oracle = data.get("oracle")
    if oracle:
        data["oracle"] = dict(oracle, trials=[{k: v for k, v in t.items() if k != "seconds"} for t in oracle["trials"]])
    return data


def to_json(report: Report) -> str:
    document = {"schema": SCHEMA_VERSION, **_strip_timing(report.to_dict())}
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def from_json(text: str) -> Report:
    data = json.loads(text)
    data.pop("schema", None)
    return Report.from_dict(data)


def status_text(status: int) -> str:
    return _STATUS_TEXT.get(ExitStatus(status), str(status))


def summary(report: Report) -> str:
    """Human-readable multi-line summary."""
    lines: List[str] = [f"scene {report.scene} [{report.mode}]: {status_text(report.status)} (exit {report.status})"]
    if report.error:
        lines.append(f"  error {report.error['code']}: {report.error['message']}")
    verdict = report.verdict
    if verdict is not None:
        strict = "-" if verdict.strict is None else ("YES" if verdict.strict else "NO")
        lines.append(f"  generic: {'YES' if verdict.generic else 'NO'}   strict: {strict}")
        if verdict.quick_accept:
            lines.append("  closures are disjoint; no walls to test")
        for record in verdict.blowup_log:
            where = " (at infinity)" if record.at_infinity else ""
            lines.append(f"  blow-up {record.exceptional} of {record.chart} at ({', '.join(record.center)}){where}")
        if verdict.wall_reports:
            lines.append("  walls:")
        for w in verdict.wall_reports:
            parity = ""
            if w.odd is not None:
                parity = f" odd={w.odd} even={w.even}"
            lines.append(f"    {w.wall:<8} {w.kind:<12} {'pass' if w.verdict else 'FAIL'} via {w.via}"
                         f" charts={','.join(w.charts)}{parity}")
        failing = [e for e in verdict.obstruction_list if not e.shadows_separable]
        if verdict.obstruction_list:
            lines.append(f"  obstruction list: {len(verdict.obstruction_list)} entries, {len(failing)} failing")
        if verdict.obstruction:
            lines.append(f"  obstruction: {verdict.obstruction}")
        if verdict.nullspace_meets is not None:
            lines.append(f"  separation nullspace meets A u B: {verdict.nullspace_meets}")
    oracle = report.oracle
    if oracle is not None:
        swept = ", ".join(f"{t.degree}:{'ok' if t.feasible else '-'}({t.seconds:.2f}s)" for t in oracle.trials)
        lines.append(f"  oracle: {oracle.samples_a}+{oracle.samples_b} samples, degrees {swept}")
        if oracle.certificate:
            lines.append(f"  certificate: {oracle.certificate} (margin {oracle.margin})")
        if oracle.agreement is not None:
            lines.append(f"  oracle agrees with the verdict: {oracle.agreement}")
    if report.timing:
        lines.append("  timing: " + ", ".join(f"{k}={v:.2f}s" for k, v in sorted(report.timing.items())))
    return "\n".join(lines)
