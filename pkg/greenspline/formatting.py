"""
Plain-text tables for the command line (kernel catalog, verification report).
"""

from typing import Any, Dict, List, Optional


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.3e}"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, tuple)):
        return "; ".join(str(v) for v in value) or "-"
    return str(value)


def format_table(rows: List[Dict[str, Any]], columns: Optional[List[str]] = None, title: str = "") -> str:
    """
    Render rows of dictionaries as a pipe table.

    Headers are the column keys in Title Case; every column is padded to its
    widest cell.
    """
    if not rows:
        return "No data to display\n"
    columns = columns or list(rows[0].keys())
    headers = [c.replace("_", " ").title() for c in columns]
    body = [[_cell(row.get(c, "N/A")) for c in columns] for row in rows]
    widths = [max(len(h), *(len(r[j]) for r in body)) for j, h in enumerate(headers)]

    def line(cells: List[str]) -> str:
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"

    out = []
    if title:
        out += [title, ""]
    out.append(line(headers))
    out.append("|" + "|".join("-" * (w + 2) for w in widths) + "|")
    out += [line(r) for r in body]
    return "\n".join(out) + "\n"


def format_kernel_table(rows: List[Dict[str, Any]]) -> str:
    """The list-kernels listing."""
    return format_table(rows, ["id", "family", "formula", "constraints", "symmetric"])


def format_report(report: Dict[str, Any]) -> str:
    """Per-check pass/fail lines followed by a summary."""
    rows = [
        {
            "status": "PASS" if c["passed"] else "FAIL",
            "suite": c["suite"],
            "check": c["name"],
            "max_residual": c["max_residual"],
            "tolerance": c["tolerance"],
            "note": c.get("error") or "",
        }
        for c in report["checks"]
    ]
    table = format_table(rows, title="Verification report")
    summary = (
        f"\n{report['passed']}/{report['total']} checks passed "
        f"in {report['duration_seconds']:.1f}s\n"
    )
    return table + summary
