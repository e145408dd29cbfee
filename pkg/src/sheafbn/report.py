"""JSON and plain-text rendering of computation results."""

from __future__ import annotations

import json

from .bncheck import AsphericityVerdict, BNReport, E2Page
from .exactalg import FpModule


def to_jsonable(obj):
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def canonical_json(obj) -> str:
    """Sorted keys, fixed separators: byte-identical for equal inputs."""
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _mod(m) -> str:
    return "-" if m is None else str(m)


def _fmt_bool(b) -> str:
    return {True: "yes", False: "NO", None: "-"}[b]


def _table(header, rows) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = [" | ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines)


def _render_verdict(v: AsphericityVerdict) -> str:
    line = f"asphericity: {v.status}"
    if v.certificate:
        line += f" ({v.certificate})"
    if v.witness_degree is not None:
        line += f"; witness H_{v.witness_degree}(universal cover) = {v.module}"
    if v.reason:
        line += f"; {v.reason}"
    return line


def _render_bn(r: BNReport) -> str:
    out = ["Condition (2)", "  " + _render_verdict(r.asphericity), "", "Condition (3): R^i Qc vanishing"]
    if r.condition3_skipped:
        out.append(f"  skipped: {r.condition3_skipped}")
    else:
        out.append(_table(["sheaf", "degree", "R^i Qc", "vanished"],
                          [[e.sheaf_id, e.degree, _mod(e.module), _fmt_bool(e.vanished)]
                           for e in r.condition3]))
    out += ["", "Condition (4): group vs sheaf cohomology"]
    out.append(_table(["rep", "degree", "group side", "sheaf side", "flag", "agree"],
                      [[e.rep_id, e.degree, _mod(e.group_side), _mod(e.sheaf_side),
                        e.flag, _fmt_bool(e.agree)] for e in r.condition4]))
    p = r.passes
    out += ["", "passes: " + ", ".join(f"{k}={_fmt_bool(v)}" for k, v in sorted(p.items())),
            f"consistent: {_fmt_bool(r.consistent)}"]
    return "\n".join(out)


def _render_e2(page: E2Page) -> str:
    pmax, qmax = page.window
    header = ["q\\p"] + [str(p) for p in range(pmax + 1)]
    rows = [[str(q)] + [str(page.entries[(p, q)]) for p in range(pmax + 1)]
            for q in range(qmax, -1, -1)]
    out = ["E2 page", _table(header, rows), ""]
    crow = []
    for n in sorted(page.checks):
        c = page.checks[n]
        crow.append([n, c["e2_total"], c["abutment"], _fmt_bool(c["inequality_holds"]),
                     "nonzero d_r" if c["differentials_nonzero"] else "",
                     _fmt_bool(c["edge_equal"]), _fmt_bool(c["column_equal"])])
    out.append(_table(["n", "sum E2", "dim H^n", "sum >= H^n", "differentials",
                       "E2^{n,0}=H^n", "E2^{0,n}=H^n"], crow))
    return "\n".join(out)


def render_report(report, fmt: str = "json") -> str:
    if fmt == "json":
        return canonical_json(report)
    if isinstance(report, FpModule):
        return str(report)
    if isinstance(report, BNReport):
        return _render_bn(report)
    if isinstance(report, E2Page):
        return _render_e2(report)
    if isinstance(report, AsphericityVerdict):
        return _render_verdict(report)
    # plain dictionaries from the simpler verbs
    return _render_plain(to_jsonable(report))


def _render_plain(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if set(obj) == {"ring", "free_rank", "torsion"}:
            return pad + str(FpModule.from_json(obj))
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _is_module(v):
                lines.append(f"{pad}{k}:")
                lines.append(_render_plain(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_render_plain(v).strip()}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return pad + json.dumps(obj)
        return "\n".join(_render_plain(v, indent) for v in obj)
    return pad + str(obj)


def _is_module(v) -> bool:
    return isinstance(v, dict) and set(v) == {"ring", "free_rank", "torsion"}
