"""Run-table serialization: round-trippable text, CSV, JSON, and PGM.

Text format: one line per processor, ``i: c1 c2 ... cL`` with cells
``S<j>`` (send to j), ``R<j>`` (receive from j), ``-`` (waiting to
receive, also the padding of finished processors) and ``*`` (waiting to
send).  Lines not starting with a processor id are ignored, so metric
footers can be appended freely.  The system size, length, and session
count are all recoverable from the grid itself.
"""

from __future__ import annotations

import json
import re
from typing import IO

import numpy as np

from . import metrics
from .engine import WAIT_RECV_CELL, WAIT_SEND_CELL, RunTable

PGM_SEND = 0
PGM_RECV = 128
PGM_WAIT = 220

_ROW_RE = re.compile(r"^\s*(\d+)\s*:\s*(.*)$")


def cell_to_text(code: int, m: int) -> str:
    if code == WAIT_RECV_CELL:
        return "-"
    if code == WAIT_SEND_CELL:
        return "*"
    if 0 <= code < m:
        return f"S{code}"
    return f"R{code - m}"


def text_to_cell(token: str, m: int) -> int:
    if token == "-":
        return WAIT_RECV_CELL
    if token == "*":
        return WAIT_SEND_CELL
    kind, peer = token[0], token[1:]
    if kind in "SR" and peer.isdigit() and int(peer) < m:
        return int(peer) if kind == "S" else m + int(peer)
    raise ValueError(f"bad run-table cell {token!r}")


def render_text(rt: RunTable) -> str:
    m = rt.n + 1
    lines = []
    for i in range(m):
        cells = " ".join(cell_to_text(int(c), m) for c in rt.cells[i])
        lines.append(f"{i}: {cells}")
    return "\n".join(lines) + "\n"


def metrics_footer(rt: RunTable) -> str:
    stats = metrics.compute_metrics(rt)
    lines = [
        f"lambda={stats.length} mu={metrics.decimal_str(stats.mu, 2)} "
        f"epsilon={metrics.percent_str(stats.epsilon)}%",
        "nu=" + " ".join(str(v) for v in rt.nu),
    ]
    return "\n".join(lines) + "\n"


def parse_text(text: str) -> RunTable:
    """Parse the text format back into a RunTable.

    The session count is inferred from how often processor 0 addresses
    processor 1 (every ordered pair communicates once per session).
    """
    rows: dict[int, list[int]] = {}
    for raw in text.splitlines():
        match = _ROW_RE.match(raw)
        if not match:
            continue
        pid = int(match.group(1))
        if pid in rows:
            raise ValueError(f"duplicate row for processor {pid}")
        rows[pid] = match.group(2).split()
    if not rows:
        raise ValueError("no run-table rows found")
    m = len(rows)
    if sorted(rows) != list(range(m)):
        raise ValueError(f"rows must cover processors 0..{m - 1}")
    length = len(rows[0])
    if any(len(rows[i]) != length for i in range(m)):
        raise ValueError("ragged run table: rows differ in length")
    cells = np.empty((m, length), dtype=np.int16)
    for i in range(m):
        for t, token in enumerate(rows[i]):
            cells[i, t] = text_to_cell(token, m)
    sessions = int((cells[0] == 1).sum()) if m > 1 else 1
    return RunTable(n=m - 1, sessions=max(sessions, 1), length=length, cells=cells)


def render_csv(rt: RunTable) -> str:
    """Grid as CSV: header ``id,1..lambda``, one data row per processor."""
    m = rt.n + 1
    lines = ["id," + ",".join(str(t) for t in range(1, rt.length + 1))]
    for i in range(m):
        cells = ",".join(cell_to_text(int(c), m) for c in rt.cells[i])
        lines.append(f"{i},{cells}")
    return "\n".join(lines) + "\n"


def json_payload(rt: RunTable) -> dict:
    """JSON-ready dict: grid cells as ``{"k": kind, "p": peer}`` objects,
    utilization string, and metrics as 6-place decimal strings."""
    m = rt.n + 1
    grid = []
    for i in range(m):
        row = []
        for c in rt.cells[i]:
            code = int(c)
            if code == WAIT_RECV_CELL:
                row.append({"k": "-"})
            elif code == WAIT_SEND_CELL:
                row.append({"k": "*"})
            elif code < m:
                row.append({"k": "S", "p": code})
            else:
                row.append({"k": "R", "p": code - m})
        grid.append(row)
    stats = metrics.compute_metrics(rt)
    return {
        "n": rt.n,
        "sessions": rt.sessions,
        "lambda": rt.length,
        "grid": grid,
        "nu": list(rt.nu),
        "metrics": {
            "mu": metrics.decimal_str(stats.mu, 6),
            "epsilon": metrics.decimal_str(stats.epsilon, 6),
        },
    }


def render_json(rt: RunTable) -> str:
    return json.dumps(json_payload(rt), indent=2) + "\n"


def render_pgm(rt: RunTable) -> bytes:
    """Binary 8-bit PGM, one pixel per slot: black sends, gray receives,
    light-gray wasted slots.  Width is the run length, height ``n + 1``."""
    m = rt.n + 1
    img = np.full(rt.cells.shape, PGM_WAIT, dtype=np.uint8)
    img[(rt.cells >= 0) & (rt.cells < m)] = PGM_SEND
    img[rt.cells >= m] = PGM_RECV
    header = f"P5\n{rt.length} {m}\n255\n".encode("ascii")
    return header + img.tobytes()


def write_pgm(rt: RunTable, fh: IO[bytes]) -> None:
    fh.write(render_pgm(rt))
