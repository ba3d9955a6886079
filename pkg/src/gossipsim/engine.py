"""Synchronous rendezvous execution of permutation-driven gossip programs.

Model
-----
``n + 1`` processors run the programs composed in :mod:`gossipsim.fsa`
over a crossbar interconnect: any pair can exchange one message per time
step, every processor performs at most one event per step, and both
sending and receiving block.  A send completes only in a step where its
addressee is simultaneously waiting to receive (rendezvous); receives
are wildcards and accept any sender.

Each step is resolved from the start-of-step state, with no cascading:

1. Every unfinished processor exposes its pending operation — the next
   send of its program (with its target), or a wildcard receive.
2. Pending sends are granted in ascending ``(session, sender id)`` order
   ("earliest-session" tie-break; identical to lowest-sender-id when a
   run has a single session).  A send is granted when its target's
   pending operation is a receive and no earlier sender claimed that
   target this step.
3. Granted pairs record send/receive and both programs advance.  Denied
   senders record a wait-to-send; everyone else records a wait-to-
   receive, which is also the padding for finished processors.

With the optimizer enabled (greedy target substitution), a sender whose
scheduled target is unavailable scans its permutation in order for the
first *unserved* target that is ready to receive this step and sends to
it instead, marking it served for the current session; if none exists
it waits.  Broadcasters resolve sequentially in the grant order above,
each seeing earlier claims.

Multi-session runs repeat each processor's program body back-to-back;
session boundaries are per-processor program positions, not barriers.

A run ends when every program finishes; the run length is the last step
containing a transmission.  A step with zero grants while work remains
is a deadlock and raises :class:`DeadlockError` carrying the partial
table (unreachable for valid single-session systems, but user-supplied
permutation sets are taken as given and may stall).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

import numpy as np

from . import _kernel
from .fsa import Permutation

WAIT_RECV_CELL = -1
WAIT_SEND_CELL = -2

TIE_BREAKS = ("earliest-session", "lowest-sender-id")


class ActionKind(Enum):
    SEND = "S"
    RECV = "R"
    WAIT_RECV = "-"
    WAIT_SEND = "*"


@dataclass(frozen=True)
class Action:
    """One cell of a run table; ``peer`` is the addressee of a send or
    the source of a receive, and ``None`` for waits."""

    kind: ActionKind
    peer: int | None = None


@dataclass(frozen=True)
class SimConfig:
    """Execution policy for one run.

    ``max_steps`` bounds the simulation to turn unforeseen livelock into
    a diagnosable error; ``None`` selects ``4 (n+1) (n + sessions*n)``.
    """

    tie_break: str = "earliest-session"
    optimizer: bool = False
    sessions: int = 1
    max_steps: int | None = None

    def __post_init__(self) -> None:
        if self.tie_break not in TIE_BREAKS:
            raise ValueError(f"unknown tie_break {self.tie_break!r}")
        if self.sessions < 1:
            raise ValueError("sessions must be >= 1")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


@dataclass(frozen=True, eq=False)
class RunTable:
    """Complete (n+1) x length action grid of one run.

    ``cells`` uses the integer codes of :mod:`gossipsim._kernel`.
    Equality compares the observable run (n, sessions, length, cells);
    ``perms``/``optimized`` are provenance kept for verification.
    """

    n: int
    sessions: int
    length: int
    cells: np.ndarray
    perms: tuple[tuple[int, ...], ...] | None = None
    optimized: bool = False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RunTable):
            return NotImplemented
        return (
            self.n == other.n
            and self.sessions == other.sessions
            and self.length == other.length
            and np.array_equal(self.cells, other.cells)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.sessions, self.length, self.cells.tobytes()))

    def action(self, i: int, t: int) -> Action:
        """Decode the action of processor ``i`` at 0-based step ``t``."""
        code = int(self.cells[i, t])
        m = self.n + 1
        if code == WAIT_RECV_CELL:
            return Action(ActionKind.WAIT_RECV)
        if code == WAIT_SEND_CELL:
            return Action(ActionKind.WAIT_SEND)
        if 0 <= code < m:
            return Action(ActionKind.SEND, code)
        return Action(ActionKind.RECV, code - m)

    @property
    def nu(self) -> tuple[int, ...]:
        """Used-slot count per step."""
        return tuple(int(c) for c in (self.cells >= 0).sum(axis=0))


@dataclass(frozen=True)
class RunStats:
    """Grid-free run summary from the metrics path of the engine."""

    n: int
    sessions: int
    length: int
    nu: tuple[int, ...]
    completions: tuple[int, ...]


class GossipError(Exception):
    """Base for simulation failures."""


class DeadlockError(GossipError):
    """A step granted no sends while programs were unfinished."""

    def __init__(self, message: str, partial: RunTable) -> None:
        super().__init__(message)
        self.partial = partial


class RunawayError(GossipError):
    """The step bound was exhausted before the run completed."""

    def __init__(self, message: str, partial: RunTable) -> None:
        super().__init__(message)
        self.partial = partial


def _perm_matrix(n: int, perms: Sequence[Permutation]) -> np.ndarray:
    if n < 1:
        raise ValueError(f"system size n must be >= 1, got {n}")
    if len(perms) != n + 1:
        raise ValueError(f"expected {n + 1} permutations, got {len(perms)}")
    mat = np.empty((n + 1, n), dtype=np.int64)
    for i, p in enumerate(perms):
        if p.owner != i:
            raise ValueError(f"permutation {i} has owner {p.owner}")
        if p.n != n:
            raise ValueError(f"permutation {i} built for n={p.n}, run has n={n}")
        if len(p.targets) != n:
            raise ValueError(f"permutation {i} has {len(p.targets)} targets")
        mat[i] = p.targets
    return mat


def _default_max_steps(n: int, sessions: int) -> int:
    return 4 * (n + 1) * (n + sessions * n)


def _run(mat: np.ndarray, config: SimConfig, record: bool,
         step_cap: int | None = None):
    m, n = mat.shape
    max_steps = config.max_steps or _default_max_steps(n, config.sessions)
    cap = min(max_steps, config.sessions * n * m + 1)
    if step_cap is not None:
        cap = min(cap, step_cap)
        max_steps = min(max_steps, step_cap)
    nu = np.zeros(cap + 1, dtype=np.int64)
    comp = np.zeros(cap + 1, dtype=np.int64)
    if record:
        grid = np.full((m, cap), WAIT_RECV_CELL, dtype=np.int16)
    else:
        grid = np.zeros((1, 1), dtype=np.int16)
    status, steps = _kernel.run_steps(
        mat,
        config.sessions,
        config.optimizer,
        config.tie_break == "earliest-session",
        record,
        grid,
        nu,
        comp,
        max_steps,
    )
    return status, steps, nu, comp, grid


def _table(mat: np.ndarray, config: SimConfig, perms: Sequence[Permutation],
           steps: int) -> RunTable:
    # deterministic re-run sized to the known step count
    _, _, _, _, grid = _run(mat, config, record=True, step_cap=steps)
    return RunTable(
        n=mat.shape[1],
        sessions=config.sessions,
        length=steps,
        cells=grid[:, :steps].copy(),
        perms=tuple(tuple(p.targets) for p in perms),
        optimized=config.optimizer,
    )


def _raise_on_failure(status: int, steps: int, mat: np.ndarray,
                      config: SimConfig, perms: Sequence[Permutation]) -> None:
    if status == _kernel.OK:
        return
    partial = _table(mat, config, perms, steps)
    if status == _kernel.DEADLOCK:
        raise DeadlockError(
            f"deadlock at step {steps}: no transmission possible but "
            f"programs are unfinished",
            partial,
        )
    raise RunawayError(
        f"run exceeded max_steps={config.max_steps or _default_max_steps(mat.shape[1], config.sessions)}",
        partial,
    )


def simulate(n: int, perms: Sequence[Permutation],
             config: SimConfig | None = None) -> RunTable:
    """Run the base (non-optimizing) simulation and return its RunTable.

    ``perms`` supplies one Permutation per processor; callers are
    responsible for their validity (see :func:`fsa.validate_permutation`)
    — structurally broken inputs surface as :class:`DeadlockError`.
    """
    config = config or SimConfig()
    if config.optimizer:
        raise ValueError("simulate() runs the base rule; use simulate_optimized()")
    mat = _perm_matrix(n, perms)
    status, steps, _, _, _ = _run(mat, config, record=False)
    _raise_on_failure(status, steps, mat, config, perms)
    return _table(mat, config, perms, steps)


def simulate_optimized(n: int, perms: Sequence[Permutation],
                       config: SimConfig | None = None) -> RunTable:
    """Run with greedy target substitution (see module docstring)."""
    config = config or SimConfig(optimizer=True)
    if not config.optimizer:
        config = replace(config, optimizer=True)
    mat = _perm_matrix(n, perms)
    status, steps, _, _, _ = _run(mat, config, record=False)
    _raise_on_failure(status, steps, mat, config, perms)
    return _table(mat, config, perms, steps)


def simulate_sessions(n: int, perms: Sequence[Permutation], g: int,
                      config: SimConfig | None = None) -> RunTable:
    """Run ``g`` back-to-back gossip sessions (program body repeated)."""
    if g < 1:
        raise ValueError("session count must be >= 1")
    config = replace(config or SimConfig(), sessions=g)
    mat = _perm_matrix(n, perms)
    status, steps, _, _, _ = _run(mat, config, record=False)
    _raise_on_failure(status, steps, mat, config, perms)
    return _table(mat, config, perms, steps)


def measure(n: int, perms: Sequence[Permutation],
            config: SimConfig | None = None) -> RunStats:
    """Run without recording the grid; returns per-step counts only.

    Behaviour is identical to the table-producing entry points — same
    kernel, same step rule — so lengths and utilization agree exactly.
    """
    config = config or SimConfig()
    mat = _perm_matrix(n, perms)
    status, steps, nu, comp, _ = _run(mat, config, record=False)
    _raise_on_failure(status, steps, mat, config, perms)
    return RunStats(
        n=n,
        sessions=config.sessions,
        length=steps,
        nu=tuple(int(v) for v in nu[1 : steps + 1]),
        completions=tuple(int(v) for v in comp[1 : steps + 1]),
    )


def verify_run(rt: RunTable) -> list[str]:
    """Check a run table against the model invariants.

    Returns an empty list when the table is coherent, otherwise one
    message per violation: rendezvous pairing, per-pair message counts,
    no all-wait columns, per-processor program structure (receive gate
    of ``i`` messages per session before broadcasting, every other
    processor addressed exactly once per session, remaining receives
    after), and — when the table carries its permutations and was not
    optimized — the exact scheduled send order.
    """
    problems: list[str] = []
    m = rt.n + 1
    cells = rt.cells
    if cells.shape != (m, rt.length):
        return [f"grid shape {cells.shape} does not match ({m}, {rt.length})"]

    # Rendezvous pairing, column by column.
    sends_per_pair = np.zeros((m, m), dtype=np.int64)
    for t in range(rt.length):
        used = 0
        for i in range(m):
            code = int(cells[i, t])
            if 0 <= code < m:
                used += 1
                if code == i:
                    problems.append(f"step {t + 1}: processor {i} sends to itself")
                elif int(cells[code, t]) != m + i:
                    problems.append(
                        f"step {t + 1}: send {i}->{code} has no matching receive"
                    )
                else:
                    sends_per_pair[i, code] += 1
            elif code >= m:
                used += 1
        for i in (i for i in range(m) if int(cells[i, t]) >= m):
            src = int(cells[i, t]) - m
            if not 0 <= src < m or int(cells[src, t]) != i:
                problems.append(
                    f"step {t + 1}: receive at {i} from {src} has no matching send"
                )
        if used == 0:
            problems.append(f"step {t + 1}: column is all-wait")
        if problems and len(problems) > 50:
            problems.append("... further checks skipped")
            return problems

    # Every ordered pair exactly `sessions` times.
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            if sends_per_pair[i, j] != rt.sessions:
                problems.append(
                    f"pair ({i},{j}) communicates {int(sends_per_pair[i, j])} "
                    f"times, expected {rt.sessions}"
                )

    # Per-processor program structure, session by session.
    for i in range(m):
        ops: list[tuple[str, int]] = []
        for t in range(rt.length):
            code = int(cells[i, t])
            if 0 <= code < m:
                ops.append(("S", code))
            elif code >= m:
                ops.append(("R", code - m))
        expected_len = 2 * rt.n * rt.sessions
        if len(ops) != expected_len:
            problems.append(
                f"processor {i}: {len(ops)} transmissions, expected {expected_len}"
            )
            continue
        others = set(range(m)) - {i}
        for s in range(rt.sessions):
            body = ops[s * 2 * rt.n : (s + 1) * 2 * rt.n]
            gate = body[:i]
            sends = body[i : i + rt.n]
            tail = body[i + rt.n :]
            if any(kind != "R" for kind, _ in gate):
                problems.append(
                    f"processor {i} session {s + 1}: broadcast before its "
                    f"{i}-receive gate"
                )
            if any(kind != "S" for kind, _ in sends):
                problems.append(
                    f"processor {i} session {s + 1}: receive interrupts broadcast"
                )
                continue
            targets = [peer for _, peer in sends]
            if set(targets) != others or len(targets) != rt.n:
                problems.append(
                    f"processor {i} session {s + 1}: send targets {targets} do "
                    f"not cover the other processors exactly once"
                )
            elif rt.perms is not None and not rt.optimized:
                if tuple(targets) != rt.perms[i]:
                    problems.append(
                        f"processor {i} session {s + 1}: send order {targets} "
                        f"deviates from its permutation {list(rt.perms[i])}"
                    )
            if any(kind != "R" for kind, _ in tail):
                problems.append(
                    f"processor {i} session {s + 1}: send after its broadcast"
                )
    return problems
