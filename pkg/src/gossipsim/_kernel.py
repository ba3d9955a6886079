"""Jitted inner loop of the simulator.

Operates on integer state only so the same step rule serves both the
grid-recording and the metrics-only paths.  Cell codes in the recorded
grid: ``0..n`` send to that id, ``m + j`` receive from ``j``, ``-1``
wait-to-receive, ``-2`` wait-to-send (``m = n + 1``).
"""

from __future__ import annotations

import numpy as np
from numba import njit

OK = 0
DEADLOCK = 1
RUNAWAY = 2


@njit(cache=True)
def run_steps(perm, sessions, optimizer, session_priority, record, grid,
              nu_out, comp_out, max_steps):  # pragma: no cover - jitted
    """Advance the whole system step by step until every program ends.

    perm: int64[m, n] target order per processor.
    grid: int16[m, >=steps] output when record is True (pre-filled with -1).
    nu_out/comp_out: int64 per-step used-slot and completion counts,
    1-based, sized at least max reachable step + 1.
    Returns (status, steps).
    """
    m = perm.shape[0]
    n = m - 1
    body = 2 * n
    total = body * sessions
    pos = np.zeros(m, np.int64)
    served = np.zeros((m, n), np.bool_)
    pend = np.empty(m, np.int64)
    claimed = np.empty(m, np.bool_)
    senders = np.empty(m, np.int64)
    keys = np.empty(m, np.int64)
    active = m
    t = 0
    while active > 0:
        if t >= max_steps:
            return RUNAWAY, t
        t += 1
        # Pending operation per processor, from start-of-step positions:
        # -2 finished, -1 wildcard receive, >= 0 index of the next send.
        nsend = 0
        for i in range(m):
            p = pos[i]
            if p >= total:
                pend[i] = -2
            else:
                q = p % body
                if i <= q < i + n:
                    pend[i] = q - i
                    senders[nsend] = i
                    keys[nsend] = (p // body) * m + i
                    nsend += 1
                else:
                    pend[i] = -1
            claimed[i] = False
        # Grant order: ascending (session, id) under session priority,
        # plain ascending id otherwise.  With a single session the two
        # coincide, so the sort is skipped.
        if session_priority and sessions > 1 and nsend > 1:
            order = np.argsort(keys[:nsend])
        else:
            order = np.arange(nsend)
        matches = 0
        for s in range(nsend):
            i = senders[order[s]]
            k = pend[i]
            e = -1
            if optimizer:
                if not served[i, k]:
                    c = perm[i, k]
                    if pend[c] == -1 and not claimed[c]:
                        e = k
                if e < 0:
                    # scheduled target unavailable: first unserved entry
                    # of the permutation that is ready to receive
                    for l in range(n):
                        c = perm[i, l]
                        if not served[i, l] and pend[c] == -1 and not claimed[c]:
                            e = l
                            break
            else:
                c = perm[i, k]
                if pend[c] == -1 and not claimed[c]:
                    e = k
            if e >= 0:
                tgt = perm[i, e]
                if optimizer:
                    served[i, e] = True
                claimed[tgt] = True
                matches += 1
                if record:
                    grid[i, t - 1] = tgt
                    grid[tgt, t - 1] = m + i
                pos[i] += 1
                if pos[i] >= total:
                    active -= 1
                elif pos[i] % body == 0:
                    for l in range(n):
                        served[i, l] = False
                # completion: the receiver just performed the last
                # receive of one session's full message set
                qr = pos[tgt] % body
                last_recv = body - 1 if tgt < n else n - 1
                if qr == last_recv:
                    comp_out[t] += 1
                pos[tgt] += 1
                if pos[tgt] >= total:
                    active -= 1
                elif pos[tgt] % body == 0:
                    for l in range(n):
                        served[tgt, l] = False
            elif record:
                grid[i, t - 1] = -2
        nu_out[t] = 2 * matches
        if matches == 0:
            return DEADLOCK, t
    return OK, t
