"""Run statistics and the closed-form expectations used to cross-check them.

Vocabulary (also used by the CLI and serializers):

* ``lambda`` — run length in time steps.
* ``nu`` — utilization string: used slots per step (a slot is one
  processor-step; it is used when that processor sends or receives).
* ``U`` — total used slots; every message occupies exactly two, so a
  complete run has ``U = 2 * sessions * n * (n+1)``.
* ``sigma`` — total slots, ``(n+1) * lambda``.
* ``mu`` — average used slots per step, ``U / lambda``.
* ``epsilon`` — efficiency, ``U / sigma``; always ``mu / (n+1)``.

Ratios are exact :class:`fractions.Fraction` values; decimal renderings
round half-up.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol, Sequence

UtilizationString = tuple[int, ...]


class RunLike(Protocol):
    """Anything exposing a run's shape and utilization (RunTable, RunStats)."""

    n: int
    sessions: int
    length: int

    @property
    def nu(self) -> tuple[int, ...]: ...


@dataclass(frozen=True)
class Metrics:
    """Aggregate statistics of one run.

    ``steps_per_gossip`` is the whole-run average number of steps per
    completed per-processor gossip, reported for multi-session runs only
    (``None`` otherwise); the steady-state figure is available from
    :func:`steady_steps_per_gossip`.
    """

    length: int
    used: int
    sigma: int
    mu: Fraction
    epsilon: Fraction
    steps_per_gossip: Fraction | None = None


def utilization_string(run: RunLike) -> UtilizationString:
    """Used-slot count per step of a run."""
    return tuple(run.nu)


def compute_metrics(run: RunLike) -> Metrics:
    """Exact statistics of a run (see module docstring for definitions)."""
    nu = run.nu
    used = sum(nu)
    length = run.length
    sigma = (run.n + 1) * length
    return Metrics(
        length=length,
        used=used,
        sigma=sigma,
        mu=Fraction(used, length),
        epsilon=Fraction(used, sigma),
        steps_per_gossip=(
            Fraction(length, run.sessions * (run.n + 1))
            if run.sessions > 1
            else None
        ),
    )


def four_slot_columns(run: RunLike) -> int:
    """Number of steps using exactly four slots (two transmissions)."""
    return sum(1 for v in run.nu if v == 4)


def is_palindrome(u: Sequence[int]) -> bool:
    """True when the utilization string reads the same reversed."""
    u = tuple(u)
    return u == u[::-1]


def identity_run_length(n: int) -> int:
    """Closed-form run length for the identity order, single session:
    ``3/4 n^2 + 5/4 n + 1/2 floor(n/2)`` (always an integer)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    num = 3 * n * n + 5 * n + 2 * (n // 2)
    assert num % 4 == 0
    return num // 4


def pipelined_run_length(n: int) -> int:
    """Closed-form run length for the wrap-around order: ``3 n``.

    Holds for ``n >= 2``; the two-processor system (``n = 1``) finishes
    in 2 steps and is outside this formula's domain.
    """
    if n < 2:
        raise ValueError(f"pipelined closed form needs n >= 2, got {n}")
    return 3 * n


def identity_four_slot_count(n: int) -> int:
    """Closed-form count of four-slot columns for the identity order:
    ``sum_{i=0}^{n-1} floor(i/2)``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return sum(i // 2 for i in range(n))


@dataclass(frozen=True)
class PipelinedExpectations:
    used: int
    mu: Fraction
    epsilon: Fraction


def pipelined_expectations(n: int) -> PipelinedExpectations:
    """Exact single-session statistics of the wrap-around order
    (``n >= 2``): ``U = 2n(n+1)``, ``epsilon = 2/3``, ``mu = 2(n+1)/3``."""
    if n < 2:
        raise ValueError(f"pipelined expectations need n >= 2, got {n}")
    return PipelinedExpectations(
        used=2 * n * (n + 1),
        mu=Fraction(2 * (n + 1), 3),
        epsilon=Fraction(2, 3),
    )


@dataclass(frozen=True)
class IdentityExpectations:
    mu: Fraction
    epsilon: Fraction


def identity_expectations(n: int) -> IdentityExpectations:
    """Exact single-session statistics of the identity order.

    ``mu`` increases toward 8/3 and ``epsilon`` decays toward 0 as the
    system grows; the returned values are the exact finite-n rationals,
    not the limits.
    """
    lam = identity_run_length(n)
    return IdentityExpectations(
        mu=Fraction(2 * n * (n + 1), lam),
        epsilon=Fraction(2 * n, lam),
    )


def steady_window(run: RunLike, margin: int | None = None) -> tuple[int, int]:
    """1-based inclusive column range of a multi-session run's steady
    region, excluding the fill and drain ramps.

    The default margin of ``2n + 2`` columns on both ends covers the
    first session's fill and the last session's drain.
    """
    margin = 2 * run.n + 2 if margin is None else margin
    lo, hi = margin, run.length - margin
    if lo > hi:
        raise ValueError(
            f"run of length {run.length} has no steady window with margin {margin}"
        )
    return lo, hi


def window_efficiency(run: RunLike, window: tuple[int, int] | None = None) -> Fraction:
    """Efficiency restricted to a 1-based inclusive column window."""
    lo, hi = window or steady_window(run)
    nu = run.nu[lo - 1 : hi]
    return Fraction(sum(nu), (run.n + 1) * len(nu))


def session_completions(run) -> tuple[int, ...]:
    """Per-step count of processors receiving the final message of one
    session's full set (``n`` receives per session per processor).

    Accepts a RunStats (kernel counts) or a RunTable (recomputed from
    the grid).
    """
    comp = getattr(run, "completions", None)
    if comp is not None:
        return tuple(comp)
    m = run.n + 1
    counts = [0] * run.length
    received = [0] * m
    for t in range(run.length):
        col = run.cells[:, t]
        for i in range(m):
            if int(col[i]) >= m:
                received[i] += 1
                if received[i] % run.n == 0:
                    counts[t] += 1
    return tuple(counts)


def steady_steps_per_gossip(run, window: tuple[int, int] | None = None) -> Fraction:
    """Steps per completed gossip inside the steady window, measured on
    the first fully contained zone of ``2 (n+1)`` columns.

    Raises ``ValueError`` when the window holds no full zone or the zone
    completes nothing.
    """
    lo, hi = window or steady_window(run)
    zone = 2 * (run.n + 1)
    if hi - lo + 1 < zone:
        raise ValueError("steady window shorter than one zone")
    comp = session_completions(run)
    done = sum(comp[lo - 1 : lo - 1 + zone])
    if done == 0:
        raise ValueError("no session completes inside the zone")
    return Fraction(zone, done)


def to_decimal(value: Fraction | int, places: int) -> decimal.Decimal:
    """Exact-rational to decimal, rounding half-up."""
    frac = Fraction(value)
    with decimal.localcontext() as ctx:
        ctx.prec = 50
        d = decimal.Decimal(frac.numerator) / decimal.Decimal(frac.denominator)
        return d.quantize(decimal.Decimal(1).scaleb(-places),
                          rounding=decimal.ROUND_HALF_UP)


def decimal_str(value: Fraction | int, places: int = 6) -> str:
    """Fixed-point decimal rendering, half-up (CSV/JSON rationals)."""
    return f"{to_decimal(value, places):.{places}f}"


def percent_str(value: Fraction, places: int = 2) -> str:
    """Percentage rendering, half-up: Fraction(2, 3) -> '66.67'."""
    return f"{to_decimal(value * 100, places):.{places}f}"
