"""Broadcast-order permutations and per-processor send/receive programs.

A system of ``n + 1`` processors (ids ``0..n``) solves all-to-all
broadcast with one small state program per processor: wait for ``i``
incoming messages, send the local value to every other processor in the
order given by a permutation of ``{0..n} \\ {i}``, then collect the
remaining ``n - i`` messages.  The permutation is the tunable parameter;
this module builds the three studied families (identity order, wrapped
"pipelined" order, seeded random order), validates user-supplied
orders, and composes the explicit program executed by the engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

ProcessorId = int

_MASK64 = (1 << 64) - 1
_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407
_GOLDEN = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class Permutation:
    """Broadcast target order for one processor.

    ``targets`` must be a permutation of ``{0..n} \\ {owner}``.
    """

    owner: int
    n: int
    targets: tuple[int, ...]


class StateKind(Enum):
    WAIT_RECV = "WR"
    RECV = "R"
    WAIT_SEND = "WS"
    SEND = "S"


@dataclass(frozen=True)
class StateTemplate:
    """One program state.  Sends name their addressee; receives accept
    any sender and carry no target."""

    kind: StateKind
    target: int | None = None


@dataclass(frozen=True)
class FsaProgram:
    """Linear state program for one processor: ``i`` wait/receive pairs,
    then a wait/send pair per permutation entry, then ``n - i`` further
    wait/receive pairs (4n states in total)."""

    owner: int
    states: tuple[StateTemplate, ...]


def _check_args(i: int, n: int) -> None:
    if n < 1:
        raise ValueError(f"system size n must be >= 1, got {n}")
    if not 0 <= i <= n:
        raise ValueError(f"processor id must be in [0, {n}], got {i}")


def identity_permutation(i: int, n: int) -> Permutation:
    """Targets in ascending id order, skipping the owner."""
    _check_args(i, n)
    targets = tuple(j for j in range(n + 1) if j != i)
    return Permutation(owner=i, n=n, targets=targets)


def pipelined_permutation(i: int, n: int) -> Permutation:
    """Targets in wrap-around order starting just after the owner:
    ``i+1, ..., n, 0, ..., i-1``.

    Equivalent to rotating the identity order left by ``i`` positions,
    which staggers the broadcasts so that consecutive processors feed
    each other like pipeline stages.
    """
    _check_args(i, n)
    targets = tuple(range(i + 1, n + 1)) + tuple(range(0, i))
    return Permutation(owner=i, n=n, targets=targets)


def _mix64(x: int) -> int:
    # splitmix64 finalizer; decorrelates consecutive seeds
    x &= _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


class _Lcg:
    """64-bit linear congruential generator, top-33-bit extraction."""

    def __init__(self, state: int) -> None:
        self.state = state & _MASK64

    def next33(self) -> int:
        self.state = (_LCG_MULT * self.state + _LCG_INC) & _MASK64
        return self.state >> 31

    def below(self, bound: int) -> int:
        # rejection sampling keeps the draw exactly uniform on [0, bound)
        span = 1 << 33
        limit = span - span % bound
        while True:
            v = self.next33()
            if v < limit:
                return v % bound


def random_permutation(i: int, n: int, seed: int) -> Permutation:
    """Uniformly shuffled target order, deterministic for ``(i, n, seed)``.

    Each processor derives its own stream from the run seed, so a whole
    system built from one seed is reproducible across platforms.
    """
    _check_args(i, n)
    rng = _Lcg(_mix64((seed + (i + 1) * _GOLDEN) & _MASK64))
    targets = [j for j in range(n + 1) if j != i]
    for k in range(len(targets) - 1, 0, -1):
        r = rng.below(k + 1)
        targets[k], targets[r] = targets[r], targets[k]
    return Permutation(owner=i, n=n, targets=tuple(targets))


def validate_permutation(p: Permutation) -> str | None:
    """Return ``None`` if the permutation is well formed, else a message
    naming the first violation found."""
    if p.n < 1:
        return f"owner {p.owner}: system size n must be >= 1, got {p.n}"
    if not 0 <= p.owner <= p.n:
        return f"owner {p.owner} out of range [0, {p.n}]"
    if len(p.targets) != p.n:
        return f"owner {p.owner}: wrong length {len(p.targets)}, expected {p.n}"
    seen = set()
    for t in p.targets:
        if t == p.owner:
            return f"owner {p.owner}: targets contain the owner"
        if not 0 <= t <= p.n:
            return f"owner {p.owner}: target {t} out of range [0, {p.n}]"
        if t in seen:
            return f"owner {p.owner}: duplicate target {t}"
        seen.add(t)
    return None


def compose_fsa(i: int, n: int, p: Permutation) -> FsaProgram:
    """Compose processor ``i``'s program around its permutation.

    Layout: ``i`` (WAIT_RECV, RECV) pairs, one (WAIT_SEND, SEND) pair
    per target in order, then ``n - i`` (WAIT_RECV, RECV) pairs.  Start
    and stop are implicit in the program boundaries.
    """
    _check_args(i, n)
    if p.owner != i or p.n != n:
        raise ValueError(
            f"permutation owner/n ({p.owner}, {p.n}) does not match ({i}, {n})"
        )
    wr = StateTemplate(StateKind.WAIT_RECV)
    r = StateTemplate(StateKind.RECV)
    states: list[StateTemplate] = []
    states.extend((wr, r) * i)
    for t in p.targets:
        states.append(StateTemplate(StateKind.WAIT_SEND, t))
        states.append(StateTemplate(StateKind.SEND, t))
    states.extend((wr, r) * (n - i))
    return FsaProgram(owner=i, states=tuple(states))


def parse_permutations(text: str) -> list[Permutation]:
    """Parse a custom permutation file: one ``i: t1,t2,...,tN`` line per
    processor, decimal ids, every processor present exactly once.

    Raises ``ValueError`` on malformed syntax or any permutation
    invariant violation.
    """
    rows: dict[int, tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'i: t1,t2,...'")
        try:
            owner = int(head)
            targets = tuple(int(tok) for tok in rest.split(","))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if owner in rows:
            raise ValueError(f"line {lineno}: duplicate row for processor {owner}")
        rows[owner] = targets
    if not rows:
        raise ValueError("no permutation rows found")
    n = len(rows) - 1
    if sorted(rows) != list(range(n + 1)):
        missing = sorted(set(range(n + 1)) - set(rows))
        raise ValueError(f"processor rows must cover 0..{n}; missing {missing}")
    perms = [Permutation(owner=i, n=n, targets=rows[i]) for i in range(n + 1)]
    for p in perms:
        problem = validate_permutation(p)
        if problem is not None:
            raise ValueError(problem)
    return perms


def permutation_set(
    strategy: str, n: int, seed: int | None = None
) -> list[Permutation]:
    """Build one permutation per processor for a named family."""
    if strategy == "identity":
        return [identity_permutation(i, n) for i in range(n + 1)]
    if strategy == "pipelined":
        return [pipelined_permutation(i, n) for i in range(n + 1)]
    if strategy == "random":
        if seed is None:
            raise ValueError("random strategy requires a seed")
        return [random_permutation(i, n, seed) for i in range(n + 1)]
    raise ValueError(f"unknown strategy {strategy!r}")
