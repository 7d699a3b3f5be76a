"""Switching signals with minimum and maximum dwell times.

A signal is a finite list of `(index, dwell)` segments.  The unrestricted class
requires every dwell in `[delta, Delta]`; the restricted class additionally requires
a dwell of at least `m` on Schur stable subsystems and never follows an unstable
subsystem with another unstable one.  A finite window of an infinite signal may end
mid-dwell, so the final segment is exempt from the lower dwell bounds.
"""

import logging
from enum import Enum
from typing import List, NamedTuple

import numpy as np
from pydantic import ValidationError, validator

from .core import DataObject, SignalError
from .iterator import BranchIterator

log = logging.getLogger(__name__)

# longest horizon accepted by the exhaustive enumeration
MAX_ENUMERATION_LENGTH = 30


class Segment(NamedTuple):
    """One dwell interval of a switching signal."""

    index: int
    dwell: int


class SwitchingSignal(DataObject):
    """A finite switching signal as an ordered list of segments."""

    segments: List[Segment] = []

    @validator("segments", each_item=True)
    def valid_segment(cls, value):
        """Check that indices and dwells are positive."""

        assert value.index >= 1, f"subsystem indices start at 1: {value.index}"
        assert value.dwell >= 1, f"dwell must be positive: {value.dwell}"

        return value

    @classmethod
    def __compose__(cls, pairs):
        """Compose a signal from a list of `(index, dwell)` pairs."""
        return cls(segments=[Segment(*pair) for pair in pairs])

    @classmethod
    def parse_obj(cls, obj):
        """Parse a signal from a JSON list of `[index, dwell]` pairs."""

        if isinstance(obj, list):
            return cls.__compose__(obj)

        return super().parse_obj(obj)

    def to_api(self):
        """Return the signal as a JSON list of `[index, dwell]` pairs."""
        return [[seg.index, seg.dwell] for seg in self.segments]

    @property
    def horizon(self):
        """Return the total number of time steps covered by this signal."""
        return sum(seg.dwell for seg in self.segments)

    def switching_instants(self):
        """Return the instants `tau_k` at which each segment starts."""

        instants = []
        t = 0

        for seg in self.segments:
            instants.append(t)
            t += seg.dwell

        return instants

    def indices(self, T=None):
        """Return the active index `sigma(t)` for `t = 0..T-1`."""

        if T is None:
            T = self.horizon

        if T > self.horizon:
            raise SignalError(f"signal covers {self.horizon} steps; {T} requested")

        seq = []

        for seg in self.segments:
            seq.extend([seg.index] * seg.dwell)

        return seq[:T]


class ViolationKind(str, Enum):
    """Kinds of switching-class violations."""

    INDEX = "index"
    REPEATED_INDEX = "repeated-index"
    DWELL_TOO_SHORT = "dwell-too-short"
    DWELL_TOO_LONG = "dwell-too-long"
    STABLE_DWELL_TOO_SHORT = "stable-dwell-too-short"
    UNSTABLE_SUCCESSOR = "unstable-successor"


class Violation(DataObject):
    """A single violation found by `validate`."""

    segment: int
    kind: ViolationKind
    message: str


class ValidityReport(DataObject):
    """The outcome of validating a signal against a switching class."""

    restricted: bool
    violations: List[Violation] = []

    @property
    def valid(self):
        """Determine if the signal belongs to the class."""
        return len(self.violations) == 0


def _min_dwell(fam, part, dp, index, restricted):
    if restricted and part.is_stable(index):
        return dp.m

    return fam.delta


def _successors(fam, part, index, restricted):
    if restricted and not part.is_stable(index):
        return [idx for idx in part.stable if idx != index]

    return [idx for idx in fam.indices if idx != index]


def validate(sig, fam, part, dp=None, restricted=False):
    """Check a signal against the unrestricted or restricted switching class.

    Every violation is listed with the (0-based) position of its segment.
    """

    if restricted and dp is None:
        raise ValueError("derived parameters are required for the restricted class")

    violations = []
    last = len(sig.segments) - 1

    def flag(pos, kind, message):
        violations.append(Violation(segment=pos, kind=kind, message=message))

    for pos, seg in enumerate(sig.segments):
        if seg.index > fam.N:
            flag(pos, ViolationKind.INDEX, f"index {seg.index} not in 1..{fam.N}")
            continue

        if pos > 0 and sig.segments[pos - 1].index == seg.index:
            flag(pos, ViolationKind.REPEATED_INDEX, f"index {seg.index} repeats")

        if seg.dwell > fam.Delta:
            flag(pos, ViolationKind.DWELL_TOO_LONG, f"dwell {seg.dwell} > {fam.Delta}")

        if pos < last:
            if seg.dwell < fam.delta:
                flag(
                    pos,
                    ViolationKind.DWELL_TOO_SHORT,
                    f"dwell {seg.dwell} < {fam.delta}",
                )

            elif restricted and part.is_stable(seg.index) and seg.dwell < dp.m:
                flag(
                    pos,
                    ViolationKind.STABLE_DWELL_TOO_SHORT,
                    f"stable dwell {seg.dwell} < m = {dp.m}",
                )

            nxt = sig.segments[pos + 1].index

            if restricted and not part.is_stable(seg.index) and not part.is_stable(nxt):
                flag(
                    pos,
                    ViolationKind.UNSTABLE_SUCCESSOR,
                    f"unstable {seg.index} followed by unstable {nxt}",
                )

    return ValidityReport(restricted=restricted, violations=violations)


def random_signal(fam, part, dp, horizon, rng_seed=None):
    """Draw a random signal from the restricted class covering `horizon` steps.

    The first index is uniform over `P`.  After an unstable segment the next index is
    uniform over the stable ones; otherwise it is uniform over the other indices.
    Dwells are uniform over `[m, Delta]` on stable and `[delta, Delta]` on unstable
    subsystems.

    :param rng_seed: an integer seed or a `numpy.random.Generator`
    """

    if fam.N < 2:
        raise SignalError("a single subsystem admits no switching")

    if not part.stable:
        raise SignalError("the restricted class needs a stable subsystem")

    if horizon < 1:
        raise SignalError(f"horizon must be positive: {horizon}")

    rng = np.random.default_rng(rng_seed)

    segments = []
    total = 0
    index = int(rng.choice(fam.indices))

    while total < horizon:
        lo = _min_dwell(fam, part, dp, index, restricted=True)
        dwell = int(rng.integers(lo, fam.Delta + 1))

        segments.append(Segment(index, dwell))
        total += dwell

        index = int(rng.choice(_successors(fam, part, index, restricted=True)))

    return SwitchingSignal(segments=segments)


def periodic_signal(pattern, repetitions=1):
    """Repeat a pattern of `(index, dwell)` pairs.

    :raises SignalError: if a segment has an index or dwell below 1, or if adjacent
        segments (including across the seam between repetitions) would share an index
    """

    if not pattern:
        raise SignalError("empty pattern")

    if repetitions < 1:
        raise SignalError(f"repetitions must be positive: {repetitions}")

    segments = [Segment(*pair) for pair in pattern]

    for seg in segments:
        if seg.index < 1 or seg.dwell < 1:
            raise SignalError(f"invalid pattern segment: {tuple(seg)}")

    for prev, seg in zip(segments, segments[1:]):
        if prev.index == seg.index:
            raise SignalError(f"pattern repeats index {seg.index} consecutively")

    if segments[0].index == segments[-1].index:
        raise SignalError(f"pattern merges at the seam (index {segments[0].index})")

    try:
        return SwitchingSignal(segments=segments * repetitions)
    except ValidationError as err:
        raise SignalError(f"invalid periodic signal: {err}")


def count_signals(fam, part, dp, max_len, restricted=False):
    """Count the signals that `enumerate_signals` would produce."""

    # ways[t][i]: number of valid prefixes of length t ending with a complete
    # segment on index i
    ways = [dict.fromkeys(fam.indices, 0) for _ in range(max_len + 1)]
    total = 0

    def lower(index):
        return _min_dwell(fam, part, dp, index, restricted)

    for index in fam.indices:
        for dwell in range(1, min(fam.Delta, max_len) + 1):
            if dwell == max_len:
                total += 1
            elif dwell >= lower(index):
                ways[dwell][index] += 1

    for t in range(1, max_len):
        for prev, count in ways[t].items():
            if count == 0:
                continue

            for index in _successors(fam, part, prev, restricted):
                for dwell in range(1, min(fam.Delta, max_len - t) + 1):
                    if t + dwell == max_len:
                        total += count
                    elif dwell >= lower(index):
                        ways[t + dwell][index] += count

    return total


def check_enumeration_length(fam, part, dp, max_len, restricted=False):
    """Reject horizons the exhaustive enumeration cannot handle.

    :raises SignalError: if `max_len` is not positive or exceeds
        `MAX_ENUMERATION_LENGTH`; the message carries the signal count
    """

    if max_len < 1:
        raise SignalError(f"max_len must be positive: {max_len}")

    if max_len > MAX_ENUMERATION_LENGTH:
        count = count_signals(fam, part, dp, max_len, restricted)
        raise SignalError(
            f"max_len {max_len} exceeds {MAX_ENUMERATION_LENGTH}"
            f" ({count} signals would be enumerated)"
        )


class SignalEnumerator(BranchIterator):
    """Exhaustively enumerate the signals of an exact horizon.

    Signals are produced in lexicographic order of their `(index, dwell)` segments;
    each page of the iterator holds the signals sharing one first segment.
    """

    def __init__(self, fam, part, dp, max_len, restricted=False):
        """Initialize the enumerator.

        :param max_len: the exact horizon of every produced signal
        :param restricted: enumerate the restricted class instead of the full one
        """
        super().__init__()

        if restricted and dp is None:
            raise ValueError("derived parameters are required for the restricted class")

        check_enumeration_length(fam, part, dp, max_len, restricted)

        self.fam = fam
        self.part = part
        self.dp = dp
        self.max_len = max_len
        self.restricted = restricted
        self.log = log.getChild("SignalEnumerator")

    def _min_dwell(self, index):
        return _min_dwell(self.fam, self.part, self.dp, index, self.restricted)

    def _candidates(self, index, used):
        remaining = self.max_len - used

        for dwell in range(1, min(self.fam.Delta, remaining) + 1):
            if dwell == remaining or dwell >= self._min_dwell(index):
                yield Segment(index, dwell)

    def list_branches(self):
        """Return every admissible first segment."""

        return [
            seg
            for index in self.fam.indices
            for seg in self._candidates(index, used=0)
        ]

    def expand_branch(self, branch):
        """Generate every signal that starts with the given segment."""

        stack = [branch]

        def walk(used):
            if used == self.max_len:
                yield SwitchingSignal(segments=list(stack))
                return

            last = stack[-1].index

            for index in _successors(self.fam, self.part, last, self.restricted):
                for seg in self._candidates(index, used):
                    stack.append(seg)
                    yield from walk(used + seg.dwell)
                    stack.pop()

        yield from walk(branch.dwell)


def enumerate_signals(fam, part, dp, max_len, restricted=False):
    """Return an iterator over every signal of horizon exactly `max_len`.

    Complete segments obey the class rules; the final segment may be truncated to
    any dwell in `[1, Delta]`.
    """
    return SignalEnumerator(fam, part, dp, max_len, restricted=restricted)
