"""Unit tests for the dwellcert iterators."""

import itertools

from dwellcert import family, switching
from dwellcert.iterator import BranchIterator


class Digits(BranchIterator):
    """Expand each root digit into the given number of items."""

    def __init__(self, sizes):
        """Initialize with the number of items below each root."""
        super().__init__()
        self.sizes = sizes

    def list_branches(self):
        """Return one branch per size."""
        return list(range(len(self.sizes)))

    def expand_branch(self, branch):
        """Generate `(branch, index)` items."""
        for idx in range(self.sizes[branch]):
            yield (branch, idx)


def test_basic_usage():
    """Items come out branch by branch, one branch per page."""

    iter = Digits([3, 2, 4])
    n_items = 0

    for branch, _ in iter:
        assert iter.page_number == branch + 1

        n_items += 1
        assert iter.total_items == n_items

    assert n_items == 9


def test_empty_branches_are_skipped():
    """Branches without items do not end the iteration."""

    items = list(Digits([0, 2, 0, 0, 1]))

    assert items == [(1, 0), (1, 1), (4, 0)]


def test_no_branches():
    """An empty tree produces no items."""

    iter = Digits([])

    assert list(iter) == []
    assert iter.exhausted
    assert iter.total_items == 0


def test_exhausted_iterator_stays_empty():
    """Once exhausted the iterator keeps raising StopIteration."""

    iter = Digits([2])

    assert len(list(iter)) == 2
    assert list(iter) == []


def test_signal_pages(ex2, classified):
    """Each page of the enumerator shares its first segment."""

    fam, part, dp = classified(ex2)
    enum = switching.enumerate_signals(fam, part, dp, 8, restricted=True)

    firsts = {}

    for sig in enum:
        firsts.setdefault(enum.page_number, set()).add(sig.segments[0])

    assert all(len(segments) == 1 for segments in firsts.values())
    assert enum.total_items == switching.count_signals(fam, part, dp, 8, True)


def test_branches_are_streamed():
    """Items are pulled from a branch one at a time."""

    class Endless(BranchIterator):
        """A single branch without end."""

        def list_branches(self):
            """Return the only branch."""
            return ["root"]

        def expand_branch(self, branch):
            """Count forever."""
            return itertools.count()

    iter = Endless()

    assert [next(iter) for _ in range(5)] == [0, 1, 2, 3, 4]
    assert iter.page_number == 1
    assert iter.total_items == 5


def test_enumeration_is_lazy(ex1):
    """Only the signals that are requested are built."""

    part = family.classify(ex1)
    dp = family.derive(ex1, part)
    enum = switching.enumerate_signals(ex1, part, dp, 20, restricted=True)

    first = next(enum)

    assert first.segments[0].index == 1
    assert enum.page_number == 1
    assert enum.total_items == 1
