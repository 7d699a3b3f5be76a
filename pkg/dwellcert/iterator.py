"""Iterator classes for dwellcert."""

import logging
from abc import ABC, abstractmethod

log = logging.getLogger(__name__)


class ContentIterator(ABC):
    """Base class to iterate over content delivered in pages (batches)."""

    def __init__(self):
        """Initialize the iterator."""
        self.log = log.getChild("ContentIterator")

        self.page = None
        self.page_num = 0
        self.n_items = 0
        self.exhausted = False

    def __iter__(self):
        """Initialize the iterator."""
        self.log.debug("initializing content iterator")

        return self

    def __next__(self):
        """Return the next item or raise StopIteration."""

        # skip over empty pages until content shows up or we run out
        while True:
            if self.page is None:
                if self.exhausted:
                    raise StopIteration

                page = self.load_next_page()

                if page is None:
                    self.exhausted = True
                    raise StopIteration

                self.page = iter(page)
                self.page_num += 1

            try:
                item = next(self.page)
            except StopIteration:
                self.page = None
                continue

            self.n_items += 1

            return item

    @property
    def page_number(self):
        """Return the current page number of results in this iterator."""
        return self.page_num

    @property
    def total_items(self):
        """Return the total number of items returned by this iterator."""
        return self.n_items

    @abstractmethod
    def load_next_page(self):
        """Return the next page (any iterable), or None when there are no more."""


class BranchIterator(ContentIterator, ABC):
    """Iterate a search tree one root branch per page.

    Subclasses list the root branches in order and expand a single branch into its
    items.  Each page is the generator returned by `expand_branch`, so items are
    streamed one at a time.
    """

    def __init__(self):
        """Initialize the iterator."""
        super().__init__()
        self.branches = None

    def load_next_page(self):
        """Expand the next root branch."""

        if self.branches is None:
            self.branches = list(self.list_branches())

        if self.page_num >= len(self.branches):
            return None

        branch = self.branches[self.page_num]
        self.log.debug("expanding branch %s", branch)

        return self.expand_branch(branch)

    @abstractmethod
    def list_branches(self):
        """Return the root branches of the tree, in iteration order."""

    @abstractmethod
    def expand_branch(self, branch):
        """Generate all items below the given root branch."""
