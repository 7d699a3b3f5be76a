"""The switched family and the scalars derived from it.

A family holds the subsystem matrices `{A_i : i in P}` together with the admissible
minimum and maximum dwell times.  Subsystem indices are 1-based throughout, so that
`P = {1, ..., N}`.
"""

import logging
from enum import Enum
from typing import Dict, List

import numpy as np
from pydantic import StrictInt, ValidationError, validator

from . import linalg
from .core import (
    AssumptionViolated,
    CertificationError,
    DataObject,
    FamilyError,
    LinalgError,
)

log = logging.getLogger(__name__)

# spectral radius below this is Schur stable; marginal matrices count as unstable
SCHUR_THRESHOLD = 1.0 - 1e-9


class PowerPair(str, Enum):
    """The four commutator power pairs `(p, q)`, `p, q in {1, delta}`.

    The first power applies to the unstable matrix, the second to the stable one.
    Keys are symbolic so that they stay distinct when `delta == 1`.
    """

    DELTA_DELTA = "delta,delta"
    ONE_DELTA = "1,delta"
    DELTA_ONE = "delta,1"
    ONE_ONE = "1,1"

    def powers(self, delta):
        """Return the concrete `(p, q)` powers for the given minimum dwell."""

        p, q = self.value.split(",")

        return (
            delta if p == "delta" else 1,
            delta if q == "delta" else 1,
        )


class SwitchedFamily(DataObject):
    """A family of discrete-time linear subsystems with dwell-time bounds."""

    class Config:
        """Families are immutable once created."""

        allow_mutation = False

    matrices: List[np.ndarray]
    delta: StrictInt
    Delta: StrictInt

    @validator("matrices", pre=True)
    def valid_matrices(cls, value):
        """Convert every entry to a validated square matrix of equal dimension."""

        assert value is not None and len(value) >= 1, "at least one matrix is required"

        try:
            mats = [
                linalg.as_matrix(data, name=f"A_{idx}")
                for idx, data in enumerate(value, 1)
            ]
        except LinalgError as err:
            raise ValueError(str(err))

        dims = {linalg.dim(mat) for mat in mats}
        assert len(dims) == 1, f"matrices must share one dimension, got {sorted(dims)}"

        return mats

    @validator("Delta")
    def valid_dwell_bounds(cls, value, values):
        """Check that `1 <= delta < Delta`."""

        delta = values.get("delta")

        assert delta is not None and delta >= 1, "delta must be a positive integer"
        assert value > delta, f"Delta must exceed delta ({value} <= {delta})"

        return value

    @classmethod
    def __compose__(cls, matrices, delta, Delta):
        """Compose a family from raw matrices and dwell bounds.

        :raises FamilyError: if the matrices or dwell bounds are invalid
        """

        try:
            return cls(matrices=matrices, delta=delta, Delta=Delta)
        except ValidationError as err:
            raise FamilyError(f"invalid family: {err}")

    @property
    def N(self):
        """Return the number of subsystems."""
        return len(self.matrices)

    @property
    def d(self):
        """Return the state dimension."""
        return linalg.dim(self.matrices[0])

    @property
    def indices(self):
        """Return the subsystem indices `1..N`."""
        return list(range(1, self.N + 1))

    def __getitem__(self, index):
        """Return the matrix `A_index` (1-based)."""

        if index < 1 or index > self.N:
            raise IndexError(f"subsystem index out of range: {index}")

        return self.matrices[index - 1]

    def norms(self):
        """Return `{i: ||A_i||}`."""
        return {idx: linalg.spectral_norm(self[idx]) for idx in self.indices}

    def radii(self):
        """Return `{i: spectral radius of A_i}`."""
        return {
            idx: linalg.spectral_radius(self[idx], name=f"A_{idx}")
            for idx in self.indices
        }

    def max_norm(self):
        """Return `M = max_i ||A_i||`."""
        return max(self.norms().values())


class IndexPartition(DataObject):
    """Split of `P` into Schur stable and unstable subsystem indices."""

    stable: List[int]
    unstable: List[int]

    @validator("stable")
    def sorted_stable(cls, value):
        """Keep stable indices in ascending order."""
        return sorted(value)

    @validator("unstable")
    def disjoint(cls, value, values):
        """Make sure no index is both stable and unstable."""

        stable = set(values.get("stable", []))
        assert stable.isdisjoint(value), "stable and unstable indices overlap"

        return sorted(value)

    def is_stable(self, index):
        """Determine if the given index is Schur stable."""
        return index in self.stable


class DerivedParams(DataObject):
    """Scalars consumed by the certification theorems."""

    M: float
    m: int
    rho: float
    K1: int
    K2: int
    zeta: Dict[PowerPair, float]
    eps: Dict[PowerPair, float]
    stable_norms: Dict[int, Dict[int, float]] = {}


def classify(fam):
    """Partition the family indices by Schur stability."""

    stable = []
    unstable = []

    for idx, radius in fam.radii().items():
        if radius < SCHUR_THRESHOLD:
            stable.append(idx)
        else:
            unstable.append(idx)

    log.debug("classified family :: stable=%s unstable=%s", stable, unstable)

    return IndexPartition(stable=stable, unstable=unstable)


def stable_power_norms(fam, part):
    """Return `{j: {n: ||A_j^n||}}` for stable `j` and `n in delta..Delta`."""
    return {
        idx: linalg.power_norms(fam[idx], fam.delta, fam.Delta) for idx in part.stable
    }


def find_m_rho(fam, part):
    """Select the dwell length `m` and contraction bound `rho`.

    `m` is the smallest value in `delta..Delta` such that `||A_j^n|| < 1` for every
    stable `j` and every `n` in `m..Delta`; `rho` is the largest of those norms.

    :raises AssumptionViolated: if there are no stable subsystems or no such `m`
    """

    if not part.stable:
        raise AssumptionViolated("no Schur stable subsystems in the family")

    norms = stable_power_norms(fam, part)

    for m in range(fam.delta, fam.Delta + 1):
        tail = [
            norms[idx][n] for idx in part.stable for n in range(m, fam.Delta + 1)
        ]

        if max(tail) < 1.0:
            rho = max(tail)
            log.debug("selected m=%d rho=%f", m, rho)
            return m, rho

    raise AssumptionViolated(
        f"no m in [{fam.delta}, {fam.Delta}] makes every stable power contractive"
    )


def _power(base, exponent):
    try:
        value = base**exponent
    except OverflowError:
        raise CertificationError(f"M^{exponent} overflows (M={base})")

    if not np.isfinite(value):
        raise CertificationError(f"M^{exponent} is not finite (M={base})")

    return float(value)


def zeta_table(M, N, m, delta, Delta):
    """Return the four weights `zeta_{p,q}(delta, Delta)`.

    Each weight bounds the number of exchange terms of one commutator kind, times
    the largest norm of the remaining factors.
    """

    if M < 0:
        raise ValueError(f"M must be nonnegative: {M}")

    K1 = m // delta
    K2 = Delta // delta

    r1 = m - K1 * delta
    r2 = Delta - K2 * delta

    base = (N - 1) * (m + Delta - 1) + m + Delta

    return {
        PowerPair.DELTA_DELTA: K1 * K2 * _power(M, base - 2 * delta),
        PowerPair.ONE_DELTA: K1 * r2 * _power(M, base - delta - 1),
        PowerPair.DELTA_ONE: r1 * K2 * _power(M, base - delta - 1),
        PowerPair.ONE_ONE: r1 * r2 * _power(M, base - 2),
    }


def commutator_table(fam, part):
    """Return `{(i, j, pair): ||E_ij^{p,q}||}` for unstable `i` and stable `j`."""

    table = {}

    for i in part.unstable:
        for j in part.stable:
            for pair in PowerPair:
                p, q = pair.powers(fam.delta)
                norm = linalg.spectral_norm(linalg.commutator(fam[i], p, fam[j], q))
                table[(i, j, pair)] = norm

    return table


def eps_table(fam, part):
    """Return the tightest bounds `eps_{p,q}` on the commutator norms.

    With no unstable (or no stable) subsystems the table is all zeros.
    """

    eps = {pair: 0.0 for pair in PowerPair}

    for (_, _, pair), norm in commutator_table(fam, part).items():
        eps[pair] = max(eps[pair], norm)

    return eps


def derive(fam, part=None):
    """Compute all `DerivedParams` for the family.

    :raises AssumptionViolated: if `m` cannot be selected
    """

    if part is None:
        part = classify(fam)

    m, rho = find_m_rho(fam, part)
    M = fam.max_norm()

    params = DerivedParams(
        M=M,
        m=m,
        rho=rho,
        K1=m // fam.delta,
        K2=fam.Delta // fam.delta,
        zeta=zeta_table(M, fam.N, m, fam.delta, fam.Delta),
        eps=eps_table(fam, part),
        stable_norms=stable_power_norms(fam, part),
    )

    log.info("derived params :: M=%f m=%d rho=%f", M, m, rho)

    return params
