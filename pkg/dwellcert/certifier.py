"""Certify exponential stability under restricted dwell-time switching.

Two sufficient tests are provided.  The exact test requires that the powers of every
unstable matrix commute with the powers of every stable one; the robust test
tolerates small commutators as long as a weighted sum of their norms stays within
the contraction margin `1 - rho * e^(lambda * m)`.
"""

import logging
import math
from enum import Enum
from typing import Any, List, Optional, Tuple

from pydantic import Field

from . import family
from .core import AssumptionViolated, CertificationError, DataObject
from .family import PowerPair

log = logging.getLogger(__name__)

# bisection resolution for the decay rate search
LAMBDA_RESOLUTION = 1e-6

# smallest decay rate tried by the search
LAMBDA_FLOOR = 1e-9

# search ceiling when rho == 0 (nilpotent stable powers)
LAMBDA_CEILING = 1.0


class Verdict(str, Enum):
    """Possible outcomes of a certification."""

    CERTIFIED_THEOREM1 = "CertifiedTheorem1"
    CERTIFIED_THEOREM2 = "CertifiedTheorem2"
    NOT_CERTIFIED = "NotCertified"
    ASSUMPTION_VIOLATED = "AssumptionViolated"


class Certificate(DataObject):
    """Outcome of a certification attempt, with every audited quantity."""

    class Config:
        """Allow `lambda` as an alias for the decay rate field."""

        allow_population_by_field_name = True

    verdict: Verdict
    lam: float = Field(0.0, alias="lambda")
    c: Optional[float] = None
    m: Optional[int] = None
    rho: Optional[float] = None
    M: Optional[float] = None
    K1: Optional[int] = None
    K2: Optional[int] = None
    lhs_value: Optional[float] = None
    message: Optional[str] = None
    audit: List[Tuple[str, Any]] = []

    @property
    def certified(self):
        """Determine if this certificate establishes stability."""
        return self.verdict in (Verdict.CERTIFIED_THEOREM1, Verdict.CERTIFIED_THEOREM2)

    def bound(self, length):
        """Return the guaranteed bound `c * e^(-lambda * length)` on product norms."""

        if not self.certified:
            raise CertificationError("no certificate to evaluate")

        return self.c * math.exp(-self.lam * length)

    def summary(self):
        """Return a one-line description of this certificate."""

        if self.certified:
            return f"{self.verdict.value}: lambda={self.lam:.6g} c={self.c:.6g}"

        if self.message:
            return f"{self.verdict.value}: {self.message}"

        return self.verdict.value


def lambda_max(rho, m):
    """Return `-ln(rho) / m`, the supremum of admissible decay rates.

    The bound is open; callers must stay strictly below it.
    """

    if rho >= 1.0 or rho < 0.0:
        raise CertificationError(f"rho must lie in [0, 1): {rho}")

    if m < 1:
        raise CertificationError(f"m must be positive: {m}")

    if rho == 0.0:
        return math.inf

    return -math.log(rho) / m


def induction_length(N, m, Delta):
    """Return `N(m + Delta - 1) + 1`, the longest product covered by `c` directly."""
    return N * (m + Delta - 1) + 1


def overshoot_constant(dp, lam, N, m, Delta):
    """Return the overshoot constant `c = max(1, (M e^lambda)^L)`.

    Any product satisfies `||W|| <= M^|W|`, so `||W|| e^(lambda |W|)` stays below
    `c` for every product no longer than the induction length `L`.
    """

    length = induction_length(N, m, Delta)

    try:
        value = (dp.M * math.exp(lam)) ** length
    except OverflowError:
        raise CertificationError(f"overshoot constant overflows (L={length})")

    if not math.isfinite(value):
        raise CertificationError(f"overshoot constant is not finite (L={length})")

    return max(1.0, value)


def default_tol_zero(dp, delta):
    """Return the commutator-is-zero tolerance `1e-12 * max(1, M^(2 delta))`."""
    return 1e-12 * max(1.0, dp.M ** (2 * delta))


def _require_stable(part):
    if not part.stable:
        raise AssumptionViolated("no Schur stable subsystems in the family")


def _base_audit(fam, dp, lam):
    length = induction_length(fam.N, dp.m, fam.Delta)

    audit = [
        ("N", fam.N),
        ("delta", fam.delta),
        ("Delta", fam.Delta),
        ("M", dp.M),
        ("m", dp.m),
        ("rho", dp.rho),
        ("K1", dp.K1),
        ("K2", dp.K2),
        ("lambda", lam),
        ("rho*exp(lambda*m)", dp.rho * math.exp(lam * dp.m)),
        ("L", length),
        ("exp(lambda*L)", math.exp(lam * length)),
    ]

    for pair in PowerPair:
        audit.append((f"zeta[{pair.value}]", dp.zeta[pair]))

    for pair in PowerPair:
        audit.append((f"eps[{pair.value}]", dp.eps[pair]))

    return audit


def _certificate(verdict, fam, dp, lam, audit, lhs=None, message=None):
    c = None

    if verdict in (Verdict.CERTIFIED_THEOREM1, Verdict.CERTIFIED_THEOREM2):
        c = overshoot_constant(dp, lam, fam.N, dp.m, fam.Delta)
        audit.append(("c", c))

    return Certificate(
        verdict=verdict,
        lam=lam,
        c=c,
        m=dp.m,
        rho=dp.rho,
        M=dp.M,
        K1=dp.K1,
        K2=dp.K2,
        lhs_value=lhs,
        message=message,
        audit=audit,
    )


def check_theorem1(fam, part, dp, lam, tol_zero=None):
    """Check the exact-commutation test at decay rate `lam`.

    The family is certified when `rho e^(lambda m) < 1` and every commutator
    `E_ij^{p,q}`, `p, q in {1, delta}`, unstable `i`, stable `j`, vanishes (norm at
    most `tol_zero`).  With no unstable subsystems the commutator condition holds
    trivially.

    :raises AssumptionViolated: if the family has no stable subsystems
    """

    _require_stable(part)

    if tol_zero is None:
        tol_zero = default_tol_zero(dp, fam.delta)

    audit = _base_audit(fam, dp, lam)
    audit.append(("tol_zero", tol_zero))

    contraction = dp.rho * math.exp(lam * dp.m)

    if contraction >= 1.0:
        return _certificate(
            Verdict.NOT_CERTIFIED,
            fam,
            dp,
            lam,
            audit,
            message=f"rho*exp(lambda*m) = {contraction:.6g} >= 1",
        )

    failing = []

    for (i, j, pair), norm in family.commutator_table(fam, part).items():
        audit.append((f"||E[{i},{j}][{pair.value}]||", norm))

        if norm > tol_zero:
            failing.append(f"E[{i},{j}][{pair.value}]")

    if failing:
        return _certificate(
            Verdict.NOT_CERTIFIED,
            fam,
            dp,
            lam,
            audit,
            message="nonzero commutators: " + ", ".join(failing),
        )

    log.info("certified by exact commutation at lambda=%g", lam)

    return _certificate(Verdict.CERTIFIED_THEOREM1, fam, dp, lam, audit)


def theorem2_lhs(fam, dp, lam, eps=None):
    """Return the left side of the robust commutator inequality.

    `rho e^(lambda m) + (sum of zeta_{p,q} eps_{p,q}) e^(lambda L)`
    """

    if eps is None:
        eps = dp.eps

    weighted = sum(dp.zeta[pair] * eps[pair] for pair in PowerPair)
    length = induction_length(fam.N, dp.m, fam.Delta)

    return dp.rho * math.exp(lam * dp.m) + weighted * math.exp(lam * length)


def check_theorem2(fam, part, dp, lam, eps=None):
    """Check the robust commutator inequality at decay rate `lam`.

    :param eps: optional override of the commutator bounds (defaults to `dp.eps`)
    :raises AssumptionViolated: if the family has no stable subsystems
    """

    _require_stable(part)

    if eps is None:
        eps = dp.eps

    audit = _base_audit(fam, dp, lam)

    for pair in PowerPair:
        audit.append((f"eps_used[{pair.value}]", eps[pair]))

    lhs = theorem2_lhs(fam, dp, lam, eps)
    audit.append(("lhs", lhs))

    contraction = dp.rho * math.exp(lam * dp.m)

    if contraction < 1.0 and lhs <= 1.0:
        log.info("certified by commutator bound at lambda=%g (lhs=%f)", lam, lhs)
        return _certificate(Verdict.CERTIFIED_THEOREM2, fam, dp, lam, audit, lhs=lhs)

    return _certificate(
        Verdict.NOT_CERTIFIED,
        fam,
        dp,
        lam,
        audit,
        lhs=lhs,
        message=f"lhs = {lhs:.6g} > 1" if lhs > 1.0 else "rho*exp(lambda*m) >= 1",
    )


def best_lambda(fam, part, dp):
    """Search for the largest decay rate certified by the robust inequality.

    The left side grows strictly with `lambda`, so bisection over
    `(0, lambda_max(rho, m))` finds the boundary to within `LAMBDA_RESOLUTION`.
    When `rho == 0` the upper end is `LAMBDA_CEILING`.
    """

    _require_stable(part)

    cert = check_theorem2(fam, part, dp, LAMBDA_FLOOR)

    if not cert.certified:
        log.warning("no decay rate can be certified; lhs=%s", cert.lhs_value)
        return cert

    lo = LAMBDA_FLOOR
    hi = lambda_max(dp.rho, dp.m)

    if math.isinf(hi):
        hi = LAMBDA_CEILING

    while hi - lo > LAMBDA_RESOLUTION:
        mid = (lo + hi) / 2

        if check_theorem2(fam, part, dp, mid).certified:
            lo = mid
        else:
            hi = mid

    log.debug("lambda search converged :: [%g, %g]", lo, hi)

    return check_theorem2(fam, part, dp, lo)


def certify(fam, lam=None, part=None):
    """Run the full certification pipeline for a family.

    The exact test runs first; when it fails the robust test is tried at the same
    decay rate.  Without `lam`, the rate comes from `best_lambda`.  A family with no
    admissible `m` yields an `AssumptionViolated` certificate instead of an error.
    """

    if part is None:
        part = family.classify(fam)

    try:
        dp = family.derive(fam, part)
        _require_stable(part)
    except AssumptionViolated as err:
        log.info("assumption violated :: %s", err)
        return Certificate(
            verdict=Verdict.ASSUMPTION_VIOLATED,
            lam=lam or 0.0,
            message=str(err),
        )

    if lam is None:
        lam = best_lambda(fam, part, dp).lam

    cert = check_theorem1(fam, part, dp, lam)

    if not cert.certified:
        cert = check_theorem2(fam, part, dp, lam)

    log.info("certification result :: %s", cert.summary())

    return cert
