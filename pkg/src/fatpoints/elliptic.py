"""Degeneration of general points onto a cubic: twist, reduce, bound.

The reduction moves the first k points of a system onto a smooth cubic and
twists by mu: the degree drops by 3*mu and the first k multiplicities by mu.
When the twisted system's Euler characteristic does not drop, its h0 bounds
the original system's h0 from above; when the characteristics agree exactly
(integral mu at the boundary), nonspeciality transfers back to the original
system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import interp, linsys
from .gfmat import DEFAULT_PRIME
from .interp import (DEGENERATION_BOUND, DEGENERATION_CODIM, INCONCLUSIVE,
                     NONSPECIAL, UPPER_BOUND, Certificate)
from .linsys import GENERIC, ON_CUBIC, FatPointSystem

MIN_SPECIALIZED = 10


class ReductionError(Exception):
    pass


class InapplicableError(ReductionError):
    pass


@dataclass(frozen=True)
class ReductionPlan:
    original: FatPointSystem
    k: int
    mu: int
    reduced: FatPointSystem
    chi_original: int
    chi_reduced: int
    chi_S: int           # chi deficit carried by the ruled component
    hypothesis: bool     # chi_reduced >= chi_original


@dataclass(frozen=True)
class RuledSurfaceDivisor:
    """mu * (minimal section) + (degree-b_prime divisor) * fiber; e = -C0^2."""
    mu: int
    b_prime: int
    e: int


def mu_bound(d: int, n: int, m: int) -> Fraction:
    """Largest admissible twist for the homogeneous system (d; m^n).

    Exact rational 1 + (2mn - 6d)/(n - 9); needs n >= 10.
    """
    if n <= 9:
        raise ReductionError("need at least 10 points")
    return 1 + Fraction(2 * m * n - 6 * d, n - 9)


def chi_gap(d: int, n: int, m: int, mu: int) -> int:
    """chi(twisted system on the cubic) - chi(original), closed form.

    Equals mu*(n - 9 - 6d + 2mn - mu*(n-9))/2; always an integer.
    """
    if n <= 9:
        raise ReductionError("need at least 10 points")
    t = mu * (n - 9 - 6 * d + 2 * m * n - mu * (n - 9))
    assert t % 2 == 0
    return t // 2


def reduce(s: FatPointSystem, k: int, mu: int) -> ReductionPlan:
    """Specialize the first k points onto the cubic and twist by mu.

    The reduced system has degree d - 3*mu and multiplicities m_i - mu for
    i <= k (tagged on-cubic), m_i unchanged for i > k.  The construction
    requires k >= 10 and all original points generic.
    """
    if mu < 0:
        raise ReductionError("twist must be non-negative")
    if not MIN_SPECIALIZED <= k <= s.npoints:
        raise ReductionError(f"need {MIN_SPECIALIZED} <= k <= n")
    if any(t != GENERIC for t in s.tags):
        raise ReductionError("original system must have all points generic")
    new_mults = tuple(m - mu if i < k else m for i, m in enumerate(s.mults))
    new_tags = (ON_CUBIC,) * k + (GENERIC,) * (s.npoints - k)
    reduced = FatPointSystem(s.d - 3 * mu, new_mults, new_tags)
    chi_o = linsys.chi(s)
    chi_r = linsys.chi(reduced)
    return ReductionPlan(original=s, k=k, mu=mu, reduced=reduced,
                         chi_original=chi_o, chi_reduced=chi_r,
                         chi_S=chi_o - chi_r,
                         hypothesis=chi_r >= chi_o)


def chi_identity_check(plan: ReductionPlan) -> bool:
    """Consistency of the chi bookkeeping on the degenerate fiber.

    The two components' characteristics must sum back to the original, and
    whenever the hypothesis holds the ruled component's chi is <= 0.
    """
    if plan.chi_S != plan.chi_original - plan.chi_reduced:
        return False
    if plan.hypothesis and plan.chi_S > 0:
        return False
    return True


def ruled_chi(D: RuledSurfaceDivisor) -> Fraction:
    """Euler characteristic (mu+1)(b' - mu*e/2) of the divisor on the ruled
    surface, from Riemann-Roch with K = -2*C0 - e*f and arithmetic genus -1."""
    return (D.mu + 1) * (Fraction(D.b_prime) - Fraction(D.mu * D.e, 2))


def _exact_h0(s: FatPointSystem) -> Optional[int]:
    """h0 by fixed-component arithmetic when no conditions survive."""
    if s.d < 0:
        return 0
    if linsys.conditions_count(linsys.effective_part(s)) == 0:
        return linsys.monomial_count(s.d)
    return None


def theorem_upper_bound(plan: ReductionPlan, trials: int = interp.DEFAULT_TRIALS,
                        p: int = DEFAULT_PRIME, seed: int = 0) -> Certificate:
    """Upper bound on the original system's generic h0 via the reduction.

    Requires the plan's chi hypothesis.  The bound is the reduced system's
    h0: exact when fixed-component arithmetic applies, otherwise the best
    on-cubic sample value (itself an upper bound by semicontinuity).
    """
    if not plan.hypothesis:
        raise InapplicableError("chi hypothesis fails; the bound does not apply")
    if plan.mu > 0 and (plan.original.d < 1 or any(m < 1 for m in plan.original.mults)):
        # the degeneration argument needs positive degree and multiplicities
        # (otherwise the restricted divisor on the cubic need not be general)
        raise InapplicableError("original degree and multiplicities must be positive")
    exact = _exact_h0(plan.reduced)
    if exact is not None:
        return Certificate(verdict=UPPER_BOUND, method=DEGENERATION_BOUND,
                           system=plan.original, chi=plan.chi_original,
                           prime=p, seed=seed, trials=trials, h0_bound=exact)
    evidence = []
    for t in range(trials):
        sub = interp.derive_seed(seed, t)
        cfg = interp.config_for_system(plan.reduced, p, sub)
        evidence.append((p, sub, interp.h0_at_sample(plan.reduced, cfg)))
    bound = min(r.h0_sample for (_, _, r) in evidence)
    return Certificate(verdict=UPPER_BOUND, method=DEGENERATION_BOUND,
                       system=plan.original, chi=plan.chi_original,
                       prime=p, seed=seed, trials=trials, h0_bound=bound,
                       evidence=tuple(evidence))


def corollary_nonspecial(d: int, n: int, m: int,
                         trials: int = interp.DEFAULT_TRIALS,
                         p: int = DEFAULT_PRIME, seed: int = 0) -> Certificate:
    """Transfer nonspeciality from the reduced system to (d; m^n).

    Applies only when the twist bound is itself a positive integer, so the
    two Euler characteristics agree exactly.  If the reduced system is
    certified nonspecial, so is the original; otherwise the result is
    inconclusive for the original, with the reduced system's h0 attached as
    an upper bound.
    """
    mu = mu_bound(d, n, m)
    if mu.denominator != 1 or mu <= 0:
        raise InapplicableError(f"twist bound {mu} is not a positive integer")
    mu = int(mu)
    s = linsys.homogeneous_system(d, n, m)
    plan = reduce(s, n, mu)
    assert chi_gap(d, n, m, mu) == 0
    assert plan.chi_reduced == plan.chi_original

    cert_red = interp.certify(plan.reduced, trials=trials, p=p, seed=seed)
    if cert_red.verdict == NONSPECIAL:
        # chi values agree, so the reduced h0 is the original h0
        return Certificate(verdict=NONSPECIAL, method=DEGENERATION_CODIM,
                           system=s, chi=plan.chi_original,
                           prime=p, seed=seed, trials=trials,
                           h0_bound=cert_red.h0, h0=cert_red.h0,
                           h1=(cert_red.h0 - plan.chi_original
                               if cert_red.h0 is not None else None),
                           evidence=cert_red.evidence)
    bound = theorem_upper_bound(plan, trials=trials, p=p, seed=seed)
    return Certificate(verdict=INCONCLUSIVE, method=DEGENERATION_CODIM,
                       system=s, chi=plan.chi_original,
                       prime=p, seed=seed, trials=trials,
                       h0_bound=bound.h0_bound,
                       evidence=cert_red.evidence)
