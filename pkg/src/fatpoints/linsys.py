"""Linear systems of plane curves with assigned multiple base points.

A system is the data (d; m_1, ..., m_n): curves of degree d passing through
n points with the given multiplicities.  After twisting, both the degree and
the multiplicities may go negative; negative multiplicities mark fixed
exceptional components, which still count in the Euler characteristic but
impose no vanishing conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

GENERIC = "generic"
ON_CUBIC = "on-cubic"


@dataclass(frozen=True)
class FatPointSystem:
    d: int
    mults: tuple = ()
    tags: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "mults", tuple(int(m) for m in self.mults))
        tags = self.tags or (GENERIC,) * len(self.mults)
        if len(tags) != len(self.mults):
            raise ValueError("one tag per multiplicity required")
        for t in tags:
            if t not in (GENERIC, ON_CUBIC):
                raise ValueError(f"unknown placement tag {t!r}")
        object.__setattr__(self, "tags", tuple(tags))

    @property
    def npoints(self) -> int:
        return len(self.mults)

    @property
    def homogeneous(self) -> bool:
        return len(set(self.mults)) <= 1

    def __str__(self):
        return f"({self.d}; {','.join(map(str, self.mults))})"


def homogeneous_system(d: int, n: int, m: int, tag: str = GENERIC) -> FatPointSystem:
    return FatPointSystem(d, (m,) * n, (tag,) * n)


@dataclass(frozen=True)
class SystemInvariants:
    chi: int
    v: int
    conditions: int
    monomials: int


def monomial_count(d: int) -> int:
    """Number of degree-d monomials in three variables; 0 for d < 0."""
    return (d + 1) * (d + 2) // 2 if d >= 0 else 0


def chi(s: FatPointSystem) -> int:
    """Euler characteristic d(d+3)/2 + 1 - sum m_i(m_i+1)/2, all entries."""
    return s.d * (s.d + 3) // 2 + 1 - sum(m * (m + 1) // 2 for m in s.mults)


def expected_dim(s: FatPointSystem) -> int:
    """Expected dimension chi - 1 (raw; may be below -1)."""
    return chi(s) - 1


def conditions_count(s: FatPointSystem) -> int:
    """Linear conditions imposed by the positive multiplicities only."""
    return sum(m * (m + 1) // 2 for m in s.mults if m >= 1)


def invariants(s: FatPointSystem) -> SystemInvariants:
    c = chi(s)
    return SystemInvariants(chi=c, v=c - 1,
                            conditions=conditions_count(s),
                            monomials=monomial_count(s.d))


def effective_part(s: FatPointSystem) -> FatPointSystem:
    """Drop fixed exceptional components: clamp multiplicities at 0.

    Negative multiplicities contribute no sections and no conditions; the
    sections of the system are those of the clamped one.  Requires d >= 0.
    """
    if s.d < 0:
        raise ValueError("effective_part needs d >= 0 (system is empty otherwise)")
    return replace(s, mults=tuple(max(m, 0) for m in s.mults))


def cremona(s: FatPointSystem) -> FatPointSystem:
    """Quadratic transformation centered at the three largest multiplicities.

    Sorting is descending and stable; chi is preserved.  All points must be
    generic (the centers may not be constrained to a curve).
    """
    if s.npoints < 3:
        raise ValueError("cremona needs at least 3 points")
    if any(t != GENERIC for t in s.tags):
        raise ValueError("cremona centers must be generic points")
    order = sorted(range(s.npoints), key=lambda i: -s.mults[i])
    top = order[:3]
    msum = sum(s.mults[i] for i in top)
    if msum <= s.d:
        # the transform would not decrease the degree; treat as a no-op
        return s
    new = list(s.mults)
    for i in top:
        new[i] = s.d - (msum - s.mults[i])
    return replace(s, d=2 * s.d - msum, mults=tuple(new))


def cremona_standardize(s: FatPointSystem, max_steps: int = 10000):
    """Iterate cremona on the sorted multiplicity vector until standard form.

    Stops when d >= m1 + m2 + m3 (sorted descending), or when the degree or
    a multiplicity goes negative.  Returns (system, steps taken).
    """
    if s.npoints < 3:
        raise ValueError("cremona_standardize needs at least 3 points")
    cur = replace(s, mults=tuple(sorted(s.mults, reverse=True)))
    steps = 0
    while steps < max_steps:
        if cur.d < 0 or min(cur.mults) < 0:
            break
        m1, m2, m3 = cur.mults[0], cur.mults[1], cur.mults[2]
        if cur.d >= m1 + m2 + m3:
            break
        cur = cremona(cur)
        cur = replace(cur, mults=tuple(sorted(cur.mults, reverse=True)))
        steps += 1
    return cur, steps
