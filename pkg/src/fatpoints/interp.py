"""Fat-point interpolation over GF(p) and nonspeciality certificates.

A multiplicity-m condition at a point forces all partial derivatives of
order < m to vanish there, i.e. m(m+1)/2 linear conditions on the monomial
coefficients.  Full rank of the resulting matrix at one sampled
configuration certifies full rank at generic points in characteristic zero
(rank can only drop under specialization and reduction mod p), so a
full-rank sample is a genuine nonspeciality certificate.  Rank deficits are
never certified by sampling alone: repeated agreeing deficits only yield a
"special-suspected" verdict.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import gfmat, linsys
from .gfmat import DEFAULT_PRIME, GFMatrix
from .linsys import GENERIC, ON_CUBIC, FatPointSystem

SAMPLE_RETRIES = 64
DEFAULT_TRIALS = 3

# certificate verdicts
NONSPECIAL = "nonspecial-certified"
SPECIAL_EXACT = "special-exact"
SPECIAL_SUSPECTED = "special-suspected"
INCONCLUSIVE = "inconclusive"
UPPER_BOUND = "upper-bound"

# certification methods
DIRECT_GENERIC = "direct-generic"
DIRECT_ON_CUBIC = "direct-on-cubic"
DEGENERATION_CODIM = "degeneration-corollary"
DEGENERATION_BOUND = "degeneration-bound"

CERT_SCHEMA_VERSION = 1


class ConfigError(Exception):
    pass


class SamplingError(Exception):
    pass


@dataclass(frozen=True)
class PointConfig:
    """A concrete point set over GF(p): projective triples plus placement tags.

    cubic is the (a, b) of y^2 = x^3 + ax + b when any point is constrained
    to the curve, else None.  Deterministic in (p, seed).
    """
    p: int
    points: tuple          # ((x, y, z), ...) fully reduced mod p
    tags: tuple
    seed: int
    cubic: Optional[tuple] = None


@dataclass(frozen=True)
class RankReport:
    monomials: int
    conditions: int
    rank: int
    h0_sample: int
    full_rank: bool


@dataclass(frozen=True)
class Certificate:
    verdict: str
    method: str
    system: FatPointSystem
    chi: int
    prime: int
    seed: int
    trials: int
    h0_bound: Optional[int] = None
    h0: Optional[int] = None
    h1: Optional[int] = None
    evidence: tuple = ()   # ((prime, seed, RankReport), ...)

    @property
    def decided(self) -> bool:
        return self.verdict in (NONSPECIAL, SPECIAL_EXACT)

    def to_dict(self) -> dict:
        return {
            "schema_version": CERT_SCHEMA_VERSION,
            "verdict": self.verdict,
            "method": self.method,
            "system": {
                "d": self.system.d,
                "mults": list(self.system.mults),
                "tags": list(self.system.tags),
            },
            "chi": self.chi,
            "prime": str(self.prime),
            "seed": str(self.seed),
            "trials": self.trials,
            "h0_bound": self.h0_bound,
            "h0": self.h0,
            "h1": self.h1,
            "evidence": [
                {
                    "prime": str(p),
                    "seed": str(s),
                    "report": {
                        "monomials": r.monomials,
                        "conditions": r.conditions,
                        "rank": r.rank,
                        "h0_sample": r.h0_sample,
                        "full_rank": r.full_rank,
                    },
                }
                for (p, s, r) in self.evidence
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def certificate_from_dict(d: dict) -> Certificate:
    sys_ = FatPointSystem(d["system"]["d"], tuple(d["system"]["mults"]),
                          tuple(d["system"]["tags"]))
    ev = tuple(
        (int(e["prime"]), int(e["seed"]),
         RankReport(**e["report"]))
        for e in d["evidence"]
    )
    return Certificate(
        verdict=d["verdict"], method=d["method"], system=sys_, chi=d["chi"],
        prime=int(d["prime"]), seed=int(d["seed"]), trials=d["trials"],
        h0_bound=d["h0_bound"], h0=d["h0"], h1=d["h1"], evidence=ev,
    )


def derive_seed(seed: int, index: int) -> int:
    """Stable 64-bit sub-seed for trial number `index`."""
    h = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return int.from_bytes(h[:8], "big")


def monomial_basis(d: int):
    """Exponent triples (i, j, k), i+j+k = d, in lexicographic order."""
    if d < 0:
        return []
    return [(i, j, d - i - j) for i in range(d, -1, -1) for j in range(d - i, -1, -1)]


def sample_config(n_generic: int, n_cubic: int, p: int, seed: int,
                  tags=None) -> PointConfig:
    """Sample a deterministic point configuration over GF(p).

    On-cubic points come first unless an explicit tag sequence is given.
    Curve points are found by sampling x, testing quadratic residuosity of
    x^3 + ax + b and taking a Tonelli-Shanks square root.  All points are
    pairwise distinct (resampled on collision, bounded retries).
    """
    gfmat.check_modulus(p)
    if p <= 3:
        raise ConfigError("prime must exceed 3")
    if tags is None:
        tags = (ON_CUBIC,) * n_cubic + (GENERIC,) * n_generic
    else:
        tags = tuple(tags)
        if tags.count(ON_CUBIC) != n_cubic or tags.count(GENERIC) != n_generic:
            raise ConfigError("tag sequence disagrees with point counts")
    rng = random.Random(f"{p}:{seed}")

    cubic = None
    if n_cubic > 0:
        for _ in range(SAMPLE_RETRIES):
            a, b = rng.randrange(p), rng.randrange(p)
            if (4 * a * a * a + 27 * b * b) % p != 0:
                cubic = (a, b)
                break
        else:
            raise SamplingError("could not sample a smooth cubic")

    seen = set()
    points = []
    for tag in tags:
        for _ in range(SAMPLE_RETRIES):
            if tag == ON_CUBIC:
                a, b = cubic
                x = rng.randrange(p)
                t = (x * x * x + a * x + b) % p
                if t != 0 and gfmat.legendre(t, p) != 1:
                    continue
                y = gfmat.sqrt_mod(t, p)
                if rng.randrange(2):
                    y = (-y) % p
                pt = (x, y, 1)
            else:
                pt = (rng.randrange(p), rng.randrange(p), 1)
            if pt not in seen:
                seen.add(pt)
                points.append(pt)
                break
        else:
            raise SamplingError("retry budget exhausted while sampling points")
    return PointConfig(p=p, points=tuple(points), tags=tuple(tags),
                       seed=seed, cubic=cubic)


def config_for_system(s: FatPointSystem, p: int, seed: int) -> PointConfig:
    """One point per system entry, placement matching the system's tags."""
    return sample_config(s.tags.count(GENERIC), s.tags.count(ON_CUBIC),
                         p, seed, tags=s.tags)


def _falling(n: int, k: int) -> int:
    r = 1
    for i in range(k):
        r *= n - i
    return r


def condition_rows(point, m: int, d: int, p: int) -> np.ndarray:
    """Rows forcing a degree-d form to vanish to order m at `point`.

    One row per derivative multi-index (alpha, beta) with alpha + beta < m,
    taken in an affine chart where the point has a nonzero coordinate
    (z preferred).  Requires p > d so derivative coefficients are nonzero
    mod p exactly when they are nonzero over the integers.
    """
    if m < 1:
        raise ValueError("multiplicity must be >= 1")
    if p <= d:
        raise ConfigError(f"prime {p} must exceed degree {d}")
    x, y, z = (c % p for c in point)
    # dehomogenize at the last nonzero coordinate, preferring z
    if z != 0:
        chart = 2
    elif y != 0:
        chart = 1
    elif x != 0:
        chart = 0
    else:
        raise ConfigError("zero projective point")
    basis = monomial_basis(d)
    inv = pow((x, y, z)[chart], -1, p)
    coords = [x * inv % p, y * inv % p, z * inv % p]
    affine = [coords[i] for i in range(3) if i != chart]
    # exponents of the two affine variables, per monomial
    exps = [[e[i] for i in range(3) if i != chart] for e in basis]

    # power tables up to degree d
    pows = []
    for c in affine:
        tab = [1] * (d + 1)
        for i in range(1, d + 1):
            tab[i] = tab[i - 1] * c % p
        pows.append(tab)

    rows = np.zeros((m * (m + 1) // 2, len(basis)), dtype=np.int64)
    r = 0
    for alpha in range(m):
        for beta in range(m - alpha):
            for col, (i, j) in enumerate(exps):
                if i < alpha or j < beta:
                    continue
                c = _falling(i, alpha) * _falling(j, beta) % p
                rows[r, col] = c * pows[0][i - alpha] % p * pows[1][j - beta] % p
            r += 1
    return rows


def build_matrix(s: FatPointSystem, cfg: PointConfig) -> GFMatrix:
    """Stack condition rows for every point with positive multiplicity."""
    if s.tags != cfg.tags:
        raise ConfigError("system and configuration tags disagree")
    eff = linsys.effective_part(s)
    ncols = linsys.monomial_count(eff.d)
    blocks = [condition_rows(cfg.points[i], m, eff.d, cfg.p)
              for i, m in enumerate(eff.mults) if m >= 1]
    if blocks:
        data = np.vstack(blocks)
    else:
        data = np.zeros((0, ncols), dtype=np.int64)
    return GFMatrix(data, cfg.p)


def h0_at_sample(s: FatPointSystem, cfg: PointConfig) -> RankReport:
    """Sections of the system at this concrete configuration.

    h0_sample = monomials - rank bounds the generic characteristic-zero h0
    from above (semicontinuity in both the points and the prime).
    """
    M = build_matrix(s, cfg)
    r = gfmat.rank(M)
    return RankReport(
        monomials=M.cols,
        conditions=M.rows,
        rank=r,
        h0_sample=M.cols - r,
        full_rank=(r == min(M.rows, M.cols)),
    )


def _method_for(s: FatPointSystem) -> str:
    return DIRECT_ON_CUBIC if ON_CUBIC in s.tags else DIRECT_GENERIC


def certify(s: FatPointSystem, trials: int = DEFAULT_TRIALS,
            p: int = DEFAULT_PRIME, seed: int = 0) -> Certificate:
    """Decide (non)speciality of the system, sampling where needed.

    Exact route: when no vanishing conditions survive (d < 0, or every
    multiplicity <= 0), h0 is fixed-component arithmetic and the verdict is
    exact.  Sampling route: a full-rank trial pins the generic h0 exactly;
    agreeing deficits over >= 3 seeds give special-suspected only.
    h1 is inferred as h0 - chi, valid since h2 = 0 for d >= -2.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ch = linsys.chi(s)
    method = _method_for(s)

    if s.d < -2:
        # no sections at all; nonspecial by definition, though h1 cannot be
        # inferred from chi (h2 need not vanish here)
        return Certificate(verdict=NONSPECIAL, method=method, system=s,
                           chi=ch, prime=p, seed=seed, trials=trials,
                           h0_bound=0, h0=0, h1=None)
    if s.d < 0:
        h0 = 0
    elif linsys.conditions_count(linsys.effective_part(s)) == 0:
        h0 = linsys.monomial_count(s.d)
    else:
        h0 = None

    if h0 is not None:
        h1 = h0 - ch
        verdict = SPECIAL_EXACT if (h0 > 0 and h1 > 0) else NONSPECIAL
        return Certificate(verdict=verdict, method=method, system=s, chi=ch,
                           prime=p, seed=seed, trials=trials,
                           h0_bound=h0, h0=h0, h1=h1)

    evidence = []
    for t in range(trials):
        sub = derive_seed(seed, t)
        cfg = config_for_system(s, p, sub)
        evidence.append((p, sub, h0_at_sample(s, cfg)))

    reports = [r for (_, _, r) in evidence]
    if any(r.full_rank for r in reports):
        full = next(r for r in reports if r.full_rank)
        h0 = full.h0_sample
        h1 = h0 - ch
        verdict = SPECIAL_EXACT if (h0 > 0 and h1 > 0) else NONSPECIAL
        return Certificate(verdict=verdict, method=method, system=s, chi=ch,
                           prime=p, seed=seed, trials=trials,
                           h0_bound=h0, h0=h0, h1=h1, evidence=tuple(evidence))

    deficits = {r.h0_sample for r in reports}
    if len(deficits) == 1 and trials >= 3:
        h0s = reports[0].h0_sample
        return Certificate(verdict=SPECIAL_SUSPECTED, method=method, system=s,
                           chi=ch, prime=p, seed=seed, trials=trials,
                           h0_bound=h0s, h0=h0s, h1=h0s - ch,
                           evidence=tuple(evidence))
    bound = min(r.h0_sample for r in reports)
    return Certificate(verdict=INCONCLUSIVE, method=method, system=s, chi=ch,
                       prime=p, seed=seed, trials=trials, h0_bound=bound,
                       evidence=tuple(evidence))
