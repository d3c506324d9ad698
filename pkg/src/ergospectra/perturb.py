"""Spectral-set arithmetic and random diagonal perturbations.

The star product A * B is A + ch(B) when diam(A) >= diam(B) and
ch(A) + B otherwise (ch = convex hull); it describes the almost-sure
spectrum of H + diag(omega) when the i.i.d. entries omega have finite
support B and the unperturbed almost-sure spectrum is A.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySet, InvalidInput, InvalidLaw, UnsupportedBase
from .model import OperatorModel, TORUS, restriction_eigenvalues


class SpectralSet:
    """Finite union of disjoint closed intervals; points have zero width."""

    def __init__(self, intervals):
        ivs = []
        for lo, hi in intervals:
            lo, hi = float(lo), float(hi)
            if not (np.isfinite(lo) and np.isfinite(hi)) or hi < lo:
                raise InvalidInput(f"bad interval [{lo}, {hi}]")
            ivs.append((lo, hi))
        ivs.sort()
        merged = []
        for lo, hi in ivs:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        self.intervals = merged

    @classmethod
    def from_points(cls, points, radius: float = 0.0) -> "SpectralSet":
        return cls([(p - radius, p + radius) for p in points])

    @classmethod
    def from_samples(cls, values, merge_radius: float) -> "SpectralSet":
        """Thicken a sample cloud into intervals, splitting at gaps wider
        than the merge radius."""
        v = np.sort(np.asarray(values, dtype=float))
        if v.size == 0:
            return cls([])
        ivs = []
        lo = prev = v[0]
        for x in v[1:]:
            if x - prev > merge_radius:
                ivs.append((lo, prev))
                lo = x
            prev = x
        ivs.append((lo, prev))
        return cls(ivs)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def _require_nonempty(self):
        if self.is_empty:
            raise EmptySet("operation on an empty spectral set")

    @property
    def hull(self):
        self._require_nonempty()
        return (self.intervals[0][0], self.intervals[-1][1])

    @property
    def diameter(self) -> float:
        self._require_nonempty()
        lo, hi = self.hull
        return hi - lo

    def union(self, other: "SpectralSet") -> "SpectralSet":
        return SpectralSet(self.intervals + other.intervals)

    def minkowski(self, other: "SpectralSet") -> "SpectralSet":
        self._require_nonempty()
        other._require_nonempty()
        return SpectralSet([(a + c, b + d)
                            for a, b in self.intervals
                            for c, d in other.intervals])

    def convex_hull_set(self) -> "SpectralSet":
        return SpectralSet([self.hull])

    def distance_to(self, x: float) -> float:
        self._require_nonempty()
        best = np.inf
        for lo, hi in self.intervals:
            if lo <= x <= hi:
                return 0.0
            best = min(best, abs(x - lo), abs(x - hi))
        return float(best)

    def sample_grid(self, points_per_unit: float = 100.0, minimum: int = 2):
        """Deterministic grid covering every interval, endpoints included."""
        out = []
        for lo, hi in self.intervals:
            n = max(minimum, int(np.ceil((hi - lo) * points_per_unit)) + 1)
            out.append(np.linspace(lo, hi, n))
        return np.concatenate(out) if out else np.array([])

    def to_json(self):
        return [[lo, hi] for lo, hi in self.intervals]

    @classmethod
    def from_json(cls, data) -> "SpectralSet":
        return cls([(lo, hi) for lo, hi in data])

    def __eq__(self, other):
        return isinstance(other, SpectralSet) and self.intervals == other.intervals

    def __repr__(self):
        return f"SpectralSet({self.intervals!r})"


def star(A: SpectralSet, B: SpectralSet) -> SpectralSet:
    """A + ch(B) if diam(A) >= diam(B), else ch(A) + B.

    Equal diameters take the first branch; for that tie both branches
    agree whenever either set is an interval.
    """
    A._require_nonempty()
    B._require_nonempty()
    if A.diameter >= B.diameter:
        return A.minkowski(B.convex_hull_set())
    return A.convex_hull_set().minkowski(B)


@dataclass(frozen=True)
class RandomDiagonalLaw:
    """Finite-support i.i.d. diagonal perturbation; needs >= 2 atoms."""

    support: tuple
    seed: int = 0

    def __post_init__(self):
        s = tuple(sorted(set(float(x) for x in self.support)))
        if len(s) < 2:
            raise InvalidLaw("support must contain at least two distinct points")
        if not all(np.isfinite(x) for x in s):
            raise InvalidLaw("support values must be finite")
        object.__setattr__(self, "support", s)


def default_merge_radius(model: OperatorModel, N: int, theta0=None) -> float:
    """Twice the median eigenvalue spacing of the unperturbed H^N."""
    if theta0 is None:
        theta0 = np.zeros(model.base.d)
    ev = restriction_eigenvalues(model, theta0, N)
    return 2.0 * float(np.median(np.diff(ev)))


def two_sided_realizations(support, length: int):
    """Deterministic profiles constant on each half of the window.

    These localize eigenvectors near the interface and stress energies
    at gap edges of the perturbed spectrum.
    """
    half = length // 2
    out = []
    for v in support:
        for w in support:
            omega = np.empty(length)
            omega[:half] = v
            omega[half:] = w
            out.append(omega)
    return out


def _realization_eigs(model: OperatorModel, N: int, support, seed: int,
                      index: int) -> np.ndarray:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    rng = np.random.Generator(np.random.Philox(ss))
    theta = rng.random(model.base.d)
    omega = np.asarray(support)[rng.integers(0, len(support), model.m * N)]
    return restriction_eigenvalues(model, theta, N, diag_shift=omega)


def monte_carlo_eigenvalues(model: OperatorModel, law: RandomDiagonalLaw,
                            N: int, realizations: int, theta0=None,
                            include_deterministic: bool = True) -> np.ndarray:
    """All sampled eigenvalues of H^N + diag(omega); deterministic in seed."""
    if realizations < 1:
        raise InvalidInput("need at least one realization")
    if theta0 is None:
        theta0 = np.zeros(model.base.d)
    chunks = []
    if include_deterministic:
        for v in law.support:
            omega = np.full(model.m * N, v)
            chunks.append(restriction_eigenvalues(model, theta0, N, omega))
        for omega in two_sided_realizations(law.support, model.m * N):
            chunks.append(restriction_eigenvalues(model, theta0, N, omega))
    for i in range(realizations):
        chunks.append(_realization_eigs(model, N, law.support, law.seed, i))
    return np.sort(np.concatenate(chunks))


def monte_carlo_sigma1(model: OperatorModel, law: RandomDiagonalLaw, N: int,
                       realizations: int, theta0=None,
                       merge_radius: float | None = None,
                       include_deterministic: bool = True) -> SpectralSet:
    """Monte Carlo estimate of the perturbed almost-sure spectrum."""
    if merge_radius is None:
        merge_radius = default_merge_radius(model, N, theta0)
    ev = monte_carlo_eigenvalues(model, law, N, realizations, theta0,
                                 include_deterministic)
    return SpectralSet.from_samples(ev, merge_radius)


def check_bigstar(model: OperatorModel, law: RandomDiagonalLaw, N: int,
                  realizations: int, sigma0: SpectralSet | None = None,
                  theta0=None, detect_kwargs: dict | None = None) -> dict:
    """Compare the Monte Carlo spectrum against Sigma0 * supp(nu).

    sigma0 may be supplied; otherwise it is derived from a gap scan of
    the unperturbed model.  Reports the worst outlier distance
    (subset_violation) and the worst uncovered distance (coverage_gap).
    """
    if model.base.kind != TORUS:
        raise UnsupportedBase("the star comparison needs a connected torus base")
    if theta0 is None:
        theta0 = np.zeros(model.base.d)
    if sigma0 is None:
        sigma0 = estimate_sigma0(model, theta0=theta0, **(detect_kwargs or {}))
    S = SpectralSet.from_points(law.support)
    predicted = star(sigma0, S)
    ev = monte_carlo_eigenvalues(model, law, N, realizations, theta0)
    subset_violation = float(max(predicted.distance_to(x) for x in ev))
    grid = predicted.sample_grid()
    pos = np.searchsorted(ev, grid)
    pos = np.clip(pos, 1, ev.size - 1)
    nearest = np.minimum(np.abs(grid - ev[pos - 1]), np.abs(grid - ev[pos]))
    coverage_gap = float(nearest.max()) if grid.size else 0.0
    return {
        "sigma0": sigma0.to_json(),
        "support": list(law.support),
        "predicted": predicted.to_json(),
        "observed": monte_carlo_sigma1(model, law, N, realizations,
                                       theta0).to_json(),
        "subset_violation": subset_violation,
        "coverage_gap": coverage_gap,
    }


def estimate_sigma0(model: OperatorModel, theta0=None, N: int = 1000,
                    resolution: int = 200, n_iter: int = 800,
                    pad: float = 1.0) -> SpectralSet:
    """Unperturbed spectrum as the complement of detected gaps."""
    from .gaps import detect_gaps
    if theta0 is None:
        theta0 = np.zeros(model.base.d)
    ev = restriction_eigenvalues(model, theta0, N)
    lo, hi = float(ev[0]) - pad, float(ev[-1]) + pad
    records = detect_gaps(model, (lo, hi), resolution, N, theta0=theta0,
                          n_iter=n_iter)
    bands = [(lo, hi)]
    for r in records:
        glo, ghi = r.interval
        new = []
        for blo, bhi in bands:
            if ghi <= blo or glo >= bhi:
                new.append((blo, bhi))
                continue
            if glo > blo:
                new.append((blo, glo))
            if ghi < bhi:
                new.append((ghi, bhi))
        bands = new
    return SpectralSet(bands)
