"""Deterministic parallel scheduling and orbit-value caching.

Jobs are pure functions of picklable payloads; results are merged by
key, so the numeric output is identical for any worker count or
completion order.  Failures are collected instead of aborting the scan.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import time

import numpy as np

from .errors import InvalidInput
from .model import OperatorModel


@dataclass
class OrbitCache:
    """Precomputed potential blocks f(T^n theta0), shared read-only.

    The blocks are energy independent, so one cache serves a whole
    E-grid scan; transfer products remain per-job.
    """

    theta0: np.ndarray
    blocks: np.ndarray  # (N, m, m)
    model: OperatorModel

    @classmethod
    def build(cls, model: OperatorModel, theta0, N: int) -> "OrbitCache":
        theta0 = np.atleast_1d(np.asarray(theta0, dtype=float))
        return cls(theta0=theta0, blocks=model.blocks(theta0, N), model=model)

    def get(self, n: int) -> np.ndarray:
        return self.blocks[n]

    def verify(self, seed: int = 0, fraction: float = 0.01) -> float:
        """Max deviation of a random 1% sample against fresh evaluation."""
        N = self.blocks.shape[0]
        rng = np.random.default_rng(seed)
        count = max(1, int(N * fraction))
        worst = 0.0
        for n in rng.integers(0, N, count):
            fresh = self.model.f(self.model.base.advance(self.theta0, int(n)))
            worst = max(worst, float(np.abs(fresh - self.blocks[n]).max()))
        return worst


@dataclass
class ScanResult:
    """Keyed results of a scan plus failure diagnostics."""

    values: dict
    failures: dict
    wall_time: float

    @property
    def ok(self) -> bool:
        return not self.failures

    def ordered(self, keys):
        return [self.values[k] for k in keys]


def _run_one(func, key, payload):
    try:
        return key, None, func(payload)
    except Exception as exc:  # jobs must not take the scan down
        return key, repr(exc), None


def scan(func, payloads, keys=None, workers: int = 1) -> ScanResult:
    """Run func over payloads, merging results by key.

    func must be a module-level (picklable) function when workers > 1.
    The merged result is independent of scheduling; failed jobs land in
    ScanResult.failures.
    """
    if keys is None:
        keys = list(range(len(payloads)))
    if len(keys) != len(payloads):
        raise InvalidInput("keys and payloads must have equal length")
    start = time.perf_counter()
    values, failures = {}, {}
    if workers <= 1 or len(payloads) <= 1:
        outcomes = (_run_one(func, k, p) for k, p in zip(keys, payloads))
        for key, err, value in outcomes:
            (failures if err else values)[key] = err if err else value
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for key, err, value in pool.map(_run_one,
                                            [func] * len(payloads), keys,
                                            payloads):
                (failures if err else values)[key] = err if err else value
    return ScanResult(values=values, failures=failures,
                      wall_time=time.perf_counter() - start)
