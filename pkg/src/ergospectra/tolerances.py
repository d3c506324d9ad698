"""Centralized numerical tolerances.

Every hard-coded threshold used by the library lives here so tests can
tighten or loosen them uniformly.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceProfile:
    hermitian_asym: float = 1e-12      # max asymmetry accepted before symmetrization
    unitary: float = 1e-10             # ||W*W - I|| for exact-structure flags
    unitary_loose: float = 1e-8        # unitary check after Moebius round trips
    frame_symmetry: float = 1e-10      # ||X*Y - Y*X|| for Lagrangian frames
    frame_rank: float = 1e-10          # relative smallest singular value of the stack
    degenerate: float = 1e-12          # relative cutoff for X - iY / A1 + A2 W
    kernel_cutoff: float = 1e-8        # singular-value cutoff for integer dims
    symplectic: float = 1e-10          # ||A*JA - J|| on sampled points
    eig_exact: float = 1e-12           # eigenvalue-equals-E counting slack
    principal_angle: float = 1e-6      # subspace comparisons in UH splittings
    ids_flat: float = 2e-3             # flatness window for gap detection
    label_tol: float = 1e-2            # gap-label matching distance
    ledger_consistency: float = 1e-8   # accumulated-vs-endpoint phase check


DEFAULT = ToleranceProfile()
