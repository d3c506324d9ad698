"""Gap labelling for a block quasi-periodic operator.

Builds the 2x2 block dual of the degree-2 trigonometric polynomial with
unit coefficients at the inverse golden mean, scans for spectral gaps
(flat IDS + uniform hyperbolicity), labels each interior gap with its
element of the group Z alpha + Z, and verifies the identity
m (1 - N(E)) = rot(E) modulo the group at the widest gap's midpoint.

Takes a few minutes at the default resolution.
"""

import numpy as np

from ergospectra.duality import TrigPolynomial, build_dual
from ergospectra.gaps import LabelGroup, detect_gaps, label_gap, verify_ids_rot
from ergospectra.model import restriction_eigenvalues

GOLDEN = (np.sqrt(5) - 1) / 2


def main():
    v = TrigPolynomial((1.0, 1.0, 0.0, 1.0, 1.0), GOLDEN)
    model = build_dual(v)
    group = LabelGroup("torus", (GOLDEN,), k_max=20)

    ev = restriction_eigenvalues(model, [0.0], 300)
    hull = (float(ev[0]) - 0.5, float(ev[-1]) + 0.5)
    print(f"scanning E in [{hull[0]:.2f}, {hull[1]:.2f}] ...")
    records = detect_gaps(model, hull, 200, 800, n_iter=600)

    interior = [r for r in records if r.interior]
    print(f"found {len(interior)} interior gaps\n")
    print("  gap interval            ids       label k, j     distance")
    for rec in interior:
        rec = label_gap(rec, group, model.m)
        lo, hi = rec.interval
        k, j = rec.label if rec.label else (("?",), "?")
        print(f"  [{lo:+.4f}, {hi:+.4f}]   {rec.ids_value:.4f}   "
              f"k = {k[0]:>3}, j = {j:>2}   {rec.label_distance:.1e}")

    widest = max(interior, key=lambda r: r.interval[1] - r.interval[0])
    lhs, rhs, dist = verify_ids_rot(model, widest.midpoint, 4000, group)
    print(f"\nidentity check at E = {widest.midpoint:.4f}:")
    print(f"  m (1 - ids) = {lhs:.6f}, rot = {rhs:.6f}, "
          f"distance mod (Z alpha + Z) = {dist:.2e}")


if __name__ == "__main__":
    main()
