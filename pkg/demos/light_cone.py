"""Measured commutator light cone against the evaluable bound family.

Evolves X_0 on a power-law chain, measures ||[X_0(t), X_r]|| exactly for a
range of separations, and compares against every bound kind whose parameter
constraints hold at this alpha.  Prints the worst (smallest) headroom per
kind and the measured light-cone contour.
"""

import numpy as np

from slowheat.errors import DomainError
from slowheat.lr_bounds import (BOUND_KINDS, bound_on_grid,
                                light_cone_contour, measure_cone,
                                params_from_lattice)
from slowheat.models import power_law_ising
from slowheat.lattice import chain
from slowheat.pauli import pauli_op

ALPHA = 3.0
N = 8

lat = chain(N)
H0 = power_law_ising(lat, ALPHA)
radii = [2.0, 3.0, 4.0, 5.0, 6.0]
times = np.linspace(0.0, 2.0, 9)
pairs = [(pauli_op("X", 0), pauli_op("X", int(r)), r) for r in radii]

cone = measure_cone(H0, pairs, times, sites=tuple(range(N)))
print(f"{N}-site chain, alpha = {ALPHA}, max measured norm "
      f"{cone.values.max():.4f}")

print(f"{'kind':<18} {'min headroom (bound/measured)':>30}")
for kind in BOUND_KINDS:
    try:
        params = params_from_lattice(kind, lat, ALPHA)
    except DomainError as err:
        print(f"{kind:<18} {'n/a: ' + str(err):>30}")
        continue
    grid = bound_on_grid(params, times, radii)
    # skip t = 0 where both sides vanish
    ratio = grid.values[1:] / np.maximum(cone.values[1:], 1e-300)
    # the conjectured kind is a shape assumption with a free constant, so
    # headroom below 1 means "needs calibration", not "bound violated"
    tag = " (conjectural form, free constant)" if kind == "conjectured" else ""
    print(f"{kind:<18} {ratio.min():>30.3e}{tag}")

contour = light_cone_contour(cone, 0.1)
print("\nmeasured contour at threshold 0.1:")
for r, t_star in contour:
    print(f"  r = {r:g}: first crossing at t = {t_star:.3f}")
