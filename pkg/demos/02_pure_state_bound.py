"""
No QCRB-saturating measurement of a pure state beats chi = 4
=============================================================

For a pure-state family the measurements that reach the quantum Fisher
information are exactly the POVMs whose elements lie on one great circle
of the Bloch sphere (the "equator" of the canonical frame).  Among them,
only the projective measurement on the sigma_y eigenstates reaches
chi = 4.
"""

# %%
import math

import numpy as np

from menos import (
    check_saturation,
    chi_menos,
    equator_povm,
    outcome_stats,
    projective_from_states,
    pure_canonicalize,
    random_equator_povm,
)

# Any pure family reduces locally to |+><+| with drho = sqrt(F_Q)/2 sigma_y.
psi = np.array([1.0, 0.0, 0.0])
dpsi = 0.7j * np.array([0.0, 1.0, 0.0])
model = pure_canonicalize(psi, dpsi)
print("QFI of the family:", model.qfi_known)

# %%
sq2 = math.sqrt(2)
sigma_y = projective_from_states([np.array([1, 1j]) / sq2, np.array([1, -1j]) / sq2])
print("sigma_y measurement saturates:", check_saturation(model, sigma_y).saturates)
print("chi:", chi_menos(model, outcome_stats(model, sigma_y)).chi)

# %%
# Random equator POVMs also saturate the bound, but every one of them is
# more fragile.
chis = []
for seed in range(500):
    m = random_equator_povm(4, seed)
    assert check_saturation(model, m).saturates
    chis.append(chi_menos(model, outcome_stats(model, m)).chi)
print(f"500 random equator POVMs: min chi = {min(chis):.6f}, median = {np.median(chis):.3f}")

# %%
# Tilting the sigma_y pair away from its axis raises chi quadratically.
for tilt in (1e-3, 1e-2, 1e-1, 0.5):
    m = equator_povm([1, 1], [math.pi / 2 + tilt, -math.pi / 2 + tilt])
    print(f"tilt {tilt:6.3f}: chi - 4 = {chi_menos(model, outcome_stats(model, m)).chi - 4:.3e}")
