"""
Working point of a Mach-Zehnder interferometer
==============================================

A single photon picks up a phase theta in one arm and a controllable
offset phi in the other.  With perfect visibility the classical Fisher
information of the two detectors is 1 at every offset, so in principle every
working point is equally good.  Real interferometers are not perfect.
"""

# %%
import math

import numpy as np

from menos import chi_menos, interferometer_cfi, interferometer_model, interferometer_povm, outcome_stats

# %%
# Lower the visibility a little and the Fisher information is no longer
# flat: it collapses near the dark fringes phi = 0 and phi = pi.
phis = np.linspace(0.05, math.pi - 0.05, 9)
print(f"{'phi':>8} {'F_C (v=1)':>10} {'F_C (v=0.98)':>13}")
for phi in phis:
    print(f"{phi:8.3f} {interferometer_cfi(0, phi, 1.0):10.6f} {interferometer_cfi(0, phi, 0.98):13.6f}")

# %%
# The susceptibility chi tells the same story without choosing a noise
# model first.  It is the worst-case rate at which Fisher information is
# lost when the ideal detectors are mixed with any other measurement.
print(f"\n{'phi':>8} {'chi':>12} {'closed form':>12}")
for phi in phis:
    model = interferometer_model(0.0, phi)
    report = chi_menos(model, outcome_stats(model, interferometer_povm(0.0, phi)))
    closed = 1 + math.cos(phi / 2) ** -2 + math.tan(phi / 2) ** -2
    print(f"{phi:8.3f} {report.chi:12.6f} {closed:12.6f}")

# %%
# The minimum, chi = 4, sits at phi = pi/2: the balanced point is the
# robust one.  The worst noise is a two-outcome measurement placed on the
# two detector labels.
model = interferometer_model(0.0, math.pi / 2)
report = chi_menos(model, outcome_stats(model, interferometer_povm(0.0, math.pi / 2)))
print("\nchi at phi = pi/2:", report.chi)
print("worst-case noise element on the low-l label:\n", np.round(report.worst_noise[report.i_min], 6))
