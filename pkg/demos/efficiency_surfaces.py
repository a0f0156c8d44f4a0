"""Where does offset indexing pay off?

The energy ratio compares transmit energy per information bit against a
single-transmitter baseline; values below one mean cheaper bits.  The
spectral ratio compares bits/s/Hz and has to beat the bandwidth spent on
the offsets, so it can go either way.
"""

import numpy as np

from fomlink import (
    energy_efficiency_ratio,
    grid_sweep,
    min_tx_count,
    preset_grid,
    spectral_efficiency_ratio,
)

print("energy ratio, m=256:")
for n in (1, 2, 8, 32, 128):
    print(f"  n={n:4d}  gamma_ee = {energy_efficiency_ratio(256, n):.4f}")
print()

print("spectral ratio at eta=0.01, m=256:")
for n in (1, 2, 8, 32, 128):
    print(f"  n={n:4d}  gamma_se = {spectral_efficiency_ratio(256, n, 0.01):.4f}")
print()

# Break-even array sizes: above this n the spectral ratio clears 1.
for m in (4, 16, 256, 4096):
    for expansion in (0.01, 0.1):
        need = min_tx_count(m, expansion)
        print(f"  m={m:5d} eta={expansion:5.2f}: need n >= {need:.3f}")
print()

# The canonical n=128 sweep; the envelope tightens as eta grows.
points = grid_sweep(preset_grid("fig5"))
gains = np.array([p.gamma_se for p in points])
etas = sorted({p.eta for p in points})
print(f"fig5 grid: {len(points)} points, gains span [{gains.min():.4f}, {gains.max():.4f}]")
worst_eta = max(etas)
at_worst = [p.gamma_se for p in points if p.eta == worst_eta]
print(f"at eta={worst_eta:.3f} the gain still reaches {max(at_worst):.4f} (m=2) "
      f"and bottoms out at {min(at_worst):.4f} (m=4096)")
