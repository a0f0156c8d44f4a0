"""Split a payload into (index, symbol) blocks and map them to the air interface."""

import numpy as np

from fomlink import constellation, deframe, demap_symbol, frame_bits, map_index, map_symbol

rng = np.random.default_rng(0)
payload = rng.integers(0, 2, size=23).tolist()
print("payload:", "".join(map(str, payload)))

framed = frame_bits(payload, m=16, n=8)
print(f"{len(framed.blocks)} blocks of 3 index + 4 symbol bits, {framed.pad_bits} pad bits")
for b in framed.blocks:
    k = map_index(b.index_bits)
    a = map_symbol(b.symbol_bits, 16)
    print(f"  tx {k}: bits {''.join(map(str, b.symbol_bits))} -> {a:+.3f}")

# Transparent round trip, pads stripped.
back = deframe(framed.blocks, framed.pad_bits)
assert back.tolist() == payload

# The 16-QAM table is Gray coded: sliding one grid step flips one bit.
table = constellation(16)
print("\n16-QAM, unit average energy:")
print(f"  mean |a|^2 = {np.mean(np.abs(table) ** 2):.12f}")
a = table[0b0000]
step = min(abs(p - a) for p in table if p != a)
neighbors = [i for i, p in enumerate(table) if abs(abs(p - a) - step) < 1e-9]
print(f"  neighbors of 0000: {[format(i, '04b') for i in neighbors]}")

# Hard slicing recovers the pattern, even slightly off the lattice.
noisy = table[0b1011] + (0.05 + 0.03j)
print(f"  demap({noisy:+.3f}) = {''.join(map(str, demap_symbol(noisy, 16)))}")
