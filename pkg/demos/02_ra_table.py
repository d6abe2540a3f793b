"""Looking up random access losses in a performance table."""

import random

from pcasim import scenarios
from pcasim.ra_loss import ChannelOutOfRange, draw_loss, loss_probability

_, crdsa = scenarios.load("crdsa")
_, musca = scenarios.load("musca")

print("N_U   CRDSA    MuSCA   (Es/N0 = 5 dB)")
for n in (0, 1, 2, 3, 4, 5, 6, 8, 12):
    print(f"{n:3d}  {loss_probability(crdsa, 5.0, n):.4f}  {loss_probability(musca, 5.0, n):.4f}")

# Rows are picked by flooring Es/N0, so 5.9 dB reads the 5 dB row.
assert loss_probability(musca, 5.9, 4) == loss_probability(musca, 5.0, 4)
try:
    loss_probability(musca, 2.0, 4)
except ChannelOutOfRange as e:
    print("below the table:", e)

rng = random.Random(1)
p = loss_probability(crdsa, 5.0, 4)
hits = sum(draw_loss(p, rng) for _ in range(100_000))
print(f"CRDSA with 4 users: table says {p:.3f}, 100k draws give {hits / 100_000:.3f}")
