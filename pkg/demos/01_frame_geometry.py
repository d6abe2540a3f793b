"""How much a frame carries and how it is split between users.

Uses the bundled DVB-RCS2 dedicated and MuSCA configurations.
"""

from pcasim import scenarios
from pcasim.frame import Access, fair_share, per_flow_frame_bit_cap, per_user_slot_limit, total_slots_per_frame

ded = scenarios.load("dedicated")[0].frame
musca = scenarios.load("musca")[0].frame

print(f"frame period            {ded.frame_duration * 1e3:.0f} ms")
print(f"slots per frame         {total_slots_per_frame(ded)} dedicated, {total_slots_per_frame(musca)} random")
print(f"RA blocks per frame     {musca.n_ra_blocks} of {musca.ra_block_slots} slots")
print(f"one user may use        {per_user_slot_limit(ded, Access.DEDICATED)} dedicated slots"
      f" or {per_user_slot_limit(musca, Access.RANDOM)} PLDUs per frame")
print(f"per-flow bit cap        {per_flow_frame_bit_cap(ded)} bits per frame")

# Max-min sharing of 40 slots. Leftover slots go to the earliest flows.
for users in (1, 7, 10, 60):
    shares = fair_share(40, users)
    print(f"{users:3d} users on 40 slots -> {sorted(set(shares), reverse=True)} "
          f"({shares.count(max(shares))} get the larger share)")

# A flow that needs little gives its slots back to the others.
print("demands [2, 40, 40] on 40 slots ->", fair_share(40, 3, [2, 40, 40]))
