"""Watching single packets go through the PCA queue frame by frame."""

import dataclasses

from pcasim import scenarios
from pcasim.pca import PcaQueue, QueueSettings
from pcasim.ra_loss import parse_ra_table

frame, queue, _ = scenarios.load("dedicated")[0]
q = PcaQueue(frame, queue)
q.enque(0, 0, 12000, 0.0)
q.enque(0, 1, 12000, 0.0)
print(f"dedicated flow: first packet may start after frame {q.flows[0].packets[0].frame_in}"
      f" (connection set-up of ceil(rtt/T_F) frames)")
for k in range(1, 16):
    deps, _ = q.deque(k)
    for p in deps:
        print(f"  frame {k:2d}: seq {p.pkt_seqno} leaves at {k * frame.frame_duration:.3f} s")

# Same two packets over random access: no set-up, but only 13 PLDUs of 680 bits per frame.
frame, queue, _ = scenarios.load("musca")[0]
never_lost = parse_ra_table("1\n0.0 0.0\n")
q = PcaQueue(frame, queue, never_lost)
q.enque(0, 0, 12000, 0.0)
q.enque(0, 1, 12000, 0.0)
for k in range(1, 6):
    deps, _ = q.deque(k)
    budget = q.last_budgets.get(0)
    granted = f"{budget.slots_granted} PLDUs" if budget else "nothing"
    left = [p.bits_to_send for p in q.flows[0].packets]
    print(f"  frame {k}: granted {granted}, departed {[p.pkt_seqno for p in deps]}, bits still queued {left}")

# Hybrid: the first packet goes random, the rest wait for the reservation.
frame = scenarios.load("dedicated")[0].frame
hybrid = dataclasses.replace(frame, freq_random=100, ra_block_freqs=2.5, bits_per_ra_allocation=680, blocks_per_pldu=3)
q = PcaQueue(hybrid, QueueSettings(switch_threshold=1), never_lost)
for s in range(3):
    q.enque(0, s, 12000, 0.0)
for k in range(1, 16):
    for p in q.deque(k)[0]:
        print(f"  hybrid frame {k:2d}: seq {p.pkt_seqno} via {p.access.value}")
