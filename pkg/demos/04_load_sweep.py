"""Mean link throughput against the number of greedy flows.

Dedicated access keeps growing until the 100 frequencies are full;
the random access methods saturate early because more users on an RA
block means more collisions. Writes load_sweep.png if matplotlib is
installed.
"""

from pcasim import scenarios
from pcasim.engine import run
from pcasim.metrics import loss_rate, mean_link_throughput_mbps

FLOWS = (1, 5, 10, 25, 50, 100)
results = {}
for name in scenarios.SCENARIOS:
    row = []
    for n in FLOWS:
        trace = run(scenarios.run_config(name, n, seed=0))
        row.append((mean_link_throughput_mbps(trace), loss_rate(trace)))
    results[name] = row

print("flows " + "".join(f"{name:>20s}" for name in scenarios.SCENARIOS))
for i, n in enumerate(FLOWS):
    cells = "".join(f"{results[s][i][0]:11.2f} Mbps {results[s][i][1]:4.0%}" for s in scenarios.SCENARIOS)
    print(f"{n:5d} {cells}")

try:
    import matplotlib.pyplot as plt
except ImportError:
    pass
else:
    for name, row in results.items():
        plt.plot(FLOWS, [r[0] for r in row], marker="o", label=name)
    plt.xlabel("greedy flows")
    plt.ylabel("mean link throughput (Mbps)")
    plt.legend()
    plt.savefig("load_sweep.png", dpi=120)
    print("wrote load_sweep.png")
