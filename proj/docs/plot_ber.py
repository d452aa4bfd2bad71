#!/usr/bin/env python3
"""Plot BER curves from a stairdet CSV: python3 docs/plot_ber.py fig2.csv"""
import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

curves = defaultdict(list)
with open(sys.argv[1], newline="") as f:
    for row in csv.DictReader(f):
        curves[row["detector"]].append((float(row["snr_db"]), float(row["ber"])))

for label, pts in curves.items():
    pts.sort()
    plt.semilogy([p[0] for p in pts], [p[1] for p in pts], marker="o", label=label)

plt.xlabel("SNR [dB]")
plt.ylabel("BER")
plt.grid(True, which="both", alpha=0.3)
plt.legend()
out = sys.argv[2] if len(sys.argv) > 2 else "ber.png"
plt.savefig(out, dpi=150, bbox_inches="tight")
print(f"wrote {out}")
