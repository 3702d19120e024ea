#!/usr/bin/env python3
import csv, collections
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
curves = collections.defaultdict(list)
with open('unit.csv') as f:
    for row in csv.DictReader(f):
        curves[row['scenario_id']].append((float(row['snr_db']), float(row['ber'])))
for name, pts in curves.items():
    pts.sort()
    plt.semilogy([p[0] for p in pts], [max(p[1], 1e-12) for p in pts], marker='o', label=name)
plt.xlabel('Eb/N0 [dB]')
plt.ylabel('BER')
plt.grid(True, which='both', alpha=0.3)
plt.legend()
plt.savefig('unit.png', dpi=150)
