"""Mini-batch SGD with space-filling batches against random partitions.

The regression is linear in six basis functions of a 5-dimensional input.
Both arms see the same data and the same number of gradient steps; only the
grouping of rows into batches differs.  Ratios above 1 mean the designed
batches estimated that coefficient more accurately.

With default settings this takes a couple of minutes.
"""

import numpy as np

from dppdesign import SgdConfig, mse_ratio_experiment

config = SgdConfig(batchsize=23, epochs=200, replicates=20)
table = mse_ratio_experiment(config, seed=0)

print("per-coefficient MSE ratios, random over designed "
      "(batchsize %d, %d replicates):" % (config.batchsize, config.replicates))
for j, r in enumerate(table[0], start=1):
    marker = "designed wins" if r > 1 else "random wins"
    print("  beta%d: %5.2f   %s" % (j, r, marker))
