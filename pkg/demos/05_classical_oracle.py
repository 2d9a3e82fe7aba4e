"""Recovering the target classically with n+1 energy queries.

Energies modulo 2*pi only see the linear watermark, which moves by
+-pi/2 per flipped spin.  Flipping each spin once and reading the change
reveals whether that spin agreed with the target.
"""

import numpy as np

from qsep import build_hard_instance, solve
from qsep.instance import Instance, TargetState
from qsep.oracle_solver import instance_oracle

rng = np.random.default_rng(1)
n = 40
target = TargetState.random(n, rng)
inst = Instance(target, build_hard_instance(n, target).spectrum, [((0, 7, 19), 2), ((3, 30), -1)])

bits, log = solve(instance_oracle(inst), n, seed=5, units="quarter_pi")
print("target   :", target.bits)
print("recovered:", bits)
print(f"queries  : {log.count} (n+1 = {n + 1})")
print("first three queries:", log.entries[:3])
