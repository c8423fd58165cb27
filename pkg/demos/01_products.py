"""Three robots and a swap protocol, composed under synchronous interaction.

Run with ``python demos/01_products.py``.
"""

from tesalg import product_all
from tesalg.scenario import RobotSpec, gen_robot, gen_swap
from tesalg.scenario.tables import TABLE2_START, table2_eta
from tesalg.specio.serialize import tes_rows

HORIZON = 5

robots = [gen_robot(RobotSpec(i, HORIZON, start=TABLE2_START[i])) for i in (1, 2, 3)]
swap = gen_swap(2, 3, HORIZON)
print(f"each free robot has {len(robots[0].behavior)} streams; swap(2,3) has {len(swap.behavior)}")

# putting swap first keeps the intermediate products small
system = product_all([swap, robots[1], robots[2], robots[0]])
print(f"the coordinated system has {len(system.behavior)} streams")

eta = table2_eta(HORIZON)
print("one of them:")
for row in tes_rows(eta):
    print("  " + row)
print("present in the product:", eta in system.behavior)
