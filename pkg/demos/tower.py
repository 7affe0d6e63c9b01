"""The permutation tower for (k, m, r) = (3, 2, 2): x^3 is the least power
of x in the subgroup, and y^5 is its shortest element outside <x>."""

from sysgirth.schreier import (
    check_tower, min_x_power, perm_tower, shortest_stabilizer, stabilizer_action_Hk,
)

t = perm_tower(3, 2, 2)
print("l bounds", t.l_bounds, "n bounds", t.n_bounds)
for name, ok in check_tower(t).items():
    print(f"  {name}: {ok}")
action = stabilizer_action_Hk(t)
print("least power of x:", min_x_power(action, 10))
print("shortest word outside <x>:", shortest_stabilizer(action, 8, avoid_x_powers=True))
