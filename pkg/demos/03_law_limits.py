"""Where the synchronous product stops behaving like a lattice operation.

Both failures come from streams that observe different stamp sets.
"""

from tesalg import Component, Tes, check_law, ev, product, refines
from tesalg.signatures import SYNC

a = ev("a")
silent = Tes([(set(), 1)], 2)

# refinement may forget an event that the context still shares
A = Component({a}, [silent], 2)
B = Component((), [silent], 2)
C = Component({a}, [Tes([({a}, 1)], 2)], 2)
print("B refines A:", refines(B, A))
print("B x C refines A x C:", refines(product(B, C), product(A, C)))
print(check_law("monotonic", SYNC, [A, B, C]))

# two silent streams with different stamps merge into a third one
D = Component({a}, [Tes([(set(), 1)], 2), Tes([(set(), 2)], 2)], 2)
print("D x D == D:", product(D, D) == D)
print(check_law("idempotent", SYNC, [D]))
