"""Division: find C with B x C = A, and see when no canonical choice exists."""

from tesalg import CandidateUniverse, Component, NoLowerBound, QuotientQuery, Tes, divide, enumerate_quotients, ev, product
from tesalg.scenario.tables import table3
from tesalg.specio.serialize import component_text

a, b = ev("a"), ev("b")
A = Component({a, b}, [Tes([({a, b}, 1)], 2)], 2)
B = Component({a}, [Tes([({a}, 1)], 2)], 2)
universe = CandidateUniverse({b}, (1, 2), 1, 2, silent=False)
q = divide(QuotientQuery(A, B, universe))
print(component_text(q, "quotient"))
print("B x quotient == A:", product(B, q) == A)

# two quotients over different interfaces, neither below the other
t = table3()
queries = [
    QuotientQuery(t["A"], t["B"], CandidateUniverse({ev(n) for n in names}, (1, 2, 3, 4), 2, 4))
    for names in ("02", "12")
]
for x in queries:
    (found,) = enumerate_quotients(x).quotients
    print(f"interface {sorted(str(e) for e in found.interface)}: {len(found.behavior)} streams")
try:
    divide(queries)
except NoLowerBound as exc:
    print("no lower bound:", exc)
print("cheapest coordination picks", sorted(str(e) for e in divide(queries, "cost-ranked").interface))
