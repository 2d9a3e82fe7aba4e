"""From a Hamming-distance spectrum to an explicit 4-local spin glass.

The hard energy profile is a quartic polynomial in the distance to the
target, so it expands into Z products on at most four qubits.  The
expansion is checked against every basis state, then compiled into a
depth-1 circuit.
"""

import math

from qsep import QaoaParams, build_hard_instance, expand_hamming_polynomial, verify_expansion
from qsep.couplings import export_circuit, render_circuit

inst = build_hard_instance(4)
sg = expand_hamming_polynomial(inst)
by_order = {}
for sites, coef in sorted(sg.terms.items()):
    by_order.setdefault(len(sites), set()).add(coef)
print("coefficients by locality (units of pi/4):")
for k, coefs in sorted(by_order.items()):
    print(f"  {k}-local: {[str(c) for c in sorted(coefs)]}")

rep = verify_expansion(sg, inst)
print(f"\nchecked {rep.states} basis states, max deviation {rep.max_deviation}")

big = build_hard_instance(12, "110100101100")
sg12 = expand_hamming_polynomial(big)
print(f"n=12: {len(sg12.terms)} terms, locality {sg12.locality}, exact match: {verify_expansion(sg12, big).passed}")

circ = export_circuit(sg, QaoaParams(math.pi / 4, -1.0))
print(f"\ncircuit for n=4 ({circ.entangler_count()} CX gates once ladders are expanded):")
print(render_circuit(circ))
