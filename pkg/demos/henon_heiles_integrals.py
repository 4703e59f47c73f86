"""Quartic first integrals of the Henon-Heiles family.

H = 1/2 (p1^2 + p2^2) + 1/2 (A q1^2 + B q2^2) + 1/3 q1^3 + L q1 q2^2.

With A, B, L left symbolic the leading quadratic below survives two pages
and dies on page 3.  The obstruction polynomial and the values of L that
kill it are printed; each value is then confirmed by a fresh run.

    python3 demos/henon_heiles_integrals.py
"""

from fractions import Fraction

from specseq.algebra import parse_polynomial
from specseq.drivers.ham import ham_search, ham_verify, henon_heiles_problem
from specseq.report import factor_text

K0 = "3/2*(4*B - A)*(B*q2^2 + p2^2)"
prob = henon_heiles_problem(candidates=[K0])
res = ham_search(prob)
print("H =", prob.hamiltonian)
print("dim of E_r^{0,0} by page:", res.page_dims)
print()

run = res.candidates[0]
for step in run.steps:
    print(f"page {step['page']}  level {step['target_level']}  {step['status']}")
    if step.get("differential"):
        print(f"   differential: {factor_text(step['differential'])}")
obs = run.obstruction
print()
print("obstruction (page 3):", factor_text(obs["value"]))
for name, found in run.conditions.items():
    for c in found:
        print(f"   vanishes at {name} = {c['value']}  (confirmed: {c['confirmed']})")

# the L = 1/6 integral, checked exactly with symbolic A and B
p = henon_heiles_problem(L=Fraction(1, 6))
K = parse_polynomial(K0 + " + B*q1*q2^2 + p2*(q2*p1 - q1*p2) + 1/6*q2^2*(q1^2 + 1/4*q2^2)", p.table)
ok, bracket = ham_verify(p.hamiltonian, K)
print()
print(f"L = 1/6: {{H, K}} = {bracket}, integral: {ok}")

# numeric case: the search finds the second integral by itself
num = ham_search(henon_heiles_problem(A=1, B=9, L=Fraction(1, 6)), with_candidates=False)
print("A = 1, B = 9, L = 1/6 integrals:")
for K in num.integrals:
    print("  ", K)
print("zero-weight quartics:", ", ".join(str(m) for m in num.zero_weight_quartic))
