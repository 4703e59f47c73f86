"""Polynomial solutions of a third-order linear ODE.

The operator below raises degrees by at most 3, so x^n sits on grade level
n + 3.  Only leading monomials whose image drops filtration can start a
solution; the engine then corrects them level by level.

    python3 demos/ode_polynomial_solutions.py
"""

from specseq.drivers.ode import OdeProblem, indicial_roots, ode_poly_solutions

coefficients = [
    "-15*x^3",  # q
    "15*x^4",  # q'
    "-(6*x^5 - 5/4*x^2 + 9/8)",  # q''
    "x^6 - 5/12*x^3 + 9/8*x",  # q'''
]
prob = OdeProblem.parse(coefficients)
res = ode_poly_solutions(prob)

print(f"shift = {res.shift}, indicial roots = {indicial_roots(prob)}")
print()
print(f"{'line':>4}  {'monomial':<8} {'grade':>5}  {'f(monomial)':<34} {'filtration':>10}")
for row in res.table:
    print(f"{row['line']:>4}  {str(row['monomial']):<8} {row['grade_level']:>5}  {str(row['image']):<34} {row['filtration_level']:>10}")

print()
for o in res.outcomes:
    if o["status"] == "witness":
        print(f"leading term {o['leading']}: extends to the solution {o['solution']}")
    else:
        print(f"leading term {o['leading']}: obstructed on page {o['page']} at level {o['target_level']}")

print()
print("basis of polynomial solutions:", ", ".join(str(b) for b in res.basis))

# y'' - y = 0 has exponentials, no polynomials
none = ode_poly_solutions(OdeProblem.parse(["-1", "0", "1"]))
print("y'' - y = 0:", none.basis or "no polynomial solutions")
