"""The explicit SL(2,p) family: matrices, spectra, and expansion bounds.

The p-dimensional representation acts on the sum-zero hyperplane of the
projective-line permutation representation; in the difference basis the
generator matrices are integral. The adjoint action on trace-zero matrices
has no fixed vectors, its Kazhdan constant is bracketed numerically, and
alpha = kappa^2 / 12 feeds the exact epsilon bounds below which no witness
can exist for the induced 3-arrow modules.
"""

from fractions import Fraction

from kronhf.fields import PrimeField
from kronhf.sl2p import (irreducible_rep, is_irreducible,
                         kazhdan_estimate, theta3_counterexample_module)
from kronhf.expander import (ExpanderCandidate, check_exhaustive,
                             check_sampled_rational, nonhf_epsilon_bound,
                             weak_nonhf_epsilon_bound)

print("the integral generator matrices for p = 3")
rep = irreducible_rep(3)
for name, m in (("rho_3(s)", rep.mat_s), ("rho_3(t)", rep.mat_t)):
    print(f"{name}:")
    for i in range(3):
        print("   ", [int(m.entry(i, j)) for j in range(3)])

print()
print("irreducibility via the commutant, and the Kazhdan bracket")
print(f"{'p':>3} {'dim adj':>8} {'irred':>6} {'kappa_lb':>10} {'kappa_ub':>10} "
      f"{'alpha':>10} {'eps>=':>10} {'weak eps>=':>11}")
for p in (3, 5, 7):
    rep = irreducible_rep(p)
    irr = is_irreducible([rep.mat_s, rep.mat_t])
    est = kazhdan_estimate(p, trials=60, seed=0)
    alpha = Fraction(est.alpha).limit_denominator(10 ** 9)
    print(f"{p:>3} {est.dim:>8} {str(irr):>6} {est.lower:>10.6f} {est.upper:>10.6f} "
          f"{est.alpha:>10.6f} {str(nonhf_epsilon_bound(alpha)):>10.10s} "
          f"{str(weak_nonhf_epsilon_bound(alpha)):>11.11s}")

print()
print("sampling the rational module (id, rho_5(s), rho_5(t)) for expansion")
M = theta3_counterexample_module(5)
cand = ExpanderCandidate.from_module(M, Fraction(1, 2), Fraction(1, 100))
rep = check_sampled_rational(cand, trials=2000, seed=7)
print(f"verdict: {rep.verdict} after {rep.subspaces_checked} samples, "
      f"worst ratio {rep.worst_ratio}")

print()
print("finite-field reduction experiment (not covered by the rational theory):")
F2 = PrimeField(2)
M2 = theta3_counterexample_module(3, F2)
cand = ExpanderCandidate.from_module(M2, Fraction(1, 2), Fraction(1, 2))
rep = check_exhaustive(cand)
print(f"mod-2 reduction of the p = 3 module: {rep.verdict} "
      f"({rep.subspaces_checked} subspaces, worst ratio {rep.worst_ratio})")
