"""Walkthrough: asymptotic relative efficiencies under local alternatives.

Which member of the family should you deploy? Under a sequence of hazard
alternatives shrinking at root-n, each sign-exit member has a limiting drift
and variance computed by one-dimensional quadrature; the ratio of squared
drift to variance is its efficacy, and ratios of efficacies compare tests.

The covariate transform of the entry time drives the result: a transform
linear in the entry time favors the linear member, strongly nonlinear ones
favor the rank member.
"""

import numpy as np

from qitest import (
    AlternativeModel,
    EfficacyTest,
    efficacy,
    exponential_entry,
    model_linear_risk,
    pitman_are,
    uniform_entry,
)

print("linear covariate transform a(l) = l, exponential entries")
print(f"{'censoring (pre, post)':24s} {'rank vs sign':>13s} {'linear vs sign':>15s}")
for psi in ((0.0, 0.0), (0.0, 1.0), (1.0, 1.0)):
    model = model_linear_risk(exponential_entry(2.0), *psi)
    r = pitman_are(model, "rank", "sign")
    l = pitman_are(model, "linear", "sign")
    print(f"{str(psi):24s} {r:13.3f} {l:15.3f}")
print()

print("same transform, uniform entries (rank and linear coincide exactly):")
for psi in ((0.0, 0.0), (0.0, 1.0), (1.0, 1.0)):
    model = model_linear_risk(uniform_entry(), *psi)
    r = pitman_are(model, "rank", "sign")
    l = pitman_are(model, "linear", "sign")
    print(f"  {str(psi):22s} rank {r:.3f} == linear {l:.3f}")
print()

print("a custom non-monotone transform a(l) = (l - 0.6)^2, exponential entries:")
model = AlternativeModel(entry=exponential_entry(2.0), psi0=0.0, psi1=1.0,
                         a_fun=lambda l: np.square(l - 0.6))
for test in EfficacyTest:
    res = efficacy(model, test)
    print(f"  {test.value:7s} drift {res.mu_inf:+.6f}  variance {res.sigma2_inf:.6f}  "
          f"efficacy {res.efficacy:.6f}")
print()
print("The drift of the linear member nearly cancels under this transform")
print("(its efficacy is ~6x below the others); the sign and rank members")
print("keep useful power against such non-monotone alternatives.")
