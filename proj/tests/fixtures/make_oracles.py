"""Regenerates the fixture series and prints reference values from statsmodels.

The printed numbers are pasted into test_oracles.cpp; the C++ tests never call
Python.
"""
import numpy as np
from statsmodels.tsa.stattools import adfuller
from statsmodels.tsa.vector_ar.var_model import VAR
from statsmodels.tsa.vector_ar.vecm import VECM, coint_johansen

rng = np.random.default_rng(20240611)


def save(name, data):
    name = "../data/" + name
    np.savetxt(name, np.atleast_2d(data.T).T, delimiter=",", fmt="%.17g")


# Univariate ADF fixtures.
n = 150
e = rng.standard_normal(n)
ar = np.zeros(n)
for t in range(1, n):
    ar[t] = 0.7 * ar[t - 1] + e[t]
rw = np.cumsum(rng.standard_normal(n))
save("adf_ar.csv", ar)
save("adf_rw.csv", rw)
for name, x in (("ar", ar), ("rw", rw)):
    stat, p, lag, nobs, crit, _ = adfuller(x, regression="c", autolag="AIC")
    print(f"adf {name}: stat={stat!r} p={p!r} lag={lag} nobs={nobs} crit5={crit['5%']!r}")

# Trivariate system with one cointegrating relation.
T = 200
trend = np.cumsum(rng.standard_normal(T))
y = np.column_stack([
    trend + 0.5 * rng.standard_normal(T),
    0.5 * trend + 0.5 * rng.standard_normal(T),
    np.cumsum(rng.standard_normal(T)),
])
save("coint3.csv", y)
res = coint_johansen(y, det_order=0, k_ar_diff=1)
print(f"johansen p=2: eig={list(res.eig)!r}")
print(f"johansen p=2: trace={list(res.lr1)!r}")

# coint_johansen with k_ar_diff=0 regresses dY_t on Y_t rather than Y_{t-1},
# so the lag-1 reference is computed directly from the textbook moments.
r0 = np.diff(y, axis=0)
r1 = y[:-1]
r0 = r0 - r0.mean(axis=0)
r1 = r1 - r1.mean(axis=0)
n = r0.shape[0]
s00, s11, s01 = r0.T @ r0 / n, r1.T @ r1 / n, r0.T @ r1 / n
eig = np.sort(np.linalg.eigvals(np.linalg.solve(s11, s01.T @ np.linalg.solve(s00, s01))).real)[::-1]
trace = [-n * np.log(1 - eig[i:]).sum() for i in range(len(eig))]
print(f"johansen p=1: eig={list(eig)!r}")
print(f"johansen p=1: trace={trace!r}")

vecm = VECM(y, k_ar_diff=1, coint_rank=1, deterministic="co").fit()
print("vecm alpha=", list(vecm.alpha.ravel()))
print("vecm beta=", list(vecm.beta.ravel()))
print("vecm gamma=", list(vecm.gamma.ravel()))
print("vecm const=", list(vecm.det_coef.ravel()))
print("vecm fc=", list(vecm.predict(steps=3).ravel()))

# Stationary VAR(2) fit.
z = np.zeros((T, 2))
a1 = np.array([[0.5, 0.1], [0.2, 0.3]])
a2 = np.array([[-0.2, 0.0], [0.1, 0.1]])
for t in range(2, T):
    z[t] = 0.3 + a1 @ z[t - 1] + a2 @ z[t - 2] + rng.standard_normal(2) * 0.5
save("var2.csv", z)
fit = VAR(z).fit(2, trend="c")
print("var params=", list(fit.params.ravel()))
print("var sigma=", list(fit.sigma_u.ravel()))
print("var fc=", list(fit.forecast(z[-2:], 3).ravel()))
