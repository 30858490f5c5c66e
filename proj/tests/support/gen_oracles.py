#!/usr/bin/env python3
"""Independent reference values frozen into the C++ tests.

Uses scipy/cvxpy only; nothing here calls the library.
"""
import numpy as np
import cvxpy as cp
from scipy import integrate, stats


def surrogates(K):
    r = np.arange(1, K + 1)
    rs = 2 * (K + 1 - r) / (K * (K + 1))
    z = 1.17
    ref = (K + 1 - r) ** z / np.sum(r ** z)
    rr = (1 / r) / np.sum(1 / r)
    sr_raw = (K + 1 - r) / K + 1 / r
    sr = sr_raw / sr_raw.sum()
    roc = np.array([np.sum(1 / np.arange(k, K + 1)) / K for k in r])
    return dict(RS=rs, REF=ref, RR=rr, SR=sr, ROC=roc)


def kl_discrete(target, K, ratio=(), absdiff=(), lower=()):
    v = np.asarray(target) / np.sum(target)
    u = cp.Variable(K)
    cons = [cp.sum(u) == 1, u >= 0]
    cons += [u[r - 1] >= u[r] for r in range(1, K)]
    cons += [u[r - 1] == a * u[r] for r, a in ratio]
    cons += [u[r - 1] - u[r] == b for r, b in absdiff]
    cons += [u[r - 1] >= g for r, g in lower]
    prob = cp.Problem(cp.Minimize(cp.sum(-cp.entr(u)) - u @ np.log(v)), cons)
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-12, tol_gap_rel=1e-12, tol_feas=1e-12)
    return u.value


def hara_density(alpha, beta, gamma):
    return lambda x: alpha * (beta + alpha / gamma * x) ** (-gamma)


def hara_context(K=7):
    v = hara_density(2.0, 1.0, 1.5)
    total = integrate.quad(v, 0, K, epsabs=1e-14, epsrel=1e-14)[0]
    breaks = [0, 1, 2, 3, 4, 5, 7]
    V = np.array([integrate.quad(v, a, b, epsabs=1e-14, epsrel=1e-14)[0] / total
                  for a, b in zip(breaks[:-1], breaks[1:])])
    m = cp.Variable(len(V))
    F = lambda r: cp.sum(m[: breaks.index(r)])
    cons = [cp.sum(m) == 1, m >= 0, F(1) == 0.32, F(3) == 1.15 * F(2), F(5) - F(4) == 0.065]
    prob = cp.Problem(cp.Minimize(cp.sum(-cp.entr(m)) - m @ np.log(V)), cons)
    prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-13, tol_gap_rel=1e-13, tol_feas=1e-13)
    return V, m.value


def main():
    np.set_printoptions(precision=17)
    for k, vec in surrogates(5).items():
        print(k, repr(vec))
    print("ROC10", surrogates(10)["ROC"][0])
    mixed = kl_discrete(surrogates(7)["ROC"], 7, ratio=[(2, 1.15)], absdiff=[(4, 0.065)],
                      lower=[(r, 0.03) for r in range(1, 8)])
    print("mixed_context", repr(mixed))
    V, m = hara_context()
    print("hara_context target masses", repr(V))
    print("hara_context masses", repr(m))
    for rho, n in [(0.5154, 6), (0.2960, 10), (0.1893, 10)]:
        I = 5
        v1 = n - 1 - 2 / I
        x = rho * (I - 1) / (1 - rho)
        print("lcl", rho, n, stats.f.cdf(x, v1, (I - 1) * v1))
    for x, a, b in [(0.3, 2.5, 4.6), (2.0, 4.6, 18.4), (0.7, 0.5, 0.5), (5.0, 9.0, 36.0)]:
        print("fcdf", x, a, b, repr(stats.f.cdf(x, a, b)))
    sample = [0.4380, 0.2190, 0.1460, 0.1095, 0.0876] * 24
    print("rounded_expert_sample", np.mean(sample), stats.skew(sample, bias=False), stats.kurtosis(sample, bias=False),
          np.std(sample, ddof=1) / np.mean(sample))
    s2 = [0.12, 0.5, 0.33, 0.9, 0.41, 0.05, 0.77]
    print("describe", stats.skew(s2, bias=False), stats.kurtosis(s2, bias=False), np.std(s2, ddof=1) / np.mean(s2))
    print("skew0001", stats.skew([0, 0, 0, 1], bias=False))
    I, J, K = 3, 5, 10
    H = lambda n: sum(1 / h for h in range(1, n + 1))
    print("zstar", repr(1 / (K * H(I) * H(J))))
    hv = hara_density(2.0, 1.0, 1.5)
    print("hara_int_raw", repr(integrate.quad(hv, 0.3, 2.9, epsabs=1e-15, epsrel=1e-15)[0]))


if __name__ == "__main__":
    main()
