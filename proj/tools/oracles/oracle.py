#!/usr/bin/env python3
"""Independent reference values for the C++ tests (run once, results frozen).

Nothing here shares code with the library: roots come from mpmath, gradients
from numerical differentiation, second moments from direct summation of the
q-kernel at large scale, and psi from adaptive quadrature along the explicit
symmetric trajectory.  Exact counts are brute force over itertools.

    python3 tools/oracles/oracle.py > oracle_values.json
"""
import itertools
import json
import math

import mpmath as mp
import numpy as np
from scipy import integrate
from scipy.special import gammaln

mp.mp.dps = 40


def theta(c):
    c = mp.mpf(c)
    # h(t) = 1 - t - e^-ct is positive on (0, theta) and negative after.
    return mp.findroot(lambda t: 1 - t - mp.exp(-c * t), ((c - 1) / (10 * c), mp.mpf(1)), solver="illinois")


def ell(z):
    return z * mp.exp(z) / mp.expm1(z)


def z_root(eta):
    eta = mp.mpf(eta)
    return mp.findroot(lambda z: ell(z) - eta, (max(eta - 1, mp.mpf("1e-30")), eta), solver="anderson")


def f_mean(w):
    a, bi, bo, g = w
    i1 = g * (a - bi - bo) / ((a - bi) * (a - bo))
    i2 = z_root(g / (a - bi)) * z_root(g / (a - bo)) / g
    zs = z_root(i1)
    f2 = zs * zs / i2
    return f2 / i1, f2


def grad_f(w):
    w = [mp.mpf(x) for x in w]
    out = [[0] * 4, [0] * 4]
    for k in range(4):
        for j in range(2):
            def fk(x, j=j, k=k):
                v = list(w)
                v[k] = x
                return f_mean(v)[j]
            out[j][k] = mp.diff(fk, w[k])
    return out


def symmetric_w(c, z):
    c, z = mp.mpf(c), mp.mpf(z)
    g = z * z / c
    d = z * (1 - mp.exp(-z)) / c
    beta = d - c * d * d / g
    return [d + beta, beta, beta, g]


def truncated_poisson_var(z):
    z = mp.mpf(z)
    m = z / (1 - mp.exp(-z))
    return m * (1 + z - m)


def r_matrix(c, cross_scale=1):
    c = mp.mpf(c)
    q = 1 - mp.exp(-c)
    a = 1 - mp.exp(-2 * c)
    b = mp.exp(-c) * q
    kap = c * c / (cross_scale * q ** 3 * truncated_poisson_var(c))
    vs = [([1, -1, 0], kap), ([1, 0, -1], kap), ([1, 0, 0], 1 / (1 - a)),
          ([1, -1, -1], 1 / (a - 2 * b)), ([0, 1, 0], 1 / b), ([0, 0, 1], 1 / b)]
    R = mp.zeros(3, 3)
    for v, s in vs:
        for i in range(3):
            for j in range(3):
                R[i, j] += s * v[i] * v[j]
    return R


def q_second_moments(w, n=1e9):
    """E[x x^T] for x = (a, b, r_i, r_o, k) by summing the q-kernel at s = n w."""
    nu, ni, no, mu = [float(x) * n for x in w]
    zi = float(z_root(mp.mpf(mu) / (nu - ni)))
    zo = float(z_root(mp.mpf(mu) / (nu - no)))
    lam = zi * zo / mu
    R = nu - ni - no
    M = np.zeros((5, 5))
    kmax = 90
    for flav in (0, 1):
        mine, other = (ni, no) if flav == 0 else (no, ni)
        zm, zt = (zi, zo) if flav == 0 else (zo, zi)
        pref = math.log(mine / (ni + no)) - math.log(math.expm1(zt))
        lx = math.log(lam / math.expm1(zm))
        ly = math.log(R * lam / math.expm1(zm))
        lw = math.log((nu - mine) * lam)
        x = np.arange(0, 40)[:, None, None]
        r = np.arange(0, 60)[None, :, None]
        k = np.arange(0, kmax + 1)[None, None, :]
        free = k - x - r
        ok = (free >= 0) & (k >= 1)
        lb = gammaln(other + 1) - gammaln(x + 1) - gammaln(other - x + 1)
        lp = pref + lb + x * lx + r * ly - gammaln(r + 1) + free * lw - gammaln(np.maximum(free, 0) + 1)
        p = np.where(ok, np.exp(np.where(ok, lp, -np.inf)), 0.0)
        one = np.ones_like(p)
        if flav == 0:
            comps = [one, x * one, r * one, 0 * one, k * one]
        else:
            comps = [x * one, one, 0 * one, r * one, k * one]
        for i in range(5):
            for j in range(5):
                M[i, j] += float(np.sum(p * comps[i] * comps[j]))
    return M


def psi_integrand(w):
    G = grad_f(w)
    M = q_second_moments(w)
    U = np.zeros((5, 2))
    for j in range(2):
        ga, gi, go, gg = [float(x) for x in G[j]]
        U[:, j] = [-ga - gi, -ga - go, gi, go, -gg]
    return U.T @ M @ U


def psi_symmetric(c):
    th = float(theta(c))
    out = np.zeros((2, 2))
    for (j, k) in ((0, 0), (0, 1), (1, 1)):
        def f(z):
            w = symmetric_w(c, z)
            jac = 2 * (w[0] - w[1]) / mp.mpf(z)  # (b_i + b_o)(a - b_o)/(b_i z_i) on the symmetric line
            return float(psi_integrand(w)[j, k] * jac)
        val, err = integrate.quad(f, c * th, c, epsabs=1e-11, epsrel=1e-10, limit=200)
        out[j, k] = out[k, j] = val
    return out


def exact_g(s):
    nu, ni, no, mu = s
    zin = set(range(ni))
    zout = set(range(ni, ni + no))
    cand = [(u, v) for u in range(nu) for v in range(nu) if u != v and u not in zout and v not in zin]
    cnt = 0
    for arcs in itertools.combinations(cand, mu):
        indeg = [0] * nu
        outdeg = [0] * nu
        for u, v in arcs:
            outdeg[u] += 1
            indeg[v] += 1
        if all((indeg[v] == 0) == (v in zin) and (outdeg[v] == 0) == (v in zout) for v in range(nu)):
            cnt += 1
    return cnt


def main():
    res = {}
    res["theta"] = {str(c): float(theta(c)) for c in (1.01, 1.2, 1.5, 2, 3, 5)}
    res["z_root_2"] = float(z_root(2))
    res["theta_prime_fd"] = {str(c): float(mp.diff(theta, mp.mpf(c))) for c in (1.2, 2, 3)}
    res["K_inverse_R"] = {str(c): [[float(x) for x in row] for row in (r_matrix(c) ** -1).tolist()] for c in (1.5, 2, 3)}
    res["K_inverse_R_cross2"] = {str(c): [[float(x) for x in row] for row in (r_matrix(c, 2) ** -1).tolist()] for c in (2,)}
    c = 2
    psi = psi_symmetric(c)
    res["psi_2"] = psi.tolist()
    w0 = symmetric_w(c, c)
    G = grad_f(w0)
    J = np.array([[float(G[j][k]) for k in range(3)] for j in range(2)])
    K = np.array([[float(x) for x in row] for row in (r_matrix(c) ** -1).tolist()])
    B = psi + J @ K @ J.T
    res["grad_f_2"] = [[float(x) for x in row] for row in G]
    res["B_2"] = B.tolist()
    th = theta(c)
    dth = mp.diff(theta, mp.mpf(c))
    mup = np.array([float(2 * th * dth), float(th * th + 2 * c * th * dth)])
    res["B_np_2"] = (B + c * np.outer(mup, mup)).tolist()
    res["exact_g"] = {",".join(map(str, s)): exact_g(s) for s in
                      [(2, 1, 1, 1), (3, 1, 1, 2), (3, 1, 0, 2), (4, 1, 1, 4), (4, 2, 1, 3), (4, 1, 0, 5), (5, 1, 1, 6), (5, 2, 1, 5)]}
    print(json.dumps(res, indent=2))


if __name__ == "__main__":
    main()
