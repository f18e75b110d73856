"""Stand-alone re-implementation of the model formulas used by the oracles.

Nothing here calls into the C++ code; scenarios are plain dicts in the same
JSON schema the library loads, so a fixture carries its own model.
"""
import json
import math
import os

import numpy as np

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")

GAUSSIAN = {
    "trait_space": {"min": -1.0, "max": 1.0},
    "phenotype": {"family": "additive"},
    "fertility": {"family": "constant", "value": 2.0},
    "death": {"family": "constant", "value": 1.0},
    "competition": {"family": "gaussian_kernel", "r_bar": 1.0, "sigma_a": 0.6, "sigma_k": 0.8, "phi_0": 0.2},
    "mutation": {"law": "uniform", "sigma": 0.05},
    "mu_K": 0.0,
    "K": 100,
}

DOMINANCE = {
    "trait_space": {"min": 0.0, "max": 1.0},
    "phenotype": {"family": "quadratic_dominance", "d": 0.3},
    "fertility": {"family": "linear", "intercept": 2.0, "slope": 0.5},
    "death": {"family": "gaussian", "base": 0.5, "amplitude": 0.3, "center": 0.4, "width": 0.3},
    "competition": {"family": "gaussian_kernel", "r_bar": 1.0, "sigma_a": 0.5, "sigma_k": 1.0, "phi_0": 0.3},
    "mutation": {"law": "skewed_uniform", "right_mass": 2.0 / 3.0, "sigma": 0.05},
    "mu_K": 0.0,
    "K": 25,
}

DIRECTIONAL = {
    "trait_space": {"min": 0.0, "max": 1.0},
    "phenotype": {"family": "additive"},
    "fertility": {"family": "linear", "intercept": 2.0, "slope": 1.0},
    "death": {"family": "constant", "value": 1.0},
    "competition": {"family": "constant", "value": 1.0},
    "mutation": {"law": "uniform", "sigma": 0.02},
    "mu_K": 0.0,
    "K": 1000,
}


def write(name, payload):
    path = os.path.join(FIXTURES, name)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print("wrote", os.path.relpath(path))


class Model:
    def __init__(self, cfg):
        self.cfg = cfg
        self.lo = cfg["trait_space"]["min"]
        self.hi = cfg["trait_space"]["max"]
        self.sigma = cfg["mutation"]["sigma"]
        law = cfg["mutation"].get("law", "uniform")
        self.right = cfg["mutation"]["right_mass"] if law == "skewed_uniform" else 0.5

    def phi(self, u1, u2):
        p = self.cfg["phenotype"]
        m = 0.5 * (u1 + u2)
        if p["family"] == "additive":
            return m
        if p["family"] == "quadratic_dominance":
            return m + p["d"] * (u1 - u2) ** 2
        if p["family"] == "polynomial":
            return sum(c * m ** k for k, c in enumerate(p["coefficients"]))
        raise ValueError(p)

    def dphi1(self, u1, u2):
        p = self.cfg["phenotype"]
        if p["family"] == "additive":
            return 0.5
        if p["family"] == "quadratic_dominance":
            return 0.5 + 2.0 * p["d"] * (u1 - u2)
        raise ValueError(p)

    @staticmethod
    def _fn(spec, x):
        fam = spec["family"]
        if fam == "constant":
            return spec["value"]
        if fam == "linear":
            return spec["intercept"] + spec["slope"] * x
        if fam == "gaussian":
            return spec.get("base", 0.0) + spec["amplitude"] * math.exp(-((x - spec["center"]) ** 2) / (2 * spec["width"] ** 2))
        raise ValueError(spec)

    def f(self, u1, u2):
        return self._fn(self.cfg["fertility"], self.phi(u1, u2))

    def D(self, u1, u2):
        return self._fn(self.cfg["death"], self.phi(u1, u2))

    def C_phi(self, pf, po):
        c = self.cfg["competition"]
        if c["family"] == "constant":
            return c["value"]
        if c["family"] == "gaussian_kernel":
            return gaussian_kernel(c, pf, po)
        raise ValueError(c)

    def C(self, focal, other):
        return self.C_phi(self.phi(*focal), self.phi(*other))

    def nbar(self, u):
        return (self.f(u, u) - self.D(u, u)) / self.C((u, u), (u, u))

    def S(self, ua, uA):
        return self.f(uA, ua) - self.D(uA, ua) - self.C((uA, ua), (uA, uA)) * self.nbar(uA)

    # unit-scale mutation law on [-1, 1]
    def m_unit(self, t):
        if t < -1 or t > 1:
            return 0.0
        return self.right if t >= 0 else 1.0 - self.right

    def m_unit_cdf(self, t):
        if t <= -1:
            return 0.0
        if t >= 1:
            return 1.0
        left = 1.0 - self.right
        return left * (t + 1) if t < 0 else left + self.right * t

    def step_bounds(self, u):
        return max(-self.sigma, self.lo - u), min(self.sigma, self.hi - u)

    def m_sigma(self, u, h):
        a, b = self.step_bounds(u)
        if h < a or h > b:
            return 0.0
        z = self.m_unit_cdf(b / self.sigma) - self.m_unit_cdf(a / self.sigma)
        return self.m_unit(h / self.sigma) / (self.sigma * z)


def gaussian_kernel(c, pf, po):
    return c["r_bar"] * math.exp(-((pf - po) ** 2) / (2 * c["sigma_a"] ** 2) + (pf - c["phi_0"]) ** 2 / (2 * c["sigma_k"] ** 2))


def dimorphic(model, uA, ua):
    gs = [(uA, uA), (uA, ua), (ua, ua)]
    f = np.array([model.f(*g) for g in gs])
    D = np.array([model.D(*g) for g in gs])
    C = np.array([[model.C(gi, gj) for gj in gs] for gi in gs])
    return f, D, C


def X(state, f, D, C):
    """Three-genotype field written from the count-level birth and death rates."""
    x, y, z = state
    if x + y + z <= 0:
        return np.zeros(3)
    fx, fy, fz = f[0] * x, f[1] * y, f[2] * z
    total_f = fx + fy + fz
    # allele transmission: a birth draws one allele from each parent, A with
    # probability pA = (f_AA x + f_Aa y / 2) / total_f
    pA = (fx + 0.5 * fy) / total_f
    pa = (fz + 0.5 * fy) / total_f
    births = total_f * np.array([pA * pA, 2 * pA * pa, pa * pa])
    deaths = np.array([(D[i] + sum(C[i][j] * s for j, s in enumerate(state))) * state[i] for i in range(3)])
    return births - deaths


def fd_jacobian(fun, x0, h=1e-5):
    x0 = np.asarray(x0, dtype=float)
    n = len(x0)
    J = np.zeros((n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        J[:, k] = (fun(x0 + e) - fun(x0 - e)) / (2 * h)
    return J
