"""Independent reference values frozen into the C++ tests.

Uses numpy/scipy only (no code shared with the library). Run:
    python3 tools/oracles/derive.py
"""
import math

import numpy as np
from scipy.optimize import minimize


def project_polyhedral(y, A):
    # min |p - y|^2 s.t. A p <= 0, via SLSQP with tight tolerance
    cons = [{"type": "ineq", "fun": lambda p, a=a: -a @ p, "jac": lambda p, a=a: -a} for a in A]
    res = minimize(lambda p: 0.5 * np.sum((p - y) ** 2), np.zeros_like(y), jac=lambda p: p - y,
                   constraints=cons, method="SLSQP", options={"ftol": 1e-15, "maxiter": 500})
    return res.x


def dense_excess_ball_orthant(y, r, n=200000, seed=1):
    # sup over sampled points of B(y, r) of dist(., R^m_+)
    rng = np.random.default_rng(seed)
    d = rng.normal(size=(n, len(y)))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    pts = y + r * d
    return np.max(np.linalg.norm(np.minimum(pts, 0.0), axis=1))


def main():
    print("projection y=(1,1), A=[1 1]:", project_polyhedral(np.array([1.0, 1.0]), np.array([[1.0, 1.0]])))
    A = np.array([[1.0, -2.0], [-1.0, 0.0]])
    for y in ([2.0, 0.5], [-1.0, 3.0], [0.5, -2.0]):
        print("projection", y, "A=[[1,-2],[-1,0]]:", repr(project_polyhedral(np.array(y), A)))
    A3 = np.array([[1.0, 1.0, 1.0], [-1.0, 0.0, 0.0], [0.0, -1.0, 0.0]])
    y3 = np.array([1.0, -0.5, 2.0])
    print("projection", y3, "A3:", repr(project_polyhedral(y3, A3)))

    print("sigma_min [[1,0,0],[0,1,0]]:", np.linalg.svd(np.array([[1.0, 0, 0], [0, 1.0, 0]]), compute_uv=False).min())
    print("sigma_min [[2,1],[0,3]]:", repr(np.linalg.svd(np.array([[2.0, 1.0], [0.0, 3.0]]), compute_uv=False).min()))
    J = np.array([[3.0, 0.1], [0.0, 3.0]])
    print("sigma_min J local example:", repr(np.linalg.svd(J, compute_uv=False).min()))

    L = 3 * np.eye(2)
    u = np.linalg.lstsq(L, math.sqrt(2) * np.ones(2), rcond=None)[0]
    print("witness 3I2 x=0 r=1:", repr(u), "norm", repr(np.linalg.norm(u)))
    L2 = np.array([[4.0, 1.0, 0.0], [0.0, 3.0, 2.0]])
    d = np.linalg.pinv(L2) @ (0.5 * math.sqrt(2) * np.ones(2))
    print("least-norm step [[4,1,0],[0,3,2]] r=0.5:", repr(d), "sigma_min", repr(np.linalg.svd(L2, compute_uv=False).min()))

    a = math.sqrt(2)
    phi0 = 3 * math.sqrt(2)
    print("iterations bound:", math.ceil(math.log(phi0 / 1e-8) / math.log(1 / (2 - a))))
    print("distance bound 3sqrt2/(sqrt2-1):", repr(phi0 / (a - 1)))
    print("threshold 3/(sqrt2-1):", repr(3 / (a - 1)))
    print("contraction target (2-sqrt2)*3sqrt2:", repr((2 - a) * phi0))

    y = np.array([-1.0, 0.5, -2.0])
    r = 0.75
    print("dense exc(B(y,r),R3+) y=(-1,.5,-2) r=.75:", repr(dense_excess_ball_orthant(y, r)),
          "closed", repr(np.linalg.norm(np.minimum(y, 0)) + r))

    # ideal residual f = id, R = {(0,0),(1,2),(2,1)}, x = (1,2)
    R = np.array([[0.0, 0.0], [1.0, 2.0], [2.0, 1.0]])
    x = np.array([1.0, 2.0])
    print("ideal residual (1,2):", max(np.linalg.norm(np.minimum(z - x, 0)) for z in R))

    print("lipschitz grad norm 3x1-x2:", repr(math.sqrt(10)))

    # Hausdorff-style excess of finite clouds
    S1 = np.array([[0.0, 0.0], [3.0, 4.0], [1.0, -1.0]])
    S2 = np.array([[0.0, 1.0], [2.0, 2.0]])
    exc = max(min(np.linalg.norm(s - t) for t in S2) for s in S1)
    print("exc(S1,S2) clouds:", repr(exc))


if __name__ == "__main__":
    main()
