# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Euler-Maruyama replication kernel.

One call advances all N agents and the price through every step of the
grid, accumulating per-agent trapezoid costs. Semantics must match
_euler_np.run_replication exactly up to floating summation order.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def run_replication(
    double[::1] x0,
    double[::1] sigma,
    double[:, ::1] dW,
    double[::1] slope,
    double[::1] intercept,
    double alpha,
    double beta,
    double eta,
    double kappa,
    double gamma,
    double zeta,
    double c,
    double p0,
    double h,
    dev_profile=None,
    Py_ssize_t dev_agent=0,
    Py_ssize_t n_save_v=0,
):
    """Simulate one replication; see _euler_np.run_replication for the contract."""
    cdef Py_ssize_t n_steps = dW.shape[0]
    cdef Py_ssize_t N = x0.shape[0]
    if dW.shape[1] != N:
        raise ValueError("dW must have shape (n_steps, N)")
    if slope.shape[0] != n_steps + 1 or intercept.shape[0] != n_steps + 1:
        raise ValueError("slope/intercept must have length n_steps + 1")

    P_path_arr = np.empty(n_steps + 1)
    Q_path_arr = np.empty(n_steps + 1)
    Xbar_arr = np.empty(n_steps + 1)
    Xsq_arr = np.empty(n_steps + 1)
    cost_arr = np.zeros(N)
    V_save_arr = np.empty((n_steps + 1, n_save_v))
    X_arr = np.array(x0, dtype=np.float64, copy=True)
    gprev_arr = np.empty(N)

    cdef double[::1] P_path = P_path_arr
    cdef double[::1] Q_path = Q_path_arr
    cdef double[::1] Xbar = Xbar_arr
    cdef double[::1] Xsq = Xsq_arr
    cdef double[::1] cost = cost_arr
    cdef double[:, ::1] V_save = V_save_arr
    cdef double[::1] X = X_arr
    cdef double[::1] gprev = gprev_arr

    cdef bint has_dev = dev_profile is not None
    cdef double[::1] dev
    if has_dev:
        dev = np.ascontiguousarray(dev_profile, dtype=np.float64)
        if dev.shape[0] != n_steps + 1:
            raise ValueError("dev_profile must have length n_steps + 1")
    if has_dev and not (0 <= dev_agent < N):
        raise ValueError("dev_agent out of range")

    cdef Py_ssize_t k, i
    cdef double P = p0
    cdef double sv, sx, sxx, xi, vi, g, sk, ik

    for k in range(n_steps + 1):
        sv = 0.0
        sx = 0.0
        sxx = 0.0
        sk = slope[k]
        ik = intercept[k]
        for i in range(N):
            xi = X[i]
            vi = sk * xi + ik
            if has_dev and i == dev_agent:
                vi = vi + dev[k]
            sv += vi
            sx += xi
            sxx += xi * xi
            if i < n_save_v:
                V_save[k, i] = vi
            g = 0.5 * eta * (xi - kappa) * (xi - kappa) + 0.5 * c * vi * vi + P * vi
            if k > 0:
                cost[i] += 0.5 * h * (gprev[i] + g)
            gprev[i] = g
            if k < n_steps:
                X[i] = xi + vi * h + sigma[i] * dW[k, i]
        P_path[k] = P
        Q_path[k] = sv / N
        Xbar[k] = sx / N
        Xsq[k] = sxx / N
        if k < n_steps:
            P = P + alpha * (beta - Q_path[k] - P) * h

    for i in range(N):
        cost[i] += 0.5 * gamma * (X[i] - zeta) * (X[i] - zeta)

    if not (np.all(np.isfinite(P_path_arr)) and np.all(np.isfinite(cost_arr))):
        raise ValueError("non-finite state in simulation (bad parameters or step size)")
    return P_path_arr, Q_path_arr, Xbar_arr, Xsq_arr, cost_arr, V_save_arr
