"""Compiled path-following loop for problems made of linear and quadratic rows.

Same algorithm, stopping rules and line search as :mod:`inbox.barrier`, but
flattened into one numba function so that the thousands of tiny solves in a
direction sweep do not pay Python overhead per Newton step.  Releases the
GIL, so sweeps can use threads.
"""
import math

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None

CONVERGED, STEP_BUDGET, STALL, CONDITIONING, UNBOUNDED = 0, 1, 2, 3, 4
OBJ_LOGSUM, OBJ_LINEAR = 0, 1

_MIN_STEP = 1e-16
_DIVERGENCE = 1e9
_ULP = float(np.finfo(np.float64).eps)


def _path_follow(obj_kind, R, c, A, b, Q, q, r, S, x0, tau0, mu, eps, alpha, beta, kappa, max_newton, pivot_tol, stall_kappa):
    n = x0.shape[0]
    mL = A.shape[0]
    mQ = Q.shape[0]
    m = mL + mQ
    x = x0.copy()
    tau = tau0
    steps = 0
    outer = 0
    gap = np.inf

    gL = np.empty(mL)
    gQ = np.empty(mQ)
    JQ = np.empty((mQ, n))
    gLn = np.empty(mL)
    gQn = np.empty(mQ)
    JQn = np.empty((mQ, n))
    nR = R.shape[0]
    nM = nR + mL + mQ * (n + 1)
    M = np.empty((nM, n))
    rv = np.empty(nM)
    hdiag = np.empty(n)
    zt = np.empty(n)
    step = np.empty(n)
    y = np.empty(n)
    xn = np.empty(n)
    slopeL = np.empty(mL)
    slopeQ = np.empty(mQ)
    curvQ = np.empty(mQ)
    wR = np.empty(nR)
    dwR = np.empty(nR)

    # constraint values at the start
    for i in range(mL):
        acc = -b[i]
        for j in range(n):
            acc += A[i, j] * x[j]
        gL[i] = acc
    for k in range(mQ):
        acc = r[k]
        for j in range(n):
            Qx = 0.0
            for l in range(n):
                Qx += Q[k, j, l] * x[l]
            JQ[k, j] = 2.0 * Qx + q[k, j]
            acc += (Qx + q[k, j]) * x[j]
        gQ[k] = acc

    while True:
        # ---- centering at tau
        while True:
            # square-root factor M of the Hessian (H = M'M) and right-hand
            # side r with M'r the barrier part of the gradient
            row = 0
            if obj_kind == OBJ_LOGSUM:
                st = math.sqrt(tau)
                for i in range(nR):
                    w = 0.0
                    for j in range(n):
                        w += R[i, j] * x[j]
                    for j in range(n):
                        M[row, j] = st * R[i, j] / w
                    rv[row] = -st
                    row += 1
            for i in range(mL):
                inv = -1.0 / gL[i]
                for j in range(n):
                    M[row, j] = A[i, j] * inv
                rv[row] = 1.0
                row += 1
            for k in range(mQ):
                inv = -1.0 / gQ[k]
                for j in range(n):
                    M[row, j] = JQ[k, j] * inv
                rv[row] = 1.0
                row += 1
                sc = math.sqrt(2.0 * inv)
                for i in range(n):
                    for j in range(n):
                        M[row, j] = sc * S[k, i, j]
                    rv[row] = 0.0
                    row += 1

            # Householder QR of M, applied to r as well
            for j in range(n):
                colsq = 0.0
                for i in range(row):
                    colsq += M[i, j] * M[i, j]
                hdiag[j] = colsq
            for j in range(n):
                nrm = 0.0
                for i in range(j, row):
                    nrm += M[i, j] * M[i, j]
                nrm = math.sqrt(nrm)
                if nrm == 0.0:
                    return x, steps, outer, tau, gap, CONDITIONING
                alpha_h = -nrm if M[j, j] >= 0.0 else nrm
                v0 = M[j, j] - alpha_h
                vnorm2 = v0 * v0
                for i in range(j + 1, row):
                    vnorm2 += M[i, j] * M[i, j]
                if vnorm2 > 0.0:
                    # columns right of j
                    for l in range(j + 1, n):
                        dot = v0 * M[j, l]
                        for i in range(j + 1, row):
                            dot += M[i, j] * M[i, l]
                        f = 2.0 * dot / vnorm2
                        M[j, l] -= f * v0
                        for i in range(j + 1, row):
                            M[i, l] -= f * M[i, j]
                    dot = v0 * rv[j]
                    for i in range(j + 1, row):
                        dot += M[i, j] * rv[i]
                    f = 2.0 * dot / vnorm2
                    rv[j] -= f * v0
                    for i in range(j + 1, row):
                        rv[i] -= f * M[i, j]
                M[j, j] = alpha_h
                if not (abs(alpha_h) > pivot_tol * math.sqrt(hdiag[j])) or not math.isfinite(alpha_h):
                    return x, steps, outer, tau, gap, CONDITIONING
            # z = Q'r (+ R^-T times the linear-objective gradient)
            for j in range(n):
                y[j] = rv[j]
            if obj_kind == OBJ_LINEAR:
                for j in range(n):
                    acc = -tau * c[j]
                    for l in range(j):
                        acc -= M[l, j] * zt[l]
                    zt[j] = acc / M[j, j]
                for j in range(n):
                    y[j] += zt[j]
            for j in range(n - 1, -1, -1):
                acc = y[j]
                for l in range(j + 1, n):
                    acc -= M[j, l] * step[l]
                step[j] = acc / M[j, j]
            lam2 = 0.0
            for j in range(n):
                step[j] = -step[j]
                lam2 += y[j] * y[j]
            if lam2 / 2.0 <= kappa:
                break
            # rounding floor of the decrement, as in barrier.noise_floor
            floor = 0.0
            for i in range(mL):
                sc = abs(b[i])
                for j in range(n):
                    sc += abs(A[i, j]) * abs(x[j])
                floor += (_ULP * sc / gL[i]) ** 2
            for k in range(mQ):
                sc = abs(r[k])
                for j in range(n):
                    Qx = 0.0
                    for l in range(n):
                        Qx += abs(Q[k, j, l]) * abs(x[l])
                    sc += (Qx + abs(q[k, j])) * abs(x[j])
                floor += (_ULP * sc / gQ[k]) ** 2
            if lam2 <= floor:
                break
            if steps >= max_newton:
                return x, steps, outer, tau, gap, STEP_BUDGET

            # ---- line search
            s_max = np.inf
            if obj_kind == OBJ_LOGSUM:
                for i in range(nR):
                    w = 0.0
                    dw = 0.0
                    for j in range(n):
                        w += R[i, j] * x[j]
                        dw += R[i, j] * step[j]
                    wR[i] = w
                    dwR[i] = dw
                    if dw < 0.0 and w / -dw < s_max:
                        s_max = w / -dw
            for i in range(mL):
                sl = 0.0
                for j in range(n):
                    sl += A[i, j] * step[j]
                slopeL[i] = sl
                if sl > 0.0 and -gL[i] / sl < s_max:
                    s_max = -gL[i] / sl
            for k in range(mQ):
                sl = 0.0
                cv = 0.0
                for j in range(n):
                    sl += JQ[k, j] * step[j]
                    Qd = 0.0
                    for l in range(n):
                        Qd += Q[k, j, l] * step[l]
                    cv += Qd * step[j]
                slopeQ[k] = sl
                curvQ[k] = cv
                disc = sl * sl - 4.0 * cv * gQ[k]
                if disc < 0.0:
                    disc = 0.0
                den = sl + math.sqrt(disc)
                if den > 0.0:
                    root = -2.0 * gQ[k] / den
                    if root < s_max:
                        s_max = root

            s = 1.0
            while s >= s_max and s >= _MIN_STEP:
                s *= beta
            accepted = False
            while s >= _MIN_STEP:
                dF = 0.0
                if obj_kind == OBJ_LOGSUM:
                    for i in range(nR):
                        dF -= tau * math.log1p(s * dwR[i] / wR[i])
                else:
                    cd = 0.0
                    for j in range(n):
                        cd += c[j] * step[j]
                    dF -= tau * s * cd
                ok = True
                for i in range(mL):
                    ratio = s * slopeL[i] / gL[i]
                    if ratio <= -1.0:
                        ok = False
                        break
                    dF -= math.log1p(ratio)
                if ok:
                    for k in range(mQ):
                        ratio = (s * slopeQ[k] + s * s * curvQ[k]) / gQ[k]
                        if ratio <= -1.0:
                            ok = False
                            break
                        dF -= math.log1p(ratio)
                if ok and dF <= -alpha * s * lam2:
                    for j in range(n):
                        xn[j] = x[j] + s * step[j]
                    # direct evaluation at the candidate
                    feas = True
                    if obj_kind == OBJ_LOGSUM:
                        for i in range(nR):
                            w = 0.0
                            for j in range(n):
                                w += R[i, j] * xn[j]
                            if not w > 0.0:
                                feas = False
                    for i in range(mL):
                        acc = -b[i]
                        for j in range(n):
                            acc += A[i, j] * xn[j]
                        gLn[i] = acc
                        if not acc < 0.0:
                            feas = False
                    for k in range(mQ):
                        acc = r[k]
                        for j in range(n):
                            Qx = 0.0
                            for l in range(n):
                                Qx += Q[k, j, l] * xn[l]
                            JQn[k, j] = 2.0 * Qx + q[k, j]
                            acc += (Qx + q[k, j]) * xn[j]
                        gQn[k] = acc
                        if not acc < 0.0:
                            feas = False
                    if feas:
                        gL[:] = gLn
                        gQ[:] = gQn
                        JQ[:, :] = JQn
                        x[:] = xn
                        accepted = True
                        break
                s *= beta
            steps += 1
            if not accepted:
                if lam2 / 2.0 <= stall_kappa:
                    break
                return x, steps, outer, tau, gap, STALL
            for j in range(n):
                if not abs(x[j]) < _DIVERGENCE:
                    return x, steps, outer, tau, gap, UNBOUNDED
        outer += 1
        gap = m / tau
        if gap < eps:
            return x, steps, outer, tau, gap, CONVERGED
        # never beyond the smallest tau that meets the gap target
        tau_cap = (m / eps) * (1.0 + 1e-9)
        if tau_cap < tau:
            tau_cap = tau
        tau = min(tau * mu, tau_cap)


if njit is not None:
    path_follow_kernel = njit(cache=True, nogil=True)(_path_follow)
else:  # pragma: no cover
    path_follow_kernel = None
