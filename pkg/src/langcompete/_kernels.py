"""Compiled inner loops for the competition ODE.

Everything numerical lives here exactly once: the transition-rate /
derivative arithmetic and the fixed-step RK4 drivers built on it. The
public modules wrap these kernels; keeping a single implementation
guarantees that a sweep point recomputed in isolation is bit-for-bit
identical to its in-sweep value, whatever the caller's worker count.

Status codes returned by the drivers:
    0  ok
    1  renormalization correction exceeded the per-step drift budget
    2  non-finite state encountered
"""

import numpy as np
from numba import njit

# Per-step renormalization drift budget (fraction of total population).
DRIFT_BUDGET = 1e-9


@njit(cache=True, nogil=True)
def derivative_into(s, beta, ma, x, out):
    """Right-hand side of the competition ODE, written into ``out``.

    dx_i/dt = a_i * B - b_i * A with a_i = s_i * x_i^beta (attraction of
    language i) and b_i = x_i * (1 - x_i)^ma (leakiness of language i),
    A = sum a, B = sum b.  Bases of the fractional powers are clamped to
    [0, 1] so that roundoff excursions never raise domain errors; exact
    zero exponents follow the 0**0 == 1 convention of C pow().
    """
    n = x.shape[0]
    A = 0.0
    B = 0.0
    for i in range(n):
        cx = x[i]
        if cx < 0.0:
            cx = 0.0
        elif cx > 1.0:
            cx = 1.0
        a = s[i] * cx ** beta
        b = x[i] * (1.0 - cx) ** ma
        out[i] = a
        A += a
        B += b
    for i in range(n):
        cx = x[i]
        if cx < 0.0:
            cx = 0.0
        elif cx > 1.0:
            cx = 1.0
        b = x[i] * (1.0 - cx) ** ma
        out[i] = out[i] * B - b * A


@njit(cache=True, nogil=True)
def _rk4_step(s, beta, ma, x, h, k1, k2, k3, k4, xt):
    """One classic RK4 step followed by clamping and renormalization.

    Returns the renormalization correction |sum - 1| measured before the
    state is rescaled back onto the simplex, or -1.0 on non-finite state.
    """
    n = x.shape[0]
    derivative_into(s, beta, ma, x, k1)
    for i in range(n):
        xt[i] = x[i] + 0.5 * h * k1[i]
    derivative_into(s, beta, ma, xt, k2)
    for i in range(n):
        xt[i] = x[i] + 0.5 * h * k2[i]
    derivative_into(s, beta, ma, xt, k3)
    for i in range(n):
        xt[i] = x[i] + h * k3[i]
    derivative_into(s, beta, ma, xt, k4)
    tot = 0.0
    for i in range(n):
        xi = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        if not np.isfinite(xi):
            return -1.0
        if xi < 0.0:
            xi = 0.0
        elif xi > 1.0:
            xi = 1.0
        x[i] = xi
        tot += xi
    for i in range(n):
        x[i] /= tot
    return abs(tot - 1.0)


@njit(cache=True, nogil=True)
def integrate_record(s, beta, ma, x, h, n_steps, record_every, rec):
    """Advance ``x`` in place n_steps, recording every record_every steps.

    ``rec`` must have room for n_steps // record_every + 1 rows; the row
    for step 0 is NOT written (callers record x0 themselves).  Returns
    (n_recorded, steps_done, status).
    """
    n = x.shape[0]
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    xt = np.empty(n)
    nrec = 0
    for step in range(1, n_steps + 1):
        drift = _rk4_step(s, beta, ma, x, h, k1, k2, k3, k4, xt)
        if drift < 0.0:
            return nrec, step, 2
        if drift > DRIFT_BUDGET:
            return nrec, step, 1
        if step % record_every == 0:
            rec[nrec] = x
            nrec += 1
    return nrec, n_steps, 0


@njit(cache=True, nogil=True)
def run_to_steady(s, beta, ma, x0, h, max_steps, dtol):
    """Integrate until ||dx/dt||_inf < dtol or max_steps is exhausted.

    Returns (x_final, steps_taken, converged, status).  The convergence
    check reuses the RK4 k1 stage, so the final state satisfies the
    derivative tolerance exactly as reported.
    """
    n = x0.shape[0]
    x = x0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    xt = np.empty(n)
    steps = 0
    while steps < max_steps:
        derivative_into(s, beta, ma, x, k1)
        nrm = 0.0
        for i in range(n):
            a = abs(k1[i])
            if a > nrm:
                nrm = a
        if nrm < dtol:
            return x, steps, True, 0
        for i in range(n):
            xt[i] = x[i] + 0.5 * h * k1[i]
        derivative_into(s, beta, ma, xt, k2)
        for i in range(n):
            xt[i] = x[i] + 0.5 * h * k2[i]
        derivative_into(s, beta, ma, xt, k3)
        for i in range(n):
            xt[i] = x[i] + h * k3[i]
        derivative_into(s, beta, ma, xt, k4)
        tot = 0.0
        bad = False
        for i in range(n):
            xi = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            if not np.isfinite(xi):
                bad = True
                break
            if xi < 0.0:
                xi = 0.0
            elif xi > 1.0:
                xi = 1.0
            x[i] = xi
            tot += xi
        if bad:
            return x, steps + 1, False, 2
        if abs(tot - 1.0) > DRIFT_BUDGET:
            return x, steps + 1, False, 1
        for i in range(n):
            x[i] /= tot
        steps += 1
    derivative_into(s, beta, ma, x, k1)
    nrm = 0.0
    for i in range(n):
        a = abs(k1[i])
        if a > nrm:
            nrm = a
    return x, steps, nrm < dtol, 0


@njit(cache=True, nogil=True)
def run_to_steady_banded(s, beta, ma, x0, h, max_steps, dtol, record_every,
                         rec, rect):
    """run_to_steady that also records the trajectory for band analysis.

    Records (time, state) every record_every steps plus the initial and
    final states.  ``rec``/``rect`` must hold max_steps // record_every + 2
    rows.  Returns (n_recorded, steps_taken, converged, status).  The
    stepping arithmetic is identical to run_to_steady, so final states
    agree bitwise between the two drivers.
    """
    n = x0.shape[0]
    x = x0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    xt = np.empty(n)
    rec[0] = x
    rect[0] = 0.0
    nrec = 1
    steps = 0
    converged = False
    status = 0
    while steps < max_steps:
        derivative_into(s, beta, ma, x, k1)
        nrm = 0.0
        for i in range(n):
            a = abs(k1[i])
            if a > nrm:
                nrm = a
        if nrm < dtol:
            converged = True
            break
        for i in range(n):
            xt[i] = x[i] + 0.5 * h * k1[i]
        derivative_into(s, beta, ma, xt, k2)
        for i in range(n):
            xt[i] = x[i] + 0.5 * h * k2[i]
        derivative_into(s, beta, ma, xt, k3)
        for i in range(n):
            xt[i] = x[i] + h * k3[i]
        derivative_into(s, beta, ma, xt, k4)
        tot = 0.0
        bad = False
        for i in range(n):
            xi = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            if not np.isfinite(xi):
                bad = True
                break
            if xi < 0.0:
                xi = 0.0
            elif xi > 1.0:
                xi = 1.0
            x[i] = xi
            tot += xi
        if bad:
            return nrec, steps + 1, False, 2
        if abs(tot - 1.0) > DRIFT_BUDGET:
            return nrec, steps + 1, False, 1
        for i in range(n):
            x[i] /= tot
        steps += 1
        if steps % record_every == 0:
            rec[nrec] = x
            rect[nrec] = steps * h
            nrec += 1
    if not converged:
        derivative_into(s, beta, ma, x, k1)
        nrm = 0.0
        for i in range(n):
            a = abs(k1[i])
            if a > nrm:
                nrm = a
        converged = nrm < dtol
    t_final = steps * h
    if rect[nrec - 1] < t_final or nrec == 1 and steps > 0:
        rec[nrec] = x
        rect[nrec] = t_final
        nrec += 1
    return nrec, steps, converged, status


@njit(cache=True, nogil=True)
def sample_at_steps(s, beta, ma, x0, h, sample_steps, out):
    """Integrate and copy the state at the given step indices into ``out``.

    ``sample_steps`` must be strictly increasing, starting at step >= 0.
    Returns status (0 ok, 1 drift, 2 non-finite).
    """
    n = x0.shape[0]
    x = x0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    xt = np.empty(n)
    step = 0
    for j in range(sample_steps.shape[0]):
        target = sample_steps[j]
        while step < target:
            drift = _rk4_step(s, beta, ma, x, h, k1, k2, k3, k4, xt)
            if drift < 0.0:
                return 2
            if drift > DRIFT_BUDGET:
                return 1
            step += 1
        out[j] = x
    return 0


@njit(cache=True, nogil=True)
def objective_over_simplex(sgrid, beta, ma, h, sample_steps, observed, ds):
    """Fitting error D for every utility vector in ``sgrid``.

    For each candidate utilities row, integrates from observed[0] and
    accumulates the per-snapshot Euclidean residual norm against
    ``observed``.  Results land in ``ds``; status returned as in
    sample_at_steps (first failing candidate aborts with its status).
    """
    m = observed.shape[0]
    n = observed.shape[1]
    pred = np.empty((m, n))
    x0 = observed[0].copy()
    for k in range(sgrid.shape[0]):
        status = sample_at_steps(sgrid[k], beta, ma, x0, h, sample_steps, pred)
        if status != 0:
            return status
        d = 0.0
        for j in range(m):
            acc = 0.0
            for i in range(n):
                r = pred[j, i] - observed[j, i]
                acc += r * r
            d += np.sqrt(acc)
        ds[k] = d
    return 0
