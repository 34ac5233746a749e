# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled manipulator kernels.

Same contract as tmncell.robot._pykernel, with the frame composition,
Jacobian accumulation, Cholesky solve and the Runge-Kutta stepping written
as C loops. A per-call workspace keeps every scratch buffer preallocated,
so integrating holds no allocations beyond the torque-callback arguments.
"""

import numpy as np

from libc.math cimport cos, sin, sqrt, isnan, isfinite

from ..errors import NonFiniteStateError, SingularInertiaError

BACKEND_NAME = "cython"
FD_STEP = 1e-6


cdef class _Workspace:
    """Model arrays plus scratch for one chain, reused across evaluations."""

    cdef int dof
    cdef int[::1] kinds
    cdef double[:, ::1] dh, com
    cdef double[::1] mass, rotor, grav
    cdef double[:, :, ::1] inertia
    cdef double[:, :, ::1] R, dB
    cdef double[:, ::1] p, pc, jp, jo, B, L, Bp, Bm
    cdef double[::1] cvec, gvec, rhs, qwork

    def __cinit__(self, kinds, dh, com, mass=None, inertia=None,
                  rotor=None, gravity=None):
        cdef int dof = len(kinds)
        self.dof = dof
        self.kinds = np.array(kinds, dtype=np.int32)
        self.dh = np.array(dh, dtype=np.float64)
        self.com = np.array(com, dtype=np.float64)
        self.mass = np.array(mass if mass is not None else np.zeros(dof), dtype=np.float64)
        self.inertia = np.array(inertia if inertia is not None else np.zeros((dof, 3, 3)),
                                dtype=np.float64)
        self.rotor = np.array(rotor if rotor is not None else np.zeros(dof), dtype=np.float64)
        self.grav = np.array(gravity if gravity is not None else np.zeros(3), dtype=np.float64)
        self.R = np.empty((dof + 1, 3, 3))
        self.p = np.empty((dof + 1, 3))
        self.pc = np.empty((dof, 3))
        self.jp = np.empty((3, dof))
        self.jo = np.empty((3, dof))
        self.B = np.empty((dof, dof))
        self.L = np.empty((dof, dof))
        self.Bp = np.empty((dof, dof))
        self.Bm = np.empty((dof, dof))
        self.dB = np.empty((dof, dof, dof))
        self.cvec = np.empty(dof)
        self.gvec = np.empty(dof)
        self.rhs = np.empty(dof)
        self.qwork = np.empty(dof)


cdef void _frames(_Workspace ws, const double[::1] q) noexcept:
    cdef double[:, :, ::1] R = ws.R
    cdef double[:, ::1] p = ws.p
    cdef double[:, ::1] pc = ws.pc
    cdef int i, r, c
    cdef double a, alpha, d, theta, ct, st, ca, sa
    cdef double rel[3][3]
    cdef double org[3]
    for r in range(3):
        for c in range(3):
            R[0, r, c] = 1.0 if r == c else 0.0
        p[0, r] = 0.0
    for i in range(ws.dof):
        a = ws.dh[i, 0]
        alpha = ws.dh[i, 1]
        d = ws.dh[i, 2]
        theta = ws.dh[i, 3]
        if ws.kinds[i] == 0:
            theta += q[i]
        else:
            d += q[i]
        ct = cos(theta)
        st = sin(theta)
        ca = cos(alpha)
        sa = sin(alpha)
        rel[0][0] = ct
        rel[0][1] = -st * ca
        rel[0][2] = st * sa
        rel[1][0] = st
        rel[1][1] = ct * ca
        rel[1][2] = -ct * sa
        rel[2][0] = 0.0
        rel[2][1] = sa
        rel[2][2] = ca
        org[0] = a * ct
        org[1] = a * st
        org[2] = d
        for r in range(3):
            for c in range(3):
                R[i + 1, r, c] = (R[i, r, 0] * rel[0][c]
                                  + R[i, r, 1] * rel[1][c]
                                  + R[i, r, 2] * rel[2][c])
            p[i + 1, r] = (p[i, r] + R[i, r, 0] * org[0]
                           + R[i, r, 1] * org[1] + R[i, r, 2] * org[2])
        for r in range(3):
            pc[i, r] = (p[i + 1, r] + R[i + 1, r, 0] * ws.com[i, 0]
                        + R[i + 1, r, 1] * ws.com[i, 1]
                        + R[i + 1, r, 2] * ws.com[i, 2])


cdef void _com_jacobians(_Workspace ws, int link) noexcept:
    # Columns j > link stay zero: those joints do not move this link.
    cdef double[:, ::1] jp = ws.jp
    cdef double[:, ::1] jo = ws.jo
    cdef int j, r
    cdef double zx, zy, zz, dx, dy, dz
    for r in range(3):
        for j in range(ws.dof):
            jp[r, j] = 0.0
            jo[r, j] = 0.0
    for j in range(link + 1):
        zx = ws.R[j, 0, 2]
        zy = ws.R[j, 1, 2]
        zz = ws.R[j, 2, 2]
        if ws.kinds[j] == 0:
            dx = ws.pc[link, 0] - ws.p[j, 0]
            dy = ws.pc[link, 1] - ws.p[j, 1]
            dz = ws.pc[link, 2] - ws.p[j, 2]
            jp[0, j] = zy * dz - zz * dy
            jp[1, j] = zz * dx - zx * dz
            jp[2, j] = zx * dy - zy * dx
            jo[0, j] = zx
            jo[1, j] = zy
            jo[2, j] = zz
        else:
            jp[0, j] = zx
            jp[1, j] = zy
            jp[2, j] = zz


cdef void _inertia(_Workspace ws, const double[::1] q, double[:, ::1] B) noexcept:
    cdef double[:, ::1] jp = ws.jp
    cdef double[:, ::1] jo = ws.jo
    cdef int i, r, c
    cdef double w[3][3]
    cdef double tmp[3][3]
    cdef double m, acc
    _frames(ws, q)
    for r in range(ws.dof):
        for c in range(ws.dof):
            B[r, c] = 0.0
    for i in range(ws.dof):
        _com_jacobians(ws, i)
        # w = R_i I_i R_i^T, the link inertia tensor in base coordinates
        for r in range(3):
            for c in range(3):
                tmp[r][c] = (ws.R[i + 1, r, 0] * ws.inertia[i, 0, c]
                             + ws.R[i + 1, r, 1] * ws.inertia[i, 1, c]
                             + ws.R[i + 1, r, 2] * ws.inertia[i, 2, c])
        for r in range(3):
            for c in range(3):
                w[r][c] = (tmp[r][0] * ws.R[i + 1, c, 0]
                           + tmp[r][1] * ws.R[i + 1, c, 1]
                           + tmp[r][2] * ws.R[i + 1, c, 2])
        m = ws.mass[i]
        for r in range(i + 1):
            for c in range(r, i + 1):
                acc = m * (jp[0, r] * jp[0, c] + jp[1, r] * jp[1, c] + jp[2, r] * jp[2, c])
                acc += (jo[0, r] * (w[0][0] * jo[0, c] + w[0][1] * jo[1, c] + w[0][2] * jo[2, c])
                        + jo[1, r] * (w[1][0] * jo[0, c] + w[1][1] * jo[1, c] + w[1][2] * jo[2, c])
                        + jo[2, r] * (w[2][0] * jo[0, c] + w[2][1] * jo[1, c] + w[2][2] * jo[2, c]))
                B[r, c] += acc
                if r != c:
                    B[c, r] += acc
    for r in range(ws.dof):
        B[r, r] += ws.rotor[r]


cdef void _gravity(_Workspace ws, const double[::1] q) noexcept:
    cdef double[::1] g = ws.gvec
    cdef int i, j
    cdef double m
    _frames(ws, q)
    for j in range(ws.dof):
        g[j] = 0.0
    for i in range(ws.dof):
        _com_jacobians(ws, i)
        m = ws.mass[i]
        for j in range(i + 1):
            g[j] -= m * (ws.jp[0, j] * ws.grav[0]
                         + ws.jp[1, j] * ws.grav[1]
                         + ws.jp[2, j] * ws.grav[2])


cdef double _potential(_Workspace ws, const double[::1] q) noexcept:
    cdef int i
    cdef double acc = 0.0
    _frames(ws, q)
    for i in range(ws.dof):
        acc -= ws.mass[i] * (ws.pc[i, 0] * ws.grav[0]
                             + ws.pc[i, 1] * ws.grav[1]
                             + ws.pc[i, 2] * ws.grav[2])
    return acc


cdef void _coriolis(_Workspace ws, const double[::1] q, const double[::1] qd,
                    double fd_step) noexcept:
    # c_i = sum_jk (dB_ij/dq_k - 0.5 dB_jk/dq_i) qd_j qd_k
    cdef double[:, :, ::1] dB = ws.dB
    cdef int i, j, k, dof = ws.dof
    cdef double inv2h = 1.0 / (2.0 * fd_step)
    cdef double acc
    for k in range(dof):
        for i in range(dof):
            ws.qwork[i] = q[i]
        ws.qwork[k] = q[k] + fd_step
        _inertia(ws, ws.qwork, ws.Bp)
        ws.qwork[k] = q[k] - fd_step
        _inertia(ws, ws.qwork, ws.Bm)
        for i in range(dof):
            for j in range(dof):
                dB[k, i, j] = (ws.Bp[i, j] - ws.Bm[i, j]) * inv2h
    for i in range(dof):
        acc = 0.0
        for k in range(dof):
            for j in range(dof):
                acc += dB[k, i, j] * qd[j] * qd[k]
        for j in range(dof):
            for k in range(dof):
                acc -= 0.5 * dB[i, j, k] * qd[j] * qd[k]
        ws.cvec[i] = acc


cdef int _cholesky_solve(_Workspace ws, double[::1] out) noexcept:
    """Solve ws.B out = ws.rhs; returns -1 if B is not positive definite."""
    cdef double[:, ::1] B = ws.B
    cdef double[:, ::1] L = ws.L
    cdef int i, j, k, dof = ws.dof
    cdef double s
    for i in range(dof):
        for j in range(i + 1):
            s = B[i, j]
            for k in range(j):
                s -= L[i, k] * L[j, k]
            if i == j:
                if s <= 0.0 or isnan(s):
                    return -1
                L[i, i] = sqrt(s)
            else:
                L[i, j] = s / L[j, j]
    for i in range(dof):
        s = ws.rhs[i]
        for k in range(i):
            s -= L[i, k] * out[k]
        out[i] = s / L[i, i]
    for i in range(dof - 1, -1, -1):
        s = out[i]
        for k in range(i + 1, dof):
            s -= L[k, i] * out[k]
        out[i] = s / L[i, i]
    return 0


cdef int _fdyn(_Workspace ws, const double[::1] q, const double[::1] qd,
               const double[::1] xi, double fd_step, double[::1] qdd) noexcept:
    cdef int i
    _inertia(ws, q, ws.B)
    _gravity(ws, q)
    _coriolis(ws, q, qd, fd_step)
    for i in range(ws.dof):
        ws.rhs[i] = xi[i] - ws.cvec[i] - ws.gvec[i]
    return _cholesky_solve(ws, qdd)


# --- python-visible API (same contract as _pykernel) -------------------------


cdef object _vec(object x):
    return np.ascontiguousarray(x, dtype=np.float64)


def frames(kinds, dh, com, q):
    cdef _Workspace ws = _Workspace(kinds, dh, com)
    cdef const double[::1] qv = _vec(q)
    _frames(ws, qv)
    return (np.asarray(ws.R).copy(), np.asarray(ws.p).copy(), np.asarray(ws.pc).copy())


def inertia_matrix(kinds, dh, mass, com, inertia, rotor, q):
    cdef _Workspace ws = _Workspace(kinds, dh, com, mass, inertia, rotor)
    cdef const double[::1] qv = _vec(q)
    out = np.empty((ws.dof, ws.dof))
    cdef double[:, ::1] outv = out
    _inertia(ws, qv, outv)
    return out


def gravity_vector(kinds, dh, mass, com, gravity, q):
    cdef _Workspace ws = _Workspace(kinds, dh, com, mass, gravity=gravity)
    cdef const double[::1] qv = _vec(q)
    _gravity(ws, qv)
    return np.asarray(ws.gvec).copy()


def potential_energy(kinds, dh, mass, com, gravity, q):
    cdef _Workspace ws = _Workspace(kinds, dh, com, mass, gravity=gravity)
    cdef const double[::1] qv = _vec(q)
    return _potential(ws, qv)


def coriolis_vector(kinds, dh, mass, com, inertia, rotor, q, qd, fd_step=FD_STEP):
    cdef _Workspace ws = _Workspace(kinds, dh, com, mass, inertia, rotor)
    cdef const double[::1] qv = _vec(q)
    cdef const double[::1] qdv = _vec(qd)
    _coriolis(ws, qv, qdv, fd_step)
    return np.asarray(ws.cvec).copy()


def forward_dynamics(kinds, dh, mass, com, inertia, rotor, gravity,
                     q, qd, xi, fd_step=FD_STEP):
    cdef _Workspace ws = _Workspace(kinds, dh, com, mass, inertia, rotor, gravity)
    cdef const double[::1] qv = _vec(q)
    cdef const double[::1] qdv = _vec(qd)
    cdef const double[::1] xiv = _vec(xi)
    out = np.empty(ws.dof)
    cdef double[::1] outv = out
    if _fdyn(ws, qv, qdv, xiv, fd_step, outv) < 0:
        raise SingularInertiaError(
            "inertia matrix is not positive definite; check inertial parameters")
    return out


cdef object _eval_torque(object torque, double t, object q_arr, object qd_arr, int dof):
    out = np.asarray(torque(t, q_arr, qd_arr), dtype=np.float64)
    if out.shape != (dof,):
        raise ValueError(f"torque profile returned shape {out.shape}, expected ({dof},)")
    if not np.isfinite(out).all():
        raise NonFiniteStateError(f"torque profile returned non-finite values at t={t:g} s")
    return np.ascontiguousarray(out)


def rk4_integrate(kinds, dh, mass, com, inertia, rotor, gravity,
                  q0, qd0, torque, dt, nsteps, fd_step=FD_STEP):
    """Classical fixed-step 4th-order integration of (q, qd).

    The torque callback receives fresh array copies at every stage, so it
    may keep references to them without touching the integrator buffers.
    """
    cdef _Workspace ws = _Workspace(kinds, dh, com, mass, inertia, rotor, gravity)
    cdef int dof = ws.dof, n = int(nsteps), i, j
    cdef double h = float(dt), half = 0.5 * float(dt), step = float(fd_step), t
    qs = np.empty((n + 1, dof))
    qds = np.empty((n + 1, dof))
    xis = np.empty((n + 1, dof))
    cdef double[:, ::1] qsv = qs, qdsv = qds, xisv = xis
    qcur = np.array(q0, dtype=np.float64)
    qdcur = np.array(qd0, dtype=np.float64)
    q2a = np.empty(dof)
    q3a = np.empty(dof)
    q4a = np.empty(dof)
    qd2a = np.empty(dof)
    qd3a = np.empty(dof)
    qd4a = np.empty(dof)
    cdef double[::1] q = qcur, qd = qdcur
    cdef double[::1] q2 = q2a, q3 = q3a, q4 = q4a
    cdef double[::1] qd2 = qd2a, qd3 = qd3a, qd4 = qd4a
    a1a = np.empty(dof)
    a2a = np.empty(dof)
    a3a = np.empty(dof)
    a4a = np.empty(dof)
    cdef double[::1] a1 = a1a, a2 = a2a, a3 = a3a, a4 = a4a
    cdef const double[::1] xiv
    for j in range(dof):
        qsv[0, j] = q[j]
        qdsv[0, j] = qd[j]
    for i in range(n):
        t = i * h
        xiv = _eval_torque(torque, t, qcur.copy(), qdcur.copy(), dof)
        for j in range(dof):
            xisv[i, j] = xiv[j]
        if _fdyn(ws, q, qd, xiv, step, a1) < 0:
            raise SingularInertiaError(
                "inertia matrix is not positive definite; check inertial parameters")
        for j in range(dof):
            q2[j] = q[j] + half * qd[j]
            qd2[j] = qd[j] + half * a1[j]
        xiv = _eval_torque(torque, t + half, q2a.copy(), qd2a.copy(), dof)
        if _fdyn(ws, q2, qd2, xiv, step, a2) < 0:
            raise SingularInertiaError(
                "inertia matrix is not positive definite; check inertial parameters")
        for j in range(dof):
            q3[j] = q[j] + half * qd2[j]
            qd3[j] = qd[j] + half * a2[j]
        xiv = _eval_torque(torque, t + half, q3a.copy(), qd3a.copy(), dof)
        if _fdyn(ws, q3, qd3, xiv, step, a3) < 0:
            raise SingularInertiaError(
                "inertia matrix is not positive definite; check inertial parameters")
        for j in range(dof):
            q4[j] = q[j] + h * qd3[j]
            qd4[j] = qd[j] + h * a3[j]
        xiv = _eval_torque(torque, t + h, q4a.copy(), qd4a.copy(), dof)
        if _fdyn(ws, q4, qd4, xiv, step, a4) < 0:
            raise SingularInertiaError(
                "inertia matrix is not positive definite; check inertial parameters")
        for j in range(dof):
            q[j] = q[j] + (h / 6.0) * (qd[j] + 2.0 * qd2[j] + 2.0 * qd3[j] + qd4[j])
            qd[j] = qd[j] + (h / 6.0) * (a1[j] + 2.0 * a2[j] + 2.0 * a3[j] + a4[j])
        for j in range(dof):
            if not (isfinite(q[j]) and isfinite(qd[j])):
                raise NonFiniteStateError(f"state diverged at t={(i + 1) * h:g} s")
        for j in range(dof):
            qsv[i + 1, j] = q[j]
            qdsv[i + 1, j] = qd[j]
    xiv = _eval_torque(torque, n * h, qcur.copy(), qdcur.copy(), dof)
    for j in range(dof):
        xisv[n, j] = xiv[j]
    return qs, qds, xis
