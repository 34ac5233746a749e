"""Pure-numpy manipulator kernels (fallback backend).

Same contract as the compiled module tmncell.robot._ckernel: standard DH
frame composition, geometric Jacobians per link centre of mass, the
inertia matrix as the sum of translational and rotational quadratic forms,
gravity from the position Jacobians, Coriolis/centrifugal terms from
Christoffel symbols of the inertia matrix (partials by central finite
differences), and a fixed-step classical Runge-Kutta integrator. Kept
dependency-free beyond numpy so the package works without a C compiler.
"""

from __future__ import annotations

from math import cos, sin

import numpy as np

from ..errors import NonFiniteStateError, SingularInertiaError

BACKEND_NAME = "python"
FD_STEP = 1e-6  # rad or m, for inertia-matrix partials


def frames(kinds, dh, com, q):
    """Compose the chain; returns (R, p, pc) with the base frame at index 0.

    R[i], p[i] are the rotation/origin of frame i (0 = base) and pc[i-1]
    the centre of mass of link i in base coordinates.
    """
    dof = len(q)
    R = np.empty((dof + 1, 3, 3))
    p = np.empty((dof + 1, 3))
    pc = np.empty((dof, 3))
    R[0] = np.eye(3)
    p[0] = 0.0
    for i in range(dof):
        a, alpha, d, theta = dh[i]
        if kinds[i] == 0:  # revolute: q drives theta
            theta = theta + q[i]
        else:  # prismatic: q drives d
            d = d + q[i]
        ct, st = cos(theta), sin(theta)
        ca, sa = cos(alpha), sin(alpha)
        rel_rot = np.array([
            [ct, -st * ca, st * sa],
            [st, ct * ca, -ct * sa],
            [0.0, sa, ca],
        ])
        rel_org = np.array([a * ct, a * st, d])
        R[i + 1] = R[i] @ rel_rot
        p[i + 1] = p[i] + R[i] @ rel_org
        pc[i] = p[i + 1] + R[i + 1] @ com[i]
    return R, p, pc


def _com_jacobians(kinds, R, p, pc, link):
    """Position/orientation Jacobians (3 x dof) of link's centre of mass."""
    dof = len(kinds)
    jp = np.zeros((3, dof))
    jo = np.zeros((3, dof))
    target = pc[link]
    for j in range(link + 1):
        z = R[j][:, 2]
        if kinds[j] == 0:
            jp[:, j] = np.cross(z, target - p[j])
            jo[:, j] = z
        else:
            jp[:, j] = z
    return jp, jo


def inertia_matrix(kinds, dh, mass, com, inertia, rotor, q):
    dof = len(q)
    R, p, pc = frames(kinds, dh, com, q)
    B = np.zeros((dof, dof))
    for i in range(dof):
        jp, jo = _com_jacobians(kinds, R, p, pc, i)
        world_inertia = R[i + 1] @ inertia[i] @ R[i + 1].T
        B += mass[i] * (jp.T @ jp) + jo.T @ world_inertia @ jo
    B[np.diag_indices(dof)] += rotor
    return B


def gravity_vector(kinds, dh, mass, com, gravity, q):
    # g = dP/dq with P = -sum_i m_i gravity . pc_i, so g_j = -sum_i m_i gravity . Jp_i[:, j]
    dof = len(q)
    R, p, pc = frames(kinds, dh, com, q)
    g = np.zeros(dof)
    for i in range(dof):
        jp, _ = _com_jacobians(kinds, R, p, pc, i)
        g -= mass[i] * (jp.T @ gravity)
    return g


def potential_energy(kinds, dh, mass, com, gravity, q):
    _, _, pc = frames(kinds, dh, com, q)
    return -float(np.dot(mass, pc @ gravity))


def coriolis_vector(kinds, dh, mass, com, inertia, rotor, q, qd, fd_step=FD_STEP):
    """c_i = sum_jk (dB_ij/dq_k - 0.5 dB_jk/dq_i) qd_k qd_j."""
    dof = len(q)
    dB = np.empty((dof, dof, dof))  # dB[k] = dB/dq_k
    for k in range(dof):
        qp = np.array(q, dtype=float)
        qm = np.array(q, dtype=float)
        qp[k] += fd_step
        qm[k] -= fd_step
        dB[k] = (
            inertia_matrix(kinds, dh, mass, com, inertia, rotor, qp)
            - inertia_matrix(kinds, dh, mass, com, inertia, rotor, qm)
        ) / (2.0 * fd_step)
    c = np.tensordot(qd, dB, axes=(0, 0)) @ qd  # sum_k dB[k] qd_k, applied to qd
    for i in range(dof):
        c[i] -= 0.5 * (qd @ dB[i] @ qd)
    return c


def _solve_spd(B, rhs):
    try:
        np.linalg.cholesky(B)
    except np.linalg.LinAlgError as exc:
        raise SingularInertiaError(
            "inertia matrix is not positive definite; check inertial parameters"
        ) from exc
    return np.linalg.solve(B, rhs)


def forward_dynamics(kinds, dh, mass, com, inertia, rotor, gravity, q, qd, xi, fd_step=FD_STEP):
    B = inertia_matrix(kinds, dh, mass, com, inertia, rotor, q)
    c = coriolis_vector(kinds, dh, mass, com, inertia, rotor, q, qd, fd_step)
    g = gravity_vector(kinds, dh, mass, com, gravity, q)
    return _solve_spd(B, xi - c - g)


def rk4_integrate(kinds, dh, mass, com, inertia, rotor, gravity,
                  q0, qd0, torque, dt, nsteps, fd_step=FD_STEP):
    """Classical fixed-step 4th-order integration of (q, qd).

    `torque` is called as torque(t, q, qd) at every stage; the returned
    trajectory holds the torque evaluated at the stored sample points.
    """
    dof = len(q0)
    qs = np.empty((nsteps + 1, dof))
    qds = np.empty((nsteps + 1, dof))
    xis = np.empty((nsteps + 1, dof))
    q = np.array(q0, dtype=float)
    qd = np.array(qd0, dtype=float)
    qs[0] = q
    qds[0] = qd

    def accel(t, q_, qd_, xi_):
        return forward_dynamics(kinds, dh, mass, com, inertia, rotor, gravity,
                                q_, qd_, xi_, fd_step)

    half = 0.5 * dt
    for i in range(nsteps):
        t = i * dt
        xi1 = _eval_torque(torque, t, q, qd, dof)
        a1 = accel(t, q, qd, xi1)
        q2, qd2 = q + half * qd, qd + half * a1
        a2 = accel(t + half, q2, qd2, _eval_torque(torque, t + half, q2, qd2, dof))
        q3, qd3 = q + half * qd2, qd + half * a2
        a3 = accel(t + half, q3, qd3, _eval_torque(torque, t + half, q3, qd3, dof))
        q4, qd4 = q + dt * qd3, qd + dt * a3
        a4 = accel(t + dt, q4, qd4, _eval_torque(torque, t + dt, q4, qd4, dof))
        q = q + (dt / 6.0) * (qd + 2.0 * qd2 + 2.0 * qd3 + qd4)
        qd = qd + (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        if not (np.isfinite(q).all() and np.isfinite(qd).all()):
            raise NonFiniteStateError(f"state diverged at t={t + dt:g} s")
        xis[i] = xi1
        qs[i + 1] = q
        qds[i + 1] = qd
    xis[nsteps] = _eval_torque(torque, nsteps * dt, q, qd, dof)
    return qs, qds, xis


def _eval_torque(torque, t, q, qd, dof):
    xi = np.asarray(torque(t, q, qd), dtype=float)
    if xi.shape != (dof,):
        raise ValueError(f"torque profile returned shape {xi.shape}, expected ({dof},)")
    if not np.isfinite(xi).all():
        raise NonFiniteStateError(f"torque profile returned non-finite values at t={t:g} s")
    return xi
