"""Independent reference implementations used to check the package.

The planar-arm oracle derives the equations of motion symbolically from
explicit trigonometry (absolute link angles, cartesian centre-of-mass
coordinates), never touching the package's frame composition or Jacobian
code. Agreement between the two routes therefore checks the whole
DH/Jacobian/Christoffel pipeline, not just its self-consistency.
"""

from __future__ import annotations

import numpy as np
import sympy as sp

from tmncell.robot import REVOLUTE, DHLink, LinkInertia, RobotModel

G = 9.81


class PlanarArmOracle:
    """n-link revolute arm moving in the x-y plane, gravity along -y.

    lengths[i] is the joint-to-joint length, com_offsets[i] the distance of
    the centre of mass from joint i along the link, izz[i] the link inertia
    about its centre of mass normal to the plane. rotor[i] adds the
    reflected actuator inertia gear^2 * I_rotor on the diagonal.
    """

    def __init__(self, lengths, com_offsets, masses, izz, rotor=None):
        n = len(lengths)
        self.n = n
        rotor = [0.0] * n if rotor is None else list(rotor)
        q = sp.symbols(f"q1:{n + 1}", real=True)
        qd = sp.symbols(f"qd1:{n + 1}", real=True)

        phi = [sum(q[: i + 1]) for i in range(n)]
        phid = [sum(qd[: i + 1]) for i in range(n)]
        # joint i position, then the com a further com_offset along link i
        joint_x, joint_y = sp.Integer(0), sp.Integer(0)
        K = sp.Integer(0)
        P = sp.Integer(0)
        for i in range(n):
            cx = joint_x + com_offsets[i] * sp.cos(phi[i])
            cy = joint_y + com_offsets[i] * sp.sin(phi[i])
            vx = sum(sp.diff(cx, q[j]) * qd[j] for j in range(n))
            vy = sum(sp.diff(cy, q[j]) * qd[j] for j in range(n))
            K += sp.Rational(1, 2) * masses[i] * (vx**2 + vy**2)
            K += sp.Rational(1, 2) * izz[i] * phid[i] ** 2
            K += sp.Rational(1, 2) * rotor[i] * qd[i] ** 2
            P += masses[i] * G * cy
            joint_x = joint_x + lengths[i] * sp.cos(phi[i])
            joint_y = joint_y + lengths[i] * sp.sin(phi[i])

        B = sp.hessian(K, qd)
        gvec = sp.Matrix([sp.diff(P, qi) for qi in q])
        cvec = sp.zeros(n, 1)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    h = sp.diff(B[i, j], q[k]) - sp.Rational(1, 2) * sp.diff(B[j, k], q[i])
                    cvec[i] += h * qd[j] * qd[k]

        args = (*q, *qd)
        self._B = sp.lambdify(q, B, "numpy")
        self._g = sp.lambdify(q, gvec, "numpy")
        self._c = sp.lambdify(args, cvec, "numpy")
        self._K = sp.lambdify(args, K, "numpy")
        self._P = sp.lambdify(q, P, "numpy")
        self._lengths = tuple(float(v) for v in lengths)
        self._com_offsets = tuple(float(v) for v in com_offsets)
        self._masses = tuple(float(v) for v in masses)
        self._izz = tuple(float(v) for v in izz)
        self._rotor = tuple(float(v) for v in rotor)

    def inertia(self, q) -> np.ndarray:
        return np.atleast_2d(np.asarray(self._B(*q), dtype=float))

    def gravity(self, q) -> np.ndarray:
        return np.asarray(self._g(*q), dtype=float).ravel()

    def coriolis(self, q, qd) -> np.ndarray:
        return np.asarray(self._c(*q, *qd), dtype=float).ravel()

    def kinetic(self, q, qd) -> float:
        return float(self._K(*q, *qd))

    def potential(self, q) -> float:
        return float(self._P(*q))

    def forward_dynamics(self, q, qd, tau) -> np.ndarray:
        rhs = np.asarray(tau, dtype=float) - self.coriolis(q, qd) - self.gravity(q)
        return np.linalg.solve(self.inertia(q), rhs)

    def matching_model(self) -> RobotModel:
        """The same arm expressed through the package's DH description.

        Planar: alpha = 0, d = 0, offset 0; the link frame sits at the
        distal joint, so the stored com is com_offset - length along x.
        The tensor splits izz across the in-plane axes (0.4/0.7) to stay a
        physically realizable body; only the zz moment enters planar motion.
        """
        links = []
        for i in range(self.n):
            dh = DHLink(a=self._lengths[i], alpha=0.0, d=0.0,
                        theta_offset=0.0, kind=REVOLUTE)
            izz = self._izz[i]
            tensor = (0.4 * izz, 0.0, 0.0,
                      0.0, 0.7 * izz, 0.0,
                      0.0, 0.0, izz)
            rotor_inertia = self._rotor[i]
            inertia = LinkInertia(
                mass=self._masses[i],
                com=(self._com_offsets[i] - self._lengths[i], 0.0, 0.0),
                tensor=tensor,
                rotor_inertia=rotor_inertia,
                gear_ratio=1.0,
            )
            links.append((dh, inertia))
        return RobotModel(links, gravity=(0.0, -G, 0.0))


def random_planar_oracle(rng: np.random.Generator, n: int) -> PlanarArmOracle:
    """Arm with randomized but physically sensible parameters."""
    lengths = rng.uniform(0.4, 1.2, size=n)
    com_offsets = lengths * rng.uniform(0.3, 0.9, size=n)
    masses = rng.uniform(0.5, 4.0, size=n)
    izz = masses * lengths**2 * rng.uniform(0.05, 0.12, size=n)
    rotor = rng.uniform(0.0, 0.05, size=n)
    return PlanarArmOracle(lengths, com_offsets, masses, izz, rotor=rotor)


def point_cloud_inertia(rng: np.random.Generator, scale: float = 0.2,
                        npoints: int = 6) -> np.ndarray:
    """Random tensor of an actual rigid body (built from point masses)."""
    points = rng.normal(scale=scale, size=(npoints, 3))
    weights = rng.uniform(0.1, 0.5, size=npoints)
    tensor = np.zeros((3, 3))
    for w, r in zip(weights, points):
        tensor += w * ((r @ r) * np.eye(3) - np.outer(r, r))
    return tensor + 1e-4 * np.eye(3)
