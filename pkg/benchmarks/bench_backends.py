"""Benchmark the compiled kernel against the pure-numpy fallback.

Times the hot dynamics operations (inertia matrix, Coriolis vector,
forward dynamics) and a fixed-step RK4 run on a 3-link arm, then prints a
table with the speedup. Run as:

    python3 benchmarks/bench_backends.py [--dof N] [--seconds S]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from tmncell.robot import DHLink, LinkInertia, RobotModel
from tmncell.robot._backend import load_kernel

FD_STEP = 1e-6


def _cloud_tensor(rng: np.random.Generator) -> tuple[float, ...]:
    points = rng.uniform(-0.2, 0.2, (6, 3))
    masses = rng.uniform(0.05, 0.4, 6)
    tensor = np.zeros((3, 3))
    for m, r in zip(masses, points):
        tensor += m * ((r @ r) * np.eye(3) - np.outer(r, r))
    tensor += 1e-4 * np.eye(3)
    return tuple(tensor.reshape(-1))


def build_model(dof: int, seed: int = 7) -> RobotModel:
    rng = np.random.default_rng(seed)
    links = []
    for _ in range(dof):
        dh = DHLink(a=float(rng.uniform(0.3, 0.8)),
                    alpha=float(rng.uniform(-math.pi / 2, math.pi / 2)),
                    d=float(rng.uniform(0.0, 0.3)),
                    theta_offset=0.0)
        inertia = LinkInertia(mass=float(rng.uniform(0.8, 2.5)),
                              com=tuple(rng.uniform(-0.2, 0.2, 3)),
                              tensor=_cloud_tensor(rng),
                              rotor_inertia=0.002, gear_ratio=60.0)
        links.append((dh, inertia))
    return RobotModel(links, gravity=(0.0, 0.0, -9.81))


def _time_calls(fn, min_seconds: float) -> tuple[float, int]:
    """Run fn repeatedly for at least min_seconds; return (s/call, calls)."""
    fn()  # warm up
    calls = 0
    start = time.perf_counter()
    while True:
        fn()
        calls += 1
        elapsed = time.perf_counter() - start
        if elapsed >= min_seconds and calls >= 5:
            return elapsed / calls, calls


def bench_backend(kernel, model: RobotModel, seconds: float) -> dict[str, float]:
    a = model.arrays
    rng = np.random.default_rng(13)
    q = rng.uniform(-1.5, 1.5, model.dof)
    qd = rng.uniform(-1.0, 1.0, model.dof)
    xi = rng.uniform(-2.0, 2.0, model.dof)

    def torque(t, q_, qd_):
        return xi

    results = {}
    results["inertia_matrix"], _ = _time_calls(
        lambda: kernel.inertia_matrix(a.kinds, a.dh, a.mass, a.com,
                                      a.inertia, a.rotor, q), seconds)
    results["coriolis_vector"], _ = _time_calls(
        lambda: kernel.coriolis_vector(a.kinds, a.dh, a.mass, a.com,
                                       a.inertia, a.rotor, q, qd, FD_STEP), seconds)
    results["forward_dynamics"], _ = _time_calls(
        lambda: kernel.forward_dynamics(a.kinds, a.dh, a.mass, a.com,
                                        a.inertia, a.rotor, a.gravity,
                                        q, qd, xi, FD_STEP), seconds)
    results["rk4_1000_steps"], _ = _time_calls(
        lambda: kernel.rk4_integrate(a.kinds, a.dh, a.mass, a.com, a.inertia,
                                     a.rotor, a.gravity, q, qd, torque,
                                     1e-3, 1000, FD_STEP), max(seconds, 0.5))
    return results


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dof", type=int, default=3, help="links in the arm")
    parser.add_argument("--seconds", type=float, default=0.25,
                        help="minimum sampling time per operation")
    args = parser.parse_args()

    model = build_model(args.dof)
    backends = {"python": load_kernel("python")}
    try:
        backends["cython"] = load_kernel("cython")
    except ImportError:
        print("compiled extension not built; benchmarking the fallback only")

    timings = {name: bench_backend(kernel, model, args.seconds)
               for name, kernel in backends.items()}

    ops = list(next(iter(timings.values())))
    print(f"\n{args.dof}-link arm, seconds per call")
    header = f"{'operation':<18}" + "".join(f"{name:>14}" for name in timings)
    if len(timings) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for op in ops:
        row = f"{op:<18}" + "".join(f"{timings[n][op]:>14.3e}" for n in timings)
        if len(timings) == 2:
            row += f"{timings['python'][op] / timings['cython'][op]:>9.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
