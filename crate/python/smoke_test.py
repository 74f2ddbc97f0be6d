"""Smoke test for the atomshift_py extension.

Build it first with `cargo build --release -p atomshift-py`, then run
`python3 python/smoke_test.py [path/to/libatomshift_py.so]`.
"""

import cmath
import importlib.machinery
import importlib.util
import math
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load(path=None):
    candidates = [pathlib.Path(path)] if path else [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libatomshift_py.so", "libatomshift_py.dylib", "atomshift_py.dll")
    ]
    for lib in candidates:
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("atomshift_py", str(lib))
            spec = importlib.util.spec_from_loader("atomshift_py", loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("atomshift_py library not found; run cargo build -p atomshift-py")


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    m = load(sys.argv[1] if len(sys.argv) > 1 else None)

    close(m.plan_pulse(1.88, 0.1, "printed"), 999.4, 0.5)
    p, valid = m.jump_probability_total(1.88, 1000.0, "printed")
    close(p, 0.0999, 5e-4)
    assert valid

    params = m.PhysicalParams(100.0)
    frame = m.dressed_frame(params, 1.0)
    theta, omega = m.eigensolver_frame(params, 1.0)
    close(frame.theta, theta, 1e-12)
    close(frame.omega_beta, omega, 1e-10)
    close(frame.rate_up, m.pair_rate(params, 1.0), 1e-18)

    close(m.pulse_shift(params, 1.0, 100.0), -0.2j, 1e-15)
    ratio = m.instantaneous_jump_rate(params, 1.0, "printed") / m.instantaneous_jump_rate(params, 1.0, "hamiltonian")
    close(ratio, 16.0, 1e-9)

    rho_ee, _ = m.bloch_steady_state(params, 1.0)
    close(rho_ee, math.sin(frame.theta / 2) ** 2, 0.01 * rho_ee)
    out = m.oracle_output_amplitude(params, 1.0)
    close(cmath.phase(out), -0.02, 0.02 * 0.02)

    close(abs(m.coherent_overlap(20 * cmath.exp(-0.1j), 20)), 0.13558, 1e-4)
    close(m.cat_norm_sqr(20, 0.1), 1.833, 0.002)

    stats = m.run_ensemble(m.PhysicalParams(50.0), 5.0, 2000.0, 4, seed=1)
    assert stats.n_trajectories == 4 and stats.n_up > 0
    assert all(d > 0 for d in stats.pair_delays)

    try:
        m.PhysicalParams(0.0).__repr__()
        m.pulse_shift(m.PhysicalParams(0.0), 1.0, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("zero detuning accepted")

    print("atomshift_py smoke test passed")


if __name__ == "__main__":
    main()
