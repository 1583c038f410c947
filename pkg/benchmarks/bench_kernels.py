"""Compare the compiled and pure-numpy kernel backends.

Times the three hot kernels (displacement matrix construction, Weyl
function evaluation, batched vector displacement) and one realistic
workload (a squeezed-state fidelity by quadrature) on each available
backend, and checks the backends agree elementwise.

Usage: python3 benchmarks/bench_kernels.py [--dim 64] [--points 4096]
"""

import argparse
import time

import numpy as np

from gaussfock import QuadratureSpec, fidelity_pure, get_backend, set_backend, squeezed_state
from gaussfock import _kernels


def best_of(repeats, fn):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def make_inputs(dim, points, rank, rng):
    alphas = (rng.normal(size=points) + 1j * rng.normal(size=points)) * 0.7
    rho = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = rho @ rho.conj().T
    rho /= np.trace(rho).real
    vecs = (rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))) / dim
    return alphas, rho, vecs


def run_backend(name, dim, points, rank, repeats, inputs):
    set_backend(name)
    alphas, rho, vecs = inputs
    psi = squeezed_state(1.0, dim)
    quad = QuadratureSpec(64, 0.5)

    # first call pays any compilation cost; keep it out of the numbers
    _kernels.disp_matrix(0.3 + 0.1j, dim)
    _kernels.char_values(rho, alphas[:8])
    _kernels.displace_vectors(vecs, alphas[:8])
    fidelity_pure(psi, 1.0, quad)

    samples = {
        "disp_matrix (256x)": lambda: [
            _kernels.disp_matrix(a, dim) for a in alphas[:256]
        ],
        f"char_values ({points} pts)": lambda: _kernels.char_values(rho, alphas),
        f"displace_vectors ({points} x {rank})": lambda: _kernels.displace_vectors(
            vecs, alphas
        ),
        "fidelity_pure (squeezed, order 64)": lambda: fidelity_pure(psi, 1.0, quad),
    }
    timings = {label: best_of(repeats, fn) for label, fn in samples.items()}
    outputs = {
        "disp_matrix": _kernels.disp_matrix(0.8 - 0.3j, dim),
        "char_values": _kernels.char_values(rho, alphas),
        "displace_vectors": _kernels.displace_vectors(vecs, alphas),
    }
    return timings, outputs


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dim", type=int, default=64)
    parser.add_argument("--points", type=int, default=4096)
    parser.add_argument("--rank", type=int, default=8)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    backends = ["numpy"]
    if _kernels.HAVE_NUMBA:
        backends.append("numba")
    else:
        print("numba not importable; timing the numpy backend only")

    rng = np.random.default_rng(0)
    inputs = make_inputs(args.dim, args.points, args.rank, rng)
    saved = get_backend()
    results = {}
    try:
        for name in backends:
            results[name] = run_backend(
                name, args.dim, args.points, args.rank, args.repeats, inputs
            )
    finally:
        set_backend(saved)

    labels = list(results[backends[0]][0])
    width = max(len(l) for l in labels)
    header = f"{'kernel':<{width}}  " + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label in labels:
        row = f"{label:<{width}}  "
        for b in backends:
            row += f"{results[b][0][label] * 1e3:>10.2f}ms"
        if len(backends) == 2:
            ratio = results["numpy"][0][label] / results["numba"][0][label]
            row += f"{ratio:>9.1f}x"
        print(row)

    if len(backends) == 2:
        print()
        for key in ("disp_matrix", "char_values", "displace_vectors"):
            diff = np.max(
                np.abs(results["numpy"][1][key] - results["numba"][1][key])
            )
            print(f"max |numpy - numba| for {key}: {diff:.3e}")


if __name__ == "__main__":
    main()
