"""Compiled core vs numpy fallback on the two hot loops.

    python3 benchmarks/bench_core.py [--repeat 5]

Prints one line per kernel with the best time of each backend, the speedup,
and the largest relative difference between their outputs.
"""
import argparse
import timeit

import numpy as np

from covkernel import _core_py

try:
    from covkernel import _core
except ImportError:
    _core = None


def cases():
    rng = np.random.default_rng(7)
    w = rng.normal(size=20000) * 3 + 1j * rng.normal(size=20000) * 3
    yield "log_bessel_series(alpha=40, 2e4 args)", "log_bessel_series", (40, w * w)
    z = rng.normal(size=(20000, 4, 6))
    z = np.ascontiguousarray(np.swapaxes(z, 1, 2) @ z)
    yield "charpoly_products(2e4 real 6x6)", "charpoly_products", (z, 1.5, -0.5)
    x = rng.normal(size=(20000, 4, 3)) + 1j * rng.normal(size=(20000, 4, 3))
    zc = np.ascontiguousarray(np.conj(np.swapaxes(x, 1, 2)) @ x)
    yield "charpoly_products(2e4 complex 3x3)", "charpoly_products", (zc, 0.3, 2.0)


def _first(v):
    return v[0] if isinstance(v, tuple) else v


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _core is None:
        print("compiled core not built; only the fallback is available")
    for label, name, inputs in cases():
        py = getattr(_core_py, name)
        t_py = min(timeit.repeat(lambda: py(*inputs), number=1, repeat=args.repeat))
        if _core is None:
            print(f"{label:40s} python {t_py * 1e3:8.2f} ms")
            continue
        cy = getattr(_core, name)
        t_cy = min(timeit.repeat(lambda: cy(*inputs), number=1, repeat=args.repeat))
        a, b = _first(py(*inputs)), _first(cy(*inputs))
        if name == "log_bessel_series":
            diff = np.max(np.abs(np.exp(a - b) - 1))
        else:
            diff = np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300))
        print(f"{label:40s} python {t_py * 1e3:8.2f} ms  cython {t_cy * 1e3:8.2f} ms  "
              f"speedup {t_py / t_cy:6.1f}x  max rel diff {diff:.1e}")


if __name__ == "__main__":
    main()
