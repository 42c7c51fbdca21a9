"""Time the numba kernels against their pure-numpy twins.

    python benchmarks/bench_kernels.py [--repeat 5]

Both flavours are imported directly, so ``WAVACT_NUMBA`` does not matter here.
The first numba call (compilation) is excluded from the timings. Every pair is
also checked for agreement before it is timed.
"""

import argparse
import timeit

import numpy as np

from wavact import kernels
from wavact.inference import lof_embedding
from wavact.wavelet import get_wavelet


def cases(rng):
    w = get_wavelet("rbio3.1")
    lo, hi, rlo, rhi = w.arrays()
    x = rng.integers(0, 2, 89200).astype(np.float64)  # one month at 30 s
    a, d = kernels.periodic_analysis_numpy(x, lo, hi)
    ts = 30.0 * np.arange(4000)
    emb = lof_embedding(ts, rng.random(4000), "daily")  # (entropy, sin, cos of time of day)
    vals = np.ascontiguousarray(emb[:, :1])
    first = np.sort(rng.integers(0, 80000, 3000))
    last = first + rng.integers(0, 40, 3000)
    bits = rng.integers(0, 2, 89200).astype(np.uint8)
    return [
        ("periodic_analysis N=89200", "periodic_analysis", (x, lo, hi)),
        ("periodic_synthesis N=89200", "periodic_synthesis", (a, d, rlo, rhi)),
        ("knn daily 4000x3 k=20", "knn", (emb, emb, 20, True)),
        ("knn values 4000x1 k=20", "knn", (vals, vals, 20, True)),
        ("mark_intervals 3000 spans", "mark_intervals", (first, last, 89200)),
        ("run_lengths N=89200", "run_lengths", (bits,)),
    ]


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.allclose(a, b, atol=1e-12)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s} {'numpy ms':>10s} {'numba ms':>10s} {'speed-up':>9s}")
    for label, name, call_args in cases(rng):
        f_np = getattr(kernels, f"{name}_numpy")
        f_nb = getattr(kernels, f"{name}_numba")
        if not same(f_np(*call_args), f_nb(*call_args)):
            raise SystemExit(f"{label}: backends disagree")
        t_np = min(timeit.repeat(lambda: f_np(*call_args), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: f_nb(*call_args), number=1, repeat=args.repeat)) * 1e3
        print(f"{label:32s} {t_np:10.2f} {t_nb:10.2f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
