"""Compare the compiled hit-and-run kernel with the numpy fallback.

    python benchmarks/bench_walk.py --dims 2 4 8 --samples 2000

Both kernels consume the same random numbers.  Their paths agree to rounding
at first; the walk amplifies rounding differences, so on long chains only
the distributions agree and ``max diff`` can be of order one.
"""
import argparse
import time

import numpy as np

from latcut.sampler import KERNEL_NAME, Polytope, SamplerConfig, add_halfspace, sample


def body(d, rng, cuts=3 * 8):
    K = Polytope.box(d, 1.0)
    for _ in range(cuts):
        K = add_halfspace(K, rng.standard_normal(d), -0.5)
    return K


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dims", type=int, nargs="+", default=[2, 4, 8])
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    if KERNEL_NAME != "compiled":
        print("compiled kernel not built; only the numpy fallback is available")
    rng = np.random.default_rng(0)
    print(f"{'dim':>4} {'steps':>9} {'numpy s':>9} {'compiled s':>11} {'speedup':>8} {'max diff':>9}")
    for d in args.dims:
        K = body(d, rng)
        cfg = SamplerConfig(burn_factor=20, thin_factor=4)
        steps = cfg.burn(d) + cfg.thin(d) * args.samples
        t_py, a = best_of(lambda: sample(K, args.samples, seed=1,
                                         config=SamplerConfig(20, 4, backend="python")), args.repeat)
        if KERNEL_NAME == "compiled":
            t_c, b = best_of(lambda: sample(K, args.samples, seed=1,
                                            config=SamplerConfig(20, 4, backend="compiled")), args.repeat)
            print(f"{d:>4} {steps:>9} {t_py:>9.4f} {t_c:>11.4f} {t_py / t_c:>8.1f} {np.abs(a - b).max():>9.1e}")
        else:
            print(f"{d:>4} {steps:>9} {t_py:>9.4f} {'-':>11} {'-':>8} {'-':>9}")


if __name__ == "__main__":
    main()
