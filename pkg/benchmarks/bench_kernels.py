"""Time the compiled and NumPy max-fold kernels side by side.

    python3 benchmarks/bench_kernels.py --trials 2000000 --n 64 --d0 8
"""

import argparse
import logging
import time

from gridfuse import kernels
from gridfuse.analysis import planted_max

log = logging.getLogger("bench")


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--n", type=int, default=16)
    ap.add_argument("--d0", type=int, default=4)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--p", type=float, default=0.1)
    ap.add_argument("--trials", type=int, default=1_000_000)
    ap.add_argument("--enum-n", type=int, default=20, help="N for the exhaustive histogram")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    values = [int(v) for v in planted_max(args.n, args.m, args.seed).values()]
    enum_values = [int(v) for v in planted_max(args.enum_n, args.m, args.seed).values()]
    impls = kernels.backends()
    if "cython" not in impls:
        log.warning("compiled kernel not available; timing the NumPy fallback only")

    print(f"{'backend':<8} {'kernel':<22} {'seconds':>9} {'result':>12}")
    results = {}
    for name, impl in impls.items():
        t, wrong = best_of(
            lambda: kernels.count_wrong_trials(values, args.d0, args.p, args.seed, 0, args.trials, impl=impl),
            args.repeat,
        )
        print(f"{name:<8} {f'monte carlo {args.trials:.0e}':<22} {t:9.4f} {wrong:>12}")
        d0 = args.d0 if args.enum_n % args.d0 == 0 else args.enum_n
        th, hist = best_of(lambda: kernels.failure_histogram(enum_values, d0, impl=impl), args.repeat)
        print(f"{name:<8} {f'enumerate 2^{args.enum_n}':<22} {th:9.4f} {sum(hist):>12}")
        results[name] = (t, th, wrong, hist)

    if len(results) == 2:
        (tc, hc, wc, histc), (tp, hp, wp, histp) = results["cython"], results["python"]
        assert wc == wp and histc == histp, "backends disagree"
        print(f"speedup (cython over numpy): monte carlo {tp / tc:.1f}x, enumeration {hp / hc:.1f}x")


if __name__ == "__main__":
    main()
