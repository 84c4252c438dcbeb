"""Compare the compiled term kernels with the pure-Python fallback.

Two layers are timed: the raw multiply-accumulate and derivative kernels on
random dense-ish term maps, and an end-to-end Jacobi certification run in a
subprocess under each backend.

    python3 benchmarks/bench_kernels.py [--terms 200] [--repeat 5] [--case c3]
"""
import argparse
import json
import os
import random
import statistics
import subprocess
import sys
import timeit
from fractions import Fraction

from quadpoisson import _pykernels

try:
    from quadpoisson import _ckernels
except ImportError:
    _ckernels = None

END_TO_END = """
import json, time
from fractions import Fraction
from quadpoisson import kernels, sl3
from quadpoisson.brackets import quadratic_bracket, restrict_sl
from quadpoisson.verify import jacobi_check
e = sl3.entry({case!r}, 'symbolic', 'symbolic', want_pair=True)
start = time.perf_counter()
t = restrict_sl(quadratic_bracket(e.c, e.b, Fraction(1, 3)))
r = jacobi_check(t)
print(json.dumps({{"backend": kernels.BACKEND, "status": r.status, "seconds": time.perf_counter() - start}}))
"""


def random_terms(rng, n, nvars=12, degree=4, exact=True):
    out = {}
    for _ in range(n):
        key = 0
        for _ in range(rng.randint(0, degree)):
            key += 1 << (_pykernels.FIELD_BITS * rng.randrange(nvars))
        num = rng.randint(-9, 9) or 1
        out[key] = Fraction(num, rng.randint(1, 6)) if exact else num
    return out


def time_kernels(mod, a, b, repeat):
    def mul():
        acc = {}
        mod.mul_into(acc, a, b, 1)
        mod.finish(acc)

    def diff():
        for slot in range(12):
            mod.diff(a, slot * _pykernels.FIELD_BITS)

    return {name: min(timeit.repeat(fn, number=5, repeat=repeat)) / 5 for name, fn in (("mul_into", mul), ("diff", diff))}


def end_to_end(case, pure):
    env = dict(os.environ)
    env.pop("QUADPOISSON_PURE", None)
    if pure:
        env["QUADPOISSON_PURE"] = "1"
    out = subprocess.run([sys.executable, "-c", END_TO_END.format(case=case)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--terms", type=int, default=200)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--case", default="c3")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    rng = random.Random(args.seed)
    mods = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    for label, exact in (("Fraction", True), ("int", False)):
        a = random_terms(rng, args.terms, exact=exact)
        b = random_terms(rng, args.terms, exact=exact)
        results = {name: time_kernels(mod, a, b, args.repeat) for name, mod in mods}
        print(f"kernels, {label} coefficients, {args.terms}x{args.terms} terms (best of {args.repeat}, s/call)")
        for op in ("mul_into", "diff"):
            row = "  ".join(f"{name}={results[name][op]:.5f}" for name, _ in mods)
            speed = f"  speedup={results['python'][op] / results['cython'][op]:.2f}x" if _ckernels else ""
            print(f"  {op:<9} {row}{speed}")
    if not _ckernels:
        print("  compiled extension not built; only the fallback was timed")

    print(f"end-to-end Jacobi certification of case {args.case} at lambda=1/3")
    runs = {pure: [end_to_end(args.case, pure)["seconds"] for _ in range(3)] for pure in (True, False)}
    for pure, secs in runs.items():
        print(f"  {'forced python' if pure else 'default':<14} median={statistics.median(secs):.3f}s")


if __name__ == "__main__":
    main()
