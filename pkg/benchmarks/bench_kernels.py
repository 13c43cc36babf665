"""Time the numba kernels against their numpy/Python fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json OUT]

Both paths run in one process (the fallbacks are always importable); each
workload checks that the two results agree before reporting times.  The
numba column includes no compilation: every kernel is warmed up first.
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from pfxcomplex import _kernels as K
from pfxcomplex.witnesses import nfa_to_dfa_ternary


def _random_tables(count, n, k, seed=0):
    rng = np.random.default_rng(seed)
    return [(rng.integers(0, n, size=(n, k)), rng.random(n) < 0.3) for _ in range(count)]


def _ternary_succ(n):
    nfa = nfa_to_dfa_ternary(n)
    return np.asarray(nfa.masks, dtype=np.int64), nfa.final_mask


def workloads():
    tables = _random_tables(2000, 12, 2)
    succ, fin = _ternary_succ(14)
    yield (
        "min_size x2000 (12 states)",
        lambda: [K._min_size_nb(t, f, 0) for t, f in tables],
        lambda: [K._min_size_np(t, f, 0) for t, f in tables],
    )
    yield (
        "subset merge (ternary n=14)",
        lambda: len(K._subset_nb(succ, np.int64(1), np.int64(fin), True)[2]),
        lambda: len(K.subset_py(succ.tolist(), 1, fin, True)[2]),
    )
    yield (
        "sweep reversal n=5 k=2",
        lambda: K._sweep_pf_reversal_nb(5, 2, 0, 5**6),
        lambda: K._sweep_pf_reversal_np(5, 2, 0, 5**6),
    )
    yield (
        "sweep cyclic shift n=4 k=3",
        lambda: K._sweep_pf_cyclic_nb(4, 3, 0, 4**6),
        lambda: K._sweep_pf_cyclic_np(4, 3, 0, 4**6),
    )
    yield (
        "sweep nfa-to-dfa n=3 k=2",
        lambda: K._sweep_nfa_det_nb(3, 2, 0, 8**4),
        lambda: K._sweep_nfa_det_np(3, 2, 0, 8**4),
    )


def _best(fn, repeat):
    out, times = None, []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, list):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    return int(a) == int(b)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", dest="json_out", default=None)
    args = ap.parse_args(argv)
    if not K.HAVE_NUMBA:
        print("numba disabled or missing: only the fallback path would run; nothing to compare")
        return 1
    rows = []
    for name, fast, slow in workloads():
        fast()  # compile
        t_nb, r_nb = _best(fast, args.repeat)
        t_np, r_np = _best(slow, 1)
        rows.append({"workload": name, "numba_s": t_nb, "numpy_s": t_np, "speedup": t_np / t_nb, "agree": _same(r_nb, r_np)})
    width = max(len(r["workload"]) for r in rows)
    print(f"{'workload':<{width}}  {'numba s':>10}  {'numpy s':>10}  {'speedup':>8}  agree")
    for r in rows:
        print(f"{r['workload']:<{width}}  {r['numba_s']:>10.4f}  {r['numpy_s']:>10.4f}  {r['speedup']:>8.1f}  {r['agree']}")
    if args.json_out:
        with open(args.json_out, "w") as fh:
            json.dump(rows, fh, indent=1)
    return 0 if all(r["agree"] for r in rows) else 2


if __name__ == "__main__":
    raise SystemExit(main())
