"""Time the numpy reference kernels against the compiled extension.

    python benchmarks/bench_kernels.py [--repeat N] [--json]
"""
import argparse
import importlib
import itertools
import json
import timeit

import numpy as np

from ghzrsp import _pykernels
from ghzrsp.protocol import Enumerate, run_qubit_rsp, run_qudit_rsp
from ghzrsp.sampling import random_angles2, random_angles4, random_unit_vector, rng_for


def backends():
    mods = {"python": _pykernels}
    try:
        mods["cython"] = importlib.import_module("ghzrsp._ckernels")
    except ImportError:
        pass
    return mods


def cases(rng):
    ghz4 = random_unit_vector(rng, 64)
    u4 = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))[0]
    ghz8 = random_unit_vector(rng, 512)
    u8 = np.linalg.qr(rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8)))[0]
    v2, t2 = random_unit_vector(rng, 2), random_unit_vector(rng, 2)
    perms2 = np.array(list(itertools.permutations(range(2))), dtype=np.intp)
    v3, t3 = random_unit_vector(rng, 3), random_unit_vector(rng, 3)
    perms3 = np.array(list(itertools.permutations(range(3))), dtype=np.intp)
    return {
        "apply_local d=4 x3": lambda k: k.apply_local(ghz4, (4, 4, 4), 1, u4),
        "apply_local d=8 x3": lambda k: k.apply_local(ghz8, (8, 8, 8), 1, u8),
        "project d=4 x3": lambda k: k.project(ghz4, (4, 4, 4), 0, u4),
        "project d=8 x3": lambda k: k.project(ghz8, (8, 8, 8), 0, u8),
        "monomial_search d=2 grid 360": lambda k: k.monomial_search(v2, t2, perms2, 360),
        "monomial_search d=3 grid 36": lambda k: k.monomial_search(v3, t3, perms3, 36),
    }


def time_call(fn, repeat):
    n, _ = timeit.Timer(fn).autorange()
    return min(timeit.Timer(fn).repeat(repeat, n)) / n


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--json", action="store_true", help="emit results as JSON")
    args = p.parse_args(argv)

    rng = rng_for(0)
    mods = backends()
    rows = []
    for name, call in cases(rng).items():
        row = {"case": name}
        for label, mod in mods.items():
            row[label] = time_call(lambda: call(mod), args.repeat)
        rows.append(row)

    # end-to-end numbers use whichever backend ghzrsp.kernels selected
    a2, a4 = random_angles2(rng), random_angles4(rng)
    rows.append({"case": "run_qubit_rsp enumerate (active)",
                 "active": time_call(lambda: run_qubit_rsp(a2, Enumerate()), args.repeat)})
    rows.append({"case": "run_qudit_rsp d=4 enumerate (active)",
                 "active": time_call(lambda: run_qudit_rsp(4, a4, Enumerate()), args.repeat)})

    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'case':<38}{'python (us)':>14}{'cython (us)':>14}{'speedup':>10}")
    for row in rows:
        if "active" in row:
            print(f"{row['case']:<38}{row['active'] * 1e6:>14.1f}")
            continue
        py, cy = row["python"] * 1e6, row.get("cython")
        cy_s = f"{cy * 1e6:>14.1f}" if cy is not None else f"{'n/a':>14}"
        sp = f"{row['python'] / cy:>9.1f}x" if cy else f"{'':>10}"
        print(f"{row['case']:<38}{py:>14.1f}{cy_s}{sp}")


if __name__ == "__main__":
    main()
