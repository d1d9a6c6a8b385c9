"""Time each kernel under the numba and numpy implementations.

    python benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

Shapes mirror the desk-mode hot loops (batch-1 conv/pool on 28x28, Adam over
the EWGN hypernet output block, a 60k shuffle, PCA on a 64x64 Gram matrix).
``--end-to-end`` also times full training steps in subprocesses with
``EWGN_BACKEND`` set to each value, since the backend is fixed at import.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from ewgn import kernels

STEP_SNIPPET = """
import time, numpy as np
from ewgn.networks import build_model
from ewgn.kernels import BACKEND
r = np.random.default_rng(0)
x = r.uniform(size=(50, 784)).astype(np.float32)
for kind in ("mlp", "cnn", "ewgn"):
    m = build_model(kind, "desk", seed=0)
    opt = m.make_optimizer("adam", 1e-3)
    m.train_step(x[0], 3, opt)  # compile / warm caches
    t0 = time.perf_counter()
    for i in range(50):
        m.train_step(x[i], i % 20, opt)
    print(f"{BACKEND:<6s} {kind + ' train step':<24s} {(time.perf_counter() - t0) / 50 * 1e3:9.3f} ms")
"""


def cases(r: np.random.Generator):
    f32 = np.float32
    x = r.uniform(size=(1, 1, 28, 28)).astype(f32)
    w = r.normal(size=(16, 1, 3, 3)).astype(f32)
    b = np.zeros(16, f32)
    pooled_in = r.normal(size=(1, 16, 26, 26)).astype(f32)
    gy = r.normal(size=(1, 16, 26, 26)).astype(f32)
    big = 64 * 51_540
    p, g = r.normal(size=big).astype(f32), r.normal(size=big).astype(f32)
    m, v = np.zeros(big, f32), np.zeros(big, f32)
    left, right = r.normal(size=64).astype(f32), r.normal(size=51_540).astype(f32)
    mat = p.reshape(64, 51_540)
    mm, vv = m.reshape(64, 51_540), v.reshape(64, 51_540)
    empty = np.empty(0, f32)
    u = r.uniform(size=59_999)
    sym = r.normal(size=(64, 64))
    sym = sym @ sym.T
    acc = np.zeros((64, 51_540))
    return {
        "conv2d_forward 1x28x28->16": lambda k: k.conv2d_forward(x, w, b, 1),
        "conv2d_backward": lambda k: k.conv2d_backward(gy, x, w, 1),
        "maxpool_forward 16x26x26": lambda k: k.maxpool_forward(pooled_in, 2, 2),
        "adam_update 3.3M": lambda k: k.adam_update(p, g, m, v, 1e-3, 0.9, 0.999, 1e-8, 2, empty, empty),
        "adam_update_outer 64x51540": lambda k: k.adam_update_outer(mat, left, right, mm, vv, 1e-3, 0.9, 0.999,
                                                                    1e-8, 2, empty, empty),
        "fisher_yates 60000": lambda k: k.fisher_yates(u),
        "jacobi_eigh 64x64": lambda k: k.jacobi_eigh(sym.copy(), 1e-13, 60),
        "accumulate_outer_sq 64x51540": lambda k: k.accumulate_outer_sq(acc, left, right),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--end-to-end", action="store_true")
    args = parser.parse_args(argv)
    impls = {"numpy": kernels.numpy_impl}
    if kernels.numba_impl is not None:
        impls["numba"] = kernels.numba_impl
    table = cases(np.random.default_rng(0))
    print(f"{'kernel':<30s}" + "".join(f"{n + ' (ms)':>14s}" for n in impls) + f"{'speedup':>10s}")
    for name, fn in table.items():
        times = {}
        for impl_name, impl in impls.items():
            fn(impl)  # warm-up / JIT compile
            times[impl_name] = min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat)) * 1e3
        speed = times["numpy"] / times["numba"] if "numba" in times else float("nan")
        print(f"{name:<30s}" + "".join(f"{t:14.3f}" for t in times.values()) + f"{speed:9.1f}x")
    sys.stdout.flush()
    if args.end_to_end:
        for backend in impls:
            env = dict(os.environ, EWGN_BACKEND=backend)
            subprocess.run([sys.executable, "-c", STEP_SNIPPET], env=env, check=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
