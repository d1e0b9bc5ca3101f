"""Input-distribution variants for the noise-free linear-target example."""
import numpy as np
from mlp_proto import train


def run(name, gen, seeds=(1, 7, 42, 123, 2026, 5, 11)):
    worst = 0.0
    vals = []
    for seed in seeds:
        X, y = gen(np.random.default_rng(seed + 9999))
        fwd, tr, te, hist = train(X, y, seed)
        rmse = float(np.sqrt(np.mean((fwd(X[te]) - y[te]) ** 2)))
        vals.append(rmse)
        worst = max(worst, rmse)
    print(f"{name:40s} worst {worst:.4f}  all {[round(v,3) for v in vals]}")


def mk(sar_hi, prec_hi, zero_frac):
    def gen(rng, n=500):
        sar = rng.uniform(0, sar_hi, n)
        stab = rng.integers(0, 3, n).astype(float)
        if zero_frac > 0:
            prec = np.where(rng.random(n) < zero_frac, 0.0, rng.uniform(0, prec_hi, n))
        else:
            prec = rng.uniform(0, prec_hi, n)
        X = np.column_stack([sar, stab, prec])
        y = 0.9 * sar + 0.5 + 0.3 * prec
        return X, y
    return gen


run("sar U[0,25] prec zi U[0,10]", mk(25, 10, 0.7))
run("sar U[0,25] prec U[0,10]", mk(25, 10, 0.0))
run("sar U[0,15] prec U[0,5]", mk(15, 5, 0.0))
run("sar U[1,20] prec U[0,8]", mk(20, 8, 0.0))
run("sar U[0,10] prec U[0,4]", mk(10, 4, 0.0))
