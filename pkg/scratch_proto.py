"""Scratch prototype: ascent precision on pi_2^k(Id_l2^n) = sqrt(min(k,n))."""
import sys, time
sys.path.insert(0, "src")
import numpy as np
from pqsumming.ascent import AscentConfig, ascent_maximize


def make_objective(k, n):
    def obj(z):
        F = z.reshape(k, n)
        nf = np.linalg.norm(F)
        if nf == 0:
            return -np.inf, np.zeros_like(z)
        U, s, Vt = np.linalg.svd(F, full_matrices=False)
        s1 = s[0]
        # grad of log ||F||_F - log sigma1(F)
        g = F / nf**2 - np.outer(U[:, 0], Vt[0]) / s1
        return np.log(nf) - np.log(s1), g.ravel()
    return obj


t0 = time.time()
worst = 0.0
for n in range(1, 5):
    for k in range(1, 7):
        obj = make_objective(k, n)
        cfg = AscentConfig(starts=6, iters=3000, seed=17, patience=400)
        val, x = ascent_maximize(obj, k * n, cfg)
        got = np.exp(val)
        want = np.sqrt(min(k, n))
        rel = abs(got - want) / want
        worst = max(worst, rel)
        print(f"n={n} k={k}: got {got:.12f} want {want:.12f} rel {rel:.2e}")
print("worst rel:", worst, "time:", time.time() - t0)
