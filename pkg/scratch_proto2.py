"""Tie-averaged subgradient with annealed tie width on the same instance."""
import sys, time
sys.path.insert(0, "src")
import numpy as np


def make_objective(k, n):
    def obj(z, tau):
        F = z.reshape(k, n)
        nf = np.linalg.norm(F)
        if nf == 0:
            return -np.inf, np.zeros_like(z)
        U, s, Vt = np.linalg.svd(F, full_matrices=False)
        s1 = s[0]
        # softmax weights over near-maximal singular values
        w = np.exp((s - s1) / max(tau * s1, 1e-300))
        w /= w.sum()
        gD = (U * (w / np.maximum(s, 1e-300))) @ Vt  # sum_i w_i u_i v_i^T / s_i... careful
        # d log sigma_smooth = sum_i w_i d log sigma_i = sum_i (w_i / s_i) u_i v_i^T
        g = F / nf**2 - gD
        return np.log(nf) - np.log(s1), g.ravel()
    return obj


def run_single(objective, x0, iters=2000, step0=0.25, tau0=0.3, tau_end=1e-16):
    x = x0 / np.linalg.norm(x0)
    t = step0
    decay = (tau_end / tau0) ** (1.0 / iters)
    tau = tau0
    val, g = objective(x, tau)
    best_val, best_x = val, x.copy()
    stall = 0
    for it in range(iters):
        tau *= decay
        gt = g - np.dot(g, x) * x
        gn = np.linalg.norm(gt)
        if gn == 0:
            break
        y = x + (t / gn) * gt
        y /= np.linalg.norm(y)
        vy, gy = objective(y, tau)
        if vy > val:
            x, val, g = y, vy, gy
            t *= 1.2
            if val > best_val:
                best_val, best_x = val, y.copy()
            stall = 0
        else:
            t *= 0.5
            stall += 1
            # refresh gradient at current point with the new tau
            _, g = objective(x, tau)
        if t < 1e-15:
            break
    return best_val, best_x


t0 = time.time()
worst = 0.0
rng = np.random.default_rng(5)
for n in range(1, 5):
    for k in range(1, 7):
        obj = make_objective(k, n)
        best = -np.inf
        for s in range(6):
            x0 = np.random.default_rng(100 + s).standard_normal(k * n)
            val, _ = run_single(obj, x0)
            best = max(best, val)
        got = np.exp(best)
        want = np.sqrt(min(k, n))
        rel = abs(got - want) / want
        worst = max(worst, rel)
        flag = " <-- " if rel > 1e-9 else ""
        print(f"n={n} k={k}: got {got:.12f} want {want:.12f} rel {rel:.2e}{flag}")
print("worst rel:", worst, "time:", time.time() - t0)
