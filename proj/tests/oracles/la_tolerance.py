"""Calibrates the tolerance for the loss-with-mixture-weight vs 2 pi0 pi1 (1 - AUC) check.

The two agree exactly only for calibrated scores in the continuous limit.
Datasets: scores q ~ U(0, 1), tie-free; labels assigned by error diffusion in
ascending score order, so the running count of class 1 tracks the running sum
of q and the sample is calibrated up to rounding. The residual gap is then a
pure discretization effect, gap * min(n0, n1) stays bounded, and the test uses

    tol = C / min(n0, n1)

with C set to twice the worst case found here. With independent Bernoulli(q)
labels the gap is sampling noise of order n^-1/2 instead, and no O(1/n)
tolerance applies (printed for comparison).

    python3 tests/oracles/la_tolerance.py
"""
import numpy as np


def substituted_loss(s, y):
    pi0 = (y == 0).mean()
    pi1 = 1 - pi0
    s0, s1 = s[y == 0], s[y == 1]
    f0 = (s0[None, :] <= s[:, None]).mean(axis=1)
    f1 = (s1[None, :] <= s[:, None]).mean(axis=1)
    return np.mean(s * pi0 * (1 - f0) + (1 - s) * pi1 * f1)


def l_a(s, y):
    s0, s1 = s[y == 0], s[y == 1]
    pi0 = (y == 0).mean()
    pairs = (s0[:, None] < s1[None, :]).sum() + 0.5 * (s0[:, None] == s1[None, :]).sum()
    return 2 * pi0 * (1 - pi0) * (1 - pairs / (len(s0) * len(s1)))


def diffusion_labels(q):
    y = np.zeros(len(q), dtype=int)
    acc = 0.0
    for i in np.argsort(q):
        acc += q[i]
        if acc >= 0.5:
            y[i] = 1
            acc -= 1.0
    return y


def scaled_gap(q, y):
    return abs(substituted_loss(q, y) - l_a(q, y)) * min((y == 0).sum(), (y == 1).sum())


def main():
    rng = np.random.default_rng(20240601)
    worst = 0.0
    for n, reps in [(50, 300), (200, 300), (800, 60)]:
        gaps = [scaled_gap(q, diffusion_labels(q)) for q in (rng.uniform(size=n) for _ in range(reps))]
        iid = []
        for _ in range(reps):
            q = rng.uniform(size=n)
            iid.append(scaled_gap(q, (rng.uniform(size=n) < q).astype(int)))
        worst = max(worst, max(gaps))
        print(f"n={n:4d} diffusion max {max(gaps):.4f} mean {np.mean(gaps):.4f} | "
              f"bernoulli max {max(iid):.4f} mean {np.mean(iid):.4f}")
    print(f"worst scaled gap {worst:.4f}; C = {2 * worst:.4f} (tests pin C = 0.28)")


if __name__ == "__main__":
    main()
