"""Regenerates the demo fixtures in this directory.

    python3 demo/make_demos.py

rank_reversal.csv      two classifiers that H and AUC rank in opposite order
monotone.csv           one classifier and a strictly increasing transform of it
confident_class1.csv   class-1 scores piled up near 1; rank-uniform evaluation
                       (the AUC) and H at a fixed prior disagree on the order

H here is computed by adaptive quadrature over the intervals between scores,
independently of the C++ code.
"""
import os

import numpy as np
from scipy import integrate, special

HERE = os.path.dirname(os.path.abspath(__file__))


def auc(s, y):
    s0, s1 = s[y == 0], s[y == 1]
    diff = s1[:, None] - s0[None, :]
    return ((diff > 0).sum() + 0.5 * (diff == 0).sum()) / diff.size


def h_measure(s, y, pi0=None):
    s0, s1 = np.sort(s[y == 0]), np.sort(s[y == 1])
    if pi0 is None:
        pi0 = len(s0) / len(s)
    pi1 = 1 - pi0
    a, b = 1 + pi1, 1 + pi0
    norm = special.beta(a, b)

    def w(c):
        return c ** (a - 1) * (1 - c) ** (b - 1) / norm

    def loss(c):
        f0 = np.searchsorted(s0, c, side="right") / len(s0)
        f1 = np.searchsorted(s1, c, side="right") / len(s1)
        return (c * pi0 * (1 - f0) + (1 - c) * pi1 * f1) * w(c)

    edges = np.unique(np.concatenate([[0.0, 1.0], s]))
    big_l = sum(integrate.quad(loss, lo, hi, epsabs=1e-14, epsrel=1e-12)[0]
                for lo, hi in zip(edges[:-1], edges[1:]))
    ref = pi0 * integrate.quad(lambda c: c * w(c), 0, pi1, epsabs=1e-14)[0] + \
        pi1 * integrate.quad(lambda c: (1 - c) * w(c), pi1, 1, epsabs=1e-14)[0]
    return 1 - big_l / ref


def write(name, y, cols):
    with open(os.path.join(HERE, name), "w") as f:
        f.write("label," + ",".join(cols) + "\n")
        for i in range(len(y)):
            f.write(str(int(y[i])) + "," + ",".join(repr(float(cols[k][i])) for k in cols) + "\n")


def search(rng, y, draw, pi0=None, margin=0.03):
    for attempt in range(5000):
        a, b = draw(rng), draw(rng)
        a, b = np.round(a, 6), np.round(b, 6)
        ha, hb = h_measure(a, y, pi0), h_measure(b, y, pi0)
        if min(ha, hb) < 0.1:
            continue
        da = auc(a, y) - auc(b, y)
        dh = ha - hb
        if da * dh < 0 and abs(da) > margin and abs(dh) > margin:
            return a, b, da, dh
    raise RuntimeError("no reversal found")


def main():
    rng = np.random.default_rng(20240611)
    n0, n1 = 30, 30
    y = np.array([0] * n0 + [1] * n1)

    def beta_scores(r):
        # Random beta-distributed class conditionals.
        p = r.uniform(0.5, 6, size=4)
        return np.concatenate([r.beta(p[0], p[1], n0), r.beta(p[2], p[3], n1)]).clip(1e-6, 1 - 1e-6)

    a, b, da, dh = search(rng, y, beta_scores, margin=0.02)
    write("rank_reversal.csv", y, {"model_a": a, "model_b": b})
    print(f"rank_reversal: dAUC={da:+.4f} dH={dh:+.4f}")

    base = np.round(rng.uniform(0.02, 0.98, n0 + n1) * 0.5 + 0.3 * y, 6)
    write("monotone.csv", y, {"raw": base, "cubed": base ** 3})
    print("monotone: written")

    def confident(r):
        s0 = r.beta(r.uniform(1, 4), r.uniform(1, 4), n0)
        s1 = 1 - r.beta(r.uniform(0.3, 1), r.uniform(5, 40), n1)
        return np.concatenate([s0, s1]).clip(1e-6, 1 - 1e-6)

    a, b, da, dh = search(rng, y, confident, pi0=0.5)
    write("confident_class1.csv", y, {"model_a": a, "model_b": b})
    print(f"confident_class1 (pi0=0.5): dAUC={da:+.4f} dH={dh:+.4f}")


if __name__ == "__main__":
    main()
