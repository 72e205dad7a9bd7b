"""Independent high-precision oracles for the frozen expected values in the C++ tests.

Everything here is computed with mpmath adaptive quadrature directly from the
defining integrals; nothing goes through incomplete-beta identities.

    python3 tests/oracles/freeze_values.py
"""
import mpmath as mp

mp.mp.dps = 40


def beta_pdf(c, a, b):
    norm = mp.quad(lambda u: u ** (a - 1) * (1 - u) ** (b - 1), [0, 0.5, 1])
    return c ** (a - 1) * (1 - c) ** (b - 1) / norm


def cdf_le(scores, c):
    return mp.mpf(sum(1 for s in scores if s <= c)) / len(scores)


def calibrated_min_loss(c, pi0, s0, s1):
    return c * pi0 * (1 - cdf_le(s0, c)) + (1 - c) * (1 - pi0) * cdf_le(s1, c)


def optimal_min_loss(c, pi0, s0, s1):
    cands = [(0, 0)] + [(cdf_le(s0, t), cdf_le(s1, t)) for t in sorted(set(s0 + s1))]
    return min(c * pi0 * (1 - f0) + (1 - c) * (1 - pi0) * f1 for f0, f1 in cands)


def envelope_kinks(pi0, s0, s1):
    cands = [(0, 0)] + [(cdf_le(s0, t), cdf_le(s1, t)) for t in sorted(set(s0 + s1))]
    lines = [((1 - pi0) * f1, pi0 * (1 - f0) - (1 - pi0) * f1) for f0, f1 in cands]
    kinks = []
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            (a1, b1), (a2, b2) = lines[i], lines[j]
            if b1 != b2:
                c = (a2 - a1) / (b1 - b2)
                if 0 < c < 1:
                    kinks.append(c)
    return kinks


def expected_loss(loss, pi0, a, b, s0, s1):
    pts = sorted(set([0, 1] + list(s0) + list(s1) + envelope_kinks(pi0, s0, s1)))
    return mp.quad(lambda c: loss(c, pi0, s0, s1) * beta_pdf(c, a, b), pts)


def reference_loss(pi0, a, b):
    pi1 = 1 - pi0
    return pi0 * mp.quad(lambda c: c * beta_pdf(c, a, b), [0, pi1]) + \
        pi1 * mp.quad(lambda c: (1 - c) * beta_pdf(c, a, b), [pi1, 1])


def nested_uncertain_h(s0, s1):
    from scipy import integrate, special

    def step(scores, c):
        return sum(1 for s in scores if s <= c) / len(scores)

    pts = sorted(set(s0 + s1))

    def ratio(p0):
        p1 = 1 - p0
        a, b = 2 - p0, 1 + p0
        norm = special.beta(a, b)
        w = lambda c: c ** (a - 1) * (1 - c) ** (b - 1) / norm
        loss = lambda c: (c * p0 * (1 - step(s0, c)) + (1 - c) * p1 * step(s1, c)) * w(c)
        edges = [0.0] + pts + [1.0]
        big_l = sum(integrate.quad(loss, lo, hi, epsabs=1e-15, epsrel=1e-13)[0]
                    for lo, hi in zip(edges[:-1], edges[1:]))
        ref = p0 * integrate.quad(lambda c: c * w(c), 0, p1, epsabs=1e-15, epsrel=1e-13)[0] + \
            p1 * integrate.quad(lambda c: (1 - c) * w(c), p1, 1, epsabs=1e-15, epsrel=1e-13)[0]
        return big_l / ref

    val, err = integrate.quad(lambda p: ratio(p) * 6 * p * (1 - p), 0, 1,
                              points=[0.5], epsabs=1e-13, epsrel=1e-12, limit=200)
    return mp.mpf(1 - val)


def main():
    out = {}
    out["beta_pdf(0.3;1.7,1.3)"] = beta_pdf(mp.mpf("0.3"), mp.mpf("1.7"), mp.mpf("1.3"))
    a, b = mp.mpf("2.5"), mp.mpf("1.5")
    out["I_0.3(2.5,1.5)"] = mp.quad(lambda c: beta_pdf(c, a, b), [0, mp.mpf("0.3")])
    a = b = mp.mpf("1.5")
    out["m0(0.5;1.5,1.5)"] = mp.quad(lambda c: c * beta_pdf(c, a, b), [0, 0.5])
    out["m1(0.5;1.5,1.5)"] = mp.quad(lambda c: (1 - c) * beta_pdf(c, a, b), [0.5, 1])
    out["pointwise(0.3,y=0;1.5,1.5)"] = mp.quad(lambda c: c * beta_pdf(c, a, b), [0, 0.3])

    s0 = [mp.mpf("0.1"), mp.mpf("0.4")]
    s1 = [mp.mpf("0.3"), mp.mpf("0.9")]
    half = mp.mpf("0.5")
    lc = expected_loss(calibrated_min_loss, half, a, b, s0, s1)
    lo = expected_loss(optimal_min_loss, half, a, b, s0, s1)
    lr = reference_loss(half, a, b)
    out["golden L calibrated"] = lc
    out["golden L optimal"] = lo
    out["golden L_ref"] = lr
    out["golden H calibrated"] = 1 - lc / lr
    out["golden H optimal"] = 1 - lo / lr

    # Prior-uncertain H on the golden fixture, v = Beta(2,2) and w(c|pi0) = Beta(2-pi0, 1+pi0).
    # Nested adaptive quadrature in double precision (scipy); the beta normalizer
    # comes from scipy.special.beta, not from any incomplete-beta routine.
    out["golden H uncertain calibrated"] = nested_uncertain_h([0.1, 0.4], [0.3, 0.9])

    for k, v in out.items():
        print(f"{k:32s} {mp.nstr(v, 17)}")


if __name__ == "__main__":
    main()
