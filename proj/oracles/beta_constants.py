# Beta constants, sample-size gate and the corollary summands, 40 digits.
from mpmath import mp, mpf, psi, sqrt, pi, floor, matrix, eigsy, diag

mp.dps = 40


def P(m, z):
    return psi(m, mpf(z))


def consts(a, b):
    a, b = mpf(a), mpf(b)
    m = min(a, b)
    eps = m / 2
    d = P(1, a) * P(1, b) - P(1, a + b) * (P(1, a) + P(1, b))
    C1 = lambda x, y: P(3, x) + P(3, x + y) + 3 * P(1, x) ** 2 + 3 * P(1, x + y) ** 2
    C2 = lambda x, y: P(1, x) - P(1, x + y) + sqrt(d)
    C3 = lambda x, y: C1(x, y) * C2(y, x) ** 2
    C4 = lambda x, y: 6 * x / (y - eps) ** 4 + x * pi**4 / 15 + 6 / (x + y - eps) ** 3 + mpf("7.26")
    MB = max(P(1, a + b), P(1, m) - P(1, a + b)) / d
    brace = (P(1, b) + sqrt(d)) * C4(b, a) + (P(1, a) + sqrt(d)) * C4(a, b)
    c2 = C2(a, b) + C2(b, a)
    p = P(1, a + b)

    def gammaB(n):
        n = mpf(n)
        f = 4 * MB / (sqrt(n) * d * c2) * (sqrt(C2(b, a) ** 4 * C1(a, b) + p**4 * C1(b, a)) + sqrt(
            C2(a, b) ** 4 * C1(b, a) + p**4 * C1(a, b)))
        s = MB * sqrt(24) / (sqrt(n) * d * c2) * sqrt(p**2 * (C3(a, b) + C3(b, a)) + 2 * sqrt(C1(a, b) * C1(b, a)) * (
            p**4 + C2(a, b) ** 2 * C2(b, a) ** 2))
        return f + s + (P(1, b) + P(1, a) - 2 * p) / d

    def omegaB(n):
        n = mpf(n)
        return 1 - 8 * MB / (n * eps**2) - 2 * MB * brace / sqrt(n * d * c2)

    T = m * MB * brace / (2 * sqrt(d * c2))
    rhs = 4 / m**2 * (T + sqrt(T**2 + 8 * MB)) ** 2

    def summands(n):
        n = mpf(n)
        rn = sqrt(n)
        dc = d * c2
        t1 = 2 / (rn * dc) * (sqrt(C2(b, a) ** 4 * C1(a, b) + p**4 * C1(b, a)) + sqrt(C2(a, b) ** 4 * C1(b, a) + p**4 * C1(a, b)))
        t2 = sqrt(6) / (rn * dc) * sqrt(p**2 * (C3(a, b) + C3(b, a)) + 2 * sqrt(C1(a, b) * C1(b, a)) * (p**4 + C2(a, b) ** 2 * C2(b, a) ** 2))
        t3 = 32 * mpf(8) ** (mpf(3) / 4) / (3 * rn * dc ** mpf(1.5)) * ((C2(b, a) ** 3 + p**3) * C1(a, b) ** (mpf(3) / 4) + (C2(a, b) ** 3 + p**3) * C1(b, a) ** (mpf(3) / 4))
        t4 = 8 * gammaB(n) / (n * m**2 * omegaB(n))
        t5 = gammaB(n) * brace / (2 * rn * omegaB(n) * sqrt(dc))
        return [t1, t2, t3, t4, t5]

    return dict(delta=d, C1ab=C1(a, b), C1ba=C1(b, a), C2ab=C2(a, b), C2ba=C2(b, a), C3ab=C3(a, b), C3ba=C3(b, a),
                C4ab=C4(a, b), C4ba=C4(b, a), MB=MB, rhs=rhs, nmin=int(floor(rhs)) + 1, gammaB=gammaB, omegaB=omegaB,
                summands=summands)


for a, b in [(1, 1), (2, 3)]:
    c = consts(a, b)
    print(f"Beta({a},{b})")
    for k in ["delta", "C1ab", "C1ba", "C2ab", "C2ba", "C3ab", "C3ba", "C4ab", "C4ba", "MB", "rhs"]:
        print(f"  {k} = {mp.nstr(c[k], 25)}")
    print(f"  nmin = {c['nmin']}")
    N = 2 * c["nmin"]
    print(f"  gammaB(2nmin) = {mp.nstr(c['gammaB'](N), 25)}  omegaB(2nmin) = {mp.nstr(c['omegaB'](N), 25)}")
    print(f"  omegaB(nmin-1) = {mp.nstr(c['omegaB'](c['nmin'] - 1), 10)}  omegaB(nmin) = {mp.nstr(c['omegaB'](c['nmin']), 10)}")
    print(f"  mse bound(2nmin) = {mp.nstr(sqrt(c['gammaB'](N) / (N * c['omegaB'](N))), 25)}")
    print("  summands(2nmin) =", [mp.nstr(v, 22) for v in c["summands"](N)])

# Beta(1,1) Fisher and its inverse square root by symmetric eigendecomposition.
a = b = mpf(1)
I = matrix([[P(1, a) - P(1, a + b), -P(1, a + b)], [-P(1, a + b), P(1, b) - P(1, a + b)]])
E, Q = eigsy(I)
R = Q * diag([1 / sqrt(e) for e in E]) * Q.T
print("beta(1,1) invsqrt fisher", [mp.nstr(R[i, j], 25) for i in range(2) for j in range(2)])
a, b = mpf(2), mpf(3)
I = matrix([[P(1, a) - P(1, a + b), -P(1, a + b)], [-P(1, a + b), P(1, b) - P(1, a + b)]])
E, Q = eigsy(I)
R = Q * diag([1 / sqrt(e) for e in E]) * Q.T
print("beta(2,3) invsqrt fisher", [mp.nstr(R[i, j], 25) for i in range(2) for j in range(2)])
