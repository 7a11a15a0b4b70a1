# Exact and majorant K-term values for the normal model, theta0 = (mu, s2),
# eps = s2/2 unless given. Contributions are per unit norm (already / sqrt n).
from mpmath import mp, mpf, sqrt, pi, quad, exp, inf

mp.dps = 40


def terms(n, s2, eps=None):
    n, s2 = mpf(n), mpf(s2)
    eps = s2 / 2 if eps is None else mpf(eps)
    rn = sqrt(n)
    sd = sqrt(s2)
    # u = A s with A = diag(sd, sqrt2 s2): u1 = Z, u2 = (Z^2 - 1)/sqrt2
    EZ = lambda k: quad(lambda z: z**k * exp(-z * z / 2) / sqrt(2 * pi), [-inf, inf])
    var_u1sq = EZ(4) - 1
    u2sq4 = (EZ(8) - 4 * EZ(6) + 6 * EZ(4) - 4 * EZ(2) + 1) / 4
    var_u2sq = u2sq4 - 1
    cross = (EZ(6) - 2 * EZ(4) + EZ(2)) / 2  # E u1^2 u2^2, E u1 u2 = 0
    k2d = (sqrt(var_u1sq) + sqrt(var_u2sq)) / (4 * rn) * sqrt(n) / rn  # sum_i gives n, K2 has 1/(4 sqrt n)
    k2c = sqrt(cross) / (2 * rn) * sqrt(n) / rn
    # K1 hessian part: sum_k colsum_k sum_j sqrt(E D_j^2 * n Var d2_jk)
    ED = [s2 / n, s2**2 / n * (2 - 1 / n)]
    V = [[0, 1 / s2**3], [1 / s2**3, 2 / s2**4]]
    w = [sd, sqrt(2) * s2]
    k1h = sum(w[k] * sum(sqrt(ED[j] * n * V[j][k]) for j in range(2)) for k in range(2)) / rn
    mse = s2 / n + s2**2 * (2 * n - 1) / n**2
    tail = 2 * mse / eps**2
    e1 = 8 * 2 * sqrt(2) / sqrt(pi) / sd**3
    e2 = mpf(15) / s2**3
    k3 = 4 * (w[0] ** 3 * e1 + w[1] ** 3 * e2) * n / (12 * n) / rn
    g = s2 - eps
    first = s2**2 / g**2 * (sqrt(2) + sqrt(mpf(1.5)) + 8 * sqrt(2) * sd / g * sqrt(s2 / n + eps**2))
    q = eps + eps**2 + s2
    second = 4 * s2**3 / g**3 * sqrt(1 + 162 / g**2 * (q**2 + 3 * s2**2 / n**2))
    env = (first + second) / rn
    return dict(k2_diag=k2d, k2_cross=k2c, k1_hessian=k1h, k1_envelope=env, k3=k3, tail=tail,
                total=k2d + k2c + k1h + env + k3 + tail, mse=mse)


for n, s2 in [(50, 1), (500, 1), (10**4, 1), (200, 2.0)]:
    t = terms(n, s2)
    print(n, s2, {k: mp.nstr(v, 22) for k, v in t.items()})
print("k1 exact closed 3sqrt(2-1/n)+sqrt2 at n=50:", mp.nstr((3 * sqrt(2 - mpf(1) / 50) + sqrt(2)) / sqrt(50), 22))
