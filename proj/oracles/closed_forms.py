# Term-by-term evaluation of the straight-line and normal closed-form bounds.
from mpmath import mp, mpf, sqrt, pi

mp.dps = 50


def straightline(x):
    n = len(x)
    xb = sum(map(mpf, x)) / n
    c = [mpf(v) - xb for v in x]
    s2 = sum(v**2 for v in c)
    s3 = sum(abs(v) ** 3 for v in c)
    s4 = sum(v**4 for v in c)
    t1 = (sqrt(2 / mpf(n)) + sqrt(2 * s4) / s2) / 4
    t2 = 1 / sqrt(2 * mpf(n))
    t3 = 8 / (3 * sqrt(pi)) * (1 / sqrt(mpf(n)) + s3 / s2 ** mpf(1.5))
    return t1, t2, t3, t1 + t2 + t3


def normal(n, s2):
    n, s2 = mpf(n), mpf(s2)
    rn = sqrt(n)
    k2 = mpf(5) / 2 / rn
    k3 = 19 / rn
    tail = 8 * (1 + 2 * s2) / (n * s2)
    k1h = 4 * sqrt(2) / rn
    a = mpf(3) / 2 + s2 / 4
    env = 4 / rn * (sqrt(2) + sqrt(mpf(3) / 2) + 16 * sqrt(2) * sqrt(1 / n + s2 / 4)) + 32 / rn * sqrt(
        1 + 648 * (a**2 + 3 / n**2))
    return k2, k3, tail, k1h, env, k2 + k3 + tail + k1h + env


for x in [(-3, -1, 1, 3), (0, 1, 2, 3, 4, 10), (-2.5, 0.5, 0.75, 4)]:
    print("straightline", x, [mp.nstr(v, 22) for v in straightline(x)])
for n, s2 in [(10**4, 1), (100, 1), (50, 2.5), (10**6, 0.3)]:
    print("normal", n, s2, [mp.nstr(v, 22) for v in normal(n, s2)])
