# Reference polygamma/digamma values at 40 digits.
from mpmath import mp, polygamma, digamma, mpf

mp.dps = 40
for m, z in [(1, 2.5), (1, 0.1), (1, 37.25), (2, 7.0), (2, 0.3), (3, 0.3), (3, 5.0), (4, 1.75), (3, 2.0), (3, 3.0), (3, 5.0)]:
    print(f"polygamma({m}, {z}) = {mp.nstr(polygamma(m, mpf(z)), 25)}")
for z in [3.7, 0.01, 12.5, 1e-3, 150.0]:
    print(f"digamma({z}) = {mp.nstr(digamma(mpf(z)), 25)}")
