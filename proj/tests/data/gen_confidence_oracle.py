# Regenerates confidence_oracle.csv with 40-digit mpmath arithmetic.
# Usage: python3 gen_confidence_oracle.py > confidence_oracle.csv
import random

import mpmath as mp

mp.mp.dps = 40
rng = random.Random(20240611)


def zeta(t, d):
    d = mp.mpf(d)
    return mp.log(1 / d) + 3 * mp.log(mp.log(1 / d)) + mp.mpf(3) / 2 * mp.log(mp.log(mp.e * t / 2))


print("t,delta,sigma_sq_p,zeta,phi")
for i in range(1000):
    t = rng.choice([1, 2, 3, 4, 5, 10, 50, 100]) if i < 100 else int(10 ** rng.uniform(0, 7))
    delta = float(10 ** rng.uniform(-8, -1))
    if i % 50 == 0:
        delta = 0.1
    s = float(2 ** rng.uniform(-3, 3))
    z = zeta(t, delta)
    p = mp.sqrt(2 * mp.mpf(s) * z / t)
    print(f"{t},{delta!r},{s!r},{mp.nstr(z, 25)},{mp.nstr(p, 25)}")
