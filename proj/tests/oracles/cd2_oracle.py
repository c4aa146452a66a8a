"""Reference values for the discrepancy tests, computed with exact rationals.

Run: python3 tests/oracles/cd2_oracle.py
"""
from fractions import Fraction as F

TABLE_U20 = [
    [16, 18, 12, 19, 1, 10, 9, 4, 2, 14, 6, 15, 5, 20, 11, 13, 8, 7, 3, 17],
    [15, 19, 1, 3, 9, 7, 20, 13, 18, 10, 16, 5, 6, 12, 14, 17, 4, 11, 2, 8],
]


def cd2_squared(points):
    n, s = len(points), len(points[0])
    half = F(1, 2)
    first = F(13, 12) ** s
    second = F(0)
    for row in points:
        prod = F(1)
        for x in row:
            z = abs(x - half)
            prod *= 1 + z / 2 - z * z / 2
        second += prod
    third = F(0)
    for a in points:
        for b in points:
            prod = F(1)
            for xa, xb in zip(a, b):
                prod *= 1 + abs(xa - half) / 2 + abs(xb - half) / 2 - abs(xa - xb) / 2
            third += prod
    return first - 2 * second / n + third / (n * n)


if __name__ == "__main__":
    q = 20
    pts = [[F(2 * u - 1, 2 * q) for u in row] for row in zip(*TABLE_U20)]
    sq = cd2_squared(pts)
    print("table U20 cd2^2 =", repr(float(sq)), "cd2 =", repr(float(sq) ** 0.5))
    for s in (1, 2, 3, 5):
        v = cd2_squared([[F(1, 2)] * s])
        print("center s=%d cd2^2=%s" % (s, v))
