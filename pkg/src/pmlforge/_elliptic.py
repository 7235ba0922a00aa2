"""Complete elliptic integral and Jacobi sn/cn/dn for real arguments.

Both routines take the complementary modulus ``kc = sqrt(1 - m)`` directly
so that nearly-singular moduli (``kc`` tiny, the wide-segment case) do not
lose digits forming ``1 - m``.
"""

import math

TOL = 1e-14
_MAX_STEPS = 64


def _agm_table(kc):
    a, b, c = 1.0, kc, math.sqrt(max(0.0, (1.0 - kc) * (1.0 + kc)))
    table = [(a, c)]
    for _ in range(_MAX_STEPS):
        if abs(c) <= TOL * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        table.append((a, c))
    return table


def ellipk_kc(kc):
    """K(m) with ``m = 1 - kc**2``, by the arithmetic-geometric mean."""
    if not 0.0 < kc <= 1.0:
        raise ValueError("complementary modulus must lie in (0, 1]")
    a, _ = _agm_table(kc)[-1]
    return math.pi / (2.0 * a)


def ellipj_kc(u, kc):
    """(sn, cn, dn)(u | m) with ``m = 1 - kc**2`` via descending Landen steps."""
    if kc == 1.0:
        return math.sin(u), math.cos(u), 1.0
    table = _agm_table(kc)
    n = len(table) - 1
    a_n = table[-1][0]
    phi = (2.0**n) * a_n * u
    for i in range(n, 0, -1):
        a_i, c_i = table[i]
        phi = 0.5 * (phi + math.asin(c_i * math.sin(phi) / a_i))
    sn = math.sin(phi)
    cn = math.cos(phi)
    # kc^2 + m cn^2 has no cancellation, unlike 1 - m sn^2 near u = K
    m = (1.0 - kc) * (1.0 + kc)
    dn = math.sqrt(kc * kc + m * cn * cn)
    return sn, cn, dn
