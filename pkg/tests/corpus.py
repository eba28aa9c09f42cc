"""Fixed operator pairs shared by the psido tests and the acceptance run."""

import random

from weylalg.spectral import dixmier_pair
from weylalg.weyl import WeylOp

D, x = WeylOp.d(), WeylOp.x()

BASES = [
    D * D + x,
    D * D + x * x,
    D ** 3 + x * D + x,
    D + x * x,
    D * D - x ** 3,
]


def _poly_in(Q, coeffs):
    out, power = WeylOp.zero(), WeylOp.const(1)
    for c in coeffs:
        out = out + power.scale(c)
        power = power * Q
    return out


def centralizer_corpus(seed=7):
    """50 pairs ``(P, Q)``: polynomials in a fixed ``Q``, pairs built from
    ``L4, L6`` at ``a = 0`` and random ``P`` against the same ``Q``s.

    Every ``Q`` is monic, so the Schur normalization applies.
    """
    rng = random.Random(seed)
    pairs = []
    for Q in BASES:
        for _ in range(4):
            deg = rng.randint(1, 2)
            coeffs = [rng.randint(-3, 3) for _ in range(deg)] + [rng.choice([1, -1, 2])]
            pairs.append((_poly_in(Q, coeffs), Q))
    L4, L6 = dixmier_pair(0).P, dixmier_pair(0).Q
    pairs += [(L6, L4), (L4, L4), (L4 * L4 - L6, L4), (x, L4), (D, L4)]
    for k in range(25):
        Q = BASES[k % len(BASES)]
        terms = {(rng.randint(0, 3), rng.randint(0, 3)): rng.randint(-3, 3) or 1 for _ in range(3)}
        pairs.append((WeylOp(terms) + x, Q))
    return pairs


def truncation_for(P, Q):
    """``(N, M)`` large enough for the centralizer verdict to be determined."""
    return P.ord() + Q.ord() - 1, P.ord_x() + Q.ord_x() + 3
