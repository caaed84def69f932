"""Random constructions shared by the unit and acceptance tests."""
import random

from slwords.algebra import GF, null_space
from slwords.tgraph import detc
from slwords.transvection import Transvection


def random_vector(F, n, rng):
    while True:
        v = tuple(rng.randrange(F.p) for _ in range(n))
        if any(v):
            return v


def random_in_span(F, basis, n, rng):
    """Random nonzero combination of ``basis`` (None if the span is 0)."""
    if not basis:
        return None
    for _ in range(100):
        cs = [rng.randrange(F.p) for _ in basis]
        x = tuple(sum(c * b[k] for c, b in zip(cs, basis)) % F.p for k in range(n))
        if any(x):
            return x
    return None


def random_transvection(F, n, rng) -> Transvection:
    v = random_vector(F, n, rng)
    return Transvection(F, v, random_in_span(F, null_space(F, [v], n), n, rng))


def chordless_cycle(F, k, rng, two_way=True, n=None, singular=None):
    """Random chordless cycle r_0 -> ... -> r_{k-1} -> r_0 in dimension n (default k+1).

    ``two_way`` makes every cycle edge two-way; otherwise every edge is
    one-way in the forward direction.  ``singular`` forces detc = 0 (True)
    or detc != 0 (False) when it is not None.
    """
    n = n or k + 1
    while True:
        vs = [random_vector(F, n, rng) for _ in range(k)]
        ok = True
        phis = []
        for i in range(k):
            nxt, prv = (i + 1) % k, (i - 1) % k
            zero = [vs[j] for j in range(k) if j not in (nxt, prv)]
            if not two_way:
                zero.append(vs[nxt])
            basis = null_space(F, zero, n)
            want = [vs[prv]] + ([vs[nxt]] if two_way else [])
            for _ in range(50):
                phi = random_in_span(F, basis, n, rng)
                if phi is None or all(sum(a * b for a, b in zip(phi, w)) % F.p for w in want):
                    break
            else:
                phi = None
            if phi is None:
                ok = False
                break
            phis.append(phi)
        if not ok:
            continue
        ts = [Transvection(F, v, phi) for v, phi in zip(vs, phis)]
        if not _shape_ok(ts, two_way):
            continue
        if singular is not None:
            ts = _force(F, ts, vs, n, singular, two_way)
            if ts is None:
                continue
        return ts


def _shape_ok(ts, two_way):
    k = len(ts)
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            want = j == (i + 1) % k or (two_way and i == (j + 1) % k)
            if ts[i].edge_to(ts[j]) != want:
                return False
    return True


def _force(F, ts, vs, n, singular, two_way):
    d = detc(ts)
    if not singular:
        return ts if d != 0 else None
    if d == 0:
        return ts
    k = len(ts)
    # move phi_0 along psi with psi(v_1) = 1 and psi zero on every other v_j
    others = [vs[j] for j in range(k) if j != 1]
    for psi in null_space(F, others, n):
        s = sum(a * b for a, b in zip(psi, vs[1])) % F.p
        if s == 0:
            continue
        psi = tuple(a * pow(s, -1, F.p) % F.p for a in psi)
        p0 = ts[0].phi
        t1 = [Transvection(F, ts[0].v, tuple((a + b) % F.p for a, b in zip(p0, psi)))] + ts[1:]
        slope = F.sub(detc(t1), d)
        if slope == 0:
            return None
        c = F.neg(F.div(d, slope))
        phi = tuple((a + c * b) % F.p for a, b in zip(p0, psi))
        if not any(phi):
            return None
        out = [Transvection(F, ts[0].v, phi)] + ts[1:]
        if _shape_ok(out, two_way) and detc(out) == 0:
            return out
        return None
    return None


def rng_for(*parts) -> random.Random:
    return random.Random("/".join(map(str, parts)))


__all__ = ["GF", "chordless_cycle", "random_in_span", "random_transvection", "random_vector", "rng_for"]
