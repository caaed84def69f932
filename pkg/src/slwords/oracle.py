"""Ground truth for small groups: subgroup closure, Cayley BFS, seeded instances.

Matrices over F_p are packed into one integer each (base-p digits, row
major) so that whole BFS layers can be multiplied and deduplicated with
numpy.  This is only used when p^(n^2) fits in 63 bits, which covers every
group small enough to enumerate anyway.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .algebra import GF, Field, Matrix, rank_of, random_sl
from .transvection import PreconditionError, Transvection

CLOSURE_CAP = 5_000_000
BFS_CAP = 5_000_000


class ClosureOverflow(RuntimeError):
    """The generated group has more elements than the configured cap."""

    def __init__(self, cap: int, reached: int):
        super().__init__(f"closure overflow: more than {cap} elements (reached {reached})")
        self.cap = cap
        self.reached = reached


def sl_order(n: int, p: int) -> int:
    out = p ** (n * (n - 1) // 2)
    for i in range(2, n + 1):
        out *= p ** i - 1
    return out


def sp_order(n: int, p: int) -> int:
    if n % 2:
        raise ValueError("symplectic groups need even dimension")
    m = n // 2
    out = p ** (m * m)
    for i in range(1, m + 1):
        out *= p ** (2 * i) - 1
    return out


class _Codec:
    def __init__(self, p: int, n: int):
        if p ** (n * n) >= 2 ** 63:
            raise PreconditionError(f"SL({n},{p}) is too large to enumerate")
        self.p, self.n = p, n
        self.weights = np.array([p ** k for k in range(n * n - 1, -1, -1)], dtype=np.int64)

    def encode(self, mats: np.ndarray) -> np.ndarray:
        return mats.reshape(len(mats), -1).astype(np.int64) @ self.weights

    def decode(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        digits = (codes[:, None] // self.weights[None, :]) % self.p
        return digits.reshape(len(codes), self.n, self.n)

    def to_matrix(self, F: Field, arr) -> Matrix:
        return Matrix(F, tuple(tuple(int(a) for a in r) for r in arr), raw=True)


def _arrays(gens, symmetric: bool = True) -> tuple[Field, int, list[np.ndarray]]:
    gens = list(gens)
    if not gens:
        raise PreconditionError("need at least one generator")
    F, n = gens[0].field, gens[0].n
    if F.p is None:
        raise PreconditionError("enumeration needs a finite field")
    mats = []
    for g in gens:
        if g.det() != F.one:
            raise PreconditionError("generators must have det = 1")
        mats.append(g)
        if symmetric:
            mats.append(g.inverse())
    arrs, seen = [], set()
    for m in mats:
        if m.key() not in seen and not m.is_identity():
            seen.add(m.key())
            arrs.append(np.array(m.rows, dtype=np.int64))
    return F, n, arrs


@dataclass
class GroupTable:
    """Element set of a finite matrix group, as sorted packed codes."""

    field: Field
    n: int
    codes: np.ndarray
    layers: list  # BFS layer sizes from the identity

    @property
    def size(self) -> int:
        return int(len(self.codes))

    def __len__(self):
        return self.size

    def __contains__(self, g: Matrix) -> bool:
        code = _Codec(self.field.p, self.n).encode(np.array([g.rows], dtype=np.int64))[0]
        i = np.searchsorted(self.codes, code)
        return bool(i < len(self.codes) and self.codes[i] == code)

    def matrices(self):
        c = _Codec(self.field.p, self.n)
        for row in c.decode(self.codes):
            yield c.to_matrix(self.field, row)


def _bfs(gens, cap: int, target: Matrix | None = None):
    """Layered BFS from 1 over gens and inverses (right multiplication).

    Returns (codes, layer sizes, last layer codes, distance of target).
    """
    F, n, arrs = _arrays(gens)
    p = F.p
    codec = _Codec(p, n)
    start = np.eye(n, dtype=np.int64)[None]
    seen = codec.encode(start)
    frontier = start
    layers = [1]
    last = seen
    tcode = None
    if target is not None:
        tcode = codec.encode(np.array([target.rows], dtype=np.int64))[0]
        if tcode == seen[0]:
            return seen, layers, last, 0
    while len(frontier):
        prods = np.concatenate([(frontier @ a) % p for a in arrs])
        codes = np.unique(codec.encode(prods))
        new = np.setdiff1d(codes, seen, assume_unique=True)
        if not len(new):
            break
        seen = np.union1d(seen, new)
        layers.append(int(len(new)))
        last = new
        if len(seen) > cap:
            raise ClosureOverflow(cap, int(len(seen)))
        if tcode is not None and np.any(new == tcode):
            return seen, layers, last, len(layers) - 1
        frontier = codec.decode(new)
    return seen, layers, last, None


def subgroup_closure(gens, cap: int = CLOSURE_CAP) -> GroupTable:
    """Exact element set of <gens>; raises ClosureOverflow past ``cap``."""
    F, n, arrs = _arrays(gens)
    if not arrs:
        return GroupTable(F, n, _Codec(F.p, n).encode(np.eye(n, dtype=np.int64)[None]), [1])
    codes, layers, _last, _d = _bfs(gens, cap)
    return GroupTable(F, n, codes, layers)


def _gens_of(X) -> list:
    if hasattr(X, "mats"):
        mats = list(X.mats)
        if X.group is not None:
            mats += [X.group.member(lam).matrix for lam in X.field.units()]
        return mats
    return list(X)


def bfs_diameter(X, cap: int = BFS_CAP) -> tuple[int, Matrix]:
    """Diameter of the undirected Cayley graph and one element at that distance."""
    gens = _gens_of(X)
    F, n, arrs = _arrays(gens)
    if not arrs:
        return 0, Matrix.identity(F, n)
    _codes, layers, last, _ = _bfs(gens, cap)
    codec = _Codec(F.p, n)
    return len(layers) - 1, codec.to_matrix(F, codec.decode(last[:1])[0])


def bfs_distance(X, g: Matrix, cap: int = BFS_CAP) -> int:
    """Word length of g over X u X^-1 u {1}; raises ValueError if g is not in <X>."""
    gens = _gens_of(X)
    F, n, arrs = _arrays(gens)
    if g.is_identity():
        return 0
    if not arrs:
        raise ValueError("target is not in the generated group")
    _codes, _layers, _last, d = _bfs(gens, cap, target=g)
    if d is None:
        raise ValueError("target is not in the generated group")
    return d


# seeded instances -------------------------------------------------------------

PROFILES = ("with_transvection", "with_group", "adversarial_minimal")
VERIFY_BY_CLOSURE = 600_000  # largest |SL(n,p)| verified by enumeration


class SamplingError(RuntimeError):
    pass


def random_transvection(F: Field, n: int, rng) -> Transvection:
    while True:
        phi = [rng.randrange(F.p) for _ in range(n)]
        v = [rng.randrange(F.p) for _ in range(n)]
        if not any(phi):
            continue
        # project v into ker(phi) along the first coordinate phi does not kill
        j = next(i for i, a in enumerate(phi) if a)
        s = sum(a * b for a, b in zip(phi, v)) % F.p
        v[j] = (v[j] - s * F.inv(phi[j])) % F.p
        if any(v):
            return Transvection.make(F, v, phi)


def generation_certificate(X, cap_rounds: int | None = None, closure_limit: int = VERIFY_BY_CLOSURE, cap_elements: int = 2000, cap_cycles: int = 5000) -> dict:
    """Decide whether X generates SL(n, p).

    Small groups are enumerated.  Otherwise the conjugates of the
    distinguished transvection under X are classified: an SL verdict proves
    generation; a completed closure without it proves the opposite (a normal
    subgroup of SL(n, p), n >= 3, containing a transvection is everything).
    ``generates`` is None when the closure outgrows ``cap_elements`` first.
    """
    from .gentest import classify
    from .pipeline.closure import conjugation_closure

    F, n = X.field, X.n
    order = sl_order(n, F.p)
    if order <= closure_limit:
        size = len(subgroup_closure(_gens_of(X), cap=order))
        return {"generates": size == order, "method": "closure", "size": size, "order": order}
    t = X.group.base if X.group is not None else X.transvections[X.distinguished]
    cap_rounds = cap_rounds if cap_rounds is not None else n * n

    overflow = []

    def ready(items):
        if len(items) > cap_elements:
            overflow.append(len(items))
            return True
        ts = [s for s, _ in items]
        if rank_of(F, [s.v for s in ts]) < n or rank_of(F, [s.phi for s in ts]) < n:
            return False
        from .tgraph import build_graph, strongly_connected

        G = build_graph(ts)
        return bool(G.one_way_edges()) and strongly_connected(G).connected

    cl = conjugation_closure(t, X, cap_rounds, predicate=ready, word=X.gen(0, 1) if X.mats else None)
    ts = cl.transvections
    if overflow:
        return {"method": "transvection-closure", "rounds": cl.rounds, "size": len(ts), "generates": None}
    v = classify(ts, cap_cycles=cap_cycles)
    complete = not cl.exited_early and cl.rounds < cap_rounds
    out = {"method": "transvection-closure", "rounds": cl.rounds, "size": len(ts), "verdict": v.verdict}
    if v.verdict == "SL":
        out["generates"] = True
    elif complete and v.verdict != "inconclusive":
        out["generates"] = False
    else:
        out["generates"] = None
    return out


def sample_genset(n: int, p: int, profile: str = "with_transvection", seed: int = 0, retries: int = 200, verify: bool = True):
    """Seeded generating set of SL(n, p) containing the profile's member.

    with_transvection: a transvection plus two random elements;
    with_group: a whole transvection group plus one random element;
    adversarial_minimal: one transvection and one random element.
    """
    from .pipeline.genset import GenSet

    if n < 3:
        raise PreconditionError("n >= 3 required")
    if profile not in PROFILES:
        raise ValueError(f"unknown profile {profile!r}")
    F = GF(p)
    rng = random.Random(f"{profile}/{n}/{p}/{seed}")
    for _ in range(retries):
        t = random_transvection(F, n, rng)
        if profile == "with_transvection":
            X = GenSet([t.matrix, random_sl(F, n, rng), random_sl(F, n, rng)], distinguished=0)
        elif profile == "with_group":
            X = GenSet([random_sl(F, n, rng)], group=t.group)
        else:
            X = GenSet([t.matrix, random_sl(F, n, rng)], distinguished=0)
        if not verify or generation_certificate(X)["generates"]:
            return X
    raise SamplingError(f"no generating set for SL({n},{p}) after {retries} tries")


# brute-force ground truth ---------------------------------------------------------


def all_subspaces(F: Field, n: int, dims=None):
    """Every subspace of F_p^n of the given dimensions, as RREF row bases."""
    from itertools import combinations, product

    dims = range(1, n) if dims is None else dims
    for d in dims:
        for piv in combinations(range(n), d):
            free = [(r, c) for r in range(d) for c in range(n) if c > piv[r] and c not in piv]
            for vals in product(range(F.p), repeat=len(free)):
                rows = [[0] * n for _ in range(d)]
                for r, c in enumerate(piv):
                    rows[r][c] = 1
                for (r, c), a in zip(free, vals):
                    rows[r][c] = a
                yield [tuple(r) for r in rows]


def invariant_subspace(gens) -> list | None:
    """A proper nonzero subspace fixed by every generator, or None (exhaustive)."""
    gens = list(gens)
    F, n = gens[0].field, gens[0].n
    for basis in all_subspaces(F, n):
        d = len(basis)
        if all(rank_of(F, basis + [g.apply(b)]) == d for g in gens for b in basis):
            return basis
    return None


class DistanceTable:
    """Word-length labels of every element of <X>, from one BFS."""

    def __init__(self, X, cap: int = BFS_CAP):
        gens = _gens_of(X)
        self.field, self.n, arrs = _arrays(gens)
        self.codec = _Codec(self.field.p, self.n)
        self.layers = [self.codec.encode(np.eye(self.n, dtype=np.int64)[None])]
        if arrs:
            p = self.field.p
            seen = self.layers[0]
            frontier = np.eye(self.n, dtype=np.int64)[None]
            while len(frontier):
                codes = np.unique(self.codec.encode(np.concatenate([(frontier @ a) % p for a in arrs])))
                new = np.setdiff1d(codes, seen, assume_unique=True)
                if not len(new):
                    break
                seen = np.union1d(seen, new)
                if len(seen) > cap:
                    raise ClosureOverflow(cap, int(len(seen)))
                self.layers.append(new)
                frontier = self.codec.decode(new)
        self.size = sum(len(x) for x in self.layers)

    @property
    def diameter(self) -> int:
        return len(self.layers) - 1

    def distance(self, g: Matrix) -> int:
        code = self.codec.encode(np.array([g.rows], dtype=np.int64))[0]
        for d, layer in enumerate(self.layers):
            i = np.searchsorted(layer, code)
            if i < len(layer) and layer[i] == code:
                return d
        raise ValueError("target is not in the generated group")
