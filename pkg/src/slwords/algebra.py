"""Exact scalars, vectors and dense matrices over F_p and the rationals.

Scalars are stored raw: ``int`` residues in ``[0, p)`` for prime fields and
reduced :class:`fractions.Fraction` values for the rationals.  The
:class:`FieldElement` wrapper exists for callers that want operator syntax
with field checking; the matrix code works on raw values for speed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Vector = tuple  # column vector, element of V
Covector = tuple  # row vector, element of V*


class FieldMismatch(ValueError):
    pass


class SingularMatrix(ZeroDivisionError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """Either the prime field F_p or the rationals (``p is None``)."""

    __slots__ = ("p", "kind", "characteristic")

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.kind = "rationals" if p is None else "prime"
        self.characteristic = 0 if p is None else p

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def order(self) -> int | None:
        return self.p

    # raw scalar arithmetic -------------------------------------------------

    def coerce(self, x):
        if self.p is None:
            if isinstance(x, str):
                return Fraction(x)
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator == 1:
                return x.numerator % self.p
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        if isinstance(x, str):
            return self.coerce(Fraction(x))
        return int(x) % self.p

    @property
    def zero(self):
        return 0 if self.p is not None else Fraction(0)

    @property
    def one(self):
        return 1 if self.p is not None else Fraction(1)

    def add(self, a, b):
        return (a + b) % self.p if self.p is not None else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p is not None else a - b

    def neg(self, a):
        return (-a) % self.p if self.p is not None else -a

    def mul(self, a, b):
        return (a * b) % self.p if self.p is not None else a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is not None:
            return pow(a, -1, self.p)
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self):
        if self.p is None:
            raise ValueError("the rationals cannot be enumerated")
        return range(self.p)

    def units(self):
        if self.p is None:
            raise ValueError("the rationals cannot be enumerated")
        return range(1, self.p)

    def element(self, x) -> "FieldElement":
        return FieldElement(self, self.coerce(x))

    # serialization ---------------------------------------------------------

    def dump(self, a):
        if self.p is not None:
            return int(a)
        return str(a) if a.denominator != 1 else str(a.numerator)

    def to_json(self) -> dict:
        if self.p is None:
            return {"kind": "rationals"}
        return {"kind": "prime", "p": self.p}

    @staticmethod
    def from_json(obj) -> "Field":
        kind = obj.get("kind")
        if kind == "rationals":
            return QQ
        if kind == "prime":
            return GF(int(obj["p"]))
        raise ValueError(f"unknown field kind {kind!r}")

    @staticmethod
    def parse(spec: str) -> "Field":
        """Parse ``prime:5`` / ``rationals`` as used on the command line."""
        spec = spec.strip().lower()
        if spec in ("rationals", "q", "qq"):
            return QQ
        if spec.startswith("prime:"):
            return GF(int(spec.split(":", 1)[1]))
        raise ValueError(f"bad field spec {spec!r}")


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field(p)


QQ = Field(None)


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: object

    def _other(self, other) -> object:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        return self.field.coerce(other)

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value!s}"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


# vectors -----------------------------------------------------------------


def pairing(F: Field, phi: Sequence, v: Sequence):
    """phi(v) for a covector phi and a vector v."""
    s = sum(a * b for a, b in zip(phi, v))
    return s % F.p if F.p is not None else s


def vec_add(F: Field, u, w) -> tuple:
    if F.p is not None:
        p = F.p
        return tuple((a + b) % p for a, b in zip(u, w))
    return tuple(a + b for a, b in zip(u, w))


def vec_scale(F: Field, c, u) -> tuple:
    if F.p is not None:
        p = F.p
        return tuple((c * a) % p for a in u)
    return tuple(c * a for a in u)


def vec_axpy(F: Field, c, x, y) -> tuple:
    """y + c*x"""
    if F.p is not None:
        p = F.p
        return tuple((b + c * a) % p for a, b in zip(x, y))
    return tuple(b + c * a for a, b in zip(x, y))


def is_zero_vec(u) -> bool:
    return all(a == 0 for a in u)


def unit_vector(F: Field, n: int, i: int) -> tuple:
    return tuple(F.one if k == i else F.zero for k in range(n))


def leading_index(u) -> int:
    for i, a in enumerate(u):
        if a != 0:
            return i
    return -1


def proportional(F: Field, u, w) -> bool:
    """True when u and w span the same line (both nonzero)."""
    i = leading_index(u)
    if i < 0 or leading_index(w) != i:
        return False
    c = F.div(w[i], u[i])
    return vec_scale(F, c, u) == tuple(w)


def ratio(F: Field, u, w):
    """c with w = c*u, or None."""
    i = leading_index(u)
    if i < 0 or w[i] == 0:
        return None
    c = F.div(w[i], u[i])
    return c if vec_scale(F, c, u) == tuple(w) else None


# row reduction ------------------------------------------------------------


def rref(F: Field, rows: Iterable[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [list(r) for r in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(M)):
            if M[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(inv, a) for a in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank_of(F: Field, vectors: Iterable[Sequence]) -> int:
    vecs = [tuple(v) for v in vectors]
    if not vecs:
        return 0
    return len(rref(F, vecs)[1])


def null_space(F: Field, rows: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Basis of {x : rows . x = 0}."""
    if not rows:
        return [unit_vector(F, ncols, i) for i in range(ncols)]
    R, pivots = rref(F, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [F.zero] * ncols
        x[f] = F.one
        for r, c in enumerate(pivots):
            x[c] = F.neg(R[r][f])
        basis.append(tuple(x))
    return basis


def solve_linear(F: Field, A: Sequence[Sequence], b: Sequence):
    """One solution x of A x = b, or None when inconsistent."""
    m = len(A)
    if m != len(b):
        raise ValueError("shape mismatch")
    if m == 0:
        return ()
    k = len(A[0])
    aug = [list(A[i]) + [F.coerce(b[i])] for i in range(m)]
    R, pivots = rref(F, aug)
    if k in pivots:
        return None
    x = [F.zero] * k
    for r, c in enumerate(pivots):
        x[c] = R[r][k]
    return tuple(x)


def solve_affine(F: Field, a, b):
    """Solutions of a*x + b = 0: a scalar, None (no solution) or "all"."""
    if a == 0:
        return "all" if b == 0 else None
    return F.neg(F.div(b, a))


def coordinates(F: Field, basis: Sequence[Sequence], v: Sequence):
    """Coefficients c with sum c_i basis_i = v, or None."""
    n = len(v)
    A = [[basis[j][i] for j in range(len(basis))] for i in range(n)]
    return solve_linear(F, A, list(v))


# matrices -----------------------------------------------------------------


class Matrix:
    """Immutable dense square matrix over a Field."""

    __slots__ = ("field", "rows", "n", "_hash")

    def __init__(self, field: Field, rows, *, raw: bool = False):
        self.field = field
        if raw:
            self.rows = rows
        else:
            self.rows = tuple(tuple(field.coerce(a) for a in r) for r in rows)
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise ValueError("matrix must be square")
        self._hash = None

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        one, zero = field.one, field.zero
        return cls(field, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), raw=True)

    @classmethod
    def elementary(cls, field: Field, n: int, i: int, j: int, c=1) -> "Matrix":
        """1 + c*E_ij"""
        c = field.coerce(c)
        rows = [list(r) for r in cls.identity(field, n).rows]
        rows[i][j] = field.add(rows[i][j], c)
        return cls(field, tuple(tuple(r) for r in rows), raw=True)

    @classmethod
    def outer(cls, field: Field, v, phi) -> "Matrix":
        """1 + v (x) phi"""
        n = len(v)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                a = field.mul(v[i], phi[j])
                if i == j:
                    a = field.add(a, field.one)
                row.append(a)
            rows.append(tuple(row))
        return cls(field, tuple(rows), raw=True)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.field == other.field and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(a) for a in r) for r in self.rows)
        return f"Matrix[{self.field}]({body})"

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def _check(self, other: "Matrix"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        if other.n != self.n:
            raise ValueError("dimension mismatch")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        cols = tuple(zip(*other.rows))
        p = self.field.p
        if p is not None:
            rows = tuple(tuple(sum(a * b for a, b in zip(r, c)) % p for c in cols) for r in self.rows)
        else:
            rows = tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows)
        return Matrix(self.field, rows, raw=True)

    mul = __matmul__

    def apply(self, v) -> tuple:
        p = self.field.p
        if p is not None:
            return tuple(sum(a * b for a, b in zip(r, v)) % p for r in self.rows)
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def rapply(self, phi) -> tuple:
        """Row vector times matrix: phi . M"""
        p = self.field.p
        cols = zip(*self.rows)
        if p is not None:
            return tuple(sum(a * b for a, b in zip(phi, c)) % p for c in cols)
        return tuple(sum(a * b for a, b in zip(phi, c)) for c in cols)

    def dual_action(self, phi) -> tuple:
        """g . phi = phi o g^{-1}"""
        return self.inverse().rapply(phi)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(zip(*self.rows)), raw=True)

    def is_identity(self) -> bool:
        F = self.field
        return all(a == (F.one if i == j else F.zero) for i, r in enumerate(self.rows) for j, a in enumerate(r))

    def sub_identity(self) -> "Matrix":
        F = self.field
        return Matrix(F, tuple(tuple(F.sub(a, F.one) if i == j else a for j, a in enumerate(r))
                               for i, r in enumerate(self.rows)), raw=True)

    def det(self):
        F = self.field
        M = [list(r) for r in self.rows]
        n = self.n
        d = F.one
        for c in range(n):
            piv = next((i for i in range(c, n) if M[i][c] != 0), None)
            if piv is None:
                return F.zero
            if piv != c:
                M[c], M[piv] = M[piv], M[c]
                d = F.neg(d)
            d = F.mul(d, M[c][c])
            inv = F.inv(M[c][c])
            for i in range(c + 1, n):
                if M[i][c] != 0:
                    f = F.mul(M[i][c], inv)
                    M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[c])]
        return d

    def inverse(self) -> "Matrix":
        F = self.field
        n = self.n
        aug = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(self.rows)]
        R, pivots = rref(F, aug)
        if pivots[:n] != list(range(n)):
            raise SingularMatrix("matrix is singular")
        return Matrix(F, tuple(tuple(r[n:]) for r in R), raw=True)

    def rank(self) -> int:
        return rank_of(self.field, self.rows)

    def kernel_basis(self) -> list[tuple]:
        return null_space(self.field, self.rows, self.n)

    def key(self) -> tuple:
        """Canonical row-major residue tuple, used for hashing group elements."""
        return tuple(a for r in self.rows for a in r)

    def to_json(self) -> dict:
        F = self.field
        return {"field": F.to_json(), "n": self.n, "rows": [[F.dump(a) for a in r] for r in self.rows]}

    @staticmethod
    def from_json(obj, field: Field | None = None) -> "Matrix":
        F = Field.from_json(obj["field"]) if "field" in obj else field
        if F is None:
            raise ValueError("matrix JSON without a field")
        M = Matrix(F, obj["rows"])
        if "n" in obj and int(obj["n"]) != M.n:
            raise ValueError("declared n does not match rows")
        return M


def mat_ops(A: Matrix, B: Matrix | None, op: str, x=None):
    """Dispatcher over the dense matrix operations."""
    if op == "mul":
        return A @ B
    if op == "inverse":
        return A.inverse()
    if op == "det":
        return A.det()
    if op == "rank":
        return A.rank()
    if op == "kernel_basis":
        return A.kernel_basis()
    if op == "apply_to_vector":
        return A.apply(x)
    if op == "dual_action_on_covector":
        return A.dual_action(x)
    raise ValueError(f"unknown op {op!r}")


def random_sl(F: Field, n: int, rng) -> Matrix:
    """Uniform-ish random element of SL(n, F_p) (small integer entries over QQ)."""
    while True:
        if F.p is not None:
            rows = [[rng.randrange(F.p) for _ in range(n)] for _ in range(n)]
        else:
            rows = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        M = Matrix(F, rows)
        d = M.det()
        if d == 0:
            continue
        dinv = F.inv(d)
        rows = [list(r) for r in M.rows]
        rows[0] = [F.mul(dinv, a) for a in rows[0]]
        return Matrix(F, tuple(tuple(r) for r in rows), raw=True)
