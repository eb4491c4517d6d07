"""Exact coefficient rings (Q, F_p, Z) and kernel computation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence, Union

Scalar = Union[int, Fraction]


class RingError(ArithmeticError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class RingSpec:
    """One of ``Q``, ``Fp:<p>`` or ``Z``.

    Scalars are stored as plain Python values: :class:`~fractions.Fraction`
    over Q, residues in ``[0, p)`` over F_p and ``int`` over Z.
    """

    kind: str
    modulus: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("Q", "Fp", "Z"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp":
            if self.modulus is None or not _is_prime(self.modulus):
                raise ValueError(f"F_p needs a prime modulus, got {self.modulus}")
        elif self.modulus is not None:
            raise ValueError(f"ring {self.kind} takes no modulus")

    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        text = text.strip()
        if text in ("Q", "Z"):
            return cls(text)
        if text.startswith("Fp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise ValueError(f"bad modulus in ring {text!r}") from None
            return cls("Fp", p)
        raise ValueError(f"unknown ring {text!r}; expected Q, Fp:<p> or Z")

    def __str__(self) -> str:
        return f"Fp:{self.modulus}" if self.kind == "Fp" else self.kind

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    # scalar arithmetic on raw values

    def coerce(self, x: Scalar) -> Scalar:
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                if self.kind == "Z":
                    raise RingError(f"{x} is not an integer")
                return x.numerator * pow(x.denominator, -1, self.modulus) % self.modulus
            x = x.numerator
        return x % self.modulus if self.kind == "Fp" else int(x)

    @property
    def zero(self) -> Scalar:
        return self.coerce(0)

    @property
    def one(self) -> Scalar:
        return self.coerce(1)

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        s = a + b
        return s % self.modulus if self.kind == "Fp" else s

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        s = a - b
        return s % self.modulus if self.kind == "Fp" else s

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        s = a * b
        return s % self.modulus if self.kind == "Fp" else s

    def neg(self, a: Scalar) -> Scalar:
        return -a % self.modulus if self.kind == "Fp" else -a

    def inv(self, a: Scalar) -> Scalar:
        if self.kind == "Z":
            raise RingError("not a field: Z has no general inverses")
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self.kind == "Fp":
            return pow(a, -1, self.modulus)
        return 1 / a

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def parse_scalar(self, text: str) -> Scalar:
        """Parse ``n`` or ``n/d``; over Z the quotient must be exact."""
        num, _, den = text.partition("/")
        a = self.coerce(int(num))
        if not den:
            return a
        d = int(den)
        if d == 0:
            raise ZeroDivisionError(f"zero denominator in {text!r}")
        if self.kind == "Z":
            if int(num) % d:
                raise RingError(f"{text} is not an integer")
            return int(num) // d
        return self.div(a, self.coerce(d))

    def format(self, a: Scalar) -> str:
        return str(a)

    def __call__(self, x: Scalar | str) -> "RingValue":
        if isinstance(x, str):
            return RingValue(self, self.parse_scalar(x))
        return RingValue(self, self.coerce(x))


Q = RingSpec("Q")
Z = RingSpec("Z")


def Fp(p: int) -> RingSpec:
    return RingSpec("Fp", p)


@dataclass(frozen=True)
class RingValue:
    spec: RingSpec
    value: Scalar

    def _other(self, other) -> Scalar:
        if isinstance(other, RingValue):
            if other.spec != self.spec:
                raise RingError(f"ring mismatch: {self.spec} vs {other.spec}")
            return other.value
        return self.spec.coerce(other)

    def __add__(self, other):
        return RingValue(self.spec, self.spec.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return RingValue(self.spec, self.spec.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return RingValue(self.spec, self.spec.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return RingValue(self.spec, self.spec.neg(self.value))

    def inverse(self) -> "RingValue":
        return RingValue(self.spec, self.spec.inv(self.value))

    def __truediv__(self, other):
        return RingValue(self.spec, self.spec.div(self.value, self._other(other)))

    def __eq__(self, other) -> bool:
        if isinstance(other, RingValue):
            return self.spec == other.spec and self.value == other.value
        try:
            return self.value == self.spec.coerce(other)
        except (RingError, TypeError):
            return False

    def __hash__(self) -> int:
        return hash((self.spec, self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __str__(self) -> str:
        return self.spec.format(self.value)


@dataclass
class Matrix:
    """Dense matrix of raw scalars over one ring."""

    spec: RingSpec
    entries: list[list[Scalar]]
    ncols: int | None = None

    def __post_init__(self) -> None:
        if self.ncols is None:
            self.ncols = len(self.entries[0]) if self.entries else 0
        self.entries = [[self.spec.coerce(x) for x in row] for row in self.entries]
        if any(len(row) != self.ncols for row in self.entries):
            raise ValueError("ragged matrix")

    @property
    def nrows(self) -> int:
        return len(self.entries)

    def sparse_rows(self) -> list[dict[int, Scalar]]:
        return [{j: x for j, x in enumerate(row) if x != 0} for row in self.entries]

    def apply(self, vec: Sequence[Scalar]) -> list[Scalar]:
        out = []
        for row in self.entries:
            acc = self.spec.zero
            for a, b in zip(row, vec):
                acc = self.spec.add(acc, self.spec.mul(a, b))
            out.append(acc)
        return out


SparseRow = dict[int, Scalar]


def rref(rows: Sequence[SparseRow], ncols: int, spec: RingSpec) -> tuple[list[SparseRow], list[int]]:
    """Reduced row echelon form over a field.

    Pivots are taken leftmost column first, and within a column from the
    smallest remaining row index.  Returns the nonzero rows and pivot columns.
    """
    if not spec.is_field:
        raise RingError("rref needs a field")
    pending = [dict(r) for r in rows if r]
    done: list[SparseRow] = []
    pivots: list[int] = []
    for c in range(ncols):
        idx = next((i for i, r in enumerate(pending) if r.get(c, 0) != 0), None)
        if idx is None:
            continue
        row = pending.pop(idx)
        inv = spec.inv(row[c])
        row = {j: spec.mul(x, inv) for j, x in row.items()}
        for others in (pending, done):
            for i, r in enumerate(others):
                f = r.get(c, 0)
                if f == 0:
                    continue
                new = dict(r)
                for j, x in row.items():
                    v = spec.sub(new.get(j, spec.zero), spec.mul(f, x))
                    if v == 0:
                        new.pop(j, None)
                    else:
                        new[j] = v
                others[i] = new
        pending = [r for r in pending if r]
        done.append(row)
        pivots.append(c)
    return done, pivots


def _field_kernel(rows: Sequence[SparseRow], ncols: int, spec: RingSpec) -> list[list[Scalar]]:
    reduced, pivots = rref(rows, ncols, spec)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        vec = [spec.zero] * ncols
        vec[f] = spec.one
        for row, p in zip(reduced, pivots):
            x = row.get(f, 0)
            if x != 0:
                vec[p] = spec.neg(x)
        basis.append(vec)
    if not basis:
        return []
    # the kernel basis itself in reduced echelon form: canonical for the subspace
    canon, _ = rref([{j: x for j, x in enumerate(v) if x != 0} for v in basis], ncols, spec)
    return [[r.get(j, spec.zero) for j in range(ncols)] for r in canon]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def hermite_rows(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Pivots positive, entries above each pivot reduced into ``[0, pivot)``,
    zero rows dropped.
    """
    rows = [list(v) for v in vectors]
    if not rows:
        return []
    n = len(rows[0])
    out: list[list[int]] = []
    pivots: list[int] = []
    r = 0
    for c in range(n):
        # gather gcd of column c among rows r.. into row r
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c] != 0]
            if not nz:
                break
            i_min = min(nz, key=lambda i: (abs(rows[i][c]), i))
            rows[r], rows[i_min] = rows[i_min], rows[r]
            if rows[r][c] < 0:
                rows[r] = [-x for x in rows[r]]
            done = True
            for i in range(r + 1, len(rows)):
                if rows[i][c] != 0:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    if rows[i][c] != 0:
                        done = False
            if done:
                break
        if r < len(rows) and rows[r][c] != 0:
            pivots.append(c)
            r += 1
            if r == len(rows):
                break
    out = rows[:r]
    for i, c in enumerate(pivots):
        for j in range(i):
            q = out[j][c] // out[i][c]
            if q:
                out[j] = [a - q * b for a, b in zip(out[j], out[i])]
    return out


def _integer_kernel(rows: Sequence[SparseRow], ncols: int) -> list[list[int]]:
    # same rational row space -> same integer kernel
    reduced, _ = rref([{j: Fraction(x) for j, x in r.items()} for r in rows], ncols, Q)
    a = []
    for row in reduced:
        den = 1
        for x in row.values():
            den = _lcm(den, x.denominator)
        a.append([int(row.get(j, 0) * den) for j in range(ncols)])
    # unimodular column reduction: a * u = h, zero columns of h give kernel basis columns of u
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    t = 0
    for row_i in range(len(a)):
        while True:
            nz = [j for j in range(t, ncols) if a[row_i][j] != 0]
            if len(nz) <= 1:
                break
            jm = min(nz, key=lambda j: (abs(a[row_i][j]), j))
            for j in nz:
                if j == jm:
                    continue
                q = a[row_i][j] // a[row_i][jm]
                for row in a:
                    row[j] -= q * row[jm]
                for row in u:
                    row[j] -= q * row[jm]
        nz = [j for j in range(t, ncols) if a[row_i][j] != 0]
        if nz:
            j = nz[0]
            for row in a:
                row[t], row[j] = row[j], row[t]
            for row in u:
                row[t], row[j] = row[j], row[t]
            t += 1
    basis = [[u[i][j] for i in range(ncols)] for j in range(t, ncols)]
    return hermite_rows(basis)


def kernel(m: Matrix | Sequence[SparseRow], ncols: int | None = None, spec: RingSpec | None = None):
    """Basis of the right null space.

    Over a field the basis is returned in reduced echelon form; over Z it is
    the Hermite normal form of the integer kernel lattice, so every vector is
    primitive with a positive leading entry.
    """
    if isinstance(m, Matrix):
        rows, ncols, spec = m.sparse_rows(), m.ncols, m.spec
    else:
        rows = list(m)
        if ncols is None or spec is None:
            raise ValueError("sparse input needs ncols and spec")
    if spec.is_field:
        return _field_kernel(rows, ncols, spec)
    return _integer_kernel(rows, ncols)


def rank(m: Matrix) -> int:
    if m.spec.is_field:
        return len(rref(m.sparse_rows(), m.ncols, m.spec)[1])
    return len(rref([{j: Fraction(x) for j, x in r.items()} for r in m.sparse_rows()], m.ncols, Q)[1])
