"""Dense and sparse exact linear algebra over any :class:`~zhukit.fields.Field`.

Dense :class:`Matrix` objects are used for small problems (commutants,
minimal polynomials, module actions).  :class:`SparseEchelon` is the
incremental row-reduction engine behind the large truncated quotients
``V_{<=N} / O_n(V)`` and ``V / C_2(V)``.
"""
from __future__ import annotations

import heapq
from typing import Iterable, Sequence

from .fields import Field, FieldError, format_poly, poly_trim

__all__ = [
    "Matrix",
    "Poly",
    "Subspace",
    "SparseEchelon",
    "rref",
    "rank",
    "solve",
    "nullspace",
    "commutant",
    "minimal_polynomial",
]


class Poly:
    """Univariate polynomial with raw coefficients, lowest degree first."""

    def __init__(self, field: Field, coeffs: Sequence, var: str = "x"):
        self.field = field
        self.coeffs = tuple(poly_trim(field, [field.coerce(c) if not _is_raw(field, c) else c for c in coeffs]))
        self.var = var

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one()

    def constant_term(self):
        return self.coeffs[0] if self.coeffs else self.field.zero()

    def __call__(self, M: "Matrix") -> "Matrix":
        F = self.field
        acc = Matrix.zeros(F, M.nrows, M.ncols)
        for c in reversed(self.coeffs):
            acc = acc @ M + Matrix.identity(F, M.nrows).scale(c)
        return acc

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __str__(self):
        # descending degree, e.g. x^2+3
        F = self.field
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if F.is_zero(c):
                continue
            single = format_poly(F, [F.zero()] * k + [c], self.var)
            parts.append(single)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def __repr__(self):
        return f"Poly({self})"


def _is_raw(field, c) -> bool:
    from .fields import Extension, PrimeField, Rationals

    if isinstance(field, Extension):
        return isinstance(c, tuple)
    if isinstance(field, PrimeField):
        return isinstance(c, int) and 0 <= c < field.p
    if isinstance(field, Rationals):
        return type(c).__name__ == "mpq"
    return False


class Matrix:
    """Dense matrix of raw field elements, row-major."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: Sequence[Sequence], ncols: int | None = None):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        self.ncols = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise FieldError("ragged matrix")

    @classmethod
    def from_values(cls, field: Field, rows, ncols: int | None = None) -> "Matrix":
        """Build from ints / Fractions / strings / Scalars."""
        return cls(field, [[field.coerce(x) for x in r] for r in rows], ncols)

    @classmethod
    def zeros(cls, field, n, m=None):
        m = n if m is None else m
        z = field.zero()
        return cls(field, [[z] * m for _ in range(n)], m)

    @classmethod
    def identity(cls, field, n):
        M = cls.zeros(field, n)
        for i in range(n):
            M.rows[i][i] = field.one()
        return M

    def copy(self):
        return Matrix(self.field, self.rows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def _check(self, other):
        if self.field != other.field:
            raise FieldError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise FieldError(f"shape mismatch {self.shape} @ {other.shape}")
        F = self.field
        z = F.zero()
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if not F.is_zero(a)]
            row = []
            for col in cols:
                acc = z
                for k, a in nz:
                    b = col[k]
                    if not F.is_zero(b):
                        acc = F.add(acc, F.mul(a, b))
                row.append(acc)
            out.append(row)
        return Matrix(F, out, other.ncols)

    def apply(self, vec: Sequence) -> list:
        F = self.field
        out = []
        for r in self.rows:
            acc = F.zero()
            for a, b in zip(r, vec):
                if not F.is_zero(a) and not F.is_zero(b):
                    acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return out

    def __add__(self, other):
        self._check(other)
        F = self.field
        return Matrix(F, [[F.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other):
        self._check(other)
        F = self.field
        return Matrix(F, [[F.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def scale(self, c) -> "Matrix":
        F = self.field
        return Matrix(F, [[F.mul(c, a) for a in r] for r in self.rows], self.ncols)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [list(c) for c in zip(*self.rows)] if self.nrows else [], self.nrows)

    def is_zero(self) -> bool:
        F = self.field
        return all(F.is_zero(a) for r in self.rows for a in r)

    def flatten(self) -> list:
        return [a for r in self.rows for a in r]

    @classmethod
    def unflatten(cls, field, vec, n, m=None):
        m = n if m is None else m
        return cls(field, [list(vec[i * m:(i + 1) * m]) for i in range(n)], m)

    def trace(self):
        F = self.field
        acc = F.zero()
        for i in range(min(self.nrows, self.ncols)):
            acc = F.add(acc, self.rows[i][i])
        return acc

    def map(self, fn, field: Field) -> "Matrix":
        return Matrix(field, [[fn(a) for a in r] for r in self.rows], self.ncols)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, tuple(tuple(r) for r in self.rows)))

    def to_strings(self) -> list[list[str]]:
        return [[self.field.fmt(a) for a in r] for r in self.rows]

    def __repr__(self):
        return f"Matrix({self.field}, {self.to_strings()})"


def rref(M: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row echelon form; returns (R, rank, pivot columns).

    The zero rows are dropped from R, so ``R.nrows == rank``.
    """
    F = M.field
    rows = [list(r) for r in M.rows]
    pivots: list[int] = []
    r = 0
    for c in range(M.ncols):
        piv = None
        for i in range(r, len(rows)):
            if not F.is_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, a) for a in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and not F.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return Matrix(F, rows[:r], M.ncols), r, pivots


def rank(M: Matrix) -> int:
    return rref(M)[1]


def nullspace(M: Matrix) -> list[list]:
    """Basis of {x : M x = 0}, one vector per free column (canonical)."""
    F = M.field
    R, _, pivots = rref(M)
    free = [c for c in range(M.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [F.zero()] * M.ncols
        x[f] = F.one()
        for i, p in enumerate(pivots):
            x[p] = F.neg(R.rows[i][f])
        basis.append(x)
    return basis


def solve(A: Matrix, b: Sequence):
    """A solution x of A x = b, or None when b is not in the column span."""
    F = A.field
    if len(b) != A.nrows:
        raise FieldError("shape mismatch in solve")
    aug = Matrix(F, [list(r) + [bi] for r, bi in zip(A.rows, b)], A.ncols + 1)
    R, _, pivots = rref(aug)
    if pivots and pivots[-1] == A.ncols:
        return None
    x = [F.zero()] * A.ncols
    for i, p in enumerate(pivots):
        x[p] = R.rows[i][A.ncols]
    return x


class Subspace:
    """Subspace of F^n held as a canonical RREF basis."""

    def __init__(self, field: Field, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        self.field = field
        self.ambient_dim = ambient_dim
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise FieldError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        if vecs:
            R, _, piv = rref(Matrix(field, vecs, ambient_dim))
            self.basis = R
            self.pivots = piv
        else:
            self.basis = Matrix(field, [], ambient_dim)
            self.pivots = []

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def span_union(self, vectors: Iterable[Sequence]) -> "Subspace":
        return Subspace(self.field, self.ambient_dim, list(self.basis.rows) + [list(v) for v in vectors])

    def reduce(self, v: Sequence) -> list:
        """Remainder of v after eliminating the pivot coordinates."""
        F = self.field
        if len(v) != self.ambient_dim:
            raise FieldError("dimension mismatch")
        v = list(v)
        for row, p in zip(self.basis.rows, self.pivots):
            c = v[p]
            if not F.is_zero(c):
                v = [F.sub(a, F.mul(c, b)) for a, b in zip(v, row)]
        return v

    def member(self, v: Sequence) -> bool:
        F = self.field
        return all(F.is_zero(a) for a in self.reduce(v))

    def contains(self, other: "Subspace") -> bool:
        return all(self.member(r) for r in other.basis.rows)

    def quotient_basis(self) -> list[int]:
        """Complement coordinates: the non-pivot standard basis vectors."""
        piv = set(self.pivots)
        return [c for c in range(self.ambient_dim) if c not in piv]

    def project(self, v: Sequence) -> list:
        """Coordinates of v + S in the quotient basis."""
        r = self.reduce(v)
        return [r[c] for c in self.quotient_basis()]

    def intersect(self, other: "Subspace") -> "Subspace":
        F = self.field
        # solve a*B1 = b*B2 ; the intersection is spanned by a*B1
        n1 = self.dim
        if n1 == 0 or other.dim == 0:
            return Subspace(F, self.ambient_dim)
        stacked = Matrix(F, [list(c) for c in zip(*(self.basis.rows + [[F.neg(a) for a in r] for r in other.basis.rows]))])
        out = []
        for sol in nullspace(stacked):
            vec = [F.zero()] * self.ambient_dim
            for coeff, row in zip(sol[:n1], self.basis.rows):
                if not F.is_zero(coeff):
                    vec = [F.add(a, F.mul(coeff, b)) for a, b in zip(vec, row)]
            out.append(vec)
        return Subspace(F, self.ambient_dim, out)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __repr__(self):
        return f"Subspace(dim={self.dim} in {self.field}^{self.ambient_dim})"


def commutant(generators: Sequence[Matrix], n: int | None = None, field: Field | None = None) -> list[Matrix]:
    """Basis of {X : X A = A X for every generator A}.

    With no generators the result is the full matrix algebra, which needs
    ``n`` and ``field``.
    """
    if generators:
        field = generators[0].field
        n = generators[0].nrows
    if field is None or n is None:
        raise FieldError("commutant of an empty generator list needs n and field")
    F = field
    for A in generators:
        if A.shape != (n, n) or A.field != F:
            raise FieldError("commutant generators must be square, same size and field")
    eqs = []
    # unknown X[i][j] sits at index i*n + j
    for A in generators:
        a = A.rows
        for i in range(n):
            for j in range(n):
                # (XA - AX)[i][j] = sum_k X[i][k] A[k][j] - A[i][k] X[k][j]
                row = [F.zero()] * (n * n)
                for k in range(n):
                    if not F.is_zero(a[k][j]):
                        row[i * n + k] = F.add(row[i * n + k], a[k][j])
                    if not F.is_zero(a[i][k]):
                        row[k * n + j] = F.sub(row[k * n + j], a[i][k])
                if any(not F.is_zero(x) for x in row):
                    eqs.append(row)
    if not eqs:
        sols = [[F.one() if t == s else F.zero() for t in range(n * n)] for s in range(n * n)]
    else:
        sols = nullspace(Matrix(F, eqs, n * n))
    if sols:
        sols = rref(Matrix(F, sols, n * n))[0].rows
    return [Matrix.unflatten(F, v, n) for v in sols]


def minimal_polynomial(M: Matrix, var: str = "x") -> Poly:
    """Least-degree monic p with p(M) = 0, found by the first linear
    dependence among I, M, M^2, ... (Krylov growth on matrix powers)."""
    if M.nrows != M.ncols:
        raise FieldError("minimal polynomial of a non-square matrix")
    F = M.field
    n = M.nrows
    if n == 0:
        return Poly(F, [F.one()], var)
    # echelon rows with combination tracking: each entry (vec, combo)
    # where vec = sum combo[i] * vec(M^i)
    echelon: list[tuple[int, list, list]] = []  # (pivot, vec, combo)
    power = Matrix.identity(F, n)
    for d in range(n + 1):
        vec = power.flatten()
        combo = [F.zero()] * (d + 1)
        combo[d] = F.one()
        for piv, evec, ecombo in echelon:
            c = vec[piv]
            if not F.is_zero(c):
                vec = [F.sub(a, F.mul(c, b)) for a, b in zip(vec, evec)]
                combo = [F.sub(a, F.mul(c, b)) for a, b in zip(combo, ecombo + [F.zero()] * (len(combo) - len(ecombo)))]
        piv = next((i for i, a in enumerate(vec) if not F.is_zero(a)), None)
        if piv is None:
            return Poly(F, combo, var)
        inv = F.inv(vec[piv])
        vec = [F.mul(inv, a) for a in vec]
        combo = [F.mul(inv, a) for a in combo]
        # keep echelon reduced at the new pivot
        new_echelon = []
        for p2, ev, ec in echelon:
            c = ev[piv]
            if not F.is_zero(c):
                ev = [F.sub(a, F.mul(c, b)) for a, b in zip(ev, vec)]
                ecp = ec + [F.zero()] * (len(combo) - len(ec))
                ec = [F.sub(a, F.mul(c, b)) for a, b in zip(ecp, combo)]
            new_echelon.append((p2, ev, ec))
        echelon = new_echelon + [(piv, vec, combo)]
        power = power @ M
    raise AssertionError("Cayley-Hamilton violated")  # pragma: no cover


class SparseEchelon:
    """Incremental semi-echelon basis of sparse vectors ``{col: raw}``.

    Column order is the integer order of the keys: a row's pivot is its
    smallest column.  Callers encode priorities (highest weight first) in
    the column ids.  :meth:`reduce` returns the unique normal form of a
    vector modulo the span, supported on non-pivot columns.
    """

    def __init__(self, field: Field):
        self.field = field
        self.rows: dict[int, dict] = {}
        self._kind = field.kind
        self._p = getattr(field, "p", None)

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self):
        return self.rows.keys()

    def _eliminate(self, vec: dict) -> dict:
        F = self.field
        rows = self.rows
        heap = [c for c in vec if c in rows]
        heapq.heapify(heap)
        kind, p = self._kind, self._p
        while heap:
            c = heapq.heappop(heap)
            coeff = vec.get(c)
            if coeff is None:
                continue
            for col, val in rows[c].items():
                old = vec.get(col)
                if kind == "Fp":
                    new = ((old or 0) - coeff * val) % p
                    zero = new == 0
                elif kind == "Q":
                    new = (0 if old is None else old) - coeff * val
                    zero = new == 0
                else:
                    new = F.sub(F.zero() if old is None else old, F.mul(coeff, val))
                    zero = F.is_zero(new)
                if zero:
                    vec.pop(col, None)
                else:
                    vec[col] = new
                    if old is None and col != c and col in rows:
                        heapq.heappush(heap, col)
        return vec

    def reduce(self, vec: dict) -> dict:
        return self._eliminate(dict(vec))

    def add(self, vec: dict) -> bool:
        """Insert ``vec`` into the span; return True if the rank grew."""
        r = self._eliminate(dict(vec))
        if not r:
            return False
        F = self.field
        piv = min(r)
        inv = F.inv(r[piv])
        self.rows[piv] = {c: F.mul(inv, v) for c, v in r.items()}
        return True

    def member(self, vec: dict) -> bool:
        return not self.reduce(vec)

    def rref_rows(self) -> dict[int, dict]:
        """Fully reduced (canonical) rows keyed by pivot."""
        out: dict[int, dict] = {}
        helper = SparseEchelon(self.field)
        for piv in sorted(self.rows, reverse=True):
            row = helper._eliminate(dict(self.rows[piv]))
            helper.rows[piv] = row
            out[piv] = row
        return {p: out[p] for p in sorted(out)}
