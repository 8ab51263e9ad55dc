"""Exact linear algebra over the rationals.

Everything here is exact: entries are `fractions.Fraction`, ranks and
kernels come from fraction Gaussian elimination, characteristic
polynomials from the Faddeev-LeVerrier recursion, and pseudo-determinants
from the lowest nonvanishing characteristic coefficient.  No floats enter
any computation; approximate values exist only behind explicit `approx()`
calls for display.

The module also provides `LogValue`, a formal finite sum of rational
multiples of logarithms of positive rationals, kept in a canonical form
(weights indexed by prime base) so that equality is decidable.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence


class ShapeError(ValueError):
    """Raised when matrix/complex dimensions do not line up."""


class DomainError(ValueError):
    """Raised when a value is outside an operation's mathematical domain.

    Carries an optional `where` payload (degree, object label, ...) used by
    the service layer to emit structured error reports.
    """

    def __init__(self, message: str, where=None):
        super().__init__(message)
        self.where = where


Scalar = Fraction


def parse_scalar(value) -> Fraction:
    """Parse an exact rational from an int or a "p/q" / "n" string.

    Floats (and decimal strings) are rejected: inputs must be exact.
    """
    if isinstance(value, bool):
        raise DomainError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        s = value.strip()
        if "." in s or "e" in s.lower():
            raise DomainError("scalar strings must be exact rationals like '3/5', got %r" % value)
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise DomainError("malformed rational %r" % value) from None
    if isinstance(value, float):
        raise DomainError("float scalars are rejected; pass an exact rational string")
    raise DomainError("cannot parse scalar from %r" % (value,))


def format_scalar(x: Fraction) -> str:
    return str(Fraction(x))


def _coerce_entry(e) -> Fraction:
    if isinstance(e, float):
        raise DomainError("float matrix entries are rejected; use exact rationals")
    if isinstance(e, (int, Fraction)):
        return Fraction(e)
    if isinstance(e, str):
        return parse_scalar(e)
    raise DomainError("bad matrix entry %r" % (e,))


class Matrix:
    """Immutable dense matrix over Q.

    Rows are stored as a tuple of tuples of Fractions.  Zero-row or
    zero-column matrices are legal (the column count must be passed
    explicitly when no rows are present); they show up constantly at the
    ends of cochain complexes.
    """

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(_coerce_entry(e) for e in row) for row in rows)
        if data:
            width = len(data[0])
            for r in data:
                if len(r) != width:
                    raise ShapeError("ragged rows: %d vs %d" % (len(r), width))
            if ncols is not None and ncols != width:
                raise ShapeError("ncols=%d disagrees with row width %d" % (ncols, width))
            ncols = width
        else:
            if ncols is None:
                raise ShapeError("empty matrix needs an explicit column count")
        object.__setattr__(self, "rows", data)
        object.__setattr__(self, "nrows", len(data))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def _wrap(cls, data: tuple, ncols: int) -> "Matrix":
        """Internal constructor for rows that are already tuples of
        Fractions (results of exact arithmetic); skips re-coercion."""
        m = object.__new__(cls)
        object.__setattr__(m, "rows", data)
        object.__setattr__(m, "nrows", len(data))
        object.__setattr__(m, "ncols", ncols)
        return m

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "Matrix":
        row = (Fraction(0),) * ncols
        return cls._wrap((row,) * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        one, nil = Fraction(1), Fraction(0)
        return cls._wrap(tuple(tuple(one if i == j else nil for j in range(n))
                               for i in range(n)), n)

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        es = [_coerce_entry(e) for e in entries]
        n = len(es)
        return cls([[es[i] if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def block(cls, grid, row_dims: Sequence[int] | None = None,
              col_dims: Sequence[int] | None = None) -> "Matrix":
        """Assemble a block matrix; None entries are zero blocks.

        Block sizes are inferred from the given matrices when possible;
        rows/columns consisting only of None need explicit dims.
        """
        grid = [list(row) for row in grid]
        if not grid:
            raise ShapeError("empty block grid")
        R, C = len(grid), len(grid[0])
        for row in grid:
            if len(row) != C:
                raise ShapeError("ragged block grid")
        rd = list(row_dims) if row_dims is not None else [None] * R
        cd = list(col_dims) if col_dims is not None else [None] * C
        for i in range(R):
            for j in range(C):
                b = grid[i][j]
                if b is None:
                    continue
                if rd[i] is None:
                    rd[i] = b.nrows
                elif rd[i] != b.nrows:
                    raise ShapeError("block (%d,%d) has %d rows, expected %d" % (i, j, b.nrows, rd[i]))
                if cd[j] is None:
                    cd[j] = b.ncols
                elif cd[j] != b.ncols:
                    raise ShapeError("block (%d,%d) has %d cols, expected %d" % (i, j, b.ncols, cd[j]))
        if any(d is None for d in rd) or any(d is None for d in cd):
            raise ShapeError("ambiguous block dims; pass row_dims/col_dims")
        out = []
        for i in range(R):
            for r in range(rd[i]):
                line = []
                for j in range(C):
                    b = grid[i][j]
                    if b is None:
                        line.extend([Fraction(0)] * cd[j])
                    else:
                        line.extend(b.rows[r])
                out.append(tuple(line))
        return cls._wrap(tuple(out), sum(cd))

    # -- basics ------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self.shape == other.shape
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        return "Matrix(%r)" % ([[str(e) for e in row] for row in self.rows],)

    def is_zero(self) -> bool:
        return all(not e for row in self.rows for e in row)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        if not self.is_square():
            return False
        return all(self.rows[i][j] == self.rows[j][i]
                   for i in range(self.nrows) for j in range(i))

    def transpose(self) -> "Matrix":
        return Matrix._wrap(tuple(tuple(self.rows[i][j]
                                        for i in range(self.nrows))
                                  for j in range(self.ncols)), self.nrows)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    # -- arithmetic ---------------------------------------------------------

    def _same_shape(self, other):
        if not isinstance(other, Matrix):
            raise TypeError("expected Matrix")
        if self.shape != other.shape:
            raise ShapeError("shape mismatch %s vs %s" % (self.shape, other.shape))

    def __add__(self, other) -> "Matrix":
        self._same_shape(other)
        return Matrix._wrap(tuple(tuple(a + b for a, b in zip(r1, r2))
                                  for r1, r2 in zip(self.rows, other.rows)),
                            self.ncols)

    def __sub__(self, other) -> "Matrix":
        self._same_shape(other)
        return Matrix._wrap(tuple(tuple(a - b for a, b in zip(r1, r2))
                                  for r1, r2 in zip(self.rows, other.rows)),
                            self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(tuple(tuple(-a for a in r) for r in self.rows),
                            self.ncols)

    def __mul__(self, s) -> "Matrix":
        c = _coerce_entry(s)
        return Matrix._wrap(tuple(tuple(c * a for a in r) for r in self.rows),
                            self.ncols)

    __rmul__ = __mul__

    def __matmul__(self, other) -> "Matrix":
        if not isinstance(other, Matrix):
            raise TypeError("expected Matrix")
        if self.ncols != other.nrows:
            raise ShapeError("cannot multiply %s by %s" % (self.shape, other.shape))
        # Skip zero entries of the left factor: the block matrices built
        # throughout this package are mostly zeros and this is the hot path.
        brows = other.rows
        c = other.ncols
        out = []
        for arow in self.rows:
            acc = [Fraction(0)] * c
            for k, a in enumerate(arow):
                if a:
                    brow = brows[k]
                    for j, b in enumerate(brow):
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(tuple(acc))
        return Matrix._wrap(tuple(out), c)

    def trace(self) -> Fraction:
        if not self.is_square():
            raise ShapeError("trace needs a square matrix, got %s" % (self.shape,))
        return sum((self.rows[i][i] for i in range(self.nrows)), Fraction(0))

    # -- elimination --------------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form and the pivot column indices."""
        m = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(self.ncols):
            pr = None
            for i in range(r, self.nrows):
                if m[i][c]:
                    pr = i
                    break
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            pv = m[r][c]
            m[r] = [x / pv for x in m[r]]
            for i in range(self.nrows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    mr = m[r]
                    m[i] = [a - f * b for a, b in zip(m[i], mr)]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return Matrix(m, ncols=self.ncols), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_dim(self) -> int:
        return self.ncols - self.rank()

    def det(self) -> Fraction:
        if not self.is_square():
            raise ShapeError("determinant needs a square matrix")
        n = self.nrows
        if n == 0:
            return Fraction(1)
        m = [list(r) for r in self.rows]
        sign = 1
        det = Fraction(1)
        for c in range(n):
            pr = None
            for i in range(c, n):
                if m[i][c]:
                    pr = i
                    break
            if pr is None:
                return Fraction(0)
            if pr != c:
                m[c], m[pr] = m[pr], m[c]
                sign = -sign
            pv = m[c][c]
            det *= pv
            for i in range(c + 1, n):
                if m[i][c]:
                    f = m[i][c] / pv
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return det * sign

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ShapeError("inverse needs a square matrix")
        n = self.nrows
        aug = [list(r) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
               for i, r in enumerate(self.rows)]
        r = 0
        for c in range(n):
            pr = None
            for i in range(r, n):
                if aug[i][c]:
                    pr = i
                    break
            if pr is None:
                raise DomainError("matrix is singular")
            aug[r], aug[pr] = aug[pr], aug[r]
            pv = aug[r][c]
            aug[r] = [x / pv for x in aug[r]]
            for i in range(n):
                if i != r and aug[i][c]:
                    f = aug[i][c]
                    ar = aug[r]
                    aug[i] = [a - f * b for a, b in zip(aug[i], ar)]
            r += 1
        return Matrix([row[n:] for row in aug], ncols=n)

    def char_poly(self) -> list[Fraction]:
        """Coefficients [1, c1, ..., cn] of det(tI - A) = t^n + c1 t^(n-1) + ... + cn.

        Faddeev-LeVerrier recursion, exact over Q.
        """
        if not self.is_square():
            raise ShapeError("char_poly needs a square matrix")
        n = self.nrows
        coeffs = [Fraction(1)]
        M = Matrix.identity(n)
        for k in range(1, n + 1):
            AM = self @ M
            ck = -AM.trace() / k
            coeffs.append(ck)
            M = AM + ck * Matrix.identity(n)
        return coeffs

    def leading_principal_minors(self) -> list[Fraction]:
        if not self.is_square():
            raise ShapeError("minors need a square matrix")
        out = []
        for k in range(1, self.nrows + 1):
            sub = Matrix([row[:k] for row in self.rows[:k]], ncols=k)
            out.append(sub.det())
        return out

    def is_positive_definite(self) -> bool:
        """Sylvester criterion; requires symmetry."""
        return self.is_symmetric() and all(m > 0 for m in self.leading_principal_minors())


def trace(m: Matrix) -> Fraction:
    """Sum of diagonal entries of a square matrix."""
    return m.trace()


def kernel_dim(m: Matrix) -> int:
    """dim ker m = ncols - rank, by exact row reduction."""
    return m.kernel_dim()


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a


def _charpoly_psd(sym: Matrix) -> bool:
    # A symmetric rational matrix has real spectrum; it is PSD iff the
    # characteristic coefficients alternate in sign: (-1)^j c_j >= 0.
    cp = sym.char_poly()
    return all((c if j % 2 == 0 else -c) >= 0 for j, c in enumerate(cp))


def _pseudo_det_from_charpoly(m: Matrix) -> Fraction:
    # Product of the nonzero eigenvalues of a diagonalizable matrix:
    # with k = dim ker and det(tI - m) = t^n + c1 t^(n-1) + ... + cn,
    # the product is (-1)^(n-k) c_(n-k).
    n = m.nrows
    k = m.kernel_dim()
    if k == n:
        return Fraction(1)
    cp = m.char_poly()
    val = cp[n - k] if (n - k) % 2 == 0 else -cp[n - k]
    return val


def pseudo_det(m: Matrix) -> Fraction:
    """Product of the nonzero eigenvalues of a symmetric PSD matrix.

    Exact: the kernel dimension is computed by elimination and the product
    of the remaining eigenvalues read off the characteristic polynomial.
    The 0x0 matrix has pseudo-determinant 1 (empty product).
    """
    if not m.is_square():
        raise ShapeError("pseudo_det needs a square matrix")
    if not m.is_symmetric():
        raise DomainError("pseudo_det requires a symmetric matrix")
    if not _charpoly_psd(m):
        raise DomainError("pseudo_det requires a positive semidefinite matrix")
    val = _pseudo_det_from_charpoly(m)
    if val <= 0:
        raise DomainError("pseudo-determinant came out nonpositive; matrix not PSD?")
    return val


def pseudo_det_gram(m: Matrix, gram: Matrix) -> Fraction:
    """Pseudo-determinant of a matrix self-adjoint for the inner product `gram`.

    Laplacians of complexes with non-identity inner products are not
    symmetric, but G M is, and M is similar to the PSD matrix
    G^(1/2) M G^(-1/2); the spectrum is therefore real and nonnegative and
    the charpoly route applies to M itself.  Requires G M = M^T G exactly.
    """
    if not m.is_square():
        raise ShapeError("pseudo_det_gram needs a square matrix")
    s = gram @ m
    if not s.is_symmetric():
        raise DomainError("matrix is not self-adjoint for the given inner product")
    if not _charpoly_psd(s):
        raise DomainError("matrix is not positive semidefinite for the given inner product")
    if gram == Matrix.identity(m.nrows):
        return pseudo_det(m)
    val = _pseudo_det_from_charpoly(m)
    if val <= 0:
        raise DomainError("pseudo-determinant came out nonpositive")
    return val


def pseudo_inverse(m: Matrix) -> Matrix:
    """Moore-Penrose pseudo-inverse, exact over Q.

    Full-rank factorization m = F G with F the pivot columns of m and G the
    nonzero rows of the reduced echelon form; then
    m+ = G^T (G G^T)^(-1) (F^T F)^(-1) F^T.  All four Penrose identities
    hold exactly (checked in the test suite).
    """
    R, pivots = m.rref()
    r = len(pivots)
    if r == 0:
        return Matrix.zero(m.ncols, m.nrows)
    F = Matrix([[row[p] for p in pivots] for row in m.rows], ncols=r)
    G = Matrix(R.rows[:r], ncols=m.ncols)
    GGt = G @ G.T
    FtF = F.T @ F
    return G.T @ GGt.inverse() @ FtF.inverse() @ F.T


def is_sum_of_commutators(m: Matrix) -> bool:
    """Over a field, a square matrix is a sum of commutators iff trace zero."""
    if not m.is_square():
        raise ShapeError("expected a square matrix")
    return m.trace() == 0


def commutator_witness(m: Matrix) -> list[tuple[Matrix, Matrix]]:
    """Write a trace-zero matrix as an explicit sum of at most two commutators.

    The off-diagonal part O satisfies O = [D, N] with D = diag(1..n) and
    N_ij = O_ij / (i - j).  The (trace-zero) diagonal part diag(l_1..l_n)
    equals [S, T] where S carries the partial sums s_i = l_1 + ... + l_i on
    the superdiagonal and T is the subdiagonal shift: [S, T] =
    sum_i s_i (E_ii - E_(i+1,i+1)), which telescopes to the diagonal.
    The returned pairs re-sum to m entrywise; no conjugation, no growth in
    the entries.
    """
    if not m.is_square():
        raise ShapeError("expected a square matrix")
    if m.trace() != 0:
        raise DomainError("matrix has nonzero trace; not a sum of commutators")
    n = m.nrows
    pairs: list[tuple[Matrix, Matrix]] = []
    off = [[m.rows[i][j] if i != j else Fraction(0) for j in range(n)] for i in range(n)]
    if any(e for row in off for e in row):
        D = Matrix.diagonal([i + 1 for i in range(n)])
        N = Matrix([[off[i][j] / (i - j) if i != j else Fraction(0)
                     for j in range(n)] for i in range(n)], ncols=n)
        pairs.append((D, N))
    diag = [m.rows[i][i] for i in range(n)]
    if any(diag):
        s = Fraction(0)
        S = [[Fraction(0)] * n for _ in range(n)]
        T = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n - 1):
            s += diag[i]
            S[i][i + 1] = s
            T[i + 1][i] = Fraction(1)
        pairs.append((Matrix(S, ncols=n), Matrix(T, ncols=n)))
    return pairs


# ---------------------------------------------------------------------------
# Formal logarithms


_factor_cache: dict[int, dict[int, int]] = {}


def _factorint(n: int) -> dict[int, int]:
    if n not in _factor_cache:
        from sympy import factorint  # deferred: sympy import is slow
        _factor_cache[n] = {int(p): int(e) for p, e in factorint(n).items()}
    return _factor_cache[n]


def _factor_positive(q: Fraction) -> dict[int, int]:
    if q <= 0:
        raise DomainError("logarithm base must be a positive rational, got %s" % q)
    out: dict[int, int] = {}
    for p, e in _factorint(q.numerator).items():
        out[p] = out.get(p, 0) + e
    for p, e in _factorint(q.denominator).items():
        out[p] = out.get(p, 0) - e
    return {p: e for p, e in out.items() if e}


class LogValue:
    """Formal rational combination of logs of positive rationals.

    Canonical form: a finite map prime -> rational weight, obtained by
    factoring every base.  Addition, negation and rational scaling act on
    the weights; equality is equality of the maps, so e.g.
    log(4/9) == 2*log(2/3) holds.

    Rendering (`terms()`) normalizes to at most one (weight, base) pair:
    the weight is the positive rational content of the prime weights and
    the base the corresponding product of prime powers (coprime integer
    exponents, signs kept).  -1/2 log(16/25) therefore renders as
    1 * log(5/4), and the zero value as the empty list.
    """

    __slots__ = ("_w",)

    def __init__(self, weights: dict[int, Fraction] | None = None):
        w = {}
        if weights:
            for p, c in weights.items():
                c = Fraction(c)
                if c:
                    w[int(p)] = c
        object.__setattr__(self, "_w", w)

    def __setattr__(self, name, value):
        raise AttributeError("LogValue is immutable")

    @classmethod
    def zero(cls) -> "LogValue":
        return cls()

    @classmethod
    def log(cls, base, weight=1) -> "LogValue":
        """weight * log(base) for a positive rational base."""
        b = base if isinstance(base, Fraction) else parse_scalar(base)
        w = weight if isinstance(weight, Fraction) else parse_scalar(weight)
        if b == 1 or not w:
            return cls()
        return cls({p: w * e for p, e in _factor_positive(b).items()})

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "LogValue":
        if not isinstance(other, LogValue):
            return NotImplemented
        w = dict(self._w)
        for p, c in other._w.items():
            w[p] = w.get(p, Fraction(0)) + c
        return LogValue(w)

    def __sub__(self, other) -> "LogValue":
        if not isinstance(other, LogValue):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "LogValue":
        return LogValue({p: -c for p, c in self._w.items()})

    def __mul__(self, s) -> "LogValue":
        c = s if isinstance(s, Fraction) else parse_scalar(s)
        return LogValue({p: c * e for p, e in self._w.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, LogValue) and self._w == other._w

    def __hash__(self):
        return hash(frozenset(self._w.items()))

    def is_zero(self) -> bool:
        return not self._w

    @property
    def prime_weights(self) -> dict[int, Fraction]:
        return dict(self._w)

    # -- rendering ----------------------------------------------------------

    def terms(self) -> list[tuple[Fraction, Fraction]]:
        """Canonical term list: [] for zero, else exactly one (weight, base)."""
        if not self._w:
            return []
        weights = list(self._w.values())
        g = Fraction(math.gcd(*[abs(w.numerator) for w in weights]),
                     math.lcm(*[w.denominator for w in weights]))
        base = Fraction(1)
        for p, w in sorted(self._w.items()):
            e = w / g
            assert e.denominator == 1
            base *= Fraction(p) ** int(e)
        return [(g, base)]

    def approx(self) -> float:
        return sum(float(c) * math.log(p) for p, c in self._w.items())

    def __repr__(self):
        ts = self.terms()
        if not ts:
            return "LogValue(0)"
        w, b = ts[0]
        return "LogValue(%s*log(%s))" % (w, b)
