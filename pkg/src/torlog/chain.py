"""Finite cochain complexes over Q with inner products.

A complex is a list of dimensions dims[0..m] and differentials
d_p : C^p -> C^(p+1) (matrices of shape dims[p+1] x dims[p]) with
d_(p+1) d_p = 0.  Each degree optionally carries a symmetric
positive-definite gram matrix; the default is the identity.  Adjoints are
taken with respect to the grams, Laplacians are the usual
d d* + d* d, and Betti numbers come from exact rank computations.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .linalg import DomainError, Matrix, ShapeError


def validate(dims: Sequence[int], differentials: Sequence[Matrix],
             grams: Sequence[Matrix] | None = None) -> dict:
    """Structural check of raw complex data; returns a violation report.

    Used by the `check` CLI before construction, and by the constructor
    (which raises on the first violation).  Report shape:
    {"ok": bool, "violations": [{"kind", "degree", "detail"}, ...]}.
    """
    violations = []

    def bad(kind, degree, detail):
        violations.append({"kind": kind, "degree": degree, "detail": detail})

    if len(dims) < 1:
        bad("dims", None, "need at least one degree")
        return {"ok": False, "violations": violations}
    for p, n in enumerate(dims):
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            bad("dims", p, "dimension must be a nonnegative integer, got %r" % (n,))
    m = len(dims) - 1
    if len(differentials) != m:
        bad("differentials", None,
            "expected %d differentials for %d degrees, got %d" % (m, m + 1, len(differentials)))
    else:
        for p, d in enumerate(differentials):
            want = (dims[p + 1], dims[p])
            if d.shape != want:
                bad("shape", p, "d_%d has shape %s, expected %s" % (p, d.shape, want))
        if not violations:
            for p in range(m - 1):
                if not (differentials[p + 1] @ differentials[p]).is_zero():
                    bad("ddzero", p, "d_%d . d_%d is not zero" % (p + 1, p))
    if grams is not None:
        if len(grams) != len(dims):
            bad("grams", None, "expected %d grams, got %d" % (len(dims), len(grams)))
        else:
            for p, g in enumerate(grams):
                if g.shape != (dims[p], dims[p]):
                    bad("grams", p, "gram at degree %d has shape %s, expected (%d, %d)"
                        % (p, g.shape, dims[p], dims[p]))
                elif not g.is_positive_definite():
                    bad("grams", p, "gram at degree %d is not symmetric positive definite" % p)
    return {"ok": not violations, "violations": violations}


class CochainComplex:
    """Immutable finite cochain complex with optional inner products."""

    __slots__ = ("dims", "differentials", "grams", "_identity_grams")

    def __init__(self, dims: Sequence[int], differentials: Sequence[Matrix],
                 grams: Sequence[Matrix] | None = None):
        dims = tuple(int(n) for n in dims)
        differentials = tuple(differentials)
        report = validate(dims, differentials, grams)
        if not report["ok"]:
            v = report["violations"][0]
            raise DomainError(v["detail"], where={"degree": v["degree"], "kind": v["kind"]})
        identity = grams is None
        if grams is None:
            grams = tuple(Matrix.identity(n) for n in dims)
        else:
            grams = tuple(grams)
            identity = all(g == Matrix.identity(n) for g, n in zip(grams, dims))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "differentials", differentials)
        object.__setattr__(self, "grams", grams)
        object.__setattr__(self, "_identity_grams", identity)

    def __setattr__(self, name, value):
        raise AttributeError("CochainComplex is immutable")

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def dim(self, p: int) -> int:
        if 0 <= p <= self.top_degree:
            return self.dims[p]
        return 0

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def d(self, p: int) -> Matrix:
        """Differential out of degree p; zero maps off the ends."""
        if 0 <= p < self.top_degree:
            return self.differentials[p]
        return Matrix.zero(self.dim(p + 1), self.dim(p))

    def gram(self, p: int) -> Matrix:
        if 0 <= p <= self.top_degree:
            return self.grams[p]
        return Matrix.identity(0)

    def has_identity_grams(self) -> bool:
        return self._identity_grams

    def with_grams(self, grams: Sequence[Matrix] | None) -> "CochainComplex":
        return CochainComplex(self.dims, self.differentials, grams)

    def adjoint(self, p: int) -> Matrix:
        """d_p* : C^(p+1) -> C^p, the gram adjoint G_p^(-1) d_p^T G_(p+1)."""
        dt = self.d(p).T
        if self._identity_grams:
            return dt
        return self.gram(p).inverse() @ dt @ self.gram(p + 1)

    def laplacian(self, p: int) -> Matrix:
        if not (0 <= p <= self.top_degree):
            raise DomainError("degree %d outside 0..%d" % (p, self.top_degree),
                              where={"degree": p})
        lower = self.d(p - 1) @ self.adjoint(p - 1)
        upper = self.adjoint(p) @ self.d(p)
        return lower + upper

    def betti(self) -> list[int]:
        out = []
        for p in range(self.top_degree + 1):
            out.append(self.d(p).kernel_dim() - self.d(p - 1).rank())
        return out

    def is_acyclic(self) -> bool:
        return all(b == 0 for b in self.betti())

    def __eq__(self, other) -> bool:
        return (isinstance(other, CochainComplex) and self.dims == other.dims
                and self.differentials == other.differentials
                and self.grams == other.grams)

    def __hash__(self):
        return hash((self.dims, self.differentials, self.grams))

    def __repr__(self):
        return "CochainComplex(dims=%r)" % (list(self.dims),)


class InnerProducts:
    """A choice of Gram matrix per degree: symmetric and positive definite.

    Definiteness is checked exactly via leading principal minors, so a bad
    gram is rejected at construction rather than surfacing later as a
    singular Laplacian factor.
    """

    __slots__ = ("grams",)

    def __init__(self, grams: Sequence[Matrix]):
        grams = tuple(grams)
        for p, g in enumerate(grams):
            if g.nrows != g.ncols:
                raise ShapeError("gram %d is %dx%d, not square" % (p, g.nrows, g.ncols))
            if g.transpose() != g:
                raise DomainError("gram %d is not symmetric" % p, where={"degree": p})
            if not g.is_positive_definite():
                raise DomainError("gram %d is not positive definite "
                                  "(some leading principal minor <= 0)" % p,
                                  where={"degree": p})
        object.__setattr__(self, "grams", grams)

    def __setattr__(self, name, value):
        raise AttributeError("InnerProducts is immutable")

    @classmethod
    def identity(cls, dims: Sequence[int]) -> "InnerProducts":
        return cls([Matrix.identity(n) for n in dims])

    def __len__(self):
        return len(self.grams)

    def __getitem__(self, p: int) -> Matrix:
        return self.grams[p]

    def __iter__(self):
        return iter(self.grams)

    def __eq__(self, other):
        return isinstance(other, InnerProducts) and self.grams == other.grams

    def __hash__(self):
        return hash(self.grams)

    def __repr__(self):
        return "InnerProducts(dims=%r)" % [g.nrows for g in self.grams]


def with_inner_products(c: CochainComplex, g) -> CochainComplex:
    """Return c with grams replaced by g (InnerProducts or per-degree list).

    g = None keeps the complex's stored grams.
    """
    if g is None:
        return c
    if isinstance(g, InnerProducts):
        mats = list(g.grams)
    else:
        mats = list(InnerProducts(g).grams)
    if len(mats) != len(c.dims):
        raise ShapeError("expected %d grams, got %d" % (len(c.dims), len(mats)))
    return c.with_grams(mats)


def _check_degree(c: CochainComplex, p: int, hi: int) -> None:
    if not 0 <= p <= hi:
        raise DomainError("degree %d outside 0..%d" % (p, hi), where={"degree": p})


def adjoint(c: CochainComplex, g, p: int) -> Matrix:
    """Gram adjoint d_p* = G_p^-1 d_p^T G_(p+1) of the degree-p differential."""
    _check_degree(c, p, max(c.top_degree - 1, 0))
    return with_inner_products(c, g).adjoint(p)


def laplacian(c: CochainComplex, g, p: int) -> Matrix:
    """Combinatorial Laplacian d_(p-1) d_(p-1)* + d_p* d_p at degree p."""
    _check_degree(c, p, c.top_degree)
    return with_inner_products(c, g).laplacian(p)


def betti(c: CochainComplex, p: int) -> int:
    """Rational Betti number at degree p: dim ker d_p - rank d_(p-1)."""
    _check_degree(c, p, c.top_degree)
    return c.betti()[p]


class ChainMap:
    """Degreewise map f_p : source^p -> target^p commuting with d."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: CochainComplex, target: CochainComplex,
                 components: Sequence[Matrix]):
        if source.top_degree != target.top_degree:
            raise ShapeError("source and target have different lengths (%d vs %d); "
                             "pad with zero degrees first"
                             % (source.top_degree, target.top_degree))
        components = tuple(components)
        if len(components) != source.top_degree + 1:
            raise ShapeError("expected %d components, got %d"
                             % (source.top_degree + 1, len(components)))
        for p, f in enumerate(components):
            want = (target.dims[p], source.dims[p])
            if f.shape != want:
                raise ShapeError("component %d has shape %s, expected %s" % (p, f.shape, want))
        for p in range(source.top_degree):
            if target.d(p) @ components[p] != components[p + 1] @ source.d(p):
                raise DomainError("not a chain map: d f != f d at degree %d" % p,
                                  where={"degree": p})
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "components", components)

    def __setattr__(self, name, value):
        raise AttributeError("ChainMap is immutable")

    def component(self, p: int) -> Matrix:
        if 0 <= p <= self.source.top_degree:
            return self.components[p]
        return Matrix.zero(self.target.dim(p), self.source.dim(p))

    def __eq__(self, other):
        return (isinstance(other, ChainMap) and self.source == other.source
                and self.target == other.target and self.components == other.components)

    def __hash__(self):
        return hash((self.source, self.target, self.components))

    def __repr__(self):
        return "ChainMap(dims=%r)" % (list(self.source.dims),)


def identity_map(c: CochainComplex) -> ChainMap:
    return ChainMap(c, c, [Matrix.identity(n) for n in c.dims])


def mapping_cone(f: ChainMap) -> CochainComplex:
    """Cone of f : C -> C' with Cone^p = C^p (+) C'^(p-1).

    Differential in block form [[-d, 0], [f, d']]; the chain-map identity
    makes the square vanish.  Grams are inherited blockwise, so the cone of
    a map between complexes with inner products carries the induced ones.
    """
    src, tgt = f.source, f.target
    m = src.top_degree
    dims = [src.dim(p) + tgt.dim(p - 1) for p in range(m + 2)]
    diffs = []
    for p in range(m + 1):
        block = Matrix.block(
            [[-1 * src.d(p), None],
             [f.component(p), tgt.d(p - 1)]],
            row_dims=[src.dim(p + 1), tgt.dim(p)],
            col_dims=[src.dim(p), tgt.dim(p - 1)])
        diffs.append(block)
    grams = [Matrix.block([[src.gram(p), None], [None, tgt.gram(p - 1)]],
                          row_dims=[src.dim(p), tgt.dim(p - 1)],
                          col_dims=[src.dim(p), tgt.dim(p - 1)])
             for p in range(m + 2)]
    return CochainComplex(dims, diffs, grams)


def direct_sum(a: CochainComplex, b: CochainComplex) -> CochainComplex:
    """Degreewise direct sum; the shorter complex is padded with zeros on top."""
    m = max(a.top_degree, b.top_degree)
    dims = [a.dim(p) + b.dim(p) for p in range(m + 1)]
    diffs = [Matrix.block([[a.d(p), None], [None, b.d(p)]],
                          row_dims=[a.dim(p + 1), b.dim(p + 1)],
                          col_dims=[a.dim(p), b.dim(p)])
             for p in range(m)]
    grams = [Matrix.block([[a.gram(p), None], [None, b.gram(p)]],
                          row_dims=[a.dim(p), b.dim(p)],
                          col_dims=[a.dim(p), b.dim(p)])
             for p in range(m + 1)]
    return CochainComplex(dims, diffs, grams)


# ---------------------------------------------------------------------------
# Seeded generators


def _random_unimodular(rng: random.Random, n: int, ops: int | None = None) -> Matrix:
    # Product of elementary shears/swaps/sign flips: integer entries,
    # integer inverse, determinant +-1, entries kept small by using few ops.
    m = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    if ops is None:
        ops = n + 2
    for _ in range(ops if n > 1 else 0):
        kind = rng.randint(0, 2)
        i, j = rng.sample(range(n), 2)
        if kind == 0:
            c = rng.choice([-2, -1, 1, 2])
            m[i] = [a + c * b for a, b in zip(m[i], m[j])]
        elif kind == 1:
            m[i], m[j] = m[j], m[i]
        else:
            m[i] = [-a for a in m[i]]
    return Matrix(m, ncols=n)


def random_invertible(rng: random.Random, n: int) -> Matrix:
    """Random invertible matrix U1 D U2 with unimodular U's and a nonzero
    integer diagonal, so the determinant genuinely varies (unlike the
    unimodular generator, whose determinant is always +-1)."""
    d = Matrix.diagonal([Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
                         for _ in range(n)])
    return _random_unimodular(rng, n) @ d @ _random_unimodular(rng, n)


def random_gram(rng: random.Random, n: int, spread: int = 2) -> Matrix:
    """Random symmetric positive-definite matrix L^T L + I with small integer L."""
    L = Matrix([[Fraction(rng.randint(-spread, spread)) for _ in range(n)]
                for _ in range(n)], ncols=n)
    return L.T @ L + Matrix.identity(n)


def random_inner_products(rng: random.Random, dims: Sequence[int],
                          spread: int = 2) -> InnerProducts:
    return InnerProducts([random_gram(rng, n, spread) for n in dims])


def _planned_random_complex(rng: random.Random, max_degree: int, max_dim: int,
                            acyclic: bool) -> tuple[CochainComplex, list[int]]:
    m = rng.randint(1, max_degree)
    for _ in range(100):
        two_term = [rng.randint(0, 2) for _ in range(m)]  # acyclic pieces spanning (p, p+1)
        planted = [0] * (m + 1) if acyclic else [rng.randint(0, 2) for _ in range(m + 1)]
        dims = [(two_term[p - 1] if p > 0 else 0) + (two_term[p] if p < m else 0) + planted[p]
                for p in range(m + 1)]
        if all(d <= max_dim for d in dims) and sum(dims) > 0:
            break
    else:  # pragma: no cover - the sampler above always terminates in practice
        raise RuntimeError("could not sample dims under max_dim=%d" % max_dim)
    # Standard-basis layout in degree p: [incoming two_term[p-1] | outgoing two_term[p] | planted]
    diffs = []
    for p in range(m):
        d = [[Fraction(0)] * dims[p] for _ in range(dims[p + 1])]
        out_offset = two_term[p - 1] if p > 0 else 0
        for i in range(two_term[p]):
            c = Fraction(rng.choice([x for x in range(-3, 4) if x]), rng.randint(1, 2))
            d[i][out_offset + i] = c
        diffs.append(Matrix(d, ncols=dims[p]))
    basis = [_random_unimodular(rng, n) for n in dims]
    inv = [s.inverse() for s in basis]
    diffs = [basis[p + 1] @ diffs[p] @ inv[p] for p in range(m)]
    return CochainComplex(dims, diffs), list(planted)


def random_complex(seed: int = 0, max_degree: int = 3, max_dim: int = 5,
                   acyclic: bool = False,
                   rng: random.Random | None = None) -> CochainComplex:
    """Seeded random complex with d d = 0 by construction.

    Built as a direct sum of elementary acyclic two-term pieces and planted
    homology generators, then conjugated degreewise by random unimodular
    integer matrices.  With acyclic=True all homology is suppressed.
    """
    if rng is None:
        rng = random.Random(seed)
    return _planned_random_complex(rng, max_degree, max_dim, acyclic)[0]
