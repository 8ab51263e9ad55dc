"""Determinant-class torsion of acyclic complexes and chain equivalences.

A chain contraction gamma (d gamma + gamma d = id) makes d + gamma an
isomorphism from the even cochain degrees to the odd ones; its exact
rational determinant is the torsion of the based acyclic complex.  The
sign depends on the contraction and on basis ordering, the absolute value
does not.  The torsion of a chain equivalence f is the torsion of its
mapping cone, which only requires the cone to be acyclic (source and
target may carry homology, e.g. multiplication by 3 on a one-degree
complex has torsion 3).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .chain import ChainMap, CochainComplex, mapping_cone, with_inner_products
from .linalg import DomainError, Matrix


class ChainContraction:
    """Degree-lowering maps gamma_p : C^p -> C^(p-1) with d gamma + gamma d = id.

    Existence forces acyclicity; the constructor checks the identity
    exactly at every degree.
    """

    __slots__ = ("complex", "gammas")

    def __init__(self, c: CochainComplex, gammas: Sequence[Matrix]):
        gammas = tuple(gammas)
        if len(gammas) != c.top_degree + 1:
            raise DomainError("expected %d contraction components, got %d"
                              % (c.top_degree + 1, len(gammas)))
        for p, g in enumerate(gammas):
            want = (c.dim(p - 1), c.dim(p))
            if g.shape != want:
                raise DomainError("gamma_%d has shape %s, expected %s" % (p, g.shape, want),
                                  where={"degree": p})
        for p in range(c.top_degree + 1):
            lower = c.d(p - 1) @ gammas[p]
            upper = (gammas[p + 1] if p + 1 <= c.top_degree
                     else Matrix.zero(c.dim(p), c.dim(p + 1))) @ c.d(p)
            if lower + upper != Matrix.identity(c.dim(p)):
                raise DomainError("d gamma + gamma d != id at degree %d" % p,
                                  where={"degree": p})
        object.__setattr__(self, "complex", c)
        object.__setattr__(self, "gammas", gammas)

    def __setattr__(self, name, value):
        raise AttributeError("ChainContraction is immutable")

    def gamma(self, p: int) -> Matrix:
        if 0 <= p <= self.complex.top_degree:
            return self.gammas[p]
        return Matrix.zero(self.complex.dim(p - 1), self.complex.dim(p))


def find_contraction(c: CochainComplex, g=None) -> ChainContraction:
    """Canonical contraction gamma_p = d* Delta^(-1) of an acyclic complex.

    The Laplacians of an acyclic complex are invertible, and
    d gamma + gamma d = id follows from Delta commuting with d.  Different
    grams give different contractions; any of them feeds the torsion.  Pass g
    (InnerProducts or a per-degree list) to override the stored grams.
    """
    c = with_inner_products(c, g)
    for p, b in enumerate(c.betti()):
        if b != 0:
            raise DomainError("complex is not acyclic: betti_%d = %d" % (p, b),
                              where={"degree": p, "betti": b})
    gammas = []
    for p in range(c.top_degree + 1):
        if c.dim(p) == 0 or c.dim(p - 1) == 0:
            gammas.append(Matrix.zero(c.dim(p - 1), c.dim(p)))
            continue
        delta = c.laplacian(p)
        gammas.append(c.adjoint(p - 1) @ delta.inverse())
    return ChainContraction(c, gammas)


@dataclass(frozen=True)
class K1Torsion:
    value: Fraction

    @property
    def abs(self) -> Fraction:
        return abs(self.value)

    @property
    def sign(self) -> int:
        return 1 if self.value > 0 else -1


def torsion_of_acyclic(c: CochainComplex,
                       contraction: ChainContraction | None = None) -> K1Torsion:
    """det(d + gamma) from the even cochain degrees to the odd ones.

    Two-term d = [2] gives 2; the circle complex d = R - I gives
    det(R - I) = 4/5 up to sign.  |value| is independent of the
    contraction; the sign is not.
    """
    if contraction is None:
        contraction = find_contraction(c)
    elif contraction.complex.differentials != c.differentials or \
            contraction.complex.dims != c.dims:
        raise DomainError("contraction belongs to a different complex")
    m = c.top_degree
    evens = [p for p in range(m + 1) if p % 2 == 0]
    odds = [p for p in range(m + 1) if p % 2 == 1]
    grid = []
    for q in odds:
        row = []
        for p in evens:
            if q == p + 1:
                row.append(c.d(p))
            elif q == p - 1:
                row.append(contraction.gamma(p))
            else:
                row.append(None)
        grid.append(row)
    if not odds or not evens:
        # all dims in the missing parity are zero on an acyclic complex
        return K1Torsion(Fraction(1))
    mat = Matrix.block(grid, row_dims=[c.dim(q) for q in odds],
                       col_dims=[c.dim(p) for p in evens])
    if not mat.is_square():  # pragma: no cover - acyclicity forces chi = 0
        raise DomainError("even/odd total dimensions differ; complex not acyclic?")
    val = mat.det()
    if val == 0:  # pragma: no cover - contraction makes d + gamma invertible
        raise DomainError("d + gamma is singular")
    return K1Torsion(val)


def torsion_of_equivalence(f: ChainMap) -> K1Torsion:
    """Torsion of the mapping cone of f; needs f to be a homotopy equivalence."""
    cone = mapping_cone(f)
    for p, b in enumerate(cone.betti()):
        if b != 0:
            raise DomainError("not a homotopy equivalence: cone betti_%d = %d" % (p, b),
                              where={"degree": p, "betti": b})
    return torsion_of_acyclic(cone)


def compose(f: ChainMap, g: ChainMap) -> ChainMap:
    """f then g (diagrammatic order); the middle complexes must agree exactly,
    grams included."""
    if f.target != g.source:
        raise DomainError("cannot compose: target of first differs from source of second")
    return ChainMap(f.source, g.target,
                    [g.components[p] @ f.components[p]
                     for p in range(f.source.top_degree + 1)])


# ---------------------------------------------------------------------------
# Generators used by tests and verification suites


def random_self_equivalence(rng: random.Random, c: CochainComplex,
                            spread: int = 2) -> ChainMap:
    """lambda id + (d s + s d) for random s: always a chain map, and chain
    homotopic to lambda id, hence an equivalence for lambda != 0."""
    lam = Fraction(rng.choice([x for x in range(-3, 4) if x]))
    s = [Matrix([[Fraction(rng.randint(-spread, spread)) for _ in range(c.dim(p))]
                 for _ in range(c.dim(p - 1))], ncols=c.dim(p))
         for p in range(c.top_degree + 2)]
    comps = []
    for p in range(c.top_degree + 1):
        h = c.d(p - 1) @ s[p] + s[p + 1] @ c.d(p)
        comps.append(lam * Matrix.identity(c.dim(p)) + h)
    return ChainMap(c, c, comps)
