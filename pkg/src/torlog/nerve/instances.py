"""The two registered log-functor instances and a deliberately broken one.

The harness in axioms.py only needs a small protocol from an instance:
objects, a letter (label, dim) per object, identity/compose/is_morphism on
morphism data, log and character, and random generators.  The Fredholm
instance is matrix valued: log lands in the block space of source (x) target
and the character is the index.  The h-bordism instance is formal: a morphism
is a chain homotopy equivalence of based acyclic complexes, its log is the
pair of signed weighted Laplacian-log records of source and target, and the
character is the torsion difference tau(target) - tau(source).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from ..chain import (ChainMap, CochainComplex, identity_map, random_complex,
                     random_gram, random_invertible)
from ..fredholm import index_character, log_fred, random_idempotent
from ..k1 import compose as compose_maps
from ..k1 import random_self_equivalence, torsion_of_equivalence
from ..linalg import DomainError, LogValue, Matrix
from ..torsion import TorsionLogarithm, torsion_logarithm


class LogFunctorInstance:
    """Protocol base; concrete instances fill in the methods below."""

    name = "abstract"
    matrix_valued = True

    def letter(self, x):
        raise NotImplementedError

    def identity(self, x):
        raise NotImplementedError

    def compose(self, f, g):
        """f then g (diagrammatic order)."""
        raise NotImplementedError

    def is_morphism(self, f, x, y) -> bool:
        raise NotImplementedError

    def log(self, f, x, y):
        raise NotImplementedError

    def character(self, f, x, y):
        raise NotImplementedError

    def zero_character(self):
        raise NotImplementedError

    def morphism_endpoints(self, f):
        raise NotImplementedError

    def random_object(self, rng: random.Random):
        raise NotImplementedError

    def random_edge(self, rng: random.Random, x):
        """A random morphism out of x, together with its target."""
        raise NotImplementedError

    def random_endo(self, rng: random.Random, x):
        raise NotImplementedError

    def random_conjugator(self, rng: random.Random, x):
        """(u, u_inv, y) with u : x -> y exactly invertible; conjugation sends
        an endomorphism a of x to u_inv;a;u on y."""
        raise NotImplementedError

    def random_idempotent_endo(self, rng: random.Random, x):
        """An idempotent endomorphism of x, or None if the instance has no
        canonical nontrivial ones."""
        return None

    def formal_log_sum(self, s) -> "FormalLogSum":
        """Simplex log for non-matrix-valued instances: the record sum of the
        edge logs (characters add; embedding is a no-op on formal records)."""
        return FormalLogSum(tuple(
            self.log(s.morphisms[j], s.objects[j], s.objects[j + 1])
            for j in range(s.p)))


# ---------------------------------------------------------------------------
# Fredholm instance


class FredholmInstance(LogFunctorInstance):
    """Objects are dimensions, morphisms arbitrary rational matrices; log is
    the block logarithm (id - qz) (+) (zq - id') with the Moore-Penrose
    parametrix, and the character is the index."""

    name = "fredholm"
    matrix_valued = True

    def letter(self, x):
        return ("h%d" % x, int(x))

    def identity(self, x):
        return Matrix.identity(x)

    def compose(self, f, g):
        return g @ f

    def is_morphism(self, f, x, y) -> bool:
        return isinstance(f, Matrix) and f.shape == (y, x)

    def log(self, f, x, y):
        if f.shape != (y, x):
            raise DomainError("morphism shape %s does not match objects (%d, %d)"
                              % (f.shape, x, y))
        return log_fred(f)

    def character(self, f, x, y):
        return index_character(f)

    def zero_character(self):
        return Fraction(0)

    def morphism_endpoints(self, f):
        return f.ncols, f.nrows

    def random_object(self, rng):
        return rng.choice([0, 1, 1, 2, 2, 3, 3, 4])

    def random_edge(self, rng, x):
        y = self.random_object(rng)
        r = rng.randint(0, min(x, y)) if min(x, y) else 0
        a = Matrix([[Fraction(rng.randint(-2, 2)) for _ in range(r)]
                    for _ in range(y)], ncols=r)
        b = Matrix([[Fraction(rng.randint(-2, 2)) for _ in range(x)]
                    for _ in range(r)], ncols=x)
        return a @ b, y

    def random_endo(self, rng, x):
        return Matrix([[Fraction(rng.randint(-2, 2)) for _ in range(x)]
                       for _ in range(x)], ncols=x)

    def random_conjugator(self, rng, x):
        u = random_invertible(rng, x)
        return u, u.inverse(), x

    def random_idempotent_endo(self, rng, x):
        return random_idempotent(rng, x)


def fredholm_instance() -> FredholmInstance:
    return FredholmInstance()


def corrupted_instance() -> FredholmInstance:
    """Negative control: the log (and character) of any morphism out of an
    odd-dimensional source is doubled, which breaks composition additivity."""

    class Corrupted(FredholmInstance):
        name = "fredholm-corrupted"

        def log(self, f, x, y):
            base = super().log(f, x, y)
            return base + base if x % 2 else base

        def character(self, f, x, y):
            base = super().character(f, x, y)
            return 2 * base if x % 2 else base

    return Corrupted()


# ---------------------------------------------------------------------------
# h-bordism instance


@dataclass(frozen=True)
class HBordObject:
    """A based acyclic complex with chosen inner products, under a label."""
    label: str
    complex: CochainComplex


class HBordLog:
    """Formal log of an equivalence f : M -> M': the pair of signed weighted
    Laplacian-log records of source and target, with weights beta_p = p.
    Its character is tau(M') - tau(M)."""

    __slots__ = ("source_log", "target_log")

    def __init__(self, f: ChainMap):
        beta_src = list(range(f.source.top_degree + 1))
        beta_tgt = list(range(f.target.top_degree + 1))
        object.__setattr__(self, "source_log", torsion_logarithm(f.source, beta_src))
        object.__setattr__(self, "target_log", torsion_logarithm(f.target, beta_tgt))

    def __setattr__(self, name, value):
        raise AttributeError("HBordLog is immutable")

    def character(self) -> LogValue:
        return self.target_log.character() - self.source_log.character()


class FormalLogSum:
    """Sum of formal log records; the character adds."""

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        object.__setattr__(self, "parts", tuple(parts))

    def __setattr__(self, name, value):
        raise AttributeError("FormalLogSum is immutable")

    def character(self) -> LogValue:
        out = LogValue.zero()
        for part in self.parts:
            out = out + part.character()
        return out


@dataclass(frozen=True)
class ClosedMorphism:
    """A unit-to-unit morphism with a declared factorization 1 -> M -> 1.

    Logging a closed morphism goes through the factorization; the resulting
    character telescopes to tau(1) - tau(1) = 0 whatever M is, which is the
    independence-of-splitting property."""
    into: ChainMap
    outof: ChainMap

    def __post_init__(self):
        if any(self.into.source.dims) or any(self.outof.target.dims):
            raise DomainError("factorization must start and end at the unit "
                              "(all degrees zero dimensional)")
        if self.into.target != self.outof.source:
            raise DomainError("factorization legs do not meet at a common object")


def _unit_complex() -> CochainComplex:
    return CochainComplex((0,), ())


class HBordismInstance(LogFunctorInstance):
    name = "hbordism"
    matrix_valued = False

    def __init__(self, random_grams: bool = False):
        self.random_grams = random_grams

    # -- objects ------------------------------------------------------------

    def object(self, c: CochainComplex, label: str = "M") -> HBordObject:
        for p, b in enumerate(c.betti()):
            if b != 0:
                raise DomainError("non-acyclic object rejected: betti_%d = %d"
                                  % (p, b), where={"degree": p, "betti": b})
        return HBordObject(label, c)

    def unit_object(self) -> HBordObject:
        return HBordObject("1", _unit_complex())

    def letter(self, x: HBordObject):
        return (x.label, x.complex.total_dim)

    # -- morphisms ----------------------------------------------------------

    def identity(self, x: HBordObject):
        return identity_map(x.complex)

    def compose(self, f, g):
        if isinstance(f, ClosedMorphism) or isinstance(g, ClosedMorphism):
            raise DomainError("closed morphisms compose through their "
                              "factorizations; compose the legs instead")
        return compose_maps(f, g)

    def is_morphism(self, f, x, y) -> bool:
        if isinstance(f, ClosedMorphism):
            return (x.complex.total_dim == 0 and y.complex.total_dim == 0)
        return (isinstance(f, ChainMap) and f.source == x.complex
                and f.target == y.complex)

    def log(self, f, x, y):
        if isinstance(f, ClosedMorphism):
            return FormalLogSum((HBordLog(f.into), HBordLog(f.outof)))
        if x.complex.total_dim == 0 and y.complex.total_dim == 0:
            raise DomainError("closed morphism (unit to unit) needs a declared "
                              "factorization through a non-unit object")
        return HBordLog(f)

    def character(self, f, x, y) -> LogValue:
        return self.log(f, x, y).character()

    def zero_character(self):
        return LogValue.zero()

    def morphism_endpoints(self, f):
        if isinstance(f, ClosedMorphism):
            return self.unit_object(), self.unit_object()
        return HBordObject("src", f.source), HBordObject("tgt", f.target)

    # -- generators ----------------------------------------------------------

    def _grams_for(self, rng, c: CochainComplex) -> CochainComplex:
        if not self.random_grams:
            return c
        return c.with_grams([random_gram(rng, n) for n in c.dims])

    def random_object(self, rng) -> HBordObject:
        c = random_complex(rng=rng, max_degree=rng.randint(1, 3), max_dim=3,
                           acyclic=True)
        return HBordObject("M%04d" % rng.randint(0, 9999), self._grams_for(rng, c))

    def _gauge(self, rng, x: HBordObject):
        """Unimodular degreewise base change f : x -> x' with d' = V d V^-1."""
        c = x.complex
        vs = [random_invertible(rng, n) for n in c.dims]
        diffs = [vs[p + 1] @ c.d(p) @ vs[p].inverse()
                 for p in range(c.top_degree)]
        target = self._grams_for(rng, CochainComplex(c.dims, diffs))
        f = ChainMap(c, target, vs)
        return f, HBordObject("M%04d" % rng.randint(0, 9999), target)

    def random_edge(self, rng, x: HBordObject):
        f, y = self._gauge(rng, x)
        if rng.random() < 0.5:
            f = compose_maps(f, random_self_equivalence(rng, y.complex))
        return f, y

    def random_endo(self, rng, x: HBordObject):
        return random_self_equivalence(rng, x.complex)

    def random_conjugator(self, rng, x: HBordObject):
        c = x.complex
        vs = [random_invertible(rng, n) for n in c.dims]
        diffs = [vs[p + 1] @ c.d(p) @ vs[p].inverse()
                 for p in range(c.top_degree)]
        target = CochainComplex(c.dims, diffs, grams=list(c.grams) or None)
        u = ChainMap(c, target, vs)
        u_inv = ChainMap(target, c, [v.inverse() for v in vs])
        return u, u_inv, HBordObject("M%04d" % rng.randint(0, 9999), target)

    # -- the cross-check between the two torsion definitions -----------------

    def torsion_cross_check(self, rng) -> dict | None:
        """character(f) must equal log|T(cone f)| for an equivalence between
        identity-gram objects; returns None on success, a detail dict on
        failure."""
        c = random_complex(rng=rng, max_degree=rng.randint(1, 3), max_dim=3,
                           acyclic=True)
        x = HBordObject("M", c)
        vs = [random_invertible(rng, n) for n in c.dims]
        diffs = [vs[p + 1] @ c.d(p) @ vs[p].inverse()
                 for p in range(c.top_degree)]
        target = CochainComplex(c.dims, diffs)
        f = ChainMap(c, target, vs)
        if rng.random() < 0.5:
            f = compose_maps(f, random_self_equivalence(rng, target))
        y = HBordObject("Mp", target)
        char = self.character(f, x, y)
        t = torsion_of_equivalence(f)
        expect = LogValue.log(t.abs)
        if char == expect:
            return None
        return {"dims": list(c.dims), "character": repr(char.terms()),
                "cone_torsion": str(t.abs)}


def hbordism_instance(random_grams: bool = False) -> HBordismInstance:
    return HBordismInstance(random_grams=random_grams)
