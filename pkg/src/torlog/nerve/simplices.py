"""Nerve simplices for a log-functor instance: chains of composable morphisms
with face and degeneracy maps, and the logarithm of a simplex as the sum of
its insertion-embedded edge logarithms."""

from __future__ import annotations

from ..linalg import DomainError, Matrix
from .blocks import MonoidalWord, eta_insert


class NerveSimplex:
    """Objects x_0, ..., x_p and morphisms alpha_j : x_j -> x_(j+1)."""

    __slots__ = ("instance", "objects", "morphisms")

    def __init__(self, instance, objects, morphisms):
        objects = tuple(objects)
        morphisms = tuple(morphisms)
        if len(objects) != len(morphisms) + 1 or not objects:
            raise DomainError("a p-simplex needs p+1 objects and p morphisms; "
                              "got %d and %d" % (len(objects), len(morphisms)))
        for j, f in enumerate(morphisms):
            if not instance.is_morphism(f, objects[j], objects[j + 1]):
                raise DomainError("edge %d is not a morphism x_%d -> x_%d"
                                  % (j, j, j + 1), where={"edge": j})
        object.__setattr__(self, "instance", instance)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "morphisms", morphisms)

    def __setattr__(self, name, value):
        raise AttributeError("NerveSimplex is immutable")

    @property
    def p(self) -> int:
        return len(self.morphisms)

    def word(self) -> MonoidalWord:
        return MonoidalWord([self.instance.letter(x) for x in self.objects])

    def __repr__(self):
        return "NerveSimplex(p=%d, %s)" % (self.p, self.word())


def face(s: NerveSimplex, j: int) -> NerveSimplex:
    """d_j: drop x_j; interior faces compose the adjacent morphisms."""
    p = s.p
    if p < 1:
        raise DomainError("a 0-simplex has no faces")
    if not 0 <= j <= p:
        raise DomainError("face index %d outside 0..%d" % (j, p), where={"index": j})
    if j == 0:
        return NerveSimplex(s.instance, s.objects[1:], s.morphisms[1:])
    if j == p:
        return NerveSimplex(s.instance, s.objects[:-1], s.morphisms[:-1])
    merged = s.instance.compose(s.morphisms[j - 1], s.morphisms[j])
    return NerveSimplex(s.instance, s.objects[:j] + s.objects[j + 1:],
                        s.morphisms[:j - 1] + (merged,) + s.morphisms[j + 1:])


def degeneracy(s: NerveSimplex, j: int) -> NerveSimplex:
    """s_j: repeat x_j and insert its identity morphism."""
    p = s.p
    if not 0 <= j <= p:
        raise DomainError("degeneracy index %d outside 0..%d" % (j, p),
                          where={"index": j})
    ident = s.instance.identity(s.objects[j])
    return NerveSimplex(s.instance, s.objects[:j + 1] + s.objects[j:],
                        s.morphisms[:j] + (ident,) + s.morphisms[j:])


def _edge_embedding(s: NerveSimplex, j: int):
    """Composite insertion embedding F(x_j (x) x_(j+1)) -> F(x_0 (x) ... (x) x_p),
    built letter by letter so the eta machinery is what gets exercised."""
    instance = s.instance
    word = MonoidalWord([instance.letter(s.objects[j]),
                         instance.letter(s.objects[j + 1])])
    chain = []
    for i in range(j + 2, s.p + 1):
        ins = eta_insert(word, len(word), instance.letter(s.objects[i]))
        chain.append(ins)
        word = ins.target_word
    for i in range(j - 1, -1, -1):
        ins = eta_insert(word, 0, instance.letter(s.objects[i]))
        chain.append(ins)
        word = ins.target_word
    return chain, word


def log_simplex(instance, s: NerveSimplex) -> "Matrix | object":
    """Sum over edges of the edge logarithm embedded into F(x_0 (x) ... (x) x_p).

    For a matrix-valued instance the result is a square matrix on the full
    word; a 0-simplex gives the zero operator.  Formal instances return their
    own record sum (characters add; no embedding is involved).
    """
    if s.instance is not instance:
        raise DomainError("simplex belongs to a different instance")
    if not instance.matrix_valued:
        return instance.formal_log_sum(s)
    total = s.word().total_dim
    out = Matrix.zero(total, total)
    for j in range(s.p):
        t = instance.log(s.morphisms[j], s.objects[j], s.objects[j + 1])
        chain, word = _edge_embedding(s, j)
        for ins in chain:
            t = ins.embed(t)
        if word != s.word():  # pragma: no cover - embedding is position-exact
            raise DomainError("edge embedding landed in the wrong word")
        out = out + t
    return out
