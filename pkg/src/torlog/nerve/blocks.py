"""Block spaces attached to monoidal words, with permutation conjugators and
trace-preserving insertion embeddings.

A word (x_1, ..., x_n) of labeled letters with dimensions d_i gets the block
space F(word) = End(Q^(d_1 + ... + d_n)) together with its block structure
(offsets).  Permuting the letters acts by conjugation with a block permutation
matrix mu_sigma; inserting a letter gives a non-unital ring embedding
eta: F(word) -> F(longer word) by zero padding, with the block projection as
an exact left inverse.  Both operations preserve traces on the nose, which is
what makes characters of embedded logarithms well defined.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from ..linalg import DomainError, Matrix, ShapeError

Letter = tuple  # (label: str, dim: int)


def _check_letter(v) -> tuple[str, int]:
    if isinstance(v, MonoidalWord):
        if len(v) != 1:
            raise DomainError("expected a single letter, got a word of length %d" % len(v))
        return v.letters[0]
    label, dim = v
    dim = int(dim)
    if dim < 0:
        raise DomainError("letter %r has negative dimension %d" % (label, dim))
    return (str(label), dim)


class MonoidalWord:
    """Ordered letters (label, dim); the empty word is the monoidal unit."""

    __slots__ = ("letters",)

    def __init__(self, letters: Sequence = ()):
        object.__setattr__(self, "letters", tuple(_check_letter(v) for v in letters))

    def __setattr__(self, name, value):
        raise AttributeError("MonoidalWord is immutable")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __eq__(self, other):
        return isinstance(other, MonoidalWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def dims(self) -> list[int]:
        return [d for _, d in self.letters]

    @property
    def total_dim(self) -> int:
        return sum(d for _, d in self.letters)

    def tensor(self, other: "MonoidalWord") -> "MonoidalWord":
        return MonoidalWord(self.letters + other.letters)

    def insert(self, k: int, v) -> "MonoidalWord":
        if not 0 <= k <= len(self.letters):
            raise DomainError("insert position %d outside 0..%d" % (k, len(self.letters)),
                              where={"position": k})
        v = _check_letter(v)
        return MonoidalWord(self.letters[:k] + (v,) + self.letters[k:])

    def delete(self, k: int) -> "MonoidalWord":
        if not 0 <= k < len(self.letters):
            raise DomainError("delete position %d outside 0..%d" % (k, len(self.letters) - 1))
        return MonoidalWord(self.letters[:k] + self.letters[k + 1:])

    def __repr__(self):
        return "MonoidalWord(%s)" % ", ".join("%s:%d" % lv for lv in self.letters)


class BlockSpace:
    """F(word): the full matrix algebra on the sum of the letter spaces,
    remembered together with the block offsets."""

    __slots__ = ("word", "offsets")

    def __init__(self, word: MonoidalWord):
        offsets = [0]
        for _, d in word:
            offsets.append(offsets[-1] + d)
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "offsets", tuple(offsets))

    def __setattr__(self, name, value):
        raise AttributeError("BlockSpace is immutable")

    @property
    def dim(self) -> int:
        return self.offsets[-1]

    def block_span(self, i: int) -> tuple[int, int]:
        return self.offsets[i], self.offsets[i + 1]

    def __eq__(self, other):
        return isinstance(other, BlockSpace) and self.word == other.word

    def __repr__(self):
        return "BlockSpace(dim=%d, offsets=%r)" % (self.dim, list(self.offsets))


def f_space(w: MonoidalWord) -> BlockSpace:
    """Block space of a word; the empty word gives the zero algebra (0 x 0)."""
    if not isinstance(w, MonoidalWord):
        w = MonoidalWord(w)
    return BlockSpace(w)


# ---------------------------------------------------------------------------
# Permutations


def _check_permutation(sigma: Sequence[int], n: int) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if len(sigma) != n:
        raise DomainError("permutation has arity %d, word has %d letters"
                          % (len(sigma), n), where={"arity": len(sigma)})
    if sorted(sigma) != list(range(n)):
        raise DomainError("not a permutation of 0..%d: %r" % (n - 1, list(sigma)))
    return sigma


def permute_word(w: MonoidalWord, sigma: Sequence[int]) -> MonoidalWord:
    """Active permutation: the letter at position i moves to position sigma[i]."""
    sigma = _check_permutation(sigma, len(w))
    out = [None] * len(w)
    for i, s in enumerate(sigma):
        out[s] = w[i]
    return MonoidalWord(out)


def mu_sigma(w: MonoidalWord, sigma: Sequence[int]) -> Matrix:
    """Block permutation matrix P with P e_(block i) = e_(block sigma[i]).

    Operators transform by T -> P T P^-1 (and P^-1 = P^T).  The assignment is
    a strict group action: mu(sigma' o sigma) = mu_(sigma') mu_(sigma), where
    mu_(sigma') is formed on the permuted word.
    """
    if not isinstance(w, MonoidalWord):
        w = MonoidalWord(w)
    sigma = _check_permutation(sigma, len(w))
    src = BlockSpace(w)
    dst = BlockSpace(permute_word(w, sigma))
    n = src.dim
    entries = [[Fraction(0)] * n for _ in range(n)]
    for i, s in enumerate(sigma):
        r0 = dst.offsets[s]
        c0 = src.offsets[i]
        for k in range(w[i][1]):
            entries[r0 + k][c0 + k] = Fraction(1)
    return Matrix(entries, ncols=n)


def compose_permutations(after: Sequence[int], first: Sequence[int]) -> tuple[int, ...]:
    """(after o first)[i] = after[first[i]]."""
    return tuple(after[f] for f in first)


# ---------------------------------------------------------------------------
# Insertions


class EtaInsertion:
    """Zero-padded block embedding F(w) -> F(w with letter v at position k).

    embed(T) = E T E^T with E the 0/1 coordinate inclusion; it is a
    (non-unital) ring homomorphism because E^T E = id, and it preserves
    traces.  project is the exact left inverse T' -> E^T T' E.
    """

    __slots__ = ("source_word", "target_word", "position", "matrix")

    def __init__(self, source_word: MonoidalWord, position: int, letter):
        letter = _check_letter(letter)
        target_word = source_word.insert(position, letter)
        src = BlockSpace(source_word)
        dst = BlockSpace(target_word)
        entries = [[Fraction(0)] * src.dim for _ in range(dst.dim)]
        for i in range(len(source_word)):
            j = i if i < position else i + 1
            r0, c0 = dst.offsets[j], src.offsets[i]
            for k in range(source_word[i][1]):
                entries[r0 + k][c0 + k] = Fraction(1)
        object.__setattr__(self, "source_word", source_word)
        object.__setattr__(self, "target_word", target_word)
        object.__setattr__(self, "position", position)
        object.__setattr__(self, "matrix", Matrix(entries, ncols=src.dim))

    def __setattr__(self, name, value):
        raise AttributeError("EtaInsertion is immutable")

    def embed(self, t: Matrix) -> Matrix:
        n = self.matrix.ncols
        if t.shape != (n, n):
            raise ShapeError("operator is %s, source space has dim %d" % (t.shape, n))
        return self.matrix @ t @ self.matrix.T

    def project(self, t: Matrix) -> Matrix:
        m = self.matrix.nrows
        if t.shape != (m, m):
            raise ShapeError("operator is %s, target space has dim %d" % (t.shape, m))
        return self.matrix.T @ t @ self.matrix

    def __repr__(self):
        return "EtaInsertion(%r at %d -> %r)" % (self.source_word, self.position,
                                                 self.target_word)


def eta_insert(w: MonoidalWord, k: int, v) -> EtaInsertion:
    """Insertion morphism eta^k_v : F(w) -> F(w with v at position k)."""
    if not isinstance(w, MonoidalWord):
        w = MonoidalWord(w)
    return EtaInsertion(w, k, v)


# ---------------------------------------------------------------------------
# Verification suites


def _random_word(rng: random.Random, max_len: int = 4, max_dim: int = 3,
                 allow_empty: bool = True) -> MonoidalWord:
    lo = 0 if allow_empty else 1
    n = rng.randint(lo, max_len)
    return MonoidalWord([("x%d" % i, rng.randint(0, max_dim)) for i in range(n)])


def _random_operator(rng: random.Random, n: int, spread: int = 3) -> Matrix:
    return Matrix([[Fraction(rng.randint(-spread, spread)) for _ in range(n)]
                   for _ in range(n)], ncols=n)


def _report(name: str, trials: int, seed, failures: int, counterexample) -> dict:
    return {"name": name, "trials": trials, "seed": seed,
            "failures": failures, "counterexample": counterexample,
            "ok": failures == 0}


def verify_eta_commutation(trials: int = 1000, seed: int = 0) -> dict:
    """Check the insertion commutation law on random words and positions.

    Inserting v at k and then z at l (in the enlarged word) must agree with
    the opposite order at the adjusted positions: z at l-1 first when k < l,
    else v at k+1 second.  Agreement is entrywise equality of the composite
    embedding matrices, plus a spot check on a random operator.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = random.Random(seed)
    failures = 0
    counterexample = None
    for trial in range(trials):
        w = _random_word(rng)
        v = ("v", rng.randint(0, 3))
        z = ("z", rng.randint(0, 3))
        k = rng.randint(0, len(w))
        l = rng.randint(0, len(w) + 1)
        first_v = eta_insert(w, k, v)
        route_a = eta_insert(first_v.target_word, l, z)
        if k < l:
            first_z = eta_insert(w, l - 1, z)
            route_b = eta_insert(first_z.target_word, k, v)
        else:
            first_z = eta_insert(w, l, z)
            route_b = eta_insert(first_z.target_word, k + 1, v)
        ea = route_a.matrix @ first_v.matrix
        eb = route_b.matrix @ first_z.matrix
        same_word = route_a.target_word == route_b.target_word
        ok = same_word and ea == eb
        if ok and w.total_dim:
            t = _random_operator(rng, w.total_dim)
            ok = route_a.embed(first_v.embed(t)) == route_b.embed(first_z.embed(t))
        if not ok:
            failures += 1
            if counterexample is None:
                counterexample = {"trial": trial, "word": repr(w), "k": k, "l": l,
                                  "v": v[1], "z": z[1]}
    return _report("eta-commutation", trials, seed, failures, counterexample)


def verify_trace_compat(instance=None, trials: int = 1000, seed: int = 0) -> dict:
    """trace(eta(T)) = trace(T) and trace(P T P^-1) = trace(T) exactly.

    When an instance is supplied its random objects provide the letter
    dimensions, so the words exercised are the ones its logs live on;
    otherwise generic letters are used.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = random.Random(seed)
    failures = 0
    counterexample = None
    for trial in range(trials):
        if instance is None:
            w = _random_word(rng)
        else:
            n = rng.randint(0, 3)
            w = MonoidalWord([instance.letter(instance.random_object(rng))
                              for _ in range(n)])
        t = _random_operator(rng, f_space(w).dim)
        ins = eta_insert(w, rng.randint(0, len(w)), ("y", rng.randint(0, 3)))
        ok = ins.embed(t).trace() == t.trace()
        if ok and len(w):
            sigma = list(range(len(w)))
            rng.shuffle(sigma)
            p = mu_sigma(w, sigma)
            ok = (p @ t @ p.T).trace() == t.trace()
        if not ok:
            failures += 1
            if counterexample is None:
                counterexample = {"trial": trial, "word": repr(w)}
    return _report("trace-compatibility", trials, seed, failures, counterexample)


def verify_mu_cocycle(trials: int = 1000, seed: int = 0) -> dict:
    """mu(sigma' o sigma) = mu(sigma') mu(sigma) exactly, with mu(sigma')
    formed on the permuted word; also mu(id) = id and mu^-1 = mu^T."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = random.Random(seed)
    failures = 0
    counterexample = None
    for trial in range(trials):
        w = _random_word(rng)
        n = len(w)
        s1 = list(range(n))
        s2 = list(range(n))
        rng.shuffle(s1)
        rng.shuffle(s2)
        p1 = mu_sigma(w, s1)
        p2 = mu_sigma(permute_word(w, s1), s2)
        both = mu_sigma(w, compose_permutations(s2, s1))
        ok = (both == p2 @ p1
              and mu_sigma(w, range(n)) == Matrix.identity(w.total_dim)
              and p1.T @ p1 == Matrix.identity(w.total_dim))
        if not ok:
            failures += 1
            if counterexample is None:
                counterexample = {"trial": trial, "word": repr(w),
                                  "sigma": s1, "sigma_prime": s2}
    return _report("mu-cocycle", trials, seed, failures, counterexample)
