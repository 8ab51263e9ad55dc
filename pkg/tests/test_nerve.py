import random
from fractions import Fraction

import pytest

from torlog.linalg import DomainError, Matrix
from torlog.nerve import (BlockSpace, MonoidalWord, NerveSimplex, degeneracy,
                          eta_insert, f_space, face, fredholm_instance,
                          log_simplex, mu_sigma, permute_word,
                          verify_eta_commutation, verify_mu_cocycle,
                          verify_trace_compat)


def test_monoidal_word_basics():
    w = MonoidalWord([("a", 2), ("b", 3)])
    assert w.dims() == [2, 3]
    assert w.total_dim == 5
    assert len(w) == 2
    w2 = w.insert(1, ("c", 1))
    assert w2.dims() == [2, 1, 3]
    assert w2.delete(1) == w
    assert w.tensor(w).dims() == [2, 3, 2, 3]


def test_block_space_offsets():
    b = f_space(MonoidalWord([("a", 2), ("b", 3), ("c", 1)]))
    assert isinstance(b, BlockSpace)
    assert b.dim == 6
    assert b.block_span(0) == (0, 2)
    assert b.block_span(1) == (2, 5)
    assert b.block_span(2) == (5, 6)


def test_permute_word_active_convention():
    w = MonoidalWord([("a", 1), ("b", 2), ("c", 3)])
    # sigma sends slot i to slot sigma(i): block 0 ends up at position 2
    v = permute_word(w, (2, 0, 1))
    assert v.dims() == [2, 3, 1]
    assert [x[0] for x in v] == ["b", "c", "a"]


def test_mu_sigma_is_permutation_isomorphism():
    w = MonoidalWord([("a", 1), ("b", 2)])
    swap = mu_sigma(w, (1, 0))
    assert swap.shape == (3, 3)
    assert swap @ swap.T == Matrix.identity(3)   # signed permutation matrix
    assert mu_sigma(w, (0, 1)) == Matrix.identity(3)


def test_mu_sigma_cocycle_hand_case():
    w = MonoidalWord([("a", 1), ("b", 2), ("c", 1)])
    s1 = (1, 2, 0)
    s2 = (2, 0, 1)
    composed = tuple(s2[s1[i]] for i in range(3))
    lhs = mu_sigma(permute_word(w, s1), s2) @ mu_sigma(w, s1)
    assert lhs == mu_sigma(w, composed)


def test_mu_sigma_rejects_bad_permutation():
    w = MonoidalWord([("a", 1), ("b", 2)])
    with pytest.raises(DomainError):
        mu_sigma(w, (0, 0))
    with pytest.raises(DomainError):
        mu_sigma(w, (0,))


def test_eta_insert_embedding_laws():
    w = MonoidalWord([("a", 2), ("b", 1)])
    ins = eta_insert(w, 1, ("z", 2))
    assert ins.target_word.dims() == [2, 2, 1]
    rng = random.Random(0)
    t = Matrix([[Fraction(rng.randint(-2, 2)) for _ in range(3)]
                for _ in range(3)], ncols=3)
    u = Matrix([[Fraction(rng.randint(-2, 2)) for _ in range(3)]
                for _ in range(3)], ncols=3)
    et, eu = ins.embed(t), ins.embed(u)
    assert et.shape == (5, 5)
    assert et.trace() == t.trace()               # trace preserving
    assert ins.embed(t @ u) == et @ eu           # multiplicative
    assert ins.embed(t + u) == et + eu           # additive
    assert ins.project(et) == t                  # left inverse


def test_eta_insert_index_range():
    w = MonoidalWord([("a", 1)])
    with pytest.raises(DomainError):
        eta_insert(w, 5, ("z", 1))


def test_eta_commutation_hand_case():
    # inserting z at 2 then w at 0 must equal w at 0 then z at 3
    base = MonoidalWord([("a", 1), ("b", 2)])
    z, wl = ("z", 1), ("w", 2)
    rng = random.Random(1)
    t = Matrix([[Fraction(rng.randint(-2, 2)) for _ in range(3)]
                for _ in range(3)], ncols=3)
    i1 = eta_insert(base, 2, z)
    j1 = eta_insert(i1.target_word, 0, wl)
    i2 = eta_insert(base, 0, wl)
    j2 = eta_insert(i2.target_word, 3, z)
    assert j1.target_word == j2.target_word
    assert j1.embed(i1.embed(t)) == j2.embed(i2.embed(t))


def test_verification_suites_small():
    for fn in (verify_eta_commutation, verify_mu_cocycle):
        rep = fn(trials=40, seed=3)
        assert rep["ok"] and rep["failures"] == 0 and rep["trials"] == 40
        assert rep["counterexample"] is None
    rep = verify_trace_compat(None, trials=40, seed=3)
    assert rep["ok"] and rep["failures"] == 0


def test_verification_suites_deterministic():
    assert verify_mu_cocycle(trials=20, seed=7) == \
        verify_mu_cocycle(trials=20, seed=7)


# ---------------------------------------------------------------------------
# simplices over the Fredholm instance


@pytest.fixture
def fred():
    return fredholm_instance()


def chain_simplex(fred, n=3, seed=0):
    rng = random.Random(seed)
    x = fred.random_object(rng)
    objs, mors = [x], []
    for _ in range(n):
        f, y = fred.random_edge(rng, objs[-1])
        objs.append(y)
        mors.append(f)
    return NerveSimplex(fred, objs, mors)


def test_simplex_validation(fred):
    with pytest.raises(DomainError):
        NerveSimplex(fred, [2, 3], [Matrix.zero(2, 2)])  # wrong target dim
    s = chain_simplex(fred)
    assert s.p == 3
    assert s.word().total_dim == sum(o for o in s.objects)


def test_face_identities(fred):
    s = chain_simplex(fred, n=3, seed=5)
    # simplicial identity d_i d_j = d_(j-1) d_i for i < j
    for j in range(1, 4):
        for i in range(j):
            lhs = face(face(s, j), i)
            rhs = face(face(s, i), j - 1)
            assert lhs.objects == rhs.objects
            assert lhs.morphisms == rhs.morphisms


def test_face_composes_interior(fred):
    s = chain_simplex(fred, n=2, seed=1)
    d1 = face(s, 1)
    assert d1.morphisms[0] == fred.compose(s.morphisms[0], s.morphisms[1])
    with pytest.raises(DomainError):
        face(NerveSimplex(fred, [s.objects[0]], []), 0)
    with pytest.raises(DomainError):
        face(s, 9)


def test_degeneracy_identities(fred):
    s = chain_simplex(fred, n=2, seed=2)
    for j in range(s.p + 1):
        sj = degeneracy(s, j)
        assert sj.p == s.p + 1
        # d_j s_j = id = d_(j+1) s_j
        for back in (j, j + 1):
            t = face(sj, back)
            assert t.objects == s.objects and t.morphisms == s.morphisms


def test_log_simplex_trace_is_sum_of_edge_traces(fred):
    s = chain_simplex(fred, n=3, seed=4)
    total = log_simplex(fred, s)
    assert total.shape == (s.word().total_dim, s.word().total_dim)
    want = Fraction(0)
    for j in range(s.p):
        want += fred.log(s.morphisms[j], s.objects[j], s.objects[j + 1]).trace()
    assert total.trace() == want


def test_log_simplex_zero_simplex(fred):
    s = NerveSimplex(fred, [3], [])
    assert log_simplex(fred, s) == Matrix.zero(3, 3)


def test_log_simplex_instance_mismatch(fred):
    s = chain_simplex(fred, n=1)
    with pytest.raises(DomainError):
        log_simplex(fredholm_instance(), s)
