import random
from fractions import Fraction

import pytest

from torlog.fredholm import (check_additivity, check_parametrix_independence,
                             index_character, is_parametrix, log_fred,
                             parametrix, random_exact_diagram,
                             random_idempotent, relative_index_diagram)
from torlog.linalg import (DomainError, Matrix, ShapeError, commutator,
                           pseudo_inverse)


def rand_matrix(rng, n, m, spread=2):
    return Matrix([[Fraction(rng.randint(-spread, spread)) for _ in range(m)]
                   for _ in range(n)], ncols=m)


def test_parametrix_is_pseudo_inverse():
    z = Matrix([[1, 0, 0], [0, 2, 0]])
    q = parametrix(z)
    assert q == pseudo_inverse(z)
    assert is_parametrix(z, q)
    assert not is_parametrix(z, Matrix.zero(2, 3))  # wrong orientation


def test_log_fred_block_structure():
    z = Matrix([[1, 0], [0, 0]])
    q = parametrix(z)
    log = log_fred(z, q)
    # upper-left block I - qz on the source, lower-right zq - I on the target
    s = z.ncols
    upper = Matrix([[log[i, j] for j in range(s)] for i in range(s)], ncols=s)
    lower = Matrix([[log[s + i, s + j] for j in range(z.nrows)]
                    for i in range(z.nrows)], ncols=z.nrows)
    assert upper == Matrix.identity(s) - q @ z
    assert lower == z @ q - Matrix.identity(z.nrows)
    assert log.trace() == index_character(z, q)


def test_index_is_dimension_difference():
    rng = random.Random(0)
    for _ in range(50):
        s, t = rng.randint(1, 5), rng.randint(1, 5)
        z = rand_matrix(rng, t, s)
        ind = index_character(z)
        assert ind == z.kernel_dim() - (t - z.rank())
        assert ind == s - t


def test_index_with_any_parametrix():
    rng = random.Random(5)
    z = rand_matrix(rng, 3, 4)
    q0 = parametrix(z)
    # perturb the parametrix; the index must not move
    q1 = q0 + rand_matrix(rng, 4, 3)
    assert index_character(z, q1) == index_character(z, q0) == 1


def test_log_fred_shape_guard():
    with pytest.raises(ShapeError):
        log_fred(Matrix([[1, 0]]), Matrix([[1, 0]]))


def test_parametrix_independence_report():
    rng = random.Random(2)
    z = rand_matrix(rng, 3, 4)
    q1 = parametrix(z)
    q2 = q1 + rand_matrix(rng, 4, 3)
    rep = check_parametrix_independence(z, q1, q2)
    assert rep["ok"] and rep["resummed"] and rep["trace"] == 0
    (a, b), = rep["witness"]
    assert commutator(a, b) == rep["difference"]


def test_parametrix_independence_shape_guard():
    z = Matrix([[1, 0]])
    with pytest.raises(ShapeError):
        check_parametrix_independence(z, Matrix([[1], [0]]), Matrix([[1, 0]]))


def test_additivity_report():
    zf = Matrix([[1, 0], [0, 0], [0, 1]])   # 3x2
    zg = Matrix([[1, 0, 0]])                # 1x3
    rep = check_additivity(zf, zg)
    assert rep["ok"] and rep["index_additive"] and rep["trace"] == 0
    assert rep["index"]["first"] == -1
    assert rep["index"]["second"] == 2
    assert rep["index"]["composite"] == 1
    (a, b), = rep["witness"]
    assert commutator(a, b) == rep["difference"]


def test_additivity_rejects_noncomposable():
    with pytest.raises(ShapeError):
        check_additivity(Matrix([[1, 0]]), Matrix([[1, 0]]))


def test_random_idempotent():
    rng = random.Random(1)
    for n in (1, 2, 3, 4):
        p = random_idempotent(rng, n)
        assert p @ p == p


def test_relative_index_diagram_random():
    for seed in range(20):
        d = random_exact_diagram(random.Random(seed))
        rep = relative_index_diagram(**d)
        assert rep["ok"], "seed %d" % seed
        assert rep["additive"] and rep["trace"] == 0 and rep["resummed"]
        ind = rep["indices"]
        assert ind["middle"] == ind["sub"] + ind["quotient"]


def test_relative_index_diagram_guards():
    d = random_exact_diagram(random.Random(0))
    bad = dict(d)
    bad["p0"] = bad["p0"] + Matrix.identity(bad["p0"].nrows)  # not idempotent
    with pytest.raises(DomainError):
        relative_index_diagram(**bad)
    bad = dict(d)
    bad["proj"] = Matrix.zero(*bad["proj"].shape)  # not full row rank
    with pytest.raises(DomainError):
        relative_index_diagram(**bad)
