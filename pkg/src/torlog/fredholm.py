"""Finite-rank Fredholm logarithms, index characters, and exact-row index additivity.

Every linear map between finite-dimensional rational spaces is Fredholm;
a parametrix is any correctly-shaped map back, since the deviations
q z - id and z q - id are automatically finite rank here.  The logarithm
of z : H -> H' with parametrix q is the block-diagonal element

    log z = (id - q z) (+) (z q - id')   in  F(H (+) H'),

whose trace is dim H - dim H' = dim ker z - dim coker z, the index.
Changing the parametrix or composing operators changes the logarithm by
an explicit single commutator, constructed (not just asserted) below.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .linalg import (DomainError, Matrix, ShapeError, commutator,
                     commutator_witness, pseudo_inverse)


def parametrix(z: Matrix) -> Matrix:
    """Default parametrix: the exact Moore-Penrose pseudo-inverse."""
    return pseudo_inverse(z)


def is_parametrix(z: Matrix, q: Matrix) -> bool:
    """True iff q has the right shape to be a parametrix of z.

    In the finite model the deviations q z - id and z q - id' are finite
    rank for every such q, so the shape is the whole condition; the
    Moore-Penrose choice additionally makes both deviations (minus)
    orthogonal projections onto ker z and coker z.
    """
    return q.shape == (z.ncols, z.nrows)


def log_fred(z: Matrix, q: Matrix | None = None) -> Matrix:
    """(id - q z) (+) (z q - id') as a single matrix on H (+) H'."""
    if q is None:
        q = parametrix(z)
    if not is_parametrix(z, q):
        raise ShapeError("parametrix shape %s does not fit operator shape %s"
                         % (q.shape, z.shape))
    s, t = z.ncols, z.nrows
    return Matrix.block(
        [[Matrix.identity(s) - q @ z, None],
         [None, z @ q - Matrix.identity(t)]],
        row_dims=[s, t], col_dims=[s, t])


def index_character(z: Matrix, q: Matrix | None = None) -> Fraction:
    """trace(log z) = dim ker - dim coker; parametrix-independent.

    Equal to trace(log_fred(z, q)); only the two diagonal block traces are
    materialized.
    """
    if q is None:
        q = parametrix(z)
    if not is_parametrix(z, q):
        raise ShapeError("parametrix shape %s does not fit operator shape %s"
                         % (q.shape, z.shape))
    s, t = z.ncols, z.nrows
    qrows, zrows = q.rows, z.rows
    tr_qz = sum((qrows[i][k] * zrows[k][i]
                 for i in range(s) for k in range(t)), Fraction(0))
    tr_zq = sum((zrows[i][k] * qrows[k][i]
                 for i in range(t) for k in range(s)), Fraction(0))
    return (s - tr_qz) + (tr_zq - t)


def _hat_z(z: Matrix) -> Matrix:
    s, t = z.ncols, z.nrows
    return Matrix.block([[None, None], [z, None]], row_dims=[s, t], col_dims=[s, t])


def _hat_q(q: Matrix, z_shape) -> Matrix:
    t, s = z_shape
    return Matrix.block([[None, q], [None, None]], row_dims=[s, t], col_dims=[s, t])


def check_parametrix_independence(z: Matrix, q1: Matrix, q2: Matrix) -> dict:
    """log_q1(z) - log_q2(z) as one explicit commutator.

    With zhat the lower-left embedding of z and qhat_i the upper-right
    embeddings of the parametrices, the difference is exactly
    [zhat, qhat1 - qhat2]; the report carries the pair and the entrywise
    re-summation check.
    """
    for q in (q1, q2):
        if not is_parametrix(z, q):
            raise ShapeError("parametrix shape %s does not fit operator shape %s"
                             % (q.shape, z.shape))
    diff = log_fred(z, q1) - log_fred(z, q2)
    a = _hat_z(z)
    b = _hat_q(q1, z.shape) - _hat_q(q2, z.shape)
    ok = commutator(a, b) == diff
    return {
        "difference": diff,
        "trace": diff.trace(),
        "witness": [(a, b)],
        "resummed": ok,
        "ok": ok and diff.trace() == 0,
    }


def _embed3(m: Matrix, dims: tuple[int, int, int], skip: int) -> Matrix:
    """Embed an element of F(a (+) b) into F(d0 (+) d1 (+) d2), slot `skip` empty."""
    keep = [i for i in range(3) if i != skip]
    da, db = dims[keep[0]], dims[keep[1]]
    if m.shape != (da + db, da + db):
        raise ShapeError("embedding shape mismatch")
    rows_a, rows_b = m.rows[:da], m.rows[da:]
    blocks = {
        (0, 0): Matrix([r[:da] for r in rows_a], ncols=da),
        (0, 1): Matrix([r[da:] for r in rows_a], ncols=db),
        (1, 0): Matrix([r[:da] for r in rows_b], ncols=da),
        (1, 1): Matrix([r[da:] for r in rows_b], ncols=db),
    }
    grid = [[None] * 3 for _ in range(3)]
    for (i, j), bl in blocks.items():
        grid[keep[i]][keep[j]] = bl
    return Matrix.block(grid, row_dims=list(dims), col_dims=list(dims))


def check_additivity(zf: Matrix, zg: Matrix, qf: Matrix | None = None,
                     qg: Matrix | None = None) -> dict:
    """Additivity defect of the logarithm under composition, with witness.

    For f : H -> H' and g : H' -> H'' (so zg zf is the composite, with
    parametrix qf qg) the embedded defect

        D = eta_(H') log(g f) - eta_(H'') log(f) - eta_(H) log(g)

    is exactly one commutator [A, B]: A carries zf and zg below the
    diagonal, B carries qf (qg zg - id') and (zf qf - id') qg above it.
    Taking traces gives index additivity on the nose.
    """
    if zg.ncols != zf.nrows:
        raise ShapeError("cannot compose: %s after %s" % (zg.shape, zf.shape))
    if qf is None:
        qf = parametrix(zf)
    if qg is None:
        qg = parametrix(zg)
    if not is_parametrix(zf, qf) or not is_parametrix(zg, qg):
        raise ShapeError("parametrix shapes do not fit")
    s, t, u = zf.ncols, zf.nrows, zg.nrows
    dims = (s, t, u)
    zc = zg @ zf
    qc = qf @ qg
    d = (_embed3(log_fred(zc, qc), dims, skip=1)
         - _embed3(log_fred(zf, qf), dims, skip=2)
         - _embed3(log_fred(zg, qg), dims, skip=0))
    it = Matrix.identity(t)
    l_g = qg @ zg - it          # deviation of the second factor on H'
    r_f = zf @ qf - it          # deviation of the first factor on H'
    a = Matrix.block([[None, None, None], [zf, None, None], [None, zg, None]],
                     row_dims=list(dims), col_dims=list(dims))
    b = Matrix.block([[None, qf @ l_g, None], [None, None, r_f @ qg],
                      [None, None, None]],
                     row_dims=list(dims), col_dims=list(dims))
    ok = commutator(a, b) == d
    ind_f = index_character(zf, qf)
    ind_g = index_character(zg, qg)
    ind_c = index_character(zc, qc)
    return {
        "difference": d,
        "trace": d.trace(),
        "witness": [(a, b)],
        "resummed": ok,
        "index": {"first": ind_f, "second": ind_g, "composite": ind_c},
        "index_additive": ind_c == ind_f + ind_g,
        "ok": ok and d.trace() == 0 and ind_c == ind_f + ind_g,
    }


# ---------------------------------------------------------------------------
# Relative index for an exact row of spaces with idempotent pairs


def _check_idempotent(p: Matrix, name: str):
    if not p.is_square():
        raise ShapeError("%s must be square" % name)
    if p @ p != p:
        raise DomainError("%s is not idempotent" % name, where={"check": name})


def relative_index_diagram(p0: Matrix, p0p: Matrix, p1: Matrix, p1p: Matrix,
                           p2: Matrix, p2p: Matrix, incl: Matrix,
                           proj: Matrix) -> dict:
    """Index additivity along an exact row, with a trace-zero defect witness.

    The row 0 -> G0 -> G1 -> G2 -> 0 (incl of full column rank, proj of
    full row rank, proj incl = 0, ranks adding to dim G1) carries two
    triples of idempotents intertwining with the row maps.  Relative
    indices are traces of idempotent differences; the middle one equals
    the sum of the outer two, and the defect

        (P1 - P1') - incl (P0 - P0') incl+ - proj+ (P2 - P2') proj

    has trace zero, witnessed by explicit commutators.
    """
    n0, n1, n2 = p0.nrows, p1.nrows, p2.nrows
    for p, name in [(p0, "p0"), (p0p, "p0'"), (p1, "p1"), (p1p, "p1'"),
                    (p2, "p2"), (p2p, "p2'")]:
        _check_idempotent(p, name)
    if incl.shape != (n1, n0):
        raise ShapeError("incl shape %s, expected %s" % (incl.shape, (n1, n0)))
    if proj.shape != (n2, n1):
        raise ShapeError("proj shape %s, expected %s" % (proj.shape, (n2, n1)))
    if incl.rank() != n0:
        raise DomainError("incl does not have full column rank", where={"check": "incl"})
    if proj.rank() != n2:
        raise DomainError("proj does not have full row rank", where={"check": "proj"})
    if not (proj @ incl).is_zero():
        raise DomainError("row is not a complex: proj incl != 0", where={"check": "row"})
    if n0 + n2 != n1:
        raise DomainError("row is not exact: %d + %d != %d" % (n0, n2, n1),
                          where={"check": "exactness"})
    for (a, b, name) in [(p1, p0, "p1 incl = incl p0"), (p1p, p0p, "p1' incl = incl p0'")]:
        if a @ incl != incl @ b:
            raise DomainError("idempotents do not intertwine incl (%s)" % name,
                              where={"check": name})
    for (a, b, name) in [(p2, p1, "proj p1 = p2 proj"), (p2p, p1p, "proj p1' = p2' proj")]:
        if a @ proj != proj @ b:
            raise DomainError("idempotents do not intertwine proj (%s)" % name,
                              where={"check": name})
    ind = [(p0 - p0p).trace(), (p1 - p1p).trace(), (p2 - p2p).trace()]
    incl_pinv = pseudo_inverse(incl)   # left inverse: incl+ incl = id
    proj_pinv = pseudo_inverse(proj)   # right inverse: proj proj+ = id
    defect = ((p1 - p1p)
              - incl @ (p0 - p0p) @ incl_pinv
              - proj_pinv @ (p2 - p2p) @ proj)
    witness = commutator_witness(defect)
    total = Matrix.zero(n1, n1)
    for a, b in witness:
        total = total + commutator(a, b)
    return {
        "indices": {"sub": ind[0], "middle": ind[1], "quotient": ind[2]},
        "additive": ind[1] == ind[0] + ind[2],
        "defect": defect,
        "trace": defect.trace(),
        "witness": witness,
        "resummed": total == defect,
        "ok": ind[1] == ind[0] + ind[2] and defect.trace() == 0 and total == defect,
    }


# ---------------------------------------------------------------------------
# Seeded generators for the verification suites


def random_idempotent(rng: random.Random, n: int) -> Matrix:
    """T (I_r (+) 0) T^(-1) for random rank r and unimodular T."""
    from .chain import _random_unimodular
    r = rng.randint(0, n)
    t = _random_unimodular(rng, n)
    core = Matrix.diagonal([1] * r + [0] * (n - r))
    return t @ core @ t.inverse()


def random_exact_diagram(rng: random.Random, max_dim: int = 4) -> dict:
    """Random instance of the exact-row data accepted by relative_index_diagram.

    The middle idempotents are conjugates of the block sums, which is
    exactly the intertwining condition; the primed triple is sampled
    independently the same way.
    """
    from .chain import _random_unimodular
    n0 = rng.randint(0, max_dim)
    n2 = rng.randint(0, max_dim)
    if n0 + n2 == 0:
        n0 = 1
    n1 = n0 + n2
    s = _random_unimodular(rng, n1)
    s_inv = s.inverse()
    incl = s @ Matrix.block([[Matrix.identity(n0)], [None]],
                            row_dims=[n0, n2], col_dims=[n0])
    proj = Matrix.block([[None, Matrix.identity(n2)]],
                        row_dims=[n2], col_dims=[n0, n2]) @ s_inv

    def middle(a: Matrix, b: Matrix) -> Matrix:
        return s @ Matrix.block([[a, None], [None, b]],
                                row_dims=[n0, n2], col_dims=[n0, n2]) @ s_inv

    p0, p0p = random_idempotent(rng, n0), random_idempotent(rng, n0)
    p2, p2p = random_idempotent(rng, n2), random_idempotent(rng, n2)
    return {
        "p0": p0, "p0p": p0p,
        "p1": middle(p0, p2), "p1p": middle(p0p, p2p),
        "p2": p2, "p2p": p2p,
        "incl": incl, "proj": proj,
    }
