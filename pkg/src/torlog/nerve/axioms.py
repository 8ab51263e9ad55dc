"""Log-functor axiom verification harness and the weak-TQFT export.

The harness draws random composable chains from an instance and checks, per
trial: composition additivity modulo commutators (trace zero plus an explicit
re-summing commutator witness for matrix-valued instances, exact character
equality for formal ones), face and degeneracy compatibility of simplex logs,
trace preservation under foreign-letter insertion, vanishing of identity and
idempotent logs, conjugation invariance of characters, and endomorphism
additivity.  An instance exposing torsion_cross_check gets the extra
cross-check axiom comparing its characters against mapping-cone torsion.
"""

from __future__ import annotations

import random
from fractions import Fraction

from ..linalg import DomainError, LogValue, Matrix, commutator, commutator_witness
from .blocks import MonoidalWord, eta_insert
from .simplices import NerveSimplex, degeneracy, face, log_simplex

AXIOM_NAMES = ("composition", "face", "insertion", "identity", "conjugation",
               "endo_composition", "projection")

CROSS_CHECK_TRIALS = 50


def _witness_resums(d: Matrix) -> bool:
    """commutator_witness(d) must re-sum to d entrywise."""
    total = Matrix.zero(d.nrows, d.ncols)
    for a, b in commutator_witness(d):
        total = total + commutator(a, b)
    return total == d


def _embedded_additivity_defect(instance, f, g, x, y, z) -> Matrix:
    """eta(log gf) - eta(log f) - eta(log g) inside F(x (x) y (x) z)."""
    lx, ly, lz = instance.letter(x), instance.letter(y), instance.letter(z)
    gf = instance.compose(f, g)
    e_gf = eta_insert(MonoidalWord([lx, lz]), 1, ly)
    e_f = eta_insert(MonoidalWord([lx, ly]), 2, lz)
    e_g = eta_insert(MonoidalWord([ly, lz]), 0, lx)
    return (e_gf.embed(instance.log(gf, x, z))
            - e_f.embed(instance.log(f, x, y))
            - e_g.embed(instance.log(g, y, z)))


def _check_matrix_dot_zero(d: Matrix) -> bool:
    return d.trace() == 0 and _witness_resums(d)


def verify_log_axioms(instance, trials: int = 100, seed: int = 0) -> dict:
    """Run all log-functor axioms on random data; exact arithmetic throughout.

    Returns {"instance", "trials", "seed", "axioms": {name: {trials, failures,
    counterexample}}, "ok"}; the first counterexample per axiom is kept.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = random.Random(seed)
    stats = {name: {"trials": 0, "failures": 0, "counterexample": None}
             for name in AXIOM_NAMES}

    def record(name: str, ok: bool, detail):
        st = stats[name]
        st["trials"] += 1
        if not ok:
            st["failures"] += 1
            if st["counterexample"] is None:
                st["counterexample"] = detail()

    zero = instance.zero_character()
    for trial in range(trials):
        x = instance.random_object(rng)
        f, y = instance.random_edge(rng, x)
        g, z = instance.random_edge(rng, y)
        gf = instance.compose(f, g)

        def ctx(extra=None):
            d = {"trial": trial, "objects": repr([instance.letter(x),
                                                  instance.letter(y),
                                                  instance.letter(z)])}
            if extra:
                d.update(extra)
            return d

        # (a) composition additivity modulo commutators
        if instance.matrix_valued:
            defect = _embedded_additivity_defect(instance, f, g, x, y, z)
            tr = defect.trace()
            ok = tr == 0 and _witness_resums(defect)
            record("composition", ok,
                   lambda: ctx({"defect_trace": str(tr)}))
        else:
            lhs = instance.character(gf, x, z)
            rhs = instance.character(f, x, y) + instance.character(g, y, z)
            record("composition", lhs == rhs,
                   lambda: ctx({"lhs": repr(lhs), "rhs": repr(rhs)}))

        # (b) face compatibility: the d_1 face of a 2-simplex keeps the trace,
        # and a degenerate simplex keeps the trace of its base
        s = NerveSimplex(instance, (x, y, z), (f, g))
        d1 = face(s, 1)
        base = NerveSimplex(instance, (x, y), (f,))
        degen = degeneracy(base, 0)
        if instance.matrix_valued:
            t_s = log_simplex(instance, s).trace()
            t_d1 = log_simplex(instance, d1).trace()
            t_base = log_simplex(instance, base).trace()
            t_deg = log_simplex(instance, degen).trace()
        else:
            t_s = log_simplex(instance, s).character()
            t_d1 = log_simplex(instance, d1).character()
            t_base = log_simplex(instance, base).character()
            t_deg = log_simplex(instance, degen).character()
        record("face", t_s == t_d1 and t_base == t_deg,
               lambda: ctx({"simplex": str(t_s), "d1": str(t_d1)}))

        # strongly simplicial: insertion of a foreign letter preserves traces
        if instance.matrix_valued:
            t_mat = log_simplex(instance, s)
            ins = eta_insert(s.word(), rng.randint(0, 3),
                             ("w", rng.randint(0, 3)))
            record("insertion", ins.embed(t_mat).trace() == t_mat.trace(),
                   lambda: ctx())
        else:
            record("insertion",
                   log_simplex(instance, s).character() == t_s,
                   lambda: ctx())

        # (c) identity log vanishes
        ident = instance.identity(x)
        if instance.matrix_valued:
            l_id = instance.log(ident, x, x)
            ok = l_id.trace() == 0 and _witness_resums(l_id)
        else:
            ok = instance.character(ident, x, x) == zero
        record("identity", ok, lambda: ctx())

        # (d) conjugation invariance of characters
        alpha = instance.random_endo(rng, x)
        u, u_inv, y2 = instance.random_conjugator(rng, x)
        beta = instance.compose(instance.compose(u_inv, alpha), u)
        record("conjugation",
               instance.character(beta, y2, y2) == instance.character(alpha, x, x),
               lambda: ctx())

        # (e) endomorphism additivity in the same ring
        a = instance.random_endo(rng, x)
        b = instance.random_endo(rng, x)
        ab = instance.compose(a, b)
        char_ok = (instance.character(ab, x, x)
                   == instance.character(a, x, x) + instance.character(b, x, x))
        if instance.matrix_valued:
            defect = _embedded_additivity_defect(instance, a, b, x, x, x)
            char_ok = char_ok and _check_matrix_dot_zero(defect)
        record("endo_composition", char_ok, lambda: ctx())

        # idempotent (projection) logs vanish modulo commutators
        proj = instance.random_idempotent_endo(rng, x)
        if proj is None:
            proj = instance.identity(x)
        if instance.matrix_valued:
            l_proj = instance.log(proj, x, x)
            ok = l_proj.trace() == 0 and _witness_resums(l_proj)
        else:
            ok = instance.character(proj, x, x) == zero
        record("projection", ok, lambda: ctx())

    axioms = dict(stats)
    if hasattr(instance, "torsion_cross_check"):
        n = min(CROSS_CHECK_TRIALS, trials)
        st = {"trials": 0, "failures": 0, "counterexample": None}
        for _ in range(n):
            st["trials"] += 1
            fail = instance.torsion_cross_check(rng)
            if fail is not None:
                st["failures"] += 1
                if st["counterexample"] is None:
                    st["counterexample"] = fail
        axioms["cross_check"] = st

    ok = all(st["failures"] == 0 for st in axioms.values())
    return {"instance": instance.name, "trials": trials, "seed": seed,
            "axioms": axioms, "ok": ok}


def weak_tqft_export(instance, morphism, base=2) -> dict:
    """Exponentiated character of a morphism.

    Integer characters (Fredholm indices) exponentiate to an exact power of
    the configurable base.  LogValue characters exponentiate canonically to
    the product of their own bases; when every weight is integral the result
    is an exact positive rational, otherwise the term list is returned and
    value is None.
    """
    x, y = instance.morphism_endpoints(morphism)
    char = instance.character(morphism, x, y)
    if isinstance(char, LogValue):
        value = Fraction(1)
        for prime, w in char.prime_weights.items():
            if w.denominator != 1:
                return {"instance": instance.name, "character": char,
                        "base": None, "value": None,
                        "note": "non-integral exponent; exact exponential "
                                "is the term list itself"}
            value *= Fraction(prime) ** int(w)
        return {"instance": instance.name, "character": char,
                "base": None, "value": value}
    base = Fraction(base)
    if base <= 0:
        raise DomainError("exponential base must be positive")
    n = Fraction(char)
    if n.denominator != 1:  # pragma: no cover - characters here are indices
        raise DomainError("non-integer character %s cannot be exponentiated "
                          "exactly" % n)
    return {"instance": instance.name, "character": int(n), "base": base,
            "value": base ** int(n)}
