"""Generation and primitivity tests in free solvable quotients.

For derived length 2 (free metabelian) the relevant group ring is the
commutative integral Laurent ring Z[Z^r], where left invertibility of the
square Jacobian of a full tuple is equivalent to its determinant being a
unit, and the units are exactly +- single monomials.  A generating
r-tuple of a finitely generated relatively free group is automatically a
basis (Hopficity), so the determinant test decides the basis property.

For derived length t >= 3 no decision procedure is attempted: the module
only verifies supplied witnesses.  Ring elements are finite integer
combinations of free-group words, and equality modulo the (t-1)-st
derived subgroup is decided through towers of Fox derivatives: a word
lies in the s-th derived subgroup iff all its Fox derivatives vanish in
the ring one level down, with level 0 the augmentation.  This is
verification grade only and is documented as such.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import laurent, verdict
from .groupring import (JacobianMatrix, augmentation, fox_derivative,
                        full_two_sided_inverse, jacobian, mat_mul, ring_one)
from .words import format_word, free_multiply, invert_word, support


class InvalidWitnessError(ValueError):
    """The supplied left inverse fails P J = I; carries the partial report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


def metabelian_jacobian(words_seq, rank):
    """r x r matrix of Fox derivatives projected to Z[Z^r] (m = n = 0)."""
    words_seq = list(words_seq)
    if len(words_seq) != rank:
        raise ValueError("need a full tuple of %d words, got %d" % (rank, len(words_seq)))
    for w in words_seq:
        if w.rank != rank:
            raise ValueError("word rank mismatch")
    return tuple(tuple(laurent.project_to_quotient(fox_derivative(j, w), 0, 0)
                       for j in range(1, rank + 1))
                 for w in words_seq)


def is_monomial_unit(x):
    """Units of Z[Z^r] are exactly +- single monomials."""
    if x.m != 0:
        raise ValueError("unit predicate is for integer coefficients")
    if len(x.terms) != 1:
        return False
    return next(iter(x.terms.values())) in (1, -1)


def is_basis_metabelian(words_seq, rank):
    """Decide whether a full r-tuple is a basis of the free metabelian
    group, via the determinant of its projected Jacobian."""
    matrix = metabelian_jacobian(words_seq, rank)
    det = laurent.matrix_det([list(row) for row in matrix])
    if is_monomial_unit(det):
        ((exps, sign),) = det.terms.items()
        return verdict.primitive(
            {"determinant": str(det), "monomial": list(exps), "sign": sign},
            reason="Jacobian determinant is a unit of Z[Z^r]")
    return verdict.not_primitive(
        reason="Jacobian determinant %s is not +- a monomial" % det,
        witness={"determinant": str(det)})


def is_primitive_metabelian_subset(words_seq, rank, degree_bound=2):
    """Primitivity of k <= r words in the free metabelian group.

    The metabelian group is the abelian-by-abelian case with both
    exponents 0, whose criterion always applies here (the condition n > 0
    fails); the ideal test may still return Unknown.
    """
    return laurent.is_primitive_am_an(words_seq, 0, 0, degree_bound)


@dataclass(frozen=True)
class SolvableRestrictionReport:
    """Four identities behind restriction for a full metabelian tuple."""

    block_shape: bool
    unit_identity: bool
    zero_column: bool
    truncated_identity: bool
    truncated_inverse: tuple | None = None

    @property
    def all_passed(self):
        return (self.block_shape and self.unit_identity and self.zero_column
                and self.truncated_identity)

    def to_json(self):
        return {
            "block_shape": self.block_shape,
            "unit_identity": self.unit_identity,
            "zero_column": self.zero_column,
            "truncated_identity": self.truncated_identity,
            "truncated_inverse": ([[e.to_json() for e in row]
                                   for row in self.truncated_inverse]
                                  if self.truncated_inverse else None),
        }


def verify_solvable_restriction(words_seq, p_matrix, t=2):
    """Verify the block structure of a witnessed full metabelian tuple
    whose first r-1 words avoid the last generator.

    `p_matrix` must be a left inverse of the projected Jacobian (P J = I,
    exactly); otherwise :class:`InvalidWitnessError` is raised, carrying a
    partial report whose `zero_column` field records whether nonzero
    entries p_{i r} (i < r) explain the failure, the zero-divisor-freeness
    of Z[Z^r] making any such entry fatal.  On a valid witness the report
    asserts: the Jacobian's last column is zero above the corner; the
    corner identity p_rr D_r(x_r) = 1; vanishing of p_{i r} for i < r; and
    that the truncated matrices satisfy P^ J^ = I at rank r-1, with a
    support-split truncation of P^ giving a certificate over the smaller
    ring.  Any False field on a valid witness is an alarm.
    """
    if t != 2:
        raise ValueError("the restriction report is implemented for t = 2; "
                         "for t >= 3 use verify_left_inverse_mod_derived")
    words_seq = list(words_seq)
    rank = len(words_seq)
    if rank < 2:
        raise ValueError("need at least two words")
    for w in words_seq[:-1]:
        if any(g >= rank for g in support(w)):
            raise ValueError("word %s uses a%d; the first r-1 words must not"
                             % (format_word(w), rank))
    j_matrix = metabelian_jacobian(words_seq, rank)
    product = laurent.matrix_mul(p_matrix, j_matrix)
    corner = j_matrix[rank - 1][rank - 1]
    if not laurent.matrix_is_identity(product):
        zero_column = True
        for i in range(rank - 1):
            p_ir = p_matrix[i][rank - 1]
            if not p_ir.is_zero:
                # Z[Z^r] has no zero divisors, so this entry alone breaks
                # (P J)_{i r} = p_{i r} D_r(x_r) = 0.
                if corner.is_zero or (p_ir * corner).is_zero:
                    raise RuntimeError("zero divisors in Z[Z^r]; this is a bug")
                zero_column = False
        report = SolvableRestrictionReport(
            block_shape=all(j_matrix[i][rank - 1].is_zero for i in range(rank - 1)),
            unit_identity=(p_matrix[rank - 1][rank - 1] * corner).is_one,
            zero_column=zero_column,
            truncated_identity=False)
        raise InvalidWitnessError("P J is not the identity; invalid witness",
                                  report=report)

    block_shape = all(j_matrix[i][rank - 1].is_zero for i in range(rank - 1))
    unit_identity = (p_matrix[rank - 1][rank - 1] * corner).is_one
    zero_column = all(p_matrix[i][rank - 1].is_zero for i in range(rank - 1))

    l = rank - 1
    p_hat = [[p_matrix[i][j] for j in range(l)] for i in range(l)]
    j_hat = [[j_matrix[i][j] for j in range(l)] for i in range(l)]
    truncated_identity = laurent.matrix_is_identity(laurent.matrix_mul(p_hat, j_hat))

    truncated_inverse = None
    if truncated_identity:
        # entries of J^ avoid the last coordinate, so dropping the terms of
        # P^ that involve it preserves the identity and lands in Z[Z^(r-1)]
        q_hat = [[laurent.split_by_support_laurent(entry, l)[0] for entry in row]
                 for row in p_hat]
        if not laurent.matrix_is_identity(laurent.matrix_mul(q_hat, j_hat)):
            truncated_identity = False
        else:
            truncated_inverse = tuple(
                tuple(laurent.truncate_to_rank(entry, l) for entry in row)
                for row in q_hat)
            j_small = tuple(tuple(laurent.truncate_to_rank(entry, l) for entry in row)
                            for row in j_hat)
            if not laurent.matrix_is_identity(
                    laurent.matrix_mul(truncated_inverse, j_small)):
                raise RuntimeError("rank-%d certificate failed; this is a bug" % l)

    return SolvableRestrictionReport(block_shape=block_shape,
                                     unit_identity=unit_identity,
                                     zero_column=zero_column,
                                     truncated_identity=truncated_identity,
                                     truncated_inverse=truncated_inverse)


def metabelian_witness_from_automorphism(auto):
    """Full tuple and projected two-sided Jacobian inverse from an
    automorphism; PJ = I holds exactly by the chain rule."""
    j_matrix, p_matrix = full_two_sided_inverse(auto)
    p_laurent = tuple(tuple(laurent.project_to_quotient(entry, 0, 0)
                            for entry in row) for row in p_matrix.entries)
    return list(auto.forward.images), p_laurent


# --- derived length >= 3: verification-grade word problem ----------------

def ring_zero_mod_derived(x, s):
    """Is a formal combination of words zero in Z(F / F^(s))?

    Level 0 is the augmentation (F^(0) = F, the quotient is trivial);
    level 1 is the integral Laurent ring of the abelianization; higher
    levels group the words into equality classes modulo F^(s) and compare
    coefficient sums.
    """
    if s < 0:
        raise ValueError("level must be nonnegative")
    if s == 0:
        return augmentation(x) == 0
    if s == 1:
        return laurent.project_to_quotient(x, 0, 0).is_zero
    classes = []  # list of (representative, coefficient sum)
    for word, coeff in x.terms.items():
        for idx, (rep, total) in enumerate(classes):
            if words_equal_mod_derived(word, rep, s):
                classes[idx] = (rep, total + coeff)
                break
        else:
            classes.append((word, coeff))
    return all(total == 0 for _, total in classes)


def words_equal_mod_derived(u, v, s):
    """Do two words agree in F / F^(s)?"""
    return word_in_derived(free_multiply(u, invert_word(v)), s)


@lru_cache(maxsize=65536)
def word_in_derived(w, s):
    """Does the word lie in the s-th derived subgroup F^(s)?

    Decided through the Magnus embedding: w is in F^(s) iff every Fox
    derivative of w vanishes in Z(F / F^(s-1)).
    """
    if s < 0:
        raise ValueError("level must be nonnegative")
    if s == 0:
        return True
    if s == 1:
        return all(x == 0 for x in _exponent_sums(w))
    return all(ring_zero_mod_derived(fox_derivative(j, w), s - 1)
               for j in range(1, w.rank + 1))


def _exponent_sums(w):
    sums = [0] * w.rank
    for g, e in w.syllables:
        sums[g - 1] += e
    return sums


def verify_left_inverse_mod_derived(words_seq, p_entries, t):
    """Check P J = I over Z(F / F^(t-1)) for a full tuple of words and a
    candidate left inverse given as formal combinations of words.

    This is the verification surface for derived length t >= 2; it never
    claims completeness, only that a supplied witness is or is not valid.
    """
    if t < 2:
        raise ValueError("derived length must be at least 2")
    words_seq = list(words_seq)
    rank = len(words_seq)
    if any(w.rank != rank for w in words_seq):
        raise ValueError("need a full tuple of rank-r words")
    j_matrix = jacobian(words_seq)
    p_matrix = JacobianMatrix(rank, p_entries)
    product = mat_mul(p_matrix, j_matrix)
    one = ring_one(rank)
    level = t - 1
    for i in range(rank):
        for j in range(rank):
            target = product.entries[i][j] - one if i == j else product.entries[i][j]
            if not ring_zero_mod_derived(target, level):
                return False
    return True


def solvable_jacobian_formal(words_seq):
    """Full Jacobian over the free ring, for use with the level checks."""
    return jacobian(list(words_seq))
