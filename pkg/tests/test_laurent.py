import random

import pytest
from hypothesis import given

from primus.groupring import from_word, ring_one
from primus.laurent import (CertificateStatus, LaurentElement,
                            UnsupportedConfigurationError, embed_to_rank,
                            format_laurent, ideal_contains_one,
                            induced_jacobian, is_primitive_am_an, kth_minors,
                            laurent_monomial, laurent_one, laurent_scale,
                            laurent_zero, matrix_det, project_to_quotient,
                            split_by_support_laurent, truncate_to_rank,
                            verify_restriction_identity)
from primus.words import change_rank, parse_word, random_automorphism

from strategies import group_ring_elements


def mono(rank, exps, coeff=1, m=0, n=0):
    return laurent_monomial(m, n, rank, exps, coeff)


class TestProjection:
    def test_conjugate_collapses(self):
        x = from_word(parse_word("a1 a2 a1^-1", 3))
        for m, n in ((0, 0), (2, 3), (5, 0)):
            assert project_to_quotient(x, m, n) == mono(3, (0, 1, 0), 1, m, n)

    def test_coefficient_mod(self):
        x = ring_one(2) - from_word(parse_word("a1^2", 2))
        assert project_to_quotient(x, 2, 0) == \
            laurent_one(2, 0, 2) + mono(2, (2, 0), 1, 2, 0)

    def test_coefficient_kill(self):
        x = 3 * ring_one(2)
        assert project_to_quotient(x, 3, 0).is_zero

    def test_exponent_mod(self):
        x = from_word(parse_word("a1^5", 2))
        assert project_to_quotient(x, 0, 3) == mono(2, (2, 0), 1, 0, 3)

    @given(group_ring_elements(2, max_terms=4, max_syllables=5),
           group_ring_elements(2, max_terms=4, max_syllables=5))
    def test_ring_homomorphism(self, x, y):
        for m, n in ((0, 0), (2, 2), (4, 3), (0, 2)):
            px = project_to_quotient(x, m, n)
            py = project_to_quotient(y, m, n)
            assert project_to_quotient(x * y, m, n) == px * py
            assert project_to_quotient(x + y, m, n) == px + py
        assert project_to_quotient(ring_one(2), 3, 2).is_one


class TestArithmetic:
    def test_mixed_moduli_rejected(self):
        with pytest.raises(ValueError):
            laurent_one(2, 0, 2) + laurent_one(0, 0, 2)

    def test_trivial_coefficient_ring(self):
        one = laurent_one(1, 2, 2)
        assert one.is_zero and one.is_one  # Z_1 collapses 1 = 0

    def test_printer(self):
        x = laurent_one(0, 0, 2) - mono(2, (2, -1))
        assert format_laurent(x) == "1 - 1*t1^2 t2^-1"
        assert format_laurent(laurent_zero(0, 0, 2)) == "0"

    def test_json_round_trip(self):
        x = mono(3, (1, 0, -2), 5) + laurent_one(0, 0, 3)
        assert LaurentElement.from_json(x.to_json()) == x


class TestInducedJacobian:
    def test_single_generator(self):
        j = induced_jacobian([parse_word("a1", 2)], 0, 0)
        assert j[0][0].is_one and j[0][1].is_zero

    def test_product(self):
        j = induced_jacobian([parse_word("a1 a2", 2)], 0, 0)
        assert j[0][0].is_one
        assert j[0][1] == mono(2, (1, 0))

    def test_tail_columns_zero(self):
        j = induced_jacobian([parse_word("a1 a2", 4), parse_word("a2^2", 4)], 2, 2)
        for row in j:
            assert row[2].is_zero and row[3].is_zero


class TestMinors:
    def test_identity(self):
        j = induced_jacobian([parse_word("a1", 2), parse_word("a2", 2)], 0, 0)
        assert kth_minors(j) == [laurent_one(0, 0, 2)]

    def test_one_by_n(self):
        j = induced_jacobian([parse_word("a1 a2", 2)], 0, 0)
        assert kth_minors(j) == [j[0][0], j[0][1]]

    def test_zero_column_removal_preserves_minors(self):
        words = [parse_word("a1 a2", 3), parse_word("a2 a1^-1", 3)]
        big = kth_minors(induced_jacobian(words, 0, 0))
        small = kth_minors(induced_jacobian(
            [change_rank(w, 2) for w in words], 0, 0))
        big_nonzero = [x for x in big if not x.is_zero]
        assert [truncate_to_rank(x, 2) for x in big_nonzero] == \
            [x for x in small if not x.is_zero]

    def test_det_multiplies_monomials(self):
        rows = [[mono(2, (1, 0)), laurent_zero(0, 0, 2)],
                [laurent_zero(0, 0, 2), mono(2, (0, 1))]]
        assert matrix_det(rows) == mono(2, (1, 1))


class TestIdealContainsOne:
    def test_trivial(self):
        c = ideal_contains_one([laurent_one(0, 0, 2)])
        assert c.found and [str(p) for p in c.cofactors] == ["1"]

    def test_augmentation_obstruction(self):
        c = ideal_contains_one([laurent_scale(laurent_one(0, 0, 2), 2)])
        assert c.status is CertificateStatus.NOT_IDEAL
        assert c.obstruction == 2

    def test_partition_of_unity(self):
        t1 = mono(2, (1, 0))
        one = laurent_one(0, 0, 2)
        c = ideal_contains_one([t1, one - t1], degree_bound=1)
        assert c.found
        total = laurent_zero(0, 0, 2)
        for m_i, p_i in zip(c.minors, c.cofactors):
            total = total + m_i * p_i
        assert total.is_one

    def test_finite_case_exact(self):
        # in Z_2[Z_2]: (1 + t) is not invertible and does not generate 1
        t = mono(1, (1,), 1, 2, 2)
        one = laurent_one(2, 2, 1)
        c = ideal_contains_one([one + t])
        assert c.status is CertificateStatus.NOT_IDEAL
        # but {t} alone does: t * t = 1
        c2 = ideal_contains_one([t])
        assert c2.found

    def test_finite_composite_modulus(self):
        # Z_4[Z_2]: 2 + t is a unit? (2+t)(2+t) = 4 + 4t + t^2 = 1 mod 4
        t = mono(1, (1,), 1, 4, 2)
        two = laurent_scale(laurent_one(4, 2, 1), 2)
        c = ideal_contains_one([two + t])
        assert c.found

    def test_unknown_at_small_bound(self):
        # (t1 - 1) and 3: no combination gives 1 over Z (augmentation sends
        # the first to 0 and the second to 3... gcd 3) -> NotIdeal;
        # use instead generators whose augmentations are coprime but where
        # small-degree certificates do not exist:
        # 2 + t1 and 2 - t1: (2+t)(2-t) = 4 - t^2; aug gcd of (3, 1) is 1.
        # Over Z a certificate exists: (2-t) - (2+t)... -> -2t... try bound 0:
        x = laurent_scale(laurent_one(0, 0, 1), 2) + mono(1, (1,))
        y = laurent_scale(laurent_one(0, 0, 1), 2) - mono(1, (1,))
        c = ideal_contains_one([x, y], degree_bound=0)
        c1 = ideal_contains_one([x, y], degree_bound=2)
        # at least one of the two observations must hold: the small bound is
        # weaker or equal to the bigger one
        assert c.status in (CertificateStatus.FOUND, CertificateStatus.UNKNOWN)
        if c.status is CertificateStatus.UNKNOWN:
            assert c.degree_bound == 0
        assert c1.status in (CertificateStatus.FOUND, CertificateStatus.UNKNOWN)

    def test_mixed_moduli_rejected(self):
        with pytest.raises(ValueError):
            ideal_contains_one([laurent_one(2, 2, 1), laurent_one(0, 0, 1)])


class TestIsPrimitiveAmAn:
    def test_examples(self):
        assert is_primitive_am_an([parse_word("a1", 2)], 2, 2).is_primitive
        assert is_primitive_am_an([parse_word("a1^2", 2)], 2, 2).is_not_primitive
        assert is_primitive_am_an(
            [parse_word("a1", 2), parse_word("a2", 2)], 2, 2).is_primitive

    def test_excluded_configuration(self):
        with pytest.raises(UnsupportedConfigurationError):
            is_primitive_am_an([parse_word("a1", 2)], 0, 2)
        # k != r-1 is fine at m=0, n>0
        v = is_primitive_am_an([parse_word("a1", 3)], 0, 2)
        assert not v.is_not_primitive

    def test_commutator_not_primitive(self):
        assert is_primitive_am_an([parse_word("[a1,a2]", 2)], 0, 0).is_not_primitive

    def test_witness_certificate_verifies(self):
        v = is_primitive_am_an([parse_word("a1 a2", 2)], 2, 2)
        assert v.is_primitive
        cert = v.witness["certificate"]
        minors = [LaurentElement.from_json(d) for d in cert["minors"]]
        cofactors = [LaurentElement.from_json(d) for d in cert["cofactors"]]
        total = laurent_zero(2, 2, 2)
        for m_i, p_i in zip(minors, cofactors):
            total = total + m_i * p_i
        assert total.is_one


class TestSplitAndRestriction:
    def test_split_examples(self):
        x = laurent_one(0, 0, 3) + mono(3, (0, 0, 1))
        q, s = split_by_support_laurent(x, 2)
        assert q.is_one and s == mono(3, (0, 0, 1))

        y = laurent_one(0, 0, 3) + mono(3, (1, 1, 0))
        q, s = split_by_support_laurent(y, 2)
        assert q == y and s.is_zero

        z = mono(3, (1, 0, 1))
        q, s = split_by_support_laurent(z, 2)
        assert q.is_zero and s == z

    def test_verify_restriction_trivial(self):
        # certificate wholly inside the first l coordinates
        t1 = mono(3, (1, 0, 0))
        one = laurent_one(0, 0, 3)
        minors = [t1, one - t1]
        cofactors = [one, one]
        result = verify_restriction_identity(minors, cofactors, 2)
        assert result.ok
        assert [str(p) for p in result.restricted_cofactors] == ["1", "1"]

    def test_verify_restriction_with_tail_noise(self):
        # valid certificate whose cofactors carry canceling tail terms
        t1 = mono(3, (1, 0, 0))
        t3 = mono(3, (0, 0, 1))
        one = laurent_one(0, 0, 3)
        minors = [t1, one - t1]
        # a tail perturbation that does not cancel makes the input invalid
        with pytest.raises(ValueError):
            verify_restriction_identity(minors, [one + t3, one + t3], 2)
        # canceling construction: p1 = 1 + (1 - t1) t3, p2 = 1 - t1 t3, so
        # t1 p1 + (1 - t1) p2 = 1 + t1(1-t1)t3 - (1-t1)t1 t3 = 1
        p1 = one + (one - t1) * t3
        p2 = one - t1 * t3
        result = verify_restriction_identity(minors, [p1, p2], 2)
        assert result.ok
        assert result.q_sum_is_one and result.s_sum_is_zero
        total = laurent_zero(0, 0, 2)
        for m_i, p_i in zip(result.restricted_minors, result.restricted_cofactors):
            total = total + m_i * p_i
        assert total.is_one

    def test_invalid_certificate_rejected(self):
        t1 = mono(3, (1, 0, 0))
        one = laurent_one(0, 0, 3)
        with pytest.raises(ValueError):
            verify_restriction_identity([t1], [one], 2)

    def test_minor_support_precondition(self):
        t3 = mono(3, (0, 0, 1))
        inverse = mono(3, (0, 0, -1))
        with pytest.raises(ValueError):
            verify_restriction_identity([t3], [inverse], 2)

    def test_embed_round_trip(self):
        x = mono(2, (1, -1), 3) + laurent_one(0, 0, 2)
        assert truncate_to_rank(embed_to_rank(x, 4), 2) == x


class TestRestrictionTheoremFuzz:
    def test_aman_restriction(self):
        # primitive sets supported in the first l generators stay primitive
        # at rank l (finite exact case)
        rng = random.Random(99)
        for trial in range(20):
            auto = random_automorphism(2, rng.randint(0, 5), seed=trial)
            words_l = list(auto.forward.images[:1])
            words_r = [change_rank(w, 3) for w in words_l]
            big = is_primitive_am_an(words_r, 2, 2)
            small = is_primitive_am_an(words_l, 2, 2)
            assert big.is_primitive and small.is_primitive
