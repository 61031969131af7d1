"""The commutative group ring Z_m[Z_n^r] and the abelian-by-abelian test.

Elements are sparse maps from monomials (exponent vectors, reduced mod n
when n > 0) to coefficients (reduced mod m when m > 0); both moduli may be
zero, meaning plain integers.  Free-group ring elements project here by
abelianizing every word, which carries the Fox derivatives to the induced
derivatives used by the primitivity criterion for the variety of
abelian-by-abelian groups: a set is primitive iff the ideal generated by
the maximal minors of its induced Jacobian is the whole ring and the set
is primitive in the abelianization.

Ideal membership of 1 is decided exactly when both moduli are positive
(the ring is a finite Z_m-module); otherwise a bounded certificate search
runs, with a sound evaluation obstruction for refutations and an honest
Unknown when the bound is exhausted.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations, product as iter_product
from math import gcd

from . import _intlinalg, abelian, verdict
from .groupring import fox_derivative


class UnsupportedConfigurationError(ValueError):
    """The criterion is not asserted for m = 0, n > 0, k = r - 1."""


class LaurentElement:
    """Sparse element of Z_m[Z_n^r]; moduli 0 mean the integers."""

    __slots__ = ("m", "n", "rank", "terms")

    def __init__(self, m, n, rank, terms=None):
        if m < 0 or n < 0 or rank < 1:
            raise ValueError("bad moduli or rank")
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                exps = _norm_exps(exps, n, rank)
                coeff = coeff % m if m else coeff
                if coeff:
                    prev = clean.get(exps, 0)
                    total = (prev + coeff) % m if m else prev + coeff
                    if total:
                        clean[exps] = total
                    else:
                        clean.pop(exps, None)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentElement is immutable")

    def _check_compatible(self, other):
        if (self.m, self.n, self.rank) != (other.m, other.n, other.rank):
            raise ValueError("mixed moduli or ranks: (%d,%d,%d) vs (%d,%d,%d)"
                             % (self.m, self.n, self.rank, other.m, other.n, other.rank))

    def __eq__(self, other):
        return (isinstance(other, LaurentElement)
                and (self.m, self.n, self.rank) == (other.m, other.n, other.rank)
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.m, self.n, self.rank, frozenset(self.terms.items())))

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_one(self):
        return self == laurent_one(self.m, self.n, self.rank)

    def __add__(self, other):
        self._check_compatible(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            total = terms.get(exps, 0) + coeff
            if self.m:
                total %= self.m
            if total:
                terms[exps] = total
            else:
                terms.pop(exps, None)
        return _raw(self.m, self.n, self.rank, terms)

    def __neg__(self):
        m = self.m
        return _raw(m, self.n, self.rank,
                    {e: (-c % m if m else -c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return laurent_scale(self, other)
        self._check_compatible(other)
        m, n = self.m, self.n
        terms = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exps = tuple((x + y) % n if n else x + y for x, y in zip(ea, eb))
                total = terms.get(exps, 0) + ca * cb
                if m:
                    total %= m
                if total:
                    terms[exps] = total
                else:
                    terms.pop(exps, None)
        return _raw(m, n, self.rank, terms)

    def __rmul__(self, other):
        if isinstance(other, int):
            return laurent_scale(self, other)
        return NotImplemented

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __str__(self):
        return format_laurent(self)

    def __repr__(self):
        return "LaurentElement(m=%d, n=%d, %s)" % (self.m, self.n, format_laurent(self))

    def augmentation(self):
        """Image under evaluating every monomial at 1 (an integer, taken
        before any reduction mod m so the caller can choose)."""
        return sum(self.terms.values())

    def to_json(self):
        return {"m": self.m, "n": self.n, "rank": self.rank,
                "terms": [[list(e), c] for e, c in self.sorted_terms()]}

    @classmethod
    def from_json(cls, data):
        terms = {tuple(e): c for e, c in data["terms"]}
        return cls(data["m"], data["n"], data["rank"], terms)


def _norm_exps(exps, n, rank):
    exps = tuple(int(x) for x in exps)
    if len(exps) != rank:
        raise ValueError("monomial length %d does not match rank %d" % (len(exps), rank))
    if n:
        exps = tuple(x % n for x in exps)
    return exps


def _raw(m, n, rank, terms):
    """Internal constructor for already-normalized term maps."""
    elem = LaurentElement.__new__(LaurentElement)
    object.__setattr__(elem, "m", m)
    object.__setattr__(elem, "n", n)
    object.__setattr__(elem, "rank", rank)
    object.__setattr__(elem, "terms", terms)
    return elem


def laurent_zero(m, n, rank):
    return LaurentElement(m, n, rank)


def laurent_one(m, n, rank):
    return LaurentElement(m, n, rank, {(0,) * rank: 1})


def laurent_monomial(m, n, rank, exps, coeff=1):
    return LaurentElement(m, n, rank, {tuple(exps): coeff})


def laurent_scale(x, scalar):
    m = x.m
    terms = {}
    for exps, coeff in x.terms.items():
        total = scalar * coeff
        if m:
            total %= m
        if total:
            terms[exps] = total
    return _raw(m, x.n, x.rank, terms)


def format_laurent(x):
    if not x.terms:
        return "0"
    parts = []
    for exps, coeff in x.sorted_terms():
        factors = " ".join("t%d" % (i + 1) if e == 1 else "t%d^%d" % (i + 1, e)
                           for i, e in enumerate(exps) if e)
        body = str(abs(coeff)) if not factors else "%d*%s" % (abs(coeff), factors)
        if not parts:
            parts.append("-" + body if coeff < 0 else body)
        else:
            parts.append(("- " if coeff < 0 else "+ ") + body)
    return " ".join(parts)


def project_to_quotient(x, m, n):
    """Ring homomorphism ZF_r -> Z_m[Z_n^r]: abelianize words, reduce
    coefficients."""
    terms = {}
    for word, coeff in x.terms.items():
        exps = [0] * x.rank
        for g, e in word.syllables:
            exps[g - 1] += e
        exps = tuple(v % n if n else v for v in exps)
        terms[exps] = terms.get(exps, 0) + coeff
    return LaurentElement(m, n, x.rank, terms)


def project_word(w, m, n):
    exps = [0] * w.rank
    for g, e in w.syllables:
        exps[g - 1] += e
    return laurent_monomial(m, n, w.rank, exps)


def induced_jacobian(words_seq, m, n):
    """k x r matrix of induced Fox derivatives over Z_m[Z_n^r]."""
    words_seq = list(words_seq)
    if not words_seq:
        raise ValueError("need at least one word")
    rank = words_seq[0].rank
    return tuple(tuple(project_to_quotient(fox_derivative(j, w), m, n)
                       for j in range(1, rank + 1))
                 for w in words_seq)


def matrix_det(rows):
    """Determinant of a square matrix of Laurent elements (Laplace)."""
    size = len(rows)
    if size == 0:
        raise ValueError("empty matrix")
    if size == 1:
        return rows[0][0]
    head = rows[0]
    total = None
    for j in range(size):
        entry = head[j]
        if entry.is_zero:
            continue
        minor = [tuple(row[c] for c in range(size) if c != j) for row in rows[1:]]
        term = entry * matrix_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        sample = rows[0][0]
        return laurent_zero(sample.m, sample.n, sample.rank)
    return total


def matrix_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0])
    sample = a[0][0]
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = laurent_zero(sample.m, sample.n, sample.rank)
            for t in range(inner):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def matrix_is_identity(rows):
    for i, row in enumerate(rows):
        for j, entry in enumerate(row):
            if i == j:
                if not entry.is_one:
                    return False
            elif not entry.is_zero:
                return False
    return True


def kth_minors(matrix):
    """All maximal (k-th order) minors, by lexicographic column subsets."""
    k = len(matrix)
    cols = len(matrix[0])
    if k > cols:
        raise ValueError("more rows than columns")
    minors = []
    for subset in combinations(range(cols), k):
        minors.append(matrix_det([tuple(row[c] for c in subset) for row in matrix]))
    return minors


class CertificateStatus(enum.Enum):
    FOUND = "Found"
    NOT_IDEAL = "NotIdeal"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class IdealCertificate:
    """Outcome of the 1-in-ideal test; Found certificates are re-verified
    by ring arithmetic before being returned."""

    status: CertificateStatus
    minors: tuple
    cofactors: tuple | None = None
    residual: LaurentElement | None = None
    obstruction: int | None = None
    degree_bound: int | None = None

    @property
    def found(self):
        return self.status is CertificateStatus.FOUND

    def to_json(self):
        return {
            "status": self.status.value,
            "minors": [m.to_json() for m in self.minors],
            "cofactors": [p.to_json() for p in self.cofactors] if self.cofactors else None,
            "residual": self.residual.to_json() if self.residual else None,
            "obstruction": self.obstruction,
            "degree_bound": self.degree_bound,
        }


FINITE_DIMENSION_GUARD = 10 ** 6
SEARCH_CELL_GUARD = 2 * 10 ** 6


def _verify_certificate(minors, cofactors):
    sample = minors[0]
    total = laurent_zero(sample.m, sample.n, sample.rank)
    for mi, pi in zip(minors, cofactors):
        total = total + mi * pi
    return total


def _solve_combination(minors, box, target_monomial, m, n, rank):
    """Solve sum_i minors[i] * p_i = 1 with each p_i supported on `box`.

    Returns the cofactors or None.  Exact over the integers (lifted with
    the modulus when m > 0).
    """
    t = len(minors)
    columns = []           # flat list of (minor index, monomial)
    for i in range(t):
        for mono in box:
            columns.append((i, mono))
    row_index = {}
    rows_data = []

    def row_of(mono):
        if mono not in row_index:
            row_index[mono] = len(rows_data)
            rows_data.append({})
        return row_index[mono]

    for col, (i, mono) in enumerate(columns):
        for exps, coeff in minors[i].terms.items():
            prod = tuple((x + y) % n if n else x + y for x, y in zip(exps, mono))
            rows_data[row_of(prod)][col] = rows_data[row_of(prod)].get(col, 0) + coeff
    row_of(target_monomial)
    if len(rows_data) * len(columns) > SEARCH_CELL_GUARD:
        return None, True
    a = [[row.get(c, 0) for c in range(len(columns))] for row in rows_data]
    b = [0] * len(rows_data)
    b[row_index[target_monomial]] = 1
    x = _intlinalg.solve_modular(a, b, m)
    if x is None:
        return None, False
    cofactors = []
    for i in range(t):
        terms = {}
        for col, (mi, mono) in enumerate(columns):
            if mi == i and x[col]:
                terms[mono] = terms.get(mono, 0) + x[col]
        cofactors.append(LaurentElement(m, n, rank, terms))
    return tuple(cofactors), False


def ideal_contains_one(minors, degree_bound=2):
    """Does the ideal generated by the given elements contain 1?

    With both moduli positive the ring is a finite Z_m-module of dimension
    n^rank and the answer is exact (Found or NotIdeal).  Otherwise a
    bounded search over cofactor monomials runs: Found with a verified
    certificate, NotIdeal only on the sound evaluation obstruction (every
    monomial to 1 maps the ideal into a proper ideal of Z or Z_m), else
    Unknown at the given bound.
    """
    minors = tuple(minors)
    if not minors:
        raise ValueError("need at least one generator")
    sample = minors[0]
    m, n, rank = sample.m, sample.n, sample.rank
    for x in minors:
        if (x.m, x.n, x.rank) != (m, n, rank):
            raise ValueError("mixed moduli in ideal generators")

    if m > 0 and n > 0:
        dimension = n ** rank
        if dimension > FINITE_DIMENSION_GUARD:
            raise ValueError("finite ring dimension %d exceeds the guard" % dimension)
        box = list(iter_product(range(n), repeat=rank))
        cofactors, _ = _solve_combination(minors, box, (0,) * rank, m, n, rank)
        if cofactors is None:
            return IdealCertificate(CertificateStatus.NOT_IDEAL, minors)
        residual = _verify_certificate(minors, cofactors)
        if not residual.is_one:
            raise RuntimeError("certificate failed re-verification; this is a bug")
        return IdealCertificate(CertificateStatus.FOUND, minors,
                                cofactors=cofactors, residual=residual)

    # Infinite coefficient or monomial group: semidecision.
    evaluations = [x.augmentation() for x in minors]
    g = _intlinalg.gcd_list(evaluations)
    unit = (g == 1) if m == 0 else (gcd(g, m) == 1)
    if not unit:
        return IdealCertificate(CertificateStatus.NOT_IDEAL, minors, obstruction=g)
    if n > 0:
        box = list(iter_product(range(n), repeat=rank))
    else:
        span = range(-degree_bound, degree_bound + 1)
        box = list(iter_product(span, repeat=rank))
    cofactors, _overflow = _solve_combination(minors, box, (0,) * rank, m, n, rank)
    if cofactors is None:
        return IdealCertificate(CertificateStatus.UNKNOWN, minors,
                                degree_bound=degree_bound)
    residual = _verify_certificate(minors, cofactors)
    if not residual.is_one:
        raise RuntimeError("certificate failed re-verification; this is a bug")
    return IdealCertificate(CertificateStatus.FOUND, minors,
                            cofactors=cofactors, residual=residual,
                            degree_bound=degree_bound)


def is_primitive_am_an(words_seq, m, n, degree_bound=2):
    """Primitivity in the free abelian-by-abelian group of exponents (m, n).

    Rejects the configuration m = 0, n > 0, k = r - 1, where the criterion
    is not asserted.  Primitive iff the minor ideal contains 1 and the set
    is primitive in the abelianization at exponent n; an Unknown ideal test
    propagates unless the abelian test already refutes.
    """
    words_seq = list(words_seq)
    if not words_seq:
        raise ValueError("need at least one word")
    rank = words_seq[0].rank
    k = len(words_seq)
    if m == 0 and n > 0 and k == rank - 1:
        raise UnsupportedConfigurationError(
            "the criterion is not available for m=0, n>0, k=r-1 "
            "(m=%d, n=%d, k=%d, r=%d)" % (m, n, k, rank))
    abelian_result = abelian.is_primitive_abelian(
        abelian.abelianize(words_seq, rank), n)
    if abelian_result.is_not_primitive:
        return verdict.not_primitive(
            reason="not primitive in the abelianization: " + abelian_result.reason,
            witness=abelian_result.witness)
    certificate = ideal_contains_one(
        kth_minors(induced_jacobian(words_seq, m, n)), degree_bound)
    if certificate.status is CertificateStatus.NOT_IDEAL:
        return verdict.not_primitive(
            reason="minor ideal does not contain 1",
            witness={"certificate": certificate.to_json()})
    if certificate.status is CertificateStatus.UNKNOWN:
        return verdict.unknown({"degree_bound": degree_bound},
                               reason="ideal membership search exhausted")
    return verdict.primitive({
        "certificate": certificate.to_json(),
        "abelian": abelian_result.witness,
    })


def split_by_support_laurent(x, l):
    """Split x = q + s: q keeps the monomials with zero exponents beyond
    coordinate l, s keeps the rest."""
    if not 1 <= l < x.rank:
        raise ValueError("l must lie in 1..rank-1")
    q_terms, s_terms = {}, {}
    for exps, coeff in x.terms.items():
        if any(exps[l:]):
            s_terms[exps] = coeff
        else:
            q_terms[exps] = coeff
    return (_raw(x.m, x.n, x.rank, q_terms), _raw(x.m, x.n, x.rank, s_terms))


def truncate_to_rank(x, l):
    """Reinterpret an element supported on the first l coordinates inside
    Z_m[Z_n^l]."""
    terms = {}
    for exps, coeff in x.terms.items():
        if any(exps[l:]):
            raise ValueError("element involves coordinates beyond %d" % l)
        terms[exps[:l]] = coeff
    return LaurentElement(x.m, x.n, l, terms)


def embed_to_rank(x, rank):
    """Canonical embedding into more coordinates (zero tail exponents)."""
    if rank < x.rank:
        raise ValueError("cannot shrink by embedding")
    pad = (0,) * (rank - x.rank)
    return LaurentElement(x.m, x.n, rank, {e + pad: c for e, c in x.terms.items()})


@dataclass(frozen=True)
class RestrictionCheck:
    """Result of verifying the certificate-splitting identities."""

    ok: bool
    q_sum_is_one: bool
    s_sum_is_zero: bool
    restricted_minors: tuple
    restricted_cofactors: tuple | None

    def __bool__(self):
        return self.ok


def verify_restriction_identity(minors, cofactors, l):
    """Check the support-splitting identities behind restriction.

    Preconditions: the minors live in the first l coordinates and the
    certificate is valid (sum m_i p_i = 1); an invalid certificate raises.
    On valid input both 1 - sum m_i q_i and sum m_i s_i must vanish, and
    the truncated certificate must verify at rank l.  A False return means
    a verified identity failed, which should never happen: alarm.
    """
    minors = tuple(minors)
    cofactors = tuple(cofactors)
    if len(minors) != len(cofactors):
        raise ValueError("minor/cofactor length mismatch")
    sample = minors[0]
    for x in minors:
        if any(any(e[l:]) for e in x.terms):
            raise ValueError("minor involves coordinates beyond %d" % l)
    if not _verify_certificate(minors, cofactors).is_one:
        raise ValueError("invalid certificate: sum m_i p_i is not 1")
    q_parts, s_parts = zip(*(split_by_support_laurent(p, l) for p in cofactors))
    one = laurent_one(sample.m, sample.n, sample.rank)
    q_sum = _verify_certificate(minors, q_parts)
    s_sum = _verify_certificate(minors, s_parts)
    # s_sum is sum m_i s_i computed against the same minors; subtract the
    # q-part from the full identity instead of recomputing:
    q_ok = q_sum == one
    s_ok = s_sum.is_zero
    restricted_minors = tuple(truncate_to_rank(x, l) for x in minors)
    restricted_cofactors = None
    truncated_ok = False
    if q_ok:
        restricted_cofactors = tuple(truncate_to_rank(q, l) for q in q_parts)
        truncated_ok = _verify_certificate(restricted_minors, restricted_cofactors).is_one
    ok = q_ok and s_ok and truncated_ok
    return RestrictionCheck(ok=ok, q_sum_is_one=q_ok, s_sum_is_zero=s_ok,
                            restricted_minors=restricted_minors,
                            restricted_cofactors=restricted_cofactors)
