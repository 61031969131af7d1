"""Exact arithmetic in the integral group ring of a free group.

Elements are finite Z-linear combinations of reduced words, stored as a
map from :class:`~primus.words.Word` to a nonzero integer coefficient.
This module also provides the left Fox derivatives, Jacobian matrices of
word tuples, right-inverse verification, the support splitting used when
restricting a Jacobian to an initial segment of the basis, and witness
construction from automorphisms via the chain rule.
"""

from __future__ import annotations

from . import _intlinalg
from .words import (apply_endomorphism, change_rank, enumerate_reduced_words,
                    format_word, free_multiply, generator_word, identity_word,
                    support, word_sort_key)


class GroupRingElement:
    """Finite Z-linear combination of free-group words."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank, terms=None):
        object.__setattr__(self, "rank", rank)
        clean = {}
        if terms:
            for word, coeff in terms.items():
                if coeff:
                    if word.rank != rank:
                        raise ValueError("term rank %d does not match %d" % (word.rank, rank))
                    clean[word] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("GroupRingElement is immutable")

    def __eq__(self, other):
        return (isinstance(other, GroupRingElement) and self.rank == other.rank
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_one(self):
        if len(self.terms) != 1:
            return False
        ((word, coeff),) = self.terms.items()
        return coeff == 1 and word.is_identity

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: word_sort_key(item[0]))

    def __add__(self, other):
        return ring_add(self, other)

    def __sub__(self, other):
        return ring_add(self, ring_neg(other))

    def __neg__(self):
        return ring_neg(self)

    def __mul__(self, other):
        if isinstance(other, int):
            return ring_scale(self, other)
        return ring_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return ring_scale(self, other)
        return NotImplemented

    def __str__(self):
        return format_ring_element(self)

    def __repr__(self):
        return "GroupRingElement(%d, %s)" % (self.rank, format_ring_element(self))

    def word_support(self):
        """Union of the supports of all words occurring in the element."""
        out = set()
        for word in self.terms:
            out |= support(word)
        return frozenset(out)


def ring_zero(rank):
    return GroupRingElement(rank)


def ring_one(rank):
    return GroupRingElement(rank, {identity_word(rank): 1})


def from_word(word, coeff=1):
    return GroupRingElement(word.rank, {word: coeff})


def ring_add(x, y):
    if x.rank != y.rank:
        raise ValueError("rank mismatch: %d vs %d" % (x.rank, y.rank))
    terms = dict(x.terms)
    for word, coeff in y.terms.items():
        total = terms.get(word, 0) + coeff
        if total:
            terms[word] = total
        else:
            terms.pop(word, None)
    return GroupRingElement(x.rank, terms)


def ring_neg(x):
    return GroupRingElement(x.rank, {w: -c for w, c in x.terms.items()})


def ring_scale(x, scalar):
    if scalar == 0:
        return ring_zero(x.rank)
    return GroupRingElement(x.rank, {w: scalar * c for w, c in x.terms.items()})


def ring_mul(x, y):
    """Convolution product: (sum c_u u)(sum d_v v) = sum c_u d_v (uv)."""
    if x.rank != y.rank:
        raise ValueError("rank mismatch: %d vs %d" % (x.rank, y.rank))
    terms = {}
    for u, cu in x.terms.items():
        for v, dv in y.terms.items():
            w = free_multiply(u, v)
            total = terms.get(w, 0) + cu * dv
            if total:
                terms[w] = total
            else:
                del terms[w]
    return GroupRingElement(x.rank, terms)


def ring_apply_endomorphism(phi, x):
    """Ring map induced by an endomorphism: words map, coefficients stay."""
    terms = {}
    for word, coeff in x.terms.items():
        image = apply_endomorphism(phi, word)
        total = terms.get(image, 0) + coeff
        if total:
            terms[image] = total
        else:
            del terms[image]
    return GroupRingElement(phi.rank, terms)


def ring_change_rank(x, rank):
    return GroupRingElement(rank, {change_rank(w, rank): c for w, c in x.terms.items()})


def augmentation(x):
    """Sum of coefficients (the ring map sending every word to 1)."""
    return sum(x.terms.values())


def format_ring_element(x):
    if not x.terms:
        return "0"
    parts = []
    for word, coeff in x.sorted_terms():
        magnitude = abs(coeff)
        body = str(magnitude) if word.is_identity else "%d*%s" % (magnitude, format_word(word))
        if not parts:
            parts.append("-" + body if coeff < 0 else body)
        else:
            parts.append(("- " if coeff < 0 else "+ ") + body)
    return " ".join(parts)


def fox_derivative(j, u):
    """Left Fox derivative of a word with respect to a_j.

    Defined by d_j(a_j) = 1, d_j(a_i) = 0 for i != j, and
    d_j(uv) = d_j(u) + u d_j(v).
    """
    if not 1 <= j <= u.rank:
        raise ValueError("index %d out of range 1..%d" % (j, u.rank))
    rank = u.rank
    terms = {}

    def accumulate(word, coeff):
        total = terms.get(word, 0) + coeff
        if total:
            terms[word] = total
        else:
            del terms[word]

    prefix = identity_word(rank)
    for g, e in u.syllables:
        if g == j:
            if e > 0:
                # d(a^e) = 1 + a + ... + a^(e-1)
                for t in range(e):
                    accumulate(free_multiply(prefix, generator_word(rank, g, t)), 1)
            else:
                # d(a^-e) = -(a^-1 + ... + a^e)
                for t in range(1, -e + 1):
                    accumulate(free_multiply(prefix, generator_word(rank, g, -t)), -1)
        prefix = free_multiply(prefix, generator_word(rank, g, e))
    return GroupRingElement(rank, terms)


def fox_derivative_elem(j, x):
    """Linear extension of the Fox derivative to ring elements."""
    result = ring_zero(x.rank)
    for word, coeff in x.terms.items():
        result = ring_add(result, ring_scale(fox_derivative(j, word), coeff))
    return result


class JacobianMatrix:
    """Rectangular matrix of group-ring elements over a common rank."""

    __slots__ = ("rank", "entries")

    def __init__(self, rank, entries):
        entries = tuple(tuple(row) for row in entries)
        if entries:
            width = len(entries[0])
            for row in entries:
                if len(row) != width:
                    raise ValueError("ragged matrix")
                for entry in row:
                    if entry.rank != rank:
                        raise ValueError("entry rank mismatch")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("JacobianMatrix is immutable")

    @property
    def rows(self):
        return len(self.entries)

    @property
    def cols(self):
        return len(self.entries[0]) if self.entries else 0

    def __eq__(self, other):
        return (isinstance(other, JacobianMatrix) and self.rank == other.rank
                and self.entries == other.entries)

    def __getitem__(self, index):
        return self.entries[index]

    def __matmul__(self, other):
        return mat_mul(self, other)

    def is_identity(self):
        if self.rows != self.cols:
            return False
        for i, row in enumerate(self.entries):
            for j, entry in enumerate(row):
                if i == j:
                    if not entry.is_one:
                        return False
                elif not entry.is_zero:
                    return False
        return True

    def __str__(self):
        return "\n".join(", ".join(str(e) for e in row) for row in self.entries)


def mat_mul(a, b):
    if a.rank != b.rank:
        raise ValueError("rank mismatch")
    if a.cols != b.rows:
        raise ValueError("shape mismatch: %dx%d times %dx%d"
                         % (a.rows, a.cols, b.rows, b.cols))
    out = []
    for i in range(a.rows):
        row = []
        for j in range(b.cols):
            acc = ring_zero(a.rank)
            for t in range(a.cols):
                acc = ring_add(acc, ring_mul(a.entries[i][t], b.entries[t][j]))
            row.append(acc)
        out.append(row)
    return JacobianMatrix(a.rank, out)


def jacobian(words_seq):
    """k x r matrix with entry (i, j) the Fox derivative d_j(x_i)."""
    words_seq = list(words_seq)
    if not words_seq:
        raise ValueError("need at least one word")
    rank = words_seq[0].rank
    for w in words_seq:
        if w.rank != rank:
            raise ValueError("words have mixed ranks")
    return JacobianMatrix(rank, [[fox_derivative(j, w) for j in range(1, rank + 1)]
                                 for w in words_seq])


def verify_right_inverse(j_matrix, p_matrix):
    """True iff J P equals the identity, exactly, over the group ring."""
    if j_matrix.cols != p_matrix.rows or j_matrix.rows != p_matrix.cols:
        raise ValueError("shapes do not compose to a square identity check")
    return mat_mul(j_matrix, p_matrix).is_identity()


def split_by_support(x, l):
    """Split x = q + r: q collects the terms whose words use some generator
    beyond a_l, r collects the terms lying in the rank-l subring."""
    if not 1 <= l < x.rank:
        raise ValueError("l must lie in 1..rank-1")
    q_terms, r_terms = {}, {}
    for word, coeff in x.terms.items():
        if any(g > l for g in support(word)):
            q_terms[word] = coeff
        else:
            r_terms[word] = coeff
    return GroupRingElement(x.rank, q_terms), GroupRingElement(x.rank, r_terms)


def split_matrix_by_support(matrix, l):
    """Entrywise support split, giving the matrices Q and R."""
    q_rows, r_rows = [], []
    for row in matrix.entries:
        q_row, r_row = [], []
        for entry in row:
            q_entry, r_entry = split_by_support(entry, l)
            q_row.append(q_entry)
            r_row.append(r_entry)
        q_rows.append(q_row)
        r_rows.append(r_row)
    return JacobianMatrix(matrix.rank, q_rows), JacobianMatrix(matrix.rank, r_rows)


def restrict_jacobian(matrix, l):
    """Delete the columns beyond l (they must be zero) and reinterpret the
    remaining entries over the rank-l group ring."""
    if not 1 <= l < matrix.rank:
        raise ValueError("l must lie in 1..rank-1")
    for j in range(l, matrix.cols):
        for i in range(matrix.rows):
            if not matrix.entries[i][j].is_zero:
                raise ValueError("column %d is nonzero; the set does not lie in "
                                 "the rank-%d subgroup" % (j + 1, l))
    rows = [[ring_change_rank(entry, l) for entry in row[:l]] for row in matrix.entries]
    return JacobianMatrix(l, rows)


def restrict_rows(matrix, l):
    """Keep the first l rows and reinterpret entries over the rank-l ring.

    Entries of the kept rows must not use generators beyond a_l.
    """
    if not 1 <= l < matrix.rank:
        raise ValueError("l must lie in 1..rank-1")
    rows = [[ring_change_rank(entry, l) for entry in row] for row in matrix.entries[:l]]
    return JacobianMatrix(l, rows)


def chain_rule_inverse_witness(auto, k):
    """From an automorphism with exact inverse, build the Jacobian J of the
    first k generator images together with an explicit right inverse P.

    The full Jacobian of an automorphism phi has the two-sided inverse
    phi_*(Jacobian(phi^{-1})), by the Fox chain rule applied to both
    compositions phi . phi^{-1} and phi^{-1} . phi; J and P are the first
    k rows, respectively columns, of that pair.
    """
    rank = auto.rank
    if not 1 <= k <= rank:
        raise ValueError("k must lie in 1..rank")
    full_j = jacobian(auto.forward.images)
    inverse_j = jacobian(auto.inverse.images)
    full_p = JacobianMatrix(rank, [[ring_apply_endomorphism(auto.forward, entry)
                                    for entry in row] for row in inverse_j.entries])
    j_matrix = JacobianMatrix(rank, full_j.entries[:k])
    p_matrix = JacobianMatrix(rank, [row[:k] for row in full_p.entries])
    if not verify_right_inverse(j_matrix, p_matrix):
        raise RuntimeError("chain-rule witness failed verification; this is a bug")
    return j_matrix, p_matrix


def full_two_sided_inverse(auto):
    """Full r x r Jacobian of an automorphism and its two-sided inverse."""
    rank = auto.rank
    j_matrix, p_matrix = chain_rule_inverse_witness(auto, rank)
    if not mat_mul(p_matrix, j_matrix).is_identity():
        raise RuntimeError("chain-rule inverse is not two-sided; this is a bug")
    return j_matrix, p_matrix


def bounded_right_inverse_search(j_matrix, max_word_len=2, max_unknowns=4000):
    """Search for P with J P = I_k, entries supported on words of length at
    most `max_word_len`.

    Returns (P, None) when a witness is found (already verified), or
    (None, budget-dict) when the bounded search is exhausted.  Absence at a
    bound proves nothing; there is no general decision procedure here.
    """
    rank = j_matrix.rank
    k, r = j_matrix.rows, j_matrix.cols
    candidates = enumerate_reduced_words(rank, max_word_len)
    n_vars = r * k * len(candidates)
    if n_vars > max_unknowns:
        raise ValueError("bounded search would need %d unknowns (max %d)"
                         % (n_vars, max_unknowns))

    def var(m, j, w_index):
        return (m * k + j) * len(candidates) + w_index

    # Row index space: coefficient of each product word in each (i, j) entry.
    row_index = {}
    rows = []

    def row_of(i, j, word):
        key = (i, j, word)
        if key not in row_index:
            row_index[key] = len(rows)
            rows.append([0] * n_vars)
        return row_index[key]

    for i in range(k):
        for m in range(r):
            entry = j_matrix.entries[i][m]
            for u, cu in entry.terms.items():
                for j in range(k):
                    for w_index, w in enumerate(candidates):
                        prod = free_multiply(u, w)
                        rows[row_of(i, j, prod)][var(m, j, w_index)] += cu
    # Target: identity matrix entries.
    for i in range(k):
        for j in range(k):
            row_of(i, j, identity_word(rank))
    b = [0] * len(rows)
    for (i, j, word), idx in row_index.items():
        if i == j and word.is_identity:
            b[idx] = 1
    x = _intlinalg.solve_integer(rows, b)
    if x is None:
        return None, {"max_word_len": max_word_len}
    p_rows = []
    for m in range(r):
        row = []
        for j in range(k):
            terms = {}
            for w_index, w in enumerate(candidates):
                coeff = x[var(m, j, w_index)]
                if coeff:
                    terms[w] = terms.get(w, 0) + coeff
            row.append(GroupRingElement(rank, terms))
        p_rows.append(row)
    p_matrix = JacobianMatrix(rank, p_rows)
    if not verify_right_inverse(j_matrix, p_matrix):
        raise RuntimeError("bounded search returned a non-witness; this is a bug")
    return p_matrix, None
