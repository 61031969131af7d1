"""Finite wreath-product model of free abelian-by-abelian groups.

For positive exponents m and n, the free group of rank r in the variety
of (exponent-m abelian)-by-(exponent-n abelian) groups embeds into the
wreath product Z_m^r wr Z_n^r, with generator i mapping to the pair
(delta function at 0 hitting coordinate i, i-th unit top vector); the
subgroup generated by these images is the relatively free group itself.
Because the group is finite it is trivially Hopfian, so a generating
r-tuple is a basis, and primitivity of a subset is an exhaustive search
for a generating completion.  This is the ground-truth oracle for the
abelian-by-abelian decider at small parameters.
"""

from __future__ import annotations

from collections import deque
from itertools import product as iter_product

DEFAULT_ORDER_GUARD = 10 ** 5


class WreathModel:
    """The subgroup of Z_m^r wr Z_n^r generated by the standard elements.

    Elements are pairs (bottom, top): top is a vector in Z_n^r, bottom a
    function Z_n^r -> Z_m^r stored as a flat tuple indexed by mixed-radix
    position.  Multiplication translates the right factor's bottom by the
    left factor's top.
    """

    def __init__(self, m, n, rank, order_guard=DEFAULT_ORDER_GUARD):
        if m < 1 or n < 1:
            raise ValueError("the finite model needs positive exponents")
        if rank < 1:
            raise ValueError("rank must be positive")
        self.m = m
        self.n = n
        self.rank = rank
        self.positions = list(iter_product(range(n), repeat=rank))
        self.position_index = {p: i for i, p in enumerate(self.positions)}
        self._shift_tables = {}
        self.identity = (((0,) * rank) * len(self.positions), (0,) * rank)
        self.generators = [self._generator(i) for i in range(rank)]
        self.elements = self._closure(self.generators, order_guard)

    def _generator(self, index):
        bottom = [0] * (len(self.positions) * self.rank)
        slot = self.position_index[(0,) * self.rank] * self.rank + index
        bottom[slot] = 1 % self.m
        top = tuple(1 % self.n if i == index else 0 for i in range(self.rank))
        return (tuple(bottom), top)

    def _shift_table(self, shift):
        table = self._shift_tables.get(shift)
        if table is None:
            table = [self.position_index[tuple((x - s) % self.n
                                               for x, s in zip(pos, shift))]
                     for pos in self.positions]
            self._shift_tables[shift] = table
        return table

    def multiply(self, x, y):
        bx, tx = x
        by, ty = y
        table = self._shift_table(tx)
        r = self.rank
        bottom = list(bx)
        for pos in range(len(self.positions)):
            src = table[pos] * r
            dst = pos * r
            for i in range(r):
                bottom[dst + i] = (bottom[dst + i] + by[src + i]) % self.m
        top = tuple((a + b) % self.n for a, b in zip(tx, ty))
        return (tuple(bottom), top)

    def inverse(self, x):
        bx, tx = x
        neg_top = tuple((-a) % self.n for a in tx)
        table = self._shift_table(neg_top)
        r = self.rank
        bottom = [0] * len(bx)
        for pos in range(len(self.positions)):
            src = table[pos] * r
            dst = pos * r
            for i in range(r):
                bottom[dst + i] = (-bx[src + i]) % self.m
        return (tuple(bottom), neg_top)

    def evaluate_word(self, word):
        acc = self.identity
        for g, e in word.syllables:
            generator = self.generators[g - 1]
            step = generator if e > 0 else self.inverse(generator)
            for _ in range(abs(e)):
                acc = self.multiply(acc, step)
        return acc

    def _closure(self, seeds, guard):
        steps = []
        for s in seeds:
            steps.append(s)
            steps.append(self.inverse(s))
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for s in steps:
                y = self.multiply(x, s)
                if y not in seen:
                    if len(seen) >= guard:
                        raise ValueError("group order exceeds the guard %d" % guard)
                    seen.add(y)
                    queue.append(y)
        return seen

    @property
    def order(self):
        return len(self.elements)

    def generates(self, elements):
        """Do the given elements generate the whole model subgroup?"""
        steps = []
        for s in elements:
            steps.append(s)
            steps.append(self.inverse(s))
        if not steps:
            return self.order == 1
        seen = {self.identity}
        queue = deque([self.identity])
        target = self.order
        while queue:
            x = queue.popleft()
            for s in steps:
                y = self.multiply(x, s)
                if y not in seen:
                    seen.add(y)
                    if len(seen) == target:
                        return True
                    queue.append(y)
        return len(seen) == target


def expected_order(m, n, rank):
    """n^r * m^(1 + n^r (r-1)): index times the rank of the kernel module
    (Nielsen-Schreier rank of the exponent-n abelianization kernel)."""
    top = n ** rank
    return top * m ** (1 + top * (rank - 1))


COMPLETION_GUARD = 10 ** 6


def primitive_in_model(model, words_seq):
    """Exhaustive ground truth: is the set part of a generating r-tuple?

    Returns (answer, completion or None); the completion lists model
    elements.  Guarded by the total number of candidate completions.
    """
    images = [model.evaluate_word(w) for w in words_seq]
    k = len(images)
    r = model.rank
    if k > r:
        return False, None
    missing = r - k
    if model.order ** missing > COMPLETION_GUARD:
        raise ValueError("completion search space exceeds the guard")
    if missing == 0:
        ok = model.generates(images)
        return ok, ([] if ok else None)
    candidates = sorted(model.elements)
    for extra in iter_product(candidates, repeat=missing):
        if model.generates(images + list(extra)):
            return True, list(extra)
    return False, None
