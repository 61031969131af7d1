"""Words in finitely generated free groups.

Generators are written ``a1 .. ar`` (1-indexed).  A word is stored in
run-length normal form, a tuple of (generator index, nonzero exponent)
syllables in which adjacent syllables never share a generator; the empty
tuple is the identity.  All values are immutable and every operation is
pure, so everything here is safe to share across threads.

Grammar accepted by :func:`parse_word` (whitespace or ``*`` separates
terms)::

    word := term { ("*" | WS) term }*
    term := gen [ "^" int ] | "[" word "," word "]" | "(" word ")" | "1"
    gen  := "a" posint

``[u,v]`` expands to ``u^-1 v^-1 u v`` before free reduction; the literal
``1`` (and an empty input) denotes the identity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass


class WordSyntaxError(ValueError):
    """Word text rejected by the grammar; carries the 0-based offset."""

    def __init__(self, message, position):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


def reduce_syllables(syllables):
    """Merge and cancel a raw syllable stream into free normal form."""
    stack = []
    for g, e in syllables:
        if e == 0:
            continue
        if stack and stack[-1][0] == g:
            merged = stack[-1][1] + e
            if merged == 0:
                stack.pop()
            else:
                stack[-1] = (g, merged)
        else:
            stack.append((g, e))
    return tuple(stack)


class Word:
    """A freely reduced word over a1..ar.

    `syllables` must already be in normal form; use :func:`make_word` to
    normalize arbitrary syllable streams.
    """

    __slots__ = ("rank", "syllables", "_hash")

    def __init__(self, rank, syllables=()):
        if rank < 1:
            raise ValueError("rank must be at least 1")
        syllables = tuple(syllables)
        prev = 0
        for g, e in syllables:
            if not 1 <= g <= rank:
                raise ValueError("generator a%d out of range 1..%d" % (g, rank))
            if e == 0:
                raise ValueError("zero exponent is not normal form")
            if g == prev:
                raise ValueError("unmerged adjacent syllables for a%d" % g)
            prev = g
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "syllables", syllables)
        object.__setattr__(self, "_hash", hash((rank, syllables)))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __eq__(self, other):
        return (isinstance(other, Word) and self.rank == other.rank
                and self.syllables == other.syllables)

    def __hash__(self):
        return self._hash

    def __len__(self):
        return sum(abs(e) for _, e in self.syllables)

    def __mul__(self, other):
        return free_multiply(self, other)

    def __repr__(self):
        return "Word(%d, %r)" % (self.rank, self.syllables)

    def __str__(self):
        return format_word(self)

    @property
    def is_identity(self):
        return not self.syllables

    def inverse(self):
        return invert_word(self)


def identity_word(rank):
    return Word(rank)


def generator_word(rank, index, exponent=1):
    if exponent == 0:
        return Word(rank)
    return Word(rank, ((index, exponent),))


def make_word(rank, syllables):
    """Word from an arbitrary (possibly unreduced) syllable stream."""
    return Word(rank, reduce_syllables(syllables))


def free_multiply(u, v):
    """Freely reduced product; the ranks must agree."""
    if u.rank != v.rank:
        raise ValueError("rank mismatch: %d vs %d" % (u.rank, v.rank))
    if not u.syllables:
        return v
    if not v.syllables:
        return u
    return Word(u.rank, reduce_syllables(u.syllables + v.syllables))


def invert_word(u):
    return Word(u.rank, tuple((g, -e) for g, e in reversed(u.syllables)))


def word_power(u, n):
    if n == 0:
        return Word(u.rank)
    base = u if n > 0 else invert_word(u)
    stream = []
    for _ in range(abs(n)):
        stream.extend(base.syllables)
    return make_word(u.rank, stream)


def support(u):
    """Indices of the generators that occur in the reduced form."""
    return frozenset(g for g, _ in u.syllables)


def change_rank(u, rank):
    """The same word viewed at a different ambient rank.

    Shrinking requires the word's support to fit inside the new rank.
    """
    if rank < u.rank and any(g > rank for g, _ in u.syllables):
        raise ValueError("word %s has support outside rank %d" % (u, rank))
    return Word(rank, u.syllables)


def word_sort_key(u):
    """Total order on words: length first, then syllables lexicographically."""
    return (len(u), u.syllables)


def format_word(u):
    if not u.syllables:
        return "1"
    parts = []
    for g, e in u.syllables:
        parts.append("a%d" % g if e == 1 else "a%d^%d" % (g, e))
    return " ".join(parts)


class _Parser:
    TERM_START = ("a", "[", "(", "1")

    def __init__(self, text, rank):
        self.text = text
        self.rank = rank
        self.pos = 0

    def error(self, message):
        raise WordSyntaxError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error("expected %r" % ch)
        self.pos += 1

    def integer(self, allow_sign=True):
        start = self.pos
        if allow_sign and self.peek() == "-":
            self.pos += 1
        if not self.peek().isdigit():
            self.error("expected an integer")
        while self.peek().isdigit():
            self.pos += 1
        return int(self.text[start:self.pos])

    def word(self):
        result = self.term()
        while True:
            before = self.pos
            self.skip_ws()
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                self.skip_ws()
                if self.peek() not in self.TERM_START:
                    self.error("expected a term after '*'")
                result = free_multiply(result, self.term())
            elif ch in self.TERM_START:
                # terms must be separated by whitespace or '*'
                if self.pos == before:
                    self.error("expected '*' or whitespace between terms")
                result = free_multiply(result, self.term())
            else:
                return result

    def term(self):
        ch = self.peek()
        if ch == "a":
            self.pos += 1
            index_pos = self.pos
            index = self.integer(allow_sign=False)
            if not 1 <= index <= self.rank:
                self.pos = index_pos
                self.error("generator a%d out of range 1..%d" % (index, self.rank))
            exponent = 1
            if self.peek() == "^":
                self.pos += 1
                exponent = self.integer()
            return generator_word(self.rank, index, exponent)
        if ch == "1":
            self.pos += 1
            return identity_word(self.rank)
        if ch == "[":
            self.pos += 1
            left = self.word()
            self.skip_ws()
            self.expect(",")
            self.skip_ws()
            right = self.word()
            self.skip_ws()
            self.expect("]")
            return commutator(left, right)
        if ch == "(":
            self.pos += 1
            inner = self.word()
            self.skip_ws()
            self.expect(")")
            return inner
        self.error("expected a generator, '[', '(' or '1'")


def parse_word(text, rank):
    """Parse word text at the given rank; raises :class:`WordSyntaxError`."""
    if rank < 1:
        raise ValueError("rank must be at least 1")
    parser = _Parser(text, rank)
    parser.skip_ws()
    if parser.pos == len(text):
        return identity_word(rank)
    word = parser.word()
    parser.skip_ws()
    if parser.pos != len(text):
        parser.error("unexpected trailing input")
    return word


def commutator(u, v):
    """[u, v] = u^-1 v^-1 u v."""
    return free_multiply(free_multiply(invert_word(u), invert_word(v)),
                         free_multiply(u, v))


def enumerate_reduced_words(rank, max_len, include_identity=True):
    """All reduced words of length at most max_len, shortest first, letters
    in (a1, a1^-1, a2, ...) order within each length."""
    out = [identity_word(rank)] if include_identity else []
    frontier = [identity_word(rank)]
    for _ in range(max_len):
        new_frontier = []
        for w in frontier:
            last = w.syllables[-1] if w.syllables else None
            for g in range(1, rank + 1):
                for e in (1, -1):
                    if last is not None and last[0] == g and (last[1] > 0) != (e > 0):
                        continue
                    new_frontier.append(free_multiply(w, generator_word(rank, g, e)))
        out.extend(new_frontier)
        frontier = new_frontier
    return out


@dataclass(frozen=True)
class EndomorphismSpec:
    """An endomorphism of the rank-r free group, given by generator images."""

    rank: int
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.rank:
            raise ValueError("need %d images, got %d" % (self.rank, len(self.images)))
        for image in self.images:
            if image.rank != self.rank:
                raise ValueError("image rank %d does not match %d" % (image.rank, self.rank))

    def __call__(self, u):
        return apply_endomorphism(self, u)


def identity_endomorphism(rank):
    return EndomorphismSpec(rank, tuple(generator_word(rank, i) for i in range(1, rank + 1)))


def apply_endomorphism(phi, u):
    """Image of u under phi; homomorphic by construction."""
    if phi.rank != u.rank:
        raise ValueError("rank mismatch: endomorphism %d, word %d" % (phi.rank, u.rank))
    stream = []
    for g, e in u.syllables:
        image = phi.images[g - 1].syllables
        if e < 0:
            image = tuple((h, -f) for h, f in reversed(image))
        for _ in range(abs(e)):
            stream.extend(image)
    return make_word(phi.rank, stream)


def compose(outer, inner):
    """outer after inner: (outer . inner)(a_i) = outer(inner(a_i))."""
    if outer.rank != inner.rank:
        raise ValueError("rank mismatch in composition")
    return EndomorphismSpec(outer.rank,
                            tuple(apply_endomorphism(outer, image) for image in inner.images))


@dataclass(frozen=True)
class Automorphism:
    """An automorphism carried together with its exact inverse."""

    forward: EndomorphismSpec
    inverse: EndomorphismSpec

    @property
    def rank(self):
        return self.forward.rank

    def __call__(self, u):
        return apply_endomorphism(self.forward, u)

    def undo(self, u):
        return apply_endomorphism(self.inverse, u)


def _elementary_move(rng, rank):
    """A random elementary Nielsen move together with its exact inverse."""
    images = list(identity_endomorphism(rank).images)
    inverse_images = list(images)
    roll = rng.random()
    if rank == 1 or roll < 0.2:
        i = rng.randrange(rank)
        images[i] = generator_word(rank, i + 1, -1)
        inverse_images[i] = images[i]
    elif roll < 0.35:
        i, j = rng.sample(range(rank), 2)
        images[i], images[j] = images[j], images[i]
        inverse_images[i], inverse_images[j] = inverse_images[j], inverse_images[i]
    else:
        i, j = rng.sample(range(rank), 2)
        e = rng.choice((1, -1))
        left = rng.random() < 0.5
        gi = generator_word(rank, i + 1)
        gj = generator_word(rank, j + 1, e)
        gj_inv = generator_word(rank, j + 1, -e)
        if left:
            images[i] = free_multiply(gj, gi)
            inverse_images[i] = free_multiply(gj_inv, gi)
        else:
            images[i] = free_multiply(gi, gj)
            inverse_images[i] = free_multiply(gi, gj_inv)
    return (EndomorphismSpec(rank, tuple(images)),
            EndomorphismSpec(rank, tuple(inverse_images)))


def random_automorphism(rank, steps, seed):
    """Compose `steps` random elementary moves, tracking the exact inverse.

    Randomness comes from Python's Mersenne Twister (MT19937) seeded with
    `seed`, which is reproducible across platforms.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    rng = random.Random(seed)
    forward = identity_endomorphism(rank)
    inverse = identity_endomorphism(rank)
    for _ in range(steps):
        move, move_inverse = _elementary_move(rng, rank)
        forward = compose(move, forward)
        inverse = compose(inverse, move_inverse)
    return Automorphism(forward, inverse)


def extend_automorphism(auto, rank):
    """Extend a rank-l automorphism to a larger rank by fixing a_{l+1}..a_r."""
    small = auto.rank
    if rank < small:
        raise ValueError("cannot extend to a smaller rank")

    def extend(spec):
        images = [change_rank(w, rank) for w in spec.images]
        images += [generator_word(rank, i) for i in range(small + 1, rank + 1)]
        return EndomorphismSpec(rank, tuple(images))

    return Automorphism(extend(auto.forward), extend(auto.inverse))


_VARIETY_KINDS = ("Free", "Abelian", "Nilpotent", "AmAn", "Solvable")


@dataclass(frozen=True)
class VarietySpec:
    """Which relatively free quotient a primitivity question refers to."""

    kind: str
    n: int = 0
    c: int = 0
    m: int = 0
    t: int = 0

    def __post_init__(self):
        if self.kind not in _VARIETY_KINDS:
            raise ValueError("unknown variety kind %r" % self.kind)
        if min(self.n, self.c, self.m, self.t) < 0:
            raise ValueError("variety parameters must be nonnegative")
        if self.kind == "Nilpotent" and self.c < 1:
            raise ValueError("nilpotency class must be at least 1")
        if self.kind == "Solvable" and self.t < 1:
            raise ValueError("derived length must be at least 1")

    @classmethod
    def free(cls):
        return cls("Free")

    @classmethod
    def abelian(cls, n=0):
        return cls("Abelian", n=n)

    @classmethod
    def nilpotent(cls, c, n=0):
        return cls("Nilpotent", n=n, c=c)

    @classmethod
    def am_an(cls, m, n):
        return cls("AmAn", n=n, m=m)

    @classmethod
    def solvable(cls, t):
        return cls("Solvable", t=t)

    def to_json(self):
        out = {"type": self.kind}
        if self.kind == "Abelian":
            out["n"] = self.n
        elif self.kind == "Nilpotent":
            out["c"] = self.c
            out["n"] = self.n
        elif self.kind == "AmAn":
            out["m"] = self.m
            out["n"] = self.n
        elif self.kind == "Solvable":
            out["t"] = self.t
        return out

    @classmethod
    def from_json(cls, data):
        kind = data.get("type")
        if kind == "Free":
            return cls.free()
        if kind == "Abelian":
            return cls.abelian(int(data.get("n", 0)))
        if kind == "Nilpotent":
            return cls.nilpotent(int(data["c"]), int(data.get("n", 0)))
        if kind == "AmAn":
            return cls.am_an(int(data.get("m", 0)), int(data.get("n", 0)))
        if kind == "Solvable":
            return cls.solvable(int(data["t"]))
        raise ValueError("unknown variety kind %r" % kind)

    def describe(self):
        if self.kind == "Free":
            return "free"
        if self.kind == "Abelian":
            return "abelian exponent %d" % self.n
        if self.kind == "Nilpotent":
            return "nilpotent class %d exponent %d" % (self.c, self.n)
        if self.kind == "AmAn":
            return "A_%d A_%d" % (self.m, self.n)
        return "solvable length %d" % self.t


@dataclass(frozen=True)
class PrimitivityProblem:
    """A set of words, an ambient rank, a variety, and an optional
    restriction index l (every word then has to live inside a1..al)."""

    rank: int
    words: tuple
    variety: VarietySpec
    l: int | None = None

    def __post_init__(self):
        if self.rank < 2:
            raise ValueError("ambient rank must be at least 2")
        k = len(self.words)
        if not 1 <= k <= self.rank:
            raise ValueError("need between 1 and %d words, got %d" % (self.rank, k))
        if len(set(self.words)) != k:
            raise ValueError("words must be distinct")
        for w in self.words:
            if w.rank != self.rank:
                raise ValueError("word rank %d does not match problem rank %d"
                                 % (w.rank, self.rank))
        if self.l is not None:
            if not 1 <= self.l <= self.rank - 1:
                raise ValueError("l must lie in 1..rank-1")
            for w in self.words:
                if any(g > self.l for g in support(w)):
                    raise ValueError("word %s uses generators beyond a%d" % (w, self.l))
