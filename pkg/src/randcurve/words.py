"""Free-group words over a symmetric alphabet.

Letters are nonzero signed integers: generator ``i`` is ``+i``, its inverse
is ``-i``.  The string form uses ``a..z`` for generators and ``A..Z`` for
inverses, so ranks up to 26 are supported.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

MAX_RANK = 26


class WordError(ValueError):
    """Raised for malformed words or domain violations."""


def inverse_letter(x: int) -> int:
    return -x


def alphabet_letters(rank: int) -> tuple[int, ...]:
    """All 2*rank letters, generators first."""
    return tuple(range(1, rank + 1)) + tuple(-i for i in range(1, rank + 1))


def parse_letters(s: str) -> tuple[int, ...]:
    out = []
    for ch in s:
        o = ord(ch)
        if 97 <= o <= 122:
            out.append(o - 96)
        elif 65 <= o <= 90:
            out.append(-(o - 64))
        else:
            raise WordError(f"invalid word character {ch!r}")
    return tuple(out)


def format_letters(letters) -> str:
    out = []
    for x in letters:
        if x > 0:
            out.append(chr(96 + x))
        else:
            out.append(chr(64 - x))
    return "".join(out)


def _validate_letters(letters, rank: int) -> None:
    if not 1 <= rank <= MAX_RANK:
        raise WordError(f"rank must be in 1..{MAX_RANK}, got {rank}")
    for x in letters:
        if not isinstance(x, int) or x == 0 or abs(x) > rank:
            raise WordError(f"letter {x!r} outside alphabet of rank {rank}")


def reduce_letters(letters) -> tuple[int, ...]:
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def least_rotation(seq: tuple) -> int:
    """Index of the lexicographically least rotation (Booth's algorithm)."""
    n = len(seq)
    if n <= 1:
        return 0
    s = seq + seq
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


@dataclass(frozen=True)
class Alphabet:
    """Symmetric generating alphabet of the free group of given rank."""

    rank: int

    def __post_init__(self):
        if not 1 <= self.rank <= MAX_RANK:
            raise WordError(f"rank must be in 1..{MAX_RANK}")

    @property
    def letters(self) -> tuple[int, ...]:
        return alphabet_letters(self.rank)

    def inverse(self, x: int) -> int:
        _validate_letters((x,), self.rank)
        return -x

    def parse(self, s: str) -> tuple[int, ...]:
        letters = parse_letters(s)
        _validate_letters(letters, self.rank)
        return letters


@dataclass(frozen=True)
class Word:
    """A finite letter sequence, not necessarily reduced."""

    letters: tuple[int, ...]
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        _validate_letters(self.letters, self.rank)

    @classmethod
    def from_string(cls, s: str, rank: int | None = None) -> "Word":
        letters = parse_letters(s)
        if rank is None:
            rank = max((abs(x) for x in letters), default=1)
        return cls(letters, rank)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_letters(self.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)), self.rank)

    def is_reduced(self) -> bool:
        return all(self.letters[i] != -self.letters[i + 1] for i in range(len(self.letters) - 1))

    def concat(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters, max(self.rank, other.rank))


@dataclass(frozen=True)
class CyclicWord:
    """A conjugacy class: cyclically reduced letters in least-rotation form."""

    letters: tuple[int, ...]
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        _validate_letters(self.letters, self.rank)
        n = len(self.letters)
        for i in range(n):
            if self.letters[i] == -self.letters[(i + 1) % n]:
                raise WordError("cyclic word is not cyclically reduced")
        if n and least_rotation(self.letters) != 0:
            raise WordError("cyclic word is not in canonical (least rotation) form")

    @classmethod
    def from_string(cls, s: str, rank: int | None = None) -> "CyclicWord":
        return cyclic_reduce(Word.from_string(s, rank))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_letters(self.letters)

    def inverse(self) -> "CyclicWord":
        inv = tuple(-x for x in reversed(self.letters))
        if not inv:
            return self
        k = least_rotation(inv)
        return CyclicWord(inv[k:] + inv[:k], self.rank)

    def rotations(self) -> list[tuple[int, ...]]:
        w = self.letters
        return [w[i:] + w[:i] for i in range(len(w))]

    def primitive_root(self) -> tuple["CyclicWord", int]:
        """Shortest ``u`` with ``self = u^k`` (as cyclic words), plus ``k``."""
        w = self.letters
        n = len(w)
        if n == 0:
            raise WordError("trivial cyclic word has no primitive root")
        for p in range(1, n + 1):
            if n % p == 0 and w == w[:p] * (n // p):
                root = w[:p]
                k = least_rotation(root)
                return CyclicWord(root[k:] + root[:k], self.rank), n // p
        raise AssertionError("unreachable")

    def is_primitive_power(self) -> bool:
        return self.primitive_root()[1] == 1


def word(s: str, rank: int | None = None) -> Word:
    return Word.from_string(s, rank)


def cyclic(s: str, rank: int | None = None) -> CyclicWord:
    return CyclicWord.from_string(s, rank)


def reduce(w: Word) -> Word:
    """The unique freely reduced word equal to ``w``."""
    return Word(reduce_letters(w.letters), w.rank)


def cyclic_reduce(w: Word | CyclicWord) -> CyclicWord:
    """Cyclically reduced canonical form of the conjugacy class of ``w``."""
    if isinstance(w, CyclicWord):
        return w
    letters = list(reduce_letters(w.letters))
    i, j = 0, len(letters)
    while j - i >= 2 and letters[i] == -letters[j - 1]:
        i += 1
        j -= 1
    core = tuple(letters[i:j])
    if not core:
        return CyclicWord((), w.rank)
    k = least_rotation(core)
    return CyclicWord(core[k:] + core[:k], w.rank)


def are_conjugate(u: Word | CyclicWord, v: Word | CyclicWord) -> bool:
    return cyclic_reduce(u).letters == cyclic_reduce(v).letters


@dataclass(frozen=True)
class BallSpec:
    """Ball of given radius in the Cayley graph of the free group."""

    rank: int
    radius: int

    def __post_init__(self):
        if not 1 <= self.rank <= MAX_RANK:
            raise WordError("rank out of range")
        if self.radius < 0:
            raise WordError("radius must be nonnegative")


def sphere_size(spec: BallSpec) -> int:
    """Number of elements at distance exactly ``spec.radius``."""
    r, k = spec.rank, spec.radius
    if k == 0:
        return 1
    return 2 * r * (2 * r - 1) ** (k - 1)


def ball_size(spec: BallSpec) -> int:
    """Number of elements at distance at most ``spec.radius``."""
    r, n = spec.rank, spec.radius
    total = 1
    for k in range(1, n + 1):
        total += 2 * r * (2 * r - 1) ** (k - 1)
    return total


@dataclass(frozen=True)
class LetterCounts:
    counts: dict
    exponent_sums: dict


def letter_counts(c: CyclicWord) -> LetterCounts:
    """Per-letter occurrence counts and per-generator exponent sums."""
    counts = Counter(c.letters)
    sums = {i: counts.get(i, 0) - counts.get(-i, 0) for i in range(1, c.rank + 1)}
    return LetterCounts(dict(counts), sums)


def satisfies_no_cancellation(w: Word, c: CyclicWord) -> bool:
    """No suffix of ``w`` is an inverted prefix of ``c``, nor a suffix of ``c``.

    When this holds, ``w c w^-1`` is reduced as written, of length 2|w| + |c|.
    """
    if not w.is_reduced():
        raise WordError("w must be reduced")
    wl, cl = w.letters, c.letters
    for k in range(1, min(len(wl), len(cl)) + 1):
        tail = wl[-k:]
        if tail == tuple(-x for x in reversed(cl[:k])):
            return False
        if tail == cl[-k:]:
            return False
    return True


def conjugates_in_ball(c: CyclicWord, n: int) -> int:
    """Exact size of [c] intersected with the ball of radius ``n``.

    Breadth-first enumeration of group elements: the frontier starts at the
    cyclically reduced representatives (all rotations) and expands by
    single-generator conjugation, pruning anything longer than ``n``.  Every
    conjugate of length <= n is reached through intermediates of
    non-decreasing length, so the pruning is lossless.
    """
    if len(c) == 0:
        raise WordError("conjugates_in_ball needs a nontrivial class")
    if n < len(c):
        return 0
    letters = alphabet_letters(c.rank)
    seen = {rot for rot in (tuple(r) for r in c.rotations())}
    frontier = list(seen)
    while frontier:
        nxt = []
        for el in frontier:
            for g in letters:
                cand = reduce_letters((g,) + el + (-g,))
                if len(cand) <= n and cand not in seen:
                    seen.add(cand)
                    nxt.append(cand)
        frontier = nxt
    return len(seen)
