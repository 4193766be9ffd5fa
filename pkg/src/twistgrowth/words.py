"""Exact arithmetic on reduced words in a finitely generated free group.

A :class:`Basis` fixes an ordered list of generator names; a :class:`Word` is
an immutable freely reduced sequence of signed letters over one basis, stored
as an ``int32`` numpy array (generator ``i`` is ``i+1``, inverse ``-(i+1)``).
All operations are pure and safe to share between threads.

Word text syntax
----------------
Generators are names matching ``[A-Za-z][A-Za-z0-9_]*``.  Letters are
juxtaposed with whitespace or ``*``.  ``^k`` (any integer ``k``) applies to a
single generator or a parenthesized subword; the inverse of ``a`` is written
``a^-1``.  ``1`` denotes the identity.  Example: ``a b^-1 (a b)^3``.
Unknown generators are rejected.
"""

from __future__ import annotations

import re
from typing import Iterable, Optional

import numpy as np

from . import _kernels as _k
from .errors import BasisMismatch, InvalidInput, WordSyntaxError

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_EMPTY = np.empty(0, dtype=np.int32)


class Basis:
    """Ordered basis of a free group; rank 0 denotes the trivial group."""

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols: Iterable[str]):
        symbols = tuple(symbols)
        seen = set()
        for s in symbols:
            if not s or not _NAME_RE.fullmatch(s):
                raise InvalidInput(f"bad generator name {s!r}")
            if s in seen:
                raise InvalidInput(f"duplicate generator name {s!r}")
            seen.add(s)
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(symbols)})

    def __setattr__(self, name, value):
        raise AttributeError("Basis is immutable")

    @property
    def rank(self) -> int:
        return len(self.symbols)

    def __eq__(self, other):
        return isinstance(other, Basis) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return f"Basis({', '.join(self.symbols)})"

    def __contains__(self, name):
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise WordSyntaxError(f"unknown generator {name!r}") from None

    def identity(self) -> "Word":
        return Word(self, _EMPTY, _checked=True)

    def gen(self, name: str, sign: int = 1) -> "Word":
        v = self.index(name) + 1
        return Word(self, np.array([v if sign > 0 else -v], dtype=np.int32), _checked=True)

    def gens(self) -> tuple["Word", ...]:
        return tuple(self.gen(s) for s in self.symbols)

    def word(self, text: str) -> "Word":
        return parse_word(self, text)

    def from_values(self, values) -> "Word":
        """Word from raw signed letter values (reduces them first)."""
        arr = np.asarray(values, dtype=np.int32)
        if arr.size and np.any((arr == 0) | (np.abs(arr) > self.rank)):
            raise InvalidInput("letter value out of basis range")
        return Word(self, _k.free_reduce(arr), _checked=True)


class Word:
    """Freely reduced word; value-semantic and hashable."""

    __slots__ = ("basis", "_arr")

    def __init__(self, basis: Basis, letters, _checked: bool = False):
        if _checked:
            arr = letters
        else:
            arr = np.asarray(letters, dtype=np.int32)
            if arr.size and np.any((arr == 0) | (np.abs(arr) > basis.rank)):
                raise InvalidInput("letter value out of basis range")
            arr = _k.free_reduce(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "_arr", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @property
    def array(self) -> np.ndarray:
        """Read-only letter array (do not mutate)."""
        return self._arr

    def letters(self) -> list[tuple[int, int]]:
        """Letters as (basis index, sign) pairs."""
        return [(abs(int(v)) - 1, 1 if v > 0 else -1) for v in self._arr]

    def __len__(self):
        return int(self._arr.shape[0])

    @property
    def is_identity(self) -> bool:
        return self._arr.shape[0] == 0

    def __eq__(self, other):
        return (
            isinstance(other, Word)
            and self.basis == other.basis
            and self._arr.shape == other._arr.shape
            and bool(np.array_equal(self._arr, other._arr))
        )

    def __hash__(self):
        return hash((self.basis, self._arr.tobytes()))

    def __mul__(self, other: "Word") -> "Word":
        if self.basis != other.basis:
            raise BasisMismatch("cannot multiply words over different bases")
        return Word(self.basis, _k.concat_cancel(self._arr, other._arr), _checked=True)

    def inverse(self) -> "Word":
        return Word(self.basis, (-self._arr[::-1]).astype(np.int32), _checked=True)

    def __invert__(self):
        return self.inverse()

    def __pow__(self, n: int) -> "Word":
        return power(self, n)

    def conjugate_by(self, g: "Word") -> "Word":
        """g * self * g^-1."""
        return g * self * g.inverse()

    def starts_with(self, prefix: "Word") -> bool:
        n = len(prefix)
        return n <= len(self) and bool(np.array_equal(self._arr[:n], prefix._arr))

    def __repr__(self):
        return format_word(self)

    def __str__(self):
        return format_word(self)


# ---------------------------------------------------------------------------
# parsing / formatting

_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<one>1)"
                       r"|(?P<pow>\^-?\d+)|(?P<open>\()|(?P<close>\))|(?P<star>\*))")


def _tokenize(text: str):
    text = text.strip()
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise WordSyntaxError(f"bad word syntax at {text[pos:pos+12]!r}")
        pos = m.end()
        kind = m.lastgroup
        if kind == "star":
            continue
        if kind == "pow":
            tokens.append(("pow", int(m.group("pow")[1:])))
        else:
            tokens.append((kind, m.group(0).strip()))
    return tokens


def parse_word(basis: Basis, text: str) -> Word:
    """Parse the word text syntax over ``basis``; rejects unknown generators."""
    tokens = _tokenize(text)
    pos = 0

    def parse_seq(depth):
        nonlocal pos
        acc = basis.identity()
        while pos < len(tokens):
            kind, val = tokens[pos]
            if kind == "close":
                if depth == 0:
                    raise WordSyntaxError("unbalanced ')'")
                return acc
            if kind == "name":
                pos += 1
                atom = basis.gen(val)
            elif kind == "one":
                pos += 1
                atom = basis.identity()
            elif kind == "open":
                pos += 1
                atom = parse_seq(depth + 1)
                if pos >= len(tokens) or tokens[pos][0] != "close":
                    raise WordSyntaxError("unbalanced '('")
                pos += 1
            else:
                raise WordSyntaxError("exponent without a base")
            if pos < len(tokens) and tokens[pos][0] == "pow":
                atom = power(atom, tokens[pos][1])
                pos += 1
            acc = acc * atom
        return acc

    result = parse_seq(0)
    if pos != len(tokens):
        raise WordSyntaxError("unbalanced ')'")
    return result


def format_word(w: Word) -> str:
    """Inverse of :func:`parse_word`; identity prints as ``1``."""
    if w.is_identity:
        return "1"
    parts = []
    arr = w.array
    i = 0
    n = len(arr)
    while i < n:
        v = int(arr[i])
        j = i
        while j < n and int(arr[j]) == v:
            j += 1
        name = w.basis.symbols[abs(v) - 1]
        k = (j - i) if v > 0 else -(j - i)
        parts.append(name if k == 1 else f"{name}^{k}")
        i = j
    return " ".join(parts)


# ---------------------------------------------------------------------------
# core operations


def reduce_letters(basis: Basis, letters) -> Word:
    """Freely reduce a raw letter sequence of (index, sign) pairs or values."""
    if len(letters) and isinstance(letters[0], tuple):
        values = [s * (i + 1) for (i, s) in letters]
    else:
        values = letters
    return basis.from_values(values)


def multiply(u: Word, v: Word) -> Word:
    return u * v


def invert(u: Word) -> Word:
    return u.inverse()


def power(u: Word, n: int) -> Word:
    """u**n via the cyclically reduced core (linear in output length)."""
    if n == 0 or u.is_identity:
        return u.basis.identity()
    if n < 0:
        return power(u.inverse(), -n)
    c, core = cyclic_reduce(u)
    # u = c^-1 * core * c with no cancellation, so u^n = c^-1 core^n c.
    tiled = np.tile(core.array, n)
    cinv = c.inverse()
    out = np.concatenate([cinv.array, tiled, c.array]).astype(np.int32)
    return Word(u.basis, out, _checked=True)


def cyclic_reduce(u: Word) -> tuple[Word, Word]:
    """Return (c, r) with r cyclically reduced and u = c^-1 * r * c."""
    arr = u.array
    i, j = 0, len(arr)
    while j - i >= 2 and arr[i] == -arr[j - 1]:
        i += 1
        j -= 1
    prefix = Word(u.basis, arr[:i].copy(), _checked=True)
    core = Word(u.basis, arr[i:j].copy(), _checked=True)
    return prefix.inverse(), core


def cyclic_length(u: Word) -> int:
    return len(cyclic_reduce(u)[1])


def cancellation(u: Word, v: Word) -> int:
    """Length of the maximal common prefix of u^-1 and v.

    Equals (|u| + |v| - |uv|) / 2; letters are atomic so no merge case
    arises.
    """
    if u.basis != v.basis:
        raise BasisMismatch("cancellation needs a common basis")
    return int(_k.cancel_len(u.array, v.array))


def _letter_key(arr: np.ndarray) -> np.ndarray:
    # order: (index, sign) with +1 < -1, i.e. a < a^-1 < b < b^-1 < ...
    return ((np.abs(arr) - 1) * 2 + (arr < 0)).astype(np.int32)


class CyclicWord:
    """Cyclically reduced word stored in its least rotation.

    Two words are conjugate iff their CyclicWords are equal.
    """

    __slots__ = ("basis", "_arr", "_rotation")

    def __init__(self, word: Word):
        _, core = cyclic_reduce(word)
        arr = core.array
        rot = int(_k.min_rotation(_letter_key(arr))) if len(arr) else 0
        canon = np.concatenate([arr[rot:], arr[:rot]]).astype(np.int32)
        canon.setflags(write=False)
        object.__setattr__(self, "basis", word.basis)
        object.__setattr__(self, "_arr", canon)
        object.__setattr__(self, "_rotation", rot)

    def __setattr__(self, name, value):
        raise AttributeError("CyclicWord is immutable")

    @property
    def array(self) -> np.ndarray:
        return self._arr

    def __len__(self):
        return int(self._arr.shape[0])

    def __eq__(self, other):
        return (
            isinstance(other, CyclicWord)
            and self.basis == other.basis
            and bool(np.array_equal(self._arr, other._arr))
        )

    def __hash__(self):
        return hash((self.basis, self._arr.tobytes()))

    def as_word(self) -> Word:
        return Word(self.basis, self._arr.copy(), _checked=True)

    def __repr__(self):
        return f"[{format_word(self.as_word())}]"


def is_conjugate(u: Word, v: Word) -> Optional[Word]:
    """A conjugator g with g u g^-1 = v, or None.

    Found by rotating the cyclically reduced cores into line; the result is
    verified by substitution before being returned.
    """
    if u.basis != v.basis:
        raise BasisMismatch("conjugacy needs a common basis")
    cu, ru = cyclic_reduce(u)
    cv, rv = cyclic_reduce(v)
    if len(ru) != len(rv):
        return None
    if len(ru) == 0:
        return u.basis.identity()
    au, av = ru.array, rv.array
    doubled = np.concatenate([au, au])
    n = len(au)
    for s in range(n):
        if np.array_equal(doubled[s : s + n], av):
            # rot_s(ru) = p^-1 ru p with p = ru[:s]
            p = Word(u.basis, au[:s].copy(), _checked=True)
            g = cv.inverse() * p.inverse() * cu
            assert (g * u * g.inverse()) == v
            return g
    return None


def primitive_root(u: Word) -> tuple[Word, int]:
    """(r, k) with u = r^k, k >= 1 maximal; r is not a proper power."""
    if u.is_identity:
        raise InvalidInput("identity has no primitive root")
    c, core = cyclic_reduce(u)
    arr = core.array
    n = len(arr)
    root_core = core
    k = 1
    for d in range(1, n // 2 + 1):
        if n % d:
            continue
        if np.array_equal(np.tile(arr[:d], n // d), arr):
            root_core = Word(u.basis, arr[:d].copy(), _checked=True)
            k = n // d
            break
    return c.inverse() * root_core * c, k


def common_root(u: Word, v: Word) -> Optional[Word]:
    """Shared primitive root when u and v commute, else None.

    In a free group u, v commute iff both are powers of one primitive root
    (possibly with opposite signs); the root of u is returned.
    """
    if u.is_identity or v.is_identity:
        raise InvalidInput("common_root requires nontrivial words")
    if u * v != v * u:
        return None
    return primitive_root(u)[0]


def centralizer_generator(u: Word) -> Word:
    """Generator of the centralizer of <u>: the primitive root of u."""
    if u.is_identity:
        raise InvalidInput("centralizer_generator requires a nontrivial word")
    return primitive_root(u)[0]


def is_power_of(w: Word, u: Word) -> Optional[int]:
    """Exact k with w = u^k (k may be 0 or negative), or None."""
    if u.is_identity:
        raise InvalidInput("is_power_of requires a nontrivial base")
    if w.is_identity:
        return 0
    if w.basis != u.basis:
        raise BasisMismatch("is_power_of needs a common basis")
    c, core = cyclic_reduce(u)
    # w = u^k  <=>  c w c^-1 = core^k, and core^k is a literal tile.
    t = (c * w * c.inverse()).array
    n = len(core)
    if n == 0 or len(t) % n:
        return None
    k = len(t) // n
    if np.array_equal(np.tile(core.array, k), t):
        return k
    if np.array_equal(np.tile(core.inverse().array, k), t):
        return -k
    return None
