"""Growth functions, iterated products, twistor decompositions, and the
cancellation machinery backing the quadratic lower bounds.

Degree estimation works on exact integer growth tables with iterated forward
differences: the estimated degree is the lowest order whose differences
plateau on the tail half of the table (variation within 5 percent of their
mean magnitude).  The coefficient bracket c_low <= values(k)/k^d <= c_high
over the tail is reported exactly as fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import _kernels as _k
from .errors import (
    BlockerNotFound,
    InvalidInput,
    PreconditionNotSatisfied,
    VerificationFailed,
)
from .gog import CYCLIC, PathWord, TreeIdentification
from .hconj import h_reduce
from .twist import DehnTwist, FreeAutomorphism, induced_automorphism
from .words import Word, cancellation, common_root, cyclic_length, cyclic_reduce, power, primitive_root

_PLATEAU_FRACTION = 0.05
_BRACKET_RATIO = 4
_MAX_DEGREE = 6


@dataclass(frozen=True)
class GrowthTable:
    """Exact lengths (or cyclic lengths) of iterates, k = 0, 1, ..., N."""

    subject: str
    values: tuple
    cyclic: bool = False

    def __post_init__(self):
        ks = [k for k, _ in self.values]
        if ks != list(range(len(ks))):
            raise InvalidInput("growth table indices must be 0, 1, 2, ...")
        if any(v < 0 for _, v in self.values):
            raise InvalidInput("growth table values must be nonnegative")

    def lengths(self) -> np.ndarray:
        return np.array([v for _, v in self.values], dtype=np.int64)

    def csv(self) -> str:
        return "\n".join(f"{k},{v}" for k, v in self.values)


def growth_table(phi: Callable[[Word], Word], g: Word, N: int, cyclic: bool = False,
                 subject: str = "") -> GrowthTable:
    """Table of |phi^k(g)| (or cyclic lengths) for k = 0..N."""
    if N < 1:
        raise InvalidInput("growth table needs N >= 1")
    values = []
    w = g
    for k in range(N + 1):
        values.append((k, cyclic_length(w) if cyclic else len(w)))
        if k < N:
            w = phi(w)
    return GrowthTable(subject=subject or str(g), values=tuple(values), cyclic=cyclic)


def estimate_degree(table: GrowthTable):
    """(degree, c_low, c_high, ok) for a growth table.

    The degree is the smallest d whose order-d forward differences are flat
    on the tail half (max - min at most 5 percent of the mean magnitude);
    c_low/c_high bracket values(k)/k^d over the tail and ok requires the
    bracket ratio to stay within 4.
    """
    vals = table.lengths()
    n = len(vals)
    if n < 16:
        raise InvalidInput("growth table too short to estimate a degree (need >= 16)")
    degree = None
    best = (None, float("inf"))
    for d in range(0, _MAX_DEGREE + 1):
        diffs = np.diff(vals, n=d) if d else vals
        tail = diffs[len(diffs) // 2 :]
        if len(tail) < 2:
            break
        spread = int(tail.max() - tail.min())
        scale = float(np.abs(tail).mean())
        if spread == 0 or spread <= _PLATEAU_FRACTION * scale:
            degree = d
            break
        ratio = spread / max(scale, 1.0)
        if ratio < best[1]:
            best = (d, ratio)
    plateau_found = degree is not None
    if not plateau_found:
        degree = best[0] if best[0] is not None else 0
    ks = range(n // 2, n)
    ratios = [
        Fraction(int(vals[k]), k**degree if degree else 1) for k in ks if k > 0 or degree == 0
    ]
    c_low = min(ratios)
    c_high = max(ratios)
    ok = plateau_found and (
        (c_high == 0 and c_low == 0) or (c_low > 0 and c_high <= _BRACKET_RATIO * c_low)
    )
    return degree, c_low, c_high, ok


# ---------------------------------------------------------------------------
# iterated products


def partial_iterated_product(phi: Callable[[Word], Word], w: Word, k1: int, k2: int) -> Word:
    """phi^k1(w) phi^(k1+1)(w) ... phi^k2(w), reduced."""
    if k1 > k2:
        raise InvalidInput("partial iterated product needs k1 <= k2")
    p = w
    for _ in range(k1):
        p = phi(p)
    buf = np.empty(max(16, 2 * len(p)), dtype=np.int32)
    blen = 0
    for j in range(k1, k2 + 1):
        need = blen + len(p)
        if need > len(buf):
            grown = np.empty(max(need, 2 * len(buf)), dtype=np.int32)
            grown[:blen] = buf[:blen]
            buf = grown
        blen = int(_k.append_cancel(buf, blen, p.array))
        if j < k2:
            p = phi(p)
    return Word(w.basis, buf[:blen].copy(), _checked=True)


def iterated_product(phi: Callable[[Word], Word], w: Word, k: int) -> Word:
    """w phi(w) phi^2(w) ... phi^(k-1)(w); the empty product for k = 0."""
    if k < 0:
        raise InvalidInput("iterated product needs k >= 0")
    if k == 0:
        return w.basis.identity()
    return partial_iterated_product(phi, w, 0, k - 1)


def iterated_product_table(phi, w: Word, N: int, cyclic: bool = False,
                           subject: str = "") -> GrowthTable:
    """Table of |w phi(w) ... phi^(k-1)(w)| for k = 0..N, built incrementally."""
    values = [(0, 0)]
    buf = np.empty(max(16, 4 * max(1, len(w))), dtype=np.int32)
    blen = 0
    p = w
    for k in range(1, N + 1):
        need = blen + len(p)
        if need > len(buf):
            grown = np.empty(max(need, 2 * len(buf)), dtype=np.int32)
            grown[:blen] = buf[:blen]
            buf = grown
        blen = int(_k.append_cancel(buf, blen, p.array))
        if cyclic:
            word = Word(w.basis, buf[:blen].copy(), _checked=True)
            values.append((k, cyclic_length(word)))
        else:
            values.append((k, blen))
        p = phi(p)
    return GrowthTable(subject=subject or f"iterated product of {w}", values=tuple(values), cyclic=cyclic)


# ---------------------------------------------------------------------------
# twistor words


def _positive_roots_match(x: Word, y: Word) -> bool:
    """Whether x^m = y^m' has a solution with m, m' >= 1 (equal primitive roots)."""
    if x.is_identity or y.is_identity:
        return False
    return primitive_root(x)[0] == primitive_root(y)[0]


class TWord:
    """Product shape w0 y1^(n1) w1 ... yq^(nq) wq over a finite twistor set.

    ``pieces`` are the q+1 intermediate words, ``bases`` the q twistor words
    (each a twistor-set element or an inverse); instantiating a
    multi-exponent substitutes the powers and reduces.
    """

    __slots__ = ("pieces", "bases", "twistor_set")

    def __init__(self, pieces: Sequence[Word], bases: Sequence[Word], twistor_set=()):
        if len(pieces) != len(bases) + 1:
            raise InvalidInput("need one more piece than twistor slots")
        if any(b.is_identity for b in bases):
            raise InvalidInput("twistor slots must be nontrivial")
        self.pieces = tuple(pieces)
        self.bases = tuple(bases)
        self.twistor_set = tuple(twistor_set)

    @property
    def q(self) -> int:
        return len(self.bases)

    def instantiate(self, exponents: Sequence[int]) -> Word:
        if len(exponents) != self.q:
            raise InvalidInput(f"need {self.q} exponents, got {len(exponents)}")
        out = self.pieces[0]
        for n, y, piece in zip(exponents, self.bases, self.pieces[1:]):
            out = out * power(y, n) * piece
        return out

    def is_t_reduced(self) -> bool:
        """No relation y_i^-m = w_i y_{i+1}^m' w_i^-1 with m, m' >= 1.

        Decided exactly through primitive roots; the vacuous zero-exponent
        identity is not counted.
        """
        for i in range(self.q - 1):
            conj = self.pieces[i + 1] * self.bases[i + 1] * self.pieces[i + 1].inverse()
            if _positive_roots_match(self.bases[i].inverse(), conj):
                return False
        return True

    def is_cyclically_t_reduced(self) -> bool:
        if self.q == 0:
            return True
        wrap = self.pieces[-1] * self.pieces[0]
        conj = wrap * self.bases[0] * wrap.inverse()
        if _positive_roots_match(self.bases[-1].inverse(), conj):
            return False
        return self.is_t_reduced()

    def length_upper_bound(self, k: int) -> int:
        """k(k-1)/2 * sum|y_i| + k * sum|w_i|, the coarse iterated-product bound."""
        return (k * (k - 1) // 2) * sum(len(y) for y in self.bases) + k * sum(
            len(w) for w in self.pieces
        )

    def __repr__(self):
        inner = " ".join(
            f"{w} [{y}]^n" for w, y in zip(self.pieces, self.bases)
        )
        return f"TWord({inner} {self.pieces[-1]})".replace("  ", " ")


def is_cyclically_t_reduced(tw: TWord) -> bool:
    return tw.is_cyclically_t_reduced()


def instantiate(tw: TWord, exponents: Sequence[int]) -> Word:
    return tw.instantiate(exponents)


def twistor_set(D: DehnTwist, ident: TreeIdentification) -> list[Word]:
    """The decoded twistor words f_e(z_e) for positive edges with z_e != 0."""
    out = []
    for e in D.gog.graph.edges:
        if e in D.gog.orientation and D.twistor(e) != 0:
            w = D.gog.edge_image_power(e, D.twistor(e))
            out.append(_decode_vertex_word(ident, D.gog.graph.terminal[e], w))
    return out


def _decode_vertex_word(ident: TreeIdentification, v, w: Word) -> Word:
    vb = ident.gog.basis_at(v)
    values = [s * (ident.basis.index(vb.symbols[i]) + 1) for i, s in w.letters()]
    return ident.basis.from_values(values)


def _tree_edge_block(D: DehnTwist, ident: TreeIdentification, e) -> tuple:
    """(side, base) of the block a traversal of edge e inserts.

    In the twistor normalization the stable letter of a positive edge picks
    up u_e^(z n) on the right; a negative one picks up u_ebar^(z n) on the
    left.  Both bases are twistor words up to inversion.
    """
    gog = D.gog
    z = D.twistor(e)
    if e in gog.orientation:
        base = _decode_vertex_word(ident, gog.graph.terminal[e], gog.edge_image_power(e, z))
        return "right", base
    eb = gog.graph.bar[e]
    base = _decode_vertex_word(ident, gog.graph.terminal[eb], gog.edge_image_power(eb, z))
    return "left", base


def t_decompose(D: DehnTwist, ident: TreeIdentification, w: Word) -> TWord:
    """Twistor decomposition of w: D^n(w) = w0 y1^n w1 ... yq^n wq for all n.

    Built letter by letter: a vertex generator is conjugated by the twistor
    blocks collected along its tree path, a stable generator carries its own
    twistor power.  Degenerate adjacent slots whose bases share a conjugacy
    root are merged away, so the result is T-reduced; the defining identity
    is verified against the induced automorphism for n <= 3 before
    returning.  Requires an efficient twist.
    """
    from .efficiency import is_efficient

    report = is_efficient(D)
    if not report.efficient:
        raise PreconditionNotSatisfied(f"twist is not efficient: {report.summary()}")
    gog = D.gog

    pieces = [ident.basis.identity()]
    bases = []

    def push_word(u: Word):
        pieces[-1] = pieces[-1] * u

    def push_block(base: Word):
        if base.is_identity:
            return
        if pieces[-1].is_identity and bases and bases[-1] == base.inverse():
            bases.pop()
            pieces.pop()
        else:
            bases.append(base)
            pieces.append(ident.basis.identity())

    vertex_of = {}
    for v in gog.graph.vertices:
        for s in gog.basis_at(v).symbols:
            vertex_of[s] = v

    def tree_blocks(v):
        out = []
        for e in ident._tree_paths[v]:
            side, base = _tree_edge_block(D, ident, e)
            out.append(base)  # the stable letter vanishes, order is positional
        return out

    for idx, sign in w.letters():
        sym = ident.basis.symbols[idx]
        if sym in vertex_of:
            v = vertex_of[sym]
            blocks = tree_blocks(v)
            for b in blocks:
                push_block(b)
            push_word(ident.basis.gen(sym, sign))
            for b in reversed(blocks):
                push_block(b.inverse())
        else:
            e = sym  # positive non-tree edge
            pre = tree_blocks(gog.graph.initial(e))
            post = tree_blocks(gog.graph.terminal[e])
            z_base = _decode_vertex_word(
                ident, gog.graph.terminal[e], gog.edge_image_power(e, D.twistor(e))
            )
            if sign > 0:
                # D^n(s) = Pre^n s y^n Post^-n
                for b in pre:
                    push_block(b)
                push_word(ident.basis.gen(e))
                push_block(z_base)
                for b in reversed(post):
                    push_block(b.inverse())
            else:
                # D^n(s^-1) = Post^n y^-n s^-1 Pre^-n
                for b in post:
                    push_block(b)
                push_block(z_base.inverse())
                push_word(ident.basis.gen(e, sign=-1))
                for b in reversed(pre):
                    push_block(b.inverse())

    pieces, bases = _merge_degenerate_slots(pieces, bases)
    tw = TWord(pieces, bases, twistor_set=twistor_set(D, ident))
    phi = induced_automorphism(ident, D)
    expect = w
    for n in range(1, 4):
        expect = phi(expect)
        if tw.instantiate([n] * tw.q) != expect:
            raise VerificationFailed(
                "twistor decomposition does not reproduce the induced automorphism"
            )
    if not tw.is_t_reduced():  # pragma: no cover - merging rules this out
        raise VerificationFailed("twistor decomposition is not T-reduced")
    return tw


def _merge_degenerate_slots(pieces, bases):
    """Collapse adjacent slots with y_i^-m = w_i y_{i+1}^m' w_i^-1.

    Such a pair contributes r^((k'-k) n) w_i for the common root r, which is
    a single slot (or none); repeating until no pair matches leaves a
    T-reduced product representing the same function of n.
    """
    pieces = list(pieces)
    bases = list(bases)
    changed = True
    while changed:
        changed = False
        for i in range(len(bases) - 1):
            conj = pieces[i + 1] * bases[i + 1] * pieces[i + 1].inverse()
            if not _positive_roots_match(bases[i].inverse(), conj):
                continue
            r, k = primitive_root(bases[i].inverse())
            _, k2 = primitive_root(conj)
            # y_i^n w y_{i+1}^n = r^((k2-k) n) w
            merged_piece = pieces[i + 1] * pieces[i + 2]
            new_base = power(r, k2 - k)
            if new_base.is_identity:
                pieces[i : i + 3] = [pieces[i] * merged_piece]
                del bases[i : i + 2]
            else:
                pieces[i : i + 3] = [pieces[i], merged_piece]
                bases[i : i + 2] = [new_base]
            changed = True
            break
    return tuple(pieces), tuple(bases)


# ---------------------------------------------------------------------------
# quadratic growth of iterated products


def verify_quadratic_iterated(D: DehnTwist, ident: TreeIdentification, w: Word, N: int) -> bool:
    """Check that |D^(k)(w)| and the cyclic variant both grow with degree 2.

    Requires w to be D-reduced but not D-zero (its realization is already
    H-reduced with positive path length); violations raise.
    """
    W = ident.encode(w)
    trace = h_reduce(D.aut(), W)
    if trace.h_length != W.path_length:
        raise PreconditionNotSatisfied("word is not D-reduced")
    if trace.h_length == 0:
        raise PreconditionNotSatisfied("word is D-zero; iterated products stay bounded")
    phi = induced_automorphism(ident, D)
    plain = iterated_product_table(phi, w, N, cyclic=False, subject=f"|D^(k)({w})|")
    cyc = iterated_product_table(phi, w, N, cyclic=True, subject=f"cyclic D^(k)({w})")
    d1, _, _, ok1 = estimate_degree(plain)
    d2, _, _, ok2 = estimate_degree(cyc)
    return d1 == 2 and d2 == 2 and ok1 and ok2


# ---------------------------------------------------------------------------
# cancellation blockers and lower-bound constants


def find_cancellation_blocker(ws: Sequence[Word], fix_gens: Sequence[Word], m_max: int = 64):
    """An element v of the fixed subgroup with bounded cancellation in w v w^-1.

    Tries powers v1^m, v2^m of the first two given generators, accepting the
    first whose cancellation scores stabilize over at least half the family
    (the order statistic over the first half equals the one over the whole
    family).  Returns (v, C, surviving_indices).
    """
    if len(fix_gens) < 2:
        raise PreconditionNotSatisfied("need two fixed generators (rank >= 2)")
    v1, v2 = fix_gens[0], fix_gens[1]
    if common_root(v1, v2) is not None:
        raise PreconditionNotSatisfied("fixed generators do not certify rank 2")
    if not ws:
        raise InvalidInput("empty word family")
    n = len(ws)
    half = (n + 1) // 2

    def scores(v):
        out = []
        for w in ws:
            s = cancellation(w, v) + cancellation(w * v, w.inverse())
            out.append(s)
        return out

    for m in range(1, m_max + 1):
        for base in (v1, v2):
            v = power(base, m)
            s = scores(v)
            c_all = sorted(s)[half - 1]
            c_first = sorted(s[:half])[(half + 1) // 2 - 1]
            if c_first == c_all:
                surviving = [i for i, x in enumerate(s) if x <= c_all]
                return v, int(c_all), surviving
    raise BlockerNotFound(f"no blocker within m_max = {m_max}; enlarge the budget")


def _valid_triplet(X: Word, b: Word, Y: Word) -> Optional[str]:
    if X.is_identity or Y.is_identity:
        return "cyclic length of the outer words must be positive"
    if _positive_roots_match(X.inverse(), b * Y * b.inverse()):
        return "X^-m1 = b Y^m2 b^-1 has positive solutions"
    return None


def lower_bound_constants(triplets, n_max: int = 30):
    """Brute-force constants (N0, K0) for products X^n1 b Y^n2.

    For every triplet the defect |X^n1 b Y^n2| - n1||X|| - n2||Y|| is
    minimized over 0 <= n1, n2 <= n_max; K0 is the smallest stabilized
    minimum over the family, N0 the latest onset of stabilization.  Products
    with all exponents >= N0 then satisfy the (q-1) K0 lower bound.
    """
    if not triplets:
        raise InvalidInput("empty triplet family")
    K0 = None
    N0 = 0
    for (X, b, Y) in triplets:
        why = _valid_triplet(X, b, Y)
        if why:
            raise PreconditionNotSatisfied(f"invalid triplet ({X}, {b}, {Y}): {why}")
        nX, nY = cyclic_length(X), cyclic_length(Y)
        defect = np.empty((n_max + 1, n_max + 1), dtype=np.int64)
        left = b  # X^n1 * b, grown incrementally
        for n1 in range(n_max + 1):
            w = left
            for n2 in range(n_max + 1):
                defect[n1, n2] = len(w) - n1 * nX - n2 * nY
                if n2 < n_max:
                    w = w * Y
            if n1 < n_max:
                left = X * left
        K_t = int(defect.min())
        onset = 0
        running = defect[0, 0]
        for m in range(n_max + 1):
            running = min(running, int(defect[: m + 1, : m + 1].min()))
            if running == K_t:
                onset = m
                break
        K0 = K_t if K0 is None else min(K0, K_t)
        N0 = max(N0, onset)
    return N0, K0
