"""Twisted conjugacy (H-conjugation) and H-reduction.

Two closed path words are H-conjugate when ``w2 = g^-1 w1 H_*(g)`` for some
g in the path group.  The elementary operation conjugates by the leading
syllable ``r0 t1``; it never lengthens a word, and repeating it while
exploring every rotation of a plateau computes the minimal path length in
the H-conjugacy class (for classical Dehn twists this agrees with cyclic
reduction, where it is exact).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInput, PreconditionNotSatisfied
from .gog import PathWord, TreeIdentification
from .twist import DehnTwist, GoGAut
from .words import Word


@dataclass(frozen=True)
class HReductionTrace:
    """Reduction transcript: result = conjugator^-1 * start * H_*(conjugator)."""

    start: PathWord
    steps: tuple  # (r0: Word, e1: edge id) prefixes moved, in order
    result: PathWord
    conjugator: PathWord

    @property
    def h_length(self) -> int:
        return self.result.path_length

    def to_json(self) -> dict:
        from .gog import format_path_word

        return {
            "steps": [{"word": str(r), "edge": e} for (r, e) in self.steps],
            "conjugator": format_path_word(self.conjugator),
            "result_length": self.result.path_length,
        }


def _aut_of(H) -> GoGAut:
    return H.aut() if isinstance(H, DehnTwist) else H


def elementary_op(H, w: PathWord) -> PathWord:
    """One elementary operation: (r0 t1)^-1 * w * H_*(r0 t1)."""
    aut = _aut_of(H)
    if not aut.graph_trivial:
        raise PreconditionNotSatisfied("elementary operation needs a trivial graph map")
    if w.path_length == 0:
        raise InvalidInput("elementary operation needs path length >= 1")
    if not w.is_closed:
        raise InvalidInput("elementary operation is defined for closed words")
    prefix = PathWord.make(w.gog, w.start, [w.words[0], w.edges[0]])
    return prefix.inverse() * w * aut.apply(prefix)


def h_reduce(H, w: PathWord) -> HReductionTrace:
    """Shorten w by elementary operations until H-reduced.

    Strictly shortening operations are always taken; at a plateau all
    rotations of the current word are tried before the word is declared
    H-reduced.  Images under H_* are not explored separately: path length is
    H_*-invariant for the twist shapes handled here.
    """
    aut = _aut_of(H)
    if not aut.graph_trivial:
        raise PreconditionNotSatisfied("H-reduction needs a trivial graph map")
    if not w.is_closed:
        raise InvalidInput("H-reduction is defined for closed words")
    cur = w
    steps = []
    gamma = PathWord.identity(w.gog, w.start)
    best = (cur, tuple(steps), gamma)
    since_improve = 0
    while cur.path_length > 0 and since_improve < best[0].path_length:
        r0, e1 = cur.words[0], cur.edges[0]
        prefix = PathWord.make(cur.gog, cur.start, [r0, e1])
        cur = prefix.inverse() * cur * aut.apply(prefix)
        gamma = gamma * prefix
        steps.append((r0, e1))
        if cur.path_length < best[0].path_length:
            best = (cur, tuple(steps), gamma)
            since_improve = 0
        else:
            since_improve += 1
    result, kept_steps, kept_gamma = best
    return HReductionTrace(start=w, steps=kept_steps, result=result, conjugator=kept_gamma)


def h_length(H, w: PathWord) -> int:
    return h_reduce(H, w).result.path_length


def is_h_zero(H, w: PathWord) -> bool:
    """Exact for classical Dehn twists; sound (never wrongly true) otherwise."""
    return h_length(H, w) == 0


def is_phi_zero(D: DehnTwist, ident: TreeIdentification, w: Word, _assume_efficient=False) -> bool:
    """Whether a free-group word is zero for the twist automorphism.

    The word is realized through the identification and D-reduced; by the
    uniqueness of efficient representatives this does not depend on the
    choice of representative.  Requires an efficient twist.
    """
    if not _assume_efficient:
        from .efficiency import is_efficient

        report = is_efficient(D)
        if not report.efficient:
            raise PreconditionNotSatisfied(
                f"twist is not efficient: {report.summary()}"
            )
    return is_h_zero(D.aut(), ident.encode(w))
