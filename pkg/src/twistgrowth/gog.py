"""Graphs of groups with free vertex groups and trivial or Z edge groups.

A graph is a finite connected Serre graph: every edge is directed, comes with
an inverse ``bar(e)``, and ``terminal(e)`` is its endpoint (the initial vertex
of ``e`` is ``terminal(bar(e))``).  A :class:`GraphOfGroups` attaches a free
group basis to every vertex and either the trivial group or Z to every edge
pair; a Z edge ``e`` carries the image word ``u_e`` of the positive generator
in the vertex group at ``terminal(e)``.

Elements of the path group are handled as :class:`PathWord` normal forms
``r0 t1 r1 ... tq rq``.  Reduction applies the rewrite
``t_e f_e(g) t_ebar -> f_ebar(g)`` to exhaustion and then slides edge-group
powers rightward across stable letters (``f_ebar(g) t_e = t_e f_e(g)``),
choosing minimal coset representatives; the stored form is a genuine normal
form, so structural equality of path words is equality in the path group.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import _kernels as _k
from .errors import InvalidInput, UnsupportedConfiguration
from .words import Basis, Word, _letter_key, is_power_of, power

TRIVIAL = "1"
CYCLIC = "Z"


class Graph:
    """Finite Serre graph; stored leniently, problems are reported by validate."""

    __slots__ = ("vertices", "edges", "bar", "terminal")

    def __init__(self, vertices, edges, bar, terminal):
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.bar = dict(bar)
        self.terminal = dict(terminal)

    def initial(self, e):
        return self.terminal[self.bar[e]]

    def valence(self, v):
        return sum(1 for e in self.edges if self.terminal[e] == v)

    def edges_into(self, v):
        return [e for e in self.edges if self.terminal[e] == v]

    def is_connected(self):
        if not self.vertices:
            return False
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for e in self.edges:
                if self.terminal[self.bar[e]] == v and self.terminal[e] not in seen:
                    seen.add(self.terminal[e])
                    stack.append(self.terminal[e])
        return len(seen) == len(self.vertices)

    def violations(self):
        out = []
        if not self.vertices:
            out.append("graph has no vertices")
            return out
        vs = set(self.vertices)
        for e in self.edges:
            b = self.bar.get(e)
            if b is None or b not in self.edges:
                out.append(f"edge '{e}' has no inverse edge")
                continue
            if b == e:
                out.append(f"bar('{e}') = '{e}' (bar must be fixed-point free)")
            if self.bar.get(b) != e:
                out.append(f"bar(bar('{e}')) != '{e}'")
            if self.terminal.get(e) not in vs:
                out.append(f"terminal of edge '{e}' is not a vertex")
        if not out and not self.is_connected():
            out.append("graph is not connected")
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.vertices == other.vertices
            and self.edges == other.edges
            and self.bar == other.bar
            and self.terminal == other.terminal
        )

    def __hash__(self):
        return hash((self.vertices, self.edges))


class EdgeGroup:
    """Edge group datum: trivial, or Z with the image word of its generator."""

    __slots__ = ("kind", "image")

    def __init__(self, kind: str, image: Optional[Word] = None):
        if kind not in (TRIVIAL, CYCLIC):
            raise InvalidInput(f"edge group kind must be '1' or 'Z', got {kind!r}")
        self.kind = kind
        self.image = image

    def __eq__(self, other):
        return isinstance(other, EdgeGroup) and self.kind == other.kind and self.image == other.image


class GraphOfGroups:
    __slots__ = ("graph", "vertex_basis", "edge_data", "orientation")

    def __init__(self, graph: Graph, vertex_basis, edge_data, orientation):
        self.graph = graph
        self.vertex_basis = dict(vertex_basis)
        self.edge_data = dict(edge_data)
        self.orientation = frozenset(orientation)

    # -- structure helpers -------------------------------------------------
    def basis_at(self, v) -> Basis:
        return self.vertex_basis[v]

    def image_word(self, e) -> Word:
        return self.edge_data[e].image

    def kind(self, e) -> str:
        return self.edge_data[e].kind

    def is_positive(self, e) -> bool:
        return e in self.orientation

    def membership_exponent(self, e, w: Word):
        """Exponent g with w = f_e(g), or None if w is not in the image.

        Trivial edge groups contain only the identity (exponent 0).
        """
        ed = self.edge_data[e]
        if ed.kind == TRIVIAL:
            return 0 if w.is_identity else None
        return is_power_of(w, ed.image)

    def edge_image_power(self, e, k: int) -> Word:
        ed = self.edge_data[e]
        if ed.kind == TRIVIAL:
            return self.vertex_basis[self.graph.terminal[e]].identity()
        return power(ed.image, k)

    def identity_at(self, v) -> Word:
        return self.vertex_basis[v].identity()

    def all_edge_groups_trivial(self) -> bool:
        return all(ed.kind == TRIVIAL for ed in self.edge_data.values())

    # -- validation ---------------------------------------------------------
    def validate(self) -> list[str]:
        """All invariant violations, each naming the offending vertex/edge."""
        out = self.graph.violations()
        for v in self.graph.vertices:
            if v not in self.vertex_basis:
                out.append(f"vertex '{v}' has no basis")
        for e in self.graph.edges:
            ed = self.edge_data.get(e)
            if ed is None:
                out.append(f"edge '{e}' has no edge group data")
                continue
            b = self.graph.bar.get(e)
            if b in self.edge_data and self.edge_data[b].kind != ed.kind:
                out.append(f"edge groups of '{e}' and '{b}' have different kinds")
            if ed.kind == CYCLIC:
                tv = self.graph.terminal.get(e)
                if ed.image is None or tv is None:
                    out.append(f"edge '{e}' is Z but has no image word")
                elif ed.image.basis != self.vertex_basis.get(tv):
                    out.append(f"image of edge '{e}' is not over the basis at '{tv}'")
                elif ed.image.is_identity:
                    out.append(f"f_e not injective at edge '{e}': image is identity")
            elif ed.image is not None:
                out.append(f"edge '{e}' is trivial but carries an image word")
        pos = self.orientation
        neg = {self.graph.bar[e] for e in pos if e in self.graph.bar}
        if pos & neg or (pos | neg) != set(self.graph.edges):
            out.append("orientation does not pick one edge per inverse pair")
        return out

    def __eq__(self, other):
        return (
            isinstance(other, GraphOfGroups)
            and self.graph == other.graph
            and self.vertex_basis == other.vertex_basis
            and self.orientation == other.orientation
            and all(self.edge_data.get(e) == other.edge_data.get(e) for e in self.graph.edges)
        )

    def __hash__(self):
        return hash((self.graph, tuple(sorted(self.orientation))))


# ---------------------------------------------------------------------------
# path words


def _coset_rep(r: Word, u: Word):
    """Minimal representative of the right coset r<u>, with r = rep * u^k."""
    from .words import cyclic_length

    cyc = max(1, cyclic_length(u))
    # any nonzero power at least keeps |r u^k| >= ||u|| |k| - |r| > |r|
    if r.is_identity or 2 * len(r) < cyc:
        return r, 0
    best, best_k = r, 0
    best_key = (len(r), _letter_key(r.array).tobytes())
    bound = 2 * len(r) // cyc + 2
    for direction in (1, -1):
        step = u if direction == 1 else u.inverse()
        cand = r
        for k in range(1, bound + 1):
            cand = cand * step
            key = (len(cand), _letter_key(cand.array).tobytes())
            if key < best_key:
                best, best_key, best_k = cand, key, direction * k
    # r = best * u^(-best_k)
    return best, -best_k


class PathWord:
    """Normal form r0 t1 r1 ... tq rq in the path group.

    ``words[i]`` lives at vertex ``i`` of the underlying path; ``edges`` are
    the stable letters.  The identity element at a vertex is the q = 0 path
    word with identity vertex word.
    """

    __slots__ = ("gog", "start", "words", "edges")

    def __init__(self, gog, start, words, edges, _normalized=False):
        self.gog = gog
        self.start = start
        self.words = tuple(words)
        self.edges = tuple(edges)
        if not _normalized:
            raise InvalidInput("use PathWord.make to build path words")

    # -- construction -------------------------------------------------------
    @classmethod
    def make(cls, gog: GraphOfGroups, start, items: Sequence[Union[Word, str]]) -> "PathWord":
        """Build and normalize from a raw alternating sequence.

        ``items`` mixes vertex-group Words and edge ids (strings); vertex
        words must sit at the correct vertices along the path, consecutive
        Words are multiplied, and missing vertex words are taken to be
        identities.
        """
        if start not in gog.vertex_basis:
            raise InvalidInput(f"unknown start vertex {start!r}")
        words = [gog.identity_at(start)]
        edges = []
        cur = start
        for it in items:
            if isinstance(it, str):
                e = it
                if e not in gog.edge_data:
                    raise InvalidInput(f"unknown edge {e!r}")
                if gog.graph.initial(e) != cur:
                    raise InvalidInput(f"edge {e!r} does not start at vertex {cur!r}")
                cur = gog.graph.terminal[e]
                edges.append(e)
                words.append(gog.identity_at(cur))
            elif isinstance(it, Word):
                if it.basis != gog.basis_at(cur):
                    raise InvalidInput(f"vertex word {it!r} is not over the basis at {cur!r}")
                words[-1] = words[-1] * it
            else:
                raise InvalidInput(f"path word item {it!r} is neither Word nor edge id")
        words, edges = _normalize(gog, words, edges)
        return cls(gog, start, words, edges, _normalized=True)

    @classmethod
    def vertex_element(cls, gog, v, w: Word) -> "PathWord":
        return cls.make(gog, v, [w])

    @classmethod
    def identity(cls, gog, v) -> "PathWord":
        return cls.make(gog, v, [])

    # -- shape --------------------------------------------------------------
    @property
    def path_length(self) -> int:
        return len(self.edges)

    def path_type(self) -> tuple:
        return self.edges

    @property
    def end(self):
        return self.gog.graph.terminal[self.edges[-1]] if self.edges else self.start

    def vertex_at(self, i: int):
        return self.start if i == 0 else self.gog.graph.terminal[self.edges[i - 1]]

    @property
    def is_closed(self) -> bool:
        return self.start == self.end

    def is_closed_at(self, v) -> bool:
        return self.is_closed and self.start == v

    @property
    def is_identity(self) -> bool:
        return not self.edges and self.words[0].is_identity

    def syllable_lengths(self) -> list[int]:
        return [len(w) for w in self.words]

    # -- group operations ----------------------------------------------------
    def __mul__(self, other: "PathWord") -> "PathWord":
        if self.gog != other.gog:
            raise InvalidInput("path words over different graphs of groups")
        if self.end != other.start:
            raise InvalidInput(
                f"endpoint mismatch: product needs end {self.end!r} == start {other.start!r}"
            )
        words = list(self.words[:-1])
        words.append(self.words[-1] * other.words[0])
        words.extend(other.words[1:])
        edges = list(self.edges) + list(other.edges)
        words, edges = _normalize(self.gog, words, edges)
        return PathWord(self.gog, self.start, words, edges, _normalized=True)

    def inverse(self) -> "PathWord":
        words = tuple(w.inverse() for w in reversed(self.words))
        edges = tuple(self.gog.graph.bar[e] for e in reversed(self.edges))
        words, edges = _normalize(self.gog, list(words), list(edges))
        return PathWord(self.gog, self.end, words, edges, _normalized=True)

    def is_cyclically_reduced(self) -> bool:
        """Closed words only: q = 0, or t1 != bar(tq), or rq*r0 not in f(G_eq)."""
        if not self.is_closed:
            raise InvalidInput("cyclic reducedness is defined for closed words")
        q = self.path_length
        if q == 0:
            return True
        if self.edges[0] != self.gog.graph.bar[self.edges[-1]]:
            return True
        wrap = self.words[-1] * self.words[0]
        return self.gog.membership_exponent(self.edges[-1], wrap) is None

    # -- value semantics ------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, PathWord)
            and self.start == other.start
            and self.edges == other.edges
            and self.words == other.words
            and self.gog == other.gog
        )

    def __hash__(self):
        return hash((self.start, self.edges, self.words))

    def key(self) -> tuple:
        """Cheap hashable identity (start, edges, syllable bytes)."""
        return (self.start, self.edges, tuple(w.array.tobytes() for w in self.words))

    def __repr__(self):
        return format_path_word(self)


def _normalize(gog, words, edges):
    """Rewrite to the reduced form, then slide to coset-minimal syllables."""
    # Backtrack removal: t_e f_e(g) t_ebar -> f_ebar(g); each hit shortens q by 2.
    i = 0
    while i < len(edges) - 1:
        e = edges[i]
        if edges[i + 1] == gog.graph.bar[e]:
            g = gog.membership_exponent(e, words[i + 1])
            if g is not None:
                merged = words[i] * gog.edge_image_power(gog.graph.bar[e], g) * words[i + 2]
                words[i : i + 3] = [merged]
                del edges[i : i + 2]
                i = max(0, i - 1)
                continue
        i += 1
    # Slide: r t_e = rep t_e f_e(k) for r = rep * u_ebar^k, rep coset-minimal.
    for i, e in enumerate(edges):
        if gog.kind(e) != CYCLIC:
            continue
        u_in = gog.image_word(gog.graph.bar[e])
        rep, k = _coset_rep(words[i], u_in)
        if k:
            words[i] = rep
            words[i + 1] = gog.edge_image_power(e, k) * words[i + 1]
    return tuple(words), tuple(edges)


def reduce_path_word(gog: GraphOfGroups, start, items) -> PathWord:
    """Public entry: normalize a raw connected syllable sequence."""
    return PathWord.make(gog, start, items)


def pw_multiply(u: PathWord, v: PathWord) -> PathWord:
    return u * v


def pw_invert(u: PathWord) -> PathWord:
    return u.inverse()


def path_length(u: PathWord) -> int:
    return u.path_length


def path_type(u: PathWord) -> tuple:
    return u.path_type()


def is_closed_at(u: PathWord, v) -> bool:
    return u.is_closed_at(v)


def is_cyclically_reduced(u: PathWord) -> bool:
    return u.is_cyclically_reduced()


# ---------------------------------------------------------------------------
# path word text form: vertex words in word syntax, stable letters as "@edge"


def format_path_word(u: PathWord) -> str:
    if u.is_identity:
        return "1"
    parts = []
    for i, w in enumerate(u.words):
        if not w.is_identity:
            parts.append(str(w))
        if i < len(u.edges):
            parts.append("@" + u.edges[i])
    return " ".join(parts) if parts else "1"


def parse_path_word(gog: GraphOfGroups, start, text: str) -> PathWord:
    items = []
    buf = []

    def flush(cur):
        nonlocal buf
        if buf:
            items.append(gog.basis_at(cur).word(" ".join(buf)))
            buf = []

    cur = start
    for tok in text.split():
        if tok.startswith("@"):
            flush(cur)
            e = tok[1:]
            if e not in gog.edge_data:
                raise InvalidInput(f"unknown edge {e!r}")
            items.append(e)
            cur = gog.graph.terminal[e]
        else:
            buf.append(tok)
    flush(cur)
    return PathWord.make(gog, start, items)


# ---------------------------------------------------------------------------
# maximal-tree identification


class TreeIdentification:
    """Identification of pi_1(gog, basepoint) with a free group on symbols.

    The symbol set is the union of all vertex bases plus one symbol (the edge
    id) per positive non-tree edge; each symbol carries a closed PathWord
    realization at the basepoint.  When every edge group is trivial this is a
    free basis and encode/decode are mutually inverse isomorphisms; with Z
    edge groups the same data still encodes words and decodes stored normal
    forms (the local Dehn twist calculus), but decode is only a normal-form
    map, not injective on the path group.
    """

    __slots__ = ("gog", "basepoint", "tree", "basis", "realizations", "_tree_paths")

    def __init__(self, gog: GraphOfGroups, basepoint=None, tree_edges=None, realization_overrides=None):
        self.gog = gog
        g = gog.graph
        self.basepoint = basepoint if basepoint is not None else g.vertices[0]
        if self.basepoint not in g.vertices:
            raise InvalidInput(f"unknown basepoint {self.basepoint!r}")
        self._tree_paths = self._grow_tree(tree_edges)
        self.tree = frozenset(
            e for p in self._tree_paths.values() for e in p
        ) | frozenset(g.bar[e] for p in self._tree_paths.values() for e in p)

        symbols = []
        for v in g.vertices:
            symbols.extend(gog.basis_at(v).symbols)
        nontree_pos = [e for e in g.edges if e in gog.orientation and e not in self.tree]
        symbols.extend(nontree_pos)
        if len(set(symbols)) != len(symbols):
            raise UnsupportedConfiguration(
                "vertex generator names and non-tree edge ids must be globally distinct"
            )
        self.basis = Basis(symbols)

        self.realizations = {}
        for v in g.vertices:
            to_v = self._path_word_items(v)
            back = [g.bar[e] for e in reversed(self._tree_paths[v])]
            for s in gog.basis_at(v).symbols:
                self.realizations[s] = PathWord.make(
                    gog, self.basepoint, to_v + [gog.basis_at(v).gen(s)] + back
                )
        for e in nontree_pos:
            to_i = self._path_word_items(g.initial(e))
            back = [g.bar[x] for x in reversed(self._tree_paths[g.terminal[e]])]
            self.realizations[e] = PathWord.make(gog, self.basepoint, to_i + [e] + back)
        if realization_overrides:
            for s, pw in realization_overrides.items():
                if s not in self.realizations:
                    raise InvalidInput(f"override for unknown symbol {s!r}")
                if not pw.is_closed_at(self.basepoint):
                    raise InvalidInput(f"realization of {s!r} is not closed at the basepoint")
                self.realizations[s] = pw

    def _grow_tree(self, tree_edges):
        """BFS spanning tree; returns vertex -> list of tree edges from basepoint."""
        g = self.gog.graph
        allowed = None if tree_edges is None else set(tree_edges) | {g.bar[e] for e in tree_edges}
        paths = {self.basepoint: []}
        frontier = [self.basepoint]
        while frontier:
            nxt = []
            for v in frontier:
                for e in g.edges:
                    if g.initial(e) != v or (allowed is not None and e not in allowed):
                        continue
                    w = g.terminal[e]
                    if w not in paths:
                        paths[w] = paths[v] + [e]
                        nxt.append(w)
            frontier = nxt
        if len(paths) != len(g.vertices):
            raise InvalidInput("tree edges do not span the graph")
        if allowed is not None and len(allowed) != 2 * (len(g.vertices) - 1):
            raise InvalidInput("tree edge set is not a maximal tree")
        return paths

    def _path_word_items(self, v):
        return list(self._tree_paths[v])

    @property
    def strict(self) -> bool:
        """True when decode is an honest inverse of encode (trivial edge groups)."""
        return self.gog.all_edge_groups_trivial()

    # -- encode / decode ------------------------------------------------------
    def encode(self, w: Word) -> PathWord:
        """Realize a word over the symbol basis as a closed path word."""
        if w.basis != self.basis:
            raise InvalidInput("word is not over this identification's basis")
        out = PathWord.identity(self.gog, self.basepoint)
        for idx, sign in w.letters():
            r = self.realizations[self.basis.symbols[idx]]
            out = out * (r if sign > 0 else r.inverse())
        return out

    def decode(self, u: PathWord, strict: Optional[bool] = None) -> Word:
        """Map a stored path word to a word over the symbol basis.

        Vertex letters keep their names; tree stable letters vanish; positive
        non-tree stable letters become their edge symbols.  On graphs with
        nontrivial edge groups this is a normal-form map only; pass
        ``strict=False`` to accept that, otherwise the call is refused.
        """
        if strict is None:
            strict = True
        if strict and not self.strict:
            raise UnsupportedConfiguration(
                "decode is not injective with nontrivial edge groups; pass strict=False"
            )
        values = []
        g = self.gog.graph
        for i, w in enumerate(u.words):
            vb = self.gog.basis_at(u.vertex_at(i))
            for idx, sign in w.letters():
                values.append(sign * (self.basis.index(vb.symbols[idx]) + 1))
            if i < len(u.edges):
                e = u.edges[i]
                if e in self.tree:
                    continue
                if e in self.basis:
                    values.append(self.basis.index(e) + 1)
                elif g.bar[e] in self.basis:
                    values.append(-(self.basis.index(g.bar[e]) + 1))
                else:  # pragma: no cover - construction guarantees coverage
                    raise UnsupportedConfiguration(f"no symbol for edge {e!r}")
        return self.basis.from_values(values)


def theta_encode(ident: TreeIdentification, w: Word) -> PathWord:
    return ident.encode(w)


def theta_decode(ident: TreeIdentification, u: PathWord, strict: Optional[bool] = None) -> Word:
    return ident.decode(u, strict=strict)
