"""Graph-of-groups automorphisms, Dehn twists, and induced maps.

An automorphism H of a graph of groups is a graph map (here usually the
identity), one free-group automorphism per vertex (supplied together with its
inverse; bijectivity is verified, not computed), a sign per Z edge pair, and
a correction term per edge satisfying the compatibility condition
``H_tau(e)(f_e(g)) = delta(e) f_{H(e)}(H_e(g)) delta(e)^-1``.  The induced map
on the path group sends vertex letters through the vertex maps and stable
letters to ``delta(ebar) t_{H(e)} delta(e)^-1``.

A classical Dehn twist is the special case with identity graph/vertex/edge
maps and ``delta(e) = u_e^{gamma_e}``; its outer class is determined by the
twistors ``z_e = gamma_ebar - gamma_e`` (integers, written additively).
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from . import _kernels as _k
from .errors import InvalidInput, PreconditionNotSatisfied
from .gog import CYCLIC, TRIVIAL, GraphOfGroups, PathWord, TreeIdentification
from .words import Basis, Word, centralizer_generator, is_power_of, power


class FreeAutomorphism:
    """Automorphism of a free group given by generator images (plus inverse).

    Application is a single substitution pass over the letter array, so
    iterating on long words is cheap.  Instances are immutable and callable.
    """

    __slots__ = ("basis", "images", "inverse_images", "_flat", "_starts", "_lens")

    def __init__(self, basis: Basis, images, inverse_images=None, check: bool = True):
        images = tuple(images)
        if len(images) != basis.rank:
            raise InvalidInput("need one image per generator")
        for w in images:
            if not isinstance(w, Word) or w.basis != basis:
                raise InvalidInput("images must be words over the same basis")
        self.basis = basis
        self.images = images
        self.inverse_images = tuple(inverse_images) if inverse_images is not None else None
        starts = np.zeros(basis.rank + 1, dtype=np.int64)
        lens = np.zeros(basis.rank + 1, dtype=np.int64)
        chunks = []
        pos = 0
        for i, w in enumerate(images):
            starts[i + 1] = pos
            lens[i + 1] = len(w)
            chunks.append(w.array)
            pos += len(w)
        self._flat = np.concatenate(chunks).astype(np.int32) if chunks else np.empty(0, np.int32)
        self._starts = starts
        self._lens = lens
        if check and self.inverse_images is not None:
            inv = FreeAutomorphism(basis, self.inverse_images, None, check=False)
            for g, img in zip(basis.gens(), images):
                if inv(img) != g or self(inv(g)) != g:
                    raise InvalidInput(
                        "supplied inverse images do not invert the automorphism"
                    )

    def __call__(self, w: Word) -> Word:
        if w.basis != self.basis:
            raise InvalidInput("word is not over this automorphism's basis")
        return Word(self.basis, _k.substitute(w.array, self._flat, self._starts, self._lens), _checked=True)

    def inverse(self) -> "FreeAutomorphism":
        if self.inverse_images is None:
            raise InvalidInput("no inverse data supplied")
        return FreeAutomorphism(self.basis, self.inverse_images, self.images, check=False)

    def iterate(self, w: Word, n: int) -> Word:
        f = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            w = f(w)
        return w

    @classmethod
    def identity(cls, basis: Basis) -> "FreeAutomorphism":
        gens = basis.gens()
        return cls(basis, gens, gens, check=False)

    @property
    def is_identity(self) -> bool:
        return all(img == g for img, g in zip(self.images, self.basis.gens()))

    def __repr__(self):
        ims = ", ".join(f"{s} -> {w}" for s, w in zip(self.basis.symbols, self.images))
        return f"FreeAutomorphism({ims})"


class GoGAut:
    """Automorphism of a graph of groups (Def.-style tuple of data).

    ``vertex_maps``/``vertex_maps_inverse`` map vertex -> FreeAutomorphism
    input data; missing vertices are identities.  ``edge_signs`` is the sign
    of the induced map on a Z edge group (+1 if missing).  ``corrections``
    maps edge -> Word at the terminal vertex of the image edge.
    """

    __slots__ = ("gog", "graph_vertex_map", "graph_edge_map", "vertex_auts", "corrections",
                 "edge_signs", "_vaut_cache")

    def __init__(self, gog: GraphOfGroups, vertex_maps=None, vertex_maps_inverse=None,
                 corrections=None, edge_signs=None, graph_map=None, check: bool = True):
        self.gog = gog
        self._vaut_cache = {}
        if graph_map is None:
            self.graph_vertex_map = None
            self.graph_edge_map = None
        else:
            self.graph_vertex_map = dict(graph_map.get("vertices", {}))
            self.graph_edge_map = dict(graph_map.get("edges", {}))
            self._check_graph_map()
        vertex_maps = vertex_maps or {}
        vertex_maps_inverse = vertex_maps_inverse or {}
        if check and set(vertex_maps) != set(vertex_maps_inverse):
            raise InvalidInput("vertex_maps and vertex_maps_inverse must cover the same vertices")
        self.vertex_auts = {}
        for v, images in vertex_maps.items():
            basis = gog.basis_at(v)
            tgt = gog.basis_at(self.vertex_image(v))
            if tgt != basis and check:
                raise InvalidInput(f"vertex map at {v!r} must land in the basis at its image vertex")
            img = [self._as_word(basis, images[s]) for s in basis.symbols]
            inv = [self._as_word(basis, vertex_maps_inverse[v][s]) for s in basis.symbols]
            self.vertex_auts[v] = FreeAutomorphism(basis, img, inv, check=check)
        self.corrections = {}
        for e, w in (corrections or {}).items():
            if e not in gog.edge_data:
                raise InvalidInput(f"correction for unknown edge {e!r}")
            tv = gog.graph.terminal[self.edge_image(e)]
            w = self._as_word(gog.basis_at(tv), w)
            self.corrections[e] = w
        self.edge_signs = {}
        for e, s in (edge_signs or {}).items():
            if s not in (1, -1):
                raise InvalidInput(f"edge map sign for {e!r} must be +-1")
            self.edge_signs[e] = int(s)
        if check:
            self._check_edge_signs()
            self._check_compatibility()

    @staticmethod
    def _as_word(basis, w):
        if isinstance(w, Word):
            if w.basis != basis:
                raise InvalidInput("word over the wrong vertex basis")
            return w
        return basis.word(w)

    def _check_graph_map(self):
        g = self.gog.graph
        vm, em = self.graph_vertex_map, self.graph_edge_map
        if sorted(vm) != sorted(g.vertices) or sorted(vm.values()) != sorted(g.vertices):
            raise InvalidInput("graph map is not a vertex bijection")
        if sorted(em) != sorted(g.edges) or sorted(em.values()) != sorted(g.edges):
            raise InvalidInput("graph map is not an edge bijection")
        for e in g.edges:
            if em[g.bar[e]] != g.bar[em[e]]:
                raise InvalidInput(f"graph map does not commute with bar at {e!r}")
            if vm[g.terminal[e]] != g.terminal[em[e]]:
                raise InvalidInput(f"graph map does not commute with terminal at {e!r}")

    def _check_edge_signs(self):
        g = self.gog.graph
        for e, s in self.edge_signs.items():
            if self.edge_signs.get(g.bar[e], 1) != s:
                raise InvalidInput(f"edge map signs of {e!r} and its inverse differ")
            if self.gog.kind(e) == TRIVIAL and s != 1:
                raise InvalidInput(f"trivial edge {e!r} admits no sign -1")

    def _check_compatibility(self):
        """Def of correction terms, checked on the edge-group generator."""
        for e in self.gog.graph.edges:
            if self.gog.kind(e) != CYCLIC:
                continue
            lhs = self.vertex_aut(self.gog.graph.terminal[e])(self.gog.image_word(e))
            d = self.correction(e)
            rhs = d * power(self.gog.image_word(self.edge_image(e)), self.edge_sign(e)) * d.inverse()
            if lhs != rhs:
                raise InvalidInput(f"correction term at edge {e!r} fails compatibility")

    # -- component accessors (identity defaults) -----------------------------
    def vertex_image(self, v):
        return v if self.graph_vertex_map is None else self.graph_vertex_map[v]

    def edge_image(self, e):
        return e if self.graph_edge_map is None else self.graph_edge_map[e]

    @property
    def graph_trivial(self) -> bool:
        return self.graph_vertex_map is None or (
            all(v == w for v, w in self.graph_vertex_map.items())
            and all(e == f for e, f in self.graph_edge_map.items())
        )

    def vertex_aut(self, v) -> FreeAutomorphism:
        aut = self.vertex_auts.get(v)
        if aut is not None:
            return aut
        cached = self._vaut_cache.get(v)
        if cached is None:
            cached = FreeAutomorphism.identity(self.gog.basis_at(v))
            self._vaut_cache[v] = cached
        return cached

    def vertex_maps_trivial(self) -> bool:
        return all(aut.is_identity for aut in self.vertex_auts.values())

    def edge_sign(self, e) -> int:
        return self.edge_signs.get(e, 1)

    def edge_signs_trivial(self) -> bool:
        return all(s == 1 for s in self.edge_signs.values())

    def correction(self, e) -> Word:
        w = self.corrections.get(e)
        if w is None:
            return self.gog.identity_at(self.gog.graph.terminal[self.edge_image(e)])
        return w

    # -- action on the path group --------------------------------------------
    def apply(self, u: PathWord) -> PathWord:
        """H_* on stored path words (vertex letters through H_v, stable
        letters to delta(ebar) t_{H(e)} delta(e)^-1), followed by reduction."""
        if u.gog != self.gog:
            raise InvalidInput("path word lives on a different graph of groups")
        items = []
        for i, w in enumerate(u.words):
            items.append(self.vertex_aut(u.vertex_at(i))(w))
            if i < len(u.edges):
                e = u.edges[i]
                items.append(self.correction(self.gog.graph.bar[e]))
                items.append(self.edge_image(e))
                items.append(self.correction(e).inverse())
        return PathWord.make(self.gog, self.vertex_image(u.start), items)

    def inverse(self) -> "GoGAut":
        if not self.graph_trivial:
            raise InvalidInput("inverse is only implemented for trivial graph maps")
        inv_vm = {}
        inv_vm_inv = {}
        for v, aut in self.vertex_auts.items():
            inv = aut.inverse()
            basis = aut.basis
            inv_vm[v] = {s: w for s, w in zip(basis.symbols, inv.images)}
            inv_vm_inv[v] = {s: w for s, w in zip(basis.symbols, aut.images)}
        corr = {}
        for e in self.gog.graph.edges:
            d = self.correction(e)
            if not d.is_identity:
                corr[e] = self.vertex_aut(self.gog.graph.terminal[e]).inverse()(d).inverse()
        return GoGAut(self.gog, inv_vm, inv_vm_inv, corr, dict(self.edge_signs), check=False)

    def is_partial_identity_outside(self, special) -> bool:
        return all(self.vertex_aut(v).is_identity for v in self.gog.graph.vertices if v not in special)


def apply_aut(H: GoGAut, u: PathWord) -> PathWord:
    return H.apply(u)


def is_general_dehn_twist(H: GoGAut) -> bool:
    """Conditions (1)-(3) of a Dehn twist plus corrections centralizing f_e(G_e)."""
    if not (H.graph_trivial and H.vertex_maps_trivial() and H.edge_signs_trivial()):
        raise PreconditionNotSatisfied(
            "general Dehn twist test requires identity graph, vertex and edge maps"
        )
    for e in H.gog.graph.edges:
        if H.gog.kind(e) != CYCLIC:
            continue
        d = H.correction(e)
        if d.is_identity:
            continue
        root = centralizer_generator(H.gog.image_word(e))
        if is_power_of(d, root) is None:
            return False
    return True


class DehnTwist:
    """Classical Dehn twist: corrections are f_e(gamma_e) for integers gamma_e."""

    __slots__ = ("gog", "gammas", "_aut_cache")

    def __init__(self, gog: GraphOfGroups, gammas=None):
        self.gog = gog
        self._aut_cache = None
        self.gammas = {e: 0 for e in gog.graph.edges}
        for e, k in (gammas or {}).items():
            if e not in gog.edge_data:
                raise InvalidInput(f"gamma for unknown edge {e!r}")
            k = int(k)
            if gog.kind(e) == TRIVIAL and k != 0:
                raise InvalidInput(f"trivial edge {e!r} admits only gamma = 0")
            self.gammas[e] = k

    @classmethod
    def from_twistors(cls, gog: GraphOfGroups, twistors) -> "DehnTwist":
        """Twist with gamma_e = -z_e on the orientation and 0 on inverses."""
        gammas = {}
        for e, z in twistors.items():
            if e not in gog.edge_data:
                raise InvalidInput(f"twistor for unknown edge {e!r}")
            if e not in gog.orientation:
                raise InvalidInput(f"twistors are given on the orientation only, not {e!r}")
            z = int(z)
            if z and gog.kind(e) == TRIVIAL:
                raise InvalidInput(f"nonzero twistor on trivial edge {e!r}")
            gammas[e] = -z
        return cls(gog, gammas)

    def twistors(self) -> dict:
        bar = self.gog.graph.bar
        return {e: self.gammas[bar[e]] - self.gammas[e] for e in self.gog.graph.edges}

    def twistor(self, e) -> int:
        return self.gammas[self.gog.graph.bar[e]] - self.gammas[e]

    def correction(self, e) -> Word:
        return self.gog.edge_image_power(e, self.gammas[e])

    def aut(self) -> GoGAut:
        if self._aut_cache is None:
            corr = {e: self.correction(e) for e in self.gog.graph.edges if self.gammas[e]}
            self._aut_cache = GoGAut(self.gog, corrections=corr, check=False)
        return self._aut_cache

    def inverse(self) -> "DehnTwist":
        return DehnTwist(self.gog, {e: -k for e, k in self.gammas.items()})

    def apply(self, u: PathWord) -> PathWord:
        return self.aut().apply(u)

    def __eq__(self, other):
        return isinstance(other, DehnTwist) and self.gog == other.gog and self.gammas == other.gammas


def twistors(D: DehnTwist) -> dict:
    return D.twistors()


def dehn_twist_from_twistors(gog: GraphOfGroups, z) -> DehnTwist:
    return DehnTwist.from_twistors(gog, z)


def same_outer(D1: DehnTwist, D2: DehnTwist) -> bool:
    """Whether two twists on one graph of groups induce the same outer class.

    Valid under the malnormality hypothesis that some r_e conjugates
    f_e(G_e) off itself; for a free vertex group with cyclic edge image this
    holds exactly when the vertex group has rank >= 2, which is checked.
    """
    if D1.gog != D2.gog:
        raise InvalidInput("twists live on different graphs of groups")
    gog = D1.gog
    for e in gog.graph.edges:
        if gog.kind(e) == CYCLIC and gog.basis_at(gog.graph.terminal[e]).rank < 2:
            raise PreconditionNotSatisfied(
                f"no conjugate of f_e(G_e) misses itself at edge {e!r}: "
                "vertex group has rank < 2"
            )
    return D1.twistors() == D2.twistors()


class PartialTwistData:
    """Partial Dehn twist relative to a set of special vertices.

    Outside the special set the automorphism satisfies all general Dehn twist
    conditions; every edge ending at a special vertex has trivial edge group.
    """

    __slots__ = ("aut", "special")

    def __init__(self, aut: GoGAut, special):
        self.aut = aut
        self.special = frozenset(special)

    @property
    def gog(self) -> GraphOfGroups:
        return self.aut.gog

    def validate(self) -> list[str]:
        out = []
        if not self.aut.graph_trivial:
            out.append("partial twist must act trivially on the graph")
        gog = self.gog
        for v in self.special:
            if v not in gog.vertex_basis:
                out.append(f"special vertex {v!r} is not a vertex")
        for e in gog.graph.edges:
            tv = gog.graph.terminal[e]
            if tv in self.special:
                if gog.kind(e) != TRIVIAL:
                    out.append(f"edge {e!r} into special vertex {tv!r} has nontrivial group")
            else:
                if not self.aut.vertex_aut(tv).is_identity:
                    out.append(f"vertex map at non-special vertex {tv!r} is not the identity")
                if gog.kind(e) == CYCLIC:
                    d = self.aut.correction(e)
                    if not d.is_identity and is_power_of(
                        d, centralizer_generator(gog.image_word(e))
                    ) is None:
                        out.append(f"correction at {e!r} is not in the centralizer of f_e(G_e)")
        return out

    def absorb_inner(self, conjugators: dict) -> "PartialTwistData":
        """Compose with the inner twist J (ad_{g_v} at special vertices).

        The correction of every edge into a special vertex picks up the left
        factor g_{tau(e)}, so the induced map at non-special base points is
        unchanged; the induced outer automorphism is the same.
        """
        for v in conjugators:
            if v not in self.special:
                raise InvalidInput(f"conjugator given at non-special vertex {v!r}")
        gog = self.gog
        vm, vmi = {}, {}
        for v in self.special:
            aut = self.aut.vertex_aut(v)
            basis = gog.basis_at(v)
            g = conjugators.get(v, basis.identity())
            if g.basis != basis:
                raise InvalidInput(f"conjugator at {v!r} is not over the vertex basis")
            inv = aut.inverse()
            vm[v] = {s: g * w * g.inverse() for s, w in zip(basis.symbols, aut.images)}
            vmi[v] = {s: inv(g.inverse()) * w * inv(g) for s, w in zip(basis.symbols, inv.images)}
        corr = {}
        for e in gog.graph.edges:
            d = self.aut.correction(e)
            tv = gog.graph.terminal[e]
            if tv in self.special:
                d = conjugators.get(tv, gog.identity_at(tv)) * d
            if not d.is_identity:
                corr[e] = d
        new_aut = GoGAut(gog, vm, vmi, corr, dict(self.aut.edge_signs), check=False)
        return PartialTwistData(new_aut, self.special)


def absorb_inner(H: PartialTwistData, conjugators: dict) -> PartialTwistData:
    return H.absorb_inner(conjugators)


def induced_automorphism(ident: TreeIdentification, aut) -> FreeAutomorphism:
    """The automorphism of the identification's free group induced by ``aut``.

    ``aut`` may be a GoGAut (trivial graph map) or a DehnTwist.  Images of
    basis symbols are computed by realizing, applying, and decoding; the
    inverse comes from the inverse automorphism data.
    """
    if isinstance(aut, DehnTwist):
        fwd, bwd = aut.aut(), aut.inverse().aut()
    else:
        fwd, bwd = aut, aut.inverse()
    if not fwd.graph_trivial:
        raise InvalidInput("induced automorphism needs a trivial graph map")
    images = []
    inverse_images = []
    for s in ident.basis.symbols:
        r = ident.realizations[s]
        images.append(ident.decode(fwd.apply(r), strict=False))
        inverse_images.append(ident.decode(bwd.apply(r), strict=False))
    return FreeAutomorphism(ident.basis, images, inverse_images, check=True)
