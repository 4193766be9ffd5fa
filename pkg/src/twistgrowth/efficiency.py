"""The five efficiency conditions for a classical Dehn twist.

Efficient means: minimal graph of groups, no invisible vertex, no proper
power among edge images, no unused edge (every twistor nonzero), and no
positively bonded edge pair at a common vertex.  Surjectivity of an edge map
onto a free vertex group is decidable here because only the trivial group
and Z occur as edge groups: a trivial edge surjects iff the vertex group is
trivial, a Z edge iff the vertex group has rank one and the image is a
single letter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInput, PreconditionNotSatisfied, VerificationFailed
from .gog import CYCLIC, TRIVIAL, GraphOfGroups, TreeIdentification
from .twist import DehnTwist
from .words import Word, is_conjugate, primitive_root


@dataclass(frozen=True)
class EfficiencyReport:
    minimal: bool
    invisible_vertices: tuple
    proper_power_edges: tuple
    unused_edges: tuple
    bonded_pairs: tuple  # (e1, e2, "positive" | "negative")
    efficient: bool

    def summary(self) -> str:
        bits = []
        if not self.minimal:
            bits.append("not minimal")
        if self.invisible_vertices:
            bits.append(f"invisible vertices {list(self.invisible_vertices)}")
        if self.proper_power_edges:
            bits.append(f"proper-power edges {list(self.proper_power_edges)}")
        if self.unused_edges:
            bits.append(f"unused edges {list(self.unused_edges)}")
        pos = [p for p in self.bonded_pairs if p[2] == "positive"]
        if pos:
            bits.append(f"positively bonded pairs {[(a, b) for a, b, _ in pos]}")
        return "; ".join(bits) if bits else "efficient"

    def to_json(self) -> dict:
        return {
            "minimal": self.minimal,
            "invisible_vertices": list(self.invisible_vertices),
            "proper_power_edges": list(self.proper_power_edges),
            "unused_edges": list(self.unused_edges),
            "bonded_pairs": [list(p) for p in self.bonded_pairs],
            "efficient": self.efficient,
        }


def _edge_map_surjective(gog: GraphOfGroups, e) -> bool:
    rank = gog.basis_at(gog.graph.terminal[e]).rank
    if gog.kind(e) == TRIVIAL:
        return rank == 0
    return rank == 1 and len(gog.image_word(e)) == 1


def check_minimal(gog: GraphOfGroups) -> bool:
    """No valence-one vertex whose single edge map is onto."""
    for v in gog.graph.vertices:
        into = gog.graph.edges_into(v)
        if len(into) == 1 and _edge_map_surjective(gog, into[0]):
            return False
    return True


def check_invisible(gog: GraphOfGroups) -> list:
    """Valence-two vertices where both edge maps are onto."""
    out = []
    for v in gog.graph.vertices:
        into = gog.graph.edges_into(v)
        if len(into) == 2 and all(_edge_map_surjective(gog, e) for e in into):
            out.append(v)
    return out


def check_proper_power(gog: GraphOfGroups) -> list:
    """Z edges whose image word is a proper power (image not root-closed)."""
    out = []
    for e in gog.graph.edges:
        if gog.kind(e) == CYCLIC and primitive_root(gog.image_word(e))[1] >= 2:
            out.append(e)
    return out


def check_bonding(D: DehnTwist, e1, e2) -> str:
    """'positive', 'negative', or 'none' for two edges at a common vertex.

    f_{e_i}(z_i^{n_i}) = u_i^{z_i n_i}; powers of the images are conjugate
    exactly when the primitive roots are conjugate and the total exponents
    agree, so the sign pattern of z_i k_i decides solvability in positive
    integers.
    """
    gog = D.gog
    if gog.graph.terminal[e1] != gog.graph.terminal[e2]:
        raise InvalidInput("bonding needs a common terminal vertex")
    if gog.kind(e1) != CYCLIC or gog.kind(e2) != CYCLIC:
        raise InvalidInput("bonding is defined for Z edges")
    z1, z2 = D.twistor(e1), D.twistor(e2)
    if z1 == 0 or z2 == 0:
        raise InvalidInput("bonding needs nonzero twistors")
    r1, k1 = primitive_root(gog.image_word(e1))
    r2, k2 = primitive_root(gog.image_word(e2))
    s1 = 1 if z1 * k1 > 0 else -1
    s2 = 1 if z2 * k2 > 0 else -1
    same = is_conjugate(r1, r2) is not None
    opp = is_conjugate(r1, r2.inverse()) is not None
    if not same and not opp:
        return "none"
    # u1^{z1 n1} ~ u2^{z2 n2} solvable with n1 >= 1 and n2 >= 1 (positive)
    # or n2 <= -1 (negative); flipping the n2 sign flips s2.
    if (same and s1 == s2) or (opp and s1 == -s2):
        return "positive"
    return "negative"


def is_efficient(D: DehnTwist) -> EfficiencyReport:
    gog = D.gog
    minimal = check_minimal(gog)
    invisible = tuple(check_invisible(gog))
    powers = tuple(check_proper_power(gog))
    unused = tuple(e for e in gog.graph.edges if D.twistor(e) == 0)
    bonds = []
    edges = list(gog.graph.edges)
    for i, e1 in enumerate(edges):
        for e2 in edges[i + 1 :]:
            if gog.graph.terminal[e1] != gog.graph.terminal[e2]:
                continue
            if gog.kind(e1) != CYCLIC or gog.kind(e2) != CYCLIC:
                continue
            if D.twistor(e1) == 0 or D.twistor(e2) == 0:
                continue  # unused edges already fail condition (4)
            kind = check_bonding(D, e1, e2)
            if kind != "none":
                bonds.append((e1, e2, kind))
    positive = any(k == "positive" for (_, _, k) in bonds)
    efficient = minimal and not invisible and not powers and not unused and not positive
    return EfficiencyReport(
        minimal=minimal,
        invisible_vertices=invisible,
        proper_power_edges=powers,
        unused_edges=unused,
        bonded_pairs=tuple(bonds),
        efficient=efficient,
    )


def fixed_subgroup_generators(D: DehnTwist, ident: TreeIdentification) -> list[Word]:
    """Generators of Fix of the induced automorphism: the basepoint vertex basis.

    Stable letters never fix, and the twist fixes every vertex element; the
    basepoint generators decode to themselves.  An efficient twist has every
    vertex group of rank >= 2, so at least two generators come back.
    """
    report = is_efficient(D)
    if not report.efficient:
        raise PreconditionNotSatisfied(f"twist is not efficient: {report.summary()}")
    base = D.gog.basis_at(ident.basepoint)
    if base.rank < 2:
        raise VerificationFailed(
            "efficient twist with basepoint vertex group of rank < 2; "
            "this contradicts the vertex rank bound"
        )
    gens = [ident.decode(ident.realizations[s], strict=False) for s in base.symbols]
    return gens
