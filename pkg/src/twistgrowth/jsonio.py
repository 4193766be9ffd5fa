"""JSON interchange for graphs of groups, automorphisms, twists, and specs.

Documents parse into the package's value types and serialize back to equal
documents; parse errors name the offending field.
"""

from __future__ import annotations

from .dichotomy import LocalTwist, RelativeTwistSpec
from .errors import InvalidInput
from .gog import (
    CYCLIC,
    TRIVIAL,
    EdgeGroup,
    Graph,
    GraphOfGroups,
    TreeIdentification,
    format_path_word,
    parse_path_word,
)
from .twist import DehnTwist, GoGAut, PartialTwistData
from .words import Basis


def _get(doc, field, ctx):
    if not isinstance(doc, dict) or field not in doc:
        raise InvalidInput(f"missing field '{field}' in {ctx}")
    return doc[field]


# ---------------------------------------------------------------------------
# graphs of groups


def gog_from_json(doc) -> GraphOfGroups:
    vertices = _get(doc, "vertices", "graph-of-groups document")
    edges = _get(doc, "edges", "graph-of-groups document")
    orientation = _get(doc, "orientation", "graph-of-groups document")
    vids, vbasis = [], {}
    for v in vertices:
        vid = _get(v, "id", "vertices[]")
        vids.append(vid)
        vbasis[vid] = Basis(_get(v, "basis", f"vertex '{vid}'"))
    eids, bar, term, data = [], {}, {}, {}
    for e in edges:
        eid = _get(e, "id", "edges[]")
        eids.append(eid)
        bar[eid] = _get(e, "bar", f"edge '{eid}'")
        term[eid] = _get(e, "to", f"edge '{eid}'")
        kind = _get(e, "group", f"edge '{eid}'")
        if kind == CYCLIC:
            image_text = _get(e, "image", f"edge '{eid}'")
            if term[eid] not in vbasis:
                raise InvalidInput(f"edge '{eid}' ends at unknown vertex '{term[eid]}'")
            data[eid] = EdgeGroup(CYCLIC, vbasis[term[eid]].word(image_text))
        elif kind == TRIVIAL:
            data[eid] = EdgeGroup(TRIVIAL)
        else:
            raise InvalidInput(f"edge '{eid}': group must be '1' or 'Z'")
    return GraphOfGroups(Graph(vids, eids, bar, term), vbasis, data, orientation)


def gog_to_json(gog: GraphOfGroups) -> dict:
    vertices = [
        {"id": v, "basis": list(gog.basis_at(v).symbols)} for v in gog.graph.vertices
    ]
    edges = []
    for e in gog.graph.edges:
        entry = {
            "id": e,
            "bar": gog.graph.bar[e],
            "to": gog.graph.terminal[e],
            "group": gog.kind(e),
        }
        if gog.kind(e) == CYCLIC:
            entry["image"] = str(gog.image_word(e))
        edges.append(entry)
    return {"vertices": vertices, "edges": edges, "orientation": sorted(gog.orientation)}


# ---------------------------------------------------------------------------
# automorphisms and twists


def aut_from_json(gog: GraphOfGroups, doc) -> GoGAut:
    graph_map = doc.get("graph_map", "id")
    if graph_map == "id":
        graph_map = None
    return GoGAut(
        gog,
        vertex_maps=doc.get("vertex_maps") or {},
        vertex_maps_inverse=doc.get("vertex_maps_inverse") or {},
        corrections=doc.get("corrections") or {},
        edge_signs={e: int(s) for e, s in (doc.get("edge_maps") or {}).items()},
        graph_map=graph_map,
    )


def aut_to_json(aut: GoGAut) -> dict:
    doc = {"graph_map": "id"}
    if aut.graph_vertex_map is not None:
        doc["graph_map"] = {"vertices": dict(aut.graph_vertex_map), "edges": dict(aut.graph_edge_map)}
    if aut.vertex_auts:
        doc["vertex_maps"] = {
            v: {s: str(w) for s, w in zip(a.basis.symbols, a.images)}
            for v, a in aut.vertex_auts.items()
        }
        doc["vertex_maps_inverse"] = {
            v: {s: str(w) for s, w in zip(a.basis.symbols, a.inverse_images)}
            for v, a in aut.vertex_auts.items()
        }
    if aut.edge_signs:
        doc["edge_maps"] = dict(aut.edge_signs)
    if aut.corrections:
        doc["corrections"] = {e: str(w) for e, w in aut.corrections.items()}
    return doc


def twist_from_json(gog: GraphOfGroups, doc) -> DehnTwist:
    if "gammas" in doc:
        return DehnTwist(gog, {e: int(k) for e, k in doc["gammas"].items()})
    if "twistors" in doc:
        return DehnTwist.from_twistors(gog, {e: int(z) for e, z in doc["twistors"].items()})
    raise InvalidInput("missing field 'gammas' or 'twistors' in Dehn twist document")


def twist_to_json(D: DehnTwist) -> dict:
    return {"gammas": {e: k for e, k in D.gammas.items() if k}}


# ---------------------------------------------------------------------------
# tree identifications


def theta_from_json(gog: GraphOfGroups, doc) -> TreeIdentification:
    basepoint = _get(doc, "basepoint", "theta document")
    tree = _get(doc, "tree", "theta document")
    overrides = None
    if doc.get("basis_map"):
        ident = TreeIdentification(gog, basepoint=basepoint, tree_edges=tree)
        overrides = {
            s: parse_path_word(gog, basepoint, text) for s, text in doc["basis_map"].items()
        }
        return TreeIdentification(
            gog, basepoint=basepoint, tree_edges=tree, realization_overrides=overrides
        )
    return TreeIdentification(gog, basepoint=basepoint, tree_edges=tree)


def theta_to_json(ident: TreeIdentification) -> dict:
    tree_pos = sorted(e for e in ident.tree if e in ident.gog.orientation)
    return {
        "tree": tree_pos,
        "basepoint": ident.basepoint,
        "basis_map": {s: format_path_word(r) for s, r in ident.realizations.items()},
    }


# ---------------------------------------------------------------------------
# automorphism bundles (gog + twist-or-aut + optional theta)


def bundle_from_json(doc):
    """Returns (gog, aut_or_twist, theta); used by the word-level commands."""
    gog = gog_from_json(_get(doc, "gog", "bundle document"))
    if "twist" in doc:
        aut = twist_from_json(gog, doc["twist"])
    elif "aut" in doc:
        aut = aut_from_json(gog, doc["aut"])
    else:
        raise InvalidInput("missing field 'twist' or 'aut' in bundle document")
    theta = theta_from_json(gog, doc["theta"]) if "theta" in doc else TreeIdentification(gog)
    return gog, aut, theta


def bundle_to_json(gog, aut, theta=None) -> dict:
    doc = {"gog": gog_to_json(gog)}
    if isinstance(aut, DehnTwist):
        doc["twist"] = twist_to_json(aut)
    else:
        doc["aut"] = aut_to_json(aut)
    if theta is not None:
        doc["theta"] = theta_to_json(theta)
    return doc


# ---------------------------------------------------------------------------
# relative twist specs


def spec_from_json(doc) -> RelativeTwistSpec:
    top = gog_from_json(_get(doc, "top", "spec document"))
    aut = aut_from_json(top, _get(doc, "aut", "spec document"))
    special = _get(doc, "special", "spec document")
    locals_doc = _get(doc, "locals", "spec document")
    locals_ = {}
    for v, entry in locals_doc.items():
        lgog = gog_from_json(_get(entry, "gog", f"locals['{v}']"))
        ltwist = twist_from_json(lgog, _get(entry, "twist", f"locals['{v}']"))
        ltheta = theta_from_json(lgog, _get(entry, "theta", f"locals['{v}']"))
        locals_[v] = LocalTwist(lgog, ltwist, ltheta)
    return RelativeTwistSpec(
        top, PartialTwistData(aut, special), locals_, basepoint=doc.get("basepoint")
    )


def spec_to_json(s: RelativeTwistSpec) -> dict:
    return {
        "top": gog_to_json(s.top),
        "aut": aut_to_json(s.partial.aut),
        "special": sorted(s.partial.special),
        "locals": {
            v: {
                "gog": gog_to_json(loc.gog),
                "twist": twist_to_json(loc.twist),
                "theta": theta_to_json(loc.theta),
            }
            for v, loc in s.locals.items()
        },
        "basepoint": s.top_theta.basepoint,
    }
