"""Built-in fixture corpus: the one-loop twist, the two-vertex dichotomy
specs, and the single-condition efficiency mutations.

Each entry carries its expected outcome and a provenance tag saying how the
expectation was obtained (closed form, direct construction, or brute
iteration); the ``fixtures`` CLI subcommand replays the corpus.
"""

from __future__ import annotations

from .dichotomy import LINEAR, QUADRATIC, LocalTwist, RelativeTwistSpec
from .gog import CYCLIC, EdgeGroup, Graph, GraphOfGroups, TreeIdentification
from .twist import DehnTwist, GoGAut, PartialTwistData
from .words import Basis


def loop_gog() -> GraphOfGroups:
    """One vertex with group <a, b>, one Z loop with images a and b."""
    F2 = Basis(["a", "b"])
    graph = Graph(["v"], ["t", "tbar"], {"t": "tbar", "tbar": "t"}, {"t": "v", "tbar": "v"})
    return GraphOfGroups(
        graph,
        {"v": F2},
        {"t": EdgeGroup(CYCLIC, F2.word("a")), "tbar": EdgeGroup(CYCLIC, F2.word("b"))},
        ["t"],
    )


def loop_twist(z: int = 1) -> DehnTwist:
    return DehnTwist.from_twistors(loop_gog(), {"t": z})


def loop_identification(gog=None) -> TreeIdentification:
    return TreeIdentification(gog if gog is not None else loop_gog(), basepoint="v")


def loop_bundle(z: int = 1):
    """(gog, twist, theta) for the one-loop fixture."""
    gog = loop_gog()
    return gog, DehnTwist.from_twistors(gog, {"t": z}), TreeIdentification(gog, basepoint="v")


def dichotomy_top() -> GraphOfGroups:
    """Two vertices joined by a trivial edge: <c> at u, <a, b, t> at v."""
    graph = Graph(
        ["u", "v"], ["f", "fbar"], {"f": "fbar", "fbar": "f"}, {"f": "v", "fbar": "u"}
    )
    return GraphOfGroups(
        graph,
        {"u": Basis(["c"]), "v": Basis(["a", "b", "t"])},
        {"f": EdgeGroup("1"), "fbar": EdgeGroup("1")},
        ["f"],
    )


def dichotomy_spec(delta_f: str) -> RelativeTwistSpec:
    """The two-vertex spec with local loop twist at v and correction delta_f.

    delta_f = "b" is the locally-zero case (linear verdict); delta_f = "t"
    is the non-locally-zero case (at least quadratic).
    """
    top = dichotomy_top()
    gog, tw, theta = loop_bundle()
    aut = GoGAut(
        top,
        vertex_maps={"v": {"a": "a", "b": "b", "t": "t a"}},
        vertex_maps_inverse={"v": {"a": "a", "b": "b", "t": "t a^-1"}},
        corrections={"f": delta_f},
    )
    partial = PartialTwistData(aut, ["v"])
    return RelativeTwistSpec(top, partial, {"v": LocalTwist(gog, tw, theta)}, basepoint="u")


# ---------------------------------------------------------------------------
# efficiency mutations (each aimed at one condition)


def mutation_valence_one() -> DehnTwist:
    """Hang a trivial-group valence-one vertex off the loop: not minimal.

    The new edge necessarily has trivial edge group, so it is also unused;
    no other condition is disturbed.
    """
    F2 = Basis(["a", "b"])
    graph = Graph(
        ["v", "w"],
        ["t", "tbar", "g", "gbar"],
        {"t": "tbar", "tbar": "t", "g": "gbar", "gbar": "g"},
        {"t": "v", "tbar": "v", "g": "w", "gbar": "v"},
    )
    gog = GraphOfGroups(
        graph,
        {"v": F2, "w": Basis([])},
        {
            "t": EdgeGroup(CYCLIC, F2.word("a")),
            "tbar": EdgeGroup(CYCLIC, F2.word("b")),
            "g": EdgeGroup("1"),
            "gbar": EdgeGroup("1"),
        },
        ["t", "g"],
    )
    return DehnTwist.from_twistors(gog, {"t": 1, "g": 0})


def mutation_subdivision() -> DehnTwist:
    """Subdivide the loop through a rank-one vertex: invisible vertex."""
    F2 = Basis(["a", "b"])
    Fm = Basis(["s"])
    graph = Graph(
        ["v", "m"],
        ["e1", "e1bar", "e2", "e2bar"],
        {"e1": "e1bar", "e1bar": "e1", "e2": "e2bar", "e2bar": "e2"},
        {"e1": "m", "e1bar": "v", "e2": "v", "e2bar": "m"},
    )
    gog = GraphOfGroups(
        graph,
        {"v": F2, "m": Fm},
        {
            "e1": EdgeGroup(CYCLIC, Fm.word("s")),
            "e1bar": EdgeGroup(CYCLIC, F2.word("a")),
            "e2": EdgeGroup(CYCLIC, F2.word("b")),
            "e2bar": EdgeGroup(CYCLIC, Fm.word("s")),
        },
        ["e1", "e2"],
    )
    return DehnTwist.from_twistors(gog, {"e1": 1, "e2": 1})


def mutation_proper_power() -> DehnTwist:
    """Replace the image a by a^2: proper power."""
    F2 = Basis(["a", "b"])
    graph = Graph(["v"], ["t", "tbar"], {"t": "tbar", "tbar": "t"}, {"t": "v", "tbar": "v"})
    gog = GraphOfGroups(
        graph,
        {"v": F2},
        {"t": EdgeGroup(CYCLIC, F2.word("a^2")), "tbar": EdgeGroup(CYCLIC, F2.word("b"))},
        ["t"],
    )
    return DehnTwist.from_twistors(gog, {"t": 1})


def mutation_unused() -> DehnTwist:
    """Twistor zero on the loop: unused edge."""
    return loop_twist(0)


def mutation_bonded() -> DehnTwist:
    """A second loop with image a^2 and twistor +1: positively bonded to the
    first (and a^2 is a proper power, which that image forces as well)."""
    F2 = Basis(["a", "b"])
    graph = Graph(
        ["v"],
        ["t", "tbar", "s", "sbar"],
        {"t": "tbar", "tbar": "t", "s": "sbar", "sbar": "s"},
        {"t": "v", "tbar": "v", "s": "v", "sbar": "v"},
    )
    gog = GraphOfGroups(
        graph,
        {"v": F2},
        {
            "t": EdgeGroup(CYCLIC, F2.word("a")),
            "tbar": EdgeGroup(CYCLIC, F2.word("b")),
            "s": EdgeGroup(CYCLIC, F2.word("a^2")),
            "sbar": EdgeGroup(CYCLIC, F2.word("a b")),
        },
        ["t", "s"],
    )
    return DehnTwist.from_twistors(gog, {"t": 1, "s": 1})


# ---------------------------------------------------------------------------
# corpus with expectations


def corpus():
    """Named checks with expected outcomes and provenance tags."""
    from .dichotomy import classify
    from .efficiency import is_efficient
    from .growth import growth_table, iterated_product_table
    from .hconj import is_phi_zero
    from .twist import induced_automorphism

    checks = []

    def loop_growth():
        gog, tw, theta = loop_bundle()
        phi = induced_automorphism(theta, tw)
        tab = growth_table(phi, theta.basis.word("t"), 20)
        return all(v == k + 1 for k, v in tab.values)

    checks.append(("loop-growth-linear", "closed form k+1, brute-checked", loop_growth))

    def loop_iterated():
        gog, tw, theta = loop_bundle()
        phi = induced_automorphism(theta, tw)
        tab = iterated_product_table(phi, theta.basis.word("t"), 20)
        return all(v == k + k * (k - 1) // 2 for k, v in tab.values)

    checks.append(("loop-iterated-quadratic", "closed form k(k+1)/2, brute-checked", loop_iterated))

    def loop_efficient():
        return is_efficient(loop_twist()).efficient

    checks.append(("loop-efficient", "direct condition check", loop_efficient))

    for name, builder, cond in [
        ("mutation-valence-one", mutation_valence_one, lambda r: not r.minimal),
        ("mutation-subdivision", mutation_subdivision, lambda r: bool(r.invisible_vertices)),
        ("mutation-proper-power", mutation_proper_power, lambda r: bool(r.proper_power_edges)),
        ("mutation-unused", mutation_unused, lambda r: bool(r.unused_edges)),
        (
            "mutation-bonded",
            mutation_bonded,
            lambda r: any(k == "positive" for (_, _, k) in r.bonded_pairs),
        ),
    ]:
        def run(builder=builder, cond=cond):
            r = is_efficient(builder())
            return (not r.efficient) and cond(r)

        checks.append((name, "constructed to fail one condition", run))

    def hzero_examples():
        gog, tw, theta = loop_bundle()
        F3 = theta.basis
        return (
            is_phi_zero(tw, theta, F3.word("t a^5 t^-1 b"))
            and is_phi_zero(tw, theta, F3.word("b"))
            and not is_phi_zero(tw, theta, F3.word("t"))
        )

    checks.append(("loop-phi-zero", "D-reduction, cross-checked by search", hzero_examples))

    def case1():
        return classify(dichotomy_spec("b"), verify_N=64).verdict == LINEAR

    def case2():
        c = classify(dichotomy_spec("t"), verify_N=64)
        return c.verdict == QUADRATIC and list(c.offending_edges) == ["f"]

    checks.append(("dichotomy-case1-linear", "correction b is a vertex element", case1))
    checks.append(("dichotomy-case2-quadratic", "correction t is not locally zero", case2))
    return checks


def run_corpus():
    """Execute all fixture checks; returns (name, provenance, passed) rows."""
    rows = []
    for name, provenance, run in corpus():
        try:
            ok = bool(run())
        except Exception:
            ok = False
        rows.append((name, provenance, ok))
    return rows
