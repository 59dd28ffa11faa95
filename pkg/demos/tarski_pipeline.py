"""From a doubling set to a verified paradoxical decomposition of F_2.

The pipeline runs on a window (core = ball(4), halo = ball(5)): bipartite
graph, perfect (1,2)-matching, 2-to-1 map, then the four labelled pieces
whose images tile the space twice over. The final section shows why this is
incompatible with a semi-invariant probability measure.
"""

from fractions import Fraction

import cellspaces as cs


def main() -> None:
    f2 = cs.space_by_name("free:2")
    g = f2.group
    E = cs.ExpansionSet.of([f2.coset(e) for e in g.ball(1)])
    window = f2.ball_window(4, 5)
    print(f"window: core |B_4| = {len(window.core)}, halo |B_5| = {len(window.halo)}")

    graph = cs.build_graph(f2, E, window)
    print(
        f"graph: {len(graph.left)} left, {len(graph.right)} right, "
        f"{sum(graph.right_interior)} interior right vertices"
    )

    matching = cs.harem_matching(graph, 2)
    assert isinstance(matching, cs.HaremMatching)
    print(f"perfect (1,2)-matching with {len(matching.pairs)} edges")

    ttm = cs.two_to_one_from_matching(graph, matching)
    D = cs.decomposition_from_map(f2, ttm, E, window)
    for label, e, piece in D.pieces():
        print(f"  piece {label}[{g.describe_element(e.key)}]: {len(piece)} points")

    report = cs.verify_decomposition(f2, D)
    print(f"verified: {report.passed} (interior of {len(report.interior)} points)")
    for check in report.checks:
        print(f"  {check.name}: {'ok' if check.ok else check.witness}")

    # the closed-form decomposition by last letters gives the same picture
    closed = cs.canonical_free_decomposition(f2, window)
    print(f"closed-form verified: {cs.verify_decomposition(f2, closed).passed}")

    # measure contradiction: pieces sum to 2, images to at most 1
    pts = tuple(window.core)
    mu = cs.FAMeasure.uniform(cs.Window(pts, pts, "core"))
    lhs, rhs = cs.tarski_contradiction(f2, closed, mu)
    print(
        f"mass of piece images = {lhs}, mass of pieces = {rhs}; "
        "a semi-invariant measure would force these to be equal"
    )


if __name__ == "__main__":
    main()
