import sys

from coarsesel.graphs import Graph


def detour_graph(rays=20, k=4, q=3, detour=2, margin=2):
    """Rays A and C joined by a k-edge path T, plus a short detour from a_q to c_q.

    The detour keeps T geodesic (2q + detour >= k) but brings far parts of
    the two rays close together.  Returns the graph, A, C, T and a finite
    set H separating A from C.
    """
    A = [("a", i) for i in range(rays + 1)]
    C = [("c", i) for i in range(rays + 1)]
    T = [A[0]] + [("t", j) for j in range(1, k)] + [C[0]]
    D = [A[q]] + [("d", j) for j in range(1, detour)] + [C[q]]
    edges = list(zip(A, A[1:])) + list(zip(C, C[1:])) + list(zip(T, T[1:])) + list(zip(D, D[1:]))
    verts = sorted(set(A + C + T + D))
    g = Graph(verts, edges, {A[-1], C[-1]}, margin, "line with detour")
    H = set(T) | set(D[1:-1]) | {A[q]}
    return g, A, C, T, H


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n].line())
