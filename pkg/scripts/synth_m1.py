"""Smallest profiles realizing the first expected margin graph.

Compares three ranking pools: the rankings of the shipped P1 profile, all 120
linear orders, and the direct pairwise construction. Also prints the triangle
lower bound that any pool must respect.
"""

import itertools
import sys

from marginkit import shipped_file
from marginkit.formats import profile_to_text, read_edge_list, read_profile
from marginkit.margins import margin_matrix
from marginkit.profiles import enumerate_linear_orders
from marginkit.synth import mcgarvey_debord_realize, minimize_profile


def triangle_bound(m) -> int:
    """One voter adds at most 1 to the margin sum around a directed 3-cycle."""
    best = 0
    for x, y, z in itertools.permutations(m.candidates, 3):
        a, b, c = m[x, y], m[y, z], m[z, x]
        if a > 0 and b > 0 and c > 0:
            best = max(best, a + b + c)
    return best


def main() -> int:
    m1 = read_edge_list(shipped_file("P_M1.edges"))
    p1 = read_profile(shipped_file("P1.txt"))
    print(f"triangle lower bound: {triangle_bound(m1)} voters")
    for label, pool in (("P1 rankings", [r for r, _ in p1.ballots]), ("all linear orders", enumerate_linear_orders(m1.candidates))):
        res = minimize_profile(m1, pool, cap=219)
        assert margin_matrix(res.profile) == m1
        print(f"{label}: {res.total_voters} voters, optimal={res.optimal}, nodes explored={res.explored}")
    debord = mcgarvey_debord_realize(m1)
    print(f"pairwise construction: {debord.num_voters} voters")
    if "--show" in sys.argv:
        print(profile_to_text(minimize_profile(m1, enumerate_linear_orders(m1.candidates), cap=219).profile))
    return 0


if __name__ == "__main__":
    sys.exit(main())
