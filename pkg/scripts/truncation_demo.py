"""Show the admissibility machinery on a small inadmissible graph.

Prints D(S), the completions A(S) and the exact Lambda coefficients for a
triangle with a pendant edge under contrived weights where cycles are bad.
"""

import argparse
from fractions import Fraction

from lowdeg_lab.graphs import LabeledGraph
from lowdeg_lab.truncation import PhiParams, a_set, dsub, is_admissible, lambda_expansion, log_phi


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--edges", default="1-2;2-3;1-3;3-4", help='edge list such as "1-2;2-3"')
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--b", type=float, default=-1.3)
    args = ap.parse_args()

    S = LabeledGraph(tuple(int(x) for x in e.split("-")) for e in args.edges.split(";"))
    pp = PhiParams(8, 4, Fraction(1, 10), a=args.a, b=args.b)
    print(f"S = {S.edges}, log Phi(S) = {log_phi(S, pp):.3f}, threshold {pp.threshold:.3f}")
    print(f"admissible: {is_admissible(S, pp)}")
    D = dsub(S, pp)
    print(f"D(S) = {D.edges}")
    print(f"{len(a_set(S, pp))} admissible completions")
    lam = lambda_expansion(S, pp)
    nonzero = {H: c for H, c in lam.items() if c != 0}
    print(f"{len(nonzero)} non-zero Lambda coefficients (q = 1/10, so sqrt(q/(1-q)) = 1/3):")
    for H, coeff in sorted(nonzero.items(), key=lambda kv: (kv[0].e_count, kv[0].edges)):
        print(f"  Lambda({', '.join(f'{u}-{v}' for u, v in H.edges) or 'empty'}) = {coeff}")


if __name__ == "__main__":
    main()
