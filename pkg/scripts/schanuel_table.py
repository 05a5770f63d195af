"""Print N(P^n(F), B) / B^(n+1) next to the Peyre constant for the supported fields.

A quick look at how fast the Schanuel ratios settle; exact counts come from
the Moebius route.
"""
import argparse

from weilheights.enumeration import moebius_counts_all
from weilheights.nfcore import builtin_field
from weilheights.piclattice import preset, trivial_action
from weilheights.tamagawa import ProjectiveVariety, TamagawaConfig, TamagawaInput, peyre_constant


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--field", default="Q", help="Q, Q(i) or Q(sqrt(-3))")
    ap.add_argument("-n", type=int, default=1)
    ap.add_argument("--bmax", type=int, default=100000)
    ap.add_argument("--prime-cutoff", type=int, default=10000)
    args = ap.parse_args()
    F = builtin_field(args.field)
    inp = TamagawaInput(ProjectiveVariety(F, args.n, []), trivial_action(preset("Pn", n=args.n)))
    c = peyre_constant(inp, TamagawaConfig(prime_cutoff=args.prime_cutoff)).c
    counts = moebius_counts_all(F, args.n, args.bmax)
    print(f"P^{args.n} over {F.name}: alpha*beta*tau = {c:.8f}")
    B = 10
    while B <= args.bmax:
        r = int(counts[B]) / B ** (args.n + 1)
        print(f"B = {B:>9d}  N = {int(counts[B]):>14d}  N/B^{args.n + 1} = {r:.8f}  rel = {r / c - 1:+.2e}")
        B *= 10


if __name__ == "__main__":
    main()
