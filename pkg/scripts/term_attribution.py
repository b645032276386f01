"""S-wave phase shift of Method A split by operator term, under both exchange readings.

    python3 scripts/term_attribution.py [k] [alpha]
"""

import sys

from eephase.operator_amplitude import CROSS_MOMENTUM_TERMS, N_TERMS, SAME_MOMENTUM_TERMS
from eephase.partial_wave import phase_shift
from eephase.report import READING_EXCHANGE, READING_PLAIN

GROUPS = {
    "same momentum (q.s1)(q.s2), (p.s1)(p.s2)": SAME_MOMENTUM_TERMS,
    "cross momentum (p.s1)(q.s2), (q.s1)(p.s2)": CROSS_MOMENTUM_TERMS,
    "charge only (slot 0)": (0,),
    "all terms": tuple(range(N_TERMS)),
}


def main(k=0.5, alpha=1.0):
    k, alpha = float(k), float(alpha)
    print(f"k = {k:g} m, alpha = {alpha:g} m")
    for mode in (READING_PLAIN, READING_EXCHANGE):
        print(mode.descriptor)
        for name, slots in GROUPS.items():
            d = phase_shift("A", mode, 0, k, alpha, term_mask=slots)
            print(f"  {name:<45} {d.delta:+.6e}   (rounding scale {d.delta_scale:.1e})")
        for i in range(N_TERMS):
            d = phase_shift("A", mode, 0, k, alpha, term_mask=[i])
            print(f"    slot {i:>2} {d.delta:+.6e}")


if __name__ == "__main__":
    main(*sys.argv[1:])
