"""f-vectors of channel cones at k = 3, 4, 5."""

import time

from tropfact.factorization import ChannelSpec, factorization_cone


def main():
    for text, kind in (("12|34|56", "I"), ("18|23|45|67", "I"), ("18|23|45|67", "II"),
                       ("12|34|56|78|9,10", "span")):
        t = time.perf_counter()
        fv = factorization_cone(ChannelSpec.parse(text), kind).f_vector()
        print(f"{text:18} {kind:5} {fv}  ({time.perf_counter() - t:.1f}s)")


if __name__ == "__main__":
    main()
