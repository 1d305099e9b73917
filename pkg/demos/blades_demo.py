"""Kinematic blades, their planar expansions and the subset bijection."""

from tropfact.blades import eta_of_dosp, eta_of_subset, expand_in_planar_basis, height_of_dosp
from tropfact.combinatorics import dosp_of_subset, parse_dosp


def main():
    for text in ("12_1|345_1", "14_1|26_1|35_1", "712_1|34_1|56_1"):
        d = parse_dosp(text)
        print(f"eta{d.label()} = {eta_of_dosp(d)}")
        print("  planar:", expand_in_planar_basis(height_of_dosp(d)).format("eta"))
    for J, n in (((2, 5, 8, 9), 9), ((2, 4, 7, 9), 9)):
        d = dosp_of_subset(J, n)
        same = eta_of_dosp(d) == eta_of_subset(J, n)
        print(f"{J} -> {d.label()}  equal forms: {same}")


if __name__ == "__main__":
    main()
