"""Rays of the positive tropical Grassmannian from noncrossing positive roots."""

from tropfact.blades import expand_in_planar_basis
from tropfact.factorization import ray_from_noncrossing, split3_vector
from tropfact.polyhedra import is_positroidal, subdivision_from_height


def main():
    for coll, n in (([(1, 6, 9), (2, 5, 10)], 12),
                    ([(1, 4, 6, 7), (2, 3, 6, 8), (2, 4, 5, 8)], 8)):
        r = ray_from_noncrossing(coll, n)
        print(coll, f"cells={r.cells} ray={r.is_ray} complete_graph={r.complete_graph}")
        print("   planar:", expand_in_planar_basis(r.height).format("h"))
    h = split3_vector(4, 9, 15, 15)
    sub = subdivision_from_height(h)
    print("3-split (4,9,15):", expand_in_planar_basis(h).format("h"))
    print(f"   cells={len(sub.cells)} positroidal={is_positroidal(sub)}")


if __name__ == "__main__":
    main()
