"""Flip the diagonal of a quadrilateral and push even monomials across.

Prints each Laurent entry of the transition table, its image, and whether
flipping back returns it.
"""
from skeintrace import complex as cx
from skeintrace import trace2d
from skeintrace.qtorus import transport


def main():
    tau = cx.build_surface(cx.FLIP_QUAD)
    tau2 = cx.flip(tau, "x")
    src = tau.sqts_torus(allow_boundary=True)
    roles = trace2d.flip_roles(tau, "x")
    print("before:", tau.triangles)
    print("after: ", tau2.triangles)
    for key in sorted(trace2d.flip_table()):
        g = [0] * src.rank
        for r, x in zip(("y", "z", "x", "v", "w"), key):
            g[src.index(roles[r])] += x
        m = src.weyl([tuple(x if i == j else 0 for i in range(src.rank)) for j, x in enumerate(g) if x])
        try:
            img = trace2d.flip_even(tau, "x", m)
        except trace2d.NonLaurentImage:
            print(f"{m}  ->  (not Laurent)")
            continue
        try:
            back = transport(trace2d.flip_even(tau2, "x'", img, "x"), src)
            tag = "  round trip ok" if back == m else "  round trip FAILED"
        except trace2d.FlipError:
            tag = ""
        print(f"{m}  ->  {img}{tag}")


if __name__ == "__main__":
    main()
