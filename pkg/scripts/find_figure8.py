"""Search two-tetrahedron gluings for the figure-eight knot complement.

Keeps gluings with two degree-six edges and H_1 = Z, then labels the faces
N, S, E, W so that the N/S edge types match the labelled diagram used by
``skeintrace.complex.figure8``.  Prints the first match as JSON.
"""
import json
import sys
from itertools import permutations

import sympy

from skeintrace.complex import Gluing, Mfld3Tri, OrientationClash

VS = ("0", "1", "2", "3")


def faces():
    return [tuple(v for v in VS if v != m) for m in VS]


def candidates():
    fs = faces()
    for perm in permutations(range(4)):
        maps_per_face = []
        for i, f in enumerate(fs):
            g = fs[perm[i]]
            maps_per_face.append([p for p in permutations(g)])
        yield from _choose(fs, perm, maps_per_face, 0, [])


def _choose(fs, perm, maps, i, acc):
    if i == 4:
        yield list(acc)
        return
    for img in maps[i]:
        acc.append(Gluing(f"g{i}", "Y", fs[i], "Z", img))
        yield from _choose(fs, perm, maps, i + 1, acc)
        acc.pop()


def oriented_gluings():
    for gls in candidates():
        try:
            yield Mfld3Tri({"Y": VS, "Z": VS}, gls)
        except OrientationClash:
            continue


def edge(face_a, face_b):
    return frozenset(set(face_a) & set(face_b))


def main():
    for T in oriented_gluings():
        if sorted(len(c) for c in T.edge_classes) != [6, 6]:
            continue
        # H_1 via Smith normal form of the oriented dual boundary maps
        if not _h1_is_z(T):
            continue
        for names in permutations("NSEW"):
            lab = {n: g for n, g in zip(names, T.gluings)}
            N, S = lab["N"], lab["S"]
            eY = edge(N.top_face, S.top_face)
            eZ = edge(N.bottom_face, S.bottom_face)
            if T.edge_type("Y", eY) != 2 or T.edge_type("Z", eZ) != 2:
                continue
            mS = T.vertex_map(S)
            yS = next(frozenset(e) for e in _face_edges(S.top_face) if T.edge_type("Y", e) == 0)
            if frozenset(mS[v] for v in yS) != eZ:
                continue
            mN = {w: v for v, w in T.vertex_map(N).items()}
            zN = next(frozenset(e) for e in _face_edges(N.bottom_face) if T.edge_type("Z", e) == 0)
            if frozenset(mN[v] for v in zN) != eY:
                continue
            spec = {"tetrahedra": [{"id": "Y", "vertices": list(VS)}, {"id": "Z", "vertices": list(VS)}],
                    "gluings": []}
            for n in "NSEW":
                g = lab[n]
                if n == "N":
                    inv = {w: v for v, w in T.vertex_map(g).items()}
                    spec["gluings"].append({"name": n, "face": ["Z", *g.bottom_face], "to": ["Y", *[inv[w] for w in g.bottom_face]]})
                else:
                    spec["gluings"].append({"name": n, "face": ["Y", *g.top_face], "to": ["Z", *g.bottom_face]})
            json.dump(spec, sys.stdout, indent=1)
            print()
            return 0
    print("no match", file=sys.stderr)
    return 1


def _face_edges(face):
    return [(face[0], face[1]), (face[1], face[2]), (face[0], face[2])]


def _h1_is_z(T):
    """Abelianised fundamental group, with face g0 in the spanning tree."""
    gl = T.gluings
    rels = []
    for cls in T.edge_classes:
        t, e = cls[0]
        u, v = sorted(e)
        w = next(x for x in T.tets[t] if x not in e)
        row = [0] * len(gl)
        cur = (t, frozenset((u, v)), w)
        for _ in range(len(cls)):
            t, e, w_in = cur
            w_out = next(x for x in T.tets[t] if x not in e and x != w_in)
            face = frozenset(e | {w_out})
            k, g = next((k, g) for k, g in enumerate(gl)
                        if (g.top == t and set(g.top_face) == face) or (g.bottom == t and set(g.bottom_face) == face))
            if g.top == t and set(g.top_face) == face:
                m = T.vertex_map(g)
                row[k] += 1
                nt = g.bottom
            else:
                m = {b: a for a, b in T.vertex_map(g).items()}
                row[k] -= 1
                nt = g.top
            cur = (nt, frozenset(m[x] for x in e), m[w_out])
        rels.append(row[1:])
    M = sympy.Matrix(rels)
    from sympy.matrices.normalforms import smith_normal_form
    snf = smith_normal_form(M, domain=sympy.ZZ)
    diag = [abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0]
    return len(gl) - 1 - len(diag) == 1 and all(x == 1 for x in diag)


if __name__ == "__main__":
    sys.exit(main())
