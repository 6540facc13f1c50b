"""Write OBJ surfaces for a small gallery of symmetry-adapted harmonics.

Each surface is ``r = 0.75 + 0.25 F / max|F|`` over the sphere, so
positive lobes bulge out and negative lobes dent in.  The default gallery
holds the lowest invariant of each group plus one vector-like function.

Usage::

    python3 scripts/make_surfaces.py --out surfaces [--grid 91x180]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from symharm import __version__
from symharm.basis import assemble_basis
from symharm.surface import MeshSpec, build_mesh, is_watertight, local_extrema, parse_grid, write_obj

# (group, p, l, n, j)
GALLERY = [
    ("T", 1, 3, 1, 1),
    ("O", 1, 4, 1, 1),
    ("I", 1, 6, 1, 1),
    ("I", 1, 10, 1, 1),
    ("I", 2, 1, 1, 1),
    ("I", 5, 6, 1, 3),
]


def find_block(group: str, p: int, l: int, n: int):
    for block in assemble_basis(group, l).real:
        if block.p == p and block.n == n:
            return block
    raise LookupError(f"no block p={p} n={n} at l={l} for {group}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="surfaces")
    ap.add_argument("--grid", default="91x180")
    args = ap.parse_args(argv)
    nt, nphi = parse_grid(args.grid)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for group, p, l, n, j in GALLERY:
        mesh = build_mesh(find_block(group, p, l, n), j, MeshSpec(nt, nphi))
        name = f"surface_{group}_l{l}_p{p}_n{n}_j{j}.obj"
        comment = f"symharm {__version__} group={group} p={p} l={l} n={n} j={j}"
        write_obj(mesh, out / name, comment)
        maxima, minima = local_extrema(mesh)
        closed = "closed" if is_watertight(mesh.faces) else "OPEN"
        print(f"{name}: {len(mesh.vertices)} vertices, {closed}, {len(maxima)} maxima, {len(minima)} minima")
    return 0


if __name__ == "__main__":
    sys.exit(main())
