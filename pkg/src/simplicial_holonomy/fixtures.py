"""Built-in example inputs, each checked by its owning module when produced."""

from __future__ import annotations

import json
from itertools import combinations
from pathlib import Path

from . import deligne
from .chains import homology, normalized_complex, simplicial_chain_complex
from .forms import PolyMap, RationalForm
from .poly import Poly, RationalFunction
from .simpset import OrderedComplex, ordered_to_sset
from .vanest import unit_simplex


def boundary_complex(n: int) -> OrderedComplex:
    verts = [str(i) for i in range(n + 1)]
    return OrderedComplex(verts, [list(c) for c in combinations(verts, n)])


def torus7() -> OrderedComplex:
    """The 7-vertex torus: triangles ``{i, i+1, i+3}`` and ``{i, i+2, i+3}`` mod 7."""
    tris = []
    for i in range(7):
        for a, b in ((1, 3), (2, 3)):
            tris.append(sorted(str((i + d) % 7) for d in (0, a, b)))
    return OrderedComplex([str(i) for i in range(7)], tris)


def x_area_form() -> RationalForm:
    """``x dx^dy`` on the plane."""
    return RationalForm(2, 2, {(0, 1): RationalFunction.var(2, 0)})


def equator_loop() -> dict:
    return {"overlap": ["N", "S"], "circle": {"center": [0, 0], "radius": 1}, "samples": 256}


def betti(K: OrderedComplex, max_dim: int) -> list:
    C = normalized_complex(ordered_to_sset(K, max_dim + 1), max_dim + 1)
    return [homology(C, n).to_json() for n in range(max_dim + 1)]


def _checked_complex(K: OrderedComplex, expected: list) -> dict:
    got = [h["betti"] for h in betti(K, len(expected) - 1)]
    if got != expected:
        raise AssertionError(f"fixture homology {got} differs from {expected}")
    direct = simplicial_chain_complex(K, len(expected))
    if [homology(direct, n).betti for n in range(len(expected))] != expected:
        raise AssertionError("ordered-complex chains disagree with normalized chains")
    return K.to_json()


def _monopole(k: int) -> dict:
    cover, c = deligne.monopole(k)
    if cover.check_consistency() or not deligne.all_pass(deligne.verify_cocycle_deg1(cover, c)):
        raise AssertionError(f"monopole fixture k={k} is not a cocycle")
    return deligne.cochain_to_json(cover, c)


def _builders() -> dict:
    out = {
        "sphere2": lambda: _checked_complex(boundary_complex(3), [1, 0, 1]),
        "sphere3": lambda: _checked_complex(boundary_complex(4), [1, 0, 0, 1]),
        "torus7": lambda: _checked_complex(torus7(), [1, 2, 1]),
        "unit_triangle": lambda: unit_simplex(2).to_json(),
        "x_area_form": lambda: x_area_form().to_json(),
        "equator_loop": equator_loop,
        "equator_path": lambda: deligne.equator_path().to_json(),
    }
    for k in range(-2, 3):
        out[f"monopole_k{k}"] = (lambda k=k: _monopole(k))
    return out


NAMES = tuple(_builders())


def fixture(name: str) -> dict:
    builders = _builders()
    if name not in builders:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(NAMES)}")
    return builders[name]()


def write_fixture(name: str, directory: str | Path = ".") -> Path:
    path = Path(directory) / f"{name}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(fixture(name), indent=1, sort_keys=True) + "\n")
    return path
