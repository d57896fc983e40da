"""Regenerate the surface fixture files under surfaces/ from the builders."""

import json
import math
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from singsurf import builders
from singsurf.surface_io import document_dict_from_surface, dump_document, FORMAT

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "surfaces")


def main():
    os.makedirs(OUT, exist_ok=True)
    for name, make in builders.builtin_surfaces().items():
        doc = document_dict_from_surface(make())
        path = os.path.join(OUT, f"{name}.json")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(dump_document(doc))
        print(f"wrote {path}")

    right = math.pi / 2
    third = math.pi / 3
    poly = {
        "cube-polyhedron.json": {
            "format": FORMAT,
            "polyhedron": {
                "vertices": [{"id": f"v{k}", "angles": [right, right, right]}
                             for k in range(8)],
                "chi": 2,
            },
        },
        "tetrahedron-polyhedron.json": {
            "format": FORMAT,
            "polyhedron": {
                "vertices": [{"id": f"v{k}", "angles": [third, third, third]}
                             for k in range(4)],
                "chi": 2,
            },
        },
    }
    for fname, doc in poly.items():
        path = os.path.join(OUT, fname)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(json.dumps(doc, indent=2) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
