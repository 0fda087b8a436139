"""Bundled (P, lambda) fixtures and their JSON file format.

File format::

    {"name": "T2", "dim": 2, "facets": 4, "vertices": [[0, 2], ...],
     "lambda": [[1, 0], [1, 0], [0, 1], [0, 1]],
     "source": "cube(2)",
     "expected": {"orientable": true, "betti_X": [1, 2, 1], "betti_Q": [1, 0, 1],
                  "provenance": "..."}}

``lambda`` holds one bit-row per facet.  ``expected`` is optional.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from .charfun import CharacteristicFunction
from .gf2 import GF2Matrix, GF2Vector
from .polytope import PolytopeSchemaError, SimplePolytope, cube, polygon, product, segment, simplex

__all__ = [
    "FixtureSpec",
    "FixtureSchemaError",
    "builtin_fixtures",
    "get_fixture",
    "load_fixture",
    "load_fixture_file",
    "load_fixture_dir",
    "export_fixtures",
    "random_polygon_fixture",
    "random_valid_fixture",
    "rp_fixture",
    "torus_fixture",
]


class FixtureSchemaError(ValueError):
    pass


@dataclass
class FixtureSpec:
    name: str
    polytope: SimplePolytope
    lam: CharacteristicFunction
    expected: dict = field(default_factory=dict)
    source: str = ""

    def to_dict(self) -> dict:
        out = {"name": self.name, **self.polytope.to_dict(), "lambda": self.lam.to_lists()}
        if self.source:
            out["source"] = self.source
        if self.expected:
            out["expected"] = self.expected
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _unit(i: int, n: int) -> int:
    return 1 << i


def rp_fixture(n: int) -> FixtureSpec:
    """RP^n over the n-simplex: e_1, ..., e_n and their sum."""
    rows = [_unit(i, n) for i in range(n)] + [(1 << n) - 1]
    orientable = n % 2 == 1
    expected = {
        "orientable": orientable,
        "betti_X": [1] * (n + 1),
        "provenance": "h(simplex) = (1,...,1); orientable iff the sum of n ones is odd",
    }
    if orientable:
        expected["betti_Q"] = [1] + [0] * (n - 1) + [1]
    return FixtureSpec(f"RP{n}", simplex(n), CharacteristicFunction.from_rows(rows, n), expected, f"simplex({n})")


def torus_fixture(n: int) -> FixtureSpec:
    """T^n over the n-cube: both facets of pair i get e_i."""
    rows = [_unit(i // 2, n) for i in range(2 * n)]
    from math import comb

    expected = {
        "orientable": True,
        "betti_X": [comb(n, i) for i in range(n + 1)],
        "betti_Q": [1] + [0] * (n - 1) + [1],
        "provenance": "product of circles; T^n/G is a sphere; h(cube) = binomials",
    }
    return FixtureSpec(f"T{n}", cube(n), CharacteristicFunction.from_rows(rows, n), expected, f"cube({n})")


def _polygon_fixture(name, colors, expected, source):
    m = len(colors)
    return FixtureSpec(name, polygon(m), CharacteristicFunction.from_rows(colors, 2), expected, source)


def builtin_fixtures() -> list[FixtureSpec]:
    e1, e2, e12 = 0b01, 0b10, 0b11
    out = [rp_fixture(n) for n in range(1, 7)]
    out += [torus_fixture(n) for n in (1, 2, 3, 4)]
    out.append(
        _polygon_fixture(
            "M2",
            [e1, e2] * 3,
            {
                "orientable": True,
                "betti_X": [1, 4, 1],
                "betti_Q": [1, 0, 1],
                "provenance": "genus-2 surface over the hexagon (alternating coloring); M_g/Z2 = S^2",
            },
            "polygon(6)",
        )
    )
    out.append(
        _polygon_fixture(
            "hexagon_3color",
            [e1, e2, e12] * 2,
            {
                "orientable": False,
                "betti_X": [1, 4, 1],
                "provenance": "h(hexagon) = (1,4,1); xi(e1+e2) = 0 rules out orientability",
            },
            "polygon(6)",
        )
    )
    out.append(
        _polygon_fixture(
            "pentagon_3color",
            [e1, e2, e1, e2, e12],
            {
                "orientable": False,
                "betti_X": [1, 3, 1],
                "provenance": "odd polygon cannot be 2-colored; h(pentagon) = (1,3,1)",
            },
            "polygon(5)",
        )
    )
    # triangle x segment; side facets e1, e2, e1+e2+e3, caps e3
    prism = product(polygon(3), segment())
    out.append(
        FixtureSpec(
            "prism_orientable",
            prism,
            CharacteristicFunction.from_rows([0b001, 0b010, 0b111, 0b100, 0b100], 3),
            {
                "orientable": True,
                "betti_X": [1, 2, 2, 1],
                "betti_Q": [1, 0, 0, 1],
                "provenance": "h(prism) = (1,2,2,1); xi = (1,1,1) hits every vector",
            },
            "product(polygon(3), segment)",
        )
    )
    return out


def get_fixture(name: str) -> FixtureSpec:
    for fx in builtin_fixtures():
        if fx.name == name:
            return fx
    raise KeyError(f"no bundled fixture named {name!r}")


def load_fixture(data: dict, name: str | None = None) -> FixtureSpec:
    if not isinstance(data, dict):
        raise FixtureSchemaError("fixture: expected a JSON object")
    try:
        P = SimplePolytope.from_dict(data)
    except PolytopeSchemaError as exc:
        raise FixtureSchemaError(str(exc)) from None
    if "lambda" not in data:
        raise FixtureSchemaError("fixture: missing key 'lambda'")
    rows = data["lambda"]
    if not isinstance(rows, list):
        raise FixtureSchemaError("lambda: expected a list of bit-rows")
    parsed = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise FixtureSchemaError(f"lambda[{i}]: expected a list of 0/1 entries")
        if len(row) != P.dim:
            raise FixtureSchemaError(f"lambda[{i}]: expected {P.dim} entries, got {len(row)}")
        for k, b in enumerate(row):
            if b not in (0, 1) or isinstance(b, bool):
                raise FixtureSchemaError(f"lambda[{i}][{k}]: expected 0 or 1, got {b!r}")
        parsed.append(GF2Vector.from_bits(row).value if row else 0)
    if len(parsed) != P.n_facets:
        raise FixtureSchemaError(f"lambda: expected {P.n_facets} rows (one per facet), got {len(parsed)}")
    expected = data.get("expected", {})
    if not isinstance(expected, dict):
        raise FixtureSchemaError("expected: must be an object")
    lam = CharacteristicFunction(GF2Matrix(tuple(parsed), P.dim))
    return FixtureSpec(data.get("name") or name or "fixture", P, lam, expected, data.get("source", ""))


def load_fixture_file(path: str | Path) -> FixtureSpec:
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FixtureSchemaError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return load_fixture(data, name=path.stem)


def load_fixture_dir(directory: str | Path) -> list[FixtureSpec]:
    return [load_fixture_file(p) for p in sorted(Path(directory).glob("*.json"))]


def export_fixtures(directory: str | Path, fixtures: list[FixtureSpec] | None = None) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for fx in fixtures if fixtures is not None else builtin_fixtures():
        path = directory / f"{fx.name}.json"
        path.write_text(fx.to_json())
        written.append(path)
    return written


# -- random instances -----------------------------------------------------------


def random_polygon_fixture(rng: random.Random, m_max: int = 8) -> FixtureSpec:
    """Random m-gon (3 <= m <= m_max) with adjacent edges colored by distinct nonzero vectors."""
    while True:
        m = rng.randint(3, m_max)
        colors = [rng.choice((1, 2, 3)) for _ in range(m)]
        if all(colors[i] != colors[(i + 1) % m] for i in range(m)):
            return FixtureSpec(
                f"random_polygon_{m}_" + "".join(map(str, colors)),
                polygon(m),
                CharacteristicFunction.from_rows(colors, 2),
                source=f"polygon({m})",
            )


def random_valid_fixture(rng: random.Random, max_facets: int = 10, tries: int = 2000) -> FixtureSpec:
    """Random (P, lambda) satisfying the star condition with at most max_facets facets."""
    from .charfun import check_star

    shapes = [
        ("polygon", lambda: polygon(rng.randint(3, min(8, max_facets)))),
        ("simplex", lambda: simplex(rng.randint(1, 4))),
        ("cube", lambda: cube(rng.randint(2, 4))),
        ("prism", lambda: product(polygon(rng.randint(3, max(3, min(6, max_facets - 2)))), segment())),
    ]
    for _ in range(tries):
        label, make = rng.choice(shapes)
        P = make()
        if P.n_facets > max_facets:
            continue
        n = P.dim
        rows = [rng.randrange(1, 1 << n) for _ in range(P.n_facets)]
        lam = CharacteristicFunction.from_rows(rows, n)
        if check_star(P, lam):
            return FixtureSpec(f"random_{label}_{n}_" + "-".join(map(str, rows)), P, lam, source=label)
    raise RuntimeError("could not sample a valid characteristic function")
