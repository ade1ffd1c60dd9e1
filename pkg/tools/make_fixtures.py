"""Regenerate the fixture products under src/adplan/fixtures/.

Every fixture is written out as plain JSON so the files stay reviewable; this
script exists so the matrices do not have to be edited by hand.  Run from the
repository root:

    python tools/make_fixtures.py

Stack fixtures place all parts in one column: +z is blocked by everything
above, -z by everything below, lateral directions by every other part.
Printed optima (package oracle for small products, interval DP for stacks)
are the values frozen into the test suite.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from adplan import brute_force_optimal, product_from_dict
from stack_oracle import stack_optimal_fitness

OUT = ROOT / "src" / "adplan" / "fixtures"

LATERALS = ("+x", "-x", "+y", "-y")


def zeros(n: int) -> list[list[int]]:
    return [[0] * n for _ in range(n)]


def components(grippers_by_id: dict[int, list[str]]) -> list[dict]:
    return [
        {"id": i, "name": f"P{i + 1}", "grippers": grippers_by_id[i]}
        for i in sorted(grippers_by_id)
    ]


def stack_product(
    name: str,
    grippers_by_id: dict[int, list[str]],
    catalog: list[str],
    columns: list[list[int]],
    directions: tuple[str, ...] = ("+z", "-z"),
) -> dict:
    n = len(grippers_by_id)
    assert sorted(p for col in columns for p in col) == list(range(n))
    pos = {}
    col_of = {}
    for c, col in enumerate(columns):
        for k, part in enumerate(col):
            pos[part] = k
            col_of[part] = c
    interference = {d: zeros(n) for d in directions}
    contact = {d: zeros(n) for d in directions}
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            same_col = col_of[i] == col_of[j]
            if "+z" in interference and same_col and pos[j] > pos[i]:
                interference["+z"][i][j] = 1
            if "-z" in interference and same_col and pos[j] < pos[i]:
                interference["-z"][i][j] = 1
            for lat in LATERALS:
                if lat in interference:
                    interference[lat][i][j] = 1
            if "+z" in contact and same_col and pos[j] == pos[i] + 1:
                contact["+z"][i][j] = 1
            if "-z" in contact and same_col and pos[j] == pos[i] - 1:
                contact["-z"][i][j] = 1
    return {
        "name": name,
        "components": components(grippers_by_id),
        "directions": list(directions),
        "interference": interference,
        "contact": contact,
        "connection": {d: zeros(n) for d in directions},
        "grippers": catalog,
    }


def plain_product(
    name: str,
    grippers_by_id: dict[int, list[str]],
    catalog: list[str],
    directions: list[str],
    interference: dict[str, list[list[int]]],
    contact: dict[str, list[list[int]]] | None = None,
) -> dict:
    n = len(grippers_by_id)
    for d in directions:
        interference.setdefault(d, zeros(n))
    return {
        "name": name,
        "components": components(grippers_by_id),
        "directions": directions,
        "interference": interference,
        "contact": contact or {d: zeros(n) for d in directions},
        "connection": {d: zeros(n) for d in directions},
        "grippers": catalog,
    }


def chain_interference(n: int) -> list[list[int]]:
    # part i must leave before part i+1
    mat = zeros(n)
    for i in range(1, n):
        mat[i][i - 1] = 1
    return mat


def build_all() -> dict[str, dict]:
    fixtures: dict[str, dict] = {}

    # -- small oracle fixtures (n <= 6) ------------------------------------

    fixtures["chain3"] = plain_product(
        "chain3",
        {0: ["G1"], 1: ["G1", "G2"], 2: ["G2"]},
        ["G1", "G2"],
        ["+y"],
        {"+y": chain_interference(3)},
        {"+y": [[0, 1, 0], [0, 0, 1], [0, 0, 0]]},
    )

    fixtures["free4"] = plain_product(
        "free4",
        {0: ["G1"], 1: ["G1"], 2: ["G2"], 3: ["G1", "G2"]},
        ["G1", "G2"],
        ["+x", "-x"],
        {},
    )

    fixtures["stack4"] = stack_product(
        "stack4",
        {0: ["G1"], 1: ["G2"], 2: ["G1"], 3: ["G2"]},
        ["G1", "G2"],
        [[0, 1, 2, 3]],
    )

    fixtures["stack5"] = stack_product(
        "stack5",
        {0: ["G1"], 1: ["G1"], 2: ["G2"], 3: ["G3"], 4: ["G3"]},
        ["G1", "G2", "G3"],
        [[0, 1, 2, 3, 4]],
    )

    # interior part 4 is blocked by every other part in both directions
    cage = zeros(5)
    for j in range(4):
        cage[4][j] = 1
    fixtures["cage5"] = plain_product(
        "cage5",
        {i: ["G1"] for i in range(5)},
        ["G1"],
        ["+z", "-z"],
        {"+z": [row[:] for row in cage], "-z": [row[:] for row in cage]},
    )

    # forced order chain with a decoy direction that is blocked for everyone
    full = [[1 if i != j else 0 for j in range(5)] for i in range(5)]
    fixtures["chain5"] = plain_product(
        "chain5",
        {0: ["G1"], 1: ["G2"], 2: ["G1", "G2"], 3: ["G2"], 4: ["G1"]},
        ["G1", "G2"],
        ["+y", "-x"],
        {"+y": chain_interference(5), "-x": full},
    )

    fixtures["stack6"] = stack_product(
        "stack6",
        {0: ["G1"], 1: ["G1"], 2: ["G2"], 3: ["G2"], 4: ["G1"], 5: ["G1"]},
        ["G1", "G2"],
        [[0, 1, 2, 3, 4, 5]],
    )

    # two short columns side by side
    fixtures["twin6"] = stack_product(
        "twin6",
        {0: ["G1"], 1: ["G1"], 2: ["G2"], 3: ["G2"], 4: ["G2"], 5: ["G1"]},
        ["G1", "G2"],
        [[0, 1, 5], [2, 3, 4]],
    )

    # two precedence pairs along +x, one extra along -z
    inter_x = zeros(5)
    inter_x[1][0] = 1  # P1 before P2 along +x
    inter_x[3][2] = 1  # P3 before P4 along +x
    inter_z = zeros(5)
    inter_z[3][2] = 1  # P3 before P4 along -z as well
    inter_z[1][4] = 1  # P5 before P2 along -z
    fixtures["mixed5"] = plain_product(
        "mixed5",
        {0: ["G1"], 1: ["G1", "G2"], 2: ["G2"], 3: ["G2"], 4: ["G1"]},
        ["G1", "G2"],
        ["+x", "-z"],
        {"+x": inter_x, "-z": inter_z},
    )

    fixtures["clamp6"] = stack_product(
        "clamp6",
        {0: ["G2"], 1: ["G1"], 2: ["G1"], 3: ["G3"], 4: ["G3"], 5: ["G2"]},
        ["G1", "G2", "G3"],
        [[0, 1, 2, 3, 4, 5]],
    )

    # -- case study products ------------------------------------------------

    p1_grips = {
        0: ["G1", "G2", "G4"],
        1: ["G1", "G2", "G4"],
        2: ["G1", "G2", "G3"],
        3: ["G3"],
        4: ["G1", "G2", "G4"],
        5: ["G1", "G2", "G4"],
        6: ["G1", "G2", "G4"],
        7: ["G3"],
    }
    # two columns, bottom to top: [P1 P2 P5 P6 P7] and [P3 P4 P8]
    p1_columns = [[0, 1, 4, 5, 6], [2, 3, 7]]
    fixtures["product1"] = stack_product(
        "product1",
        p1_grips,
        ["G1", "G2", "G3", "G4"],
        p1_columns,
        directions=("+x", "-x", "+y", "-y", "+z", "-z"),
    )

    p2_grips = {
        0: ["G1", "G2"],
        1: ["G3"],
        2: ["G6"],
        3: ["G1", "G2", "G4"],
        4: ["G1", "G3"],
        5: ["G1", "G4"],
        6: ["G1", "G2"],
        7: ["G3", "G4"],
        8: ["G3"],
        9: ["G5"],
        10: ["G1", "G2", "G4"],
        11: ["G3"],
        12: ["G3"],
        13: ["G3", "G4"],
        14: ["G7"],
        15: ["G7"],
        16: ["G2"],
        17: ["G1", "G2", "G5"],
        18: ["G8"],
    }
    # four columns, bottom to top:
    #   [P5 P8 P14 P2 P9 P12 P13]  (share G3)
    #   [P18 P1 P7 P17 P4 P11]     (share G2)
    #   [P10 P3 P15 P16]           (special grippers)
    #   [P6 P19]
    p2_columns = [
        [4, 7, 13, 1, 8, 11, 12],
        [17, 0, 6, 16, 3, 10],
        [9, 2, 14, 15],
        [5, 18],
    ]
    fixtures["product2"] = stack_product(
        "product2",
        p2_grips,
        [f"G{i}" for i in range(1, 9)],
        p2_columns,
        directions=("+z", "-z"),
    )

    return fixtures


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    fixtures = build_all()
    for name, data in fixtures.items():
        model = product_from_dict(data)  # fail fast on an invalid fixture
        path = OUT / f"{name}.json"
        path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
        line = f"{path.name}: {model.n} components"
        if model.n <= 6:
            res = brute_force_optimal(model)
            line += (
                f", oracle optimum {res.optimal_fitness}"
                f" ({len(res.optimal_plans)}{'+' if res.truncated else ''} plans,"
                f" {res.states_explored} states)"
            )
        print(line)

    for name in ("product1", "product2"):
        data = fixtures[name]
        allowed = {c["id"]: tuple(c["grippers"]) for c in data["components"]}
        cols = _columns_of(data)
        print(f"{name}: stack DP optimum {stack_optimal_fitness(cols, allowed)}")

    write_experiment_specs()


# experiment spec files shipped next to the products; targets are the frozen
# optima printed above, hashes pin the exact fixture bytes
EXPERIMENTS = {
    "experiment_protocol19.json": {
        "product": "product2.json",
        "modes": ["A", "B"],
        "runs": 20,
        "seed": 0,
        "population": 80,
        "mutation": 0.8,
        "crossover": 0.4,
        "generations": 300,
        "weights": [2, 1, 1],
        "successTarget": 68.0,
    },
    "experiment_cage5.json": {
        "product": "cage5.json",
        "modes": ["A", "B", "C", "D"],
        "runs": 20,
        "seed": 0,
        "population": 80,
        "mutation": 0.8,
        "crossover": 0.4,
        "generations": 300,
        "weights": [2, 1, 1],
        "successTarget": 18.0,
    },
}


def write_experiment_specs() -> None:
    from adplan.bench import fixture_hash, spec_from_json

    for fname, spec in EXPERIMENTS.items():
        spec = dict(spec)
        spec["fixtureHash"] = fixture_hash(OUT / spec["product"])
        path = OUT / fname
        path.write_text(json.dumps(spec, indent=2) + "\n", encoding="utf-8")
        spec_from_json(path)  # fail fast on an invalid spec
        print(f"{path.name}: experiment spec for {spec['product']}")


def _columns_of(data: dict) -> list[list[int]]:
    # recover columns from the vertical interference matrices: parts share a
    # column iff one blocks the other along +z; position = parts below it
    up = data["interference"]["+z"]
    down = data["interference"]["-z"]
    n = len(up)
    seen = [False] * n
    cols = []
    for i in range(n):
        if seen[i]:
            continue
        todo = [i]
        seen[i] = True
        members = []
        while todo:
            a = todo.pop()
            members.append(a)
            for b in range(n):
                if not seen[b] and (up[a][b] or up[b][a]):
                    seen[b] = True
                    todo.append(b)
        members.sort(key=lambda p: sum(down[p]))
        cols.append(members)
    return cols


if __name__ == "__main__":
    main()
