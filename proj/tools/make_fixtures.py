#!/usr/bin/env python3
"""Regenerates the JSON inputs under data/. Deterministic (fixed seeds)."""
import json
import pathlib
import random

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def perm(rng, n):
    p = list(range(1, n + 1))
    rng.shuffle(p)
    return p


def sorted_simplex(rng, k):
    x = [rng.expovariate(1.0) + 0.05 for _ in range(k)]
    s = sum(x)
    return sorted((v / s for v in x), reverse=True)


def base_doc(experts, attributes, alternatives, rng):
    return {
        "experts": [{"id": e, "rank": r} for e, r in experts],
        "attributes": attributes,
        "alternatives": alternatives,
        "attribute_ranks": {e: perm(rng, len(attributes)) for e, _ in experts},
        "alternative_ranks": {
            e: {a: perm(rng, len(alternatives)) for a in attributes} for e, _ in experts
        },
    }


def ordered_3x5x10():
    rng = random.Random(1)
    experts = [("E1", 1), ("E2", 2), ("E3", 3)]
    attrs = [f"C{j}" for j in range(1, 6)]
    alts = [f"A{k}" for k in range(1, 11)]
    doc = base_doc(experts, attrs, alts, rng)
    # Every expert ranks attributes 1..5 in order so that the closed form
    # reduces to the harmonic-number product.
    doc["attribute_ranks"] = {e: [1, 2, 3, 4, 5] for e, _ in experts}
    doc["structures"] = {"default": {"type": "ROC"}}
    return doc


# Structure counts per attribute for the five-expert case, in the order
# RS, REF, RR, SR, ROC, NEUTRAL, CARA, HARA, SSHAPE.
CASE_COUNTS = {
    "C1": [0, 0, 0, 0, 1, 1, 0, 1, 2],
    "C2": [0, 1, 0, 0, 2, 1, 0, 1, 0],
    "C3": [0, 0, 1, 0, 1, 0, 3, 0, 0],
    "C4": [1, 0, 1, 1, 0, 0, 1, 1, 0],
    "C5": [2, 0, 0, 0, 1, 0, 1, 1, 0],
    "C6": [1, 0, 0, 2, 2, 0, 0, 0, 0],
}
KINDS = [
    {"type": "RS"},
    {"type": "REF", "z": 1.17},
    {"type": "RR"},
    {"type": "SR"},
    {"type": "ROC"},
    {"type": "NEUTRAL"},
    {"type": "CARA", "a": 0.5},
    {"type": "HARA", "alpha": 2, "beta": 1, "gamma": 1.5},
    {"type": "SSHAPE", "k": 1},
]
CONTINUOUS = {"NEUTRAL", "CARA", "HARA", "SSHAPE"}


def case_study():
    rng = random.Random(2024)
    experts = [("E1", 3), ("E2", 2), ("E3", 4), ("E4", 5), ("E5", 1)]
    attrs = [f"C{j}" for j in range(1, 7)]
    alts = [f"A{k}" for k in range(1, 11)]
    doc = base_doc(experts, attrs, alts, rng)
    cells, contexts = [], []
    for a in attrs:
        kinds = []
        for idx, n in enumerate(CASE_COUNTS[a]):
            kinds += [KINDS[idx]] * n
        for (e, _), st in zip(experts, kinds):
            cells.append({"expert": e, "attribute": a, **st})
            if st["type"] in CONTINUOUS:
                # Cumulative constraints in the style of the worked example.
                contexts.append({
                    "expert": e, "attribute": a,
                    "lowerbound": [{"rank": 1, "gamma": 0.32}],
                    "ratio": [{"rank": 3, "alpha": 1.15}],
                    "absdiff": [{"rank": 5, "beta": 0.065}],
                })
            else:
                u = sorted_simplex(rng, len(alts))
                r1, r2 = rng.sample(range(1, len(alts)), 2)
                contexts.append({
                    "expert": e, "attribute": a,
                    "lowerbound": [{"rank": "*", "gamma": round(min(u) * 0.5, 6)}],
                    "ratio": [{"rank": r1, "alpha": round(u[r1 - 1] / u[r1], 6)}],
                    "absdiff": [{"rank": r2, "beta": round(u[r2 - 1] - u[r2], 6)}],
                })
    doc["contexts"] = contexts
    doc["structures"] = {"default": {"type": "ROC"}, "cells": cells}
    return doc


def infeasible():
    rng = random.Random(3)
    experts = [("E1", 1), ("E2", 2)]
    doc = base_doc(experts, ["C1", "C2"], ["A1", "A2", "A3", "A4"], rng)
    doc["contexts"] = [
        {"expert": "E1", "attribute": "C2", "lowerbound": [{"rank": 1, "gamma": 0.3}]},
        {"expert": "E2", "attribute": "C1",
         "lowerbound": [{"rank": 1, "gamma": 0.4}, {"rank": 2, "gamma": 0.4}, {"rank": 3, "gamma": 0.4}]},
    ]
    doc["structures"] = {"default": {"type": "ROC"}}
    return doc


def main():
    DATA.mkdir(exist_ok=True)
    for name, doc in [("ordered_3x5x10", ordered_3x5x10()), ("case_study", case_study()),
                      ("infeasible_bounds", infeasible())]:
        (DATA / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
