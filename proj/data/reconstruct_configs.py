#!/usr/bin/env python3
# Copyright 2026 The MixTalk Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the reconstructed variable configurations into data/configs/.

Only the published per-variant parameters (budgets, scales, caps, attribute
split, relation templates) are known. Per-attribute weights, claim costs, tool
costs and marginals are reconstructions. variables_12_v2 is pinned so that the
shipped sample trace in data/golden/ scores exactly.

Run from the repository root:  python3 data/reconstruct_configs.py
"""

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent / "configs"

RECONSTRUCTION_NOTE = (
    "Reconstruction: budgets, scales, caps and relation templates follow the "
    "published variant table; per-attribute weights, costs and marginals are "
    "synthetic.")


def ids(n):
    half = n // 2
    return [f"V{i}" for i in range(1, half + 1)] + [
        f"U{i}" for i in range(1, half + 1)
    ]


def round_simplex(values, digits=4):
    total = sum(values)
    scale = 10**digits
    ints = [int(round(v / total * scale)) for v in values]
    ints[-1] += scale - sum(ints)
    assert all(x > 0 for x in ints), ints
    return [x / scale for x in ints]


def marginal(rng, skew=0.0):
    # Smooth unimodal-ish five-level distribution; skew > 0 pushes mass up.
    centre = 2.0 + skew + rng.uniform(-0.6, 0.6)
    raw = [1.0 / (1.0 + (v - centre) ** 2) + 0.05 for v in range(5)]
    return round_simplex(raw, digits=2)


# Constraint partners (U4 <= V6, U10 <= V10) get skewed marginals so that
# rejection rarely binds.
V6_MARGINAL = [0.02, 0.08, 0.20, 0.35, 0.35]
U4_MARGINAL = [0.35, 0.35, 0.18, 0.10, 0.02]


def small_relations(strength):
    return [
        ["V3", "U1", round(0.6 * strength, 2)],
        ["V4", "U2", round(-0.4 * strength, 2)],
        ["V6", "U4", 0.5],
        ["U5", "U6", round(-0.5 * strength, 2)],
    ]


def large_relations(strength):
    rel = small_relations(strength)
    rel += [
        # Evidence block around the powertrain/clinical-review trait.
        ["V7", "U8", round(0.55 * strength, 2)],
        ["V12", "U8", round(0.45 * strength, 2)],
        ["V7", "V12", 0.3],
        # Redundant evidence pair.
        ["V2", "V10", 0.4],
        ["V10", "U10", 0.5],
        # Sign-inverted tradeoffs.
        ["V9", "U9", round(-0.5 * strength, 2)],
        ["U6", "U7", -0.45],
        ["V8", "U3", round(-0.35 * strength, 2)],
        ["V11", "U11", round(0.5 * strength, 2)],
        ["V5", "U5", 0.3],
    ]
    return rel


def build(env_id, n, budget, claim_scale, max_claim_cost, stmt, seed,
          tool_plan, relations, constraints, up_bias, cost_profile,
          pinned=None):
    rng = random.Random(seed)
    attr_ids = ids(n)
    pinned = pinned or {}
    attributes = []
    marginals = {}
    ws_raw, wr_raw = [], []
    for a in attr_ids:
        ws_raw.append(rng.uniform(0.5, 1.5))
        wr_raw.append(rng.uniform(0.5, 1.5))
    ws = pinned.get("weight_sender") or round_simplex(ws_raw)
    wr = pinned.get("weight_receiver") or round_simplex(wr_raw)
    objectives = pinned.get("objectives")
    costs = pinned.get("claim_costs")
    for k, a in enumerate(attr_ids):
        verifiable = a.startswith("V")
        if objectives is not None:
            obj = objectives[k]
        elif a.startswith("U"):
            obj = "UP" if rng.random() < 0.6 + up_bias else "COOP"
        else:
            obj = "UP" if rng.random() < 0.45 + up_bias else "COOP"
        if costs is not None:
            cost = costs[k]
        else:
            lo, hi = cost_profile["V" if verifiable else "U"]
            cost = round(rng.uniform(lo, hi), 2)
        if a in ("V6", "V10"):
            m = V6_MARGINAL
        elif a in ("U4", "U10"):
            m = U4_MARGINAL
        else:
            m = marginal(rng, skew=0.3 if obj == "UP" else 0.0)
        attributes.append({
            "id": a,
            "verifiable": verifiable,
            "sender_objective": obj,
            "weight_sender": ws[k],
            "weight_receiver": wr[k],
            "claim_cost": cost,
        })
        marginals[a] = m
    total_claim = sum(x["claim_cost"] for x in attributes)
    # Keep the worst-case claim penalty inside the [-1, 1] utility range.
    assert total_claim * claim_scale <= n * max_claim_cost + 1e-9, (
        env_id, total_claim)
    tools = []
    for a in attr_ids:
        if not a.startswith("V"):
            continue
        kind, cost, rate = tool_plan[a]
        tool = {"tool_id": f"T_{a}", "attr_id": a, "cost": cost, "kind": kind}
        if kind == "NOISY":
            tool["noise_rate"] = rate
        if kind == "AVAILABILITY":
            tool["unavailable_rate"] = rate
        assert cost <= 2.5, (env_id, a, cost)
        tools.append(tool)
    return {
        "env_id": env_id,
        "description": RECONSTRUCTION_NOTE,
        "regime": "MIXTALK",
        "verification_budget": budget,
        "tool_scale": 2.0,
        "claim_scale": claim_scale,
        "max_claims": n,
        "max_claim_cost": max_claim_cost,
        "max_tool_cost": 5.0,
        "statement_max_tokens": stmt,
        "persuasion_weights": "sender",
        "attributes": attributes,
        "tools": tools,
        "prior": {
            "marginals": marginals,
            "correlations": [{"a": a, "b": b, "rho": r} for a, b, r in relations],
            "constraints": [{"lower": lo, "upper": hi} for lo, hi in constraints],
        },
    }


def random_tool_plan(rng, attr_ids, noisy_p, avail_p, cost_range, decoys=()):
    plan = {}
    for a in attr_ids:
        if not a.startswith("V"):
            continue
        r = rng.random()
        cost = round(rng.uniform(*cost_range), 2)
        if a in decoys:
            plan[a] = ("AVAILABILITY", round(rng.uniform(0.05, 0.3), 2), 0.5)
        elif r < noisy_p:
            plan[a] = ("NOISY", cost, round(rng.uniform(0.1, 0.3), 2))
        elif r < noisy_p + avail_p:
            plan[a] = ("AVAILABILITY", cost, round(rng.uniform(0.15, 0.35), 2))
        else:
            plan[a] = ("PERFECT", cost, 0.0)
    return plan


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    configs = []
    small = ids(12)
    large = ids(24)
    small_costs = {"V": (0.05, 0.35), "U": (0.02, 0.2)}

    # variables_12_v2 is pinned to the sample trace (ep000003).
    v2 = build(
        "variables_12_v2", 12, 4, 7, 2.0, 200, 1202,
        tool_plan={
            "V1": ("PERFECT", 0.50, 0.0),
            "V2": ("PERFECT", 1.80, 0.0),
            "V3": ("NOISY", 0.15, 0.2),
            "V4": ("AVAILABILITY", 1.20, 0.3),
            "V5": ("NOISY", 0.25, 0.15),
            "V6": ("NOISY", 0.05, 0.25),
        },
        relations=small_relations(1.0),
        constraints=[["U4", "V6"]],
        up_bias=0.0,
        cost_profile=small_costs,
        pinned={
            "objectives": ["COOP", "UP", "UP", "UP", "UP", "COOP",
                           "UP", "UP", "UP", "COOP", "COOP", "UP"],
            "weight_sender": [0.10, 0.08, 0.06, 0.08, 0.08, 0.08,
                              0.10, 0.10, 0.08, 0.08, 0.08, 0.08],
            "weight_receiver": [0.09, 0.09, 0.08, 0.07, 0.08, 0.07,
                                0.11, 0.11, 0.1092, 0.06, 0.05, 0.0808],
            "claim_costs": [0.05, 0.20, 0.15, 0.15, 0.20, 0.10,
                            0.05, 0.05, 0.05, 0.10, 0.05, 0.05],
        })

    rng = random.Random(12)
    configs.append(build(
        "variables_12_v1", 12, 3, 7, 2.0, 200, 1201,
        random_tool_plan(rng, small, 0.3, 0.2, (0.3, 2.2)),
        small_relations(1.0), [["U4", "V6"]], 0.0,
        {"V": (0.05, 0.45), "U": (0.02, 0.25)}))
    configs.append(v2)
    configs.append(build(
        "variables_12_v3", 12, 2, 7, 2.0, 200, 1203,
        random_tool_plan(rng, small, 0.2, 0.1, (0.8, 2.4), decoys=("V1", "V5")),
        small_relations(1.3), [["U4", "V6"]], 0.0, small_costs))
    configs.append(build(
        "variables_12_v4", 12, 4, 7, 2.0, 200, 1204,
        random_tool_plan(rng, small, 0.5, 0.1, (0.2, 1.5)),
        small_relations(1.0), [["U4", "V6"]], -0.1,
        {"V": (0.02, 0.2), "U": (0.02, 0.15)}))
    configs.append(build(
        "variables_12_v5", 12, 2, 7, 3.0, 200, 1205,
        random_tool_plan(rng, small, 0.6, 0.2, (1.2, 2.5)),
        small_relations(0.8), [["U4", "V6"]], 0.25,
        {"V": (0.1, 0.6), "U": (0.05, 0.3)}))

    rng = random.Random(24)
    large_costs = {"V": (0.1, 0.5), "U": (0.05, 0.3)}
    constraints24 = [["U4", "V6"], ["U10", "V10"]]
    configs.append(build(
        "variables_24_v1", 24, 5, 6.0, 2.0, 400, 2401,
        random_tool_plan(rng, large, 0.35, 0.25, (0.3, 2.0)),
        large_relations(1.0), constraints24, 0.0, large_costs))
    configs.append(build(
        "variables_24_v2", 24, 7, 6.0, 2.0, 400, 2402,
        random_tool_plan(rng, large, 0.45, 0.1, (0.1, 1.6)),
        large_relations(1.2), constraints24, -0.1, large_costs))
    configs.append(build(
        "variables_24_v3", 24, 3, 6.0, 2.0, 400, 2403,
        random_tool_plan(rng, large, 0.45, 0.15, (1.2, 2.5),
                         decoys=("V2", "V8", "V11")),
        large_relations(1.0), constraints24, 0.2, large_costs))
    configs.append(build(
        "variables_24_v4", 24, 8, 6.0, 1.0, 400, 2404,
        random_tool_plan(rng, large, 0.25, 0.15, (0.2, 1.8)),
        large_relations(1.0), constraints24, 0.0,
        {"V": (0.05, 0.25), "U": (0.02, 0.12)}))
    configs.append(build(
        "variables_24_v5", 24, 5, 6.0, 2.0, 400, 2405,
        random_tool_plan(rng, large, 0.3, 0.3, (0.9, 1.6)),
        large_relations(-0.8), constraints24, 0.1, large_costs))

    for cfg in configs:
        path = OUT / f"{cfg['env_id']}.json"
        path.write_text(json.dumps(cfg, indent=2) + "\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
