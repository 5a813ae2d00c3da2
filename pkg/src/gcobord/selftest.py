"""Seeded property battery shared by ``gcobord selftest`` and the test suite."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .classify import applicable_methods, classify, sylow_data
from .groups import build_group
from .homology import bar_h2, corestriction, format_factors, is_cycle, restriction_transfer
from .pairword import (RULES, PairWord, apply_step, in_Z, inverse_step, random_move,
                       random_z_word)

DEFAULT_SEED = 1904
BATTERY_GROUPS = ("A4", "D12", "D8", "S4", "Z2xZ2", "Z8")

GOLDEN = {
    **{f"Z{n}": "trivial" for n in range(2, 13)},
    "D4": "Z/2", "D6": "trivial", "D8": "Z/2", "D10": "trivial", "D12": "Z/2",
    "S3": "trivial", "S4": "Z/2", "A4": "Z/2", "A5": "Z/2", "Z2xZ2": "Z/2",
}


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    reproducer: dict = field(default_factory=dict)


def golden_table(table: dict | None = None, oracle_bound: int = 60) -> list[Check]:
    out = []
    for spec in sorted(table or GOLDEN):
        want = (table or GOLDEN)[spec]
        got = format_factors(bar_h2(build_group(spec), max(oracle_bound, 60)).invariant_factors)
        out.append(Check(f"golden {spec}", got == want, f"expected {want}, got {got}",
                         {"group": spec, "expected": want, "got": got}))
    return out


def minimize_word(w: PairWord, fails) -> PairWord:
    """Greedy deletion of letters and adjacent pairs while staying in Z(G) and failing."""
    changed = True
    while changed:
        changed = False
        for size in (1, 2):
            for i in range(len(w) - size + 1):
                cand = w.replace(i, i + size, ())
                if in_Z(cand) and fails(cand):
                    w, changed = cand, True
                    break
            if changed:
                break
    return w


def rule_invariance(G, rng, iters: int) -> Check:
    S = bar_h2(G)
    for i in range(iters):
        rule = RULES[i % len(RULES)]
        w = random_z_word(G, rng, 3, flip=0.3)
        setup, st, w2 = random_move(w, rule, rng)
        pre = w
        for s in setup:
            pre, _ = apply_step(pre, s)
        back, _ = apply_step(w2, inverse_step(st, pre))
        if not in_Z(w2) or S.class_of_word(w) != S.class_of_word(w2) or back != pre:
            return Check(f"rule invariance {G.spec}", False, f"{rule} broke class or inverse",
                         {"group": G.spec, "rule": rule, "word": w.to_json(),
                          "step": st.to_json(G)})
    return Check(f"rule invariance {G.spec}", True, f"{iters} applications")


def method_agreement(G, rng, iters: int) -> Check:
    def disagree(w):
        try:
            classify(w, test_mode=True)
            return False
        except AssertionError:
            return True

    for _ in range(iters):
        w = random_z_word(G, rng, 5, flip=0.3)
        if disagree(w):
            w = minimize_word(w, disagree)
            return Check(f"method agreement {G.spec}", False, "classifiers disagree",
                         {"group": G.spec, "word": w.to_json()})
    return Check(f"method agreement {G.spec}", True,
                 f"{iters} words, methods {','.join(applicable_methods(G))}")


def transfer_composition(G) -> Check:
    S = bar_h2(G)
    for p, (emb, _) in sylow_data(G).items():
        for i, z in enumerate(S.witness_cycles):
            back = corestriction(emb, restriction_transfer(emb, z))
            if not is_cycle(G, back) or S.project(back) != S.project(z) * emb.index:
                return Check(f"cor o res {G.spec}", False, f"witness {i}, prime {p}",
                             {"group": G.spec, "prime": p, "witness": i})
    return Check(f"cor o res {G.spec}", True, "all Sylow subgroups, all witnesses")


def run_battery(groups=BATTERY_GROUPS, seed: int = DEFAULT_SEED, iters: int = 100,
                golden: dict | None = None, oracle_bound: int = 60) -> list[Check]:
    checks = golden_table(golden, oracle_bound)
    for spec in sorted(groups):
        G = build_group(spec)
        if G.order > oracle_bound:
            continue
        rng = random.Random(f"{seed}:{spec}")
        if iters:
            checks.append(rule_invariance(G, rng, iters))
            checks.append(method_agreement(G, rng, iters))
        checks.append(transfer_composition(G))
    return checks

