"""Nilpotency of p-group actions on F_p-vector spaces, and the SL(2,p) counterexamples."""
import argparse
import time
from dataclasses import dataclass

from goodspaces.actions import (
    cyclic_linear_action_classes,
    enumerate_linear_actions,
    is_nilpotent_action,
    triangular_sl2_action,
)
from goodspaces.groups import build_group, cyclic, dihedral, direct_product, elementary_abelian


@dataclass(frozen=True)
class Config:
    sl2_primes: tuple[int, ...] = (2, 3, 5, 7)
    max_rank: int = 3
    class_primes: tuple[int, ...] = (7, 11, 13)


ACTORS = {
    2: [cyclic(2), cyclic(4), cyclic(8), elementary_abelian(2, 2), direct_product(cyclic(2), cyclic(4)), dihedral(4)],
    3: [cyclic(3), cyclic(9), elementary_abelian(3, 2)],
    5: [cyclic(5)],
}


def main(cfg: Config) -> int:
    for p in cfg.sl2_primes:
        d = is_nilpotent_action(triangular_sl2_action(p))
        print(f"SL(2,{p}) on F_{p}^2: nilpotent={d.nilpotent} series={d.series.orders}")
    failures = 0
    for p, actors in ACTORS.items():
        for desc in actors:
            P = build_group(desc)
            for k in range(1, cfg.max_rank + 1):
                start = time.perf_counter()
                acts = list(enumerate_linear_actions(P, p, k))
                bad = sum(not is_nilpotent_action(a).nilpotent for a in acts)
                failures += bad
                print(f"{desc.text():12s} on F_{p}^{k}: {len(acts):6d} actions, {bad} non-nilpotent"
                      f" ({time.perf_counter() - start:.2f}s)")
    # too many actions to list one by one: one per conjugacy class of unipotent matrices
    for p in cfg.class_primes:
        classes = cyclic_linear_action_classes(p, cfg.max_rank)
        bad = sum(not is_nilpotent_action(a).nilpotent for a, _ in classes)
        failures += bad
        total = sum(size for _, size in classes)
        print(f"C({p}) on F_{p}^{cfg.max_rank}: {len(classes)} classes covering {total} actions, {bad} non-nilpotent")
    return 1 if failures else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-rank", type=int, default=3)
    args = ap.parse_args()
    raise SystemExit(main(Config(max_rank=args.max_rank)))
