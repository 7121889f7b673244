"""Check that finite-order integer representations act nilpotently only when trivial."""
import argparse
import time
from dataclasses import dataclass

from goodspaces.zlattice import (
    EnumerationSpec,
    IntegerRepresentation,
    describe_lattice_series,
    lattice_series,
    verify_nilpotent_iff_trivial,
)


@dataclass(frozen=True)
class Config:
    ranks: tuple[int, ...] = (1, 2, 3)
    entry_min: int = -2
    entry_max: int = 2
    max_order: int = 6


def main(cfg: Config) -> int:
    start = time.perf_counter()
    spec = EnumerationSpec(ranks=cfg.ranks, entry_min=cfg.entry_min, entry_max=cfg.entry_max, max_order=cfg.max_order)
    report = verify_nilpotent_iff_trivial(spec)
    print(f"ranks {cfg.ranks}, entries [{cfg.entry_min},{cfg.entry_max}], order <= {cfg.max_order}")
    print(f"checked {report.checked}, nilpotent {report.nilpotent}, trivial {report.trivial}")
    print(f"counterexamples: {len(report.counterexamples)}")
    neg = IntegerRepresentation(1, (((-1,),),))
    print(f"negation on Z: {describe_lattice_series(lattice_series(neg, 3))}")
    print(f"{time.perf_counter() - start:.1f}s")
    return 1 if report.counterexamples else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ranks", default="1,2,3")
    ap.add_argument("--entries", default="-2:2")
    ap.add_argument("--max-order", type=int, default=6)
    args = ap.parse_args()
    lo, hi = (int(x) for x in args.entries.split(":"))
    raise SystemExit(main(Config(tuple(int(r) for r in args.ranks.split(",")), lo, hi, args.max_order)))
