"""Print p-goodness profiles for free/direct products of finite groups.

Each row is built from bad free products at a chosen set of primes I plus
finite groups of coprime order, and should come out bad exactly at I.
"""
import argparse
from dataclasses import dataclass

from goodspaces.classifier import Verdict, classify_profile
from goodspaces.exprcalc import parse_expr, to_text


@dataclass(frozen=True)
class Config:
    primes: tuple[int, ...] = (2, 3, 5, 7, 11)
    exprs: tuple[str, ...] = (
        "prod(free(C(3),C(3)),C(5))",
        "free(C(3),C(3),C(5),C(5))",
        "prod(free(C(2),C(4)),free(C(7),C(7)),C(11))",
        "free(C(2),C(2))",
        "prod(free(E(3,2),C(9)),free(Z,C(5)))",
    )


def main(cfg: Config) -> None:
    for text in cfg.exprs:
        e = parse_expr(text)
        prof = classify_profile(e, cfg.primes)
        bad = [p for p, j in prof.items() if j.verdict == Verdict.BAD]
        cells = " ".join(f"{p}:{j.verdict.value[0]}" for p, j in prof.items())
        print(f"{to_text(e):50s} {cells}   bad at {bad or 'none'}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", default="2,3,5,7,11")
    ap.add_argument("exprs", nargs="*")
    args = ap.parse_args()
    defaults = Config()
    main(Config(
        primes=tuple(int(q) for q in args.primes.split(",")),
        exprs=tuple(args.exprs) or defaults.exprs,
    ))
