"""Compare closed-form group homology with the bar complex, and two spaces over several rings."""
import argparse
from dataclasses import dataclass

from goodspaces.exprcalc import ClassifyingSpace, descriptor_of, parse_expr, parse_group_expr
from goodspaces.homology import bar_homology_oracle, has_closed_form, homology_comparison, space_homology
from goodspaces.io import finite_group_from_text
from goodspaces.rings import field, integers


@dataclass(frozen=True)
class Config:
    groups: tuple[str, ...] = ("C(2)", "C(3)", "C(4)", "C(6)", "E(2,2)", "S(3)", "D(4)")
    max_degree: int = 4
    pair: tuple[str, str] = ("wedge(Sph(1),Sph(2))", "RP(2)")


def main(cfg: Config) -> int:
    rings = [field(2), field(3), integers()]
    mismatches = 0
    for text in cfg.groups:
        e = parse_group_expr(text)
        G = finite_group_from_text(text)
        for ring in rings:
            bar = bar_homology_oracle(G, ring, cfg.max_degree)
            line = f"{text:8s} {ring.text():4s} bar {bar.text()}"
            if has_closed_form(descriptor_of(e)):
                closed = space_homology(ClassifyingSpace(e), ring, cfg.max_degree)
                ok = closed.entries == bar.entries
                mismatches += not ok
                line += "  closed form agrees" if ok else f"  MISMATCH closed {closed.text()}"
            print(line)
    a, b = (parse_expr(t) for t in cfg.pair)
    for ring in rings:
        cmp = homology_comparison(a, b, ring, 2)
        print(f"{cfg.pair[0]} vs {cfg.pair[1]} over {ring.text()}: equal={cmp.equal}")
        for note in cmp.notes:
            print(f"  note: {note}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-degree", type=int, default=4)
    ap.add_argument("groups", nargs="*")
    args = ap.parse_args()
    defaults = Config()
    raise SystemExit(main(Config(tuple(args.groups) or defaults.groups, args.max_degree)))
