#!/usr/bin/env python3
"""Print the accuracy-vs-FLOPs frontier of the bundled model cards.

Lists the non-dominated models, shows which one a FLOPs budget selects,
and optionally renders the objective-space scatter to SVG.
"""

import argparse
from pathlib import Path

from graspkit.pareto import bundled_cards, pareto_frontier, read_cards, select_for_budget
from graspkit.plots import plot_frontier


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cards", type=Path, default=None,
                    help="model card CSV (default: bundled 23-model set)")
    ap.add_argument("--budget", type=int, default=1_200_000_000,
                    help="FLOPs budget for the selection demo")
    ap.add_argument("--svg", type=Path, default=None,
                    help="also render the scatter plot here")
    args = ap.parse_args()

    cards = read_cards(args.cards) if args.cards else bundled_cards()
    front = pareto_frontier(cards)

    print(f"{len(cards)} candidate models, {len(front)} on the frontier:")
    for card in front:
        print(f"  {card.name:<22} top-5 {card.top5_accuracy:.3f}  "
              f"{card.flops / 1e6:10.0f} MFLOPs")

    chosen = select_for_budget(cards, args.budget)
    fit = "fits" if chosen.within_budget else "NOTHING FITS, cheapest shown"
    print(f"budget {args.budget / 1e6:.0f} MFLOPs -> {chosen.card.name} ({fit})")

    if args.svg:
        plot_frontier(cards, args.svg)
        print(f"wrote {args.svg}")


if __name__ == "__main__":
    main()
