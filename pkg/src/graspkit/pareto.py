"""Pareto-efficient model selection over the (accuracy, FLOPs) plane.

A card dominates another when it is at least as accurate and at least as
cheap, and strictly better on one of the two. The frontier is the set of
cards no other card dominates; equal-objective duplicates survive because a
card with an identical criterion vector does not dominate it.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import NamedTuple, Sequence

from .errors import EmptyInputError, GraspKitError

BUNDLED_CARDS_RESOURCE = "model_cards.csv"
CARD_HEADER = ["name", "top5_accuracy", "flops"]


@dataclass(frozen=True)
class ModelCard:
    """One candidate architecture as a point in objective space."""

    name: str
    top5_accuracy: float
    flops: int

    def __post_init__(self) -> None:
        if not (0.0 < self.top5_accuracy <= 1.0):
            raise GraspKitError(
                f"{self.name}: top5_accuracy must be in (0, 1], "
                f"got {self.top5_accuracy}"
            )
        if self.flops <= 0:
            raise GraspKitError(f"{self.name}: flops must be positive")


@dataclass(frozen=True)
class CardSet:
    cards: tuple[ModelCard, ...]

    def __post_init__(self) -> None:
        names = [c.name for c in self.cards]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise GraspKitError(f"duplicate card names: {', '.join(dupes)}")

    def __iter__(self):
        return iter(self.cards)

    def __len__(self) -> int:
        return len(self.cards)


def dominates(a: ModelCard, b: ModelCard) -> bool:
    """True iff a is at least as good as b in both objectives, better in one.

    Accuracy is maximized and FLOPs minimized; equal criterion vectors do not
    dominate each other.
    """
    if a.top5_accuracy < b.top5_accuracy or a.flops > b.flops:
        return False
    return a.top5_accuracy > b.top5_accuracy or a.flops < b.flops


def pareto_frontier(cards: CardSet) -> CardSet:
    """Cards not dominated by any other card, sorted by ascending FLOPs."""
    if len(cards) == 0:
        raise EmptyInputError("cannot compute a frontier over zero cards")
    efficient = [
        c
        for c in cards
        if not any(dominates(other, c) for other in cards if other is not c)
    ]
    efficient.sort(key=lambda c: (c.flops, -c.top5_accuracy, c.name))
    return CardSet(tuple(efficient))


class BudgetSelection(NamedTuple):
    card: ModelCard
    within_budget: bool  # False: nothing fits, fell back to min-FLOPs card


def select_for_budget(cards: CardSet, max_flops: int) -> BudgetSelection:
    """Pick the most accurate frontier card within a FLOPs budget.

    If no frontier card fits the budget, returns the cheapest frontier card
    with within_budget False so callers can warn.
    """
    frontier = pareto_frontier(cards)
    fitting = [c for c in frontier if c.flops <= max_flops]
    if fitting:
        best = max(fitting, key=lambda c: (c.top5_accuracy, -c.flops))
        return BudgetSelection(best, True)
    cheapest = min(frontier.cards, key=lambda c: c.flops)
    return BudgetSelection(cheapest, False)


# ---------------------------------------------------------------------------
# card CSV + bundled data

def read_cards(path: str | Path) -> CardSet:
    """Read a `name,top5_accuracy,flops` CSV (comment lines start with #)."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise GraspKitError(f"{path}: empty card file")
    header = [c.strip() for c in rows[0]]
    if header != CARD_HEADER:
        raise GraspKitError(
            f"{path}: expected header {','.join(CARD_HEADER)}, got {','.join(header)}"
        )
    cards = []
    for row in rows[1:]:
        if len(row) != 3:
            raise GraspKitError(f"{path}: malformed card row {row!r}")
        cards.append(
            ModelCard(name=row[0], top5_accuracy=float(row[1]), flops=int(row[2]))
        )
    return CardSet(tuple(cards))


def write_cards(path: str | Path, cards: CardSet) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CARD_HEADER)
        for c in cards:
            writer.writerow([c.name, repr(c.top5_accuracy), c.flops])


def bundled_cards() -> CardSet:
    """The 23-model card set shipped with the package."""
    ref = resources.files("graspkit").joinpath("data", BUNDLED_CARDS_RESOURCE)
    with resources.as_file(ref) as path:
        return read_cards(path)
