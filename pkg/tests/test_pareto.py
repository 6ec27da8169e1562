"""Dominance, frontier extraction, budget selection, and the bundled cards."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from graspkit.errors import EmptyInputError, GraspKitError
from graspkit.pareto import (
    BudgetSelection,
    CardSet,
    ModelCard,
    bundled_cards,
    dominates,
    pareto_frontier,
    read_cards,
    select_for_budget,
    write_cards,
)

FRONTIER_NAMES = {
    "mobilenet_v1_0.25",
    "mobilenet_v1_0.50",
    "mobilenet_v2_1.0",
    "mobilenet_v2_1.4",
    "inception_v3",
    "nasnet_a_large",
}


def card(name, acc, flops):
    return ModelCard(name=name, top5_accuracy=acc, flops=flops)


def test_dominates_truth_table():
    a = card("a", 0.9, 100)
    assert dominates(a, card("b", 0.8, 200))  # better on both
    assert dominates(a, card("b", 0.9, 200))  # equal acc, cheaper
    assert dominates(a, card("b", 0.8, 100))  # equal cost, more accurate
    assert not dominates(a, card("b", 0.9, 100))  # equal vector
    assert not dominates(a, card("b", 0.95, 200))  # trade-off
    assert not dominates(a, card("b", 0.8, 50))  # trade-off the other way
    assert not dominates(card("b", 0.8, 200), a)


def test_card_validation():
    with pytest.raises(GraspKitError):
        card("x", 0.0, 100)
    with pytest.raises(GraspKitError):
        card("x", 1.2, 100)
    with pytest.raises(GraspKitError):
        card("x", 0.9, 0)
    card("x", 1.0, 1)  # boundary values allowed


def test_card_set_rejects_duplicate_names():
    with pytest.raises(GraspKitError):
        CardSet((card("x", 0.9, 100), card("x", 0.8, 50)))


def test_frontier_empty_input():
    with pytest.raises(EmptyInputError):
        pareto_frontier(CardSet(()))


def test_frontier_single_card():
    cs = CardSet((card("only", 0.5, 10),))
    assert [c.name for c in pareto_frontier(cs)] == ["only"]


def test_frontier_keeps_equal_vector_duplicates():
    cs = CardSet((card("a", 0.9, 100), card("b", 0.9, 100), card("c", 0.5, 200)))
    assert [c.name for c in pareto_frontier(cs)] == ["a", "b"]


def test_frontier_sorted_by_flops():
    cs = CardSet(
        (card("big", 0.95, 1000), card("small", 0.7, 10), card("mid", 0.9, 100))
    )
    assert [c.name for c in pareto_frontier(cs)] == ["small", "mid", "big"]


def brute_force_frontier(cards):
    out = []
    for c in cards:
        dominated = False
        for other in cards:
            if other is c:
                continue
            better_or_equal = (
                other.top5_accuracy >= c.top5_accuracy and other.flops <= c.flops
            )
            strictly = (
                other.top5_accuracy > c.top5_accuracy or other.flops < c.flops
            )
            if better_or_equal and strictly:
                dominated = True
                break
        if not dominated:
            out.append(c)
    return sorted(out, key=lambda c: (c.flops, -c.top5_accuracy, c.name))


def random_card_set(rng):
    n = int(rng.integers(1, 51))
    accs = rng.uniform(0.05, 1.0, size=n)
    flops = rng.integers(1, 10_000, size=n)
    # duplicate some criterion vectors on purpose
    for i in range(n):
        if i and rng.random() < 0.15:
            j = int(rng.integers(0, i))
            accs[i] = accs[j]
            flops[i] = flops[j]
    return CardSet(
        tuple(card(f"m{i}", float(accs[i]), int(flops[i])) for i in range(n))
    )


def test_frontier_matches_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(300):
        cs = random_card_set(rng)
        got = list(pareto_frontier(cs))
        want = brute_force_frontier(list(cs))
        assert got == want


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_frontier_members_are_mutually_nondominating(seed):
    cs = random_card_set(np.random.default_rng(seed))
    frontier = list(pareto_frontier(cs))
    for a in frontier:
        for b in frontier:
            assert not dominates(a, b)


def test_select_for_budget_picks_most_accurate_fit():
    cs = CardSet(
        (card("cheap", 0.7, 10), card("mid", 0.9, 100), card("big", 0.95, 1000))
    )
    sel = select_for_budget(cs, 100)
    assert sel == BudgetSelection(card("mid", 0.9, 100), True)
    sel = select_for_budget(cs, 5000)
    assert sel.card.name == "big" and sel.within_budget


def test_select_for_budget_falls_back_to_cheapest():
    cs = CardSet((card("cheap", 0.7, 10), card("big", 0.95, 1000)))
    sel = select_for_budget(cs, 5)
    assert sel.card.name == "cheap"
    assert not sel.within_budget


def test_select_ignores_dominated_cards():
    # "trap" fits the budget but is dominated, so it must not be chosen
    cs = CardSet((card("trap", 0.8, 100), card("better", 0.9, 90)))
    sel = select_for_budget(cs, 100)
    assert sel.card.name == "better"


def test_cards_csv_round_trip(tmp_path):
    cs = CardSet((card("a", 0.925, 1_170_000_000), card("b", 0.7, 82_000_000)))
    p = tmp_path / "cards.csv"
    write_cards(p, cs)
    assert read_cards(p) == cs


def test_read_cards_rejects(tmp_path):
    p = tmp_path / "cards.csv"
    p.write_text("model,acc,flops\na,0.9,100\n")
    with pytest.raises(GraspKitError):
        read_cards(p)
    p.write_text("name,top5_accuracy,flops\na,0.9\n")
    with pytest.raises(GraspKitError):
        read_cards(p)
    p.write_text("")
    with pytest.raises(GraspKitError):
        read_cards(p)


def test_read_cards_skips_comments(tmp_path):
    p = tmp_path / "cards.csv"
    p.write_text("# provenance note\nname,top5_accuracy,flops\na,0.9,100\n")
    assert len(read_cards(p)) == 1


def test_bundled_cards_shape():
    cards = bundled_cards()
    assert len(cards) == 23
    names = [c.name for c in cards]
    assert len(set(names)) == 23


def test_bundled_frontier_is_the_known_six():
    frontier = pareto_frontier(bundled_cards())
    assert {c.name for c in frontier} == FRONTIER_NAMES
    # ascending FLOPs order puts the tiny MobileNet first, NASNet last
    ordered = [c.name for c in frontier]
    assert ordered[0] == "mobilenet_v1_0.25"
    assert ordered[-1] == "nasnet_a_large"
