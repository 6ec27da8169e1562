"""Dependency-free SVG plots for training curves and the model frontier.

Output is deterministic text: fixed canvas, fixed float formatting, no
timestamps. Byte-identical files for identical inputs, so plots can be
diffed in tests like any other artifact.
"""

from __future__ import annotations

import math
from pathlib import Path

from .errors import EmptyInputError
from .head import TrainingHistory
from .pareto import CardSet, pareto_frontier

_W, _H = 720, 420
_MARGIN = {"left": 64, "right": 64, "top": 24, "bottom": 44}

_STYLE = (
    "text{font-family:monospace;font-size:11px;fill:#333}"
    ".axis{stroke:#333;stroke-width:1;fill:none}"
    ".grid{stroke:#ddd;stroke-width:0.5}"
    ".loss{stroke:#b33;stroke-width:1.5;fill:none}"
    ".sim{stroke:#283;stroke-width:1.5;fill:none}"
    ".card{fill:#99b;stroke:none}"
    ".front{fill:#b33;stroke:#611;stroke-width:0.8}"
    ".step{stroke:#b33;stroke-width:1;fill:none;stroke-dasharray:4 3}"
)


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _scale(v: float, lo: float, hi: float, out_lo: float, out_hi: float) -> float:
    span = hi - lo if hi > lo else 1.0
    return out_lo + (v - lo) / span * (out_hi - out_lo)


def _document(body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">\n<style>{_STYLE}</style>\n'
        f'<rect width="{_W}" height="{_H}" fill="white"/>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def _frame() -> tuple[float, float, float, float]:
    # (x0, y0, x1, y1) of the plot area; y grows downward in SVG
    return (
        _MARGIN["left"],
        _MARGIN["top"],
        _W - _MARGIN["right"],
        _H - _MARGIN["bottom"],
    )


def plot_history(history: TrainingHistory, out_path: str | Path) -> None:
    """Training loss (left axis) and validation similarity (right axis)."""
    n = len(history)
    if n == 0:
        raise EmptyInputError("cannot plot an empty history")
    x0, y0, x1, y1 = _frame()
    losses = history.train_loss
    sims = history.val_angular_similarity
    lo_loss, hi_loss = min(losses), max(losses)
    if hi_loss == lo_loss:
        hi_loss = lo_loss + 1.0

    def px(epoch: int) -> float:
        return _scale(epoch, 0, max(n - 1, 1), x0, x1)

    def py_loss(v: float) -> float:
        return _scale(v, lo_loss, hi_loss, y1, y0)

    def py_sim(v: float) -> float:
        return _scale(v, 0.0, 1.0, y1, y0)

    body = [f'<rect class="axis" x="{x0}" y="{y0}" '
            f'width="{x1 - x0}" height="{y1 - y0}"/>']
    for frac in (0.25, 0.5, 0.75):
        gy = _fmt(_scale(frac, 0.0, 1.0, y1, y0))
        body.append(f'<line class="grid" x1="{x0}" y1="{gy}" x2="{x1}" y2="{gy}"/>')

    if 2 in history.phases:
        boundary = history.phases.index(2)
        bx = _fmt(px(boundary))
        body.append(
            f'<line class="grid" x1="{bx}" y1="{y0}" x2="{bx}" y2="{y1}" '
            f'stroke-dasharray="3 3"/>'
        )
        body.append(f'<text x="{bx}" y="{y0 + 12}">phase 2</text>')

    loss_pts = " ".join(f"{_fmt(px(i))},{_fmt(py_loss(losses[i]))}" for i in range(n))
    sim_pts = " ".join(f"{_fmt(px(i))},{_fmt(py_sim(sims[i]))}" for i in range(n))
    body.append(f'<polyline class="loss" points="{loss_pts}"/>')
    body.append(f'<polyline class="sim" points="{sim_pts}"/>')

    body.append(f'<text x="{x0}" y="{_H - 12}">epoch 0..{n - 1}</text>')
    body.append(
        f'<text x="8" y="{y0 + 12}" fill="#b33">loss '
        f'{_fmt(lo_loss)}..{_fmt(hi_loss)}</text>'
    )
    body.append(f'<text x="{x1 - 150}" y="{y0 + 12}" fill="#283">'
                f'val similarity 0..1</text>')
    Path(out_path).write_text(_document(body))


def plot_frontier(cards: CardSet, out_path: str | Path) -> None:
    """All cards on a log-FLOPs vs accuracy plane, frontier highlighted."""
    if len(cards) == 0:
        raise EmptyInputError("cannot plot an empty card set")
    x0, y0, x1, y1 = _frame()
    frontier = pareto_frontier(cards)
    logs = [math.log10(c.flops) for c in cards]
    accs = [c.top5_accuracy for c in cards]
    lo_x, hi_x = min(logs), max(logs)
    lo_y, hi_y = min(accs), max(accs)
    pad = 0.02 * (hi_y - lo_y or 1.0)
    lo_y, hi_y = lo_y - pad, hi_y + pad

    def px(flops: int) -> float:
        return _scale(math.log10(flops), lo_x, hi_x, x0, x1)

    def py(acc: float) -> float:
        return _scale(acc, lo_y, hi_y, y1, y0)

    body = [f'<rect class="axis" x="{x0}" y="{y0}" '
            f'width="{x1 - x0}" height="{y1 - y0}"/>']
    for c in cards:
        body.append(
            f'<circle class="card" cx="{_fmt(px(c.flops))}" '
            f'cy="{_fmt(py(c.top5_accuracy))}" r="3"/>'
        )
    step_pts = " ".join(
        f"{_fmt(px(c.flops))},{_fmt(py(c.top5_accuracy))}" for c in frontier
    )
    body.append(f'<polyline class="step" points="{step_pts}"/>')
    for c in frontier:
        cx, cy = px(c.flops), py(c.top5_accuracy)
        body.append(
            f'<circle class="front" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4"/>'
        )
        body.append(f'<text x="{_fmt(cx + 6)}" y="{_fmt(cy - 6)}">{c.name}</text>')
    body.append(
        f'<text x="{x0}" y="{_H - 12}">log10 FLOPs '
        f'{_fmt(lo_x)}..{_fmt(hi_x)}</text>'
    )
    body.append(f'<text x="8" y="{y0 + 12}">top-5 accuracy '
                f'{_fmt(lo_y)}..{_fmt(hi_y)}</text>')
    Path(out_path).write_text(_document(body))
