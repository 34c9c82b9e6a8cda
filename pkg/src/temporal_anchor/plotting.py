"""Bar charts for the ablation and rule-usage reports."""

from __future__ import annotations

from typing import Sequence, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path: str) -> None:
    fig.tight_layout()
    # fixed metadata keeps repeated renders byte-identical
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)


def ablation_figure(rows: Sequence[Tuple[str, float, float]], path: str) -> None:
    """Accuracy and precision per variant, as paired bars."""
    names = [r[0] for r in rows]
    xs = range(len(rows))
    w = 0.38
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.bar([x - w / 2 for x in xs], [r[1] for r in rows], w, label="accuracy")
    ax.bar([x + w / 2 for x in xs], [r[2] for r in rows], w, label="precision")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names, rotation=30, ha="right")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("score")
    ax.legend(loc="lower right")
    _save(fig, path)


def usage_figure(rows: Sequence[Tuple[str, int, int]], path: str) -> None:
    """How often each rule fired and how often it was used in the final answer."""
    names = [r[0] for r in rows]
    xs = range(len(rows))
    w = 0.38
    fig, ax = plt.subplots(figsize=(9, 4))
    ax.bar([x - w / 2 for x in xs], [r[2] for r in rows], w, label="fires")
    ax.bar([x + w / 2 for x in xs], [r[1] for r in rows], w, label="used")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(names)
    ax.set_ylabel("utterances")
    ax.legend()
    _save(fig, path)
