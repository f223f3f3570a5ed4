"""Figure rendering for the CLI report paths.

Every command that writes delimited output can drop a PNG next to it; all
rendering goes through the Agg backend so the tool works headless.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_histogram(counts: Mapping[str, int], path: str, title: str = "") -> str:
    labels = sorted(counts)
    values = [counts[l] for l in labels]
    width = max(6.0, 0.35 * len(labels) + 2.0)
    fig, ax = plt.subplots(figsize=(width, 4.0))
    ax.bar(range(len(labels)), values, color="#3b6ea5")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=90, fontsize=7, family="monospace")
    ax.set_ylabel("counts")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_payoff_curves(rows: Sequence[tuple[float, str, float]], path: str,
                       title: str = "Payoff per game") -> str:
    by_choice: dict[str, tuple[list[float], list[float]]] = {}
    for p, choice, value in rows:
        xs, ys = by_choice.setdefault(choice, ([], []))
        xs.append(p)
        ys.append(value)
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for choice, (xs, ys) in sorted(by_choice.items()):
        ax.plot(xs, ys, label=choice)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("winning probability")
    ax.set_ylabel("expected payoff")
    ax.set_title(title)
    ax.legend(title="declarer choice")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_bench_curve(rows: Sequence[Mapping], path: str) -> str:
    xs = [r["cards"] for r in rows]
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    ax.semilogy(xs, [max(r["projected_total_s"], 1e-12) for r in rows],
                marker="o", label="projected all-deal total")
    ax.semilogy(xs, [max(r["time_per_game_s"], 1e-12) for r in rows],
                marker="s", label="measured per deal")
    ax.set_xlabel("cards per hand")
    ax.set_ylabel("seconds")
    ax.set_title("Classical solve time across reduced games")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_count_distribution(distribution: Sequence[float], path: str,
                            title: str = "Counting-register readout") -> str:
    fig, ax = plt.subplots(figsize=(6.5, 4.0))
    ax.bar(range(len(distribution)), distribution, color="#3b6ea5", width=1.0)
    ax.set_xlabel("phase-register outcome")
    ax.set_ylabel("probability")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
