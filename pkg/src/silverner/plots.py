"""Report figures, rendered headlessly with the Agg backend."""

from __future__ import annotations

from pathlib import Path

from .stats import CorpusStats


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save_length_histogram(stats: CorpusStats, path: str | Path) -> Path:
    """Sentence-length histogram with the mean marked; returns the written path."""
    plt = _pyplot()
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    lengths = sorted(stats.histogram)
    counts = [stats.histogram[n] for n in lengths]
    if lengths:
        ax.bar(lengths, counts, width=1.0, color="#4878a8", linewidth=0)
        if stats.length is not None:
            ax.axvline(
                stats.length.mean,
                color="#a84848",
                linestyle="--",
                linewidth=1.2,
                label=f"mean {stats.length.mean:.2f}",
            )
            ax.legend(frameon=False)
        if counts and max(counts) / max(min(counts), 1) > 1000:
            ax.set_yscale("log")
    ax.set_xlabel("sentence length (tokens)")
    ax.set_ylabel("sentences")
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_class_shares(stats: CorpusStats, path: str | Path) -> Path:
    """Bar chart of entity-token shares per class; returns the written path."""
    plt = _pyplot()
    path = Path(path)
    shares = stats.entity_shares()
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    classes = [c for c in ("PER", "ORG", "LOC") if c in shares]
    values = [100 * shares[c] for c in classes]
    bars = ax.bar(classes, values, color=["#4878a8", "#6aa84f", "#a87848"][: len(classes)])
    for bar, value in zip(bars, values):
        ax.annotate(
            f"{value:.1f}%",
            (bar.get_x() + bar.get_width() / 2, value),
            ha="center",
            va="bottom",
            fontsize=9,
        )
    ax.set_ylabel("share of entity tokens (%)")
    ax.set_ylim(0, max(values) * 1.15 if values else 1)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
