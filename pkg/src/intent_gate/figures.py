"""Figure rendering for evaluation reports.

The eval CLI writes these PNGs next to its JSON/TSV output so a run
leaves a self-contained report directory behind. Uses the Agg backend;
nothing here ever opens a window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from intent_gate.evaluation import EvalReport  # noqa: E402


def render_eval_figures(report: EvalReport, out_dir: str | Path) -> list[Path]:
    """Write the per-class and summary charts; returns the file paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [
        _per_class_figure(report, out_dir / "per_class_metrics.png"),
        _summary_figure(report, out_dir / "summary_metrics.png"),
    ]
    return paths


def _per_class_figure(report: EvalReport, path: Path) -> Path:
    names = sorted(report.per_class)
    precision = [report.per_class[n].precision for n in names]
    recall = [report.per_class[n].recall for n in names]
    f1 = [report.per_class[n].f1 for n in names]

    x = range(len(names))
    width = 0.27
    fig, ax = plt.subplots(figsize=(10, 4.5))
    ax.bar([i - width for i in x], precision, width, label="precision")
    ax.bar(list(x), recall, width, label="recall")
    ax.bar([i + width for i in x], f1, width, label="F1")
    ax.set_xticks(list(x))
    ax.set_xticklabels([n.replace(" Intent", "").replace(" Request", "") for n in names],
                       rotation=20, ha="right", fontsize=8)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("score")
    ax.set_title(f"Per-class metrics ({report.backend_name}, n={report.n_examples})")
    ax.legend(fontsize=8)
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _summary_figure(report: EvalReport, path: Path) -> Path:
    labels = ["micro F1", "macro F1", "exact match", "sentinel acc", "hamming loss"]
    values = [
        report.micro_f1,
        report.macro_f1,
        report.exact_match,
        report.sentinel_accuracy,
        report.hamming_loss,
    ]
    fig, ax = plt.subplots(figsize=(7, 3.5))
    bars = ax.bar(labels, values)
    bars[-1].set_color("firebrick")  # a loss, lower is better
    ax.set_ylim(0.0, 1.05)
    for bar, value in zip(bars, values):
        ax.text(bar.get_x() + bar.get_width() / 2, value + 0.02, f"{value:.3f}",
                ha="center", fontsize=8)
    ax.set_title(f"Summary metrics ({report.backend_name})")
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
