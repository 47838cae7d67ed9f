"""Multi-label evaluation of extraction backends over a labeled corpus.

Standard multi-label metrics over the six categories: per-class
precision/recall/F1, micro and macro F1, exact-match rate, Hamming loss
(mean symmetric-difference size over six), plus sentinel accuracy for the
no-intent / unknown-intent rows, which carry no labels but still have a
right answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from intent_gate.corpus import MARKER_NONE, MARKER_UNKNOWN, LabeledExample
from intent_gate.extraction.backends import ExtractorBackend
from intent_gate.model import IntentType, OutcomeKind

N_CLASSES = len(IntentType)

_MARKER_BY_KIND = {
    OutcomeKind.NO_INTENT_PRESENT: MARKER_NONE,
    OutcomeKind.UNKNOWN_INTENT: MARKER_UNKNOWN,
}


class EmptyDataset(ValueError):
    """Evaluation over zero examples is undefined."""


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    tp: int
    fp: int
    fn: int

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "support": self.support,
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
        }


@dataclass
class EvalReport:
    backend_name: str
    n_examples: int
    per_class: dict[str, ClassMetrics]
    micro_precision: float
    micro_recall: float
    micro_f1: float
    macro_f1: float
    exact_match: float
    hamming_loss: float
    sentinel_accuracy: float
    failures: list[dict[str, Any]] = field(default_factory=list)

    def to_jsonable(self) -> dict[str, Any]:
        return {
            "backend_name": self.backend_name,
            "n_examples": self.n_examples,
            "per_class": {name: m.to_jsonable() for name, m in sorted(self.per_class.items())},
            "micro_precision": self.micro_precision,
            "micro_recall": self.micro_recall,
            "micro_f1": self.micro_f1,
            "macro_f1": self.macro_f1,
            "exact_match": self.exact_match,
            "hamming_loss": self.hamming_loss,
            "sentinel_accuracy": self.sentinel_accuracy,
            "failures": list(self.failures),
        }

    def to_text_table(self) -> str:
        width = max(len(name) for name in self.per_class)
        lines = [
            f"Evaluation of backend {self.backend_name!r} on {self.n_examples} examples",
            "",
            f"{'class'.ljust(width)}  precision  recall  f1      support",
        ]
        for name, m in sorted(self.per_class.items()):
            lines.append(
                f"{name.ljust(width)}  {m.precision:9.3f}  {m.recall:6.3f}  "
                f"{m.f1:6.3f}  {m.support:7d}"
            )
        lines += [
            "",
            f"micro F1          {self.micro_f1:.4f}",
            f"macro F1          {self.macro_f1:.4f}",
            f"exact match       {self.exact_match:.4f}",
            f"hamming loss      {self.hamming_loss:.4f}",
            f"sentinel accuracy {self.sentinel_accuracy:.4f}",
            f"failures          {len(self.failures)}",
        ]
        return "\n".join(lines)

    def to_tsv(self) -> str:
        """Per-class rows as tab-separated values (spreadsheet-friendly)."""
        rows = ["class\tprecision\trecall\tf1\tsupport\ttp\tfp\tfn"]
        for name, m in sorted(self.per_class.items()):
            rows.append(
                f"{name}\t{m.precision:.6f}\t{m.recall:.6f}\t{m.f1:.6f}"
                f"\t{m.support}\t{m.tp}\t{m.fp}\t{m.fn}"
            )
        return "\n".join(rows) + "\n"


def _predicted(backend: ExtractorBackend, text: str) -> tuple[frozenset[IntentType], str | None]:
    outcome = backend.classify(text)
    if outcome.kind is OutcomeKind.INTENTS:
        return outcome.intent_types, None
    return frozenset(), _MARKER_BY_KIND[outcome.kind]


def _safe_div(num: int, den: int) -> float:
    return num / den if den else 0.0


def _f1(precision: float, recall: float) -> float:
    return 2 * precision * recall / (precision + recall) if precision + recall else 0.0


def evaluate(backend: ExtractorBackend, dataset: Sequence[LabeledExample]) -> EvalReport:
    """Run the backend over the dataset and score it.

    Exact match requires the predicted label set (or sentinel) to equal
    the gold annotation exactly; Hamming loss averages the per-example
    symmetric difference divided by the six classes.
    """
    if not dataset:
        raise EmptyDataset("dataset is empty")

    tp = {t: 0 for t in IntentType}
    fp = {t: 0 for t in IntentType}
    fn = {t: 0 for t in IntentType}
    support = {t: 0 for t in IntentType}
    exact = 0
    hamming_total = 0  # sum of symmetric-difference sizes
    sentinel_total = 0
    sentinel_correct = 0
    failures: list[dict[str, Any]] = []

    for example in dataset:
        predicted_labels, predicted_marker = _predicted(backend, example.text)
        for t in IntentType:
            gold_has = t in example.labels
            pred_has = t in predicted_labels
            support[t] += gold_has
            if pred_has and gold_has:
                tp[t] += 1
            elif pred_has:
                fp[t] += 1
            elif gold_has:
                fn[t] += 1
        diff = len(predicted_labels ^ example.labels)
        hamming_total += diff

        if example.marker is not None:
            sentinel_total += 1
            sentinel_correct += predicted_marker == example.marker

        is_exact = predicted_labels == example.labels and predicted_marker == example.marker
        exact += is_exact
        if not is_exact:
            failures.append(
                {
                    "id": example.id,
                    "text": example.text,
                    "gold_labels": sorted(t.canonical_name for t in example.labels),
                    "gold_marker": example.marker,
                    "predicted_labels": sorted(t.canonical_name for t in predicted_labels),
                    "predicted_marker": predicted_marker,
                }
            )

    per_class: dict[str, ClassMetrics] = {}
    for t in IntentType:
        precision = _safe_div(tp[t], tp[t] + fp[t])
        recall = _safe_div(tp[t], tp[t] + fn[t])
        per_class[t.canonical_name] = ClassMetrics(
            precision=precision,
            recall=recall,
            f1=_f1(precision, recall),
            support=support[t],
            tp=tp[t],
            fp=fp[t],
            fn=fn[t],
        )

    tp_all = sum(tp.values())
    fp_all = sum(fp.values())
    fn_all = sum(fn.values())
    micro_p = _safe_div(tp_all, tp_all + fp_all)
    micro_r = _safe_div(tp_all, tp_all + fn_all)

    with_support = [per_class[t.canonical_name].f1 for t in IntentType if support[t] > 0]
    macro_f1 = sum(with_support) / len(with_support) if with_support else 0.0

    return EvalReport(
        backend_name=backend.name,
        n_examples=len(dataset),
        per_class=per_class,
        micro_precision=micro_p,
        micro_recall=micro_r,
        micro_f1=_f1(micro_p, micro_r),
        macro_f1=macro_f1,
        exact_match=exact / len(dataset),
        hamming_loss=hamming_total / (N_CLASSES * len(dataset)),
        sentinel_accuracy=(sentinel_correct / sentinel_total) if sentinel_total else 1.0,
        failures=failures,
    )
