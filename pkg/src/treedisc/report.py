"""Matplotlib figures rendered next to the CLI's delimited reports."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .eventlog import TraceVariant

_ACCEPT_COLOR = "#2a9d52"
_REJECT_COLOR = "#c0392b"
_UNKNOWN_COLOR = "#8a8a8a"


def _variant_caption(variant: TraceVariant, max_chars: int = 45) -> str:
    text = " → ".join(variant.activities) or "(empty trace)"
    if len(text) > max_chars:
        text = text[: max_chars - 1] + "…"
    return f"#{variant.variant_id} {text}"


def variant_frequency_figure(variants: Sequence[TraceVariant], total_cases: int,
                             path: str, top: int = 20) -> None:
    """Horizontal bars of case counts for the most frequent variants."""
    shown = list(variants[:top])
    fig, ax = plt.subplots(figsize=(9, max(2.0, 0.38 * len(shown) + 1.2)))
    ys = range(len(shown))
    ax.barh(ys, [v.case_count for v in shown], color="#4878b0")
    ax.set_yticks(list(ys))
    ax.set_yticklabels([_variant_caption(v) for v in shown], fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("cases")
    title = f"Trace variants by frequency ({len(variants)} total, {total_cases} cases)"
    ax.set_title(title, fontsize=10)
    for y, v in zip(ys, shown):
        share = v.case_count / total_cases if total_cases else 0.0
        ax.annotate(f" {share:.2%}", (v.case_count, y), va="center", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def conformance_figure(variants: Sequence[TraceVariant],
                       verdicts: dict[int, bool | None],
                       path: str, top: int = 25) -> None:
    """Per-variant verdict bars plus an aggregate accepted-cases panel."""
    shown = list(variants[:top])
    colors = {True: _ACCEPT_COLOR, False: _REJECT_COLOR, None: _UNKNOWN_COLOR}
    fig, (ax, agg) = plt.subplots(
        1, 2, figsize=(10, max(2.2, 0.38 * len(shown) + 1.2)),
        gridspec_kw={"width_ratios": [3, 1]})
    ys = range(len(shown))
    ax.barh(ys, [v.case_count for v in shown],
            color=[colors[verdicts.get(v.variant_id)] for v in shown])
    ax.set_yticks(list(ys))
    ax.set_yticklabels([_variant_caption(v) for v in shown], fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("cases")
    ax.set_title("Variant conformance (green = accepted)", fontsize=10)

    total = sum(v.case_count for v in variants)
    accepted = sum(v.case_count for v in variants if verdicts.get(v.variant_id) is True)
    rejected = sum(v.case_count for v in variants if verdicts.get(v.variant_id) is False)
    unknown = total - accepted - rejected
    agg.bar(["accepted", "rejected", "unknown"], [accepted, rejected, unknown],
            color=[_ACCEPT_COLOR, _REJECT_COLOR, _UNKNOWN_COLOR])
    agg.set_title(f"{accepted / total:.2%} of cases" if total else "no cases", fontsize=10)
    agg.tick_params(axis="x", labelsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
