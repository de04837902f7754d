"""Top-X selection and the precision/recall/success evaluation harness.

Metrics are micro-averaged over all selected candidates: precision is
selected-positives over selected-count, recall is selected-positives over
total positives, and success rate is the fraction of characters with at
least one selected positive. For X = 1 the precision and success numbers
coincide by construction (one selection per character).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import MissingScores


@dataclass
class Candidate:
    id: str
    character: str
    score: float | None = None
    label: bool | None = None
    image: object = None


@dataclass
class EvalDataset:
    """Per-character labeled candidate pools."""
    per_character: dict[str, list[Candidate]]

    def __post_init__(self):
        for ch, pool in self.per_character.items():
            if not pool:
                raise ValueError(f"character {ch!r} has no candidates")
            for c in pool:
                if c.label is None:
                    raise ValueError(f"candidate {c.id} of {ch!r} has no label")

    @property
    def total_candidates(self) -> int:
        return sum(len(p) for p in self.per_character.values())

    @property
    def total_positives(self) -> int:
        return sum(c.label for p in self.per_character.values() for c in p)

    @property
    def positive_rate(self) -> float:
        return self.total_positives / self.total_candidates


@dataclass
class TopXReport:
    rows: dict[int, tuple[float, float, float]]  # X -> (precision, recall, success) in %
    n_iterations: int | None = None
    method: str = "ranking"

    def precision(self, x: int) -> float:
        return self.rows[x][0]

    def recall(self, x: int) -> float:
        return self.rows[x][1]

    def success(self, x: int) -> float:
        return self.rows[x][2]

    def to_json(self) -> str:
        return json.dumps(
            {
                "method": self.method,
                "n_iterations": self.n_iterations,
                "metrics": {
                    str(x): {"precision": p, "recall": r, "success_rate": s}
                    for x, (p, r, s) in sorted(self.rows.items())
                },
            },
            indent=2,
        )

    def to_text(self) -> str:
        xs = sorted(self.rows)
        head = f"{'method':<10}{'metric':<8}" + "".join(f"Top{x:<7}" for x in xs)
        lines = [head, "-" * len(head)]
        for mi, metric in enumerate(("p", "r", "s")):
            cells = "".join(f"{self.rows[x][mi]:<10.1f}" for x in xs)
            lines.append(f"{self.method:<10}{metric:<8}{cells}")
        return "\n".join(lines)


def select_top_x(candidates: list[Candidate], x: int) -> list[Candidate]:
    """Highest scores first, ties broken by ascending id; min(x, n) results."""
    if x < 1:
        raise ValueError("x must be >= 1")
    missing = [c.id for c in candidates if c.score is None]
    if missing:
        raise MissingScores(f"candidates without scores: {missing[:5]}")
    ranked = sorted(candidates, key=lambda c: (-c.score, c.id))
    return ranked[: min(x, len(ranked))]


def evaluate_topx(
    dataset: EvalDataset, scores: dict[str, float], xs: list[int]
) -> TopXReport:
    """Score-ranked Top-X metrics over the labeled dataset."""
    pools = {}
    for ch, pool in dataset.per_character.items():
        scored = []
        for c in pool:
            if c.id not in scores:
                raise MissingScores(f"no score for candidate {c.id}")
            scored.append(
                Candidate(id=c.id, character=c.character, score=scores[c.id], label=c.label)
            )
        pools[ch] = scored
    total_pos = dataset.total_positives
    rows = {}
    for x in xs:
        sel_pos = sel_cnt = chars_hit = 0
        for ch, pool in pools.items():
            top = select_top_x(pool, x)
            hits = sum(c.label for c in top)
            sel_pos += hits
            sel_cnt += len(top)
            chars_hit += hits > 0
        rows[x] = (
            100.0 * sel_pos / sel_cnt if sel_cnt else 0.0,
            100.0 * sel_pos / total_pos if total_pos else 0.0,
            100.0 * chars_hit / len(pools),
        )
    return TopXReport(rows=rows, method="ranking")


def random_baseline(
    dataset: EvalDataset, xs: list[int], n_iterations: int, seed: int
) -> TopXReport:
    """Means over uniform without-replacement selections.

    The per-character positive count of such a draw is hypergeometric, which
    is all the three metrics depend on.
    """
    if n_iterations < 1:
        raise ValueError("n_iterations must be >= 1")
    rng = np.random.default_rng(seed)
    chars = sorted(dataset.per_character)
    total_pos = dataset.total_positives
    rows = {}
    for x in xs:
        sel_pos = np.zeros(n_iterations)
        sel_cnt = 0
        chars_hit = np.zeros(n_iterations)
        for ch in chars:
            pool = dataset.per_character[ch]
            n = len(pool)
            good = sum(c.label for c in pool)
            take = min(x, n)
            hits = rng.hypergeometric(good, n - good, take, size=n_iterations)
            sel_pos += hits
            sel_cnt += take
            chars_hit += hits > 0
        rows[x] = (
            float(100.0 * np.mean(sel_pos / sel_cnt)) if sel_cnt else 0.0,
            float(100.0 * np.mean(sel_pos / total_pos)) if total_pos else 0.0,
            float(100.0 * np.mean(chars_hit / len(chars))),
        )
    return TopXReport(rows=rows, n_iterations=n_iterations, method="random")


def calibrate_threshold(scores: list[float], percentile: float = 60.0) -> float:
    """The qualification cut: a percentile of an observed score corpus."""
    if not scores:
        raise ValueError("cannot calibrate a threshold from no scores")
    return float(np.percentile(np.asarray(scores, dtype=np.float64), percentile))
