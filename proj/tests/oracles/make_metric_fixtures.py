# chemgym - Copyright 2026 The chemgym Authors.
# SPDX-License-Identifier: Apache-2.0
"""Golden metric fixtures from scikit-learn / scipy, and softmax values from
mpmath at 50 digits."""

import json
from pathlib import Path

import mpmath
import numpy as np
from scipy.stats import spearmanr
from sklearn.metrics import average_precision_score, roc_auc_score

OUT = Path(__file__).resolve().parents[1] / "data" / "metric_fixtures.json"


def main():
    rng = np.random.default_rng(20260305)
    fixtures = []
    for k in range(6):
        n = 20
        labels = rng.integers(0, 2, n)
        labels[0], labels[1] = 0, 1
        if k % 2 == 0:
            scores = rng.random(n)
        else:
            # Coarse scores to exercise ties.
            scores = rng.integers(0, 5, n) / 4.0
        x = rng.normal(size=n)
        y = x + rng.normal(scale=0.8, size=n)
        if k >= 3:
            x = np.round(x, 0)
            y = np.round(y, 0)
        fixtures.append({
            "scores": scores.tolist(),
            "labels": labels.tolist(),
            "auroc": roc_auc_score(labels, scores),
            "auprc": average_precision_score(labels, scores),
            "x": x.tolist(),
            "y": y.tolist(),
            "spearman": float(spearmanr(x, y).statistic),
        })
    mpmath.mp.dps = 50
    logits = [mpmath.mpf(1), mpmath.mpf(0), mpmath.mpf(-1)]
    z = sum(mpmath.exp(v) for v in logits)
    softmax = [float(mpmath.exp(v) / z) for v in logits]
    OUT.write_text(json.dumps({"fixtures": fixtures,
                               "softmax_1_0_m1": softmax}, indent=1) + "\n")


if __name__ == "__main__":
    main()
