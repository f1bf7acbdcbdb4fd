#!/usr/bin/env python3
"""Straight-line preference-weight computation for a demonstration directory.

Written independently of the C++ library; used to produce expected values for
the toy fixture.
"""
import json
import math
import sys
from pathlib import Path

import numpy as np


def load(dirname):
    d = Path(dirname)
    manifest = json.loads((d / "manifest.json").read_text())
    xs, qs = [], []
    for rec in manifest["records"]:
        xs.append(np.loadtxt(d / rec["X"], delimiter=",", ndmin=2))
        qs.append(np.loadtxt(d / rec["Q"], delimiter=",", ndmin=2, skiprows=1))
    return xs, qs


def cv(values):
    mean = values.mean(axis=0)
    std = np.sqrt(((values - mean) ** 2).mean(axis=0))
    out = np.zeros_like(mean)
    for idx in np.ndindex(mean.shape):
        if mean[idx] == 0:
            out[idx] = 0.0 if std[idx] == 0 else 1.0
        else:
            out[idx] = min(1.0, std[idx] / mean[idx])
    return out


def weights(xs, qs, alpha=2.0, beta=0.5, tau=2.0, c=0.5):
    ys = np.stack([x @ q for x, q in zip(xs, qs)])
    cv_obs = cv(ys)
    cv_div = cv(np.vstack(qs))
    w = np.empty_like(cv_obs)
    for m in range(w.shape[0]):
        for u in range(w.shape[1]):
            w[m, u] = cv_div[u] / tau * math.cos(alpha * cv_obs[m, u] + beta) + c
    return np.clip(w, 0.0, 1.0)


if __name__ == "__main__":
    w = weights(*load(sys.argv[1]))
    for row in w:
        print(",".join(repr(float(v)) for v in row))
