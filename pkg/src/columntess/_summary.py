"""Shared behaviour of the summary dataclasses: filling, export and pooling.

Every slot of a summary is either an intensity (count per unit measure) or
a mean over typical objects.  Alongside its value each slot keeps a
standard error and a pooling weight: the observation measure for
intensities and the number of sampled objects for means.  Pooling
replications with these weights gives ratio-of-sums estimators, which is
what a typical-object mean over a large union of windows is.
"""

import math
from dataclasses import fields

import numpy as np

META = ("stderr", "weights")


def mean_se(x):
    """Sample mean, naive standard error and sample size."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n == 0:
        return math.nan, math.nan, 0
    se = float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else math.nan
    return float(x.mean()), se, n


class Summary:
    """Mixin for dataclasses whose non-meta fields are float slots."""

    @classmethod
    def slot_names(cls):
        return [f.name for f in fields(cls) if f.name not in META]

    def values(self):
        return {k: getattr(self, k) for k in self.slot_names()}

    def to_dict(self):
        return {"values": self.values(), "stderr": dict(self.stderr),
                "weights": dict(self.weights)}

    @classmethod
    def from_dict(cls, d):
        return cls(**d["values"], stderr=dict(d.get("stderr", {})),
                   weights=dict(d.get("weights", {})))

    def put(self, name, samples):
        """Set slot ``name`` to the mean of ``samples``."""
        m, se, n = mean_se(samples)
        setattr(self, name, m)
        self.stderr[name] = se
        self.weights[name] = float(n)
        return self

    def put_intensity(self, name, count, measure):
        """Set slot ``name`` to ``count / measure`` with a Poisson error."""
        setattr(self, name, count / measure)
        self.stderr[name] = math.sqrt(count) / measure
        self.weights[name] = float(measure)
        return self


def pool(summaries):
    """Combine per-replication summaries slot by slot.

    The pooled value is the weighted mean ``sum(w_i x_i) / sum(w_i)``; its
    standard error is the ratio-estimator error across replications,
    ``sqrt(R / (R - 1) * sum(w_i^2 (x_i - m)^2)) / sum(w_i)``, which reduces
    to ``std / sqrt(R)`` for equal weights.  Slots that are NaN or have zero
    weight in a replication are skipped there; a slot seen in a single
    replication keeps that replication's own standard error.
    """
    summaries = list(summaries)
    cls = type(summaries[0])
    out = cls(**{k: math.nan for k in cls.slot_names()})
    for name in cls.slot_names():
        x = np.array([getattr(s, name) for s in summaries], dtype=float)
        w = np.array([s.weights.get(name, 1.0) for s in summaries], dtype=float)
        ok = np.isfinite(x) & (w > 0)
        x, w = x[ok], w[ok]
        if len(x) == 0:
            continue
        m = float((w * x).sum() / w.sum())
        if len(x) == 1:
            se = summaries[int(np.flatnonzero(ok)[0])].stderr.get(name, math.nan)
        else:
            r = len(x)
            se = float(math.sqrt(r / (r - 1) * ((w * (x - m)) ** 2).sum()) / w.sum())
        setattr(out, name, m)
        out.stderr[name] = se
        out.weights[name] = float(w.sum())
    return out
