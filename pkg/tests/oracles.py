"""Independent brute-force oracles the implementation is checked against.

Everything here is written straight from the defining formulas, with no code
shared with the package: Kneser-Ney probabilities recomputed from scratch per
query, Model-1 EM over plain dicts, Pearson covariance by explicit loops, and
t-distribution p-values through mpmath's regularized incomplete beta.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict

import mpmath

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"
NULL = "<null>"


class BruteForceKn:
    """Interpolated Kneser-Ney evaluated directly from stored sentences.

    Mirrors the documented formulation: highest order uses raw counts; each
    lower order uses recursively adjusted continuation counts except for
    grams starting with BOS, which keep raw counts; per-order discount
    n1/(n1+2*n2) with 0.75 fallback; the recursion grounds in a uniform
    distribution over types + {UNK, EOS}.
    """

    def __init__(self, sentences, order):
        self.order = order
        self.sentences = [tuple(s) for s in sentences]
        self.types = sorted({u for s in self.sentences for u in s})
        self.n_pred = len(self.types) + 2  # + UNK + EOS

        raw = [Counter() for _ in range(order + 1)]
        for s in self.sentences:
            padded = (BOS,) * (order - 1) + s + (EOS,)
            for pos in range(order - 1, len(padded)):
                for k in range(1, order + 1):
                    raw[k][padded[pos - k + 1 : pos + 1]] += 1
        counts = [dict() for _ in range(order + 1)]
        counts[order] = dict(raw[order])
        for k in range(order - 1, 0, -1):
            adj = defaultdict(int)
            for gram in counts[k + 1]:
                adj[gram[1:]] += 1
            for gram, c in raw[k].items():
                if gram[0] == BOS:
                    adj[gram] = c
            counts[k] = dict(adj)
        self.counts = counts

        self.discount = [0.0] * (order + 1)
        for k in range(1, order + 1):
            n1 = sum(1 for c in counts[k].values() if c == 1)
            n2 = sum(1 for c in counts[k].values() if c == 2)
            d = n1 / (n1 + 2.0 * n2) if (n1 + 2 * n2) > 0 else 0.0
            self.discount[k] = d if d > 0.0 else 0.75

    def prob(self, unit, context):
        unit = unit if (unit in self.types or unit == EOS) else UNK
        ctx = tuple(
            u if (u in self.types or u == BOS) else UNK for u in context
        )
        if self.order > 1:
            ctx = ((BOS,) * (self.order - 1) + ctx)[-(self.order - 1) :]
        else:
            ctx = ()
        return self._p(self.order, ctx, unit)

    def _p(self, k, ctx, w):
        if k == 0:
            return 1.0 / self.n_pred
        total = sum(c for g, c in self.counts[k].items() if g[:-1] == ctx)
        if total == 0:
            return self._p(k - 1, ctx[1:], w)
        n_types = sum(1 for g in self.counts[k] if g[:-1] == ctx)
        c = self.counts[k].get(ctx + (w,), 0)
        d = self.discount[k]
        return max(c - d, 0.0) / total + d * n_types / total * self._p(k - 1, ctx[1:], w)


def brute_force_em(pairs, iterations):
    """Model-1 EM with a NULL source word; returns (table, loglik per iter)."""
    pairs = [(tuple(s) + (NULL,), tuple(t)) for s, t in pairs if t]
    cooc = defaultdict(set)
    for bag, tgt in pairs:
        for sw in bag:
            cooc[sw].update(tgt)
    t = {sw: {tw: 1.0 / len(ts) for tw in ts} for sw, ts in cooc.items()}
    logliks = []
    for _ in range(iterations):
        counts = defaultdict(lambda: defaultdict(float))
        ll = 0.0
        for bag, tgt in pairs:
            for tw in tgt:
                denom = sum(t[sw].get(tw, 0.0) for sw in bag)
                ll += math.log(denom / len(bag))
                for sw in bag:
                    p = t[sw].get(tw, 0.0)
                    if p > 0.0:
                        counts[sw][tw] += p / denom
        for sw, row in counts.items():
            z = sum(row.values())
            t[sw] = {tw: c / z for tw, c in row.items()}
        logliks.append(ll)
    return t, logliks


def brute_force_pearson_r(x, y):
    """Pearson's r by direct evaluation of the covariance formula."""
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(x, y))
    vx = sum((a - mx) ** 2 for a in x)
    vy = sum((b - my) ** 2 for b in y)
    return cov / math.sqrt(vx * vy)


def t_pvalue_betainc(r, n):
    """Two-sided p-value for a correlation r on n points, via the regularized
    incomplete beta: p = I_{nu/(nu+t^2)}(nu/2, 1/2) with nu = n - 2."""
    if abs(r) >= 1.0:
        return 0.0
    nu = n - 2
    t = r * math.sqrt(nu / (1.0 - r * r))
    x = nu / (nu + t * t)
    return float(mpmath.betainc(nu / 2.0, 0.5, 0, x, regularized=True))
