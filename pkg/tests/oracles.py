"""Brute-force reference computations, deliberately independent of eafrelay.

Everything here works on plain nested lists / numpy arrays with explicit
Python loops over outcomes; nothing imports the package under test.
"""

import itertools
import math
from collections import Counter, defaultdict

import numpy as np


def outcomes(mass):
    """Yield (index tuple, probability) for every cell of a dense table."""
    mass = np.asarray(mass)
    for idx in itertools.product(*(range(s) for s in mass.shape)):
        yield idx, float(mass[idx])


def marginal_dict(mass, axes):
    out = defaultdict(float)
    for idx, p in outcomes(mass):
        out[tuple(idx[a] for a in axes)] += p
    return out


def marginal_array(mass, axes):
    mass = np.asarray(mass)
    out = np.zeros(tuple(mass.shape[a] for a in axes))
    for idx, p in outcomes(mass):
        out[tuple(idx[a] for a in axes)] += p
    return out


def entropy(p):
    h = 0.0
    for _, v in outcomes(p):
        if v > 0:
            h -= v * math.log2(v)
    return h


def cmi(mass, a, b, c=()):
    """I(A;B|C) = sum p(a,b,c) log p(a,b,c) p(c) / (p(a,c) p(b,c)) by explicit summation."""
    pabc = marginal_dict(mass, tuple(a) + tuple(b) + tuple(c))
    pac = marginal_dict(mass, tuple(a) + tuple(c))
    pbc = marginal_dict(mass, tuple(b) + tuple(c))
    pc = marginal_dict(mass, tuple(c))
    na, nb = len(a), len(b)
    total = 0.0
    for key, p in pabc.items():
        if p <= 0:
            continue
        ka, kb, kc = key[:na], key[na:na + nb], key[na + nb:]
        total += p * math.log2(p * pc[kc] / (pac[ka + kc] * pbc[kb + kc]))
    return total


def relay_joint(px1, px2, channel, quantizer):
    """p(x1) p(x2) p(y,y1|x1,x2) p(yh|x2,y1) by an explicit five-fold loop."""
    n1, n2, ny, ny1 = np.shape(channel)
    nyh = np.shape(quantizer)[2]
    out = np.zeros((n1, n2, ny, ny1, nyh))
    for x1 in range(n1):
        for x2 in range(n2):
            for y in range(ny):
                for y1 in range(ny1):
                    for yh in range(nyh):
                        out[x1, x2, y, y1, yh] = (px1[x1] * px2[x2] * channel[x1][x2][y][y1]
                                                  * quantizer[x2][y1][yh])
    return out


X1, X2, Y, Y1, YH = range(5)


def rate_terms(joint5):
    """The six information quantities of the five-variable joint, by definition."""
    return {
        "i_x2_y": cmi(joint5, [X2], [Y]),
        "i_x1_y_g_x2": cmi(joint5, [X1], [Y], [X2]),
        "i_yh_y1_g_x2y": cmi(joint5, [YH], [Y1], [X2, Y]),
        "i_yh_y1_g_x1x2y": cmi(joint5, [YH], [Y1], [X1, X2, Y]),
        "i_x1_yh_g_x2y": cmi(joint5, [X1], [YH], [X2, Y]),
        "i_x1_yyh_g_x2": cmi(joint5, [X1], [Y, YH], [X2]),
    }


def erased_quantizer(quantizer, q):
    """Append an erasure symbol taken with probability 1-q, by explicit loops."""
    n2, ny1, nyh = np.shape(quantizer)
    out = np.zeros((n2, ny1, nyh + 1))
    for x2 in range(n2):
        for y1 in range(ny1):
            for yh in range(nyh):
                out[x2, y1, yh] = q * quantizer[x2][y1][yh]
            out[x2, y1, nyh] = 1 - q
    return out


def typical_by_counting(xs, ys, p, eps):
    """Strong typicality by counting symbol pairs with a Counter."""
    n = len(xs)
    counts = Counter(zip(xs, ys))
    rows, cols = len(p), len(p[0])
    for a in range(rows):
        for b in range(cols):
            k = counts.get((a, b), 0)
            if p[a][b] == 0 and k > 0:
                return False
            if abs(k / n - p[a][b]) > eps + 1e-12:
                return False
    for (a, b) in counts:
        if not (0 <= a < rows and 0 <= b < cols):
            return False
    return True


def multinomial_typical_prob(p, n, eps):
    """Exact P(i.i.d. pairs from the 2x2 law p are strongly typical), by enumerating all joint types."""
    flat = [p[0][0], p[0][1], p[1][0], p[1][1]]
    total = 0.0
    for k0 in range(n + 1):
        for k1 in range(n + 1 - k0):
            for k2 in range(n + 1 - k0 - k1):
                k3 = n - k0 - k1 - k2
                ks = (k0, k1, k2, k3)
                if any(flat[i] == 0 and ks[i] > 0 for i in range(4)):
                    continue
                if any(abs(ks[i] / n - flat[i]) > eps + 1e-12 for i in range(4)):
                    continue
                logp = math.lgamma(n + 1) - sum(math.lgamma(k + 1) for k in ks)
                logp += sum(k * math.log(f) for k, f in zip(ks, flat) if k > 0)
                total += math.exp(logp)
    return total


def dirichlet_instance(rng, sizes):
    """Random (px1, px2, channel, quantizer) arrays with full support."""
    n1, n2, ny, ny1, nyh = sizes
    px1 = rng.dirichlet(np.ones(n1))
    px2 = rng.dirichlet(np.ones(n2))
    ch = rng.dirichlet(np.ones(ny * ny1), size=(n1, n2)).reshape(n1, n2, ny, ny1)
    qz = rng.dirichlet(np.ones(nyh), size=(n2, ny1))
    return px1, px2, ch, qz
