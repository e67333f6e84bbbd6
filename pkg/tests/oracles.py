"""Reference implementations for the tests: definitions made literal.

Everything here enumerates, so it only scales to toy sizes, and none of it
shares code with the library's computation paths beyond table lookups.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from halftruth import (
    DbnModel,
    GenSpec,
    Stage1Node,
    additive,
    general,
    generate,
    linear,
    transition_prob,
)


def enumerate_hide_posterior(model: DbnModel, x0, indices) -> np.ndarray:
    """Marginalize the hidden outcomes by enumerating every joint assignment."""
    hidden = sorted(indices)
    out = np.zeros(model.n1)
    for assign in itertools.product((0, 1), repeat=len(hidden)):
        bits = list(x0)
        w = 1.0
        for b, j in zip(assign, hidden):
            bits[j] = b
            w *= model.priors[j] if b else 1.0 - model.priors[j]
        for i, node in enumerate(model.nodes):
            out[i] += w * transition_prob(node, [bits[j] for j in node.parents])
    return out


def enumerate_flip_posterior(model: DbnModel, x0, indices) -> np.ndarray:
    bits = list(x0)
    for j in indices:
        bits[j] = 1 - bits[j]
    return np.array(
        [transition_prob(node, [bits[j] for j in node.parents]) for node in model.nodes]
    )


def enumerate_lkm(q, r, p) -> float:
    """Average ||x - y||_p over the two product distributions, by enumeration."""
    q, r = list(q), list(r)
    n = len(q)
    total = 0.0
    for x in itertools.product((0, 1), repeat=n):
        px = math.prod(q[i] if x[i] else 1.0 - q[i] for i in range(n))
        if px == 0.0:
            continue
        for y in itertools.product((0, 1), repeat=n):
            py = math.prod(r[i] if y[i] else 1.0 - r[i] for i in range(n))
            m = sum(abs(a - b) for a, b in zip(x, y))
            if p == math.inf:
                dist = 1.0 if m else 0.0
            else:
                dist = m ** (1.0 / p)
            total += px * py * dist
    return total


def enumerate_lkm_fast(q, r, p) -> float:
    """Same 2^n x 2^n enumeration as :func:`enumerate_lkm`, numpy-evaluated."""
    q = np.asarray(q, dtype=float)
    r = np.asarray(r, dtype=float)
    n = q.size
    outcomes = np.array(list(itertools.product((0, 1), repeat=n)), dtype=bool).reshape(-1, n)
    px = np.prod(np.where(outcomes, q, 1.0 - q), axis=1)
    py = np.prod(np.where(outcomes, r, 1.0 - r), axis=1)
    hamming = (outcomes[:, None, :] != outcomes[None, :, :]).sum(axis=2)
    if p == math.inf:
        dist = (hamming > 0).astype(float)
    else:
        dist = np.where(hamming > 0, hamming.astype(float) ** (1.0 / p), 0.0)
    return float(px @ dist @ py)


def enumerate_objective(model: DbnModel, x0, indices, action, p, target=None) -> float:
    if action == "hide":
        r = enumerate_hide_posterior(model, x0, indices)
    else:
        r = enumerate_flip_posterior(model, x0, indices)
    if target is None:
        q = np.array(
            [transition_prob(node, [x0[j] for j in node.parents]) for node in model.nodes]
        )
        return enumerate_lkm(q, r, p)
    return -enumerate_lkm(list(target), r, p)


def enumerate_best_mask(model: DbnModel, x0, k, action, p, target=None):
    """Optimal mask by trying everything; lexicographically smallest on ties."""
    best_set: tuple[int, ...] = ()
    best_value = enumerate_objective(model, x0, (), action, p, target)
    for m in range(1, k + 1):
        for cand in itertools.combinations(range(model.n0), m):
            value = enumerate_objective(model, x0, cand, action, p, target)
            if value > best_value or (value == best_value and cand < best_set):
                best_value, best_set = value, cand
    return best_set, best_value


def random_model(rng: np.random.Generator, n0, n1, kinds=("general", "additive", "linear")):
    """Small mixed-kind model with every probability drawn fresh."""
    priors = rng.random(n0)
    nodes = []
    for _ in range(n1):
        npar = int(rng.integers(1, min(n0, 4) + 1))
        parents = sorted(rng.choice(n0, size=npar, replace=False).tolist())
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind == "general":
            nodes.append(Stage1Node(parents, general(rng.random(1 << npar))))
        elif kind == "additive":
            nodes.append(Stage1Node(parents, additive(rng.random(npar + 1))))
        else:
            w = rng.random(npar)
            nodes.append(Stage1Node(parents, linear(w / (w.sum() + rng.random()))))
    return DbnModel(n0, priors, nodes)


def random_instance(rng: np.random.Generator, family: str, max_n=10, monotone=False):
    """A generated model plus a realization drawn from its priors."""
    n = int(rng.integers(2, max_n + 1))
    spec = GenSpec(
        family,
        n0=n,
        n1=int(rng.integers(1, max_n + 1)),
        edge_density=float(rng.uniform(0.2, 0.9)),
        monotone=monotone,
        seed=int(rng.integers(2**32)),
    )
    model = generate(spec)
    x0 = tuple(int(v) for v in (rng.random(model.n0) < model.priors_array))
    return model, x0
