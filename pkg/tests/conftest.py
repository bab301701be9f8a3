"""Shared fixtures and random graph generators.

Monotone graphs are produced three ways:
  * n=1: sort primal and dual samples jointly, a monotone rearrangement
  * n=2: subgradient samples of a random convex quadratic
  * n=2: subgradient samples of a random max of affine functions
Non-monotone graphs come from shuffling the duals of a monotone graph
until some pair violates the gap inequality by a fixed margin.
"""

import numpy as np
import pytest

from monokit import FiniteGraph, monotone_gap, pdp


def monotone_graph_1d(rng, npts):
    xs = np.sort(rng.uniform(-2.0, 2.0, npts))
    ss = np.sort(rng.uniform(-2.0, 2.0, npts))
    # distinct primals so the graph is a function sample
    xs = xs + np.arange(npts) * 1e-6
    return [pdp([x], [s]) for x, s in zip(xs, ss)]


def monotone_graph_quadratic(rng, npts):
    # gradient of 0.5 x'Ax + b'x with A symmetric PSD; the scale keeps
    # every dual coordinate inside [-2, 2]
    root = rng.uniform(-0.4, 0.4, (2, 2))
    A = root @ root.T
    b = rng.uniform(-0.5, 0.5, 2)
    pts = []
    for _ in range(npts):
        x = rng.uniform(-2.0, 2.0, 2)
        pts.append(pdp(x, A @ x + b))
    return pts


def monotone_graph_max_affine(rng, npts):
    # subgradient of max_j (s_j . x + c_j) picks the active slope
    k = rng.integers(2, 5)
    slopes = rng.uniform(-1.5, 1.5, (k, 2))
    consts = rng.uniform(-1.0, 1.0, k)
    pts = []
    for _ in range(npts):
        x = rng.uniform(-2.0, 2.0, 2)
        j = int(np.argmax(slopes @ x + consts))
        pts.append(pdp(x, slopes[j]))
    return pts


def random_monotone_graph(rng, dimension=None):
    npts = int(rng.integers(3, 9))
    if dimension is None:
        dimension = int(rng.integers(1, 3))
    if dimension == 1:
        return monotone_graph_1d(rng, npts)
    if rng.random() < 0.5:
        return monotone_graph_quadratic(rng, npts)
    return monotone_graph_max_affine(rng, npts)


def min_pairwise_gap(points):
    worst = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            worst = min(worst, monotone_gap(points[i], points[j]))
    return worst


def shuffle_until_non_monotone(rng, points, margin=1e-4, attempts=200):
    """Permute duals among the primals until a pair clearly violates
    monotonicity.  Returns None if the graph resists shuffling."""
    duals = [p.xstar for p in points]
    for _ in range(attempts):
        order = rng.permutation(len(points))
        cand = [pdp(p.x, duals[k]) for p, k in zip(points, order)]
        if min_pairwise_gap(cand) < -margin:
            return cand
    return None


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)


@pytest.fixture
def three_point_graph():
    # staircase in the plane x = xstar, used all over the suite
    return FiniteGraph([pdp([0.0], [0.0]), pdp([0.5], [1.0]), pdp([1.0], [1.0])])
