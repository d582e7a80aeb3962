"""Shared fixtures: canonical windows and random polytope generators."""

import numpy as np
import pytest

from gonb import from_vertices, normalize, volume

PENTAGON_VERTICES = np.array([(0, 0), (2, 0), (2, 2), (1, 2), (0, 1)], dtype=float)


def make_pentagon():
    # square with the top left-hand corner cut off
    return normalize(
        [((0, -1), 0), ((1, 0), 2), ((0, 1), 2), ((-1, 1), 1), ((-1, 0), 0)], 2
    )


def make_unit_square():
    return normalize(
        [((1, 0), 1), ((-1, 0), 0), ((0, 1), 1), ((0, -1), 0)], 2
    )


def make_simplex2():
    return normalize([((-1, 0), 0), ((0, -1), 0), ((1, 1), 1)], 2)


@pytest.fixture
def pentagon():
    return make_pentagon()


@pytest.fixture
def unit_square():
    return make_unit_square()


@pytest.fixture
def simplex2():
    return make_simplex2()


@pytest.fixture
def unit_cube():
    return normalize(
        [((1, 0, 0), 1), ((-1, 0, 0), 0), ((0, 1, 0), 1), ((0, -1, 0), 0),
         ((0, 0, 1), 1), ((0, 0, -1), 0)], 3
    )


def random_polygon(rng, scale=1.2, min_area=0.2, max_tries=50):
    """Full-dimensional random polygon from a planted point hull."""
    for _ in range(max_tries):
        pts = rng.uniform(-scale, scale, (int(rng.integers(4, 9)), 2))
        try:
            P = from_vertices(pts)
        except Exception:
            continue
        if volume(P) >= min_area:
            return P
    raise RuntimeError("could not generate a random polygon")


def random_polytope_3d(rng, scale=1.0, min_vol=0.05, max_tries=50):
    for _ in range(max_tries):
        pts = rng.uniform(-scale, scale, (int(rng.integers(5, 10)), 3))
        try:
            P = from_vertices(pts)
        except Exception:
            continue
        if volume(P) >= min_vol:
            return P
    raise RuntimeError("could not generate a random 3-d polytope")


def symmetrized_polygon(rng, scale=1.0):
    """Random centrally symmetric polygon (hull of points and their negations)."""
    pts = rng.uniform(-scale, scale, (int(rng.integers(3, 6)), 2))
    return from_vertices(np.concatenate([pts, -pts]))
