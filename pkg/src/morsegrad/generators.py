"""Seeded random complexes with component-wise injective vertex grades."""

from __future__ import annotations

import itertools
import random

from .complex import SimplicialComplex
from .filtration import Filtration, extend_max


def random_complex(rng: random.Random, vertices: int, dim: int, density: float = 0.4) -> SimplicialComplex:
    """Closure of a random set of top simplices plus random edges.

    Every vertex is present; top simplices are drawn among all
    ``(dim + 1)``-subsets with probability ``density``.
    """
    verts = list(range(vertices))
    tops = [s for s in itertools.combinations(verts, dim + 1) if rng.random() < density]
    if dim > 1:
        tops += [e for e in itertools.combinations(verts, 2) if rng.random() < density / 3]
    tops += [(v,) for v in verts]
    return SimplicialComplex(tops, closure=True)


def random_values(rng: random.Random, vertices, n: int, span: int | None = None) -> dict[int, tuple[int, ...]]:
    """Component-wise injective values: one random permutation per coordinate."""
    verts = list(vertices)
    span = max(span or 2 * len(verts), len(verts))
    cols = [rng.sample(range(span), len(verts)) for _ in range(n)]
    return {v: tuple(col[k] for col in cols) for k, v in enumerate(verts)}


def random_filtration(
    seed: int,
    *,
    n: int = 2,
    dim: int = 2,
    vertices: tuple[int, int] = (4, 12),
    density: float | None = None,
) -> Filtration:
    """A reproducible random max-extension filtration.

    The vertex count is drawn from the inclusive range ``vertices``.  Default
    densities keep the cell count moderate for each dimension.
    """
    rng = random.Random(seed)
    k = rng.randint(*vertices)
    if density is None:
        density = {1: 0.5, 2: 0.25, 3: 0.08}.get(dim, 0.05)
    K = random_complex(rng, k, dim, density)
    return extend_max(K, random_values(rng, K.vertices, n))
