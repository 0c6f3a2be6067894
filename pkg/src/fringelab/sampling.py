"""Seeded random states and ancilla Gram matrices for property checks."""

from __future__ import annotations

import itertools
from typing import Iterator

import numpy as np

from .core import DensityMatrix, GramMatrix, decohere, gram_from_ancilla_states


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def random_amplitudes(n: int, rng: np.random.Generator) -> np.ndarray:
    return _unit(rng.normal(size=n) + 1j * rng.normal(size=n))


def _density(m: np.ndarray) -> DensityMatrix:
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(m / np.trace(m).real)


def random_pure(n: int, rng: np.random.Generator) -> DensityMatrix:
    a = random_amplitudes(n, rng)
    return DensityMatrix(np.outer(a, a.conj()))


def equal_population_pure(n: int, rng: np.random.Generator) -> DensityMatrix:
    """Pure state with |a_k|^2 = 1/n and uniformly random phases."""
    a = np.exp(1j * rng.uniform(0, 2 * np.pi, size=n)) / np.sqrt(n)
    return DensityMatrix(np.outer(a, a.conj()))


def random_mixture(n: int, rng: np.random.Generator, k: int | None = None) -> DensityMatrix:
    """Convex mixture of k random pure states with Dirichlet weights."""
    k = int(rng.integers(2, n + 2)) if k is None else k
    w = rng.dirichlet(np.ones(k))
    m = sum(wi * np.outer(a, a.conj())
            for wi, a in zip(w, (random_amplitudes(n, rng) for _ in range(k))))
    return _density(m)


def random_gram(n: int, rng: np.random.Generator, dim: int | None = None) -> GramMatrix:
    """Gram matrix of n random unit ancilla vectors in C^dim."""
    dim = int(rng.integers(1, n + 1)) if dim is None else dim
    states = rng.normal(size=(n, dim)) + 1j * rng.normal(size=(n, dim))
    states /= np.linalg.norm(states, axis=1, keepdims=True)
    return gram_from_ancilla_states(states)


def random_diagonal(n: int, rng: np.random.Generator) -> DensityMatrix:
    p = rng.dirichlet(np.ones(n))
    p[-1] = 1.0 - p[:-1].sum()
    return DensityMatrix(np.diag(p))


def random_decohered(n: int, rng: np.random.Generator) -> DensityMatrix:
    return decohere(random_pure(n, rng), random_gram(n, rng))


def random_density(n: int, rng: np.random.Generator, kind: str | None = None) -> DensityMatrix:
    """One state from the pure / mixture / decohered-pure classes (chosen at random if unset)."""
    kind = kind or ("pure", "mixture", "decohered")[int(rng.integers(3))]
    if kind == "pure":
        return random_pure(n, rng)
    if kind == "mixture":
        return random_mixture(n, rng)
    if kind == "decohered":
        return random_decohered(n, rng)
    raise ValueError(f"unknown state class {kind!r}")


def sample_states(n: int, count: int, rng: np.random.Generator) -> list[DensityMatrix]:
    """Round-robin over the three state classes so every class is hit."""
    kinds = ("pure", "mixture", "decohered")
    return [random_density(n, rng, kinds[i % 3]) for i in range(count)]


def project_to_density(m: np.ndarray) -> DensityMatrix:
    """Nearest-ish valid density: Hermitian part, negative eigenvalues clipped, trace renormalized."""
    h = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(h)
    w = np.clip(w, 0.0, None)
    return _density((v * w) @ v.conj().T)


def random_hermitian_direction(n: int, rng: np.random.Generator) -> np.ndarray:
    """Traceless Hermitian matrix with unit max-abs entry."""
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = 0.5 * (a + a.conj().T)
    h -= np.eye(n) * np.trace(h).real / n
    return h / np.max(np.abs(h))


def set_partitions(n: int) -> Iterator[list[list[int]]]:
    """All partitions of range(n), coarsest first."""
    def rec(items):
        if not items:
            yield []
            return
        head, rest = items[0], items[1:]
        for part in rec(rest):
            for i in range(len(part)):
                yield part[:i] + [[head] + part[i]] + part[i + 1:]
            yield [[head]] + part
    parts = list(rec(list(range(n))))
    parts.sort(key=lambda p: (len(p), sorted(sorted(b) for b in p)))
    yield from parts


def partition_gram(n: int, blocks: list[list[int]]) -> GramMatrix:
    """Detector that only reveals which block a path belongs to: identical
    ancilla states inside a block, orthogonal ones across blocks."""
    g = np.zeros((n, n))
    for b in blocks:
        g[np.ix_(b, b)] = 1.0
    return GramMatrix(g)


def phase_lattice_states(n: int, levels: int = 4) -> Iterator[DensityMatrix]:
    """Equal-population pure states with path phases on a 2pi/levels lattice, path 1 at 0."""
    step = 2 * np.pi / levels
    for digits in itertools.product(range(levels), repeat=n - 1):
        a = np.exp(1j * step * np.array((0,) + digits)) / np.sqrt(n)
        yield DensityMatrix(np.outer(a, a.conj()))
