"""Dirichlet fundamental domains for finite lattice group actions on cones.

A group of unimodular integer matrices preserving a full-dimensional pointed
rational cone permutes its primitive extremal rays, so it is finite; the
group is enumerated by closure. A basepoint with trivial stabilizer is found
by a deterministic perturbation schedule, the coordinate dot product is
averaged over the group into an invariant Gram form, and the domain is cut
out of the cone by the half-spaces comparing the basepoint against its
orbit. Tiling is verified on seeded samples plus exact strict-interior LPs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .exactgeom import (
    Cone,
    IntVector,
    det,
    dot,
    intersect,
    is_zero_vec,
    mat_inverse,
    mat_mul,
    mat_vec,
    strictly_feasible,
    vec,
)

ZERO = Fraction(0)


class GeneratorNotUnimodularError(ValueError):
    """A generator matrix does not have determinant +-1."""


class GeneratorNotPreservingConeError(ValueError):
    """A generator does not map the cone onto itself."""


class GroupCapExceededError(RuntimeError):
    """Closure exceeded the factorial cap; the finiteness hypotheses fail."""


@dataclass(frozen=True)
class LatticeGroupAction:
    rank: int
    generators: tuple[tuple[IntVector, ...], ...]

    @staticmethod
    def make(rank: int, generators) -> "LatticeGroupAction":
        gens = tuple(tuple(tuple(int(x) for x in row) for row in g) for g in generators)
        for g in gens:
            if len(g) != rank or any(len(row) != rank for row in g):
                raise ValueError("generator matrices must be rank x rank")
            if abs(det(g)) != 1:
                raise GeneratorNotUnimodularError(f"generator {g} has determinant != +-1")
        return LatticeGroupAction(rank, gens)


@dataclass(frozen=True)
class FundamentalDomain:
    basepoint: tuple
    gram: tuple[tuple[Fraction, ...], ...]
    domain: Cone
    group_order: int


def _apply(mat, v):
    return tuple(dot(row, v) for row in mat)


def _compose_functional(f, m):
    """The functional x -> f(m x)."""
    n = len(f)
    return tuple(sum(f[i] * m[i][j] for i in range(n)) for j in range(n))


def _is_identity(g):
    n = len(g)
    return all(g[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))


def _int_inverse(g):
    return tuple(tuple(int(x) for x in row) for row in mat_inverse(g))


def enumerate_group(action: LatticeGroupAction, cone: Cone):
    """All elements of the generated group, by closure under multiplication.

    The cone must be full-dimensional and pointed; every generator must
    permute its primitive rays, whence the group embeds into the symmetric
    group on the rays and the factorial cap certifies failure otherwise.
    """
    if cone.ambient_dim != action.rank:
        raise ValueError("cone and action rank mismatch")
    if cone.dim != action.rank or cone.lineality_dim != 0:
        raise ValueError("the cone must be full-dimensional and pointed")
    rayset = set(cone.rays)
    for g in action.generators:
        if {_apply(g, r) for r in cone.rays} != rayset:
            raise GeneratorNotPreservingConeError(
                "generator does not permute the primitive rays of the cone"
            )
    cap = math.factorial(len(cone.rays))
    n = action.rank
    identity = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in action.generators:
                prod = tuple(tuple(int(x) for x in row) for row in mat_mul(g, a))
                if prod not in seen:
                    if len(seen) >= cap:
                        raise GroupCapExceededError(
                            "group closure exceeded the ray-permutation cap"
                        )
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return tuple(sorted(seen))


def find_basepoint(cone: Cone, group):
    """Interior rational point with trivial stabilizer, deterministically.

    Starts from the ray sum weighted 1, 2, 3, ... over the rays in canonical
    (ascending lexicographic) order; while some nonidentity element fixes the
    candidate, the weights are escalated along successive primes p as
    i * p^(i-1). Each stabilizer is a proper subspace and the weight curve is
    not contained in any of them, so the search terminates.
    """
    rays = sorted(cone.rays)
    p = 1
    while True:
        x = [0] * cone.ambient_dim
        for i, r in enumerate(rays, start=1):
            w = i * (p ** (i - 1))
            x = [a + w * b for a, b in zip(x, r)]
        x = tuple(x)
        if all(_apply(g, x) != x for g in group if not _is_identity(g)):
            return vec(x)
        p = _next_prime(p)


def _next_prime(p):
    n = max(p + 1, 2)
    while any(n % d == 0 for d in range(2, int(n ** 0.5) + 1)):
        n += 1
    return n


def averaged_gram(group):
    """G = sum over the group of g^T g; symmetric, positive definite, invariant."""
    n = len(group[0])
    G = [[0] * n for _ in range(n)]
    for g in group:
        for i in range(n):
            for j in range(n):
                G[i][j] += sum(g[k][i] * g[k][j] for k in range(n))
    G = tuple(tuple(Fraction(x) for x in row) for row in G)
    for k in range(1, n + 1):
        minor = [row[:k] for row in G[:k]]
        assert det(minor) > 0, "averaged form must be positive definite"
    for g in group:
        gt = tuple(zip(*g))
        assert mat_mul(gt, mat_mul(G, g)) == G, "averaged form must be invariant"
    return G


def fundamental_domain(cone: Cone, action: LatticeGroupAction) -> FundamentalDomain:
    """Dirichlet domain of the orbit of a trivial-stabilizer basepoint.

    Pi = cone intersect {x : <x, G(x0 - g x0)> >= 0 for every g != id}, with
    an irredundant half-space description.
    """
    group = enumerate_group(action, cone)
    x0 = find_basepoint(cone, group)
    G = averaged_gram(group)
    halfspaces = []
    for g in group:
        if _is_identity(g):
            continue
        diff = tuple(a - b for a, b in zip(x0, _apply(g, x0)))
        normal = mat_vec(G, vec(diff))
        if not is_zero_vec(normal):
            halfspaces.append(normal)
    domain = (
        intersect(cone, Cone.from_inequalities(halfspaces, [], cone.ambient_dim))
        if halfspaces
        else cone
    )
    return FundamentalDomain(x0, G, domain, len(group))


@dataclass(frozen=True)
class TilingReport:
    samples: int
    covering_failures: tuple
    overlap_witnesses: tuple
    disjoint_pairs_checked: int

    @property
    def ok(self) -> bool:
        return not self.covering_failures and not self.overlap_witnesses


def verify_tiling(fd: FundamentalDomain, action: LatticeGroupAction, cone: Cone,
                  sample_count: int, seed: int = 0) -> TilingReport:
    """Covering and strict-interior disjointness of the domain translates.

    Covering: for each seeded rational point w of the cone, the group element
    h minimizing the averaged distance d(w, g x0) must pull w into the
    domain. Disjointness: for every g != id, an exact strict-feasibility LP
    certifies int(domain) and int(g domain) do not meet; a feasible LP is
    reported as a counterexample witness.
    """
    group = enumerate_group(action, cone)
    G = fd.gram
    x0 = fd.basepoint
    rng = random.Random(seed)
    covering_failures = []
    for _ in range(sample_count):
        w = [ZERO] * cone.ambient_dim
        for r in cone.rays:
            c = Fraction(rng.randint(0, 1000), rng.randint(1, 50))
            w = [a + c * b for a, b in zip(w, r)]
        w = vec(w)
        best = None
        for g in group:
            gx0 = vec(_apply(g, x0))
            # d(w, g x0) minus the g-independent w term
            q = -2 * dot(w, mat_vec(G, gx0)) + dot(gx0, mat_vec(G, gx0))
            if best is None or q < best[0]:
                best = (q, g)
        _, h = best
        pulled = vec(_apply(_int_inverse(h), w))
        if not fd.domain.contains(pulled):
            covering_failures.append((tuple(w), h))
    overlap_witnesses = []
    pairs = 0
    for g in group:
        if _is_identity(g):
            continue
        pairs += 1
        ginv = _int_inverse(g)
        moved_facets = [_compose_functional(f, ginv) for f in fd.domain.facets]
        strict = list(fd.domain.facets) + moved_facets
        if strictly_feasible(strict, [], [], cone.ambient_dim):
            overlap_witnesses.append(g)
    return TilingReport(sample_count, tuple(covering_failures), tuple(overlap_witnesses), pairs)


def overlap_witness_point(fd: FundamentalDomain, g):
    """A point interior to both the domain and its g-translate, if one exists."""
    ginv = _int_inverse(g)
    moved = [_compose_functional(f, ginv) for f in fd.domain.facets]
    combined = list(fd.domain.facets) + moved
    probe = intersect(
        fd.domain,
        Cone.from_inequalities(moved, [], fd.domain.ambient_dim),
    )
    if probe.dim == fd.domain.ambient_dim:
        p = probe.interior_point()
        if all(dot(f, p) > 0 for f in combined):
            return p
    return None


# ---------------------------------------------------------------------------
# exact section volumes (ranks 2 and 3)
# ---------------------------------------------------------------------------

def invariant_section_functional(group):
    """A group-invariant positive functional: the orbit sum of all-ones."""
    n = len(group[0])
    ell = [0] * n
    ones = tuple(1 for _ in range(n))
    for g in group:
        img = _compose_functional(ones, g)
        ell = [a + b for a, b in zip(ell, img)]
    return vec(ell)


def pyramid_volume(cone: Cone, ell) -> Fraction:
    """Volume of conv(0, {x in cone : ell.x = 1}), exact, ranks <= 3."""
    n = cone.ambient_dim
    verts = {}
    for r in cone.rays:
        h = Fraction(dot(ell, r))
        if h <= 0:
            raise ValueError("section functional must be positive on the rays")
        verts[r] = tuple(Fraction(x) / h for x in r)
    if cone.dim < n:
        return ZERO
    if n == 1:
        return Fraction(1)
    if n == 2:
        (a, b) = [verts[r] for r in cone.rays]
        return abs(Fraction(det([list(a), list(b)]))) / 2
    if n == 3:
        cycle = _polygon_cycle(cone)
        v0 = verts[cycle[0]]
        total = ZERO
        for i in range(1, len(cycle) - 1):
            mat = [list(v0), list(verts[cycle[i]]), list(verts[cycle[i + 1]])]
            total += abs(Fraction(det(mat)))
        return total / 6
    raise NotImplementedError("exact section volumes are provided for rank <= 3")


def _polygon_cycle(cone: Cone):
    """Cyclic order of the rays of a 3-dimensional pointed cone."""
    edges = []
    for f in cone.facet_cones():
        assert len(f.rays) == 2, "facets of a pointed 3-cone have two rays"
        edges.append(tuple(f.rays))
    adj: dict = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = cone.rays[0]
    cycle = [start]
    prev = None
    cur = start
    while True:
        nbrs = [x for x in adj[cur] if x != prev]
        nxt = nbrs[0]
        if nxt == start:
            break
        cycle.append(nxt)
        prev, cur = cur, nxt
    assert len(cycle) == len(cone.rays)
    return cycle


def domain_volume_fraction(fd: FundamentalDomain, cone: Cone, group) -> Fraction:
    """vol(domain section) / vol(cone section) on an invariant cross-section."""
    ell = invariant_section_functional(group)
    return pyramid_volume(fd.domain, ell) / pyramid_volume(cone, ell)
