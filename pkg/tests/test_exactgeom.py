"""Cone engine: double description, exact LP, SNF, lattice points."""

import random
from fractions import Fraction

import pytest

from glab.exactgeom import (
    Cone,
    Polyhedron,
    UnboundedRegionError,
    dot,
    dualize,
    intersect,
    invariant_factors,
    lattice_points,
    lp_minimize,
    mat_mul,
    nonneg_combination,
    primitive,
    smith_normal_form,
    strictly_feasible,
    vec,
)


class TestDualize:
    def test_quadrant(self):
        c = Cone.from_rays([(1, 0), (0, 1)])
        assert set(c.facets) == {(1, 0), (0, 1)}
        d = dualize(c)
        assert set(d.rays) == {(1, 0), (0, 1)}

    def test_skew_cone_by_hand(self):
        # hand computation by 2D cross products: facets y >= 0 and x - y >= 0
        c = Cone.from_rays([(1, 0), (1, 1)])
        assert set(c.facets) == {(0, 1), (1, -1)}

    def test_zero_cone(self):
        z = Cone.zero(2)
        d = dualize(z)
        assert d.lineality_dim == 2 and d.dim == 2

    def test_involution_on_pointed_full_dim(self):
        c = Cone.from_rays([(2, 1), (1, 3)])
        assert dualize(dualize(c)) == c

    def test_dimension_mismatch(self):
        from glab.exactgeom import DimensionMismatchError

        with pytest.raises(DimensionMismatchError):
            Cone.from_rays([(1, 0), (0, 1, 1)])

    def test_roundtrip_random_cones(self):
        rng = random.Random(7)
        for _ in range(40):
            n = rng.choice([2, 3, 4])
            k = rng.randint(1, n + 2)
            rays = [tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(k)]
            rays = [r for r in rays if any(r)]
            if not rays:
                continue
            c = Cone.from_rays(rays, ambient_dim=n)
            assert dualize(dualize(c)) == c
            # H-rep and V-rep describe the same set on the generators
            for r in c.rays:
                assert c.contains(r)

    def test_lower_dimensional_cone(self):
        c = Cone.from_rays([(1, 1, 0)], ambient_dim=3)
        assert c.dim == 1
        assert len(c.equations) == 2
        assert c.contains((2, 2, 0))
        assert not c.contains((1, 1, 1))
        assert dualize(c).lineality_dim == 2

    def test_halfspace_lineality(self):
        h = Cone.from_inequalities([(1, 0)], ambient_dim=2)
        assert h.lineality_dim == 1
        assert h.rays == ((1, 0),)


class TestIntersect:
    def test_quadrant_halfplane(self):
        q = Cone.from_rays([(1, 0), (0, 1)])
        c = intersect(q, Cone.from_inequalities([(1, -1)]))
        assert c.rays == ((1, 0), (1, 1))

    def test_idempotence(self):
        c = Cone.from_rays([(2, 1), (1, 3)])
        assert intersect(c, c) == c

    def test_ray_result(self):
        q = Cone.from_rays([(1, 0), (0, 1)])
        c = intersect(q, Cone.from_inequalities([(-1, 0), (1, 0)]))
        assert c.rays == ((0, 1),)

    def test_farkas_membership(self):
        # a point is in the V-hull iff it satisfies the H-rep
        rng = random.Random(3)
        c = Cone.from_rays([(2, 1, 0), (0, 1, 1), (1, 0, 3)])
        for _ in range(25):
            pt = tuple(rng.randint(-5, 5) for _ in range(3))
            in_h = c.contains(pt)
            in_v = nonneg_combination(vec(pt), [vec(r) for r in c.rays])
            assert in_h == in_v


class TestLP:
    def test_simple_optimal(self):
        r = lp_minimize([1, 0], [((1, 0), 2), ((0, 1), 0)])
        assert r.status == "optimal" and r.value == 2

    def test_unbounded(self):
        r = lp_minimize([-1], [((1,), 0)])
        assert r.status == "unbounded"

    def test_infeasible_with_certificate(self):
        rows = [((1, 0), 1), ((0, 1), 1), ((-1, -1), -1)]
        r = lp_minimize([1, 1], rows)
        assert r.status == "infeasible"
        y = r.certificate
        assert all(c >= 0 for c in y)
        comb = [sum(y[i] * rows[i][0][j] for i in range(3)) for j in range(2)]
        assert all(x == 0 for x in comb)
        assert sum(y[i] * rows[i][1] for i in range(3)) > 0

    def test_vertex_recheck(self):
        rng = random.Random(11)
        for _ in range(20):
            rows = [
                (tuple(rng.randint(-3, 3) for _ in range(3)), Fraction(rng.randint(-4, 4)))
                for _ in range(6)
            ]
            rows.append(((1, 1, 1), Fraction(-20)))
            rows.append(((-1, -1, -1), Fraction(-20)))
            obj = [rng.randint(-3, 3) for _ in range(3)]
            r = lp_minimize(obj, rows)
            if r.status == "optimal":
                assert dot(obj, r.point) == r.value
                for i in r.tight:
                    assert dot(rows[i][0], r.point) == rows[i][1]

    def test_lexmin_deterministic(self):
        rows = [((1, 0), 0), ((0, 1), 0), ((-1, -1), -2)]
        r1 = lp_minimize([0, 0], rows, lexmin=True)
        r2 = lp_minimize([0, 0], rows, lexmin=True)
        assert r1.point == r2.point == (Fraction(0), Fraction(0))

    def test_strictly_feasible(self):
        assert strictly_feasible([(1, 0), (0, 1)], n=2)
        assert not strictly_feasible([(1, 0), (-1, 0)], n=2)


class TestSNF:
    def test_identity(self):
        U, S, V = smith_normal_form([[1, 0], [0, 1]])
        assert S == ((1, 0), (0, 1))

    def test_diag_2_3(self):
        m = [[2, 0], [0, 3]]
        U, S, V = smith_normal_form(m)
        assert S == ((1, 0), (0, 6))
        assert mat_mul(U, mat_mul(m, V)) == S

    def test_f1_relation_matrix(self):
        m = [[1, 0, -1, 0], [0, 1, 1, -1]]
        U, S, V = smith_normal_form(m)
        assert [S[i][i] for i in range(2)] == [1, 1]
        # cokernel of the transpose has rank 4 - 2 = 2

    def test_transform_contract(self):
        rng = random.Random(5)
        for _ in range(30):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 4)
            m = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
            U, S, V = smith_normal_form(m)
            assert mat_mul(U, mat_mul(m, V)) == S
            from glab.exactgeom import det

            assert abs(det(U)) == 1 and abs(det(V)) == 1
            diag = [S[i][i] for i in range(min(rows, cols))]
            assert all(d >= 0 for d in diag)
            for a, b in zip(diag, diag[1:]):
                if a != 0:
                    assert b % a == 0
                else:
                    assert b == 0
            for i in range(rows):
                for j in range(cols):
                    if i != j:
                        assert S[i][j] == 0

    def test_invariant_factors(self):
        assert invariant_factors([[2, 0], [0, 3]]) == (1, 6)


class TestLatticePoints:
    def test_triangle(self):
        tri = Polyhedron.from_rows([((1, 0), 0), ((0, 1), 0), ((-1, -1), -2)])
        pts = lattice_points(tri)
        assert len(pts) == 6

    def test_empty(self):
        p = Polyhedron.from_rows([((1,), 1), ((-1,), 0)])
        assert lattice_points(p) == ()

    def test_unit_square(self):
        sq = Polyhedron.from_rows(
            [((1, 0), 0), ((0, 1), 0), ((-1, 0), -1), ((0, -1), -1)]
        )
        assert len(lattice_points(sq)) == 4

    def test_unbounded_rejected(self):
        p = Polyhedron.from_rows([((1, 0), 0), ((0, 1), 0)])
        with pytest.raises(UnboundedRegionError):
            lattice_points(p)

    def test_dilation_against_box_bruteforce(self):
        # Ehrhart-style oracle: enumerate an independently derived box
        tri = [((1, 0), 0), ((0, 1), 0), ((-2, -3), -6)]
        for d in range(1, 5):
            rows = [(f, Fraction(d) * c) for f, c in tri]
            poly = Polyhedron.from_rows(rows)
            pts = lattice_points(poly)
            verts = [v for v, _ in poly.vertices()]
            lo = [min(int(v[i]) - 1 for v in verts) for i in range(2)]
            hi = [max(int(v[i]) + 1 for v in verts) for i in range(2)]
            brute = [
                (x, y)
                for x in range(lo[0], hi[0] + 1)
                for y in range(lo[1], hi[1] + 1)
                if all(dot(f, (x, y)) >= c for f, c in rows)
            ]
            assert sorted(pts) == sorted(brute)

    def test_feasibility_certificates(self):
        feas = Polyhedron.from_rows([((1, 0), 0), ((0, 1), 0)]).feasibility()
        assert feas.feasible and feas.witness is not None
        infeas = Polyhedron.from_rows([((1,), 1), ((-1,), 0)]).feasibility()
        assert not infeas.feasible and infeas.certificate is not None


class TestPrimitive:
    def test_primitive_scaling(self):
        assert primitive((Fraction(1, 2), Fraction(3, 2))) == (1, 3)
        assert primitive((4, 6)) == (2, 3)
        assert primitive((0, 0)) == (0, 0)
        assert primitive((-2, 4)) == (-1, 2)
