"""Shared desk-scale corpus: fans, models, ring specs, curve models."""

from functools import lru_cache

from glab.chambers import RingSpec
from glab.curves import CurveModel, JacobianGroup
from glab.toric import Fan, build_model


@lru_cache(maxsize=None)
def p2_fan():
    return Fan.make(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


@lru_cache(maxsize=None)
def f1_fan():
    return Fan.make(2, [(1, 0), (0, 1), (-1, 1), (0, -1)],
                    [(0, 1), (1, 2), (2, 3), (3, 0)])


@lru_cache(maxsize=None)
def f2_fan():
    return Fan.make(2, [(1, 0), (0, 1), (-1, 2), (0, -1)],
                    [(0, 1), (1, 2), (2, 3), (3, 0)])


@lru_cache(maxsize=None)
def p1p1_fan():
    return Fan.make(2, [(1, 0), (0, 1), (-1, 0), (0, -1)],
                    [(0, 1), (1, 2), (2, 3), (3, 0)])


@lru_cache(maxsize=None)
def p3_fan():
    return Fan.make(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)],
                    [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


@lru_cache(maxsize=None)
def blowup_p3_fan():
    """P^3 blown up at a torus-fixed point: one divisorial wall."""
    return Fan.make(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1), (1, 1, 1)],
                    [(0, 1, 3), (0, 2, 3), (1, 2, 3), (0, 1, 4), (0, 2, 4), (1, 2, 4)])


@lru_cache(maxsize=None)
def flop_fan():
    """Complete simplicial 3-fold whose square cone admits two triangulations."""
    return Fan.make(3, [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1), (0, 0, -1)],
                    [(0, 1, 2), (0, 2, 3), (0, 1, 4), (1, 2, 4), (2, 3, 4), (3, 0, 4)])


RANK2_FANS = (p2_fan, f1_fan, f2_fan, p1p1_fan)
RANK3_FANS = (p3_fan, blowup_p3_fan, flop_fan)
ALL_FANS = RANK2_FANS + RANK3_FANS


@lru_cache(maxsize=None)
def model_of(fan_builder):
    return build_model(fan_builder())


@lru_cache(maxsize=None)
def spanning_spec(fan_builder):
    return RingSpec.spanning(model_of(fan_builder))


def f1_classes():
    """(f, s) with f the fiber class and s the (-1)-section class of F1."""
    m = model_of(f1_fan)
    f = m.class_of([1, 0, 0, 0])
    s = m.class_of([0, 1, 0, 0])
    return m, f, s


def combo(*pairs):
    """Integer combination of class vectors: combo((2, f), (1, s)) = 2f + s."""
    acc = None
    for k, v in pairs:
        term = tuple(k * x for x in v)
        acc = term if acc is None else tuple(a + b for a, b in zip(acc, term))
    return acc


# ---------------------------------------------------------------------------
# curve models
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def elliptic_nontorsion():
    """Genus 1, D = P - O non-torsion of degree 0, A = O of degree 1."""
    jac = JacobianGroup(1, ())
    model = CurveModel.make(1, jac, {"O": jac.zero(), "P": jac.element((1,), ())})
    D = model.divisor({"P": 1, "O": -1})
    A = model.divisor({"O": 1})
    return model, D, A


@lru_cache(maxsize=None)
def elliptic_torsion(order=3):
    jac = JacobianGroup(0, (order,))
    model = CurveModel.make(1, jac, {"O": jac.zero(), "P": jac.element((), (1,))})
    D = model.divisor({"P": 1, "O": -1})
    A = model.divisor({"O": 1})
    return model, D, A


@lru_cache(maxsize=None)
def elliptic_rank2():
    """Two independent non-torsion points, for independent-twist cases."""
    jac = JacobianGroup(2, ())
    model = CurveModel.make(1, jac, {
        "O": jac.zero(),
        "P": jac.element((1, 0), ()),
        "Q": jac.element((0, 1), ()),
    })
    return model


@lru_cache(maxsize=None)
def rational_curve():
    jac = JacobianGroup(0, ())
    return CurveModel.make(0, jac, {"O": jac.zero(), "Q": jac.zero()})
