import cmath
import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from zakgkp import (
    canonicalize_zak_point,
    closest_int_multiple,
    decompose,
    frac_part,
)

A = 2 * math.sqrt(math.pi)

periods = st.floats(1e-3, 1e3)
# centerings comparable in scale to the period: boundary distinctions below
# float resolution of the period are not representable
centering_fractions = st.one_of(
    st.just(0.0), st.floats(1e-9, 1.5), st.floats(-1.0, -1e-9)
)
reals = st.floats(-1e6, 1e6)


def test_frac_part_examples():
    assert frac_part(0.3, 1.0, 0.5) == 0.3
    assert frac_part(5.0, 2.0, 1.0) == -1.0
    assert frac_part(A, A, A / 4) == 0.0


def test_closest_int_multiple_examples():
    assert closest_int_multiple(5.0, 2.0, 1.0) == 6.0
    assert closest_int_multiple(0.0, 2.0, 1.0) == 0.0
    assert closest_int_multiple(0.3 * 2.0, 2.0, 1.0) == 0.0


@pytest.mark.parametrize(
    "period,centering", [(1.0, 0.25), (2.0, 1.0), (A, A / 2), (0.125, 0.0625), (4.0, 1.0)]
)
def test_half_open_boundary_wraps_exactly(period, centering):
    # inputs chosen so that period - centering is exactly representable
    assert frac_part(period - centering, period, centering) == -centering


def test_non_positive_period_rejected():
    with pytest.raises(ValueError):
        frac_part(1.0, 0.0, 0.5)
    with pytest.raises(ValueError):
        frac_part(1.0, -2.0, 0.5)


def _away_from_wrap(x, period, centering):
    """Inputs within float resolution of a wrap boundary have no exact
    representable residue; the documented contract excludes them."""
    q = (x + centering) / period
    return abs(q - round(q)) > 1e-9


@given(x=reals, period=periods, fraction=centering_fractions)
def test_range_invariant(x, period, fraction):
    centering = fraction * period
    assume(_away_from_wrap(x, period, centering))
    f = frac_part(x, period, centering)
    assert -centering <= f < period - centering


def test_range_at_exact_boundaries():
    assert frac_part(0.0, 1.0, 0.0) == 0.0
    assert frac_part(1.0, 1.0, 0.0) == 0.0
    assert frac_part(-0.25, 1.0, 0.25) == -0.25


@given(x=reals, period=periods, fraction=centering_fractions)
def test_idempotent(x, period, fraction):
    centering = fraction * period
    assume(_away_from_wrap(x, period, centering))
    f = frac_part(x, period, centering)
    assert frac_part(f, period, centering) == f


@given(x=reals, period=periods, fraction=centering_fractions)
def test_decomposition_reconstructs(x, period, fraction):
    centering = fraction * period
    d = decompose(x, period, centering)
    assert d.frac + d.whole == pytest.approx(x, abs=1e-9 * max(1.0, abs(x)))
    ratio = d.whole / period
    assert ratio == pytest.approx(round(ratio), abs=1e-9 * max(1.0, abs(ratio)))


@given(
    x=st.floats(-100.0, 100.0),
    period=st.floats(0.01, 100.0),
    centering=st.floats(-1.0, 1.0),
    c=st.floats(1e-3, 1e3),
)
def test_scale_identity(x, period, centering, c):
    f = frac_part(x, period, centering)
    # stay away from the wrap boundary, where a scaled quotient may
    # legitimately round onto the other side
    assume(min(f + centering, period - centering - f) > 1e-6 * period)
    scaled = frac_part(c * x, c * period, c * centering)
    # both routes are float-exact relative to the magnitudes they cancel
    tol = 1e-12 * max(1.0, c * period, abs(c * x))
    assert c * f == pytest.approx(scaled, abs=tol)


def test_canonicalize_examples():
    p = canonicalize_zak_point(0.0, 0.0, A)
    assert (p.u, p.v, p.phase) == (0.0, 0.0, 1 + 0j)

    p = canonicalize_zak_point(A, 0.0, A)
    assert (p.u, p.v) == (0.0, 0.0)
    assert p.phase == 1 + 0j

    v0 = 0.37
    p = canonicalize_zak_point(A, v0, A)
    assert p.u == 0.0
    assert p.v == pytest.approx(v0)
    assert p.phase == pytest.approx(cmath.exp(-1j * A * v0))


def test_canonicalize_phase_is_unit_modulus():
    for x, y in [(5.3, -2.1), (-17.0, 9.9), (0.123, 456.0)]:
        p = canonicalize_zak_point(x, y, A)
        assert abs(abs(p.phase) - 1) < 1e-12
        assert -A / 4 <= p.u < 3 * A / 4
        assert -math.pi / A <= p.v < math.pi / A


@given(x=st.floats(-50.0, 50.0), y=st.floats(-50.0, 50.0), a=st.floats(0.1, 10.0))
def test_canonicalize_composition(x, y, a):
    base = canonicalize_zak_point(x, y, a)
    # adding a period can re-round a point that sits on a wrap boundary
    assume(min(base.u + a / 4, 3 * a / 4 - base.u) > 1e-6 * a)
    shifted = canonicalize_zak_point(x + a, y, a)
    assert shifted.u == pytest.approx(base.u, abs=1e-9 * a)
    assert shifted.v == pytest.approx(base.v, abs=1e-9)
    expected = base.phase * cmath.exp(-1j * a * frac_part(y, 2 * math.pi / a, math.pi / a))
    assert shifted.phase == pytest.approx(expected, abs=1e-9)
