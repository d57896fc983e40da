"""Spectra enumeration, counting instrumentation, and the fd oracle."""

import math

import numpy as np
import pytest

from singsurf import spectra as sp
from singsurf.errors import (
    InsufficientRange,
    OutOfValidatedRange,
    ValidationError,
)

PI2 = math.pi ** 2

# Independent brute-force lattice counts for the unit square, frozen
# from a direct double-loop scan (see the acceptance suite for the
# in-test rescan of the smallest case).
BRUTE_UNIT_SQUARE = {
    1e3: (71, 92),
    1e4: (764, 827),
    1e5: (7861, 8062),
}

# First zeros of J_0, J_1, J_1', frozen from the series bisection below.
J0_ZERO_1 = 2.404825557695773
J1_ZERO_1 = 3.8317059702075125
J1P_ZERO_1 = 1.8411837813406593


def series_j(nu, x, terms=60):
    """Power series for J_nu, independent of the library backend."""
    half = 0.5 * x
    term = half ** nu / math.factorial(nu)
    total = term
    for k in range(1, terms):
        term *= -(half * half) / (k * (k + nu))
        total += term
    return total


def bisect_zero(f, lo, hi, steps=80):
    flo = f(lo)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if flo * f(mid) <= 0.0:
            hi = mid
        else:
            lo = mid
            flo = f(lo)
    return 0.5 * (lo + hi)


def brute_rectangle(a, b, bc, t_max):
    lo = 1 if bc == "dirichlet" else 0
    out = []
    m = lo
    while (math.pi * m / a) ** 2 + (math.pi * lo / b) ** 2 <= t_max:
        n = lo
        while True:
            lam = (math.pi * m / a) ** 2 + (math.pi * n / b) ** 2
            if lam > t_max:
                break
            out.append(lam)
            n += 1
        m += 1
    return np.sort(np.array(out))


class TestRectangle:
    def test_unit_square_dirichlet_lowest(self):
        vals = sp.rectangle_spectrum(1.0, 1.0, "dirichlet", 50.0)
        assert np.allclose(vals, PI2 * np.array([2, 5, 5]), rtol=1e-15)

    def test_unit_square_neumann_starts_at_zero(self):
        vals = sp.rectangle_spectrum(1.0, 1.0, "neumann", 50.0)
        assert vals[0] == 0.0
        assert np.allclose(vals, PI2 * np.array([0, 1, 1, 2, 4, 4, 5, 5]),
                           rtol=1e-15)

    def test_matches_brute_scan_unit_square(self):
        for bc in ("dirichlet", "neumann"):
            mine = sp.rectangle_spectrum(1.0, 1.0, bc, 777.7)
            brute = brute_rectangle(1.0, 1.0, bc, 777.7)
            assert mine.size == brute.size
            assert np.allclose(mine, brute, rtol=1e-14)

    def test_matches_brute_scan_generic_rectangle(self):
        for bc in ("dirichlet", "neumann"):
            mine = sp.rectangle_spectrum(1.3, 0.7, bc, 900.0)
            brute = brute_rectangle(1.3, 0.7, bc, 900.0)
            assert mine.size == brute.size
            assert np.allclose(mine, brute, rtol=1e-14)

    def test_counts_at_three_decades(self):
        for t, (nd, nn) in BRUTE_UNIT_SQUARE.items():
            assert sp.rectangle_spectrum(1.0, 1.0, "dirichlet", t).size == nd
            assert sp.rectangle_spectrum(1.0, 1.0, "neumann", t).size == nn

    def test_symmetric_pairs_are_exact_duplicates(self):
        vals = sp.rectangle_spectrum(1.0, 1.0, "dirichlet", 200.0)
        # (1,2)/(2,1) and friends must collide bit-for-bit so that
        # counting jumps report true multiplicities
        uniq, counts = np.unique(vals, return_counts=True)
        assert counts.max() >= 2

    def test_empty_below_ground_state(self):
        assert sp.rectangle_spectrum(1.0, 1.0, "dirichlet", 10.0).size == 0

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValidationError):
            sp.rectangle_spectrum(-1.0, 1.0, "dirichlet", 10.0)
        with pytest.raises(ValidationError):
            sp.rectangle_spectrum(1.0, 1.0, "both", 10.0)
        with pytest.raises(ValidationError):
            sp.rectangle_spectrum(1.0, 1.0, "dirichlet", 0.0)


class TestTriangles:
    def test_isosceles_right_dirichlet_lowest(self):
        vals = sp.triangle_spectrum("isosceles-right", 1.0, "dirichlet", 60.0)
        assert np.allclose(vals, [5 * PI2], rtol=1e-15)
        more = sp.triangle_spectrum("isosceles-right", 1.0, "dirichlet", 180.0)
        assert np.allclose(more, PI2 * np.array([5, 10, 13, 17]), rtol=1e-15)

    def test_isosceles_right_neumann_lowest(self):
        # only 0 and pi^2 sit at or below 15; 2 pi^2 = 19.74 is above
        vals = sp.triangle_spectrum("isosceles-right", 1.0, "neumann", 15.0)
        assert np.allclose(vals, PI2 * np.array([0, 1]), atol=1e-14)
        vals = sp.triangle_spectrum("isosceles-right", 1.0, "neumann", 20.0)
        assert np.allclose(vals, PI2 * np.array([0, 1, 2]), atol=1e-14)

    def test_isosceles_right_brute_scan(self):
        c = PI2
        brute = sorted(c * (m * m + n * n)
                       for m in range(1, 30) for n in range(1, m)
                       if c * (m * m + n * n) <= 500.0)
        mine = sp.triangle_spectrum("isosceles-right", 1.0, "dirichlet", 500.0)
        assert np.allclose(mine, brute, rtol=1e-14)
        brute = sorted(c * (m * m + n * n)
                       for m in range(0, 30) for n in range(0, m + 1)
                       if c * (m * m + n * n) <= 500.0)
        mine = sp.triangle_spectrum("isosceles-right", 1.0, "neumann", 500.0)
        assert np.allclose(mine, brute, atol=1e-12)

    def test_equilateral_lowest_and_multiplicity(self):
        kap = 16.0 * PI2 / 9.0
        vals = sp.triangle_spectrum("equilateral", 1.0, "dirichlet", 400.0)
        assert np.allclose(vals[:6], kap * np.array([3, 7, 7, 12, 13, 13]),
                           rtol=1e-14)
        vals = sp.triangle_spectrum("equilateral", 1.0, "neumann", 200.0)
        assert np.allclose(vals[:6], kap * np.array([0, 1, 1, 3, 4, 4]),
                           atol=1e-12)

    def test_equilateral_brute_scan(self):
        kap = 16.0 * PI2 / 9.0
        brute = sorted(kap * (m * m + m * n + n * n)
                       for m in range(1, 25) for n in range(1, 25)
                       if kap * (m * m + m * n + n * n) <= 600.0)
        mine = sp.triangle_spectrum("equilateral", 1.0, "dirichlet", 600.0)
        assert mine.size == len(brute)
        assert np.allclose(mine, brute, rtol=1e-14)

    def test_equilateral_validated_against_fd_dirichlet(self):
        # closed form is untrusted until this gate passes: first ten
        # eigenvalues within 1% of the six-neighbour stencil
        exact = sp.triangle_spectrum("equilateral", 1.0, "dirichlet", 400.0)[:10]
        fd = sp.fd_eigenvalues("equilateral", "dirichlet", 64, 10)
        assert np.max(np.abs(fd - exact) / exact) < 0.01

    def test_equilateral_validated_against_fd_neumann(self):
        exact = sp.triangle_spectrum("equilateral", 1.0, "neumann", 200.0)[:10]
        fd = sp.fd_eigenvalues("equilateral", "neumann", 64, 10)
        assert fd[0] == 0.0
        assert np.max(np.abs(fd[1:] - exact[1:]) / exact[1:]) < 0.01

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValidationError):
            sp.triangle_spectrum("scalene", 1.0, "dirichlet", 10.0)


class TestBessel:
    def test_values_against_series(self):
        for nu, x in ((0, 1.0), (1, 1.0), (2, 5.0), (3, 2.5)):
            assert np.isclose(sp.bessel_j(nu, x), series_j(nu, x),
                              rtol=1e-12, atol=1e-14)

    def test_derivative_against_series(self):
        # J_nu' = (J_{nu-1} - J_{nu+1}) / 2 for nu >= 1; J_0' = -J_1
        assert np.isclose(sp.bessel_j_deriv(0, 1.7), -series_j(1, 1.7), rtol=1e-12)
        expected = 0.5 * (series_j(0, 2.2) - series_j(2, 2.2))
        assert np.isclose(sp.bessel_j_deriv(1, 2.2), expected, rtol=1e-12)

    def test_first_zeros_match_series_bisection(self):
        z0 = bisect_zero(lambda x: series_j(0, x), 2.0, 3.0)
        z1 = bisect_zero(lambda x: series_j(1, x), 3.0, 4.5)
        zp = bisect_zero(lambda x: series_j(0, x) - series_j(2, x), 1.0, 2.5)
        assert abs(sp.bessel_zeros(0, 4.0)[0] - z0) < 1e-10
        assert abs(sp.bessel_zeros(1, 5.0)[0] - z1) < 1e-10
        assert abs(sp.bessel_zeros(1, 5.0, derivative=True)[0] - zp) < 1e-10
        # and the frozen references agree with both routes
        assert abs(z0 - J0_ZERO_1) < 1e-12
        assert abs(z1 - J1_ZERO_1) < 1e-12
        assert abs(zp - J1P_ZERO_1) < 1e-12

    def test_zero_interlacing(self):
        # j_{nu,k} < j_{nu+1,k} < j_{nu,k+1}
        table = [sp.bessel_zeros(nu, 60.0) for nu in range(12)]
        for nu in range(11):
            a, b = table[nu], table[nu + 1]
            for k in range(min(a.size - 1, b.size)):
                assert a[k] < b[k] < a[k + 1]

    def test_validated_range_guard(self):
        with pytest.raises(OutOfValidatedRange):
            sp.bessel_j(201, 1.0)
        with pytest.raises(OutOfValidatedRange):
            sp.bessel_j(0, 401.0)
        with pytest.raises(ValidationError):
            sp.bessel_j(1.5, 1.0)
        with pytest.raises(ValidationError):
            sp.bessel_j(1, -2.0)


class TestDisc:
    def test_dirichlet_lowest(self):
        vals = sp.disc_spectrum(1.0, "dirichlet", 32.0)
        expected = [J0_ZERO_1 ** 2, J1_ZERO_1 ** 2, J1_ZERO_1 ** 2]
        assert np.allclose(vals[:3], expected, rtol=1e-12)

    def test_neumann_lowest(self):
        vals = sp.disc_spectrum(1.0, "neumann", 30.0)
        assert vals[0] == 0.0
        assert np.allclose(vals[1:3], [J1P_ZERO_1 ** 2] * 2, rtol=1e-12)
        assert np.isclose(vals[1], 3.39, atol=5e-3)

    def test_higher_orders_carry_multiplicity_two(self):
        vals = sp.disc_spectrum(1.0, "dirichlet", 200.0)
        uniq, counts = np.unique(vals, return_counts=True)
        # nu = 0 zeros are simple, everything else is doubled
        zeros0 = sp.bessel_zeros(0, math.sqrt(200.0)) ** 2
        for lam, k in zip(uniq, counts):
            expected = 1 if np.any(np.isclose(lam, zeros0, rtol=1e-12)) else 2
            assert k == expected

    def test_radius_scaling(self):
        base = sp.disc_spectrum(1.0, "dirichlet", 120.0)
        big = sp.disc_spectrum(2.0, "dirichlet", 30.0)
        assert big.size == base.size
        assert np.allclose(big, base / 4.0, rtol=1e-12)

    def test_out_of_validated_range(self):
        with pytest.raises(OutOfValidatedRange):
            sp.disc_spectrum(1.0, "dirichlet", 50000.0)


class TestDoubledDomain:
    def test_geometry_fields(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        assert sq.base_area == 1.0 and sq.boundary_length == 4.0
        assert sq.cone_angles == (math.pi,) * 4
        iso = sp.make_double("isosceles-right", 1.0)
        assert np.isclose(iso.base_area, 0.5)
        assert np.isclose(iso.boundary_length, 2.0 + math.sqrt(2.0))
        eq = sp.make_double("equilateral", 2.0)
        assert np.isclose(eq.base_area, math.sqrt(3.0))
        disc = sp.make_double("disc", 3.0)
        assert np.isclose(disc.base_area, 9.0 * math.pi)
        assert disc.cone_angles == ()

    def test_rejects_bad_domains(self):
        with pytest.raises(ValidationError):
            sp.make_double("hexagon", 1.0)
        with pytest.raises(ValidationError):
            sp.make_double("rectangle", (1.0, -2.0))
        with pytest.raises(ValidationError):
            sp.make_double("disc", (1.0, 2.0))

    def test_double_is_merged_union(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        both = sp.double_spectrum(sq, 60.0)
        d = sp.rectangle_spectrum(1.0, 1.0, "dirichlet", 60.0)
        n = sp.rectangle_spectrum(1.0, 1.0, "neumann", 60.0)
        assert np.array_equal(both, np.sort(np.concatenate([d, n])))

    def test_doubled_square_count_at_fifty(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        eigs = sp.double_spectrum(sq, 50.0)
        assert sp.counting(eigs, 50.0) == 11


class TestCounting:
    def test_right_continuous(self):
        eigs = np.array([1.0, 2.0, 2.0, 5.0])
        assert sp.counting(eigs, 2.0) == 3
        assert sp.counting(eigs, np.nextafter(2.0, 0.0)) == 1
        assert sp.counting(eigs, 0.5) == 0
        assert np.array_equal(sp.counting(eigs, np.array([1.0, 4.9, 5.0])),
                              [1, 3, 4])

    @pytest.mark.parametrize("kind,size", [
        ("rectangle", (1.0, 1.0)),
        ("rectangle", (1.3, 0.7)),
        ("isosceles-right", 1.0),
        ("equilateral", 1.0),
        ("disc", 1.0),
    ])
    def test_jumps_equal_multiplicities(self, kind, size):
        dom = sp.make_double(kind, size)
        t_max = {"rectangle": 700.0, "isosceles-right": 1500.0,
                 "equilateral": 2500.0, "disc": 500.0}[kind]
        eigs = sp.double_spectrum(dom, t_max)
        assert eigs.size >= 100
        uniq, counts = np.unique(eigs[:100], return_counts=True)
        for lam, k in zip(uniq[:-1], counts[:-1]):
            jump = sp.counting(eigs, lam) - sp.counting(eigs, np.nextafter(lam, -np.inf))
            assert jump == k

    def test_scaling_invariance(self):
        # N_s(t/s^2) = N_1(t): eigenvalues scale by s^-2
        sq = sp.make_double("rectangle", (1.0, 1.0))
        big = sp.make_double("rectangle", (2.0, 2.0))
        for t in (50.0, 333.0, 1000.0):
            n1 = sp.counting(sp.double_spectrum(sq, t), t)
            n2 = sp.counting(sp.double_spectrum(big, t / 4.0), t / 4.0)
            assert n1 == n2
        eq = sp.make_double("equilateral", 1.0)
        eq3 = sp.make_double("equilateral", 3.0)
        for t in (200.0, 900.0):
            assert (sp.counting(sp.double_spectrum(eq, t), t)
                    == sp.counting(sp.double_spectrum(eq3, t / 9.0), t / 9.0))


class TestModifiedCounting:
    def test_paper_constant_is_total_curvature(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        assert sp.modified_constant(sq, "paper") == 4.0 * math.pi

    def test_corner_constant_doubled_square(self):
        # two right-angle wedges glued at each corner: each contributes
        # (pi^2 - b^2)/(24 pi b) with b = pi/2, summing to 1/8 per cone
        sq = sp.make_double("rectangle", (1.0, 1.0))
        assert np.isclose(sp.modified_constant(sq, "corner"), 0.5, rtol=1e-15)

    def test_corner_constant_other_domains(self):
        eq = sp.make_double("equilateral", 1.0)
        assert np.isclose(sp.modified_constant(eq, "corner"), 2.0 / 3.0, rtol=1e-14)
        iso = sp.make_double("isosceles-right", 1.0)
        assert np.isclose(sp.modified_constant(iso, "corner"), 0.75, rtol=1e-14)
        disc = sp.make_double("disc", 1.0)
        assert sp.modified_constant(disc, "corner") == 0.0

    def test_custom_mode_parsing(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        assert sp.modified_constant(sq, "custom:-2.5") == -2.5
        with pytest.raises(ValidationError):
            sp.modified_constant(sq, "custom:abc")
        with pytest.raises(ValidationError):
            sp.modified_constant(sq, "heat")

    def test_paper_mode_value(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        got = sp.modified_counting(sq, 100.0, "paper")
        assert np.isclose(got, 50.0 / math.pi + 4.0 * math.pi, rtol=1e-15)
        assert np.isclose(got, 28.4824, atol=5e-4)
        assert np.isclose(sp.modified_counting(sq, 100.0, "custom:0"),
                          50.0 / math.pi, rtol=1e-15)


class TestAverageError:
    def test_zero_when_model_matches(self):
        # a pure-slope model with no eigenvalues integrates to the
        # negated affine area; with slope and constant zero it vanishes
        assert sp.average_error(np.empty(0), 0.0, 0.0, 7.0) == 0.0

    def test_constant_offset_is_recovered_exactly(self):
        rng = np.random.default_rng(7)
        eigs = np.sort(rng.uniform(0.0, 40.0, size=25))
        for t in (3.7, 11.0, 39.5):
            base = sp.average_error(eigs, 0.4, 0.0, t)
            shifted = sp.average_error(eigs, 0.4, 1.25, t)
            assert np.isclose(shifted, base - 1.25, rtol=0, atol=1e-12)

    def test_matches_per_interval_accumulation(self):
        # independent route: walk the jump points and add each
        # rectangle and trapezoid exactly
        rng = np.random.default_rng(3)
        eigs = np.sort(rng.uniform(0.0, 20.0, size=18))
        slope, const = 0.9, -0.7
        for t in (0.5, 9.25, 19.9, 25.0):
            acc = 0.0
            pts = np.concatenate([[0.0], eigs[eigs <= t], [t]])
            for k in range(pts.size - 1):
                lo, hi = pts[k], pts[k + 1]
                acc += k * (hi - lo)
                acc -= 0.5 * slope * (hi * hi - lo * lo) + const * (hi - lo)
            assert np.isclose(sp.average_error(eigs, slope, const, t),
                              acc / t, rtol=0, atol=1e-9 * max(1.0, t))

    def test_riemann_sum_sanity(self):
        eigs = np.array([1.0, 2.5, 2.5, 6.0])
        t = 8.0
        s = np.linspace(0.0, t, 200001)[1:]
        integrand = np.searchsorted(eigs, s, side="right") - 0.3 * s - 0.1
        riemann = np.sum(integrand) * (t / 200000) / t
        assert np.isclose(sp.average_error(eigs, 0.3, 0.1, t), riemann, atol=1e-3)

    def test_rejects_nonpositive_t(self):
        with pytest.raises(ValidationError):
            sp.average_error(np.array([1.0]), 0.0, 0.0, 0.0)


class TestConjecture:
    def test_doubled_square_custom_zero_constant(self):
        # with no constant term the averaged error settles near 1/2,
        # the corner heat-trace value for four right-angle cones
        sq = sp.make_double("rectangle", (1.0, 1.0))
        rep = sp.conjecture_test(sq, 2e5, "custom:0")
        assert abs(rep["constant_term"] - 0.5) < 0.05
        assert rep["constant_term_mismatch"]

    def test_doubled_square_corner_mode_centers_the_error(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        rep = sp.conjecture_test(sq, 2e5, "corner")
        assert abs(rep["constant_term"]) < 3.0 * rep["tail_oscillation"]
        assert not rep["constant_term_mismatch"]

    def test_doubled_square_paper_mode_flags_mismatch(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        rep = sp.conjecture_test(sq, 2e5, "paper")
        assert rep["constant_term_mismatch"]
        assert np.isclose(rep["constant_term"] + 4.0 * math.pi, 0.5, atol=0.05)

    def test_custom_offset_shifts_constant_exactly(self):
        # A(t) drops pointwise by c, so the fitted constant does too
        sq = sp.make_double("rectangle", (1.0, 1.0))
        base = sp.conjecture_test(sq, 1e5, "custom:0")
        for c in (1.0, 10.0):
            rep = sp.conjecture_test(sq, 1e5, f"custom:{c}")
            assert np.isclose(rep["constant_term"] - base["constant_term"], -c,
                              rtol=0, atol=1e-9)
            assert np.allclose(rep["grid_average_error"],
                               base["grid_average_error"] - c, atol=1e-9)

    def test_report_is_deterministic(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        a = sp.conjecture_test(sq, 5e4)
        b = sp.conjecture_test(sq, 5e4)
        for key, val in a.items():
            if isinstance(val, np.ndarray):
                assert np.array_equal(val, b[key])
            else:
                assert val == b[key] or (isinstance(val, float)
                                         and math.isnan(val) and math.isnan(b[key]))

    def test_report_shape(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        rep = sp.conjecture_test(sq, 5e4)
        assert rep["tail_points"] >= 8
        assert rep["constant_term_low"] <= rep["constant_term"] <= rep["constant_term_high"]
        assert rep["decay_exponent_low"] <= rep["decay_exponent_high"]
        assert rep["grid_t"].size == rep["grid_points"]
        assert rep["eigenvalue_count"] == sp.double_spectrum(sq, 5e4).size

    def test_insufficient_range(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        with pytest.raises(InsufficientRange):
            sp.conjecture_test(sq, 200.0)
        with pytest.raises(InsufficientRange):
            sp.conjecture_test(sq, 1e4, t_min=2e3)

    def test_disc_double_runs(self):
        disc = sp.make_double("disc", 1.0)
        rep = sp.conjecture_test(disc, 1e4)
        assert rep["eigenvalue_count"] > 4000
        assert math.isfinite(rep["decay_exponent"])


class TestWeylIvrii:
    def test_double_residuals_stay_small(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        out = sp.weyl_ivrii_residuals(sq, "double", np.array([1e3, 1e4, 1e5]))
        ratios = np.abs(out["residual_over_sqrt_t"])
        assert np.all(ratios <= 0.35)
        # boundary terms cancel: no monotone growth across the decades
        assert not (ratios[0] < ratios[1] < ratios[2])

    def test_dirichlet_uncorrected_residual_tracks_boundary_term(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        ts = np.array([1e3, 1e4, 1e5])
        out = sp.weyl_ivrii_residuals(sq, "dirichlet", ts)
        uncorrected = out["counting"] - ts / (4.0 * math.pi)
        ratio = np.abs(uncorrected) / np.sqrt(ts) * math.pi
        assert np.allclose(ratio, [0.8521, 0.9982, 0.9611], atol=1e-3)
        assert np.all((0.8 <= ratio) & (ratio <= 1.2))

    def test_corrected_residuals_are_smaller_than_uncorrected(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        ts = np.array([1e4, 1e5])
        for bc in ("dirichlet", "neumann"):
            out = sp.weyl_ivrii_residuals(sq, bc, ts)
            uncorrected = out["counting"] - ts / (4.0 * math.pi)
            assert np.all(np.abs(out["residual"]) < np.abs(uncorrected))

    def test_rejects_bad_grid(self):
        sq = sp.make_double("rectangle", (1.0, 1.0))
        with pytest.raises(ValidationError):
            sp.weyl_ivrii_residuals(sq, "double", np.array([-1.0, 2.0]))
        with pytest.raises(ValidationError):
            sp.weyl_ivrii_residuals(sq, "robin", np.array([10.0]))


class TestFiniteDifference:
    def test_square_dirichlet_ground_state(self):
        vals = sp.fd_eigenvalues("rectangle", "dirichlet", 64, 3)
        assert abs(vals[0] - 2.0 * PI2) / (2.0 * PI2) < 0.005
        assert np.allclose(vals[1:], [5.0 * PI2] * 2, rtol=0.005)

    def test_square_neumann_has_exact_discrete_modes(self):
        # the mirror-boundary matrix is similarity-equivalent to the
        # cosine basis: its eigenvalues are sums of 4 sin^2(k pi/(2n))/h^2
        n = 20
        vals = sp.fd_eigenvalues("rectangle", "neumann", n, 12)
        h = 1.0 / n
        one = 4.0 * np.sin(np.arange(n + 1) * math.pi / (2 * n)) ** 2 / (h * h)
        exact = np.sort(np.add.outer(one, one).ravel())[:12]
        assert np.allclose(vals, exact, rtol=0, atol=1e-8 * exact[-1])

    def test_rectangle_anisotropic(self):
        vals = sp.fd_eigenvalues("rectangle", "dirichlet", 48, 1, size=(2.0, 1.0))
        expected = PI2 * (1.0 / 4.0 + 1.0)
        assert abs(vals[0] - expected) / expected < 0.005

    def test_isosceles_right_dirichlet(self):
        vals = sp.fd_eigenvalues("isosceles-right", "dirichlet", 128, 1)
        assert abs(vals[0] - 5.0 * PI2) / (5.0 * PI2) < 0.01

    def test_isosceles_right_neumann(self):
        vals = sp.fd_eigenvalues("isosceles-right", "neumann", 64, 4)
        assert vals[0] == 0.0
        assert np.allclose(vals[1:], PI2 * np.array([1, 2, 4]), rtol=0.005)

    def test_merged_first_twelve_match_exact_double(self):
        fd_d = sp.fd_eigenvalues("rectangle", "dirichlet", 64, 12)
        fd_n = sp.fd_eigenvalues("rectangle", "neumann", 64, 12)
        merged = np.sort(np.concatenate([fd_d, fd_n]))[:12]
        sq = sp.make_double("rectangle", (1.0, 1.0))
        exact = sp.double_spectrum(sq, 200.0)[:12]
        assert merged[0] == exact[0] == 0.0
        assert np.max(np.abs(merged[1:] - exact[1:]) / exact[1:]) < 0.01

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValidationError):
            sp.fd_eigenvalues("disc", "dirichlet", 32, 4)
        with pytest.raises(ValidationError):
            sp.fd_eigenvalues("rectangle", "dirichlet", 8, 4)
        with pytest.raises(ValidationError):
            sp.fd_eigenvalues("rectangle", "dirichlet", 32, 0)
        with pytest.raises(ValidationError):
            sp.fd_eigenvalues("rectangle", "dirichlet", 32, 300)
