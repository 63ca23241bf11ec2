import numpy as np
import pytest

from gzntlab.errors import AmbiguousBoundary
from gzntlab.measures import (
    LOCAL_ATOM,
    LOCAL_NONE,
    Atom,
    PolynomialDensityPiece,
    SpectralMeasure,
    local_order,
    mass_at,
    validate_measure,
)
from gzntlab.registry import builtin


def piece(coeffs, lo=-1.0, hi=1.0):
    return PolynomialDensityPiece(lo, hi, tuple(coeffs))


class TestValidate:
    def test_constant_density_valid(self):
        m = SpectralMeasure(pieces=(piece([1.0]),))
        assert validate_measure(m).ok

    def test_nonpositive_mass(self):
        m = SpectralMeasure(atoms=(Atom(0.0, -0.5),))
        report = validate_measure(m)
        assert not report.ok
        assert any(code == "nonpositive-mass" for code, _ in report.violations)

    def test_sign_changing_density(self):
        m = SpectralMeasure(pieces=(piece([0.0, 1.0]),))  # phi(t) = t < 0 on [-1, 0)
        report = validate_measure(m)
        assert any(code == "negative-density" for code, _ in report.violations)

    def test_overlapping_pieces(self):
        m = SpectralMeasure(pieces=(piece([1.0], 0.0, 2.0), piece([1.0], 1.0, 3.0)))
        report = validate_measure(m)
        assert any(code == "overlapping-pieces" for code, _ in report.violations)

    def test_duplicate_atoms(self):
        m = SpectralMeasure(atoms=(Atom(1.0, 1.0), Atom(1.0, 2.0)))
        report = validate_measure(m)
        assert any(code == "duplicate-atoms" for code, _ in report.violations)

    def test_touching_pieces_are_fine(self):
        m = SpectralMeasure(pieces=(piece([1.0], -1.0, 0.0), piece([1.0], 0.0, 1.0)))
        assert validate_measure(m).ok

    @pytest.mark.parametrize("name", ["A-simple", "A-poly", "Btheta(pi/2)", "B-log", "C", "D", "E"])
    def test_builtin_measures_validate(self, name):
        assert validate_measure(builtin(name).base.measure).ok


class TestMassAt:
    def test_atom_hit(self):
        m = SpectralMeasure(atoms=(Atom(0.0, 0.5),))
        assert mass_at(m, 0.0) == 0.5

    def test_density_carries_no_mass(self):
        m = SpectralMeasure(pieces=(piece([1.0]),))
        assert mass_at(m, 0.0) == 0.0

    def test_picks_correct_atom(self):
        m = SpectralMeasure(atoms=(Atom(1.0, 2.0), Atom(0.0, 3.0)))
        assert mass_at(m, 1.0) == 2.0

    def test_mass_iff_listed(self):
        m = SpectralMeasure(pieces=(piece([0.0, 0.0, 1.0]),), atoms=(Atom(0.25, 1.5),))
        for x in (-0.5, 0.0, 0.25, 0.7, 2.0):
            assert (mass_at(m, x) > 0) == any(a.location == x for a in m.atoms)


class TestLocalOrder:
    def test_quadratic_at_zero(self):
        m = SpectralMeasure(pieces=(piece([0.0, 0.0, 1.0]),))
        assert local_order(m, 0.0) == 2

    def test_constant(self):
        m = SpectralMeasure(pieces=(piece([1.0]),))
        assert local_order(m, 0.0) == 0

    def test_outside_support(self):
        m = SpectralMeasure(pieces=(piece([1.0]),))
        assert local_order(m, 5.0) == LOCAL_NONE

    def test_atom(self):
        m = SpectralMeasure(atoms=(Atom(0.0, 1.0),))
        assert local_order(m, 0.0) == LOCAL_ATOM

    def test_endpoint_is_ambiguous(self):
        m = SpectralMeasure(pieces=(piece([1.0]),))
        with pytest.raises(AmbiguousBoundary):
            local_order(m, 1.0)

    def test_quartic_off_center(self):
        m = SpectralMeasure(pieces=(piece([0.0, 0.0, 0.0, 0.0, 1.0]),))
        assert local_order(m, 0.0) == 4
        assert local_order(m, 0.5) == 0  # t^4 has no zero at 0.5

    @pytest.mark.parametrize("shift", [-2.0, 0.125, 3.5])
    def test_translation_invariance(self, shift):
        m = SpectralMeasure(
            pieces=(piece([0.0, 0.0, 1.0]),),
            atoms=(Atom(2.0, 1.0),),
        )
        moved = SpectralMeasure(
            pieces=tuple(
                PolynomialDensityPiece(p.lo + shift, p.hi + shift, p.shifted_coeffs(-shift))
                for p in m.pieces
            ),
            atoms=tuple(Atom(a.location + shift, a.mass) for a in m.atoms),
        )
        for x in (0.0, 0.3, 2.0, 5.0):
            assert local_order(m, x) == local_order(moved, x + shift)


class TestIntervalMass:
    def test_polynomial_piece(self):
        m = SpectralMeasure(pieces=(piece([0.0, 0.0, 1.0]),))
        assert m.interval_mass(0.0, 1.5) == pytest.approx(1.0 / 3.0, abs=1e-15)

    def test_atoms_and_pieces(self):
        m = SpectralMeasure(pieces=(piece([1.0]),), atoms=(Atom(0.0, 2.0),))
        assert m.interval_mass(-0.5, 0.5) == pytest.approx(3.0, abs=1e-15)

    def test_sampled_against_quadrature(self):
        rng = np.random.default_rng(7)
        coeffs = rng.uniform(0.2, 1.0, size=3)
        m = SpectralMeasure(pieces=(PolynomialDensityPiece(-1.0, 1.0, tuple(coeffs)),))
        ts = np.linspace(-0.8, 0.6, 20001)
        brute = np.trapezoid(m.pieces[0].density(ts), ts)
        assert m.interval_mass(-0.8, 0.6) == pytest.approx(brute, rel=1e-6)
