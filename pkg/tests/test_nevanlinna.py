import math

import numpy as np
import pytest

from gzntlab.errors import AtomCollision, DomainError
from gzntlab.measures import Atom, PolynomialDensityPiece, SpectralMeasure
from gzntlab.nevanlinna import (
    NevanlinnaFunction,
    eval_M,
    eval_M_extended,
    extension_window,
    kernel_signature,
    nevanlinna_kernel,
    stieltjes_invert,
)
from gzntlab.registry import builtin


def measure(pieces=(), atoms=()):
    return SpectralMeasure(tuple(pieces), tuple(atoms))


UNIT_BOX = measure(pieces=[PolynomialDensityPiece(-1, 1, (1.0,))])
SINGLE_ATOM = measure(atoms=[Atom(0.0, 1.0)])


class TestEval:
    def test_single_atom_is_reciprocal(self):
        M = NevanlinnaFunction(0.0, 0.0, SINGLE_ATOM)
        assert eval_M(M, 1j) == pytest.approx(1j, abs=1e-15)  # -1/z at z=i

    def test_box_density(self):
        M = NevanlinnaFunction(0.0, 0.0, UNIT_BOX)
        assert eval_M(M, 1j) == pytest.approx(1j * math.pi / 2, abs=1e-14)

    def test_pure_linear_term(self):
        M = NevanlinnaFunction(0.0, 1.0, measure())
        assert eval_M(M, 2 + 3j) == pytest.approx(2 + 3j, abs=1e-15)

    def test_symmetry_principle(self):
        M = NevanlinnaFunction(0.4, 0.2, UNIT_BOX, fullline=0.1)
        rng = np.random.default_rng(5)
        for _ in range(20):
            z = complex(rng.uniform(-2, 2), rng.uniform(0.05, 2))
            assert eval_M(M, z.conjugate()) == pytest.approx(eval_M(M, z).conjugate(), rel=1e-14)

    def test_rejects_real_axis(self):
        M = NevanlinnaFunction(0.0, 0.0, UNIT_BOX)
        with pytest.raises(DomainError):
            eval_M(M, 0.5)


class TestPickKernel:
    @pytest.mark.parametrize("name", ["A-simple", "A-poly", "Btheta(pi/2)", "B-log", "C", "D", "E"])
    def test_base_kernel_psd(self, name):
        M = builtin(name).base
        rng = np.random.default_rng(17)
        zs = rng.uniform(-2, 2, 20) + 1j * rng.uniform(0.1, 2.0, 20)
        K = nevanlinna_kernel(lambda z: eval_M(M, z), zs)
        neg, _ = kernel_signature(K)
        assert neg == 0


class TestExtension:
    def test_agrees_with_plain_on_upper_half_plane(self):
        M = NevanlinnaFunction(0.0, 0.0, UNIT_BOX)
        win = extension_window(M, 0.0)
        for z in (2j, 0.5 + 0.1j, -0.3 + 1e-8j):
            assert eval_M_extended(M, win, z) == eval_M(M, z)

    def test_boundary_value(self):
        M = NevanlinnaFunction(0.0, 0.0, UNIT_BOX)
        win = extension_window(M, 0.0)
        assert eval_M_extended(M, win, 0.0) == pytest.approx(1j * math.pi, abs=1e-15)

    def test_lower_window_value(self):
        M = NevanlinnaFunction(0.0, 0.0, UNIT_BOX)
        win = extension_window(M, 0.0)
        expected = eval_M(M, 0.5j).conjugate() + 2j * math.pi
        assert eval_M_extended(M, win, -0.5j) == pytest.approx(expected, abs=1e-15)

    def test_window_bounds_from_gap(self):
        M = NevanlinnaFunction(0.0, 0.0, measure(
            pieces=[PolynomialDensityPiece(-2, -1, (1.0,)), PolynomialDensityPiece(1, 2, (1.0,))],
            atoms=[Atom(0.5, 1.0)],
        ))
        win = extension_window(M, 0.0)
        assert win.lo == -1.0 and win.hi == 0.5 and win.host is None

    def test_window_hosted_by_piece(self):
        M = NevanlinnaFunction(0.0, 0.0, UNIT_BOX)
        win = extension_window(M, 0.25)
        assert (win.lo, win.hi, win.host) == (-1.0, 1.0, 0)

    def test_atom_collision(self):
        M = NevanlinnaFunction(0.0, 0.0, SINGLE_ATOM)
        win = extension_window(M, 0.5, designated=0.0)
        with pytest.raises(AtomCollision):
            eval_M_extended(M, win, 0.0)

    def test_fullline_continues_as_constant(self):
        M = NevanlinnaFunction(0.0, 0.0, measure(), fullline=1 / math.pi)
        win = extension_window(M, 0.0)
        for z in (0.3, -0.4j, 1 + 1j):
            assert eval_M_extended(M, win, z) == pytest.approx(1j, abs=1e-15)


class TestStieltjesInversion:
    def test_box_mass(self):
        M = NevanlinnaFunction(0.0, 0.0, UNIT_BOX)
        assert stieltjes_invert(M, -0.5, 0.5) == pytest.approx(1.0, abs=1e-4)

    def test_quadratic_density_mass(self):
        M = NevanlinnaFunction(0.0, 0.0, measure(pieces=[PolynomialDensityPiece(-1, 1, (0, 0, 1.0))]))
        assert stieltjes_invert(M, 0.0, 1.5) == pytest.approx(1.0 / 3.0, abs=1e-4)

    def test_atom_mass(self):
        M = NevanlinnaFunction(0.0, 0.0, measure(atoms=[Atom(0.0, 2.0)]))
        assert stieltjes_invert(M, -0.1, 0.1) == pytest.approx(2.0, abs=1e-4)

    def test_rejects_atom_endpoint(self):
        M = NevanlinnaFunction(0.0, 0.0, SINGLE_ATOM)
        with pytest.raises(DomainError):
            stieltjes_invert(M, 0.0, 1.0)

    @pytest.mark.parametrize("name,spans", [
        ("A-simple", [(-0.7, 0.4), (0.2, 1.3), (-2.0, -0.3)]),
        ("B-log", [(-0.5, 0.5), (-0.9, -0.2), (0.1, 2.0)]),
        ("C", [(-0.5, 0.5), (0.2, 0.8), (-2.0, 2.0)]),
        ("E", [(-0.5, 0.5), (-1.5, 0.25), (0.4, 0.9)]),
    ])
    def test_recovers_model_mass(self, name, spans):
        M = builtin(name).base
        for t1, t2 in spans:
            want = M.interval_mass(t1, t2)
            assert stieltjes_invert(M, t1, t2) == pytest.approx(want, abs=1e-4)
