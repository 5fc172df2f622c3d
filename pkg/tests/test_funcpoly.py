from fractions import Fraction

import pytest

from algebra.coefficients import ONE, GaussianRational, I
from algebra.funcpoly import Field, FieldAtom, FuncPoly, ScalarSymbol, weight_of


class TestGaussianRational:
    def test_arithmetic(self):
        z = GaussianRational(Fraction(1), Fraction(1))
        assert z * z.conjugate() == GaussianRational.of(2)
        assert (z / z) == ONE
        assert I * I == GaussianRational.of(-1)

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            ONE / 0

    def test_json(self):
        z = GaussianRational(Fraction(3, 4), Fraction(-1, 2))
        assert z.to_json() == [3, 4, -1, 2]
        assert GaussianRational.from_json([3, 4, -1, 2]) == z

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            GaussianRational.of(0.5)


class TestCalculus:
    def test_atom_derivatives(self, b):
        assert b.d().dbar() == FuncPoly.atom(Field.B, 1, 1)
        assert b.dbar().d() == b.d().dbar()

    def test_leibniz_rule(self, b, V):
        assert (b * V).d() == b.d() * V + b * V.d()
        assert (b * b).dbar() == b * b.dbar() * 2

    def test_scalars_are_constants(self, B0, b):
        assert B0.d() == FuncPoly.zero()
        assert (B0 * b).dbar() == B0 * b.dbar()

    def test_laplacian(self, b):
        assert b.laplacian() == FuncPoly.atom(Field.B, 1, 1) * 4

    def test_derivative_orders(self, b):
        assert b.derivative(2, 3) == FuncPoly.atom(Field.B, 2, 3)
        assert b.derivative(2, 3).max_order(Field.B) == 5


class TestConjugation:
    def test_swaps_derivatives(self, b):
        assert b.d().conjugate() == b.dbar()

    def test_conjugates_coefficients(self, b):
        assert (b.d() * I).conjugate() == b.dbar() * (-I)

    def test_real_and_imaginary_parts(self, b):
        p = b.d() * I
        assert p.imag() == (b.d() + b.dbar()) / 2
        assert p.real() == (b.d() - b.dbar()) * I / 2
        assert p.real().is_real and p.imag().is_real

    def test_laplacian_is_real(self, b):
        assert b.laplacian().is_real
        assert not b.d().is_real


class TestStructure:
    def test_substitute_single_pass(self, B0):
        mu = FuncPoly.scalar(ScalarSymbol.MU)
        result = (mu * mu).substitute({ScalarSymbol.MU: B0 + 1})
        assert result == B0 * B0 + B0 * 2 + 1

    def test_substitute_does_not_recurse(self, B0):
        mu = FuncPoly.scalar(ScalarSymbol.MU)
        tau = FuncPoly.scalar(ScalarSymbol.TAU)
        result = mu.substitute({ScalarSymbol.MU: tau, ScalarSymbol.TAU: B0})
        assert result == tau

    def test_without_field(self, b, V):
        assert (b * V + V + b).without_field(Field.B) == V

    def test_field_free_part(self, B0, b):
        p = B0 * 2 + b * 3 + 5
        assert p.field_free_part() == B0 * 2 + 5
        assert p.field_part() == b * 3

    def test_rotation_invariance(self, b):
        assert FuncPoly.atom(Field.B, 1, 1).is_rotation_invariant
        assert not b.d().is_rotation_invariant
        assert (b.d() * b.dbar()).is_rotation_invariant

    def test_linear_coefficients(self, B0, b):
        U = FuncPoly.atom(Field.U)
        p = (B0 + b) * U * 2 + U.d().dbar() * 4
        coefficients = p.linear_coefficients(Field.U)
        assert coefficients[(0, 0)] == (B0 + b) * 2
        assert coefficients[(1, 1)] == FuncPoly.constant(4)

    def test_linear_coefficients_rejects_quadratic(self):
        U = FuncPoly.atom(Field.U)
        with pytest.raises(ValueError):
            (U * U).linear_coefficients(Field.U)

    def test_weight(self, B0, b):
        mono = (B0 * FuncPoly.atom(Field.B, 1, 0)).monomials()[0]
        assert weight_of(mono) == 2 + 3
        assert weight_of((b * b).monomials()[0]) == 4

    def test_field_atom_rejects_negative_orders(self):
        with pytest.raises(ValueError):
            FieldAtom(Field.B, -1, 0)


class TestSerialization:
    def test_json_round_trip(self, B0, b, V):
        p = B0 * b * 16 + FuncPoly.atom(Field.B, 1, 1) * 8 + b * b * 8 + V.d() * (I / 3)
        assert FuncPoly.from_json(p.to_json()) == p

    def test_monomial_order(self, B0, b):
        p = b * b * 8 + FuncPoly.atom(Field.B, 1, 1) * 8 + B0 * b * 16
        degrees = [len(entry["atoms"]) for entry in p.to_json()]
        assert degrees == sorted(degrees)
        assert p.to_json()[0]["scalars"] == {"B0": 1}

    def test_pretty(self, b):
        assert (b * 2).pretty() == "2 b"
        assert FuncPoly.zero().pretty() == "0"
        assert (-b).pretty() == "-b"
