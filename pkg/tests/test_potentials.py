import json
from math import factorial

import pytest

from algebra.coefficients import GaussianRational, I
from algebra.funcpoly import Field, FieldAtom, FuncPoly, ScalarSymbol, weight_of
from algebra.operators import OpExpr, sandwich, vacuum_form
from algebra.potentials import (
    LinDiffOp,
    PotentialComparison,
    Sign,
    StructureError,
    compare_effective_potentials,
    derive_effective_potential,
    effective_potential,
    landau_constant,
    landau_substitutions,
    structure_report,
    substitute_window,
    x_op,
    y_op,
    z_poly,
)
from cli.artifacts import dumps_json


class TestGoldenValues:
    @pytest.mark.parametrize("q, name", [(1, "z1.json"), (2, "z2.json")])
    def test_z(self, golden, q, name):
        text, data = golden(name)
        assert z_poly(q).to_json() == data
        assert dumps_json(z_poly(q).to_json()) == text
        assert FuncPoly.from_json(data) == z_poly(q)

    def test_x1(self, golden):
        text, data = golden("x1.json")
        assert x_op(1).to_json() == data
        assert dumps_json(x_op(1).to_json()) == text

    def test_z2_closed_form(self, B0, b):
        assert z_poly(2) == b * b * 8 + B0 * b * 16 + FuncPoly.atom(Field.B, 1, 1) * 8

    def test_lowest_level(self):
        assert z_poly(0) == FuncPoly.zero()
        assert dict(x_op(0).terms) == {(0, 0): FuncPoly.one()}
        assert dict(y_op(0).terms) == {(0, 1): FuncPoly.constant(-I * 2)}

    def test_negative_level(self):
        with pytest.raises(ValueError):
            z_poly(-1)


@pytest.mark.parametrize("q", [1, 2, 3, 4])
class TestStructure:
    def test_constant_term(self, q):
        full = vacuum_form(sandwich(q, 1))
        assert full.field_free_part() == landau_constant(q)
        assert landau_constant(q) == FuncPoly.scalar(ScalarSymbol.B0, q) * (2**q * factorial(q))

    def test_derivative_free_linear_term(self, q):
        scalars = [(ScalarSymbol.B0, q - 1)] if q > 1 else []
        coeff = z_poly(q).coefficient(atoms=[(FieldAtom(Field.B), 1)], scalars=scalars)
        assert coeff == GaussianRational.of(2**q * factorial(q) * q)

    def test_z_is_homogeneous(self, q):
        assert {weight_of(m) for m in z_poly(q).monomials()} == {2 * q}
        assert z_poly(q).max_order(Field.B) == 2 * q - 2

    def test_x_top_order(self, q):
        op = x_op(q)
        assert op.order == 2 * q
        assert op[(q, q)] == FuncPoly.constant(4**q)

    def test_y_top_order(self, q):
        op = y_op(q)
        assert op.order == 2 * q + 1
        assert op[(q, q + 1)] == FuncPoly.constant(I * (-2 * 4**q))

    def test_operators_are_homogeneous(self, q):
        def weights(op):
            return {weight_of(m) + 2 + d + e for (d, e), c in op.terms for m in c.monomials()}

        assert weights(x_op(q)) == {2 * q + 2}
        assert weights(y_op(q)) == {2 * q + 3}

    def test_real(self, q):
        assert z_poly(q).is_real
        assert x_op(q).apply(FuncPoly.atom(Field.U)).is_real

    def test_commutator_recursion(self, q, B0, b):
        lowered = OpExpr.qbar() * OpExpr.q() + (B0 + b) * 2
        assert vacuum_form(sandwich(q, 1)) == vacuum_form(sandwich(q - 1, lowered))

    def test_report(self, q):
        report = structure_report(q)
        assert report["highest_b_derivative_order"] == 2 * q - 2
        assert report["claimed_derivative_free_linear_coeff"] == str(2**q * factorial(q) * q)
        json.dumps(report)


@pytest.mark.parametrize("q", [5, pytest.param(6, marks=pytest.mark.slow)])
def test_constant_term_at_high_levels(q, B0, b):
    full = vacuum_form(sandwich(q, 1))
    assert full.field_free_part() == landau_constant(q)
    if q == 5:
        lowered = OpExpr.qbar() * OpExpr.q() + (B0 + b) * 2
        assert full == vacuum_form(sandwich(q - 1, lowered))


class TestLinDiffOp:
    def test_apply_x1(self, B0, b, V):
        expected = (B0 + b) * V * 2 + FuncPoly.atom(Field.V, 1, 1) * 4
        assert x_op(1).apply(V) == expected
        assert x_op(1)(V) == expected

    def test_x_agrees_with_vacuum_form(self, V):
        assert x_op(2).apply(V) == vacuum_form(sandwich(2, V))

    def test_y_agrees_with_vacuum_form(self, V):
        assert y_op(1).apply(V) == vacuum_form(OpExpr.q() * sandwich(1, V))

    def test_rejects_nonlinear(self):
        U = FuncPoly.atom(Field.U)
        with pytest.raises(StructureError):
            LinDiffOp.from_linear(U * U)

    def test_missing_slot_is_zero(self):
        assert x_op(1)[(3, 0)] == FuncPoly.zero()

    def test_operators_are_linear(self, b, V):
        g, h = b * 3 + V * V, FuncPoly.atom(Field.V, 1, 0) * I
        for op in (x_op(2), y_op(1), y_op(2)):
            assert op.apply(g + h) == op.apply(g) + op.apply(h)
            assert op.apply(g * 5) == op.apply(g) * 5
            assert op.apply(FuncPoly.zero()) == FuncPoly.zero()


class TestWindow:
    @pytest.mark.parametrize("sign", list(Sign))
    def test_scalar_identity(self, sign):
        mu, tau = FuncPoly.scalar(ScalarSymbol.MU), FuncPoly.scalar(ScalarSymbol.TAU)
        lam_big, s = FuncPoly.scalar(ScalarSymbol.BIG_LAM), FuncPoly.scalar(ScalarSymbol.S)
        lam = FuncPoly.scalar(ScalarSymbol.LAM)
        window, _ = landau_substitutions(2, sign)
        lhs = (mu * mu - tau * tau - mu * lam_big * 2 + lam_big * lam_big).substitute(window)
        rhs = (lam * (lam_big - s) * -sign.factor).substitute(window)
        assert lhs == rhs
        assert rhs == lam * FuncPoly.scalar(ScalarSymbol.B0)

    def test_level_substitution(self):
        _, level = landau_substitutions(3, Sign.MINUS)
        assert level[ScalarSymbol.BIG_LAM] == FuncPoly.scalar(ScalarSymbol.B0) * 6


class TestEffectivePotential:
    @pytest.mark.parametrize("q", [1, 2, 3])
    @pytest.mark.parametrize("sign", list(Sign))
    def test_field_free_constant(self, q, sign):
        derived = derive_effective_potential(q, sign)
        assert derived.constant_matches
        lam, B0 = FuncPoly.scalar(ScalarSymbol.LAM), FuncPoly.scalar(ScalarSymbol.B0)
        assert derived.constant == lam * B0 * landau_constant(q)

    @pytest.mark.parametrize("q", [1, 2])
    @pytest.mark.parametrize("sign", list(Sign))
    def test_constant_field_potential(self, q, sign, V):
        # With b = 0 the trial functions are exact eigenfunctions of P−, so the
        # potential is X_q[(2μ − 2Λ − V)V].
        mu, lam_big = FuncPoly.scalar(ScalarSymbol.MU), FuncPoly.scalar(ScalarSymbol.BIG_LAM)
        expected = x_op(q).apply((mu * 2 - lam_big * 2 - V) * V).without_field(Field.B)
        expected = substitute_window(expected, q, sign)
        derived = derive_effective_potential(q, sign).potential.without_field(Field.B)
        assert derived == expected

    @pytest.mark.parametrize("q", [1, 2])
    @pytest.mark.parametrize("sign", list(Sign))
    def test_vanishes_without_perturbation(self, q, sign):
        printed = effective_potential(q, sign, substitute=True)
        assert printed.without_field(Field.B).without_field(Field.V) == FuncPoly.zero()
        derived = derive_effective_potential(q, sign).potential
        assert derived.without_field(Field.B).without_field(Field.V) == FuncPoly.zero()

    def test_derived_potential_has_no_window_symbols(self):
        derived = derive_effective_potential(1, Sign.PLUS)
        assert set(derived.potential.scalars()) <= {ScalarSymbol.B0, ScalarSymbol.LAM}
        assert derived.potential.is_real

    def test_printed_form_substitution(self):
        printed = effective_potential(1, Sign.MINUS, substitute=True)
        assert set(printed.scalars()) <= {ScalarSymbol.B0, ScalarSymbol.LAM}
        assert Field.U not in printed.fields()

    def test_requires_excited_level(self):
        with pytest.raises(ValueError):
            effective_potential(0, Sign.MINUS)
        with pytest.raises(ValueError):
            derive_effective_potential(0, "+")

    def test_comparison_report(self):
        comparison = compare_effective_potentials(1, "-")
        assert isinstance(comparison, PotentialComparison)
        assert comparison.sign is Sign.MINUS
        assert comparison.agree == (not comparison.difference)
        assert comparison.difference == comparison.printed - comparison.derived
        payload = comparison.to_json()
        assert payload["agree"] == comparison.agree
        assert FuncPoly.from_json(payload["printed_minus_derived"]) == comparison.difference

    def test_comparison_detects_difference(self, V):
        comparison = PotentialComparison(1, Sign.PLUS, printed=V, derived=FuncPoly.zero())
        assert not comparison.agree
        assert comparison.to_json()["printed_minus_derived"] == V.to_json()
