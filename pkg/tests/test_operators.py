import random

import pytest

from algebra.coefficients import I
from algebra.funcpoly import Field, FuncPoly, ScalarSymbol, weight_of
from algebra.operators import (
    Func,
    OpExpr,
    OpWord,
    Q,
    QBAR,
    adjoint,
    normal_order,
    normal_terms,
    sandwich,
    vacuum_form,
)


@pytest.fixture
def alphabet(b, V):
    return [Q, QBAR, Func(b), Func(V), Func(b.d()), Func(V.dbar())]


def random_word(rng, alphabet, max_length=8):
    return OpExpr([OpWord.of(*(rng.choice(alphabet) for _ in range(rng.randint(1, max_length))))])


class TestRewriteRules:
    def test_q_past_function(self, b):
        terms = normal_terms(OpExpr.q() * OpExpr.func(b))
        assert terms == {(0, 1): b, (0, 0): b.dbar() * (-I * 2)}

    def test_function_past_qbar(self, b):
        terms = normal_terms(OpExpr.func(b) * OpExpr.qbar())
        assert terms == {(1, 0): b, (0, 0): b.d() * (I * 2)}

    def test_commutator(self, B0, b):
        terms = normal_terms(OpExpr.q() * OpExpr.qbar())
        assert terms == {(1, 1): FuncPoly.one(), (0, 0): B0 * 2 + b * 2}

    def test_operator_equality_uses_normal_forms(self, B0, b):
        lhs = OpExpr.q() * OpExpr.qbar()
        rhs = OpExpr.qbar() * OpExpr.q() + (B0 + b) * 2
        assert lhs == rhs

    def test_normal_words_are_fixed_points(self, b):
        expr = OpExpr.word(QBAR, Func(b), Q)
        assert expr.is_normal
        assert normal_terms(expr) == {(1, 1): b}

    def test_ladder(self, B0, b):
        terms = normal_terms(OpExpr.q() * OpExpr.qbar() ** 2)
        assert terms == {
            (2, 1): FuncPoly.one(),
            (1, 0): (B0 + b) * 4,
            (0, 0): b.d() * (I * 4),
        }


class TestVacuumForm:
    def test_first_level(self, B0, b):
        assert vacuum_form(sandwich(1, 1)) == B0 * 2 + b * 2

    def test_normal_words_without_q(self, b):
        assert vacuum_form(OpExpr.func(b)) == b
        assert vacuum_form(OpExpr.word(QBAR, Func(b))) == FuncPoly.zero()
        assert vacuum_form(OpExpr.word(Func(b), Q)) == FuncPoly.zero()

    def test_matches_full_normal_form(self, alphabet):
        rng = random.Random(7)
        for _ in range(100):
            expr = random_word(rng, alphabet)
            full = normal_terms(expr).get((0, 0), FuncPoly.zero())
            assert vacuum_form(expr) == full, expr.pretty()

    def test_single_q_reaches_vacuum_through_field_derivatives(self, b):
        # Q·Q̄³ = Q̄³Q + Σ Q̄^j 2B Q̄^(2−j); only 2B·Q̄² has a vacuum part.
        expr = OpExpr.q() * OpExpr.qbar() ** 3
        assert vacuum_form(expr) == b.derivative(2, 0) * -8

    def test_functions_lower_qbar_powers(self, b):
        expr = OpExpr.q() * OpExpr.func(b) * OpExpr.qbar() * OpExpr.qbar()
        assert vacuum_form(expr) == normal_terms(expr)[(0, 0)]


class TestConfluence:
    @pytest.mark.slow
    def test_random_rewriting_agrees(self, alphabet):
        rng = random.Random(2024)
        for _ in range(200):
            expr = random_word(rng, alphabet)
            literal = normal_order(expr, rng=random.Random(rng.random()))
            assert normal_terms(literal) == normal_terms(normal_order(expr)), expr.pretty()

    def test_normal_order_is_normal(self, alphabet):
        rng = random.Random(3)
        for _ in range(20):
            assert normal_order(random_word(rng, alphabet)).is_normal


class TestAdjoint:
    def test_letters(self, b):
        expr = OpExpr.word(Q, Func(b.d()))
        assert normal_terms(adjoint(expr)) == normal_terms(OpExpr.word(Func(b.dbar()), QBAR))

    def test_conjugates_normal_form(self, alphabet):
        rng = random.Random(11)
        for _ in range(50):
            expr = random_word(rng, alphabet, max_length=6)
            terms = normal_terms(expr)
            mirrored = {(c, a): g.conjugate() for (a, c), g in terms.items()}
            assert normal_terms(adjoint(expr)) == mirrored

    def test_sandwich_is_self_adjoint(self, V):
        expr = sandwich(2, V)
        assert adjoint(expr) == expr


class TestWeights:
    def test_word_weight(self, b):
        assert OpWord.of(Q, Func(b), QBAR, QBAR).weight == 3

    def test_normal_ordering_preserves_weight(self, b, V):
        rng = random.Random(5)
        # Q, Q̄ weigh 1; b and V weigh 2, each derivative 1, B0 weighs 2.
        letters = [Q, QBAR, Func(b), Func(V), Func(b.d())]
        letter_weight = {0: 1, 1: 1, 2: 2, 3: 2, 4: 3}
        for _ in range(50):
            picks = [rng.randrange(len(letters)) for _ in range(rng.randint(1, 7))]
            expr = OpExpr([OpWord.of(*(letters[i] for i in picks))])
            total = sum(letter_weight[i] for i in picks)
            for (a, c), g in normal_terms(expr).items():
                for mono in g.monomials():
                    assert a + c + weight_of(mono) == total

    def test_prefactors_must_be_field_free(self, b):
        with pytest.raises(ValueError):
            OpWord((Q,), b)

    def test_scalar_prefactors_commute(self, B0):
        mu = FuncPoly.scalar(ScalarSymbol.MU)
        expr = OpExpr.q() * mu * OpExpr.qbar()
        assert normal_terms(expr)[(0, 0)] == mu * B0 * 2 + mu * FuncPoly.atom(Field.B) * 2
