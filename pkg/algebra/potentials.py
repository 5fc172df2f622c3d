"""Landau-level correction terms and the effective potential.

For ``u`` in the lowest Landau level the quadratic forms of the higher levels
reduce to functions and differential operators:

    (Q^q Q̄^q u, u)       = ((C_q + Z_q) u, u)
    (Q^q U Q̄^q u, u)     = (X_q[U] u, u)
    (Q^(q+1) U Q̄^q u, u) = (Y_q[U] u, u)

with ``C_q = q!(2B0)^q``.
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from math import factorial
from typing import Any, Dict, List, Tuple

import structlog

from algebra.funcpoly import Field, FieldAtom, FuncPoly, ScalarSymbol, weight_of
from algebra.operators import OpExpr, sandwich, vacuum_form

logger = structlog.get_logger(__name__)

__all__ = [
    "DerivedPotential",
    "LinDiffOp",
    "PotentialComparison",
    "Sign",
    "StructureError",
    "apply",
    "compare_effective_potentials",
    "derive_effective_potential",
    "effective_potential",
    "landau_constant",
    "landau_substitutions",
    "structure_report",
    "weight_of",
    "x_op",
    "y_op",
    "z_poly",
]


class StructureError(RuntimeError):
    """The commutation engine produced something structurally impossible."""


class Sign(str, Enum):
    PLUS = "+"
    MINUS = "-"

    @property
    def factor(self) -> int:
        return 1 if self is Sign.PLUS else -1


B0 = FuncPoly.scalar(ScalarSymbol.B0)
MU = FuncPoly.scalar(ScalarSymbol.MU)
TAU = FuncPoly.scalar(ScalarSymbol.TAU)
LAM = FuncPoly.scalar(ScalarSymbol.LAM)
BIG_LAM = FuncPoly.scalar(ScalarSymbol.BIG_LAM)
S = FuncPoly.scalar(ScalarSymbol.S)
b = FuncPoly.atom(Field.B)
V = FuncPoly.atom(Field.V)
U = FuncPoly.atom(Field.U)


def landau_constant(q: int) -> FuncPoly:
    """C_q = q!·(2B0)^q."""
    return (B0 * 2) ** q * factorial(q)


@dataclass(frozen=True)
class LinDiffOp:
    """``Σ c_(d,d̄) ∂^d ∂̄^d̄`` with polynomial coefficients."""

    terms: Tuple[Tuple[Tuple[int, int], FuncPoly], ...]

    @classmethod
    def from_linear(cls, poly: FuncPoly, fld: Field = Field.U) -> "LinDiffOp":
        try:
            collected = poly.linear_coefficients(fld)
        except ValueError as exc:
            raise StructureError(str(exc)) from exc
        return cls(tuple(sorted(collected.items(), key=lambda kv: (sum(kv[0]), kv[0]))))

    def __getitem__(self, slot: Tuple[int, int]) -> FuncPoly:
        return dict(self.terms).get(slot, FuncPoly.zero())

    @property
    def order(self) -> int:
        return max((d + dbar for (d, dbar), _ in self.terms), default=-1)

    def apply(self, g: FuncPoly) -> FuncPoly:
        result = FuncPoly.zero()
        for (d, dbar), coeff in self.terms:
            result = result + coeff * g.derivative(d, dbar)
        return result

    def __call__(self, g: FuncPoly) -> FuncPoly:
        return self.apply(g)

    def to_json(self) -> List[Dict[str, Any]]:
        return [
            {"d": d, "dbar": dbar, "coeff": coeff.to_json()}
            for (d, dbar), coeff in self.terms
        ]

    def pretty(self) -> str:
        parts = []
        for (d, dbar), coeff in self.terms:
            symbol = FuncPoly.atom(Field.U, d, dbar).monomials()[0].pretty_factors()
            parts.append(f"({coeff.pretty()})·{symbol}")
        return " + ".join(parts) or "0"


def apply(op: LinDiffOp, g: FuncPoly) -> FuncPoly:
    return op.apply(g)


@lru_cache(maxsize=None)
def z_poly(q: int) -> FuncPoly:
    """Z_q = vacuum(Q^q Q̄^q) − C_q; a polynomial in b and its derivatives."""
    if q < 0:
        raise ValueError("q must be non-negative")
    full = vacuum_form(sandwich(q, 1))
    z = full - landau_constant(q)
    if z.field_free_part():
        raise StructureError(f"Z_{q} has a field-free part: {z.field_free_part().pretty()}")
    if z.max_order(Field.B) > max(2 * q - 2, 0):
        raise StructureError(f"Z_{q} differentiates b beyond order {2 * q - 2}")
    logger.debug("z polynomial computed", q=q, monomials=len(z))
    return z


@lru_cache(maxsize=None)
def x_op(q: int) -> LinDiffOp:
    """X_q with (Q^q U Q̄^q u, u) = (X_q[U] u, u)."""
    if q < 0:
        raise ValueError("q must be non-negative")
    op = LinDiffOp.from_linear(vacuum_form(sandwich(q, U)))
    if op.order > 2 * q:
        raise StructureError(f"X_{q} has order {op.order} > {2 * q}")
    return op


@lru_cache(maxsize=None)
def y_op(q: int) -> LinDiffOp:
    """Y_q with (Q^(q+1) U Q̄^q u, u) = (Y_q[U] u, u)."""
    if q < 0:
        raise ValueError("q must be non-negative")
    op = LinDiffOp.from_linear(vacuum_form(OpExpr.q() * sandwich(q, U)))
    if op.order > 2 * q + 1:
        raise StructureError(f"Y_{q} has order {op.order} > {2 * q + 1}")
    return op


def landau_substitutions(q: int, sign: Sign) -> Tuple[Dict[ScalarSymbol, FuncPoly], Dict[ScalarSymbol, FuncPoly]]:
    """Window substitutions, in the order they must be applied.

    The first pass expresses s, μ and τ through Λ, λ and B0; the second pass
    sets Λ = 2qB0.
    """
    sgn = sign.factor
    s = BIG_LAM + B0 * sgn
    window = {
        ScalarSymbol.S: s,
        ScalarSymbol.MU: (BIG_LAM + LAM * sgn + s) / 2,
        ScalarSymbol.TAU: (B0 - LAM) / 2,
    }
    level = {ScalarSymbol.BIG_LAM: B0 * (2 * q)}
    return window, level


def substitute_window(poly: FuncPoly, q: int, sign: Sign, with_level: bool = True) -> FuncPoly:
    window, level = landau_substitutions(q, sign)
    result = poly.substitute(window)
    return result.substitute(level) if with_level else result


def effective_potential(q: int, sign: Sign, substitute: bool = False) -> FuncPoly:
    """The printed closed form of W± as a polynomial in b, V and scalars."""
    if q < 1:
        raise ValueError("the effective potential is defined for q >= 1")
    sign = Sign(sign)
    total_b = B0 + b
    w = (
        -(BIG_LAM + LAM * sign.factor + B0 * 2) * (S + B0 * 2) * z_poly(q)
        - z_poly(q + 2)
        + (MU + B0 * 3) * z_poly(q + 1) * 2
        - x_op(q).apply((total_b * 2 - b + MU) * b * 4 - (total_b * 4 - MU * 2 + V) * V)
        - x_op(q + 1).apply(V - b * 3) * 2
        - y_op(q).apply(V.d() - b.d() * 2).imag() * 4
    )
    return substitute_window(w, q, sign) if substitute else w


@dataclass(frozen=True)
class DerivedPotential:
    """First-principles decomposition of the window quadratic form."""

    q: int
    sign: Sign
    form: FuncPoly
    constant: FuncPoly
    potential: FuncPoly
    expected_constant: FuncPoly

    @property
    def constant_matches(self) -> bool:
        return self.constant == self.expected_constant


def derive_effective_potential(q: int, sign: Sign) -> DerivedPotential:
    """Expand ``‖(P_q + V − μ)u‖² − τ²‖Q̄^q u‖²`` for ``u`` in the lowest level.

    The result is fully substituted (Λ = 2qB0).  Its field-free part is the
    constant λ|Λ − s|C_q; the remaining field part is ``−W``.
    """
    if q < 1:
        raise ValueError("the effective potential is defined for q >= 1")
    sign = Sign(sign)
    hamiltonian = OpExpr.qbar() * OpExpr.q() + V - MU
    form = vacuum_form(sandwich(q, hamiltonian * hamiltonian)) - TAU * TAU * vacuum_form(
        sandwich(q, 1)
    )
    form = substitute_window(form, q, sign)
    window, level = landau_substitutions(q, sign)
    gap = (BIG_LAM - window[ScalarSymbol.S]) * sign.factor * -1
    expected = (LAM * gap * landau_constant(q)).substitute(level)
    derived = DerivedPotential(
        q=q,
        sign=sign,
        form=form,
        constant=form.field_free_part(),
        potential=-form.field_part(),
        expected_constant=expected,
    )
    if not derived.constant_matches:
        logger.warning(
            "field-free part differs from λ|Λ−s|C_q",
            q=q,
            sign=sign.value,
            constant=derived.constant.pretty(),
        )
    return derived


@dataclass(frozen=True)
class PotentialComparison:
    q: int
    sign: Sign
    printed: FuncPoly
    derived: FuncPoly
    difference: FuncPoly = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "difference", self.printed - self.derived)

    @property
    def agree(self) -> bool:
        return not self.difference

    def to_json(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "sign": self.sign.value,
            "agree": self.agree,
            "printed": self.printed.to_json(),
            "derived": self.derived.to_json(),
            "printed_minus_derived": self.difference.to_json(),
        }


def compare_effective_potentials(q: int, sign: Sign) -> PotentialComparison:
    sign = Sign(sign)
    comparison = PotentialComparison(
        q=q,
        sign=sign,
        printed=effective_potential(q, sign, substitute=True),
        derived=derive_effective_potential(q, sign).potential,
    )
    if comparison.agree:
        logger.info("printed effective potential confirmed", q=q, sign=sign.value)
    else:
        logger.warning(
            "printed effective potential diverges",
            q=q,
            sign=sign.value,
            differing_monomials=len(comparison.difference),
        )
    return comparison


def _b_linear(poly: FuncPoly) -> FuncPoly:
    return poly.filter(lambda m: m.field_power(Field.B) == 1 and m.degree == 1)


def structure_report(q: int) -> Dict[str, Any]:
    """Computed structural facts of Z_q and Y_q next to their printed claims."""
    if q < 1:
        raise ValueError("structure reports need q >= 1")
    z = z_poly(q)
    linear_free = z.coefficient(
        atoms=[(FieldAtom(Field.B), 1)], scalars=[(ScalarSymbol.B0, q - 1)] if q > 1 else []
    )
    top_order = z.max_order(Field.B)
    top_terms = z.filter(
        lambda m: any(a.field == Field.B and a.order == top_order for a, _ in m.atoms)
    )
    claimed_top = FuncPoly.atom(Field.B, q, q) * (2 * 4**q)
    y_zero = y_op(q)[(0, 0)]
    claimed_y_zero = landau_constant(q) + z
    return {
        "q": q,
        "constant_term": (vacuum_form(sandwich(q, 1)).field_free_part()).to_json(),
        "landau_constant": landau_constant(q).to_json(),
        "derivative_free_linear_coeff": [str(linear_free.re), str(linear_free.im)],
        "claimed_derivative_free_linear_coeff": str(2**q * factorial(q) * q),
        "highest_b_derivative_order": top_order,
        "highest_derivative_terms": _b_linear(top_terms).to_json(),
        "claimed_highest_derivative_terms": claimed_top.to_json(),
        "y_zero_order": y_zero.to_json(),
        "claimed_y_zero_order": claimed_y_zero.to_json(),
        "y_zero_order_matches_claim": y_zero == claimed_y_zero,
    }


def is_homogeneous(poly: FuncPoly, weight: int) -> bool:
    return all(weight_of(m) == weight for m in poly.monomials())
