"""Symbolic polynomials in scalar parameters and derivatives of real fields.

A :class:`FuncPoly` is a finite sum of monomials ``coeff · Π scalar^k · Π
∂^d ∂̄^d̄ field``.  All coefficients are exact Gaussian rationals, so results
of the commutation engine can be compared structurally.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from algebra.coefficients import ONE, GaussianRational, I, Number


class ScalarSymbol(str, Enum):
    """Real scalar parameters; all carry the dimension of an energy."""

    B0 = "B0"
    MU = "mu"
    TAU = "tau"
    LAM = "lam"
    BIG_LAM = "Lam"
    S = "s"


class Field(str, Enum):
    """Real fields: magnetic perturbation, electric potential, test function."""

    B = "b"
    V = "V"
    U = "U"


_SCALAR_RANK = {symbol: rank for rank, symbol in enumerate(ScalarSymbol)}
_FIELD_RANK = {fld: rank for rank, fld in enumerate(Field)}


@dataclass(frozen=True, slots=True)
class FieldAtom:
    """``∂^d ∂̄^dbar`` applied to one field."""

    field: Field
    d: int = 0
    dbar: int = 0

    def __post_init__(self) -> None:
        if self.d < 0 or self.dbar < 0:
            raise ValueError("derivative orders must be non-negative")

    @property
    def sort_key(self) -> Tuple[int, int, int]:
        return (_FIELD_RANK[self.field], self.d, self.dbar)

    @property
    def order(self) -> int:
        return self.d + self.dbar

    @property
    def weight(self) -> int:
        return 2 + self.d + self.dbar

    @property
    def angular_charge(self) -> int:
        return self.dbar - self.d

    def shifted(self, d: int = 0, dbar: int = 0) -> "FieldAtom":
        return FieldAtom(self.field, self.d + d, self.dbar + dbar)

    def conjugate(self) -> "FieldAtom":
        return FieldAtom(self.field, self.dbar, self.d)

    def pretty(self) -> str:
        def power(symbol: str, n: int) -> str:
            if n == 0:
                return ""
            return symbol if n == 1 else f"{symbol}^{n}"

        return f"{power('∂', self.d)}{power('∂̄', self.dbar)}{self.field.value}"


ScalarKey = Tuple[Tuple[ScalarSymbol, int], ...]
AtomKey = Tuple[Tuple[FieldAtom, int], ...]
MonoKey = Tuple[ScalarKey, AtomKey]

_UNIT_KEY: MonoKey = ((), ())


def _merge_scalars(a: ScalarKey, b: ScalarKey) -> ScalarKey:
    powers: Dict[ScalarSymbol, int] = dict(a)
    for symbol, exponent in b:
        powers[symbol] = powers.get(symbol, 0) + exponent
    return tuple(sorted(powers.items(), key=lambda item: _SCALAR_RANK[item[0]]))


def _merge_atoms(a: AtomKey, b: AtomKey) -> AtomKey:
    powers: Dict[FieldAtom, int] = dict(a)
    for atom, exponent in b:
        powers[atom] = powers.get(atom, 0) + exponent
    return tuple(
        sorted(
            ((atom, p) for atom, p in powers.items() if p),
            key=lambda item: item[0].sort_key,
        )
    )


@dataclass(frozen=True)
class Monomial:
    coeff: GaussianRational
    scalars: ScalarKey
    atoms: AtomKey

    @property
    def key(self) -> MonoKey:
        return (self.scalars, self.atoms)

    @property
    def degree(self) -> int:
        return sum(p for _, p in self.atoms)

    @property
    def angular_charge(self) -> int:
        return sum(atom.angular_charge * p for atom, p in self.atoms)

    def scalar_power(self, symbol: ScalarSymbol) -> int:
        return dict(self.scalars).get(symbol, 0)

    def field_power(self, fld: Field) -> int:
        return sum(p for atom, p in self.atoms if atom.field == fld)

    @property
    def sort_key(self) -> Tuple[Any, ...]:
        expanded_atoms = tuple(
            atom.sort_key for atom, p in self.atoms for _ in range(p)
        )
        expanded_scalars = tuple(
            _SCALAR_RANK[symbol] for symbol, p in self.scalars for _ in range(p)
        )
        return (len(expanded_atoms), expanded_atoms, expanded_scalars)

    def to_json(self) -> Dict[str, Any]:
        return {
            "coeff": self.coeff.to_json(),
            "scalars": {symbol.value: p for symbol, p in self.scalars},
            "atoms": [
                {"field": atom.field.value, "d": atom.d, "dbar": atom.dbar}
                for atom, p in self.atoms
                for _ in range(p)
            ],
        }

    def pretty_factors(self) -> str:
        parts = [
            symbol.value if p == 1 else f"{symbol.value}^{p}"
            for symbol, p in self.scalars
        ]
        parts += [
            atom.pretty() if p == 1 else f"({atom.pretty()})^{p}"
            for atom, p in self.atoms
        ]
        return " ".join(parts)


class FuncPoly:
    """Immutable sparse polynomial keyed by (scalars, atoms)."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[MonoKey, GaussianRational]] = None):
        self._terms: Dict[MonoKey, GaussianRational] = {
            key: coeff for key, coeff in (terms or {}).items() if coeff
        }
        self._hash: Optional[int] = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "FuncPoly":
        return cls()

    @classmethod
    def constant(cls, value: Number) -> "FuncPoly":
        return cls({_UNIT_KEY: GaussianRational.of(value)})

    @classmethod
    def one(cls) -> "FuncPoly":
        return cls.constant(ONE)

    @classmethod
    def scalar(cls, symbol: ScalarSymbol, power: int = 1) -> "FuncPoly":
        if power == 0:
            return cls.one()
        return cls({(((symbol, power),), ()): ONE})

    @classmethod
    def atom(cls, fld: Field, d: int = 0, dbar: int = 0) -> "FuncPoly":
        return cls({((), ((FieldAtom(fld, d, dbar), 1),)): ONE})

    @classmethod
    def from_monomials(cls, monomials: Iterable[Monomial]) -> "FuncPoly":
        terms: Dict[MonoKey, GaussianRational] = {}
        for mono in monomials:
            scalars = _merge_scalars((), mono.scalars)
            atoms = _merge_atoms((), mono.atoms)
            key = (scalars, atoms)
            terms[key] = terms.get(key, GaussianRational()) + mono.coeff
        return cls(terms)

    @staticmethod
    def coerce(value: "FuncPoly | Number") -> "FuncPoly":
        if isinstance(value, FuncPoly):
            return value
        return FuncPoly.constant(value)

    # -- container protocol -----------------------------------------------

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.monomials())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def items(self) -> Iterable[Tuple[MonoKey, GaussianRational]]:
        return self._terms.items()

    def monomials(self) -> List[Monomial]:
        monos = [
            Monomial(coeff, scalars, atoms)
            for (scalars, atoms), coeff in self._terms.items()
        ]
        return sorted(monos, key=lambda m: m.sort_key)

    def coefficient(
        self,
        atoms: Iterable[Tuple[FieldAtom, int]] = (),
        scalars: Iterable[Tuple[ScalarSymbol, int]] = (),
    ) -> GaussianRational:
        key = (_merge_scalars((), tuple(scalars)), _merge_atoms((), tuple(atoms)))
        return self._terms.get(key, GaussianRational())

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "FuncPoly | Number") -> "FuncPoly":
        other = FuncPoly.coerce(other)
        terms = dict(self._terms)
        for key, coeff in other._terms.items():
            terms[key] = terms.get(key, GaussianRational()) + coeff
        return FuncPoly(terms)

    __radd__ = __add__

    def __neg__(self) -> "FuncPoly":
        return FuncPoly({key: -coeff for key, coeff in self._terms.items()})

    def __sub__(self, other: "FuncPoly | Number") -> "FuncPoly":
        return self + (-FuncPoly.coerce(other))

    def __rsub__(self, other: "FuncPoly | Number") -> "FuncPoly":
        return FuncPoly.coerce(other) - self

    def __mul__(self, other: "FuncPoly | Number") -> "FuncPoly":
        if not isinstance(other, FuncPoly):
            factor = GaussianRational.of(other)
            return FuncPoly({key: coeff * factor for key, coeff in self._terms.items()})
        terms: Dict[MonoKey, GaussianRational] = {}
        for (s1, a1), c1 in self._terms.items():
            for (s2, a2), c2 in other._terms.items():
                key = (_merge_scalars(s1, s2), _merge_atoms(a1, a2))
                terms[key] = terms.get(key, GaussianRational()) + c1 * c2
        return FuncPoly(terms)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "FuncPoly":
        factor = GaussianRational.of(other)
        return FuncPoly({key: coeff / factor for key, coeff in self._terms.items()})

    def __pow__(self, exponent: int) -> "FuncPoly":
        if exponent < 0:
            raise ValueError("negative powers are not polynomial")
        result = FuncPoly.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FuncPoly):
            return self._terms == other._terms
        try:
            return self._terms == FuncPoly.constant(other)._terms  # type: ignore[arg-type]
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"FuncPoly({self.pretty()})"

    # -- calculus ------------------------------------------------------------

    def _differentiate(self, d: int, dbar: int) -> "FuncPoly":
        terms: Dict[MonoKey, GaussianRational] = {}
        for (scalars, atoms), coeff in self._terms.items():
            for atom, power in atoms:
                rest = _merge_atoms(atoms, ((atom, -1),))
                key = (scalars, _merge_atoms(rest, ((atom.shifted(d, dbar), 1),)))
                terms[key] = terms.get(key, GaussianRational()) + coeff * power
        return FuncPoly(terms)

    def d(self) -> "FuncPoly":
        """Holomorphic derivative ∂ = ½(∂x − i∂y), by the Leibniz rule."""
        return self._differentiate(1, 0)

    def dbar(self) -> "FuncPoly":
        """Anti-holomorphic derivative ∂̄ = ½(∂x + i∂y)."""
        return self._differentiate(0, 1)

    def derivative(self, d: int = 0, dbar: int = 0) -> "FuncPoly":
        result = self
        for _ in range(d):
            result = result.d()
        for _ in range(dbar):
            result = result.dbar()
        return result

    def laplacian(self) -> "FuncPoly":
        return self.d().dbar() * 4

    def conjugate(self) -> "FuncPoly":
        terms: Dict[MonoKey, GaussianRational] = {}
        for (scalars, atoms), coeff in self._terms.items():
            key = (scalars, _merge_atoms((), tuple((a.conjugate(), p) for a, p in atoms)))
            terms[key] = terms.get(key, GaussianRational()) + coeff.conjugate()
        return FuncPoly(terms)

    def real(self) -> "FuncPoly":
        return (self + self.conjugate()) / 2

    def imag(self) -> "FuncPoly":
        return (self - self.conjugate()) / (I * 2)

    # -- structure -------------------------------------------------------

    def substitute(self, mapping: Mapping[ScalarSymbol, "FuncPoly | Number"]) -> "FuncPoly":
        """Replace scalar symbols by polynomials, one pass, no recursion."""
        result = FuncPoly.zero()
        for (scalars, atoms), coeff in self._terms.items():
            kept: List[Tuple[ScalarSymbol, int]] = []
            factor = FuncPoly.one()
            for symbol, power in scalars:
                if symbol in mapping:
                    factor = factor * FuncPoly.coerce(mapping[symbol]) ** power
                else:
                    kept.append((symbol, power))
            result = result + factor * FuncPoly({(tuple(kept), atoms): coeff})
        return result

    def filter(self, keep: Callable[[Monomial], bool]) -> "FuncPoly":
        return FuncPoly(
            {key: coeff for key, coeff in self._terms.items() if keep(Monomial(coeff, *key))}
        )

    def without_field(self, fld: Field) -> "FuncPoly":
        """Set a field to zero."""
        return self.filter(lambda m: m.field_power(fld) == 0)

    def field_free_part(self) -> "FuncPoly":
        return self.filter(lambda m: m.degree == 0)

    def field_part(self) -> "FuncPoly":
        return self.filter(lambda m: m.degree > 0)

    @property
    def is_field_free(self) -> bool:
        return all(not atoms for (_, atoms) in self._terms)

    @property
    def is_real(self) -> bool:
        return self == self.conjugate()

    @property
    def is_rotation_invariant(self) -> bool:
        return all(m.angular_charge == 0 for m in self.monomials())

    def fields(self) -> List[Field]:
        present = {atom.field for (_, atoms) in self._terms for atom, _ in atoms}
        return sorted(present, key=lambda f: _FIELD_RANK[f])

    def scalars(self) -> List[ScalarSymbol]:
        present = {symbol for (scalars, _) in self._terms for symbol, _ in scalars}
        return sorted(present, key=lambda s: _SCALAR_RANK[s])

    def atoms(self) -> List[FieldAtom]:
        present = {atom for (_, atoms) in self._terms for atom, _ in atoms}
        return sorted(present, key=lambda a: a.sort_key)

    def field_degrees(self, fld: Field) -> List[int]:
        return sorted({m.field_power(fld) for m in self.monomials()})

    def max_order(self, fld: Field) -> int:
        orders = [atom.order for atom in self.atoms() if atom.field == fld]
        return max(orders, default=-1)

    def linear_coefficients(self, fld: Field) -> Dict[Tuple[int, int], "FuncPoly"]:
        """Split a polynomial that is linear in ``fld`` by derivative of ``fld``.

        Raises ValueError if some monomial is not of degree one in ``fld``.
        """
        collected: Dict[Tuple[int, int], FuncPoly] = {}
        for (scalars, atoms), coeff in self._terms.items():
            hits = [(atom, p) for atom, p in atoms if atom.field == fld]
            if len(hits) != 1 or hits[0][1] != 1:
                raise ValueError(f"monomial is not linear in {fld.value}")
            atom = hits[0][0]
            rest = _merge_atoms(atoms, ((atom, -1),))
            piece = FuncPoly({(scalars, rest): coeff})
            slot = (atom.d, atom.dbar)
            collected[slot] = collected.get(slot, FuncPoly.zero()) + piece
        return collected

    # -- serialization -----------------------------------------------------

    def to_json(self) -> List[Dict[str, Any]]:
        return [mono.to_json() for mono in self.monomials()]

    @classmethod
    def from_json(cls, data: List[Dict[str, Any]]) -> "FuncPoly":
        monos = []
        for entry in data:
            scalars = tuple(
                (ScalarSymbol(name), int(power))
                for name, power in entry.get("scalars", {}).items()
            )
            atoms = tuple(
                (FieldAtom(Field(atom["field"]), int(atom["d"]), int(atom["dbar"])), 1)
                for atom in entry.get("atoms", [])
            )
            monos.append(Monomial(GaussianRational.from_json(entry["coeff"]), scalars, atoms))
        return cls.from_monomials(monos)

    def pretty(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for mono in self.monomials():
            factors = mono.pretty_factors()
            coeff = mono.coeff
            if not factors:
                pieces.append(coeff.pretty())
            elif coeff == ONE:
                pieces.append(factors)
            elif coeff == -ONE:
                pieces.append(f"-{factors}")
            else:
                pieces.append(f"{coeff.pretty()} {factors}")
        return " + ".join(pieces).replace("+ -", "- ")


def scalar(symbol: ScalarSymbol) -> FuncPoly:
    return FuncPoly.scalar(symbol)


def atom(fld: Field, d: int = 0, dbar: int = 0) -> FuncPoly:
    return FuncPoly.atom(fld, d, dbar)


def weight_of(mono: Monomial) -> int:
    """Scaling weight: 2 + d + d̄ per field atom and 2 per power of B0."""
    return sum(a.weight * p for a, p in mono.atoms) + 2 * mono.scalar_power(ScalarSymbol.B0)
