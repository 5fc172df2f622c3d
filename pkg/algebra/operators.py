"""Words in Q, Q̄ and multiplication operators, and their normal ordering.

Letters satisfy

    Q·f  = f·Q + (−2i ∂̄f)
    f·Q̄  = Q̄·f + 2i ∂f
    Q·Q̄  = Q̄·Q + 2B0 + 2b

and the normal form of a word is a sum of ``Q̄^a · g · Q^c``.  The vacuum
form keeps only the ``a = c = 0`` part, which is what survives in
``(E u, u)`` for ``u`` in the lowest Landau level.
"""
import random
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Optional, Tuple

import structlog

from algebra.coefficients import GaussianRational, I, Number
from algebra.funcpoly import Field, FuncPoly, ScalarSymbol

logger = structlog.get_logger(__name__)

NormalForm = Dict[Tuple[int, int], FuncPoly]

TWO_I = I * 2
MINUS_TWO_I = -TWO_I


def total_field() -> FuncPoly:
    """B = B0 + b."""
    return FuncPoly.scalar(ScalarSymbol.B0) + FuncPoly.atom(Field.B)


class LetterKind(str, Enum):
    Q = "Q"
    QBAR = "Qbar"
    FUNC = "Func"


@dataclass(frozen=True)
class OpLetter:
    kind: LetterKind
    poly: Optional[FuncPoly] = None

    def __post_init__(self) -> None:
        if (self.kind == LetterKind.FUNC) != (self.poly is not None):
            raise ValueError("only Func letters carry a polynomial")

    def adjoint(self) -> "OpLetter":
        if self.kind == LetterKind.Q:
            return QBAR
        if self.kind == LetterKind.QBAR:
            return Q
        assert self.poly is not None
        return OpLetter(LetterKind.FUNC, self.poly.conjugate())

    @property
    def weight(self) -> int:
        return 0 if self.kind == LetterKind.FUNC else 1

    def pretty(self) -> str:
        if self.kind == LetterKind.FUNC:
            return f"[{self.poly.pretty() if self.poly is not None else ''}]"
        return "Q" if self.kind == LetterKind.Q else "Q̄"


Q = OpLetter(LetterKind.Q)
QBAR = OpLetter(LetterKind.QBAR)


def Func(poly: "FuncPoly | Number") -> OpLetter:
    return OpLetter(LetterKind.FUNC, FuncPoly.coerce(poly))


def _canonical_letters(
    letters: Iterable[OpLetter], prefactor: FuncPoly
) -> Tuple[Tuple[OpLetter, ...], FuncPoly]:
    """Merge adjacent Func letters and pull field-free ones into the prefactor."""
    out: List[OpLetter] = []
    for letter in letters:
        if letter.kind != LetterKind.FUNC:
            out.append(letter)
            continue
        assert letter.poly is not None
        if out and out[-1].kind == LetterKind.FUNC:
            previous = out.pop()
            assert previous.poly is not None
            letter = OpLetter(LetterKind.FUNC, previous.poly * letter.poly)
            assert letter.poly is not None
        if letter.poly.is_field_free:
            prefactor = prefactor * letter.poly
        else:
            out.append(letter)
    return tuple(out), prefactor


@dataclass(frozen=True)
class OpWord:
    """Ordered product of letters with a commuting, field-free prefactor."""

    letters: Tuple[OpLetter, ...]
    prefactor: FuncPoly = FuncPoly.one()

    def __post_init__(self) -> None:
        if not self.prefactor.is_field_free:
            raise ValueError("word prefactors must not contain fields")

    @classmethod
    def of(cls, *letters: OpLetter, prefactor: "FuncPoly | Number" = 1) -> "OpWord":
        merged, pre = _canonical_letters(letters, FuncPoly.coerce(prefactor))
        return cls(merged, pre)

    @property
    def weight(self) -> int:
        return sum(letter.weight for letter in self.letters)

    @property
    def is_normal(self) -> bool:
        return _first_redex(self.letters) is None

    def adjoint(self) -> "OpWord":
        return OpWord.of(
            *(letter.adjoint() for letter in reversed(self.letters)),
            prefactor=self.prefactor.conjugate(),
        )

    def pretty(self) -> str:
        body = "·".join(letter.pretty() for letter in self.letters) or "1"
        return f"({self.prefactor.pretty()})·{body}"


class OpExpr:
    """Formal sum of words, with ``+`` and concatenation ``*``."""

    __slots__ = ("words",)

    def __init__(self, words: Iterable[OpWord] = ()):
        collected: Dict[Tuple[OpLetter, ...], FuncPoly] = {}
        for word in words:
            collected[word.letters] = collected.get(word.letters, FuncPoly.zero()) + word.prefactor
        self.words: Tuple[OpWord, ...] = tuple(
            OpWord(letters, pre) for letters, pre in collected.items() if pre
        )

    @classmethod
    def word(cls, *letters: OpLetter, prefactor: "FuncPoly | Number" = 1) -> "OpExpr":
        return cls([OpWord.of(*letters, prefactor=prefactor)])

    @classmethod
    def q(cls) -> "OpExpr":
        return cls.word(Q)

    @classmethod
    def qbar(cls) -> "OpExpr":
        return cls.word(QBAR)

    @classmethod
    def func(cls, poly: "FuncPoly | Number") -> "OpExpr":
        return cls.word(Func(poly))

    @staticmethod
    def coerce(value: "OpExpr | FuncPoly | Number") -> "OpExpr":
        if isinstance(value, OpExpr):
            return value
        return OpExpr.func(value)

    def __add__(self, other: "OpExpr | FuncPoly | Number") -> "OpExpr":
        return OpExpr(self.words + OpExpr.coerce(other).words)

    __radd__ = __add__

    def __neg__(self) -> "OpExpr":
        return self * -1

    def __sub__(self, other: "OpExpr | FuncPoly | Number") -> "OpExpr":
        return self + (-OpExpr.coerce(other))

    def __rsub__(self, other: "OpExpr | FuncPoly | Number") -> "OpExpr":
        return OpExpr.coerce(other) - self

    def __mul__(self, other: "OpExpr | FuncPoly | Number") -> "OpExpr":
        other = OpExpr.coerce(other)
        return OpExpr(
            OpWord.of(*(w1.letters + w2.letters), prefactor=w1.prefactor * w2.prefactor)
            for w1 in self.words
            for w2 in other.words
        )

    def __rmul__(self, other: "FuncPoly | Number") -> "OpExpr":
        return OpExpr.coerce(other) * self

    def __pow__(self, exponent: int) -> "OpExpr":
        result = OpExpr.func(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        """Equality as operators, i.e. of normal forms."""
        if not isinstance(other, OpExpr):
            return NotImplemented
        return _normal_form(self) == _normal_form(other)

    __hash__ = None  # type: ignore[assignment]

    @property
    def is_normal(self) -> bool:
        return all(word.is_normal for word in self.words)

    @property
    def weights(self) -> List[int]:
        return sorted({word.weight for word in self.words})

    def normal_terms(self) -> NormalForm:
        """Map ``(a, c) → g`` of a normal-form expression ``Σ Q̄^a g Q^c``."""
        if not self.is_normal:
            raise ValueError("expression is not in normal form")
        terms: NormalForm = {}
        for word in self.words:
            a = sum(1 for letter in word.letters if letter.kind == LetterKind.QBAR)
            c = sum(1 for letter in word.letters if letter.kind == LetterKind.Q)
            g = word.prefactor
            for letter in word.letters:
                if letter.kind == LetterKind.FUNC:
                    assert letter.poly is not None
                    g = g * letter.poly
            _accumulate(terms, (a, c), g)
        return terms

    def pretty(self) -> str:
        return " + ".join(word.pretty() for word in self.words) or "0"

    def __repr__(self) -> str:
        return f"OpExpr({self.pretty()})"


def _accumulate(target: NormalForm, key: Tuple[int, int], value: FuncPoly) -> None:
    total = target.get(key, FuncPoly.zero()) + value
    if total:
        target[key] = total
    else:
        target.pop(key, None)


def _merge_into(target: NormalForm, source: NormalForm) -> None:
    for key, value in source.items():
        _accumulate(target, key, value)


def _from_normal_form(terms: NormalForm) -> OpExpr:
    words = []
    for (a, c), g in sorted(terms.items()):
        letters = (QBAR,) * a + (Func(g),) + (Q,) * c
        words.append(OpWord.of(*letters))
    return OpExpr(words)


# -- fast left multiplication on normal forms -------------------------------


def _push_qbar(terms: NormalForm) -> NormalForm:
    return {(a + 1, c): g for (a, c), g in terms.items()}


@lru_cache(maxsize=65536)
def _func_times(f: FuncPoly, a: int, g: FuncPoly, c: int) -> Tuple[Tuple[Tuple[int, int], FuncPoly], ...]:
    """f · Q̄^a g Q^c = Σ_k C(a,k) Q̄^(a−k) ((2i∂)^k f · g) Q^c."""
    out: NormalForm = {}
    shifted = f
    for k in range(a + 1):
        _accumulate(out, (a - k, c), shifted * g * comb(a, k))
        shifted = shifted.d() * TWO_I
        if not shifted:
            break
    return tuple(out.items())


def _push_func(f: FuncPoly, terms: NormalForm) -> NormalForm:
    out: NormalForm = {}
    for (a, c), g in terms.items():
        for key, value in _func_times(f, a, g, c):
            _accumulate(out, key, value)
    return out


@lru_cache(maxsize=65536)
def _q_times(a: int, g: FuncPoly, c: int) -> Tuple[Tuple[Tuple[int, int], FuncPoly], ...]:
    """Q · Q̄^a g Q^c, using Q·Q̄^a = Q̄·(Q·Q̄^(a−1)) + 2B·Q̄^(a−1)."""
    if a == 0:
        out: NormalForm = {(0, c + 1): g}
        _accumulate(out, (0, c), g.dbar() * MINUS_TWO_I)
        return tuple(out.items())
    out = _push_qbar(dict(_q_times(a - 1, g, c)))
    _merge_into(out, _push_func(total_field() * 2, {(a - 1, c): g}))
    return tuple(out.items())


def _push_q(terms: NormalForm) -> NormalForm:
    out: NormalForm = {}
    for (a, c), g in terms.items():
        for key, value in _q_times(a, g, c):
            _accumulate(out, key, value)
    return out


def _push_letter(letter: OpLetter, terms: NormalForm) -> NormalForm:
    if letter.kind == LetterKind.QBAR:
        return _push_qbar(terms)
    if letter.kind == LetterKind.Q:
        return _push_q(terms)
    assert letter.poly is not None
    return _push_func(letter.poly, terms)


def _word_normal_form(word: OpWord, vacuum_only: bool = False) -> NormalForm:
    terms: NormalForm = {(0, 0): word.prefactor}
    remaining_q = sum(1 for letter in word.letters if letter.kind == LetterKind.Q)
    remaining_funcs = sum(1 for letter in word.letters if letter.kind == LetterKind.FUNC)
    for letter in reversed(word.letters):
        terms = _push_letter(letter, terms)
        if letter.kind == LetterKind.Q:
            remaining_q -= 1
        elif letter.kind == LetterKind.FUNC:
            remaining_funcs -= 1
        if vacuum_only:
            # c never decreases. a can drop by any amount through a Q (which
            # brings in derivatives of b) or a Func, but never otherwise.
            terms = {
                (a, c): g
                for (a, c), g in terms.items()
                if c == 0 and (a == 0 or remaining_q > 0 or remaining_funcs > 0)
            }
        if not terms:
            break
    return terms


def _normal_form(expr: OpExpr) -> NormalForm:
    terms: NormalForm = {}
    for word in expr.words:
        _merge_into(terms, _word_normal_form(word))
    return terms


# -- literal rewriting ------------------------------------------------------


def _first_redex(letters: Tuple[OpLetter, ...]) -> Optional[int]:
    redexes = _redexes(letters)
    return redexes[0] if redexes else None


def _redexes(letters: Tuple[OpLetter, ...]) -> List[int]:
    found = []
    for i in range(len(letters) - 1):
        left, right = letters[i].kind, letters[i + 1].kind
        if (left, right) in _REDEX_PAIRS:
            found.append(i)
    return found


_REDEX_PAIRS = {
    (LetterKind.Q, LetterKind.FUNC),
    (LetterKind.FUNC, LetterKind.QBAR),
    (LetterKind.Q, LetterKind.QBAR),
}


def _rewrite(word: OpWord, i: int) -> List[OpWord]:
    """Apply the single commutation rule at letters i, i+1."""
    head, (left, right), tail = word.letters[:i], word.letters[i : i + 2], word.letters[i + 2 :]
    pre = word.prefactor
    if left.kind == LetterKind.Q and right.kind == LetterKind.FUNC:
        assert right.poly is not None
        swapped, extra = (right, left), Func(right.poly.dbar() * MINUS_TWO_I)
    elif left.kind == LetterKind.FUNC and right.kind == LetterKind.QBAR:
        assert left.poly is not None
        swapped, extra = (right, left), Func(left.poly.d() * TWO_I)
    else:
        swapped, extra = (QBAR, Q), Func(total_field() * 2)
    words = [OpWord.of(*(head + swapped + tail), prefactor=pre)]
    assert extra.poly is not None
    if extra.poly:
        words.append(OpWord.of(*(head + (extra,) + tail), prefactor=pre))
    return words


def _rewrite_randomly(expr: OpExpr, rng: random.Random) -> OpExpr:
    pending = list(expr.words)
    done: List[OpWord] = []
    steps = 0
    while pending:
        index = rng.randrange(len(pending))
        word = pending.pop(index)
        redexes = _redexes(word.letters)
        if not redexes:
            done.append(word)
            continue
        pending.extend(_rewrite(word, rng.choice(redexes)))
        steps += 1
    logger.debug("literal rewriting finished", steps=steps, words=len(done))
    return OpExpr(done)


# -- public operations -------------------------------------------------------


def normal_order(expr: OpExpr, rng: Optional[random.Random] = None) -> OpExpr:
    """Canonical normal form ``Σ Q̄^a · g · Q^c``.

    Without ``rng`` a deterministic left-multiplication algorithm is used.
    With ``rng`` single rewrite rules are applied at randomly chosen
    positions until no redex is left; the result is canonicalized to the
    same representation, so both strategies can be compared directly.
    """
    if rng is not None:
        literal = _rewrite_randomly(expr, rng)
        return _from_normal_form(literal.normal_terms())
    return _from_normal_form(_normal_form(expr))


def vacuum_form(expr: OpExpr) -> FuncPoly:
    """The ``(a, c) = (0, 0)`` coefficient of the normal form."""
    result = FuncPoly.zero()
    for word in expr.words:
        result = result + _word_normal_form(word, vacuum_only=True).get((0, 0), FuncPoly.zero())
    logger.debug("vacuum form computed", words=len(expr.words), monomials=len(result))
    return result


def adjoint(expr: OpExpr) -> OpExpr:
    """Formal adjoint: reverse the word, swap Q and Q̄, conjugate functions."""
    return OpExpr(word.adjoint() for word in expr.words)


def normal_terms(expr: OpExpr) -> NormalForm:
    """Normal-form coefficients ``(a, c) → g`` of any expression."""
    return dict(_normal_form(expr))


def sandwich(q: int, middle: "OpExpr | FuncPoly | Number") -> OpExpr:
    """``Q^q · middle · Q̄^q``."""
    return OpExpr.q() ** q * OpExpr.coerce(middle) * OpExpr.qbar() ** q
