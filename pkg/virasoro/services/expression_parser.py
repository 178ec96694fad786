"""
Parser for the text form of U(Vir_-) elements and tensor states.

    elem   := term (('+' | '-') term)*          (a leading sign is allowed)
    term   := coeff ('*' factor)* | factor ('*' factor)*
    factor := 'd(' '-' int ')' ['^' int]
    coeff  := int | int '/' int

A tensor state is a sum of ``term '@v(' int ')'`` pieces, e.g.
``1@v(3) - 1/2*d(-2)@v(2)``. Factors inside a term are multiplied in the
order written and put into PBW normal form.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import NamedTuple

from virasoro.errors import ExpressionSyntaxError
from virasoro.services.enveloping import EnvElem, left_multiply


_TOKEN_PATTERN = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+)|(?P<d>d\()|(?P<v>v\()|(?P<op>[-+*/^()@])|(?P<bad>.)"
)


class Token(NamedTuple):
    kind: str
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    for match in _TOKEN_PATTERN.finditer(text):
        kind = match.lastgroup
        if kind == "ws":
            continue
        if kind == "bad":
            raise ExpressionSyntaxError("unrecognized character", match.group(0), match.start())
        tokens.append(Token(kind, match.group(0), match.start()))
    tokens.append(Token("end", "<end>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def fail(self, message: str):
        token = self.current
        raise ExpressionSyntaxError(message, token.text, token.position)

    def accept(self, text: str) -> bool:
        if self.current.kind in ("op", "d", "v") and self.current.text == text:
            self.index += 1
            return True
        return False

    def expect(self, text: str, message: str) -> None:
        if not self.accept(text):
            self.fail(message)

    def integer(self) -> int:
        if self.current.kind != "num":
            self.fail("expected an integer")
        return int(self.advance().text)

    # -- grammar --------------------------------------------------------------

    def sum_of_terms(self, with_state: bool) -> list[tuple[EnvElem, int | None]]:
        pieces = []
        sign = -1 if self.accept("-") else 1
        if sign == 1:
            self.accept("+")
        while True:
            term = self.term().scale(sign)
            state = None
            if with_state:
                self.expect("@", "expected '@v(j)' after term")
                self.expect("v(", "expected 'v(' after '@'")
                negative = self.accept("-")
                state = self.integer() * (-1 if negative else 1)
                self.expect(")", "expected ')' closing v(")
            pieces.append((term, state))
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                break
        if self.current.kind != "end":
            self.fail("expected '+', '-' or end of input")
        return pieces

    def term(self) -> EnvElem:
        coeff = Fraction(1)
        factors: list[int] = []
        if self.current.kind == "num":
            numerator = self.integer()
            if self.accept("/"):
                token = self.current
                denominator = self.integer()
                if denominator == 0:
                    raise ExpressionSyntaxError("zero denominator", token.text, token.position)
                coeff = Fraction(numerator, denominator)
            else:
                coeff = Fraction(numerator)
            if not self.accept("*"):
                return EnvElem.one().scale(coeff)
        factors.extend(self.factor())
        while self.accept("*"):
            factors.extend(self.factor())
        value = EnvElem.one()
        for k in reversed(factors):
            value = left_multiply(k, value)
        return value.scale(coeff)

    def factor(self) -> list[int]:
        self.expect("d(", "expected 'd(' to start a generator")
        self.expect("-", "generators are written d(-k)")
        token = self.current
        k = self.integer()
        if k < 1:
            raise ExpressionSyntaxError("generator index must be positive", token.text, token.position)
        self.expect(")", "expected ')' closing d(")
        power = 1
        if self.accept("^"):
            power = self.integer()
        return [k] * power


def parse_elem(text: str) -> EnvElem:
    """Parse an element of U(Vir_-) into PBW normal form."""
    total = EnvElem.zero()
    for term, _ in _Parser(text).sum_of_terms(with_state=False):
        total = total + term
    return total


def parse_tensor_state(text: str) -> list[tuple[EnvElem, int]]:
    """Parse ``term@v(j)`` sums into (U(Vir_-) element, j) pairs."""
    pieces = _Parser(text).sum_of_terms(with_state=True)
    return [(term, state) for term, state in pieces]
