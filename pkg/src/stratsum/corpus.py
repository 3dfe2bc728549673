"""Built-in test forms.

``primes`` lists the primes up to 31 at which the form is homogeneous of
degree >= 2, p does not divide the degree, and no singular point turns up over
F_p or F_{p^2}.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import MultiPoly, parse_poly

__all__ = ["CorpusForm", "CORPUS", "corpus_forms", "get_form"]

_ODD_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31)
_NOT_3 = (2, 5, 7, 11, 13, 17, 19, 23, 29, 31)


@dataclass(frozen=True)
class CorpusForm:
    name: str
    text: str
    nvars: int
    primes: tuple[int, ...]
    description: str

    @property
    def poly(self) -> MultiPoly:
        return parse_poly(self.text, self.nvars)

    @property
    def degree(self) -> int:
        return self.poly.degree


CORPUS: tuple[CorpusForm, ...] = (
    CorpusForm("conic", "x1^2 + x2^2", 2, _ODD_PRIMES, "diagonal conic"),
    CorpusForm("binary-cubic", "x1^3 + x2^3", 2, _NOT_3, "binary cubic"),
    CorpusForm("binary-quartic", "x1^4 + x2^4", 2, _ODD_PRIMES, "binary quartic"),
    CorpusForm("fermat-cubic", "x1^3 + x2^3 + x3^3", 3, _NOT_3, "Fermat cubic"),
    CorpusForm("diagonal-quartic", "x1^4 + x2^4 + x3^4", 3, _ODD_PRIMES, "diagonal quartic"),
    CorpusForm("cyclic-cubic", "x1^2*x2 + x2^2*x3 + x3^2*x1", 3, _NOT_3, "non-diagonal cubic"),
)


def corpus_forms(nvars: int | None = None) -> list[CorpusForm]:
    return [c for c in CORPUS if nvars is None or c.nvars == nvars]


def get_form(name: str) -> CorpusForm:
    for c in CORPUS:
        if c.name == name:
            return c
    raise KeyError(name)
