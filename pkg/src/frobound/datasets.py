"""Built-in named polynomials, angle sets and zeta data.

The data live in ``data/builtin.json`` inside the package so that the
reproduction report never depends on files in the working directory.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .cosine_poly import CosinePoly
from .errors import DomainError
from .theta_sets import ThetaSet
from .zeta import WeilPoly


@lru_cache(maxsize=1)
def _raw() -> dict:
    text = resources.files(__package__).joinpath("data/builtin.json").read_text(encoding="utf-8")
    return json.loads(text)


def names(kind: str) -> list[str]:
    return sorted(_raw()[kind])


def _entry(kind: str, name: str) -> dict:
    table = _raw()[kind]
    if name not in table:
        raise DomainError(f"unknown built-in {kind[:-1] if kind.endswith('s') else kind} {name!r}; known: {', '.join(sorted(table))}")
    return table[name]


def polynomial(name: str) -> CosinePoly:
    return CosinePoly.from_json(_entry("polynomials", name))


def theta(name: str) -> ThetaSet:
    return ThetaSet.from_json(_entry("theta", name))


def curve(name: str) -> WeilPoly:
    return WeilPoly.from_json(_entry("curves", name))
