"""Exact computations for one-parameter toric exponential sum families.

Problems are given as dicts (the same schema as the command line problem
files), JSON strings, or paths to JSON files. Values in Q(zeta_p) come back as
``Fraction`` when rational and otherwise as a tuple of ``Fraction`` giving the
coordinates on 1, zeta_p, ..., zeta_p^(p-2).
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from pathlib import Path
from typing import Any, NamedTuple, Sequence, Union

from . import _core
from ._core import Error

__version__ = _core.__version__

__all__ = [
    "Error",
    "Result",
    "run",
    "analyze",
    "check",
    "basis",
    "fiber",
    "global_L",
    "cache_gc",
    "op_char_poly",
    "ord_p",
    "exp_sum",
]

ProblemLike = Union[dict, str, os.PathLike]
Value = Union[int, Fraction, Sequence[Union[int, Fraction, str]]]


class Result(NamedTuple):
    report: dict
    exit_code: int

    @property
    def ok(self) -> bool:
        return self.exit_code == 0


def _problem_json(problem: ProblemLike) -> str:
    if isinstance(problem, dict):
        return json.dumps(problem)
    if isinstance(problem, os.PathLike) or (isinstance(problem, str) and not problem.lstrip().startswith("{")):
        return Path(problem).read_text()
    return problem


def _value(text: Sequence[str]) -> Union[Fraction, tuple]:
    coords = tuple(Fraction(c) for c in text)
    if all(c == 0 for c in coords[1:]):
        return coords[0] if coords else Fraction(0)
    return coords


def _powers(x: Value) -> list[str]:
    if isinstance(x, (int, Fraction, str)):
        return [str(Fraction(x))]
    return [str(Fraction(c)) for c in x]


def run(command: str, problem: ProblemLike, **options: Any) -> Result:
    """Runs analyze, check, basis, fiber or global.

    Options mirror the command line flags: ceiling, k_max, lambda, max_degree,
    op, d_max, domain, cache_dir, threads, timing.
    """
    if "lambda_" in options:
        options["lambda"] = options.pop("lambda_")
    if "lambda" in options:
        options["lambda"] = str(options["lambda"]) if not isinstance(options["lambda"], (list, tuple)) else ",".join(
            str(c) for c in options["lambda"]
        )
    report, code = _core.run(command, _problem_json(problem), json.dumps(options))
    return Result(json.loads(report), code)


def analyze(problem: ProblemLike, **options: Any) -> Result:
    return run("analyze", problem, **options)


def check(problem: ProblemLike, **options: Any) -> Result:
    return run("check", problem, **options)


def basis(problem: ProblemLike, **options: Any) -> Result:
    return run("basis", problem, **options)


def fiber(problem: ProblemLike, **options: Any) -> Result:
    return run("fiber", problem, **options)


def global_L(problem: ProblemLike, **options: Any) -> Result:
    return run("global", problem, **options)


def cache_gc(cache_dir: Union[str, os.PathLike, None] = None, purge: bool = False) -> dict:
    return json.loads(_core.cache_gc(str(cache_dir) if cache_dir else "", purge))


def op_char_poly(coeffs: Sequence[Value], op: str, p: int = 2) -> list:
    """Characteristic polynomial of a linear algebra operation applied to the
    reciprocal polynomial with the given coefficients (constant term first).

    Rational inputs may use any prime ``p``; it only fixes the cyclotomic field.
    """
    return [_value(c) for c in _core.op_char_poly(p, [_powers(c) for c in coeffs], op)]


def ord_p(x: Value, p: int) -> Union[Fraction, None]:
    """p-adic valuation normalised by ord_p(p) = 1; None for zero.

    A sequence is read as coefficients of 1, zeta_p, zeta_p^2, ...
    """
    v = _core.ord_p(p, _powers(x))
    return None if v is None else Fraction(v)


def exp_sum(problem: ProblemLike, lam: Union[int, Sequence[int]], r: int = 1, threads: int = 0, ceiling: int | None = None):
    """Character sum of the fiber at lambda over the degree-r extension.

    ``lam`` is an integer (prime base field) or the coordinate list of an
    element of the base field; 0 selects the zero fiber.
    """
    coords = [lam] if isinstance(lam, int) else list(lam)
    return _value(_core.exp_sum(_problem_json(problem), coords, r, threads, ceiling))
