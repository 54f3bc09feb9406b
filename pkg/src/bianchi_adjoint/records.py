"""Eigenform data ingestion and run configuration.

The single ingestion format is JSON with exact-string numerics:

    {
      "disc_K": -4,
      "level_label": "1",
      "weight": 2,
      "p": 5,
      "lambda_p": "29/2",
      "lambda_pbar": "-3",
      "euler_data": [
        {"ideal_norm": 9, "ideal_label": "3", "a_q": "5"},
        {"ideal_norm": 2, "ideal_label": "2a", "a_q": "-1/2"}
      ]
    }

Rationals are serialized "a/b" (or "a"); truncated p-adics "p^v * u mod p^M".
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .adjoint import EulerData, _is_prime_power
from .padic import (PrimeContext, QuadRootPair, hecke_poly_rootdata,
                    is_prime, kronecker_split, parse_rational, format_rational)


class RecordError(ValueError):
    """Schema or domain failure, carrying a field-level diagnostic."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"field '{field_name}': {message}")
        self.field_name = field_name


@dataclass
class EigenformRecord:
    disc_K: int
    level_label: str
    weight: int
    p: int
    lambda_p: Fraction
    lambda_pbar: Fraction
    euler_table: list[EulerData] = field(default_factory=list)

    # derived
    context: PrimeContext = None
    rootdata_p: QuadRootPair = None
    rootdata_pbar: QuadRootPair = None

    def __post_init__(self):
        try:
            self.context = PrimeContext(self.p, self.disc_K)
        except ValueError as e:
            raise RecordError("p/disc_K", str(e))
        if self.weight < 1:
            raise RecordError("weight", "parallel weight must be >= 1 (weight 0 is excluded)")
        self.rootdata_p = hecke_poly_rootdata(self.lambda_p, self.p, self.weight)
        self.rootdata_pbar = hecke_poly_rootdata(self.lambda_pbar, self.p, self.weight)

    @property
    def eigenvalues_nonzero(self) -> bool:
        return self.lambda_p != 0 and self.lambda_pbar != 0

    @property
    def ramanujan_flags(self) -> tuple[bool, bool]:
        """Irreducibility over R of the two Hecke polynomials at p."""
        return (self.rootdata_p.irreducible_over_R, self.rootdata_pbar.irreducible_over_R)

    def to_json(self) -> dict:
        return {
            "disc_K": self.disc_K,
            "level_label": self.level_label,
            "weight": self.weight,
            "p": self.p,
            "lambda_p": format_rational(self.lambda_p),
            "lambda_pbar": format_rational(self.lambda_pbar),
            "euler_data": [
                {"ideal_norm": ed.q, "ideal_label": ed.label, "a_q": format_rational(ed.a)}
                for ed in self.euler_table
            ],
        }


def parse_eigenform(source) -> EigenformRecord:
    """Parse and validate a record from a path, JSON string, or dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = source
        try:
            if "\n" not in str(source) and not str(source).lstrip().startswith("{"):
                with open(source) as fh:
                    text = fh.read()
        except OSError as e:
            raise RecordError("input", f"cannot read {source}: {e}")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise RecordError("input", f"invalid JSON at line {e.lineno}: {e.msg}")
    for key in ("disc_K", "weight", "p", "lambda_p", "lambda_pbar"):
        if key not in data:
            raise RecordError(key, "missing")
    try:
        lam = parse_rational(data["lambda_p"])
        lamb = parse_rational(data["lambda_pbar"])
    except (ValueError, TypeError) as e:
        raise RecordError("lambda", str(e))
    weight = data["weight"]
    if not isinstance(weight, int):
        raise RecordError("weight", "must be an integer")
    table = []
    labels = set()
    for row in data.get("euler_data", []):
        for key in ("ideal_norm", "ideal_label", "a_q"):
            if key not in row:
                raise RecordError(f"euler_data.{key}", "missing")
        label = str(row["ideal_label"])
        if label in labels:
            raise RecordError("euler_data.ideal_label", f"duplicate label {label!r}")
        labels.add(label)
        q = row["ideal_norm"]
        if not isinstance(q, int) or not _is_prime_power(q):
            raise RecordError("euler_data.ideal_norm", f"{q} is not a prime power")
        table.append(EulerData(label, q, parse_rational(row["a_q"]), weight))
    return EigenformRecord(
        disc_K=data["disc_K"],
        level_label=str(data.get("level_label", "1")),
        weight=weight,
        p=data["p"],
        lambda_p=lam,
        lambda_pbar=lamb,
        euler_table=table,
    )


@dataclass
class RunConfig:
    truncation: int = 8          # distribution truncation per variable
    amice_truncation: int = 16
    precision: int = 30          # p-adic digits
    euler_bound: int = 100
    verify_primes: tuple[int, ...] = (3, 5)
    verify_weights: tuple[int, ...] = (1, 2)   # one per parity
    slope_margin: int = 2
    out_path: str | None = None

    def __post_init__(self):
        for name in ("truncation", "amice_truncation", "precision", "euler_bound", "slope_margin"):
            if getattr(self, name) < 0 or (name != "slope_margin" and getattr(self, name) == 0):
                raise ValueError(f"{name} must be positive")
        for p in self.verify_primes:
            if p < 3 or not is_prime(p):
                raise ValueError(f"verification prime {p} must be an odd prime")
