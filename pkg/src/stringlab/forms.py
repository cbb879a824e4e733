"""Differential 1- and 2-forms over a labeled coordinate basis.

Coefficients are DiffPoly; the basis labels are time and/or phase coordinate
names in a fixed order.  The exterior differential takes a dictionary of
derivation callables (one per label), so callers choose between explicit
partials and total flow derivatives per label.
"""

from __future__ import annotations

from .diffalg import Alphabet, DiffPoly


class OneForm:
    def __init__(self, basis: list[str], coeffs: dict[str, DiffPoly],
                 alphabet: Alphabet):
        self.basis = list(basis)
        self.alphabet = alphabet
        self.coeffs = {b: coeffs.get(b, alphabet.zero()) for b in self.basis}

    def component(self, label: str) -> DiffPoly:
        return self.coeffs[label]

    def __add__(self, other: "OneForm") -> "OneForm":
        assert self.basis == other.basis
        return OneForm(self.basis,
                       {b: self.coeffs[b] + other.coeffs[b] for b in self.basis},
                       self.alphabet)

    def __sub__(self, other: "OneForm") -> "OneForm":
        assert self.basis == other.basis
        return OneForm(self.basis,
                       {b: self.coeffs[b] - other.coeffs[b] for b in self.basis},
                       self.alphabet)

    def scale(self, c) -> "OneForm":
        return OneForm(self.basis, {b: v.scale(c) for b, v in self.coeffs.items()},
                       self.alphabet)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.coeffs.values())

    def exterior_d(self, derivations: dict) -> "TwoForm":
        """d(omega); coefficient of d a ^ d b is D_a(omega_b) - D_b(omega_a)."""
        out = {}
        for i, a in enumerate(self.basis):
            for b in self.basis[i + 1:]:
                out[(a, b)] = derivations[a](self.coeffs[b]) \
                    - derivations[b](self.coeffs[a])
        return TwoForm(self.basis, out, self.alphabet)

    def json(self):
        return {b: self.coeffs[b].text() for b in self.basis}

    def __repr__(self):
        parts = [f"({v.text()}) d{b}" for b, v in self.coeffs.items()
                 if not v.is_zero()]
        return " + ".join(parts) if parts else "0"


class TwoForm:
    def __init__(self, basis: list[str], coeffs: dict, alphabet: Alphabet):
        self.basis = list(basis)
        self.alphabet = alphabet
        self.coeffs = {}
        order = {b: i for i, b in enumerate(self.basis)}
        for (a, b), v in coeffs.items():
            if order[a] > order[b]:
                a, b, v = b, a, -v
            key = (a, b)
            self.coeffs[key] = self.coeffs.get(key, alphabet.zero()) + v

    def component(self, a: str, b: str) -> DiffPoly:
        order = {x: i for i, x in enumerate(self.basis)}
        if order[a] > order[b]:
            return -self.coeffs.get((b, a), self.alphabet.zero())
        return self.coeffs.get((a, b), self.alphabet.zero())

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.coeffs.values())

    def __add__(self, other: "TwoForm") -> "TwoForm":
        assert self.basis == other.basis
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, self.alphabet.zero()) + v
        return TwoForm(self.basis, out, self.alphabet)

    def __sub__(self, other: "TwoForm") -> "TwoForm":
        return self + other.scale(-1)

    def scale(self, c) -> "TwoForm":
        return TwoForm(self.basis, {k: v.scale(c) for k, v in self.coeffs.items()},
                       self.alphabet)

    def json(self):
        return {f"d{a}^d{b}": v.text() for (a, b), v in self.coeffs.items()
                if not v.is_zero()}

    def __repr__(self):
        parts = [f"({v.text()}) d{a}^d{b}" for (a, b), v in self.coeffs.items()
                 if not v.is_zero()]
        return " + ".join(parts) if parts else "0"
