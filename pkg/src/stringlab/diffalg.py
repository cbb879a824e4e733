"""Graded differential polynomial rings with exact cyclotomic coefficients.

A DiffPoly is a sparse multivariate polynomial over a declared generator
alphabet (jet variables U^(s), V^(s), times t_a, phase variables Q_a/P_a, or
plain symbols).  Coefficients live in Q(zeta_12) and are stored as four
integer component dictionaries (one per power-basis coordinate) over a common
positive denominator; monomials are packed into single integers, 16 bits per
generator, so monomial multiplication is integer addition.

The module provides the ring operations, the total x-derivative `dx`, formal
partials, substitution homomorphisms, the weight grading `rho`, and bounded
enumeration of weight-homogeneous monomial spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .scalars import Cyclo

_B = 16            # bits per exponent slot
_MASK = (1 << _B) - 1


@dataclass(frozen=True)
class Generator:
    """One ring generator: a jet u_b^{(s)}, a time t_a, or a plain symbol."""
    name: str
    kind: str            # 'jet' | 'time' | 'phase' | 'symbol'
    field: int = 0       # jet: the index b (2 <= b <= q)
    order: int = 0       # jet: derivative order s
    tindex: int = 0      # time: the index a


def _jet_name(base: str, s: int) -> str:
    if s == 0:
        return base
    if s <= 3:
        return base + "'" * s
    return f"{base}^({s})"


class Alphabet:
    """Ordered generator set; owns monomial packing and derivative rules."""

    def __init__(self, generators: list[Generator]):
        self.gens = tuple(generators)
        self.index = {g.name: i for i, g in enumerate(self.gens)}
        if len(self.index) != len(self.gens):
            raise ValueError("duplicate generator names")
        self.n = len(self.gens)
        # dx action per generator: ('jet', successor index) | ('one',) | ('zero',)
        rules = []
        for g in self.gens:
            if g.kind == "jet":
                base = g.name.split("'")[0].split("^")[0]
                succ = _jet_name(base, g.order + 1)
                rules.append(("jet", self.index.get(succ)))
            elif g.kind == "time" and g.tindex == 1:
                rules.append(("one", None))
            else:
                rules.append(("zero", None))
        self._dx_rules = tuple(rules)

    # -- constructors of the standard alphabets ------------------------------

    @staticmethod
    def jet(q: int = 3, p: int = 4, max_order: int = 18,
            fields: str = "UV", drop_times=None) -> "Alphabet":
        """Jet alphabet for a (q,p) string equation: times then u_b^{(s)}.

        Times t_a for 1 <= a <= p+q-1 with a mod q != 0, plus t_1.  For
        (3,4) the fields u_2, u_3 are named U, V, and t_4 is dropped by
        default (it is removed by a translation of V).
        """
        if drop_times is None:
            drop_times = (4,) if (q, p) == (3, 4) else ()
        gens = [Generator(f"t{a}", "time", tindex=a)
                for a in range(1, p + q)
                if (a == 1 or a % q != 0) and a not in drop_times]
        for b in range(2, q + 1):
            base = fields[b - 2] if b - 2 < len(fields) else f"u{b}"
            for s in range(max_order + 1):
                gens.append(Generator(_jet_name(base, s), "jet", field=b, order=s))
        return Alphabet(gens)

    @staticmethod
    def phase34() -> "Alphabet":
        gens = [Generator("t1", "time", tindex=1),
                Generator("t2", "time", tindex=2),
                Generator("t5", "time", tindex=5)]
        gens += [Generator(nm, "phase") for nm in
                 ("QU", "QV", "QW", "PU", "PV", "PW")]
        return Alphabet(gens)

    @staticmethod
    def symbols(names) -> "Alphabet":
        return Alphabet([Generator(nm, "symbol") for nm in names])

    def extended(self, names) -> "Alphabet":
        """This alphabet plus extra plain symbols (appended)."""
        return Alphabet(list(self.gens) + [Generator(nm, "symbol") for nm in names])

    # -- monomial packing -----------------------------------------------------

    def pack(self, exps: dict[str, int]) -> int:
        key = 0
        for nm, e in exps.items():
            if e:
                if not 0 <= e <= _MASK:
                    raise OverflowError(f"exponent {e} out of range")
                key |= e << (_B * self.index[nm])
        return key

    def unpack(self, key: int) -> dict[str, int]:
        out = {}
        i = 0
        while key:
            e = key & _MASK
            if e:
                out[self.gens[i].name] = e
            key >>= _B
            i += 1
        return out

    def degree(self, key: int) -> int:
        d = 0
        while key:
            d += key & _MASK
            key >>= _B
        return d

    # -- polynomial constructors ---------------------------------------------

    def zero(self) -> "DiffPoly":
        return DiffPoly(self, ({}, {}, {}, {}), 1)

    def scalar(self, c) -> "DiffPoly":
        return self.zero().__class__.from_terms(self, {(): c})

    def one(self) -> "DiffPoly":
        return self.scalar(1)

    def gen(self, name: str) -> "DiffPoly":
        if name not in self.index:
            raise KeyError(f"unknown generator {name!r}")
        return DiffPoly.from_terms(self, {((name, 1),): 1})

    def poly(self, terms: dict) -> "DiffPoly":
        """Build from {((gen, exp), ...): coeff} or {gen-name: coeff} pairs."""
        norm = {}
        for mono, c in terms.items():
            if isinstance(mono, str):
                mono = ((mono, 1),)
            norm[tuple(mono)] = c
        return DiffPoly.from_terms(self, norm)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.gens == other.gens

    def __hash__(self):
        return hash(self.gens)

    def __repr__(self):
        return f"Alphabet({[g.name for g in self.gens]})"


def _coeff_to_components(c):
    """Split a scalar into (int4 components, denominator)."""
    if isinstance(c, Cyclo):
        c12 = c.to_conductor(12) if c.n != 12 else c
        den = 1
        for f in c12.coords:
            den = den * f.denominator // gcd(den, f.denominator)
        return [int(f * den) for f in c12.coords], den
    f = Fraction(c)
    return [f.numerator, 0, 0, 0], f.denominator


class DiffPoly:
    """Sparse polynomial over Q(zeta_12); see module docstring for layout."""

    __slots__ = ("alphabet", "comps", "den")

    def __init__(self, alphabet: Alphabet, comps, den: int):
        self.alphabet = alphabet
        self.comps = comps      # tuple of 4 dicts {packed-monomial: int}
        self.den = den          # positive int

    # -- construction ----------------------------------------------------------

    @staticmethod
    def from_terms(alphabet: Alphabet, terms: dict) -> "DiffPoly":
        comps = ({}, {}, {}, {})
        den = 1
        items = []
        for mono, c in terms.items():
            vec, d = _coeff_to_components(c)
            items.append((alphabet.pack(dict(mono)), vec, d))
            den = den * d // gcd(den, d)
        for key, vec, d in items:
            scale = den // d
            for i in range(4):
                if vec[i]:
                    comps[i][key] = comps[i].get(key, 0) + vec[i] * scale
        return DiffPoly(alphabet, comps, den)._normalized()

    def _normalized(self) -> "DiffPoly":
        comps = tuple({k: v for k, v in comp.items() if v} for comp in self.comps)
        g = self.den
        for comp in comps:
            for v in comp.values():
                g = gcd(g, v)
                if g == 1:
                    break
            if g == 1:
                break
        if g > 1:
            comps = tuple({k: v // g for k, v in comp.items()} for comp in comps)
            return DiffPoly(self.alphabet, comps, self.den // g)
        return DiffPoly(self.alphabet, comps, self.den)

    # -- basic queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.comps)

    def monomials(self):
        keys = set()
        for comp in self.comps:
            keys.update(comp)
        return keys

    def __len__(self):
        return len(self.monomials())

    def coeff(self, mono) -> Cyclo:
        """Coefficient of a monomial given as {name: exp} or ((name, exp), ...)."""
        if not isinstance(mono, dict):
            mono = dict(mono)
        key = self.alphabet.pack(mono)
        return Cyclo(12, [Fraction(comp.get(key, 0), self.den) for comp in self.comps])

    def constant_term(self) -> Cyclo:
        return self.coeff({})

    # -- ring operations ---------------------------------------------------------

    def _check(self, other):
        if self.alphabet != other.alphabet:
            raise ValueError("mismatched alphabets")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Cyclo)):
            other = self.alphabet.scalar(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        self._check(other)
        dl = self.den // gcd(self.den, other.den) * other.den
        sa, sb = dl // self.den, dl // other.den
        comps = []
        for ca, cb in zip(self.comps, other.comps):
            out = {k: v * sa for k, v in ca.items()} if sa != 1 else dict(ca)
            get = out.get
            for k, v in cb.items():
                out[k] = get(k, 0) + v * sb
            comps.append(out)
        return DiffPoly(self.alphabet, tuple(comps), dl)._normalized()

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly(self.alphabet,
                        tuple({k: -v for k, v in comp.items()} for comp in self.comps),
                        self.den)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Cyclo)):
            other = self.alphabet.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyclo)):
            return self.scale(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        self._check(other)
        a, b = self.comps, other.comps
        # convolution indices 0..6, then reduce modulo zeta^4 = zeta^2 - 1
        conv = [None] * 7
        for i in range(4):
            ca = a[i]
            if not ca:
                continue
            for j in range(4):
                cb = b[j]
                if not cb:
                    continue
                tgt = conv[i + j]
                if tgt is None:
                    tgt = conv[i + j] = {}
                get = tgt.get
                if len(ca) <= len(cb):
                    small, big = ca, cb
                else:
                    small, big = cb, ca
                for k1, v1 in small.items():
                    for k2, v2 in big.items():
                        k = k1 + k2
                        tgt[k] = get(k, 0) + v1 * v2
        def combine(*parts):
            acc = {}
            for sgn, part in parts:
                if part:
                    get = acc.get
                    if sgn > 0:
                        for k, v in part.items():
                            acc[k] = get(k, 0) + v
                    else:
                        for k, v in part.items():
                            acc[k] = get(k, 0) - v
            return acc
        c0 = combine((1, conv[0]), (-1, conv[4]), (-1, conv[6]))
        c1 = combine((1, conv[1]), (-1, conv[5]))
        c2 = combine((1, conv[2]), (1, conv[4]))
        c3 = combine((1, conv[3]), (1, conv[5]))
        return DiffPoly(self.alphabet, (c0, c1, c2, c3),
                        self.den * other.den)._normalized()

    __rmul__ = __mul__

    def scale(self, c) -> "DiffPoly":
        vec, d = _coeff_to_components(c)
        if vec[1] == vec[2] == vec[3] == 0:
            m = vec[0]
            if m == 0:
                return self.alphabet.zero()
            comps = tuple({k: v * m for k, v in comp.items()} for comp in self.comps)
            return DiffPoly(self.alphabet, comps, self.den * d)._normalized()
        return self * self.alphabet.scalar(c)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = self.alphabet.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Cyclo)):
            other = self.alphabet.scalar(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return (self.alphabet == other.alphabet and self.den == other.den
                and self.comps == other.comps)

    def __hash__(self):
        return hash((self.den, tuple(tuple(sorted(c.items())) for c in self.comps)))

    # -- calculus -----------------------------------------------------------------

    def dx(self) -> "DiffPoly":
        """Total x-derivative: u^{(s)} -> u^{(s+1)}, t1 -> 1, other times -> 0."""
        alph = self.alphabet
        rules = alph._dx_rules
        out = alph.zero()
        terms = {}
        for ci, comp in enumerate(self.comps):
            for key, v in comp.items():
                k = key
                i = 0
                while k:
                    e = k & _MASK
                    if e:
                        kind, succ = rules[i]
                        if kind == "jet":
                            if succ is None:
                                raise OverflowError(
                                    f"jet alphabet too short to differentiate "
                                    f"{alph.gens[i].name}")
                            nk = key - (1 << (_B * i)) + (1 << (_B * succ))
                            terms.setdefault(ci, {}).setdefault(nk, 0)
                            terms[ci][nk] += e * v
                        elif kind == "one":
                            nk = key - (1 << (_B * i))
                            terms.setdefault(ci, {}).setdefault(nk, 0)
                            terms[ci][nk] += e * v
                        # 'zero': drop
                    k >>= _B
                    i += 1
        comps = tuple({k: v for k, v in terms.get(ci, {}).items() if v}
                      for ci in range(4))
        return DiffPoly(alph, comps, self.den)._normalized()

    def partial(self, name: str) -> "DiffPoly":
        """Formal partial derivative with respect to one generator."""
        gi = self.alphabet.index[name]
        shift = _B * gi
        comps = []
        for comp in self.comps:
            out = {}
            for key, v in comp.items():
                e = (key >> shift) & _MASK
                if e:
                    nk = key - (1 << shift)
                    out[nk] = out.get(nk, 0) + e * v
            comps.append({k: v for k, v in out.items() if v})
        return DiffPoly(self.alphabet, tuple(comps), self.den)._normalized()

    def substitute(self, images: dict[str, "DiffPoly"],
                   target: Alphabet | None = None) -> "DiffPoly":
        """Ring homomorphism sending each generator to its image polynomial.

        Generators not in `images` must exist in the target alphabet and map
        to themselves.  Raises KeyError when a generator present in the
        polynomial has no image and no counterpart in the target.
        """
        if target is None:
            targets = [im.alphabet for im in images.values()]
            target = targets[0] if targets else self.alphabet
        imgs = {}
        for nm, im in images.items():
            if im.alphabet != target:
                raise ValueError("substitution images must share one alphabet")
            imgs[self.alphabet.index[nm]] = im
        power_cache: dict[tuple[int, int], DiffPoly] = {}
        def gen_power(gi: int, e: int) -> DiffPoly:
            key = (gi, e)
            if key not in power_cache:
                if gi in imgs:
                    base = imgs[gi]
                else:
                    nm = self.alphabet.gens[gi].name
                    if nm not in target.index:
                        raise KeyError(f"generator {nm!r} has no image")
                    base = target.gen(nm)
                power_cache[key] = base ** e
            return power_cache[key]
        result = target.zero()
        for ci, comp in enumerate(self.comps):
            unit = Cyclo.zeta(12, ci)
            for key, v in comp.items():
                term = target.scalar(Cyclo.from_rational(Fraction(v, self.den), 12) * unit)
                k = key
                i = 0
                while k:
                    e = k & _MASK
                    if e:
                        term = term * gen_power(i, e)
                    k >>= _B
                    i += 1
                result = result + term
        return result

    def gens_in_use(self):
        used = set()
        for key in self.monomials():
            i = 0
            while key:
                if key & _MASK:
                    used.add(i)
                key >>= _B
                i += 1
        return sorted(used)

    # -- grading --------------------------------------------------------------

    def weight_of(self, weights: dict[str, int]):
        """Weight if rho-homogeneous: an int, 'any' for 0, None otherwise."""
        if self.is_zero():
            return "any"
        wvec = [weights.get(g.name) for g in self.alphabet.gens]
        found = None
        for key in self.monomials():
            w = 0
            k, i = key, 0
            while k:
                e = k & _MASK
                if e:
                    if wvec[i] is None:
                        raise KeyError(f"no weight for {self.alphabet.gens[i].name}")
                    w += e * wvec[i]
                k >>= _B
                i += 1
            if found is None:
                found = w
            elif found != w:
                return None
        return found

    # -- evaluation -------------------------------------------------------------

    def eval_complex(self, point: dict[str, complex]) -> complex:
        vals = [complex(point.get(g.name, 0)) for g in self.alphabet.gens]
        units = [1, None, None, None]
        import cmath
        z = cmath.exp(2j * cmath.pi / 12)
        units = [z ** j for j in range(4)]
        total = 0j
        for ci, comp in enumerate(self.comps):
            u = units[ci]
            for key, v in comp.items():
                m = 1.0 + 0j
                k, i = key, 0
                while k:
                    e = k & _MASK
                    if e:
                        m *= vals[i] ** e
                    k >>= _B
                    i += 1
                total += u * v * m
        return total / self.den

    def eval_exact(self, point: dict[str, "Cyclo | Fraction | int"]) -> Cyclo:
        vals = {}
        out = Cyclo.from_rational(0, 12)
        for ci, comp in enumerate(self.comps):
            unit = Cyclo.zeta(12, ci)
            for key, v in comp.items():
                m = Cyclo.from_rational(Fraction(v, self.den), 12) * unit
                k, i = key, 0
                while k:
                    e = k & _MASK
                    if e:
                        nm = self.alphabet.gens[i].name
                        if i not in vals:
                            base = point.get(nm, 0)
                            vals[i] = base if isinstance(base, Cyclo) else \
                                Cyclo.from_rational(Fraction(base), 12)
                        m = m * vals[i] ** e
                    k >>= _B
                    i += 1
                out = out + m
        return out

    # -- serialization -------------------------------------------------------------

    def terms_cyclo(self):
        """Sorted list of (exponent dict, Cyclo coefficient), canonical order."""
        keys = sorted(self.monomials(),
                      key=lambda k: (self.alphabet.degree(k), k))
        out = []
        for key in keys:
            coords = [Fraction(comp.get(key, 0), self.den) for comp in self.comps]
            out.append((self.alphabet.unpack(key), Cyclo(12, coords)))
        return out

    def text(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for mono, c in self.terms_cyclo():
            facs = []
            for nm, e in mono.items():
                facs.append(nm if e == 1 else f"{nm}^{e}")
            cs = str(c)
            if not c.is_rational():
                cs = f"({cs})"
            parts.append("*".join([cs] + facs) if facs else cs)
        return " + ".join(parts).replace("+ -", "- ")

    def json_terms(self):
        return [{"m": mono, "c": str(c)} for mono, c in self.terms_cyclo()]

    def __repr__(self):
        t = self.text()
        return t if len(t) < 120 else t[:117] + "..."


# -- weight maps ------------------------------------------------------------------


def weights_jet(q: int = 3, p: int = 4, alphabet: Alphabet | None = None,
                fields: str = "UV") -> dict[str, int]:
    """rho-weights on the jet alphabet: rho[u_b^{(s)}] = b+s, rho[t_a] = p+q-a."""
    alphabet = alphabet or Alphabet.jet(q, p)
    w = {}
    for g in alphabet.gens:
        if g.kind == "time":
            w[g.name] = p + q - g.tindex
        elif g.kind == "jet":
            w[g.name] = g.field + g.order
    return w


def weights_phase34() -> dict[str, int]:
    return {"QU": 2, "QV": 3, "QW": 3, "PU": 5, "PV": 4, "PW": 4,
            "t1": 6, "t2": 5, "t5": 2}


def enumerate_weight_space(alphabet: Alphabet, weights: dict[str, int],
                           alpha: int, exclude=None) -> list[dict[str, int]]:
    """All monomials of weight exactly alpha, as exponent dicts.

    Only generators with a declared positive weight participate; `exclude`
    is an optional predicate on Generator removing generators (used for
    derivative caps and the modulo-string-equation reduction).
    """
    gens = []
    for g in alphabet.gens:
        if g.name not in weights:
            continue
        if exclude is not None and exclude(g):
            continue
        if weights[g.name] <= 0:
            raise ValueError(f"non-positive weight for {g.name}")
        gens.append((g.name, weights[g.name]))
    out = []
    def rec(i, remaining, current):
        if remaining == 0:
            out.append(dict(current))
            return
        if i == len(gens):
            return
        nm, w = gens[i]
        e = 0
        while e * w <= remaining:
            if e:
                current[nm] = e
            rec(i + 1, remaining - e * w, current)
            e += 1
        current.pop(nm, None)
    rec(0, alpha, {})
    return out
