"""Pseudodifferential operator calculus and the (3,4) string equation.

Operators are truncated Laurent series in D = d/dx with jet-polynomial
coefficients.  Composition uses the generalized Leibniz rule
D^k f = sum_j C(k,j) f^(j) D^{k-j}; fractional powers of the cubic operator
are found by undetermined coefficients, order by order.

The module also owns the two string-equation polynomials, the normal-form
reduction modulo the string system (V'' and U'''' rewritten downward), and
the KP flow right-hand sides for t2 and t5.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from .diffalg import Alphabet, DiffPoly
from .scalars import Cyclo

#: shared jet alphabet for all (3,4) computations (deep enough for depth-12
#: operator algebra)
JET34 = Alphabet.jet(q=3, p=4, max_order=28)

DEFAULT_DEPTH = 12
#: depth marker for exactly-known operators (purely differential ones)
EXACT = 10 ** 9


def _gbinom(k: int, j: int) -> int:
    """Generalized binomial C(k, j) for integer k (possibly negative)."""
    if j < 0:
        return 0
    if k >= 0:
        return comb(k, j)
    num = 1
    for i in range(j):
        num *= (k - i)
    den = 1
    for i in range(1, j + 1):
        den *= i
    assert num % den == 0
    return num // den


class PsDO:
    """Truncated pseudodifferential operator sum_k c_k D^k.

    Coefficients at orders >= -depth are exact; anything lower is dropped.
    Operators with no negative orders are exact and carry depth = EXACT.
    Arithmetic tracks the reliable depth of results explicitly.
    """

    __slots__ = ("alphabet", "coeffs", "depth")

    def __init__(self, coeffs: dict[int, DiffPoly], depth: int = EXACT,
                 alphabet: Alphabet = JET34):
        self.alphabet = alphabet
        self.depth = depth
        self.coeffs = {k: c for k, c in coeffs.items()
                       if k >= -depth and not c.is_zero()}

    @staticmethod
    def zero(depth=EXACT, alphabet=JET34):
        return PsDO({}, depth, alphabet)

    @staticmethod
    def identity(depth=EXACT, alphabet=JET34):
        return PsDO({0: alphabet.one()}, depth, alphabet)

    @staticmethod
    def D(power: int = 1, depth=EXACT, alphabet=JET34):
        return PsDO({power: alphabet.one()}, depth, alphabet)

    def order(self):
        return max(self.coeffs) if self.coeffs else None

    def coeff(self, k: int) -> DiffPoly:
        return self.coeffs.get(k, self.alphabet.zero())

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Cyclo, DiffPoly)):
            other = PsDO({0: other if isinstance(other, DiffPoly)
                          else self.alphabet.scalar(other)},
                         self.depth, self.alphabet)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, self.alphabet.zero()) + c
        return PsDO(out, min(self.depth, other.depth), self.alphabet)

    __radd__ = __add__

    def __neg__(self):
        return PsDO({k: -c for k, c in self.coeffs.items()}, self.depth,
                    self.alphabet)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Cyclo, DiffPoly)):
            other = PsDO({0: other if isinstance(other, DiffPoly)
                          else self.alphabet.scalar(other)},
                         self.depth, self.alphabet)
        return self + (-other)

    def scale(self, c) -> "PsDO":
        return PsDO({k: v.scale(c) if not isinstance(c, DiffPoly) else v * c
                     for k, v in self.coeffs.items()}, self.depth, self.alphabet)

    def compose(self, other: "PsDO") -> "PsDO":
        """Operator composition (the ring product).

        The result's reliable depth is min(depth_X - ord(Y), depth_Y - ord(X))
        since truncated tails of one factor feed higher orders after
        composing with the other.  A composition of exact operators with
        negative orders (an honestly infinite series, like D^-1 f) is
        truncated at DEFAULT_DEPTH.
        """
        if self.is_zero() or other.is_zero():
            return PsDO.zero(min(self.depth, other.depth), self.alphabet)
        cutoff = min(self.depth, other.depth)
        if cutoff >= EXACT and (min(self.coeffs) < 0 or min(other.coeffs) < 0):
            cutoff = DEFAULT_DEPTH
        out: dict[int, DiffPoly] = {}
        for k, ck in self.coeffs.items():
            for l, cl in other.coeffs.items():
                f = cl
                j = 0
                while k + l - j >= -cutoff:
                    b = _gbinom(k, j)
                    if b != 0:
                        term = ck * f.scale(b) if b != 1 else ck * f
                        tgt = k + l - j
                        out[tgt] = out.get(tgt, self.alphabet.zero()) + term
                    if k >= 0 and j >= k:
                        break
                    f = f.dx()
                    j += 1
                    if f.is_zero():
                        break
        ordx, ordy = max(self.coeffs), max(other.coeffs)
        ndepth = cutoff
        if self.depth < EXACT:
            ndepth = min(ndepth, self.depth - max(ordy, 0))
        if other.depth < EXACT:
            ndepth = min(ndepth, other.depth - max(ordx, 0))
        if ndepth < 0:
            raise ValueError("depth underflow: result entirely truncated")
        return PsDO(out, min(ndepth, EXACT), self.alphabet)

    def __mul__(self, other):
        if isinstance(other, PsDO):
            return self.compose(other)
        return self.scale(other)

    __rmul__ = scale

    def commutator(self, other: "PsDO") -> "PsDO":
        return self.compose(other) - other.compose(self)

    def plus_part(self) -> "PsDO":
        return PsDO({k: c for k, c in self.coeffs.items() if k >= 0},
                    self.depth, self.alphabet)

    def minus_part(self) -> "PsDO":
        return PsDO({k: c for k, c in self.coeffs.items() if k < 0},
                    self.depth, self.alphabet)

    def truncated(self, depth: int) -> "PsDO":
        return PsDO({k: c for k, c in self.coeffs.items() if k >= -depth},
                    depth, self.alphabet)

    def power(self, n: int) -> "PsDO":
        out = PsDO.identity(self.depth, self.alphabet)
        for _ in range(n):
            out = out.compose(self)
        return out

    def __eq__(self, other):
        if not isinstance(other, PsDO):
            return NotImplemented
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeff(k) == other.coeff(k) for k in keys)

    def text(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            parts.append(f"({self.coeffs[k].text()}) * D^{k}")
        return " + ".join(parts)

    def __repr__(self):
        return self.text()


def qth_root(Q: PsDO, q: int, depth: int | None = None) -> PsDO:
    """The unique monic L = D + O(D^-1) with L^q = Q + O(D^{-depth}).

    Q must be monic of order q with vanishing D^{q-1} coefficient.
    Undetermined coefficients, one order at a time (each new correction
    enters linearly with scalar coefficient q).
    """
    if Q.order() != q or Q.coeff(q) != Q.alphabet.one():
        raise ValueError("operator must be monic of order q")
    if not Q.coeff(q - 1).is_zero():
        raise ValueError("operator must have zero subleading coefficient")
    if depth is None:
        depth = DEFAULT_DEPTH if Q.depth >= EXACT else Q.depth
    # the root needs q-1 extra orders for L^q to close at -depth
    ldepth = depth + q - 1
    L = PsDO.D(1, ldepth, Q.alphabet)
    for m in range(1, ldepth + 1):
        E = Q - L.power(q)
        if E.is_zero():
            break
        top = E.order()
        assert top is None or top <= q - 1 - m, \
            f"unexpected residual order {top} at step {m}"
        delta = E.coeff(q - 1 - m).scale(Fraction(1, q))
        if not delta.is_zero():
            L = L + PsDO({-m: delta}, ldepth, Q.alphabet)
    assert (Q - L.power(q)).truncated(depth).is_zero(), "root did not converge"
    return L


def frac_power(Q: PsDO, k: int, q: int, depth: int | None = None) -> PsDO:
    """Q^{k/q} as a truncated pseudodifferential operator."""
    return qth_root(Q, q, depth).power(k)


def frac_power_plus(Q: PsDO, k: int, q: int) -> PsDO:
    """(Q^{k/q})_+, the purely differential part."""
    return frac_power(Q, k, q).plus_part()


# -- the (3,4) operators ------------------------------------------------------


@lru_cache(maxsize=None)
def build_Q34() -> PsDO:
    """Q = D^3 - (3/2) U D - (3/4) U' + (3/2) V."""
    a = JET34
    return PsDO({3: a.one(),
                 1: a.gen("U").scale(Fraction(-3, 2)),
                 0: a.gen("U'").scale(Fraction(-3, 4))
                    + a.gen("V").scale(Fraction(3, 2))})


@lru_cache(maxsize=None)
def build_P34() -> PsDO:
    """P = (Q^{4/3})_+ + (5/3) t5 (Q^{2/3})_+."""
    Q = build_Q34()
    t5 = JET34.gen("t5")
    root = qth_root(Q, 3)
    P = root.power(4).plus_part() + root.power(2).plus_part().scale(t5).scale(Fraction(5, 3))
    return P


# -- string equation and normal form ------------------------------------------


@lru_cache(maxsize=None)
def string_equations(alph: Alphabet = JET34) -> tuple[DiffPoly, DiffPoly]:
    """The two string-equation polynomials (E_U, E_V), each to vanish.

    E_V = (1/2)V'' - (3/2)UV + (5/2)t5 V + t2
    E_U = (1/12)U'''' - (3/4)U''U - (3/8)U'^2 + (3/2)V^2 + (1/2)U^3
          - (5/12)t5(3U^2 - U'') + t1
    """
    U, V = alph.gen("U"), alph.gen("V")
    t1, t2, t5 = alph.gen("t1"), alph.gen("t2"), alph.gen("t5")
    Upp = alph.gen("U''")
    E_V = alph.gen("V''").scale(Fraction(1, 2)) - (U * V).scale(Fraction(3, 2)) \
        + (t5 * V).scale(Fraction(5, 2)) + t2
    E_U = alph.gen("U^(4)").scale(Fraction(1, 12)) \
        - (Upp * U).scale(Fraction(3, 4)) \
        - (alph.gen("U'") ** 2).scale(Fraction(3, 8)) \
        + (V * V).scale(Fraction(3, 2)) + (U ** 3).scale(Fraction(1, 2)) \
        - (t5 * (U * U * 3 - Upp)).scale(Fraction(5, 12)) + t1
    return E_U, E_V


_NF_CACHE: dict[Alphabet, dict[str, DiffPoly]] = {}


def _normal_form_rules(alph: Alphabet = JET34) -> dict[str, DiffPoly]:
    """Rewrite rules eliminating V^(s>=2) and U^(s>=4) via the string system."""
    if alph in _NF_CACHE:
        return _NF_CACHE[alph]
    E_U, E_V = string_equations(alph)
    rules: dict[str, DiffPoly] = {}
    # V'' = -2*(E_V - (1/2)V'') ; U'''' = -12*(E_U - (1/12)U'''')
    rules["V''"] = (alph.gen("V''") - E_V.scale(2))
    rules["U^(4)"] = (alph.gen("U^(4)") - E_U.scale(12))
    max_order = max(g.order for g in alph.gens if g.kind == "jet")
    for s in range(3, max_order + 1):
        src = rules[_jetname("V", s - 1)]
        rules[_jetname("V", s)] = _reduce_with(src.dx(), rules, alph)
    for s in range(5, max_order + 1):
        src = rules[_jetname("U", s - 1)]
        rules[_jetname("U", s)] = _reduce_with(src.dx(), rules, alph)
    _NF_CACHE[alph] = rules
    return rules


def _jetname(base: str, s: int) -> str:
    return base + "'" * s if s <= 3 else f"{base}^({s})"


def _reduce_with(p: DiffPoly, rules: dict[str, DiffPoly], alph: Alphabet) -> DiffPoly:
    sub = {nm: img for nm, img in rules.items()
           if nm in alph.index}
    needed = {alph.gens[i].name for i in p.gens_in_use()}
    sub = {nm: img for nm, img in sub.items() if nm in needed}
    if not sub:
        return p
    return p.substitute(sub, alph)


def reduce_mod_string(p: DiffPoly) -> DiffPoly:
    """Normal form modulo the string system: jets capped at U''' and V'."""
    rules = _normal_form_rules(p.alphabet)
    out = p
    for _ in range(64):
        nxt = _reduce_with(out, rules, p.alphabet)
        if nxt == out:
            return nxt
        out = nxt
    raise RuntimeError("normal-form reduction did not terminate")


# -- string residual and its certificate ---------------------------------------


def express_in_basis(p: DiffPoly, basis: list[DiffPoly]):
    """Exact coefficients c_i with p = sum c_i basis_i, or None.

    Gaussian elimination over Q(zeta_12) on the monomial-coefficient matrix.
    """
    monos = set(p.monomials())
    for b in basis:
        monos |= b.monomials()
    monos = sorted(monos)
    if not monos:
        return [Fraction(0)] * len(basis)
    def column(q: DiffPoly):
        return [q.coeff(q.alphabet.unpack(m)) for m in monos]
    cols = [column(b) for b in basis]
    rhs = column(p)
    nrow, ncol = len(monos), len(basis)
    mat = [[cols[j][i] for j in range(ncol)] + [rhs[i]] for i in range(nrow)]
    piv_rows = []
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, nrow) if not _iszero(mat[i][c])), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = _inv(mat[r][c])
        mat[r] = [x * inv for x in mat[r]]
        for i in range(nrow):
            if i != r and not _iszero(mat[i][c]):
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        piv_rows.append((r, c))
        r += 1
    sol = [Cyclo.from_rational(0, 12)] * ncol
    for rr, cc in piv_rows:
        sol[cc] = mat[rr][ncol] if isinstance(mat[rr][ncol], Cyclo) \
            else Cyclo.from_rational(mat[rr][ncol], 12)
    for i in range(r, nrow):
        if not _iszero(mat[i][ncol]):
            return None
    # verify (also catches free columns)
    check = p.alphabet.zero()
    for c, b in zip(sol, basis):
        check = check + b.scale(c)
    if check != p:
        return None
    return sol


def _iszero(x):
    return x.is_zero() if isinstance(x, Cyclo) else x == 0


def _inv(x):
    return x.inv() if isinstance(x, Cyclo) else Fraction(1) / x


@lru_cache(maxsize=None)
def string_residual() -> dict:
    """Coefficients of [Q,P] - 1 plus the equivalence certificate.

    The commutator has order <= 1; each coefficient is an exact rational
    combination of x-derivative images of the two string-equation
    polynomials, certifying [Q,P] = 1  <=>  string system.
    """
    Q, P = build_Q34(), build_P34()
    C = Q.commutator(P) - 1
    assert (C.order() or 0) <= 1, "commutator residual has unexpected order"
    r1, r0 = C.coeff(1), C.coeff(0)
    E_U, E_V = string_equations()
    basis = [E_U.dx(), E_V.dx(), E_V.dx().dx(), E_U, E_V,
             JET34.gen("U") * E_V, JET34.gen("V") * E_V,
             JET34.gen("U") * E_V.dx(), JET34.gen("U'") * E_V]
    names = ["dx(E_U)", "dx(E_V)", "dx^2(E_V)", "E_U", "E_V", "U*E_V",
             "V*E_V", "U*dx(E_V)", "U'*E_V"]
    cert = {}
    for label, r in (("D^1", r1), ("D^0", r0)):
        sol = express_in_basis(r, basis)
        if sol is None:
            raise AssertionError(f"residual {label} not in the string ideal span")
        cert[label] = {nm: str(c) for nm, c in zip(names, sol)
                       if not c.is_zero()}
    lower = {k: c for k, c in C.coeffs.items() if k < 0}
    assert all(c.is_zero() for c in lower.values()), "negative-order residual"
    return {"coefficients": {1: r1, 0: r0}, "certificate": cert}


# -- KP flows -------------------------------------------------------------------


@lru_cache(maxsize=None)
def kp_flow_rhs(k: int) -> tuple[DiffPoly, DiffPoly]:
    """(dU/dt_k, dV/dt_k) from the reduced KP flow, normal form mod string.

    Derived from dQ/dt_k = [(Q^{k/3})_+, Q]; the commutator has order <= 1
    and matches -(3/2) Udot D + (3/2) Vdot - (3/4) Udot'.
    """
    if k not in (2, 5):
        raise ValueError("flows implemented for k in {2, 5}")
    Q = build_Q34()
    A = frac_power_plus(Q, k, 3)
    C = A.commutator(Q)
    assert (C.order() or 0) <= 1
    c1, c0 = C.coeff(1), C.coeff(0)
    udot = c1.scale(Fraction(-2, 3))
    vdot = (c0 + udot.dx().scale(Fraction(3, 4))).scale(Fraction(2, 3))
    return reduce_mod_string(udot), reduce_mod_string(vdot)


def kp_flow_certificate() -> dict:
    """Substitutions used to bring flows to normal form (records the rules)."""
    rules = _normal_form_rules(JET34)
    return {"V''": rules["V''"].text(), "U^(4)": rules["U^(4)"].text(),
            "caps": {"U": 3, "V": 1}}
