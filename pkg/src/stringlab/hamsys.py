"""The 3+3 Hamiltonian system equivalent to the (3,4) string equation.

Golden transcriptions of the three Hamiltonians, the Darboux maps between
jet and phase coordinates, Hamilton's equations, and the verification suites
(flow equivalence, pairwise commutation, homogeneity, the t2 -> 0 reduction,
and the closed Okamoto-style differential).

The Hamiltonian polynomials are entered once, term by term; their correctness
is established by redundant cross-checks (flow equivalence, commutation,
homogeneity, the spectral curve, and the series coefficients in tauflow)
rather than by trusting the transcription.
"""

from __future__ import annotations

from fractions import Fraction

from .diffalg import Alphabet, DiffPoly, weights_phase34
from .forms import OneForm, TwoForm
from . import psdo
from .psdo import JET34, kp_flow_rhs, reduce_mod_string

PHASE = Alphabet.phase34()

TIMES = ("t5", "t2", "t1")
PAIRS = (("QU", "PU"), ("QV", "PV"), ("QW", "PW"))

F = Fraction


def _ph(terms):
    return PHASE.poly(terms)


def hamiltonian(k: int) -> DiffPoly:
    """Golden H_k on the phase alphabet, k in {1, 2, 5}."""
    if k == 1:
        return _ph({
            (("PU", 1), ("QW", 1)): 1,
            (("PW", 2),): 6,
            (("QU", 1), ("QW", 2)): F(-3, 8),
            (("PV", 2),): F(1, 2),
            (("QU", 4),): F(-1, 8),
            (("QU", 1), ("QV", 2)): F(-3, 2),
            (("t1", 1), ("QU", 1)): -1,
            (("t2", 1), ("QV", 1)): 2,
            (("t5", 1), ("QU", 1), ("PW", 1)): 2,
            (("t5", 1), ("QU", 3)): F(-1, 4),
            (("t5", 1), ("QV", 2)): F(1, 2),
            (("t5", 1), ("QW", 2)): F(-1, 8),
            (("t5", 2), ("PW", 1)): -2,
            (("t5", 2), ("QU", 2)): F(1, 2),
            (("t5", 3), ("QU", 1)): F(19, 27),
            (("t5", 4),): F(41, 54),
            (("t5", 1), ("t1", 1)): F(-4, 3),
        })
    if k == 2:
        return _ph({
            (("PV", 1), ("QU", 1), ("QW", 1)): F(1, 2),
            (("QV", 1), ("QW", 2)): F(1, 4),
            (("PU", 1), ("PV", 1)): -2,
            (("PW", 1), ("QU", 1), ("QV", 1)): -6,
            (("QV", 3),): 1,
            (("QU", 3), ("QV", 1)): 1,
            (("t1", 1), ("QV", 1)): 2,
            (("t2", 1), ("PW", 1)): 4,
            (("t2", 1), ("QU", 2)): -1,
            (("t5", 1), ("QV", 1), ("QU", 2)): F(1, 2),
            (("t5", 1), ("PV", 1), ("QW", 1)): F(-1, 2),
            (("t5", 1), ("QV", 1), ("PW", 1)): 2,
            (("t5", 1), ("t2", 1), ("QU", 1)): -2,
            (("t5", 3), ("QV", 1)): F(-65, 27),
            (("t5", 2), ("t2", 1)): F(-22, 9),
        })
    if k == 5:
        return _ph({
            (("QW", 1), ("PV", 1), ("QU", 1), ("QV", 1)): F(1, 2),
            (("PU", 1), ("QW", 1), ("QU", 2)): F(-3, 4),
            (("PU", 1), ("PV", 1), ("QV", 1)): -1,
            (("PU", 1), ("PW", 1), ("QW", 1)): 1,
            (("QV", 4),): F(3, 8),
            (("QW", 4),): F(-1, 128),
            (("PW", 3),): 4,
            (("QU", 6),): F(-1, 16),
            (("PW", 1), ("PV", 2)): -1,
            (("PW", 1), ("QU", 4)): 1,
            (("PU", 2), ("QU", 1)): 1,
            (("PW", 2), ("QU", 2)): F(-9, 2),
            (("QU", 3), ("QV", 2)): F(-1, 8),
            (("QU", 2), ("PV", 2)): F(1, 8),
            (("QW", 2), ("QU", 3)): F(3, 32),
            (("QW", 2), ("QV", 2)): F(-1, 16),
            # t1 group
            (("t1", 1), ("QU", 1), ("PW", 1)): 2,
            (("t1", 1), ("QW", 2)): F(-1, 8),
            (("t1", 1), ("QU", 3)): F(-1, 4),
            (("t1", 1), ("QV", 2)): F(1, 2),
            # t2 group
            (("t2", 1), ("QV", 1), ("QU", 2)): F(1, 2),
            (("t2", 1), ("PV", 1), ("QW", 1)): F(-1, 2),
            (("t2", 1), ("QV", 1), ("PW", 1)): 2,
            # t5 group
            (("t5", 1), ("QU", 5)): F(3, 16),
            (("t5", 1), ("PU", 2)): -2,
            (("t5", 1), ("QU", 2), ("QW", 2)): F(-1, 16),
            (("t5", 1), ("PW", 1), ("QW", 2)): F(-1, 4),
            (("t5", 1), ("PW", 2), ("QU", 1)): 5,
            (("t5", 1), ("PW", 1), ("QU", 3)): -2,
            (("t5", 1), ("PW", 1), ("QV", 2)): -5,
            (("t5", 1), ("QU", 2), ("QV", 2)): F(3, 4),
            (("t5", 1), ("PV", 2), ("QU", 1)): F(-1, 4),
            (("t5", 1), ("PV", 1), ("QV", 1), ("QW", 1)): F(1, 2),
            (("t5", 1), ("PU", 1), ("QU", 1), ("QW", 1)): 1,
            # lower-order time terms
            (("t2", 2), ("QU", 1)): -1,
            # the paper prints t1*t2 here; t1*t5 is forced by homogeneity and
            # by every commutation check (see decisions ledger)
            (("t1", 1), ("t5", 1), ("PW", 1)): -4,
            (("t1", 1), ("t5", 1), ("QU", 2)): 1,
            (("t5", 2), ("QU", 1), ("QV", 2)): F(47, 12),
            (("t5", 2), ("PU", 1), ("QW", 1)): F(-29, 18),
            (("t5", 2), ("PW", 1), ("QU", 2)): F(-3, 2),
            (("t5", 2), ("QU", 1), ("QW", 2)): F(29, 48),
            (("t5", 2), ("QU", 4)): F(7, 18),
            (("t5", 2), ("PV", 2)): F(-14, 9),
            (("t5", 2), ("PW", 2)): F(-20, 3),
            (("t5", 3), ("QU", 1), ("PW", 1)): F(-284, 108),
            (("t5", 3), ("QU", 3)): F(49, 108),
            (("t5", 3), ("QV", 2)): F(-152, 108),
            (("t5", 3), ("QW", 2)): F(11, 108),
            (("t5", 2), ("t1", 1), ("QU", 1)): F(19, 9),
            (("t5", 2), ("t2", 1), ("QV", 1)): F(-65, 9),
            (("t5", 4), ("PW", 1)): F(1304, 216),
            (("t5", 4), ("QU", 2)): F(-299, 216),
            (("t5", 5), ("QU", 1)): F(-2173, 972),
            (("t1", 2),): F(-2, 3),
            (("t5", 1), ("t2", 2)): F(-22, 9),
            (("t5", 3), ("t1", 1)): F(82, 27),
            (("t5", 6),): F(-556, 243),
        })
    raise ValueError("k must be 1, 2 or 5")


def hamiltonians() -> dict[int, DiffPoly]:
    return {1: hamiltonian(1), 2: hamiltonian(2), 5: hamiltonian(5)}


def integration_constant(k: int) -> DiffPoly:
    """The proof's c_k: the pure-time part chosen for the golden H_k."""
    if k == 1:
        return _ph({(("t5", 1), ("t1", 1)): F(-4, 3), (("t5", 4),): F(41, 54)})
    if k == 2:
        return _ph({(("t5", 2), ("t2", 1)): F(-22, 9)})
    if k == 5:
        return _ph({(("t1", 2),): F(-2, 3),
                    (("t5", 3), ("t1", 1)): F(82, 27),
                    (("t5", 6),): F(-556, 243),
                    (("t5", 1), ("t2", 2)): F(-22, 9)})
    raise ValueError(k)


def pure_time_part(p: DiffPoly) -> DiffPoly:
    zero = PHASE.zero()
    sub = {nm: zero for nm, _ in
           [("QU", 0), ("QV", 0), ("QW", 0), ("PU", 0), ("PV", 0), ("PW", 0)]}
    return p.substitute(sub, PHASE)


# -- Poisson bracket and Hamiltonian vector fields -----------------------------


def poisson(f: DiffPoly, g: DiffPoly) -> DiffPoly:
    """{f, g} = sum_a (df/dQ_a dg/dP_a - df/dP_a dg/dQ_a) on the phase ring."""
    if f.alphabet != PHASE or g.alphabet != PHASE:
        raise ValueError("poisson bracket requires the phase alphabet")
    out = PHASE.zero()
    for q, p in PAIRS:
        out = out + f.partial(q) * g.partial(p) - f.partial(p) * g.partial(q)
    return out


def hamilton_rhs(k: int) -> dict[str, DiffPoly]:
    """Hamilton's equations for flow k: d(coord)/dt_k per phase coordinate."""
    H = hamiltonian(k)
    out = {}
    for q, p in PAIRS:
        out[q] = H.partial(p)
        out[p] = -H.partial(q)
    return out


def phase_time_derivative(f: DiffPoly, k: int) -> DiffPoly:
    """Total d/dt_k on a phase polynomial: explicit partial + {f, H_k}."""
    return f.partial(f"t{k}") + poisson(f, hamiltonian(k))


# -- Darboux maps ---------------------------------------------------------------


def darboux_forward() -> dict[str, DiffPoly]:
    """Phase coordinates as jet polynomials (contains t5 explicitly)."""
    a = JET34
    U, V = a.gen("U"), a.gen("V")
    Up, Upp, Uppp, Vp = a.gen("U'"), a.gen("U''"), a.gen("U'''"), a.gen("V'")
    t5 = a.gen("t5")
    return {
        "QU": U - t5.scale(F(4, 3)),
        "QV": V,
        "QW": Up,
        "PU": ((U * Up).scale(3) - Uppp.scale(F(1, 3))
               - (t5 * Up).scale(F(7, 3))).scale(F(1, 4)),
        "PV": Vp,
        "PW": Upp.scale(F(1, 12)) - (t5 * U).scale(F(1, 6)) + (t5 ** 2).scale(F(7, 18)),
        "t1": a.gen("t1"), "t2": a.gen("t2"), "t5": t5,
    }


def darboux_inverse() -> dict[str, DiffPoly]:
    """Jets (up to U''' and V') as phase polynomials; the triangular solve."""
    ph = PHASE
    QU, QV, QW = ph.gen("QU"), ph.gen("QV"), ph.gen("QW")
    PU, PV, PW = ph.gen("PU"), ph.gen("PV"), ph.gen("PW")
    t5 = ph.gen("t5")
    U = QU + t5.scale(F(4, 3))
    return {
        "U": U,
        "V": QV,
        "U'": QW,
        "V'": PV,
        "U''": PW.scale(12) + (t5 * QU).scale(2) - (t5 ** 2).scale(2),
        "U'''": (QU * QW).scale(9) + (t5 * QW).scale(5) - PU.scale(12),
        "t1": ph.gen("t1"), "t2": ph.gen("t2"), "t5": t5,
    }


def jets_to_phase(p: DiffPoly) -> DiffPoly:
    """Express a jet polynomial (orders within the caps) in phase coordinates."""
    return p.substitute(darboux_inverse(), PHASE)


def phase_to_jets(p: DiffPoly) -> DiffPoly:
    return p.substitute(darboux_forward(), JET34)


def jet_time_derivative(f: DiffPoly, k: int) -> DiffPoly:
    """Total d/dt_k on a jet polynomial modulo the string system.

    k = 1 is the total x-derivative; k in {2, 5} uses the reduced KP flows.
    The result is reduced to normal form.
    """
    if k == 1:
        return reduce_mod_string(f.dx())
    udot, vdot = kp_flow_rhs(k)
    out = f.partial(f"t{k}")
    flows = {"U": udot, "V": vdot}
    for gi in f.gens_in_use():
        g = JET34.gens[gi]
        if g.kind != "jet":
            continue
        base = g.name[0]
        rate = flows[base]
        for _ in range(g.order):
            rate = rate.dx()
        out = out + f.partial(g.name) * rate
    return reduce_mod_string(out)


# -- verification suites -----------------------------------------------------


def verify_flow_equivalence(ks=(1, 2, 5)) -> dict:
    """Hamilton's equations == string system under the Darboux maps.

    For each flow k and phase coordinate, compares the jet-side total time
    derivative of the coordinate's jet expression against the Hamiltonian
    vector field component mapped to jets; all residuals must vanish after
    normal-form reduction.
    """
    fwd = darboux_forward()
    report = {}
    for k in ks:
        rhs = hamilton_rhs(k)
        for coord in ("QU", "QV", "QW", "PU", "PV", "PW"):
            lhs = jet_time_derivative(fwd[coord], k)
            want = reduce_mod_string(phase_to_jets(rhs[coord]))
            residual = lhs - want
            report[f"t{k}/{coord}"] = residual
    return report


def commutation_check() -> dict:
    """Pairwise {H_k, H_j} = 0 and mixed-partial equality, plus the c_k."""
    H = hamiltonians()
    out = {}
    for k, j in ((5, 2), (5, 1), (2, 1)):
        out[f"poisson[{k},{j}]"] = poisson(H[k], H[j])
        out[f"mixed[{k},{j}]"] = H[k].partial(f"t{j}") - H[j].partial(f"t{k}")
    for k in (1, 2, 5):
        out[f"c{k}"] = pure_time_part(H[k]) - integration_constant(k)
    return out


def homogeneity_check() -> dict:
    """Weighted homogeneity: H_k has weight {1: 8, 2: 9, 5: 12}; also the
    explicit kappa-scaling identity on an extended alphabet."""
    w = weights_phase34()
    H = hamiltonians()
    out = {"weights": {k: H[k].weight_of(w) for k in (1, 2, 5)}}
    ext = PHASE.extended(["kappa"])
    kap = ext.gen("kappa")
    sub = {nm: ext.gen(nm) * kap ** w[nm] for nm in w}
    target = {1: 8, 2: 9, 5: 12}
    for k in (1, 2, 5):
        scaled = H[k].substitute(sub, ext)
        ref = H[k].substitute({nm: ext.gen(nm) for nm in w}, ext)
        out[f"kappa[{k}]"] = scaled - ref * kap ** target[k]
    return out


def t2_zero_reduction() -> dict:
    """The 2+2 system at Q_V = P_V = t2 = 0 and its invariance."""
    zero = PHASE.zero()
    sub = {"QV": zero, "PV": zero, "t2": zero}
    H = hamiltonians()
    red = {k: H[k].substitute(sub, PHASE) for k in (1, 5)}
    out = {"H1_reduced": red[1], "H5_reduced": red[5]}
    # the constraint locus is invariant: QV- and PV-flows vanish on it
    for k in (1, 5):
        rhs = hamilton_rhs(k)
        out[f"locus_QV_flow[{k}]"] = rhs["QV"].substitute(sub, PHASE)
        out[f"locus_PV_flow[{k}]"] = rhs["PV"].substitute(sub, PHASE)
    # reduced string equation: E_U with V = 0
    E_U, _ = psdo.string_equations()
    out["reduced_string_equation"] = E_U.substitute(
        {"V": JET34.zero(), "V'": JET34.zero(), "V''": JET34.zero()}, JET34)
    # reduced t5 flow: U_eta display with V = 0
    udot, _ = kp_flow_rhs(5)
    out["reduced_t5_flow"] = udot.substitute(
        {"V": JET34.zero(), "V'": JET34.zero()}, JET34)
    return out


def okamoto_differential() -> OneForm:
    """omega = H5 dt5 + H2 dt2 + H1 dt1 on the time basis."""
    H = hamiltonians()
    return OneForm(list(TIMES), {"t5": H[5], "t2": H[2], "t1": H[1]}, PHASE)


def okamoto_closedness() -> dict[str, TwoForm]:
    """d(omega) with explicit time partials and with total flow derivatives."""
    om = okamoto_differential()
    explicit = {t: (lambda f, t=t: f.partial(t)) for t in TIMES}
    total = {t: (lambda f, t=t: phase_time_derivative(f, int(t[1]))) for t in TIMES}
    return {"explicit": om.exterior_d(explicit), "total": om.exterior_d(total)}
