"""Reaction-network layer: parsing, stoichiometry, and multistationarity analysis.

A network with stoichiometric matrix N and kinetic-order matrix V evolves by
dx/dt = N diag(kappa) x^V. Injectivity of that map with respect to the
stoichiometric subspace im(N), for all kappa, precludes two distinct positive
steady states in any compatibility class. When injectivity fails, a concrete
pair of steady states is searched for; failure alone does not imply one
exists.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

from mpmath import mp

from .engine import Subspace, Verdict, check_injectivity
from .errors import ParseError, ShapeMismatch, UnknownSpecies
from .feasibility import StrictSystem, rational_point_with_sign, solve_strict
from .matroid import image_sign_vectors, matroid_vectors
from .ratmat import RationalMatrix, parse_rational
from .signs import SignVector, sigma

NUMERIC_DIGITS = 50


@dataclass(frozen=True)
class ReactionNetwork:
    species: tuple  # ordered names
    reactions: tuple  # (label, reactant complex, product complex); complexes are ((name, coeff), ...)
    kinetic_orders: Optional[RationalMatrix] = None  # r x n override
    warnings: tuple = ()

    def __post_init__(self):
        if not self.species or not self.reactions:
            raise ValueError("a network needs at least one species and one reaction")
        labels = [lab for lab, _, _ in self.reactions]
        if len(set(labels)) < len(labels):
            raise ValueError("reaction labels must be unique")
        if self.kinetic_orders is not None:
            if (self.kinetic_orders.rows, self.kinetic_orders.cols) != (
                len(self.reactions),
                len(self.species),
            ):
                raise ShapeMismatch("kinetic-order override must be r x n")


_TERM_RE = re.compile(r"^\s*(?:(\d+(?:/\d+)?)\s*)?([A-Za-z_]\w*)\s*$")
_LABEL_RE = re.compile(r"^[A-Za-z_]\w*$")


def _parse_complex(text: str, line_no: int, col0: int):
    """A complex: `0` or `+`-separated terms `coeff? species`."""
    if text.strip() == "0":
        return ()
    terms = []
    offset = col0
    for chunk in text.split("+"):
        m = _TERM_RE.match(chunk)
        if m is None:
            col = offset + len(chunk) - len(chunk.lstrip()) + 1
            raise ParseError(f"cannot read complex term {chunk.strip()!r}", line=line_no, column=col)
        coeff = Fraction(1) if m.group(1) is None else parse_rational(m.group(1))
        if coeff <= 0:
            raise ParseError("stoichiometric coefficients must be positive", line=line_no, column=offset + 1)
        terms.append((m.group(2), coeff))
        offset += len(chunk) + 1
    return tuple(terms)


def parse_network(text: str) -> ReactionNetwork:
    """Parse the one-reaction-per-line DSL; `#` starts a comment, `0` is the empty complex."""
    species = []
    seen = set()
    reactions = []
    warnings = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if ":" not in line:
            raise ParseError("expected 'label: reactant -> product'", line=line_no, column=1)
        label, rest = line.split(":", 1)
        label = label.strip()
        if not _LABEL_RE.match(label):
            raise ParseError(f"bad reaction label {label!r}", line=line_no, column=1)
        if any(lab == label for lab, _, _ in reactions):
            raise ParseError(f"duplicate reaction label {label!r}", line=line_no, column=1)
        if "->" not in rest:
            raise ParseError("missing '->'", line=line_no, column=line.index(":") + 2)
        lhs, rhs = rest.split("->", 1)
        col_lhs = line.index(":") + 1
        reactant = _parse_complex(lhs, line_no, col_lhs)
        product_ = _parse_complex(rhs, line_no, col_lhs + len(lhs) + 2)
        for name, _ in reactant + product_:
            if name not in seen:
                seen.add(name)
                species.append(name)
        if _net_vector(reactant) == _net_vector(product_):
            warnings.append(f"line {line_no}: reaction {label!r} has a zero reaction vector")
        reactions.append((label, reactant, product_))
    return ReactionNetwork(tuple(species), tuple(reactions), warnings=tuple(warnings))


def _net_vector(complex_):
    net = {}
    for name, c in complex_:
        net[name] = net.get(name, Fraction(0)) + c
    return {k: v for k, v in net.items() if v != 0}


def _render_complex(complex_):
    if not complex_:
        return "0"
    parts = []
    for name, c in complex_:
        parts.append(name if c == 1 else f"{c} {name}")
    return " + ".join(parts)


def render(net: ReactionNetwork) -> str:
    lines = [
        f"{label}: {_render_complex(rc)} -> {_render_complex(pc)}"
        for label, rc, pc in net.reactions
    ]
    return "\n".join(lines) + "\n"


def apply_kinetic_orders(net: ReactionNetwork, mapping: dict) -> ReactionNetwork:
    """Override kinetic orders from {label: {species: rational string}} or row lists."""
    n = len(net.species)
    index = {name: i for i, name in enumerate(net.species)}
    labels = {label: j for j, (label, _, _) in enumerate(net.reactions)}
    _, V = stoichiometry(net)
    rows = [list(V.entries[j]) for j in range(V.rows)]
    for label, row in mapping.items():
        if label not in labels:
            raise ParseError(f"kinetic-order override names unknown reaction {label!r}")
        j = labels[label]
        if isinstance(row, dict):
            for name, value in row.items():
                if name not in index:
                    raise UnknownSpecies(f"unknown species {name!r} in kinetic-order override")
                rows[j][index[name]] = parse_rational(str(value))
        else:
            if len(row) != n:
                raise ShapeMismatch(f"kinetic-order row for {label!r} must have length {n}")
            rows[j] = [parse_rational(str(v)) for v in row]
    V2 = RationalMatrix(rows, len(net.reactions), n)
    return ReactionNetwork(net.species, net.reactions, kinetic_orders=V2, warnings=net.warnings)


def stoichiometry(net: ReactionNetwork):
    """(N, V): N is n x r with the reaction vectors as columns, V is r x n."""
    n, r = len(net.species), len(net.reactions)
    index = {name: i for i, name in enumerate(net.species)}
    N = [[Fraction(0)] * r for _ in range(n)]
    V = [[Fraction(0)] * n for _ in range(r)]
    for j, (_, reactant, product_) in enumerate(net.reactions):
        for name, c in reactant:
            N[index[name]][j] -= c
            V[j][index[name]] += c  # mass-action: orders follow reactant stoichiometry
        for name, c in product_:
            N[index[name]][j] += c
    Nm = RationalMatrix(N, n, r)
    Vm = net.kinetic_orders if net.kinetic_orders is not None else RationalMatrix(V, r, n)
    return Nm, Vm


# -- multistationarity preclusion ---------------------------------------------


@dataclass(frozen=True)
class PreclusionVerdict:
    precluded: bool
    injectivity: Verdict
    steady_state_pair: Optional[dict]
    note: str
    warnings: tuple = ()

    def to_json_dict(self):
        return {
            "precluded": self.precluded,
            "injectivity": self.injectivity.to_json_dict(),
            "steady_state_pair": self.steady_state_pair,
            "note": self.note,
            "warnings": list(self.warnings),
        }


def preclude_multistationarity(net: ReactionNetwork) -> PreclusionVerdict:
    """Decide injectivity on every compatibility class; on failure, hunt for a pair."""
    N, V = stoichiometry(net)
    S = Subspace(C=N)
    verdict = check_injectivity(N, V, S)
    if verdict.injective:
        return PreclusionVerdict(
            precluded=True,
            injectivity=verdict,
            steady_state_pair=None,
            note="injective on every compatibility class for all kappa; multistationarity is impossible",
            warnings=net.warnings,
        )
    pair = None
    integral = all(v.denominator == 1 for row in V.entries for v in row)
    if integral:
        pair = _steady_state_pair(N, V, S)
    note = (
        "injectivity fails and an explicit pair of positive steady states in one compatibility class was found"
        if pair is not None
        else "injectivity fails for some kappa; this does not by itself imply multistationarity, and no steady-state pair was found at desk scale"
    )
    return PreclusionVerdict(
        precluded=False,
        injectivity=verdict,
        steady_state_pair=pair,
        note=note,
        warnings=net.warnings,
    )


def _steady_state_pair(N: RationalMatrix, V: RationalMatrix, S: Subspace):
    """Deterministic grid search for kappa > 0 with N diag(kappa) x^V = 0 at x and y.

    x ranges over a small positive grid, y = x + z over integer combinations of
    a basis of im(N). Both steady-state conditions are linear in kappa, so each
    candidate reduces to one exact feasibility question.
    """
    n, r = N.rows, N.cols
    basis = S.image_presentation()
    s = basis.cols
    x_values = (
        [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3)]
        if n <= 2
        else [Fraction(1, 2), Fraction(1), Fraction(2)]
    )
    coeff_range = range(-3, 4) if s <= 2 else range(-1, 2)
    for x in product(x_values, repeat=n):
        for coeffs in product(coeff_range, repeat=s):
            if all(c == 0 for c in coeffs):
                continue
            z = basis.apply([Fraction(c) for c in coeffs])
            y = tuple(a + b for a, b in zip(x, z))
            if any(v <= 0 for v in y):
                continue
            rows = []
            for point in (x, y):
                mono = [_monomial(point, V.entries[j]) for j in range(r)]
                for i in range(n):
                    rows.append([N.entries[i][j] * mono[j] for j in range(r)])
            system = StrictSystem(
                nvars=r,
                equalities=RationalMatrix(rows, 2 * n, r),
                comp_signs=SignVector([1] * r),
            )
            res = solve_strict(system)
            if res.feasible:
                kappa = res.witness
                for point in (x, y):
                    mono = [_monomial(point, V.entries[j]) for j in range(r)]
                    assert all(
                        sum(N.entries[i][j] * kappa[j] * mono[j] for j in range(r)) == 0
                        for i in range(n)
                    )
                return {
                    "kappa": [str(k) for k in kappa],
                    "x": [str(v) for v in x],
                    "y": [str(v) for v in y],
                    "residual": "0 (exact rational steady-state equations)",
                }
    return None


def _monomial(x, exps):
    out = Fraction(1)
    for xi, e in zip(x, exps):
        out *= xi ** int(e)
    return out


# -- special steady states ----------------------------------------------------


def special_unique(M: RationalMatrix, S: Subspace) -> bool:
    """At most one special steady state per compatibility class, for all kappa."""
    if M.cols != S.ambient_dim:
        raise ShapeMismatch("M must have one column per species")
    if S.dim() == 0:
        return True
    kerM = set(matroid_vectors(M))
    sigS = set(image_sign_vectors(S.image_presentation()))
    return all(v.is_zero() for v in kerM & sigS)


@dataclass(frozen=True)
class SpecialWitness:
    """Two positive points in one coset of S with identical M-monomial values.

    x and y are exact in the form y_i = z_i / (e^{v_i} - 1), x_i = y_i e^{v_i};
    z and v are rational, M v = 0 and z in S hold exactly, so x^M = y^M exactly.
    """

    rho: SignVector
    v: tuple  # rational, in ker M
    z: tuple  # rational, in S, equal to x - y
    x_numeric: tuple  # 50-digit decimal strings
    y_numeric: tuple
    assume_coset: bool

    def to_json_dict(self):
        return {
            "rho": str(self.rho),
            "v": [str(a) for a in self.v],
            "z": [str(a) for a in self.z],
            "x": list(self.x_numeric),
            "y": list(self.y_numeric),
            "assume_coset": self.assume_coset,
        }


def multistationarity_witness(
    M: RationalMatrix, S: Subspace, assume_coset: bool = False
) -> Optional[SpecialWitness]:
    """Construct x*, y* in one coset with (x*)^M = (y*)^M, or None if impossible."""
    if M.cols != S.ambient_dim:
        raise ShapeMismatch("M must have one column per species")
    if S.dim() == 0:
        return None
    n = M.cols
    kerM = set(matroid_vectors(M))
    sigS = set(image_sign_vectors(S.image_presentation()))
    shared = sorted(v for v in kerM & sigS if not v.is_zero())
    if not shared:
        return None
    rho = shared[0]
    v = rational_point_with_sign(M if M.rows else None, n, rho)
    Z = S.kernel_presentation()
    z = rational_point_with_sign(Z if Z.rows else None, n, rho)
    assert v is not None and z is not None
    assert all(sum(M.entries[i][j] * v[j] for j in range(n)) == 0 for i in range(M.rows))
    x_num, y_num = [], []
    with mp.workprec(int(NUMERIC_DIGITS * 3.33) + 16):
        for zi, vi in zip(z, v):
            if zi == 0:
                x_num.append(mp.mpf(1))
                y_num.append(mp.mpf(1))
            else:
                ev = mp.exp(mp.mpf(vi.numerator) / mp.mpf(vi.denominator))
                yi = (mp.mpf(zi.numerator) / mp.mpf(zi.denominator)) / (ev - 1)
                y_num.append(yi)
                x_num.append(yi * ev)
        # numeric spot check of x^M = y^M on top of the exact Mv = 0 certificate
        for i in range(M.rows):
            mrow = [mp.mpf(c.numerator) / mp.mpf(c.denominator) for c in M.entries[i]]
            lx = sum(mrow[j] * mp.log(x_num[j]) for j in range(n))
            ly = sum(mrow[j] * mp.log(y_num[j]) for j in range(n))
            assert abs(lx - ly) < mp.mpf(10) ** (-NUMERIC_DIGITS + 5)
        return SpecialWitness(
            rho=rho,
            v=v,
            z=z,
            x_numeric=tuple(mp.nstr(a, NUMERIC_DIGITS) for a in x_num),
            y_numeric=tuple(mp.nstr(a, NUMERIC_DIGITS) for a in y_num),
            assume_coset=assume_coset,
        )
