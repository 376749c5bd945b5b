"""The injectivity decision engine.

Decides whether the whole family f_kappa(x) = A diag(kappa) x^B is injective
with respect to a subset S of R^n, for all positive kappa. Three routes exist
and provably agree: the paired-minor sign test, the symbolic determinant of
the bordered square matrix, and the exhaustive sign-pair search. All
verdict-bearing arithmetic is exact; floating point enters only when a
counterexample witness is rendered and re-verified at high precision.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

import mpmath
from mpmath import libmp, mp

from .errors import LengthMismatch, NonPositiveInput, ShapeMismatch, VerificationFailed
from .feasibility import (
    FeasibilityResult,
    feasible_sign_pair,
    rational_point_with_sign,
    split_pair_witness,
)
from .matroid import image_sign_vectors, matroid_vectors
from .ratmat import (
    IndexSet,
    RationalMatrix,
    det,
    gale_dual,
    kernel_basis,
    permutation_sign_tau,
    rank,
    rref,
)
from .signs import SignVector, sigma, sign_of

DEFAULT_PRECISION_BITS = 256
RESIDUAL_TOLERANCE = mp.mpf("1e-30")


def precision_bits() -> int:
    return int(os.environ.get("SIGNJECT_PRECISION_BITS", DEFAULT_PRECISION_BITS))


# -- subset specifications ----------------------------------------------------


@dataclass(frozen=True)
class FullSpace:
    """S = R^n."""


@dataclass(frozen=True)
class Subspace:
    """A vector subspace, presented as im(C) or as ker(Z)."""

    C: Optional[RationalMatrix] = None
    Z: Optional[RationalMatrix] = None

    def __post_init__(self):
        if (self.C is None) == (self.Z is None):
            raise ShapeMismatch("give exactly one of an image (C) or kernel (Z) presentation")

    @property
    def ambient_dim(self) -> int:
        return self.C.rows if self.C is not None else self.Z.cols

    def dim(self) -> int:
        if self.C is not None:
            return rank(self.C)
        return self.Z.cols - rank(self.Z)

    def image_presentation(self) -> RationalMatrix:
        """n x dim matrix with independent columns spanning S."""
        if self.Z is not None:
            return kernel_basis(self.Z)
        C = self.C
        if rank(C) == C.cols:
            return C
        R, _ = rref(C.transpose())
        rows = [R.entries[i] for i in range(rank(C))]
        return RationalMatrix(rows, len(rows), C.rows).transpose()

    def kernel_presentation(self) -> RationalMatrix:
        """(n - dim) x n matrix Z with S = ker(Z); zero rows when S = R^n."""
        if self.Z is not None:
            return self.Z
        n = self.ambient_dim
        C = self.image_presentation()
        if C.cols == n:
            return RationalMatrix([], 0, n)
        if C.cols == 0:
            return RationalMatrix.identity(n)
        return gale_dual(C)

    def nonzero_sign_vectors(self):
        """sigma(S) minus the zero vector, canonically ordered."""
        if self.dim() == 0:
            return ()
        return tuple(v for v in image_sign_vectors(self.image_presentation()) if not v.is_zero())


@dataclass(frozen=True)
class OrthantUnion:
    """S = sigma^{-1}(T) for a set of nonzero sign vectors T."""

    T: tuple

    def __post_init__(self):
        T = tuple(sorted(set(self.T)))
        if any(t.is_zero() for t in T):
            raise ValueError("OrthantUnion sign vectors must be nonzero")
        object.__setattr__(self, "T", T)


# -- symbolic determinant -----------------------------------------------------


@dataclass(frozen=True)
class SymbolicDetPoly:
    """det(Gamma_{kappa,lambda}) = sum c_{I,J} kappa^J lambda^I with |I| = |J| = s."""

    s: int
    terms: dict  # (I tuple, J tuple) -> nonzero Fraction

    def signs(self):
        return {sign_of(c) for c in self.terms.values()}

    def to_json_dict(self):
        return {
            "s": self.s,
            "terms": [
                {"I": list(I), "J": list(J), "coefficient": str(c)}
                for (I, J), c in sorted(self.terms.items())
            ],
        }


def gamma_det_poly(
    Aprime: RationalMatrix, B: RationalMatrix, Z: Optional[RationalMatrix]
) -> SymbolicDetPoly:
    """Exact coefficients of det of the (Z over A'_kappa B_lambda) block matrix."""
    s, r = Aprime.rows, Aprime.cols
    if B.rows != r:
        raise ShapeMismatch("B must have one row per column of A'")
    n = B.cols
    if Z is None or Z.rows == 0:
        if s != n:
            raise ShapeMismatch("Z may be empty only when s = n")
        Z = None
    elif Z.rows != n - s or Z.cols != n:
        raise ShapeMismatch(f"Z must be {n - s} x {n}")
    terms = {}
    full_s = list(range(s))
    full_ns = list(range(n - s))
    for I in combinations(range(n), s):
        Ic = [i for i in range(n) if i not in set(I)]
        tau = permutation_sign_tau(IndexSet(I, n), n)
        z_minor = Fraction(1) if Z is None else det(Z.submatrix(full_ns, Ic))
        if z_minor == 0:
            continue
        for J in combinations(range(r), s):
            coeff = tau * z_minor * det(Aprime.submatrix(full_s, J)) * det(B.submatrix(J, I))
            if coeff != 0:
                terms[(I, J)] = coeff
    return SymbolicDetPoly(s, terms)


def det_condition(p: SymbolicDetPoly) -> bool:
    """True iff the polynomial is nonzero and all coefficients share one sign."""
    return len(p.signs()) == 1


# -- minors route -------------------------------------------------------------


def check_minors(Atilde: RationalMatrix, B: RationalMatrix, s: int):
    """The paired-minor sign condition over all |I| = |J| = s.

    Returns (holds, ledger). The ledger records the first nonzero product and,
    on failure, the lexicographically smallest conflicting pair.
    """
    n, r = Atilde.rows, Atilde.cols
    if B.rows != r or B.cols != n:
        raise ShapeMismatch("B must be r x n for an n x r Atilde")
    common_sign = 0
    witness = None
    conflict = None
    for I in combinations(range(n), s):
        for J in combinations(range(r), s):
            product = det(Atilde.submatrix(I, J)) * det(B.submatrix(J, I))
            sg = sign_of(product)
            if sg == 0:
                continue
            if common_sign == 0:
                common_sign = sg
                witness = (I, J, product)
            elif sg != common_sign and conflict is None:
                conflict = (witness[:2], (I, J))
    holds = common_sign != 0 and conflict is None
    ledger = {
        "s": s,
        "common_sign": common_sign,
        "nonzero_witness": None
        if witness is None
        else {"I": list(witness[0]), "J": list(witness[1]), "product": str(witness[2])},
        "conflict": None
        if conflict is None
        else {
            "first": {"I": list(conflict[0][0]), "J": list(conflict[0][1])},
            "second": {"I": list(conflict[1][0]), "J": list(conflict[1][1])},
        },
    }
    return holds, ledger


# -- verdicts -----------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    kappa: tuple  # exact positive rationals
    x: tuple  # decimal strings at full working precision
    y: tuple
    residual_bound: str
    mu: SignVector
    tau: SignVector

    def to_json_dict(self):
        return {
            "kappa": [str(k) for k in self.kappa],
            "x": list(self.x),
            "y": list(self.y),
            "residual_bound": self.residual_bound,
            "mu": str(self.mu),
            "tau": str(self.tau),
        }


@dataclass(frozen=True)
class Verdict:
    injective: bool
    method: str
    certificate: Optional[dict] = None
    counterexample: Optional[Counterexample] = None
    warnings: tuple = ()

    def to_json_dict(self):
        return {
            "injective": self.injective,
            "method": self.method,
            "certificate": self.certificate,
            "counterexample": None if self.counterexample is None else self.counterexample.to_json_dict(),
            "warnings": list(self.warnings),
        }


# -- numeric evaluation -------------------------------------------------------


def _iv_from_exact(value, ctx):
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / ctx.mpf(value.denominator)
    return ctx.mpf(value)


def _monomials_iv(B: RationalMatrix, x, ctx):
    logs = [ctx.log(_iv_from_exact(xi, ctx)) for xi in x]
    out = []
    for j in range(B.rows):
        expo = ctx.mpf(0)
        for i in range(B.cols):
            b = B.entries[j][i]
            if b != 0:
                expo += _iv_from_exact(b, ctx) * logs[i]
        out.append(ctx.exp(expo))
    return out


def evaluate_map(A: RationalMatrix, B: RationalMatrix, kappa, x, prec: Optional[int] = None):
    """f_kappa(x) = A diag(kappa) x^B with a rigorous interval error bound.

    Returns (values, error_bound): midpoints and the largest interval radius,
    both as mpf at the working precision.
    """
    if A.cols != B.rows:
        raise ShapeMismatch("A and B are not composable")
    kappa = tuple(kappa)
    x = tuple(x)
    if len(kappa) != A.cols or len(x) != B.cols:
        raise LengthMismatch("kappa must match columns of A; x must match columns of B")
    if any(k <= 0 for k in kappa) or any(xi <= 0 for xi in x):
        raise NonPositiveInput("kappa and x must be componentwise positive")
    prec = prec or precision_bits()
    ctx = mpmath.iv
    old = ctx.prec
    try:
        ctx.prec = prec
        with mp.workprec(prec):
            mono = _monomials_iv(B, x, ctx)
            values = []
            radius = mp.mpf(0)
            for i in range(A.rows):
                acc = ctx.mpf(0)
                for j in range(A.cols):
                    a = A.entries[i][j]
                    if a != 0:
                        acc += _iv_from_exact(a, ctx) * _iv_from_exact(kappa[j], ctx) * mono[j]
                values.append(mp.mpf(acc.mid))
                radius = max(radius, mp.mpf(acc.delta) / 2)
            return tuple(values), radius
    finally:
        ctx.prec = old


def _mpf_to_fraction(value) -> Fraction:
    num, den = libmp.to_rational(value._mpf_)
    return Fraction(int(num), int(den))


# -- counterexample construction ----------------------------------------------


def _rational_point_in_subset(S, tau: SignVector):
    """Exact rational z in S with sigma(z) = tau."""
    if isinstance(S, (FullSpace, OrthantUnion)):
        return tuple(Fraction(s) for s in tau)
    Z = S.kernel_presentation()
    E = Z if Z.rows else None
    z = rational_point_with_sign(E, len(tau), tau)
    if z is None:
        raise VerificationFailed("no rational point of the requested sign exists in S")
    return z


def construct_counterexample(
    A: RationalMatrix,
    B: RationalMatrix,
    S,
    mu: SignVector,
    tau: SignVector,
    pair_witness,
    prec: Optional[int] = None,
) -> Counterexample:
    """Build (kappa, x, y) with f_kappa(x) = f_kappa(y), x - y in S, from a feasible pair.

    pair_witness is the (x_hat, y_hat) solution of the sign system; only the
    y part enters the construction (it supplies ln x - ln y). kappa is emitted
    as exact positive rationals, so the verified residual is nonzero but far
    below tolerance.
    """
    prec = prec or precision_bits()
    _, y_hat = pair_witness
    if sigma(y_hat) != tau:
        raise VerificationFailed("pair witness does not carry the sign tau")
    z = _rational_point_in_subset(S, tau)
    if mu.is_zero():
        w = tuple(Fraction(0) for _ in range(A.cols))
    else:
        w = rational_point_with_sign(A if A.rows else None, A.cols, mu)
        if w is None:
            raise VerificationFailed("mu is not a sign vector of ker(A)")

    for attempt_prec in (prec, max(4 * prec, 1024)):
        with mp.workprec(attempt_prec):
            v = [mp.mpf(t.numerator) / mp.mpf(t.denominator) for t in y_hat]
            x_num, y_num = [], []
            for zi, vi in zip(z, v):
                if zi == 0:
                    x_num.append(mp.mpf(1))
                    y_num.append(mp.mpf(1))
                else:
                    ev = mp.exp(vi)
                    zi_mp = mp.mpf(zi.numerator) / mp.mpf(zi.denominator)
                    yi = zi_mp / (ev - 1)
                    y_num.append(yi)
                    x_num.append(yi * ev)
            xB = _power_products(B, x_num)
            yB = _power_products(B, y_num)
            kappa = []
            for j in range(A.cols):
                if w[j] == 0:
                    kappa.append(Fraction(1))
                else:
                    wj = mp.mpf(w[j].numerator) / mp.mpf(w[j].denominator)
                    kj = wj / (xB[j] - yB[j])
                    if kj <= 0:
                        raise VerificationFailed("constructed kappa is not positive")
                    kappa.append(_mpf_to_fraction(kj))
            ok, bound = _verify_counterexample(A, B, kappa, x_num, y_num, attempt_prec)
            if ok:
                digits = int(attempt_prec * 0.3010299957) + 2
                return Counterexample(
                    kappa=tuple(kappa),
                    x=tuple(mp.nstr(xi, digits) for xi in x_num),
                    y=tuple(mp.nstr(yi, digits) for yi in y_num),
                    residual_bound=mp.nstr(bound, 8),
                    mu=mu,
                    tau=tau,
                )
    raise VerificationFailed("counterexample residual exceeds tolerance at maximum precision")


def _power_products(B: RationalMatrix, x):
    out = []
    for j in range(B.rows):
        acc = mp.mpf(0)
        for i in range(B.cols):
            b = B.entries[j][i]
            if b != 0:
                acc += mp.mpf(b.numerator) / mp.mpf(b.denominator) * mp.log(x[i])
        out.append(mp.exp(acc))
    return out


def _verify_counterexample(A, B, kappa, x_num, y_num, prec):
    if any(k <= 0 for k in kappa) or any(v <= 0 for v in x_num) or any(v <= 0 for v in y_num):
        return False, mp.inf
    fx, ex = evaluate_map(A, B, kappa, x_num, prec)
    fy, ey = evaluate_map(A, B, kappa, y_num, prec)
    residual = max(abs(a - b) for a, b in zip(fx, fy)) + ex + ey
    scale = max(max(abs(v) for v in fx), mp.mpf(1))
    rel = residual / scale
    return rel <= RESIDUAL_TOLERANCE, rel


# -- the decision procedure ---------------------------------------------------


def _pivot_rows(A: RationalMatrix) -> RationalMatrix:
    """The nonzero rows of rref(A): an s x r matrix with the same kernel as A."""
    R, pivots = rref(A)
    rows = [R.entries[i] for i in range(len(pivots))]
    return RationalMatrix(rows, len(rows), A.cols)


def _sign_search(A: RationalMatrix, B: RationalMatrix, T, S, warnings):
    """The exhaustive feasibility search over (mu, tau) pairs."""
    r, n = A.cols, B.cols
    T = tuple(sorted(set(T)))
    if not T:
        return Verdict(True, "sign_search", certificate={"empty_condition": True}, warnings=tuple(warnings))

    # mu = 0 arm: feasible iff ker(B) meets one of the requested orthants
    kerB = set(matroid_vectors(B))
    shared = sorted(kerB.intersection(T))
    if shared:
        tau = shared[0]
        y_hat = rational_point_with_sign(B if B.rows else None, n, tau)
        mu = SignVector.zero(r)
        cx = construct_counterexample(A, B, S, mu, tau, ((Fraction(0),) * r, y_hat))
        return Verdict(False, "sign_search", counterexample=cx, warnings=tuple(warnings))

    mus = tuple(v for v in matroid_vectors(A) if not v.is_zero())
    tested = 0
    for mu in mus:
        for tau in T:
            result = feasible_sign_pair(A, B, mu, tau)
            tested += 1
            if result.feasible:
                witness = split_pair_witness(result, r)
                cx = construct_counterexample(A, B, S, mu, tau, witness)
                return Verdict(False, "sign_search", counterexample=cx, warnings=tuple(warnings))
    certificate = {
        "pairs_tested": tested,
        "mu_candidates": [str(m) for m in mus],
        "tau_candidates": [str(t) for t in T],
    }
    return Verdict(True, "sign_search", certificate=certificate, warnings=tuple(warnings))


def _counterexample_via_search(A, B, T, S, method, certificate, warnings):
    """On a failed minors-route verdict, locate a feasible pair for the witness."""
    verdict = _sign_search(A, B, T, S, warnings)
    if verdict.injective:
        raise AssertionError("minor route failed but sign search found no feasible pair")
    return Verdict(False, method, certificate=certificate, counterexample=verdict.counterexample, warnings=tuple(warnings))


def check_injectivity(A: RationalMatrix, B: RationalMatrix, S) -> Verdict:
    """Decide injectivity of the family with respect to S, dispatching on the shape of S."""
    m, r = A.rows, A.cols
    if B.rows != r:
        raise ShapeMismatch("B must have one row per column of A")
    n = B.cols
    warnings = []
    if len({B.row(j) for j in range(r)}) < r:
        warnings.append("duplicate rows in B: the coset interpretation of S may weaken")

    if isinstance(S, FullSpace):
        return _check_full_space(A, B, warnings)
    if isinstance(S, OrthantUnion):
        if any(len(t) != n for t in S.T):
            raise ShapeMismatch("orthant sign vectors must have length n")
        return _sign_search(A, B, S.T, S, warnings)
    if isinstance(S, Subspace):
        if S.ambient_dim != n:
            raise ShapeMismatch("subspace lives in the wrong ambient dimension")
        dim = S.dim()
        if dim == 0:
            return Verdict(True, "minors", certificate={"empty_condition": True}, warnings=tuple(warnings))
        s = rank(A)
        if dim != s:
            return _sign_search(A, B, S.nonzero_sign_vectors(), S, warnings)
        return _check_subspace_minors(A, B, S, s, warnings)
    raise TypeError(f"unknown subset specification {type(S).__name__}")


def _check_full_space(A, B, warnings):
    m, r = A.rows, A.cols
    n = B.cols
    S = FullSpace()
    if rank(B) < n:
        # ker(B) nontrivial: the monomial map itself is not injective
        kv = kernel_basis(B).column(0)
        tau = sigma(kv)
        mu = SignVector.zero(r)
        cx = construct_counterexample(A, B, S, mu, tau, ((Fraction(0),) * r, kv))
        return Verdict(
            False,
            "full_space",
            certificate=None,
            counterexample=cx,
            warnings=tuple(warnings),
        )
    if m == n:
        holds, ledger = check_minors(A, B, n)
        if holds:
            return Verdict(True, "minors", certificate=ledger, warnings=tuple(warnings))
        shared = _shared_kernel_image_sign(A, B)
        cx = _full_space_counterexample(A, B, shared, S)
        return Verdict(False, "minors", certificate=ledger, counterexample=cx, warnings=tuple(warnings))
    shared = _shared_kernel_image_sign(A, B)
    if shared is None:
        return Verdict(
            True,
            "sign_search",
            certificate={"kernel_image_intersection": "trivial"},
            warnings=tuple(warnings),
        )
    cx = _full_space_counterexample(A, B, shared, S)
    return Verdict(False, "sign_search", counterexample=cx, warnings=tuple(warnings))


def _shared_kernel_image_sign(A, B):
    """Lexicographically smallest nonzero sign vector in sigma(ker A) ∩ sigma(im B)."""
    kerA = set(matroid_vectors(A))
    imB = set(image_sign_vectors(B))
    shared = sorted(v for v in kerA & imB if not v.is_zero())
    return shared[0] if shared else None


def _full_space_counterexample(A, B, rho, S):
    if rho is None:
        raise AssertionError("minors route failed but sign sets do not intersect")
    # rho in sigma(im B): recover a y with sigma(By) = rho, then pair it with rho
    from .feasibility import StrictSystem, solve_strict

    res = solve_strict(
        StrictSystem(nvars=B.cols, linear_sign_rows=B, linear_signs=rho)
    )
    assert res.feasible
    tau = sigma(res.witness)
    pair = feasible_sign_pair(A, B, rho, tau)
    assert pair.feasible
    witness = split_pair_witness(pair, A.cols)
    return construct_counterexample(A, B, S, rho, tau, witness)


def _check_subspace_minors(A, B, S, s, warnings):
    C = S.image_presentation()
    Z = S.kernel_presentation()
    Aprime = _pivot_rows(A)
    Atilde = C @ Aprime
    holds, ledger = check_minors(Atilde, B, s)
    poly = gamma_det_poly(Aprime, B, Z if Z.rows else None)
    if det_condition(poly) != holds:
        raise AssertionError("the (min) and (det) routes disagree; internal bug")
    certificate = {"minors": ledger, "det_poly_sign_count": len(poly.signs())}
    if holds:
        return Verdict(True, "minors", certificate=certificate, warnings=tuple(warnings))
    return _counterexample_via_search(
        A, B, S.nonzero_sign_vectors(), S, "minors", certificate, warnings
    )
