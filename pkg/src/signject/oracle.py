"""Independent slow oracles used only by the test suite.

Every routine here re-derives a quantity the engine computes, by a different
algorithm (cofactor expansion, Fourier-Motzkin, brute-force orthant sweeps,
Leibniz expansion, random sampling). Nothing in the package outside the tests
may import this module; the dependency is strictly one-way.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product

import numpy
from mpmath import mp

from .errors import TooLarge
from .feasibility import StrictSystem, solve_strict
from .ratmat import RationalMatrix
from .signs import SignVector, canonical_sort, sigma

COFACTOR_LIMIT = 5
FM_VARIABLE_LIMIT = 6
SWEEP_DIM_LIMIT = 5


def cofactor_det(M: RationalMatrix) -> Fraction:
    """Determinant by cofactor expansion along the first row (n <= 5)."""
    n = M.rows
    if n != M.cols:
        raise ValueError("determinant of a non-square matrix")
    if n > COFACTOR_LIMIT:
        raise TooLarge(f"cofactor expansion limited to order {COFACTOR_LIMIT}")
    if n == 0:
        return Fraction(1)
    if n == 1:
        return M[0, 0]
    total = Fraction(0)
    for j in range(n):
        if M[0, j] == 0:
            continue
        minor = M.submatrix(range(1, n), [c for c in range(n) if c != j])
        total += (-1) ** j * M[0, j] * cofactor_det(minor)
    return total


# -- Fourier-Motzkin ----------------------------------------------------------


def fourier_motzkin_feasible(eq_rows, ineq_rows, nvars: int) -> bool:
    """Decide {E z = 0, A z >= rhs} by variable elimination (nvars <= 6).

    eq_rows and ineq_rows are sequences of (coeffs, rhs) pairs; equalities are
    rewritten as opposite inequality pairs first.
    """
    if nvars > FM_VARIABLE_LIMIT:
        raise TooLarge(f"Fourier-Motzkin limited to {FM_VARIABLE_LIMIT} variables")
    rows = []
    for coeffs, rhs in eq_rows:
        c = tuple(Fraction(v) for v in coeffs)
        rows.append((c, Fraction(rhs)))
        rows.append((tuple(-v for v in c), -Fraction(rhs)))
    for coeffs, rhs in ineq_rows:
        rows.append((tuple(Fraction(v) for v in coeffs), Fraction(rhs)))

    for var in range(nvars - 1, -1, -1):
        pos = [r for r in rows if r[0][var] > 0]
        neg = [r for r in rows if r[0][var] < 0]
        rest = [r for r in rows if r[0][var] == 0]
        combined = []
        for cp, bp in pos:
            for cn, bn in neg:
                # scale so the var cancels: cp/cp[var] + cn/(-cn[var])
                sp, sn = cp[var], -cn[var]
                coeffs = tuple(a / sp + b / sn for a, b in zip(cp, cn))
                combined.append((coeffs, bp / sp + bn / sn))
        rows = rest + combined
    return all(rhs <= 0 for coeffs, rhs in rows)


def fm_strict_feasible(sys: StrictSystem) -> bool:
    """The strict system decided through the same eps=1 relaxation, by FM."""
    eq_rows, ineq_rows = [], []
    for coeffs, rel in sys.constraint_rows():
        if rel == "=0":
            eq_rows.append((coeffs, Fraction(0)))
        elif rel == ">0":
            ineq_rows.append((coeffs, Fraction(1)))
        else:
            ineq_rows.append((tuple(-Fraction(c) for c in coeffs), Fraction(1)))
    return fourier_motzkin_feasible(eq_rows, ineq_rows, sys.nvars)


# -- brute-force sign sets ----------------------------------------------------


def brute_force_sign_set(M: RationalMatrix, mode: str):
    """sigma(ker M) or sigma(im M) by sweeping all 3^n orthants (dim <= 5)."""
    if mode == "kernel":
        n = M.cols
        if n > SWEEP_DIM_LIMIT:
            raise TooLarge(f"orthant sweep limited to dimension {SWEEP_DIM_LIMIT}")
        found = []
        for signs in product((-1, 0, 1), repeat=n):
            tau = SignVector(signs)
            res = solve_strict(StrictSystem(nvars=n, equalities=M if M.rows else None, comp_signs=tau))
            if res.feasible:
                found.append(tau)
        return canonical_sort(found)
    if mode == "image":
        n = M.rows
        if n > SWEEP_DIM_LIMIT:
            raise TooLarge(f"orthant sweep limited to dimension {SWEEP_DIM_LIMIT}")
        found = []
        for signs in product((-1, 0, 1), repeat=n):
            tau = SignVector(signs)
            # y = M c with sigma(y) = tau: variables (c, y)
            k = M.cols
            eqs = RationalMatrix(
                [list(M.entries[i]) + [Fraction(-1) if j == i else Fraction(0) for j in range(n)] for i in range(n)],
                n,
                k + n,
            )
            target = SignVector([0] * k + list(tau))
            free = [True] * k + [False] * n
            res = solve_strict(
                StrictSystem(nvars=k + n, equalities=eqs, comp_signs=target, free_mask=free)
            )
            if res.feasible:
                found.append(tau)
        return canonical_sort(found)
    raise ValueError("mode must be 'kernel' or 'image'")


# -- symbolic determinant by Leibniz ------------------------------------------


def naive_symbolic_gamma_det(Aprime: RationalMatrix, B: RationalMatrix, Z):
    """The bordered determinant expanded by the Leibniz formula (n <= 5).

    Each product kappa_j lambda_i is tracked as an exponent dictionary; the
    result is collapsed to a SymbolicDetPoly, with a check that no monomial
    carries an exponent above one (everything multilinear survives).
    """
    from .engine import SymbolicDetPoly

    s, r = Aprime.rows, Aprime.cols
    n = B.cols
    if n > COFACTOR_LIMIT:
        raise TooLarge(f"Leibniz expansion limited to order {COFACTOR_LIMIT}")
    top = 0 if Z is None else Z.rows
    if top + s != n:
        raise ValueError("blocks do not stack to a square matrix")

    def entry(i, col):
        # polynomial as dict: (kappa exponents tuple, lambda exponents tuple) -> coeff
        if i < top:
            c = Z.entries[i][col]
            return {} if c == 0 else {((0,) * r, (0,) * n): c}
        k = i - top
        poly = {}
        for j in range(r):
            c = Aprime.entries[k][j] * B.entries[j][col]
            if c != 0:
                ke = tuple(1 if t == j else 0 for t in range(r))
                le = tuple(1 if t == col else 0 for t in range(n))
                poly[(ke, le)] = poly.get((ke, le), Fraction(0)) + c
        return poly

    total = {}
    for perm in permutations(range(n)):
        sign = _perm_sign(perm)
        prod = {((0,) * r, (0,) * n): Fraction(sign)}
        for i in range(n):
            prod = _poly_mul(prod, entry(i, perm[i]), r, n)
            if not prod:
                break
        for key, c in prod.items():
            total[key] = total.get(key, Fraction(0)) + c

    terms = {}
    for (ke, le), c in total.items():
        if c == 0:
            continue
        assert all(e <= 1 for e in ke) and all(e <= 1 for e in le), "non-multilinear monomial survived"
        J = tuple(j for j, e in enumerate(ke) if e)
        I = tuple(i for i, e in enumerate(le) if e)
        terms[(I, J)] = c
    return SymbolicDetPoly(s, terms)


def _perm_sign(perm):
    inv = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])
    return -1 if inv % 2 else 1


def _poly_mul(p, q, r, n):
    out = {}
    for (ka, la), ca in p.items():
        for (kb, lb), cb in q.items():
            key = (tuple(a + b for a, b in zip(ka, kb)), tuple(a + b for a, b in zip(la, lb)))
            out[key] = out.get(key, Fraction(0)) + ca * cb
    return {k: v for k, v in out.items() if v != 0}


# -- sampling search ----------------------------------------------------------


@dataclass(frozen=True)
class SearchReport:
    samples: int
    seed: int
    candidates: int
    violations: tuple = ()

    @property
    def found_violation(self) -> bool:
        return bool(self.violations)


def sampled_injectivity_search(
    A: RationalMatrix,
    B: RationalMatrix,
    S=None,
    samples: int = 1000,
    seed: int = 0,
    prec: int = 256,
) -> SearchReport:
    """Random search for (kappa, x, y) with f_kappa(x) = f_kappa(y), x != y, x - y in S.

    Pairs (x, y) are drawn as rationals with x - y in S (via an S-basis when S
    is a subspace; S = None means the full space). A collision exists for some
    positive kappa iff A diag(x^B - y^B) has a positive kernel vector; when B
    is integral this is decided exactly, otherwise a float filter with a
    Newton polish runs first. Violations count only if the verified relative
    residual sits below 1e-30 at 256-bit precision. Deterministic per seed.
    """
    from .engine import FullSpace, OrthantUnion, Subspace, evaluate_map
    from .ratmat import rank as _rank

    rng = random.Random(seed)
    m, r = A.rows, A.cols
    n = B.cols
    integral_B = all(v.denominator == 1 for row in B.entries for v in row)

    basis = None
    orthants = None
    if S is None or isinstance(S, FullSpace):
        pass
    elif isinstance(S, Subspace):
        if S.dim() == 0:
            return SearchReport(samples=samples, seed=seed, candidates=0)
        basis = S.image_presentation()
    elif isinstance(S, OrthantUnion):
        orthants = S.T
    else:
        raise TypeError("unsupported subset specification")

    def draw_fraction():
        return Fraction(rng.randint(-8, 8), rng.choice([1, 2, 3, 4]))

    Af = numpy.array([[float(v) for v in row] for row in A.entries])
    Bf = numpy.array([[float(v) for v in row] for row in B.entries])
    candidates = 0
    violations = []
    for _ in range(samples):
        if basis is not None:
            coeffs = [draw_fraction() for _ in range(basis.cols)]
            z = basis.apply(coeffs)
        elif orthants is not None:
            tau = rng.choice(orthants)
            z = tuple(s * abs(draw_fraction()) for s in tau)
        else:
            z = tuple(draw_fraction() for _ in range(n))
        y = tuple(Fraction(rng.randint(1, 12), rng.choice([1, 2])) for _ in range(n))
        x = tuple(a + b for a, b in zip(y, z))
        if x == y or any(v <= 0 for v in x):
            continue
        if integral_B:
            if not _screen_positive_kernel(Af, Bf, x, y):
                continue
            diffs = [_int_power(x, B.entries[j]) - _int_power(y, B.entries[j]) for j in range(r)]
            D = RationalMatrix(
                [[A.entries[i][j] * diffs[j] for j in range(r)] for i in range(m)], m, r
            )
            res = solve_strict(
                StrictSystem(nvars=r, equalities=D if m else None, comp_signs=SignVector([1] * r))
            )
            if not res.feasible:
                continue
            candidates += 1
            kq = res.witness
        else:
            kq = _float_collision_kappa(A, B, x, y)
            if kq is None:
                continue
            candidates += 1
        with mp.workprec(prec):
            xs = [mp.mpf(v.numerator) / mp.mpf(v.denominator) for v in x]
            ys = [mp.mpf(v.numerator) / mp.mpf(v.denominator) for v in y]
            vx, ex = evaluate_map(A, B, kq, xs, prec)
            vy, ey = evaluate_map(A, B, kq, ys, prec)
            resid = max(abs(a - b) for a, b in zip(vx, vy)) + ex + ey
            s = max(max(abs(v) for v in vx), mp.mpf(1))
            if resid / s < mp.mpf("1e-30"):
                violations.append((tuple(kq), x, y))
    return SearchReport(samples=samples, seed=seed, candidates=candidates, violations=tuple(violations))


def _int_power(x, exps):
    out = Fraction(1)
    for xi, e in zip(x, exps):
        out *= xi ** int(e)
    return out


def _null_basis(Af, Bf, x, y):
    xf = numpy.array([float(v) for v in x])
    yf = numpy.array([float(v) for v in y])
    d = numpy.exp(Bf @ numpy.log(xf)) - numpy.exp(Bf @ numpy.log(yf))
    D = Af * d
    _, sing, vt = numpy.linalg.svd(D)
    tol = 1e-9 * max(1.0, sing[0] if len(sing) else 0.0)
    return [vt[i] for i in range(len(vt)) if i >= len(sing) or sing[i] < tol]


def _screen_positive_kernel(Af, Bf, x, y):
    """Cheap float filter: can ker(A diag(x^B - y^B)) plausibly hold a positive vector?

    Only ever skips clear no-instances; anything ambiguous (a coordinate near
    zero, nullspace dimension above one) goes to the exact decision.
    """
    null = _null_basis(Af, Bf, x, y)
    if not null:
        return False
    if len(null) == 1:
        v = null[0]
        if numpy.all(numpy.abs(v) > 1e-9) and numpy.any(v > 0) and numpy.any(v < 0):
            return False
    return True


def _float_collision_kappa(A, B, x, y):
    """Float screen for a positive kappa with f_kappa(x) = f_kappa(y); exactified."""
    Af = numpy.array([[float(v) for v in row] for row in A.entries])
    Bf = numpy.array([[float(v) for v in row] for row in B.entries])
    xf = numpy.array([float(v) for v in x])
    yf = numpy.array([float(v) for v in y])
    d = numpy.exp(Bf @ numpy.log(xf)) - numpy.exp(Bf @ numpy.log(yf))
    D = Af * d
    _, sing, vt = numpy.linalg.svd(D) if D.size else (None, numpy.array([]), numpy.eye(A.cols))
    null = [vt[i] for i in range(len(vt)) if i >= len(sing) or sing[i] < 1e-10]
    for v in null:
        if numpy.all(v > 1e-9):
            return [Fraction(float(k)).limit_denominator(10**9) for k in v]
        if numpy.all(v < -1e-9):
            return [Fraction(float(-k)).limit_denominator(10**9) for k in v]
    return None
