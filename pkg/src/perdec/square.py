"""Row-by-row decoupling for systems with as many inputs as outputs.

Solvability reads off the block-cyclic normal form: the problem is
solvable exactly when every block of the form is diagonal.  The
unimodular column transform that produced the form is then realized as
periodic state feedback through a constant gain matched against its
power series, and the closed loop is re-verified end to end.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .cyclic import CyclicForm, cyclic_hermite
from .errors import (
    ConstructionFailed,
    DimensionMismatch,
    NoConstantSolution,
    NotBlockDiagonal,
    NotSolvable,
    SingularMatrix,
)
from .periodic import FeedbackLaw, PeriodicSystem, apply_feedback, verify_decoupled
from .ratmat import RatMat

Mat = list[list[Fraction]]


def square_solvable(delta_bar: RatMat, p: int, T: int) -> bool:
    """True iff every p x p block of the normal form is diagonal."""
    if delta_bar.rows != p * T or delta_bar.cols != p * T:
        raise ValueError(f"form must be {p * T} x {p * T}")
    for br in range(T):
        for bc in range(T):
            for i in range(p):
                for j in range(p):
                    if i != j and delta_bar[br * p + i, bc * p + j]:
                        return False
    return True


class RealizationResult:
    """Constant gains realizing a compensator, with the verified sign."""

    __slots__ = ("kbar", "fbar", "gbar", "law", "convention")

    def __init__(self, kbar: Mat, fbar: Mat, gbar: Mat, law: FeedbackLaw, convention: str):
        self.kbar = kbar
        self.fbar = fbar
        self.gbar = gbar
        self.law = law
        self.convention = convention


def _series_blocks(mat: RatMat, count: int) -> list[Mat]:
    """Coefficient matrices of z^-1 .. z^-count for a strictly proper matrix."""
    per_entry = [
        [mat[r, c].series_zinv(count + 1) for c in range(mat.cols)]
        for r in range(mat.rows)
    ]
    out = []
    for j in range(1, count + 1):
        out.append([[per_entry[r][c][j] for c in range(mat.cols)] for r in range(mat.rows)])
    return out


def _extract_blocks(big: Mat, cy: CyclicForm, row_size: int) -> list[Mat]:
    """Cut a block-diagonal gain into its per-phase blocks."""
    out = []
    for i in range(cy.T):
        rows = big[i * row_size : (i + 1) * row_size]
        lo = cy.starts[i]
        out.append([r[lo : lo + cy.sizes[i]] for r in rows])
    return out


def _check_block_diagonal(big: Mat, cy: CyclicForm, row_size: int, what: str):
    bad = []
    for r, row in enumerate(big):
        i = r // row_size
        lo, hi = cy.starts[i], cy.starts[i] + cy.sizes[i]
        for c, v in enumerate(row):
            if v and not (lo <= c < hi):
                bad.append((r, c))
    if bad:
        raise NotBlockDiagonal(f"{what} has cross-phase entries at {bad}")


def realize_compensator(
    target: RatMat,
    cy: CyclicForm,
    convention: str = "direct",
    lbar: Optional[Sequence[Sequence]] = None,
) -> RealizationResult:
    """Realize a unimodular compensator as constant feedback gains.

    The strictly proper part of the compensator equation must equal
    K-bar times the input-to-state transfer; K-bar is recovered by
    matching power-series coefficients, solved as one unconstrained
    linear system and then audited for block-diagonality.
    """
    T, m, p = cy.T, cy.m, cy.p
    n_total = cy.total
    sbar = cy.input_to_state()
    if convention == "direct":
        inv = target.inverse()
        if inv is None:
            raise SingularMatrix("compensator is singular")
        left = inv
        lconst = None
    elif convention == "left":
        left = target
        if lbar is None:
            raise ValueError("left convention needs the constant right side")
        lconst = linalg.fr(lbar)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    strict = left - RatMat.from_scalar(left.value_at_inf())

    # power-series match K Abar^(j-1) Bbar = j-th coefficient, j = 1..n
    markov = []
    cur = [row[:] for row in cy.B]
    for _ in range(2 * n_total):
        markov.append(cur)
        cur = linalg.matmul(cy.A, cur)
    coeffs = _series_blocks(strict, 2 * n_total)

    width = strict.cols
    eqs = []
    for j in range(n_total):
        for c in range(width):
            eqs.append([markov[j][s][c] for s in range(n_total)])
    rhs = []
    for j in range(n_total):
        for c in range(width):
            rhs.append([coeffs[j][r][c] for r in range(strict.rows)])
    sol = linalg.solve_matrix(eqs, rhs)
    if sol is None:
        raise NoConstantSolution("series coefficients are not matchable")
    kbar = linalg.transpose(sol)
    for j in range(2 * n_total):
        if linalg.matmul(kbar, markov[j]) != coeffs[j]:
            raise NoConstantSolution(f"series mismatch at lag {j + 1}")
    _check_block_diagonal(kbar, cy, strict.rows // T, "constant gain")

    if convention == "direct":
        ginf = target.value_at_inf()
        gbar = ginf
        expected = target
    else:
        vinf = target.value_at_inf()
        vinf_inv = linalg.inverse(vinf)
        if vinf_inv is None:
            raise SingularMatrix("compensator constant part is singular")
        ginf = vinf_inv
        gbar = linalg.matmul(vinf_inv, lconst)
        tinv = target.inverse()
        if tinv is None:
            raise SingularMatrix("compensator is singular")
        expected = tinv * RatMat.from_scalar(lconst)

    g_width = len(gbar[0]) // T
    bad = [
        (r, c)
        for r, row in enumerate(gbar)
        for c, v in enumerate(row)
        if v and c // g_width != r // m
    ]
    if bad:
        raise NotBlockDiagonal(f"input gain has cross-phase entries at {bad}")

    eye = RatMat.identity(m * T)
    g_rm = RatMat.from_scalar(gbar)
    for sign, name in ((-1, "proof"), (1, "flipped")):
        fbar = linalg.mscale(linalg.matmul(ginf, kbar), sign)
        loop = (eye - RatMat.from_scalar(fbar) * sbar).inverse()
        if loop is not None and loop * g_rm == expected:
            # per-phase blocks, reordered to absolute time
            F = [None] * T
            G = [None] * T
            fb = _extract_blocks(fbar, cy, m)
            for i in range(T):
                t = (cy.tau + i) % T
                F[t] = fb[i]
                G[t] = [
                    row[i * g_width : (i + 1) * g_width]
                    for row in gbar[i * m : (i + 1) * m]
                ]
            return RealizationResult(kbar, fbar, gbar, FeedbackLaw(F, G), name)
    raise ConstructionFailed("compensator-identity", "neither sign verifies")


class DecoupleResult:
    """Synthesized law, the closed loop it produces, and a replay report."""

    __slots__ = ("law", "closed", "report")

    def __init__(self, law: FeedbackLaw, closed: PeriodicSystem, report: dict):
        self.law = law
        self.closed = closed
        self.report = report


def decouple_square(sys: PeriodicSystem, tau: int = 0) -> DecoupleResult:
    """Full synthesis for m = p: test solvability and build the gains."""
    if sys.m != sys.p:
        raise DimensionMismatch(
            f"{sys.m} inputs vs {sys.p} outputs: use the nonsquare path"
        )
    sys.assert_stable()
    sys.assert_output_reachable()
    cy = CyclicForm(sys, tau)
    wbar = cy.transfer()
    her = cyclic_hermite(wbar, sys.T, sys.p, sys.m)
    if not square_solvable(her.h, sys.p, sys.T):
        detail = "off-diagonal block entries in the normal form"
        if her.unreduced:
            detail += f"; positions left unreduced: {her.unreduced}"
        raise NotSolvable(detail)
    real = realize_compensator(her.u, cy, "direct")
    law = real.law
    closed = apply_feedback(sys, law)
    verdict = verify_decoupled(closed)
    if not verdict:
        raise ConstructionFailed("closed-loop-check", verdict.detail)
    closed_tf = CyclicForm(closed, tau).transfer()
    if closed_tf != her.h:
        raise ConstructionFailed(
            "closed-loop-transfer", "loop does not reproduce the normal form"
        )
    report = {
        "tau": tau,
        "wbar": wbar,
        "delta": her.h,
        "ubar": her.u,
        "unreduced": her.unreduced,
        "kbar": real.kbar,
        "fbar": real.fbar,
        "gbar": real.gbar,
        "sign_convention": real.convention,
        "law": law,
        "closed_transfer": closed_tf,
        "verdict": verdict,
    }
    return DecoupleResult(law, closed, report)
