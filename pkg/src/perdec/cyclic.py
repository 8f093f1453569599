"""Block-cyclic embeddings of periodic systems and structured reductions.

A T-periodic system observed from a time origin tau embeds into one
time-invariant system whose matrices carry a block-cyclic sparsity: every
entry of block (i, j) has the shape h(z^T) * z^-gamma with
gamma = (i - j) mod T.  Arithmetic that preserves this shape works in the
compressed variable w = z^T; division with remainder wraps the exponent
gap around the period.  The Hermite reduction here never mixes columns
across incompatible phases, so its transformation keeps the sparsity.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .errors import NotOverS, StructureError
from .periodic import PeriodicSystem
from .poly import Poly
from .ratfun import RatFun, s_divide
from .ratmat import RatMat, apply_col_ops, hermite_form


def gamma_of(i: int, j: int, T: int) -> int:
    """Exponent slot of block (i, j) in a block-cyclic matrix."""
    return (i - j) % T


class CyclicForm:
    """Time-invariant embedding of a periodic system at time origin tau.

    State block i carries phase tau + i; the one-step maps sit on the block
    subdiagonal with the last phase wrapping into the corner.
    """

    def __init__(self, sys: PeriodicSystem, tau: int = 0):
        T = sys.T
        self.T = T
        self.tau = tau % T
        self.m = sys.m
        self.p = sys.p
        self.sizes = [sys.dim(self.tau + i) for i in range(T)]
        total = sum(self.sizes)
        self.total = total
        starts = [0]
        for s in self.sizes:
            starts.append(starts[-1] + s)
        self.starts = starts

        A = linalg.zeros(total, total)
        B = linalg.zeros(total, T * sys.m)
        C = linalg.zeros(T * sys.p, total)
        D = linalg.zeros(T * sys.p, T * sys.m)
        for i in range(T):
            src = (self.tau + i) % T
            dst = (i + 1) % T
            Ai, Bi, Ci, Di = sys.A[src], sys.B[src], sys.C[src], sys.D[src]
            r0, c0 = starts[dst], starts[i]
            for r in range(len(Ai)):
                for c in range(len(Ai[0]) if Ai else 0):
                    A[r0 + r][c0 + c] = Ai[r][c]
            for r in range(len(Bi)):
                for c in range(sys.m):
                    B[r0 + r][i * sys.m + c] = Bi[r][c]
            for r in range(sys.p):
                for c in range(len(Ci[0]) if Ci else 0):
                    C[i * sys.p + r][starts[i] + c] = Ci[r][c]
            for r in range(sys.p):
                for c in range(sys.m):
                    D[i * sys.p + r][i * sys.m + c] = Di[r][c]
        self.A, self.B, self.C, self.D = A, B, C, D

    def resolvent(self) -> RatMat:
        inv = RatMat.zI_minus(self.A).inverse()
        if inv is None:
            raise StructureError("zI - A is singular")
        return inv

    def input_to_state(self) -> RatMat:
        return self.resolvent() * RatMat.from_scalar(self.B)

    def transfer(self) -> RatMat:
        return RatMat.from_scalar(self.C) * self.input_to_state() + RatMat.from_scalar(self.D)

    def state_block(self, i: int) -> tuple[int, int]:
        """Row range of state block i."""
        return self.starts[i], self.starts[i + 1]

    def shifted(self, k: int = 1) -> "CyclicForm":
        """Embedding at time origin tau + k, obtained by block permutation."""
        T = self.T
        k %= T
        out = object.__new__(CyclicForm)
        out.T = T
        out.tau = (self.tau + k) % T
        out.m = self.m
        out.p = self.p
        out.sizes = [self.sizes[(i + k) % T] for i in range(T)]
        out.total = self.total
        starts = [0]
        for sz in out.sizes:
            starts.append(starts[-1] + sz)
        out.starts = starts
        xmap: list[int] = []
        for i in range(T):
            old = (i + k) % T
            xmap.extend(range(self.starts[old], self.starts[old] + self.sizes[old]))
        umap = [((i + k) % T) * self.m + j for i in range(T) for j in range(self.m)]
        ymap = [((i + k) % T) * self.p + j for i in range(T) for j in range(self.p)]
        n, mi, pi = self.total, T * self.m, T * self.p
        out.A = [[self.A[xmap[r]][xmap[c]] for c in range(n)] for r in range(n)]
        out.B = [[self.B[xmap[r]][umap[c]] for c in range(mi)] for r in range(n)]
        out.C = [[self.C[ymap[r]][xmap[c]] for c in range(n)] for r in range(pi)]
        out.D = [[self.D[ymap[r]][umap[c]] for c in range(mi)] for r in range(pi)]
        return out


def sampled_transfer(sys: PeriodicSystem, i: int, tau: int = 0) -> RatMat:
    """Transfer function of the response at phase tau to inputs i steps back.

    Collects the impulse coefficients at lags congruent to i as a function
    of z^T; lag class 0 includes the direct term.
    """
    T = sys.T
    if not 0 <= i < T:
        raise ValueError("lag class must satisfy 0 <= i < T")
    psi = sys.monodromy(tau)
    res = RatMat.zI_minus(psi).inverse()
    C = RatMat.from_scalar(sys.C[tau % T])
    if i == 0:
        phi = sys.transition(tau, tau - T + 1)
        core = res * RatMat.from_scalar(linalg.matmul(phi, sys.B[(tau - T) % T]))
        h = RatMat.from_scalar(sys.D[tau % T]) + C * core
    else:
        phi = sys.transition(tau, tau - i + 1)
        zres = RatFun(Poly.z()) * res
        core = zres * RatMat.from_scalar(linalg.matmul(phi, sys.B[(tau - i) % T]))
        h = C * core
    return h.map(lambda f: f.expand(T, 0))


def cycle_signal(signal: Sequence[Sequence], tau: int, T: int) -> list[list[Fraction]]:
    """Embed a signal starting at time tau into rotating-block stacked form.

    Sample k lands in block (tau + k - tau) mod T = k mod T of a vector of
    T stacked copies; every other block is zero, so each time point has a
    unique nonzero subvector.
    """
    out = []
    for k, v in enumerate(signal):
        w = len(v)
        vec = [Fraction(0)] * (T * w)
        b = k % T
        for j in range(w):
            vec[b * w + j] = Fraction(v[j])
        out.append(vec)
    return out


def uncycle_signal(stacked: Sequence[Sequence], tau: int, T: int, width: int) -> list[list[Fraction]]:
    """Extract the active block per time point; nonzero elsewhere is an error."""
    out = []
    for k, vec in enumerate(stacked):
        if len(vec) != T * width:
            raise ValueError("stacked vector width mismatch")
        b = k % T
        for j, v in enumerate(vec):
            if j // width != b and v:
                raise ValueError(f"sample {k} is live outside its phase block")
        out.append([Fraction(v) for v in vec[b * width : (b + 1) * width]])
    return out


def check_cyclic_structure(mat: RatMat, p: int, m: int, T: int) -> bool:
    """True iff mat has the rotating-block transfer shape.

    Entries of block (i, j) must be proper and equal a function of z^T
    times z^-((i-j) mod T); properness then makes the matrix block
    diagonal at infinity.
    """
    if mat.rows != T * p or mat.cols != T * m:
        return False
    for r in range(mat.rows):
        for c in range(mat.cols):
            e = mat[r, c]
            if not e:
                continue
            if not e.is_proper():
                return False
            if e.compress(T, gamma_of(r // p, c // m, T)) is None:
                return False
    return True


def structured_divide(
    x: RatFun, d: RatFun, gamma_x: int, gamma_d: int, T: int
) -> tuple[RatFun, RatFun]:
    """Division with remainder between entries of two exponent slots.

    Returns (q, r) with x = q*d + r, r in the slot of x, q in the slot
    (gamma_x - gamma_d) mod T.  When the divisor slot exceeds the dividend
    slot the quotient wraps a full period, which the compressed divisor
    absorbs as one extra power.
    """
    xw = x.compress(T, gamma_x)
    dw = d.compress(T, gamma_d)
    if xw is None or dw is None:
        raise StructureError("operand does not live in its exponent slot")
    if not dw:
        raise ZeroDivisionError("structured division by zero")
    sigma = 1 if gamma_d > gamma_x else 0
    d_eff = dw * RatFun.z_inv(sigma) if sigma else dw
    q_w, r_w = s_divide(xw, d_eff)
    return q_w.expand(T, (gamma_x - gamma_d) % T), r_w.expand(T, gamma_x)


class CyclicHermiteResult:
    __slots__ = ("h", "u", "ops", "passes", "unreduced")

    def __init__(self, h: RatMat, u: RatMat, ops: list, passes: int, unreduced: list):
        self.h = h
        self.u = u
        self.ops = ops
        self.passes = passes
        self.unreduced = unreduced


def cyclic_hermite(
    m: RatMat,
    T: int,
    rows_per_block: int,
    cols_per_block: int,
    max_passes: Optional[int] = None,
) -> CyclicHermiteResult:
    """Hermite-type reduction by structure-preserving column operations.

    Diagonal blocks are brought to Hermite form over the compressed ring;
    row sweeps then pick the minimal-order locally-diagonal entry of each
    row as the lead, normalize it, and reduce the other row entries to
    residues.  Locally diagonal entries of off-diagonal blocks are the
    skeleton of the form and are never reduced away.  Iterates to a
    fixpoint.  Reductions through distinct rows can feed each other
    indefinitely in contrived cases; after the pass cap the positions
    still carrying a nonzero quotient are reported in ``unreduced``
    instead of being chased further.
    """
    rpb, cpb = rows_per_block, cols_per_block
    if not check_cyclic_structure(m, rpb, cpb, T):
        raise StructureError("matrix does not have the block-cyclic shape")
    if not m.in_ring():
        raise NotOverS("matrix has entries outside the stable ring")
    h = m.copy()
    ops: list = []

    def swap(i: int, j: int):
        if i == j:
            return
        for row in h.a:
            row[i], row[j] = row[j], row[i]
        ops.append(("swap", i, j))

    def scale(j: int, u: RatFun):
        if u == RatFun.one():
            return
        for row in h.a:
            row[j] = row[j] * u
        ops.append(("scale", j, u))

    def addmul(dst: int, src: int, coef: RatFun):
        if not coef:
            return
        for row in h.a:
            row[dst] = row[dst] + coef * row[src]
        ops.append(("addmul", dst, src, coef))

    def block_entry(b: int, lr: int, lc: int) -> RatFun:
        return h[b * rpb + lr, b * cpb + lc]

    def diag_block_ok(b: int) -> bool:
        for lr in range(rpb):
            for lc in range(lr + 1, cpb):
                if block_entry(b, lr, lc):
                    return False
            if lr >= cpb:
                continue
            e = block_entry(b, lr, lr)
            if not e:
                continue
            ew = e.compress(T, 0)
            unit, nf = ew.normal_form()
            if unit != RatFun.one():
                return False
            for lc in range(lr):
                le = block_entry(b, lr, lc)
                if le:
                    q, _ = s_divide(le.compress(T, 0), ew)
                    if q:
                        return False
        return True

    def fix_diag_block(b: int):
        w_block = RatMat(
            [[block_entry(b, lr, lc).compress(T, 0) for lc in range(cpb)] for lr in range(rpb)]
        )
        res = hermite_form(w_block)
        base = b * cpb
        for op in res.ops:
            if op[0] == "swap":
                swap(base + op[1], base + op[2])
            elif op[0] == "scale":
                scale(base + op[1], op[2].expand(T, 0))
            else:
                addmul(base + op[1], base + op[2], op[3].expand(T, 0))

    def sweep(apply: bool) -> list[tuple[int, int]]:
        """One row pass; with apply False just report non-residue positions."""
        pending = []
        for r in range(h.rows):
            br, lr = divmod(r, rpb)
            if lr >= cpb:
                continue
            cands = [
                bc * cpb + lr for bc in range(T) if h[r, bc * cpb + lr]
            ]
            if not cands:
                continue
            lead = min(cands, key=lambda c: (h[r, c].order(), c // cpb))
            bl = lead // cpb
            gl = gamma_of(br, bl, T)
            ew = h[r, lead].compress(T, gl)
            unit, _ = ew.normal_form()
            if unit != RatFun.one():
                if not apply:
                    pending.append((r, lead))
                    continue
                scale(lead, (RatFun.one() / unit).expand(T, 0))
            for c in range(h.cols):
                if c == lead or not h[r, c]:
                    continue
                bc, lc = divmod(c, cpb)
                if lc == lr and bc != br:
                    continue  # skeleton entry of another phase pairing
                q, _ = structured_divide(h[r, c], h[r, lead], gamma_of(br, bc, T), gl, T)
                if q and not apply:
                    pending.append((r, c))
                elif apply:
                    addmul(c, lead, -q)
        return pending

    cap = max_passes if max_passes is not None else 2 * T * max(rpb, cpb) + 4
    passes = 0
    unreduced: list[tuple[int, int]] = []
    while True:
        if passes >= cap:
            unreduced = sweep(apply=False)
            for b in range(T):
                if not diag_block_ok(b):
                    unreduced.append((b * rpb, b * cpb))
            break
        passes += 1
        before = len(ops)
        for b in range(T):
            if not diag_block_ok(b):
                fix_diag_block(b)
        sweep(apply=True)
        if len(ops) == before:
            break
    u = apply_col_ops(RatMat.identity(h.cols), ops)
    return CyclicHermiteResult(h, u, ops, passes, unreduced)
