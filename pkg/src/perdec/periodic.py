"""Discrete-time linear periodic systems with time-varying state dimension.

x(t+1) = A(t) x(t) + B(t) u(t),  y(t) = C(t) x(t) + D(t) u(t), all matrices
T-periodic and exact.  A(t) maps the n(t)-dimensional state into n(t+1)
dimensions, so A(t) is n(t+1) x n(t); inputs and outputs have constant size.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .errors import BadRange, NotOutputReachable, NotStable, ShapeError
from .poly import all_roots_in_open_disk

Mat = list[list[Fraction]]


def _fr_mats(mats: Sequence[Sequence[Sequence]]) -> list[Mat]:
    return [linalg.fr(m) for m in mats]


class PeriodicSystem:
    """Exact T-periodic state-space model."""

    def __init__(self, A, B, C, D):
        self.A = _fr_mats(A)
        self.B = _fr_mats(B)
        self.C = _fr_mats(C)
        self.D = _fr_mats(D)
        T = len(self.A)
        if not T or any(len(x) != T for x in (self.B, self.C, self.D)):
            raise ShapeError("A, B, C, D must share one period length")
        self.T = T
        self.dims = [len(self.A[t][0]) if self.A[t] else 0 for t in range(T)]
        self.m = len(self.B[0][0]) if self.B[0] and self.B[0][0] else len(self.D[0][0])
        self.p = len(self.C[0])
        for t in range(T):
            nt, nt1 = self.dims[t], self.dims[(t + 1) % T]
            if len(self.A[t]) != nt1:
                raise ShapeError(f"A[{t}] must have {nt1} rows")
            if len(self.B[t]) != nt1 or any(len(r) != self.m for r in self.B[t]):
                raise ShapeError(f"B[{t}] must be {nt1} x {self.m}")
            if len(self.C[t]) != self.p or any(len(r) != nt for r in self.C[t]):
                raise ShapeError(f"C[{t}] must be {self.p} x {nt}")
            if len(self.D[t]) != self.p or any(len(r) != self.m for r in self.D[t]):
                raise ShapeError(f"D[{t}] must be {self.p} x {self.m}")

    def __eq__(self, other):
        if not isinstance(other, PeriodicSystem):
            return NotImplemented
        return (self.A, self.B, self.C, self.D) == (other.A, other.B, other.C, other.D)

    def at(self, t: int) -> tuple[Mat, Mat, Mat, Mat]:
        t %= self.T
        return self.A[t], self.B[t], self.C[t], self.D[t]

    def dim(self, t: int) -> int:
        return self.dims[t % self.T]

    def default_horizon(self) -> int:
        """Steps that certify eventual behavior: twice the total state size
        across one period, plus the period."""
        return 2 * sum(self.dims) + self.T

    def shifted(self, tau: int) -> "PeriodicSystem":
        """The same system observed from time origin tau."""
        idx = [(tau + t) % self.T for t in range(self.T)]
        return PeriodicSystem(
            [self.A[i] for i in idx],
            [self.B[i] for i in idx],
            [self.C[i] for i in idx],
            [self.D[i] for i in idx],
        )

    def transition(self, t: int, s: int) -> Mat:
        """State transition map from time s to time t >= s."""
        if t < s:
            raise BadRange("transition needs t >= s")
        out = linalg.identity(self.dim(s))
        for k in range(s, t):
            out = linalg.matmul(self.A[k % self.T], out)
        return out

    def monodromy(self, t: int = 0) -> Mat:
        return self.transition(t + self.T, t)

    def markov(self, i: int, t: int) -> Mat:
        """Impulse response coefficient: y(t) response to an input at t - i."""
        if i < 0:
            raise BadRange("negative lag")
        if i == 0:
            return [row[:] for row in self.D[t % self.T]]
        phi = self.transition(t, t - i + 1)
        return linalg.matmul(self.C[t % self.T], linalg.matmul(phi, self.B[(t - i) % self.T]))

    def is_stable(self) -> bool:
        """All characteristic roots of the monodromy strictly inside the circle."""
        cp = linalg.char_poly(self.monodromy(0))
        return all_roots_in_open_disk(cp)

    def assert_stable(self):
        if not self.is_stable():
            raise NotStable(
                f"monodromy characteristic polynomial {linalg.char_poly(self.monodromy(0)).to_str()}"
            )

    def output_reachability_matrix(self, t: int, horizon: Optional[int] = None) -> Mat:
        n = self.default_horizon() if horizon is None else horizon
        out = [row[:] for row in self.D[t % self.T]]
        for i in range(1, n + 1):
            blk = self.markov(i, t)
            out = [r + b for r, b in zip(out, blk)]
        return out

    def is_output_reachable(self, horizon: Optional[int] = None) -> tuple[bool, Optional[int]]:
        """Full output rank from past inputs, checked at every phase.

        Returns (ok, first offending phase or None).
        """
        for t in range(self.T):
            if linalg.rank(self.output_reachability_matrix(t, horizon)) < self.p:
                return False, t
        return True, None

    def assert_output_reachable(self):
        ok, t = self.is_output_reachable()
        if not ok:
            raise NotOutputReachable(f"output rank deficient at phase {t}")

    def simulate(self, x0: Sequence, inputs: Sequence[Sequence], t0: int = 0):
        """Run the recursion; returns (states, outputs), states one longer."""
        x = [Fraction(v) for v in x0]
        if len(x) != self.dim(t0):
            raise ValueError(f"state at time {t0} must have size {self.dim(t0)}")
        states = [x]
        outputs = []
        for k, u in enumerate(inputs):
            t = t0 + k
            A, B, C, D = self.at(t)
            u = [Fraction(v) for v in u]
            outputs.append([a + b for a, b in zip(linalg.matvec(C, x), linalg.matvec(D, u))])
            x = [a + b for a, b in zip(linalg.matvec(A, x), linalg.matvec(B, u))]
            states.append(x)
        return states, outputs


class FeedbackLaw:
    """Periodic state feedback u(t) = F(t) x(t) + G(t) v(t)."""

    __slots__ = ("F", "G")

    def __init__(self, F: Sequence[Sequence[Sequence]], G: Sequence[Sequence[Sequence]]):
        self.F = _fr_mats(F)
        self.G = _fr_mats(G)
        if len(self.F) != len(self.G):
            raise ValueError("F and G must cover the same period")

    @property
    def T(self) -> int:
        return len(self.F)

    def is_regular(self) -> bool:
        """Square with every G(t) nonsingular."""
        for g in self.G:
            if len(g) != len(g[0]) or linalg.inverse(g) is None:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, FeedbackLaw):
            return NotImplemented
        return self.F == other.F and self.G == other.G


def apply_feedback(
    sys: PeriodicSystem,
    F: "Sequence[Sequence[Sequence]] | FeedbackLaw",
    G: Optional[Sequence[Sequence[Sequence]]] = None,
) -> PeriodicSystem:
    """Close the loop u = F(t) x + G(t) v; G may be nonsquare (fewer inputs)."""
    if isinstance(F, FeedbackLaw):
        if G is not None:
            raise ValueError("pass either a law or separate gain sequences")
        F, G = F.F, F.G
    F = _fr_mats(F)
    G = _fr_mats(G)
    if len(F) != sys.T or len(G) != sys.T:
        raise ValueError("gain sequences must have the system period")
    A2, B2, C2, D2 = [], [], [], []
    for t in range(sys.T):
        A, B, C, D = sys.at(t)
        if len(F[t]) != sys.m or any(len(r) != sys.dim(t) for r in F[t]):
            raise ShapeError(f"F[{t}] must be {sys.m} x {sys.dim(t)}")
        if len(G[t]) != sys.m:
            raise ShapeError(f"G[{t}] needs {sys.m} rows")
        A2.append(linalg.madd(A, linalg.matmul(B, F[t])))
        B2.append(linalg.matmul(B, G[t]))
        C2.append(linalg.madd(C, linalg.matmul(D, F[t])))
        D2.append(linalg.matmul(D, G[t]))
    return PeriodicSystem(A2, B2, C2, D2)


class DecoupledVerdict:
    """Outcome of the closed-loop decoupling check, first offense recorded."""

    __slots__ = ("ok", "reason", "detail")

    def __init__(self, ok: bool, reason: str = "", detail: str = ""):
        self.ok = ok
        self.reason = reason
        self.detail = detail

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "decoupled" if self.ok else f"not decoupled: {self.reason} ({self.detail})"


def verify_decoupled(sys: PeriodicSystem, horizon: Optional[int] = None) -> DecoupledVerdict:
    """Diagonal input-output behavior, stability, per-channel liveness."""
    if sys.m != sys.p:
        return DecoupledVerdict(False, "shape", f"{sys.m} inputs vs {sys.p} outputs")
    n = sys.default_horizon() if horizon is None else horizon
    live = [False] * sys.p
    for t in range(sys.T):
        for i in range(n + 1):
            mk = sys.markov(i, t)
            for r in range(sys.p):
                for c in range(sys.p):
                    if r != c and mk[r][c]:
                        return DecoupledVerdict(
                            False,
                            "cross-coupling",
                            f"markov lag {i} at phase {t}: entry ({r},{c}) = {mk[r][c]}",
                        )
                    if r == c and mk[r][c]:
                        live[r] = True
    if not all(live):
        ch = live.index(False)
        return DecoupledVerdict(False, "dead channel", f"output {ch} never responds")
    if not sys.is_stable():
        return DecoupledVerdict(
            False, "unstable", linalg.char_poly(sys.monodromy(0)).to_str()
        )
    return DecoupledVerdict(True)
