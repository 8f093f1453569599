"""Row-by-row decoupling when there are more inputs than outputs.

The analysis side extracts, from the cyclic Hermite form of the open-loop
transfer, the delay and unstable-content lists of every output channel, the
interactor of the selected primary part, and the lengths of the feed-forward
chains that secondary inputs drive through the unobservable subspace.  The
synthesis side searches candidate delay-budget lists against the solvability
conditions, routes each required delay through a sequence of chains, builds a
unimodular compensator around that routing and realizes it as periodic
constant gains, verifying every identity exactly along the way.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Iterator, Optional, Sequence

from . import linalg
from .cyclic import CyclicForm, CyclicHermiteResult, cyclic_hermite
from .errors import (
    ConstructionFailed,
    DimensionMismatch,
    Inconclusive,
    NotFound,
    NotOverS,
    SingularDeltaStar,
    SingularMatrix,
    ZeroColumn,
)
from .lists import index_set, is_sublist, dominates, joint_bounded_lists, list_sum, roundup_multiples
from .periodic import FeedbackLaw, PeriodicSystem, apply_feedback, verify_decoupled
from .poly import Poly, split_stability
from .ratmat import RatMat, invariant_factor_orders
from .ratfun import RatFun
from .square import DecoupleResult, _series_blocks, realize_compensator

Mat = list[list[Fraction]]
Vec = list[Fraction]
IntRows = tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------- invariants


def _defining_row(delta_bar: RatMat, p: int, m: int, T: int, i: int, j: int) -> int:
    """Row of the entry that defines channel (i, j) in the normal form.

    The locally diagonal entry of the diagonal block wins when nonzero;
    otherwise the minimum-order locally diagonal entry of another block
    row, and failing that the minimum-order entry of the whole column.
    """
    col = i * m + j
    r0 = i * p + j
    if delta_bar[r0, col]:
        return r0
    best: Optional[tuple[int, int]] = None
    for br in range(T):
        if br == i:
            continue
        e = delta_bar[br * p + j, col]
        if e:
            key = (e.order(), br * p + j)
            if best is None or key < best:
                best = key
    if best is None:
        for r in range(p * T):
            e = delta_bar[r, col]
            if e:
                key = (e.order(), r)
                if best is None or key < best:
                    best = key
    if best is None:
        raise ZeroColumn(f"input channel ({i},{j}) does not reach any output")
    return best[1]


def first_decoupling_data(
    delta_bar: RatMat, p: int, m: int, T: int
) -> tuple[tuple[tuple[Poly, ...], ...], IntRows]:
    """Unstable content d and delay list of every primary channel."""
    d_rows = []
    delta_rows = []
    for i in range(T):
        ds, os_ = [], []
        for j in range(p):
            r = _defining_row(delta_bar, p, m, T, i, j)
            entry = delta_bar[r, i * m + j]
            _, nf = entry.normal_form()
            ds.append(nf.num)
            os_.append(entry.order())
        d_rows.append(tuple(ds))
        delta_rows.append(tuple(os_))
    return tuple(d_rows), tuple(delta_rows)


def build_delta_star(
    delta_bar: RatMat,
    d: Sequence[Sequence[Poly]],
    delta: Sequence[Sequence[int]],
    p: int,
    m: int,
    T: int,
) -> RatMat:
    """Primary-column square part with the unselected skeleton entries annulled.

    Keeps every entry of the primary columns except locally diagonal entries
    of off-diagonal block rows that were not selected as defining; those are
    deferred to the chain side of the synthesis.
    """
    rows = p * T
    out = [[RatFun.zero()] * rows for _ in range(rows)]
    for i in range(T):
        for j in range(p):
            keep = _defining_row(delta_bar, p, m, T, i, j)
            entry = delta_bar[keep, i * m + j]
            if entry.order() != delta[i][j] or entry.normal_form()[1].num != d[i][j]:
                raise SingularDeltaStar(
                    f"channel ({i},{j}) data disagrees with the normal form"
                )
            src = i * m + j
            dst = i * p + j
            for r in range(rows):
                e = delta_bar[r, src]
                if not e:
                    continue
                if r % p == j and r // p != i and r != keep:
                    continue
                out[r][dst] = e
    mat = RatMat(out)
    if not mat.det():
        raise SingularDeltaStar("selected primary part is singular")
    return mat


def interactor_data(
    delta_star: RatMat, p: int, T: int
) -> tuple[RatMat, tuple[tuple[Poly, ...], ...], IntRows]:
    """Inverse of the primary part with its column pole data.

    Returns the interactor, the monic unstable factor f each column carries
    in its denominators, and the order phi the column reaches at infinity
    once f is cleared.
    """
    inter = delta_star.inverse()
    if inter is None:
        raise SingularDeltaStar("selected primary part is singular")
    if delta_star * inter != RatMat.identity(p * T):
        raise SingularMatrix("inverse audit failed")
    f_rows, phi_rows = [], []
    for i in range(T):
        fs, ps = [], []
        for j in range(p):
            c = i * p + j
            fac = Poly.one()
            excess: Optional[int] = None
            for r in range(p * T):
                e = inter[r, c]
                if not e:
                    continue
                fac = fac.lcm(split_stability(e.den).unstable)
                ex = e.num.deg - e.den.deg
                excess = ex if excess is None else max(excess, ex)
            fs.append(fac.monic())
            ps.append(fac.deg + (0 if excess is None else excess))
        f_rows.append(tuple(fs))
        phi_rows.append(tuple(ps))
    return inter, tuple(f_rows), tuple(phi_rows)


def _target_diagonal(
    f: Sequence[Sequence[Poly]],
    delta: Sequence[Sequence[int]],
    epsilon: Sequence[Sequence[int]],
    p: int,
    T: int,
) -> RatMat:
    """Diagonal closed-loop target diag(f / z^(delta + epsilon))."""
    out = RatMat.zeros(p * T, p * T)
    for i in range(T):
        for j in range(p):
            c = i * p + j
            out.a[c][c] = RatFun(f[i][j], Poly.z(delta[i][j] + epsilon[i][j]))
    return out


def _delayed_interactor(
    interactor: RatMat,
    f: Sequence[Sequence[Poly]],
    delta: Sequence[Sequence[int]],
    epsilon: Sequence[Sequence[int]],
    p: int,
    T: int,
) -> RatMat:
    z1 = interactor * _target_diagonal(f, delta, epsilon, p, T)
    if not z1.in_ring():
        raise NotOverS("delayed interactor leaves the ring; the delay list is too small")
    return z1


def omega_of(
    interactor: RatMat,
    f: Sequence[Sequence[Poly]],
    delta: Sequence[Sequence[int]],
    epsilon: Sequence[Sequence[int]],
    p: int,
    T: int,
) -> IntRows:
    """Invariant-factor orders of the delayed interactor, grouped per block.

    Each diagonal p-by-p block contributes its orders sorted nonincreasing.
    A singular diagonal block leaves the lists undefined.
    """
    z1 = _delayed_interactor(interactor, f, delta, epsilon, p, T)
    out = []
    for i in range(T):
        rows = range(i * p, (i + 1) * p)
        orders = invariant_factor_orders(z1.submatrix(rows, rows))
        if len(orders) < p:
            raise NotFound(f"diagonal block {i} of the delayed interactor is singular")
        out.append(tuple(sorted(orders, reverse=True)))
    return tuple(out)


# ------------------------------------------------------------------- chains


class ChainDescriptor:
    """One feed-forward chain grown from a secondary input slot.

    ``states`` lists (phase, vector) pairs inside the unobservable family;
    the first ``free_length`` of them receive no primary-input feed.
    """

    __slots__ = ("block", "slot", "states", "free_length")

    def __init__(self, block: int, slot: int, states: list, free_length: int):
        self.block = block
        self.slot = slot
        self.states = states
        self.free_length = free_length

    @property
    def length(self) -> int:
        return len(self.states)

    @property
    def coupled(self) -> bool:
        return self.free_length < len(self.states)

    def __repr__(self):
        return (
            f"ChainDescriptor(block={self.block}, slot={self.slot}, "
            f"length={self.length}, free={self.free_length})"
        )


def _unobservable_family(sys: PeriodicSystem) -> list[list[Vec]]:
    """Largest family N(t) in ker C(t) with A(t) N(t) inside N(t+1)."""
    T = sys.T
    basis = [linalg.nullspace(sys.C[t]) for t in range(T)]
    while True:
        changed = False
        for t in range(T):
            bt = basis[t]
            if not bt:
                continue
            nxt = basis[(t + 1) % T]
            imgs = [linalg.matvec(sys.A[t], v) for v in bt]
            ann = linalg.nullspace(nxt) if nxt else linalg.identity(sys.dim(t + 1))
            if not ann:
                continue
            rows = [[sum(w[r] * img[r] for r in range(len(w))) for img in imgs] for w in ann]
            ker = linalg.nullspace(rows)
            if len(ker) < len(bt):
                basis[t] = [
                    [sum(co[c] * bt[c][r] for c in range(len(bt))) for r in range(len(bt[0]))]
                    for co in ker
                ]
                changed = True
        if not changed:
            return basis


def _dependent(used: list[Vec], v: Vec) -> bool:
    if not used:
        return False
    return linalg.rank(used + [v]) == linalg.rank(used)


def _complete_basis(vectors: list[Vec], n: int) -> list[Vec]:
    """Extend independent vectors to a basis with standard vectors, greedily."""
    basis = [v[:] for v in vectors]
    for r in range(n):
        if len(basis) == n:
            break
        e = [Fraction(int(c == r)) for c in range(n)]
        if linalg.rank(basis + [e]) > len(basis):
            basis.append(e)
    return basis


def _is_fed(sys: PeriodicSystem, used: dict, phase: int, vec: Vec, p: int, T: int) -> bool:
    """Does some primary input column load this chain state directly."""
    basis = _complete_basis(used[phase], len(vec))
    pos = used[phase].index(vec)
    bprev = sys.B[(phase - 1) % T]
    for j in range(p):
        col = [row[j] for row in bprev]
        if not any(col):
            continue
        coords = linalg.coords_in_basis(basis, col)
        if coords is not None and coords[pos]:
            return True
    return False


def _grow_chains(sys: PeriodicSystem, cy: CyclicForm, family: list[list[Vec]]) -> list[ChainDescriptor]:
    T, m, p = cy.T, cy.m, cy.p
    q = m - p
    used: dict[int, list[Vec]] = {t: [] for t in range(T)}
    grown: list[tuple[int, int, list]] = []
    for i in range(T):
        t_in = (cy.tau + i) % T
        t_next = (t_in + 1) % T
        for k in range(q):
            head = [row[p + k] for row in sys.B[t_in]]
            feed = [row[p + k] for row in sys.D[t_in]]
            states: list[tuple[int, Vec]] = []
            ok = (
                any(head)
                and not any(feed)
                and linalg.coords_in_basis(family[t_next], head) is not None
                and not _dependent(used[t_next], head)
            )
            if ok:
                ph, vec = t_next, head
                while True:
                    states.append((ph, vec))
                    used[ph].append(vec)
                    nxt = linalg.matvec(sys.A[ph], vec)
                    ph2 = (ph + 1) % T
                    if not any(nxt) or _dependent(used[ph2], nxt):
                        break
                    ph, vec = ph2, nxt
            grown.append((i, k, states))
    chains = []
    for i, k, states in grown:
        free = len(states)
        for idx, (ph, vec) in enumerate(states):
            if _is_fed(sys, used, ph, vec, p, T):
                free = idx
                break
        chains.append(ChainDescriptor(i, k, states, free))
    return chains


class StandardForm:
    """Feedback-transformed system whose transfer equals the normal form."""

    __slots__ = ("law", "system", "cyclic", "sigma", "sigma_free", "chains", "transform")

    def __init__(self, law, system, cyclic, sigma, sigma_free, chains, transform):
        self.law = law
        self.system = system
        self.cyclic = cyclic
        self.sigma = sigma
        self.sigma_free = sigma_free
        self.chains = chains
        self.transform = transform


def _identity_law(sys: PeriodicSystem) -> FeedbackLaw:
    F = [linalg.zeros(sys.m, sys.dim(t)) for t in range(sys.T)]
    G = [linalg.identity(sys.m) for _ in range(sys.T)]
    return FeedbackLaw(F, G)


def standard_form(
    sys: PeriodicSystem, cy: CyclicForm, hermite: CyclicHermiteResult
) -> StandardForm:
    """Absorb the Hermite multiplier into feedback and read off the chains."""
    T, m = sys.T, sys.m
    if hermite.u == RatMat.identity(m * T):
        law = _identity_law(sys)
        sys2, cy2 = sys, cy
    else:
        law = realize_compensator(hermite.u, cy, "direct").law
        sys2 = apply_feedback(sys, law)
        cy2 = CyclicForm(sys2, cy.tau)
        if cy2.transfer() != hermite.h:
            raise ConstructionFailed(
                "standard-form", "feedback does not reproduce the normal form"
            )
    family = _unobservable_family(sys2)
    chains = _grow_chains(sys2, cy2, family)
    q = m - sys.p
    sigma = tuple(
        tuple(chains[i * q + k].length for k in range(q)) for i in range(T)
    )
    sigma_free = tuple(
        tuple(chains[i * q + k].free_length for k in range(q)) for i in range(T)
    )
    transform = tuple(linalg.identity(sys2.dim(t)) for t in range(T))
    return StandardForm(law, sys2, cy2, sigma, sigma_free, chains, transform)


class DecouplingInvariants:
    """Channel invariants of the analysis plus the context synthesis needs.

    ``delta_bar``, ``chains`` and ``cyclic`` are carried along so candidate
    screening and compensator construction can run without recomputing the
    normal form or the standard-form system.
    """

    __slots__ = (
        "d",
        "delta",
        "sigma",
        "sigma_free",
        "f",
        "phi",
        "delta_star",
        "interactor",
        "delta_bar",
        "chains",
        "cyclic",
    )

    def __init__(
        self,
        d,
        delta,
        sigma,
        sigma_free,
        f,
        phi,
        delta_star,
        interactor,
        delta_bar,
        chains,
        cyclic,
    ):
        self.d = d
        self.delta = delta
        self.sigma = sigma
        self.sigma_free = sigma_free
        self.f = f
        self.phi = phi
        self.delta_star = delta_star
        self.interactor = interactor
        self.delta_bar = delta_bar
        self.chains = chains
        self.cyclic = cyclic


# ---------------------------------------------------------------- screening


class CandidateLists:
    """One choice of delay and budget lists for the synthesis."""

    __slots__ = ("epsilon", "eta", "eta_star", "omega", "released")

    def __init__(self, epsilon, eta, eta_star, omega, released=frozenset()):
        self.epsilon = epsilon
        self.eta = eta
        self.eta_star = eta_star
        self.omega = omega
        self.released = released

    def __repr__(self):
        return (
            f"CandidateLists(epsilon={self.epsilon}, eta={self.eta}, "
            f"eta_star={self.eta_star}, omega={self.omega}, released={set(self.released)})"
        )


class CandidateVerdict:
    """Outcome of the solvability screen with per-condition diagnostics."""

    __slots__ = ("ok", "conditions", "block_sums", "block_dominance")

    def __init__(self, ok, conditions, block_sums, block_dominance):
        self.ok = ok
        self.conditions = conditions
        self.block_sums = block_sums
        self.block_dominance = block_dominance

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "CandidateVerdict(ok)"
        bad = [k for k, v in self.conditions.items() if not v]
        return f"CandidateVerdict(failed={bad})"


def candidate_check(inv: DecouplingInvariants, cand: CandidateLists, T: int) -> CandidateVerdict:
    """Screen candidate lists against the solvability conditions.

    The sum and dominance conditions compare whole-period totals; per-block
    sums and dominance are reported as diagnostics only.
    """
    p = len(inv.delta[0])
    q = len(inv.sigma[0])
    conditions: dict[str, bool] = {}
    shape = (
        len(cand.epsilon) == T
        and len(cand.eta) == T
        and len(cand.eta_star) == T
        and len(cand.omega) == T
        and all(len(b) == p for b in cand.epsilon)
        and all(len(b) == q for b in cand.eta)
        and all(len(b) == p for b in cand.eta_star)
        and all(len(b) == p for b in cand.omega)
    )
    conditions["shape"] = shape
    if not shape:
        return CandidateVerdict(False, conditions, (), ())
    eps, eta, etas, om = cand.epsilon, cand.eta, cand.eta_star, cand.omega
    conditions["multiples"] = all(e >= 0 and e % T == 0 for blk in eps for e in blk)
    conditions["order-bound"] = all(
        inv.delta[i][j] + eps[i][j] >= inv.phi[i][j] for i in range(T) for j in range(p)
    )
    conditions["selection-bound"] = all(
        inv.delta[i][j] + eps[i][j] >= etas[i][j] for i in range(T) for j in range(p)
    )
    conditions["selection-index"] = all(
        index_set(etas[i]) == index_set(eps[i]) for i in range(T)
    )
    conditions["capacity"] = all(is_sublist(eta[i], inv.sigma[i]) for i in range(T))
    eta_all = [v for blk in eta for v in blk]
    om_all = [v for blk in om for v in blk]
    total_eps = sum(list_sum(b) for b in eps)
    conditions["sum"] = total_eps == sum(eta_all) == sum(om_all)
    conditions["dominance"] = dominates(eta_all, om_all)
    block_sums = tuple(
        (list_sum(eps[i]), list_sum(eta[i]), list_sum(om[i])) for i in range(T)
    )
    block_dominance = tuple(dominates(eta[i], om[i]) for i in range(T))
    ok = all(conditions.values())
    return CandidateVerdict(ok, conditions, block_sums, block_dominance)


def _eta_star_options(eps, eta, p: int, T: int) -> Iterator[IntRows]:
    """All per-block assignments of first-chain budgets to delayed channels."""
    per_block = []
    for i in range(T):
        targets = sorted(index_set(eps[i]))
        slots = [k for k in range(len(eta[i])) if eta[i][k] > 0]
        opts = []
        seen = set()
        for sel in permutations(slots, len(targets)):
            vec = [0] * p
            for idx, j in enumerate(targets):
                vec[j] = eta[i][sel[idx]]
            tv = tuple(vec)
            if tv not in seen:
                seen.add(tv)
                opts.append(tv)
        per_block.append(opts)
    for combo in product(*per_block):
        yield tuple(combo)


def _iter_candidates(inv: DecouplingInvariants, T: int, bound: int) -> Iterator[CandidateLists]:
    """Candidates passing the screen, cheapest release subsets first."""
    p = len(inv.delta[0])
    q = len(inv.sigma[0])
    eps = tuple(
        roundup_multiples(tuple(max(ph - de, 0) for de, ph in zip(di, pi)), T)
        for di, pi in zip(inv.delta, inv.phi)
    )
    total = sum(list_sum(b) for b in eps)
    omega = omega_of(inv.interactor, inv.f, inv.delta, eps, p, T)
    coupled = [c for c in inv.chains if c.coupled]
    seen: set = set()
    count = 0
    for r in range(len(coupled) + 1):
        for released in combinations(coupled, r):
            rel = frozenset((c.block, c.slot) for c in released)
            caps = []
            for i in range(T):
                row = []
                for k in range(q):
                    ch = inv.chains[i * q + k]
                    row.append(ch.length if (i, k) in rel else ch.free_length)
                caps.append(tuple(row))
            for eta in joint_bounded_lists(caps, total):
                for eta_star in _eta_star_options(eps, eta, p, T):
                    key = (eta, eta_star)
                    if key in seen:
                        continue
                    seen.add(key)
                    count += 1
                    if count > bound:
                        raise Inconclusive(
                            f"candidate bound {bound} exhausted before a verdict"
                        )
                    cand = CandidateLists(eps, eta, eta_star, omega, rel)
                    if candidate_check(inv, cand, T):
                        yield cand


def search_candidate_lists(inv: DecouplingInvariants, bound: int = 64) -> CandidateLists:
    """First candidate lists that satisfy the solvability conditions."""
    T = len(inv.delta)
    for cand in _iter_candidates(inv, T, bound):
        return cand
    raise NotFound("no candidate delay and budget lists satisfy the solvability conditions")


# ------------------------------------------------------------- construction


def _route(targets, budgets: dict, T: int):
    """Order the chains so every delayed channel is paid its full budget.

    Each positive-budget chain is consumed exactly once; a target's first
    segment starts at its own block with the selected budget, and each later
    segment starts where the previous delay ends.  Joint backtracking over
    all targets; failure means no ordering exists.
    """
    avail = {key: b for key, b in budgets.items() if b > 0}
    out: list = [None] * len(targets)

    def extend(tidx: int) -> bool:
        if tidx == len(targets):
            return not avail
        i, _, total, first = targets[tidx]
        segs: list = []

        def grow(phase: int, remaining: int, need_first: bool) -> bool:
            if remaining == 0:
                out[tidx] = segs[:]
                return extend(tidx + 1)
            for k in sorted(k2 for (ph2, k2) in avail if ph2 == phase):
                b = avail[(phase, k)]
                if b > remaining or (need_first and b != first):
                    continue
                del avail[(phase, k)]
                segs.append((phase, k, b))
                if grow((phase + b) % T, remaining - b, False):
                    return True
                segs.pop()
                avail[(phase, k)] = b
            return False

        return grow(i, total, True)

    if not extend(0):
        raise ConstructionFailed("chain-routing", "no chain order pays the delay budgets")
    return out


def _secondary_program(inv, cand, targets, routing, q: int, T: int, z1: RatMat) -> RatMat:
    """Secondary-block compensator part from the routed chains.

    Single-segment channels carry their channel factor over the delay; a
    multi-segment channel needs trivial unstable content and contributes a
    delay cycle over its slots in index order.  Column orders must replay
    the budget list and the nonunit invariant content must match the
    delayed interactor.
    """
    n = q * T
    big = [[RatFun.zero()] * n for _ in range(n)]
    for s in range(n):
        big[s][s] = RatFun.one()
    for (i, j, _total, _first), segs in zip(targets, routing):
        fij, dij = inv.f[i][j], inv.d[i][j]
        if len(segs) == 1:
            s = segs[0][0] * q + segs[0][1]
            if not dij.divides(fij):
                raise ConstructionFailed(
                    "delegated-case", "channel content does not divide the target factor"
                )
            entry = RatFun(fij // dij, Poly.z(cand.epsilon[i][j]))
            if not entry.in_ring():
                raise ConstructionFailed(
                    "delegated-case", "single-segment entry falls outside the ring"
                )
            big[s][s] = entry
        else:
            if fij != dij:
                raise ConstructionFailed(
                    "delegated-case", "unstable content spread over several segments"
                )
            idx = sorted((bi * q + bk, b) for (bi, bk, b) in segs)
            s1 = idx[0][0]
            big[s1][s1] = RatFun.one()
            for l in range(len(idx) - 1):
                big[idx[l + 1][0]][idx[l][0]] = RatFun(-Poly.one(), Poly.z(idx[l][1]))
            big[s1][idx[-1][0]] = RatFun(-Poly.one(), Poly.z(idx[-1][1]))
            for l in range(1, len(idx)):
                big[idx[l][0]][idx[l][0]] = RatFun.zero()
    v22 = RatMat(big)
    col_orders = []
    for c in range(n):
        orders = [v22[r, c].order() for r in range(n) if v22[r, c]]
        col_orders.append(max(orders) if orders else 0)
    eta_all = [cand.eta[i][k] for i in range(T) for k in range(q)]
    if col_orders != eta_all:
        raise ConstructionFailed("v22-verify", "column orders disagree with the budget list")
    mine = sorted(o for o in invariant_factor_orders(v22) if o)
    theirs = sorted(o for o in invariant_factor_orders(z1) if o)
    if mine != theirs:
        raise ConstructionFailed("v22-verify", "invariant content differs from the primary program")
    return v22


class CompensatorParts:
    """Pieces of the synthesized unimodular compensator.

    ``v22`` is the designed secondary block, ``z2`` the routed chain delays
    and ``v21`` the companion block closing v21*z1 + v22*z2 == 0; ``vbar``
    is the realized compensator whose identity vbar * zbar == lbar is
    verified exactly.  ``dtarget`` is the diagonal closed-loop transfer the
    candidate commits to.
    """

    __slots__ = (
        "z1",
        "v22",
        "v21",
        "z2",
        "vbar",
        "zbar",
        "lbar",
        "dtarget",
        "fbar",
        "gbar",
        "kbar",
        "vinf",
        "routing",
    )

    def __init__(self, z1, v22, v21, z2, vbar, zbar, lbar, dtarget, fbar, gbar, kbar, vinf, routing):
        self.z1 = z1
        self.v22 = v22
        self.v21 = v21
        self.z2 = z2
        self.vbar = vbar
        self.zbar = zbar
        self.lbar = lbar
        self.dtarget = dtarget
        self.fbar = fbar
        self.gbar = gbar
        self.kbar = kbar
        self.vinf = vinf
        self.routing = routing


def build_compensator(
    inv: DecouplingInvariants, cand: CandidateLists, p: int, m: int, T: int
) -> CompensatorParts:
    """Construct and verify the compensator for one accepted candidate."""
    q = m - p
    cy = inv.cyclic
    dtarget = _target_diagonal(inv.f, inv.delta, cand.epsilon, p, T)
    z1 = _delayed_interactor(inv.interactor, inv.f, inv.delta, cand.epsilon, p, T)

    prim_cols = [i * m + j for i in range(T) for j in range(p)]
    wprim = inv.delta_bar.submatrix(range(p * T), prim_cols)
    winv = wprim.inverse()
    if winv is None:
        raise ConstructionFailed("primary-route", "primary columns are not invertible")
    mmat = winv * dtarget
    if not mmat.in_ring():
        raise ConstructionFailed("primary-route", "primary program leaves the ring")

    budgets = {(i, k): cand.eta[i][k] for i in range(T) for k in range(q)}
    targets = []
    for i in range(T):
        for j in sorted(index_set(cand.epsilon[i])):
            targets.append((i, j, cand.epsilon[i][j], cand.eta_star[i][j]))
    routing = _route(targets, budgets, T)

    z2_rows = [[RatFun.zero() for _ in range(p * T)] for _ in range(q * T)]
    for (i, j, _total, _first), segs in zip(targets, routing):
        col = i * p + j
        cum = 0
        for (bi, bk, b) in segs:
            z2_rows[bi * q + bk][col] = RatFun(Poly.one(), Poly.z(cum))
            cum += b
    z2 = RatMat([row[:] for row in z2_rows])
    v22 = _secondary_program(inv, cand, targets, routing, q, T, z1)

    # interleave the primary program with the chain delays, block by block
    zrows = []
    lconst: Mat = []
    for i in range(T):
        for r in range(p):
            zrows.append([mmat[i * p + r, c] for c in range(p * T)])
            lconst.append(
                [Fraction(int(c == i * p + r)) for c in range(p * T)]
            )
        for k in range(q):
            zrows.append(z2_rows[i * q + k][:])
            lconst.append([Fraction(0)] * (p * T))
    zbar = RatMat(zrows)
    lbar = RatMat.from_scalar(lconst)
    if not zbar.in_ring():
        raise ConstructionFailed("compensator", "input program leaves the ring")

    gconst = zbar.value_at_inf()
    for r in range(m * T):
        i = r // m
        for c in range(p * T):
            if gconst[r][c] and not (i * p <= c < (i + 1) * p):
                raise ConstructionFailed("input-gain", "constant part mixes phases")
    vinf = linalg.zeros(m * T, m * T)
    for i in range(T):
        gi = [[gconst[i * m + r][i * p + c] for c in range(p)] for r in range(m)]
        cols = [[row[c] for row in gi] for c in range(p)]
        if linalg.rank(cols) < p:
            raise ConstructionFailed("input-gain", f"phase block {i} loses column rank")
        basis = _complete_basis(cols, m)
        vi = linalg.inverse(linalg.transpose(linalg.fr(basis)))
        if vi is None:
            raise ConstructionFailed("input-gain", f"phase block {i} completion failed")
        for r in range(m):
            for c in range(m):
                vinf[i * m + r][i * m + c] = vi[r][c]

    # constant state gain matching the strictly proper part of the program
    sbar = cy.input_to_state()
    xbar = sbar * zbar
    zsp = zbar - RatMat.from_scalar(gconst)
    nlag = max(2 * cy.total, 2)
    xcoef = _series_blocks(xbar, nlag)
    zcoef = _series_blocks(zsp, nlag)
    fbig = linalg.zeros(m * T, cy.total)
    for i in range(T):
        s0, si = cy.starts[i], cy.sizes[i]
        if si == 0:
            continue
        eqs, rhs = [], []
        for j in range(nlag):
            for c in range(p * T):
                eqs.append([xcoef[j][s0 + s][c] for s in range(si)])
                rhs.append([zcoef[j][i * m + r][c] for r in range(m)])
        sol = linalg.solve_matrix(eqs, rhs)
        if sol is None:
            raise ConstructionFailed(
                "chain-realization", f"no constant gain matches phase block {i}"
            )
        fi = linalg.transpose(sol)
        for r in range(m):
            for c in range(si):
                fbig[i * m + r][s0 + c] = fi[r][c]
    if RatMat.from_scalar(fbig) * xbar != zsp:
        raise ConstructionFailed("chain-realization", "series solution fails the exact check")

    kbar = linalg.mscale(linalg.matmul(vinf, fbig), Fraction(-1))
    vbar = RatMat.from_scalar(vinf) + RatMat.from_scalar(kbar) * sbar
    if vbar * zbar != lbar:
        raise ConstructionFailed("compensator", "transfer identity fails")
    if not vbar.is_unimodular():
        raise ConstructionFailed("compensator", "compensator is not unimodular")
    if not zbar.is_column_unimodular():
        raise ConstructionFailed("compensator", "input program is not column unimodular")

    z1inv = z1.inverse()
    if z1inv is None:
        raise ConstructionFailed("v21-verify", "delayed interactor is singular")
    v21 = (v22 * z2 * z1inv).map(lambda e: -e)
    if not v21.in_ring():
        raise ConstructionFailed("v21-verify", "companion block leaves the ring")
    if v21 * z1 + v22 * z2 != RatMat.zeros(q * T, p * T):
        raise ConstructionFailed("v21-verify", "off-diagonal identity fails")
    return CompensatorParts(
        z1, v22, v21, z2, vbar, zbar, lbar, dtarget,
        fbig, gconst, kbar, vinf, routing,
    )


# ------------------------------------------------------------------- driver


def compose_laws(first: FeedbackLaw, second: FeedbackLaw) -> FeedbackLaw:
    """Law equivalent to applying ``first`` and then ``second`` inside it."""
    F = [
        linalg.madd(first.F[t], linalg.matmul(first.G[t], second.F[t]))
        for t in range(first.T)
    ]
    G = [linalg.matmul(first.G[t], second.G[t]) for t in range(first.T)]
    return FeedbackLaw(F, G)


def _assert_nilpotent(sys: PeriodicSystem):
    for t in range(sys.T):
        n = sys.dim(t)
        mono = sys.monodromy(t)
        power = linalg.identity(n)
        for _ in range(n):
            power = linalg.matmul(power, mono)
        if power != linalg.zeros(n, n):
            raise ConstructionFailed("closed-loop", "monodromy is not nilpotent")


def _pipeline(sys: PeriodicSystem, tau: int):
    """Normal form, standard form and channel invariants in one pass."""
    T, p, m = sys.T, sys.p, sys.m
    cy = CyclicForm(sys, tau)
    wbar = cy.transfer()
    her = cyclic_hermite(wbar, T, p, m)
    if her.unreduced:
        raise ConstructionFailed(
            "normal-form", f"positions left unreduced: {sorted(her.unreduced)}"
        )
    sf = standard_form(sys, cy, her)
    d, delta = first_decoupling_data(her.h, p, m, T)
    dstar = build_delta_star(her.h, d, delta, p, m, T)
    interactor, f, phi = interactor_data(dstar, p, T)
    inv = DecouplingInvariants(
        d=d,
        delta=delta,
        sigma=sf.sigma,
        sigma_free=sf.sigma_free,
        f=f,
        phi=phi,
        delta_star=dstar,
        interactor=interactor,
        delta_bar=her.h,
        chains=sf.chains,
        cyclic=sf.cyclic,
    )
    return wbar, her, sf, inv


def analyze_invariants(sys: PeriodicSystem, tau: int = 0) -> DecouplingInvariants:
    """Channel invariants of a stable wide system without synthesizing."""
    if sys.m <= sys.p:
        raise DimensionMismatch(
            f"{sys.m} inputs vs {sys.p} outputs: needs spare inputs"
        )
    sys.assert_stable()
    return _pipeline(sys, tau)[3]


def decouple_nonsquare(
    sys: PeriodicSystem, tau: int = 0, step10_bound: int = 64
) -> DecoupleResult:
    """Full synthesis for m > p: search candidates and build verified gains."""
    if sys.m == sys.p:
        raise DimensionMismatch(
            f"{sys.m} inputs vs {sys.p} outputs: use the square path"
        )
    if sys.m < sys.p:
        raise DimensionMismatch(
            f"{sys.m} inputs cannot decouple {sys.p} outputs"
        )
    sys.assert_stable()
    sys.assert_output_reachable()
    T, p, m = sys.T, sys.p, sys.m
    wbar, her, sf, inv = _pipeline(sys, tau)
    gen = _iter_candidates(inv, T, step10_bound)
    failures: list[ConstructionFailed] = []
    tried = 0
    while True:
        try:
            cand = next(gen)
        except StopIteration:
            break
        tried += 1
        try:
            parts = build_compensator(inv, cand, p, m, T)
            real = realize_compensator(
                parts.vbar, sf.cyclic, "left", lbar=parts.lbar.value_at_inf()
            )
            law = compose_laws(sf.law, real.law)
            closed = apply_feedback(sys, law)
            verdict = verify_decoupled(closed)
            if not verdict:
                raise ConstructionFailed(
                    "closed-loop", f"{verdict.reason}: {verdict.detail}"
                )
            _assert_nilpotent(closed)
            closed_tf = CyclicForm(closed, tau).transfer()
            if closed_tf != parts.dtarget:
                raise ConstructionFailed(
                    "closed-loop", "transfer differs from the target diagonal"
                )
        except ConstructionFailed as exc:
            failures.append(exc)
            continue
        report = {
            "tau": tau,
            "wbar": wbar,
            "delta": her.h,
            "ubar": her.u,
            "invariants": inv,
            "candidate": cand,
            "parts": parts,
            "standard_law": sf.law,
            "second_law": real.law,
            "law": law,
            "closed_transfer": closed_tf,
            "verdict": verdict,
            "candidates_tried": tried,
        }
        return DecoupleResult(law, closed, report)
    if failures:
        last = failures[-1]
        raise ConstructionFailed(
            "no-realizable-candidate",
            f"{tried} candidates failed; last: {last}",
        )
    raise NotFound("no candidate delay and budget lists satisfy the solvability conditions")
