"""Matrix-level affine Weyl symmetries of Fuchsian systems.

Leg reflections permute eigenvalues of a residue.  The central reflection
passes to the incremented rank: every residue is rank-factored, the
factors are stacked into an N x N pair (P, Q), the full-leg eigenvalue
relabelling and a scalar shift of B = PQ (middle convolution) are applied
there, and the result is compressed back to rank N-1 along the kernel of
QP.  Translations of the weight lattice P(R) are realised by elementary
Schlesinger steps: rational gauge transformations with a rank-one
projector built from an eigenvector of the source residue and a left
eigenvector of the target residue, moving one exponent up and one down.

Every operation updates the exact parameter vector by the corresponding
exact formula and verifies the floating-point matrices against the
predicted orbit data, erroring on non-generic input rather than
repairing it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import ratlin
from .dynkin import ParamVector, StarGraph, reflect_param, weight_lattice_member
from .errors import DegeneracyError
from .fuchsian import (
    FuchsianSystem,
    OrbitSpec,
    char_poly_error,
    make_system,
    normalize,
    orbit_from_leg,
    predicted_specs,
    signature,
)
from .quiver import (
    AlmostAffineQuiver,
    DimensionVector,
    IncrementedQuiver,
    embed_params,
    increment,
    permute_params,
    project_params,
    shift_params,
)


def _cx(x):
    return ratlin.to_complex(x)


# ---------------------------------------------------------------------------
# incremented (P, Q) pairs


@dataclass(frozen=True)
class IncrementedPair:
    """Block factorisation (P, Q) living on the incremented quiver.

    P stacks the maps C^N -> C^{n_i}, Q concatenates the maps back, one
    block per finite pole; B = PQ has the breve orbit data on its diagonal
    blocks and QP lies in the big orbit determined by the full leg.
    """

    inc: IncrementedQuiver
    lam_plus: ParamVector
    p: np.ndarray
    q: np.ndarray
    poles: tuple
    tol: float = 1e-9

    def __post_init__(self):
        for a in (self.p, self.q):
            np.asarray(a).setflags(write=False)

    @property
    def big_n(self) -> int:
        return self.inc.big_n

    @property
    def block_sizes(self) -> tuple[int, ...]:
        return self.inc.block_sizes

    def block_slices(self):
        out = []
        start = 0
        for s in self.block_sizes:
            out.append(slice(start, start + s))
            start += s
        return out

    @property
    def b(self) -> np.ndarray:
        return self.p @ self.q

    @property
    def qp(self) -> np.ndarray:
        return self.q @ self.p

    def block_product(self, i: int) -> np.ndarray:
        """Q_i P_i as an N x N matrix."""
        sl = self.block_slices()[i]
        return self.q[:, sl] @ self.p[sl, :]

    def breve_specs(self) -> tuple[OrbitSpec, ...]:
        """Per-block target orbits: the leg orbit with the centre removed,
        shifted down by the adjacent parameter."""
        g = self.inc.graph
        out = []
        for j in range(g.num_legs - 1):
            nodes = g.leg_nodes(j)
            n_i = self.inc.dims[nodes[0]]
            spec = orbit_from_leg(n_i, [self.inc.dims[k] for k in nodes[1:]],
                                  [self.lam_plus[k] for k in nodes[1:]])
            out.append(spec.shifted(-self.lam_plus[nodes[0]]))
        return tuple(out)

    def hat_spec(self) -> OrbitSpec:
        """Orbit of QP: minus the shifted full-leg orbit."""
        g = self.inc.graph
        nodes = g.leg_nodes(self.inc.full_leg)
        spec = orbit_from_leg(self.big_n, [self.inc.dims[k] for k in nodes],
                              [self.lam_plus[k] for k in nodes],
                              first=-self.lam_plus[g.center])
        return OrbitSpec(spec.size, tuple((-v, m) for v, m in spec.entries))

    def verify(self):
        breves = self.breve_specs()
        hat = self.hat_spec()
        # trace compatibility encodes lam . Delta = 0
        if self.lam_plus.exact:
            total = sum((s.trace() for s in breves), Fraction(0))
            if total != hat.trace():
                raise ValueError("trace compatibility fails: lam . Delta != 0")
        worst = char_poly_error(self.qp, hat)
        for i in range(len(self.block_sizes)):
            sl = self.block_slices()[i]
            worst = max(worst, char_poly_error(self.p[sl, :] @ self.q[:, sl],
                                               breves[i]))
        if worst > self.tol:
            raise DegeneracyError(
                f"pair is {worst:.2e} away from its orbit data (tol {self.tol:.1e})")
        return worst


def lift(sys: FuchsianSystem) -> IncrementedPair:
    """Rank-factor the finite residues and stack them into an incremented
    pair with Q_i P_i = diag(A_i, 0)."""
    if sys.normalization != "det_zero":
        raise ValueError("lift expects a determinant-zero normalised system")
    base = AlmostAffineQuiver(sys.graph, DimensionVector.delta(sys.graph))
    inc = increment(base)
    lam_plus = embed_params(inc, sys.lam)
    n = sys.n
    big = inc.big_n
    sizes = inc.block_sizes
    p = np.zeros((big, big), dtype=complex)
    q = np.zeros((big, big), dtype=complex)
    start = 0
    for i, a in enumerate(sys.finite_residues):
        u, s, vh = np.linalg.svd(a)
        scale = max(s[0], 1.0)
        rank = int(np.sum(s > sys.tol * scale))
        if rank != sizes[i]:
            raise DegeneracyError(
                f"residue {i} has numerical rank {rank}, expected {sizes[i]}")
        root = np.sqrt(s[:rank])
        p[start:start + rank, :n] = root[:, None] * vh[:rank, :]
        q[:n, start:start + rank] = u[:, :rank] * root[None, :]
        start += rank
    pair = IncrementedPair(inc, lam_plus, p, q, sys.poles, sys.tol)
    pair.verify()
    return pair


def scalar_shift(pair: IncrementedPair, shift) -> IncrementedPair:
    """Middle-convolution shift: move to the GIT representative with
    Q = Id and replace B = PQ by B + shift."""
    lam_new = shift_params(pair.inc, pair.lam_plus, shift)
    b = pair.b + _cx(shift) * np.eye(pair.big_n)
    out = IncrementedPair(pair.inc, lam_new, b, np.eye(pair.big_n),
                          pair.poles, pair.tol)
    out.verify()
    return out


def relabel_first_two(pair: IncrementedPair) -> IncrementedPair:
    """Swap the first two eigenvalues of the full-leg orbit: a pure
    relabelling, so only the parameters move."""
    lam_new = permute_params(pair.inc, pair.lam_plus)
    out = replace(pair, lam_plus=lam_new)
    out.verify()
    return out


def project(pair: IncrementedPair) -> FuchsianSystem:
    """Compress the blocks Q_i P_i to the sum V of nonzero eigenspaces of
    QP along its kernel, producing the rank N-1 system with parameters
    pr(lam).  Requires the central component of lam to vanish so that QP
    has a simple zero eigenvalue."""
    g = pair.inc.graph
    if pair.lam_plus.exact and pair.lam_plus[g.center] != 0:
        raise ValueError("project requires a zero central parameter; "
                         "apply scalar_shift first")
    hat = pair.hat_spec()
    zero_mult = sum(m for v, m in hat.entries if v == 0)
    if zero_mult != 1:
        raise DegeneracyError(
            f"QP needs a simple zero eigenvalue, spec has multiplicity {zero_mult}")
    w = pair.qp
    vals, vecs = np.linalg.eig(w)
    scale = max(1.0, float(np.max(np.abs(vals))))
    order = np.argsort(np.abs(vals))
    if abs(vals[order[0]]) > 1e-6 * scale or \
            abs(vals[order[1]]) < 1e-6 * scale:
        raise DegeneracyError("zero eigenvalue of QP is not numerically simple")
    kernel = vecs[:, order[0]:order[0] + 1]
    others = vecs[:, [k for k in order[1:]]]
    von, _ = np.linalg.qr(others)
    basis = np.hstack([von, kernel])
    binv = np.linalg.inv(basis)
    n_out = pair.big_n - 1
    finite = []
    for i in range(len(pair.block_sizes)):
        compressed = (binv @ pair.block_product(i) @ basis)[:n_out, :n_out]
        finite.append(compressed)
    lam_out = project_params(pair.inc, pair.lam_plus)
    return make_system(pair.inc.base.graph, pair.poles, finite, lam_out,
                       tol=max(pair.tol, 1e-8))


def central_reflection(sys: FuchsianSystem) -> FuchsianSystem:
    """The reflection at the central node, realised by lifting to the
    incremented pair, swapping the first two big-orbit eigenvalues, and
    shifting back down (middle convolution at Lambda = -nu)."""
    g = sys.graph
    nu = sys.lam[g.center]
    if nu == 0:
        raise DegeneracyError("central reflection needs nu != 0 "
                              "(lam fixed by the reflection)")
    sys0 = normalize(sys, "det_zero")
    pair = lift(sys0)
    pair = relabel_first_two(pair)
    pair = scalar_shift(pair, -nu)
    out = project(pair)
    expected = reflect_param(g, g.center, sys0.lam)
    if out.lam.exact and out.lam.values != expected.values:
        raise AssertionError("central reflection parameter track mismatch")
    return out


def leg_reflection(sys: FuchsianSystem, node: int) -> FuchsianSystem:
    """Reflection at a leg node: swaps two adjacent eigenvalues of one
    residue.  Matrices are unchanged except for the determinant-zero
    renormalisation when the swap touches the first slot."""
    g = sys.graph
    if node == g.center:
        raise ValueError("use central_reflection for the central node")
    leg, pos = g.leg_of(node)
    lam_new = reflect_param(g, node, sys.lam)
    specs = sys.specs
    spec = specs[leg]
    if pos >= spec.width:
        raise DegeneracyError("reflection swaps a degenerate eigenvalue pair")
    if spec.mults[pos - 1] != spec.mults[pos]:
        raise DegeneracyError("eigenvalue multiplicities differ across the swap")
    offsets = list(sys.offsets)
    if pos == 1:
        # new leading eigenvalue is the old second one
        offsets[leg] = spec.values[1]
    out = FuchsianSystem(g, sys.poles, sys.residues, lam_new,
                         tuple(offsets), sys.nu, sys.tol)
    out.verify()
    if sys.normalization == "det_zero" and out.normalization != "det_zero":
        out = normalize(out, "det_zero")
    return out


def tensor_shift(sys: FuchsianSystem, shifts) -> FuchsianSystem:
    """Tensor by a scalar logarithmic connection: A_i += c_i at the finite
    poles, A_m -= sum c_i.  This is the normalisation freedom of the
    residues; the level-zero lam is unchanged (the exact update lives in
    the per-pole offsets), so the induced translation vector is zero."""
    cs = [Fraction(c) if isinstance(c, int) else c for c in shifts]
    if len(cs) != sys.m - 1:
        raise ValueError("need one shift per finite pole")
    finite = [a + _cx(c) * np.eye(sys.n)
              for a, c in zip(sys.finite_residues, cs)]
    offsets = tuple(o + c for o, c in zip(sys.offsets,
                                          cs + [-sum(cs, Fraction(0))]))
    return sys.with_residues(finite, offsets=offsets)


# ---------------------------------------------------------------------------
# Schlesinger steps


def _eigspace_basis(a: np.ndarray, value: complex):
    """Orthonormal basis of the eigenspace of a at the given (semisimple)
    eigenvalue, via the SVD null space of a - value (reliable also for
    repeated eigenvalues of non-normal matrices)."""
    shifted = a - value * np.eye(a.shape[0])
    _, s, vh = np.linalg.svd(shifted)
    scale = max(1.0, float(s[0]))
    sel = [k for k in range(len(s)) if s[k] < 1e-6 * scale]
    if not sel:
        raise DegeneracyError(f"no eigenvalue of the residue near {value}")
    return vh[sel, :].conj().T


def _best_projector(a_up: np.ndarray, up_val: complex,
                    a_down: np.ndarray, down_val: complex):
    """Rank-one projector v w^T / (w^T v) with v an eigenvector of a_up at
    up_val and w^T a left eigenvector row of a_down at down_val, chosen
    inside the eigenspaces to maximise |w^T v| (an SVD of the overlap)."""
    vb = _eigspace_basis(a_up, up_val)
    wb = _eigspace_basis(a_down.T, down_val)
    overlap = wb.T @ vb
    u, s, vh = np.linalg.svd(overlap)
    if s[0] < 1e-8:
        raise DegeneracyError("eigenvector pairing is degenerate (w.v = 0)")
    v = vb @ vh[0].conj()
    w = wb @ u[:, 0].conj()
    denom = w @ v
    pi = np.outer(v, w) / denom
    return pi


def _gauge_residues(sys_fin, poles, nu_c, up, down, pi, up_val, down_val):
    """New finite residues after the rank-one Schlesinger gauge; up/down
    are pole indices with the infinity pole = len(poles)."""
    m_fin = len(sys_fin)
    n = sys_fin[0].shape[0]
    eye = np.eye(n)
    inf = m_fin  # index of the infinity pole

    def tilde(i):
        acc = np.zeros_like(sys_fin[0])
        for k in range(m_fin):
            if k != i:
                acc += sys_fin[k] / (poles[i] - poles[k])
        return acc

    out = list(sys_fin)
    if up != inf and down != inf:
        ai, aj = poles[up], poles[down]
        for k in range(m_fin):
            if k in (up, down):
                continue
            f = (poles[k] - ai) / (poles[k] - aj)
            gk = eye + (f - 1) * pi
            gki = eye + (1 / f - 1) * pi
            out[k] = gk @ sys_fin[k] @ gki
        t_up, t_dn = tilde(up), tilde(down)
        out[up] = (sys_fin[up] - pi @ sys_fin[up]
                   + (ai - aj) * (t_up @ pi - pi @ t_up @ pi)
                   + (up_val + 1) * pi)
        out[down] = (sys_fin[down] - sys_fin[down] @ pi
                     + (aj - ai) * (pi @ t_dn - pi @ t_dn @ pi)
                     + (down_val - 1) * pi)
    elif down == inf:
        ai = poles[up]
        for k in range(m_fin):
            if k == up:
                continue
            u = poles[k] - ai
            gk = eye + (u - 1) * pi
            gki = eye + (1 / u - 1) * pi
            out[k] = gk @ sys_fin[k] @ gki
        t_up = tilde(up)
        out[up] = (sys_fin[up] - pi @ sys_fin[up]
                   + t_up @ pi - pi @ t_up @ pi + (up_val + 1) * pi)
    else:  # up == inf, down finite
        aj = poles[down]
        for k in range(m_fin):
            if k == down:
                continue
            u = poles[k] - aj
            gk = eye + (1 / u - 1) * pi
            gki = eye + (u - 1) * pi
            out[k] = gk @ sys_fin[k] @ gki
        t_dn = tilde(down)
        out[down] = (sys_fin[down] - sys_fin[down] @ pi
                     + pi @ t_dn - pi @ t_dn @ pi + (down_val - 1) * pi)
    return out


def _gauge_check(sys_fin, new_fin, poles, up, down, pi, rng):
    """Verify at random test points that the computed residues reproduce
    G A G^{-1} + G' G^{-1} as a rational function."""
    m_fin = len(sys_fin)
    n = sys_fin[0].shape[0]
    eye = np.eye(n)
    inf = m_fin
    scale = max(1.0, max(float(np.linalg.norm(a)) for a in new_fin))
    for _ in range(3):
        z = complex(rng.uniform(1.5, 4.0), rng.uniform(0.5, 2.0))
        if up != inf and down != inf:
            f = (z - poles[up]) / (z - poles[down])
            dlog = pi * (1 / (z - poles[up]) - 1 / (z - poles[down]))
        elif down == inf:
            f = z - poles[up]
            dlog = pi / (z - poles[up])
        else:
            f = 1 / (z - poles[down])
            dlog = -pi / (z - poles[down])
        g = eye + (f - 1) * pi
        gi = eye + (1 / f - 1) * pi
        a_z = sum(a / (z - p) for a, p in zip(sys_fin, poles))
        lhs = g @ a_z @ gi + dlog
        rhs = sum(a / (z - p) for a, p in zip(new_fin, poles))
        if float(np.linalg.norm(lhs - rhs)) > 1e-8 * scale:
            raise DegeneracyError("gauge residue check failed "
                                  f"({float(np.linalg.norm(lhs - rhs)):.2e})")


def _unit_move(finite, poles, nu, up, up_val, down, down_val, tol, rng):
    """One elementary Schlesinger move: exponent up_val -> up_val + 1 at
    pole `up`, down_val -> down_val - 1 at pole `down` (pole index
    len(poles) means infinity).  Returns the new finite residues."""
    m_fin = len(poles)
    inf = m_fin
    n = finite[0].shape[0]
    a_m = _cx(nu) * np.eye(n) - sum(finite)

    def mat(i):
        return a_m if i == inf else finite[i]

    pi = _best_projector(mat(up), _cx(up_val), mat(down), _cx(down_val))
    new_fin = _gauge_residues(finite, poles, _cx(nu), up, down, pi,
                              _cx(up_val), _cx(down_val))
    _gauge_check(finite, new_fin, poles, up, down, pi, rng)
    return new_fin


def _multiset_poly_error(a: np.ndarray, values) -> float:
    actual = np.poly(np.asarray(a, dtype=complex))
    target = np.array([ratlin.to_complex(c)
                       for c in ratlin.poly_from_roots([(v, 1) for v in values])])
    scale = max(1.0, float(np.max(np.abs(target))))
    return float(np.max(np.abs(actual - target))) / scale


def schlesinger_step(sys: FuchsianSystem, pole_i: int, slot_k: int,
                     pole_j: int, slot_l: int) -> FuchsianSystem:
    """Elementary Schlesinger transformation: eigenvalue slot_k of pole_i
    moves up by one, slot_l of pole_j moves down by one; both slots must
    be simple (use translate for multiple eigenvalues).  The result is
    renormalised to determinant zero, so lam moves by an integral
    weight-lattice vector."""
    if pole_i == pole_j:
        raise ValueError("use translate for same-pole exponent moves")
    specs = sys.specs
    for pole, slot in ((pole_i, slot_k), (pole_j, slot_l)):
        if not 0 <= pole < sys.m or not 0 <= slot < specs[pole].width:
            raise ValueError("pole or slot out of range")
        if specs[pole].mults[slot] != 1:
            raise DegeneracyError(
                "slot has multiplicity > 1; use translate, which moves all "
                "copies through elementary steps")
    up_val = specs[pole_i].values[slot_k]
    down_val = specs[pole_j].values[slot_l]
    new_vals = {p: list(specs[p].values) for p in range(sys.m)}
    new_vals[pole_i][slot_k] = up_val + 1
    new_vals[pole_j][slot_l] = down_val - 1
    for p in (pole_i, pole_j):
        if len(set(new_vals[p])) != len(new_vals[p]):
            raise DegeneracyError("step would collide two eigenvalues")
    rng = np.random.default_rng(0)
    finite = _unit_move(list(sys.finite_residues), sys.poles, sys.nu,
                        pole_i, up_val, pole_j, down_val, sys.tol, rng)
    # rebuild exact bookkeeping from the moved slot values
    lam_vals = list(sys.lam.values)
    g = sys.graph
    offsets = []
    for p in range(sys.m):
        vals = new_vals[p]
        offsets.append(vals[0])
        nodes = g.leg_nodes(p)
        for j, node in enumerate(nodes):
            if j + 1 < len(vals):
                lam_vals[node] = vals[j] - vals[j + 1]
    nu_new = sys.nu
    lam_vals[g.center] = nu_new - sum(offsets, Fraction(0))
    lam_new = ParamVector(tuple(lam_vals))
    out = FuchsianSystem(g, sys.poles, tuple(finite)
                         + (_cx(nu_new) * np.eye(sys.n) - sum(finite),),
                         lam_new, tuple(offsets), nu_new, sys.tol)
    out.verify()
    if sys.normalization == "det_zero":
        out = normalize(out, "det_zero")
    return out


def _offset_candidates(t_shifts, mults, mu_c: int, keep: int = 3):
    """Ranked choices of per-pole constants c_p with sum -mu_c (the
    tensoring freedom), minimising first the number of same-pole up/down
    pairings that would need rerouting, then the total number of
    elementary moves.  Distinct plans dodge distinct walls, so callers may
    retry down the list.  Returns [(cost, constants), ...]."""
    m = len(t_shifts)
    bound = max(abs(mu_c), max((abs(x) for row in t_shifts for x in row),
                               default=0)) + 1

    def cost(cs):
        per_up, per_dn = [], []
        for p in range(m):
            u = sum(mm * max(t + cs[p], 0)
                    for t, mm in zip(t_shifts[p], mults[p]))
            d = sum(mm * max(-(t + cs[p]), 0)
                    for t, mm in zip(t_shifts[p], mults[p]))
            per_up.append(u)
            per_dn.append(d)
        half = sum(per_up)
        forced = max((per_up[p] + per_dn[p] - half for p in range(m)),
                     default=0)
        return (max(forced, 0), half)

    scored = []
    for head in itertools.product(range(-bound, bound + 1), repeat=m - 1):
        last = -mu_c - sum(head)
        if abs(last) > bound:
            continue
        cs = tuple(head) + (last,)
        scored.append((cost(cs), cs))
    scored.sort()
    return scored[:keep]


def _move_profile(g: StarGraph, coords):
    """Per-pole slot shifts and multiplicities for the level-zero integral
    vector with the given finite coordinates; the eigenvalue shifts are
    (minus) the partial sums of the vector along each leg."""
    delta = g.delta
    ext = -sum(delta[i] * c for i, c in zip(g.finite_nodes, coords))
    full = list(coords) + [ext]
    mu_c = full[g.center]
    t_shifts, mults = [], []
    for p in range(g.num_legs):
        nodes = g.leg_nodes(p)
        dims = [delta[g.center]] + [delta[k] for k in nodes] + [0]
        t_row, m_row = [0], [dims[0] - dims[1]]
        acc = 0
        for j, node in enumerate(nodes):
            acc -= full[node]
            mult = dims[j + 1] - dims[j + 2]
            if mult > 0:
                t_row.append(acc)
                m_row.append(mult)
        t_shifts.append(t_row)
        mults.append(m_row)
    return mu_c, t_shifts, mults


_LIGHT_BASIS_CACHE: dict = {}


def light_translation_basis(g: StarGraph) -> tuple[ParamVector, ...]:
    """A Z-basis of the weight lattice P(R) chosen to minimise the number
    of elementary Schlesinger moves per vector (the standard basis
    e_i - delta_i e_ext contains needlessly heavy directions)."""
    from .ratlin import smith_diagonal
    if g.legs in _LIGHT_BASIS_CACHE:
        return _LIGHT_BASIS_CACHE[g.legs]
    r = len(g.finite_nodes)
    delta = g.delta
    scored = []
    for coords in itertools.product((-1, 0, 1), repeat=r):
        if not any(coords):
            continue
        ext = -sum(delta[i] * c for i, c in zip(g.finite_nodes, coords))
        if abs(ext) > 2:
            continue  # a large extending component is never move-light
        mu_c, t_shifts, mults = _move_profile(g, coords)
        cost = _offset_candidates(t_shifts, mults, mu_c, keep=1)[0][0]
        scored.append((cost, coords))
    scored.sort()
    chosen: list = []
    for _, coords in scored:
        trial = chosen + [coords]
        diag = smith_diagonal(trial)
        if len(diag) == len(trial) and all(d == 1 for d in diag):
            chosen.append(coords)
            if len(chosen) == r:
                break
    assert len(chosen) == r, "failed to assemble a unimodular basis"
    out = []
    for coords in chosen:
        ext = -sum(delta[i] * c for i, c in zip(g.finite_nodes, coords))
        out.append(ParamVector(tuple(Fraction(c) for c in coords)
                               + (Fraction(ext),)))
    result = tuple(out)
    _LIGHT_BASIS_CACHE[g.legs] = result
    return result


def _plan_moves(sys: FuchsianSystem, mu: ParamVector, keep: int = 3):
    """Decompose the translation by mu into per-value integer shifts,
    using the tensoring freedom to balance moves across the poles.
    Returns (lam_new, ranked [(per-pole slot shifts, constants)])."""
    g = sys.graph
    lam_new = sys.lam + mu
    old = predicted_specs(g, sys.lam)
    new = predicted_specs(g, lam_new)
    mu_c = mu[g.center]
    if not (isinstance(mu_c, Fraction) and mu_c.denominator == 1):
        raise ValueError("translation must shift eigenvalues by integers")
    t_shifts, mults = [], []
    for p in range(sys.m):
        if new[p].width != old[p].width or new[p].mults != old[p].mults:
            raise DegeneracyError(
                "translation lands on a wall (orbit type would change)")
        d = [nv - ov for (nv, _), (ov, _) in zip(new[p].entries, old[p].entries)]
        for x in d:
            if not (isinstance(x, Fraction) and x.denominator == 1):
                raise ValueError("translation must shift eigenvalues by integers")
        t_shifts.append([int(x) for x in d])
        mults.append(list(old[p].mults))
    plans = []
    for _, consts in _offset_candidates(t_shifts, mults, int(mu_c), keep):
        shifts = [[t + consts[p] for t in t_shifts[p]] for p in range(sys.m)]
        plans.append((shifts, consts))
    return lam_new, plans


def _run_moves(sys0: FuchsianSystem, shifts, order_seed: int,
               guard: float = 5e-7):
    """Execute the planned elementary moves, returning the new finite
    residues.  order_seed 0 pairs pending moves in lexicographic order;
    larger seeds shuffle the pairing, used to retry around degeneracies
    (intermediate states can pass near walls in an order-dependent way)."""
    specs = sys0.specs
    values, targets = [], []
    for p in range(sys0.m):
        vals, tgts = [], []
        for (v, m), d in zip(specs[p].entries, shifts[p]):
            vals.extend([v] * m)
            tgts.extend([v + d] * m)
        values.append(vals)
        targets.append(tgts)

    rng = np.random.default_rng(order_seed + 1)
    shuffler = np.random.default_rng(order_seed) if order_seed else None
    finite = list(sys0.finite_residues)
    inf = sys0.m - 1

    def pending():
        ups, downs = [], []
        for p in range(sys0.m):
            for c, (v, t) in enumerate(zip(values[p], targets[p])):
                if t > v:
                    ups.append((p, c))
                elif t < v:
                    downs.append((p, c))
        if shuffler is not None:
            shuffler.shuffle(ups)
            shuffler.shuffle(downs)
        return ups, downs

    moves_done = 0
    while True:
        ups, downs = pending()
        if not ups and not downs:
            break
        moves_done += 1
        if moves_done > 10000:
            raise DegeneracyError("translation planner did not terminate")
        if bool(ups) != bool(downs):
            raise DegeneracyError("unbalanced translation plan")
        pair = next(((u, d) for u in ups for d in downs if u[0] != d[0]), None)
        if pair is not None:
            (pu, cu), (pd, cd) = pair
        else:
            # every pending move sits on one pole: park one exponent of an
            # auxiliary pole one step down; the compensating up-move then
            # pairs across poles on a later iteration
            (pu, cu) = ups[0]
            aux = next(p for p in range(sys0.m) if p != pu)
            vset = set(values[aux])
            cd = next((c for c, v in enumerate(values[aux])
                       if v - 1 not in vset), None)
            if cd is None:
                raise DegeneracyError("no collision-free auxiliary slot")
            pd = aux
        finite = _unit_move(finite, sys0.poles, sys0.nu, pu, values[pu][cu],
                            pd, values[pd][cd], sys0.tol, rng)
        values[pu][cu] += 1
        values[pd][cd] -= 1
        n = sys0.n

        def worst_drift(fin):
            a_m = _cx(sys0.nu) * np.eye(n) - sum(fin)
            return max(_multiset_poly_error(a_m if p == inf else fin[p],
                                            values[p])
                       for p in range(sys0.m))

        err = worst_drift(finite)
        if err > 1e-9:
            # near-degenerate passages amplify the witness error; re-anchor
            # the intermediate state on its exact eigenvalue data
            polished = _polish_residues(finite, values, sys0.nu)
            if polished is not None:
                finite = polished
                err = worst_drift(finite)
        # guard the scaffolding states; the final tuple is additionally
        # held to the full tolerance after re-anchoring
        if err > guard:
            raise DegeneracyError(f"intermediate orbit drift {err:.2e}")
    return finite


def _polish_residues(finite, exact_values, nu):
    """Re-anchor a drifted residue tuple on the exact variety: warm-started
    Gauss-Newton over all conjugators with sum A_p = nu * Id, the exact
    per-pole eigenvalue lists as diagonals and the tuple's own eigenvectors
    as starting point.  Returns refined finite residues or None."""
    from .fuchsian import _tr_gauss_newton, _fit_scale
    n = finite[0].shape[0]
    mats = list(finite) + [_cx(nu) * np.eye(n) - sum(finite)]
    gs, diags = [], []
    for a, values in zip(mats, exact_values):
        vals, vecs = np.linalg.eig(a)
        exact = np.array([_cx(v) for v in values])
        remaining = list(range(n))
        order = []
        for v in vals:
            k = min(remaining, key=lambda j: abs(exact[j] - v))
            order.append(k)
            remaining.remove(k)
        norms = np.linalg.norm(vecs, axis=0)
        gs.append(vecs / np.where(norms > 0, norms, 1.0))
        diags.append(np.diag(exact[order]))
    target = _cx(nu) * np.eye(n)
    goal = 1e-11 * _fit_scale(target, diags)
    rng = np.random.default_rng(5)
    start = gs
    for attempt in range(3):
        gs2, out, res = _tr_gauss_newton(start, diags, target, 2e-13,
                                         max_iters=60)
        if res <= goal:
            return out[:-1]
        start = [gk + 1e-3 * (attempt + 1) * (rng.standard_normal((n, n))
                                              + 1j * rng.standard_normal((n, n)))
                 for gk in gs]
    return None


def translate(sys: FuchsianSystem, mu, retries: int = 8) -> FuchsianSystem:
    """Translate by an integral level-zero weight vector: lam -> lam + mu,
    realised as a composition of elementary Schlesinger moves.  The first
    attempt pairs moves in lexicographic slot order; on degeneracy the
    pairing order is reshuffled and the run retried, and only if every
    order fails is the degeneracy surfaced.  The final tuple is re-anchored
    on the exact orbit data (the matrices are floating-point witnesses of
    the exact bookkeeping), which stops drift from accumulating along
    iterated orbits."""
    g = sys.graph
    mu = mu if isinstance(mu, ParamVector) else ParamVector(tuple(mu))
    if not weight_lattice_member(g, mu):
        raise ValueError("mu must be integral and level zero")
    sys0 = normalize(sys, "det_zero")
    lam_new, plans = _plan_moves(sys0, mu)
    failure = None
    # prefer strict move sequences; fall back to alternative plans, then to
    # looser guards (with the re-anchoring absorbing the drift) only when
    # every clean order fails
    for guard in (1e-10, 1e-8, 5e-7):
        for shifts, consts in plans:
            offsets = tuple(Fraction(c) for c in consts)
            target_values = [s.eigen_list()
                             for s in predicted_specs(g, lam_new, offsets)]
            for order_seed in range(retries):
                try:
                    finite = _run_moves(sys0, shifts, order_seed, guard)
                    polished = _polish_residues(finite, target_values, sys0.nu)
                    if polished is not None:
                        finite = polished
                    out = FuchsianSystem(
                        g, sys0.poles,
                        tuple(finite)
                        + (_cx(sys0.nu) * np.eye(sys0.n) - sum(finite),),
                        lam_new, offsets, sys0.nu, sys0.tol)
                    out.verify()
                    return normalize(out, "det_zero")
                except DegeneracyError as exc:
                    failure = exc
    raise DegeneracyError(f"translation failed for every move order "
                          f"(last: {failure})")


def dp_orbit(sys: FuchsianSystem, mu, steps: int, sig_len: int = 3):
    """Iterate translate, emitting (k, lam_k, signature_k) rows; row 0 is
    the starting system.  Long orbits may pass close to walls where the
    matrix witnesses honestly lose accuracy, so the per-step orbit checks
    run at the 1e-8 acceptance tolerance."""
    cur = replace(sys, tol=max(sys.tol, 1e-8))
    rows = [(0, cur.lam, signature(cur, sig_len))]
    for k in range(1, steps + 1):
        cur = translate(cur, mu)
        rows.append((k, cur.lam, signature(cur, sig_len)))
    return rows


# ---------------------------------------------------------------------------
# composite words


@dataclass(frozen=True)
class WeylWord:
    """Sequence of generator tags: ("leg", node), ("central",),
    ("tensor", c_1..c_{m-1}), ("relabel", leg permutation)."""

    tags: tuple

    def __iter__(self):
        return iter(self.tags)


def relabel_legs(sys: FuchsianSystem, perm) -> FuchsianSystem:
    """Permute equal-length finite legs (diagram automorphism, exposed as
    a parameter/residue permutation; experimental)."""
    g = sys.graph
    perm = tuple(perm)
    if sorted(perm) != list(range(g.num_legs)):
        raise ValueError("not a leg permutation")
    if perm[-1] != g.num_legs - 1:
        raise DegeneracyError("experimental: the infinity leg must stay fixed")
    for j, pj in enumerate(perm):
        if g.legs[j] != g.legs[pj]:
            raise ValueError("legs of different lengths cannot be relabelled")
    lam_vals = list(sys.lam.values)
    for j, pj in enumerate(perm):
        for dst, src in zip(g.leg_nodes(j), g.leg_nodes(pj)):
            lam_vals[dst] = sys.lam[src]
    finite = [sys.finite_residues[perm[j]] for j in range(sys.m - 1)]
    offsets = tuple(sys.offsets[perm[j]] for j in range(sys.m))
    return make_system(g, sys.poles, finite, ParamVector(tuple(lam_vals)),
                       offsets=offsets, tol=sys.tol)


def apply_word(sys: FuchsianSystem, word: WeylWord) -> FuchsianSystem:
    out = sys
    for tag in word:
        kind = tag[0]
        if kind == "leg":
            out = leg_reflection(out, int(tag[1]))
        elif kind == "central":
            out = central_reflection(out)
        elif kind == "tensor":
            out = tensor_shift(out, tag[1])
        elif kind == "relabel":
            out = relabel_legs(out, tag[1])
        elif kind == "translate":
            out = translate(out, tag[1])
        else:
            raise ValueError(f"unknown word tag {kind!r}")
    return out
