"""Fuchsian systems as residue tuples with prescribed adjoint orbits.

A system with poles a_1, ..., a_{m-1}, infinity is stored as the m-tuple
of residues (A_1, ..., A_m) with sum A_i = nu * Id; the actual residue at
infinity is A_m - nu.  The exact bookkeeping is a level-zero parameter
vector lam on the star graph whose legs encode the eigenvalue flags: the
leg attached to pole i carries the consecutive eigenvalue differences of
A_i, and in the determinant-zero normalisation the ordered eigenvalues
are 0 followed by the negated partial sums of the leg parameters, with
nu equal to the central component of lam.  Matrices are complex floating
point witnesses of this exact data; every constructor and operation
verifies them against it.
"""

from __future__ import annotations

import itertools
import random
import zlib
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import ratlin
from .dynkin import ParamVector, StarGraph
from .errors import DegenerateSampleError, DegeneracyError

DEFAULT_TOL = 1e-9

# finite pole positions, one per leg except the last (which sits at infinity)
DEFAULT_POLES = {3: (0.0, 1.0), 4: (0.0, -1.0, 1.0)}


@dataclass(frozen=True)
class OrbitSpec:
    """Ordered eigenvalue list with multiplicities for one residue.

    The order is semantic (it is fixed by the exact lam data, never by
    numeric sorting); entries are (exact eigenvalue, multiplicity).
    """

    size: int
    entries: tuple
    semisimple: bool = True

    def __post_init__(self):
        ent = tuple((v if ratlin.is_exact(v) else Fraction(v), int(m))
                    for v, m in self.entries)
        if sum(m for _, m in ent) != self.size:
            raise ValueError("multiplicities must sum to the size")
        if any(m <= 0 for _, m in ent):
            raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "entries", ent)

    @property
    def values(self):
        return tuple(v for v, _ in self.entries)

    @property
    def mults(self):
        return tuple(m for _, m in self.entries)

    @property
    def first(self):
        return self.entries[0][0]

    @property
    def width(self) -> int:
        """Degree of the minimal polynomial (number of listed eigenvalues)."""
        return len(self.entries)

    def eigen_list(self):
        """All eigenvalues with multiplicity, exact."""
        out = []
        for v, m in self.entries:
            out.extend([v] * m)
        return tuple(out)

    def eigen_complex(self) -> np.ndarray:
        return np.array([ratlin.to_complex(v) for v in self.eigen_list()])

    def trace(self):
        return sum((v * m for v, m in self.entries), Fraction(0))

    def char_poly(self):
        return ratlin.poly_from_roots(self.entries)

    def char_poly_complex(self) -> np.ndarray:
        return np.array([ratlin.to_complex(c) for c in self.char_poly()])

    def shifted(self, c) -> "OrbitSpec":
        return OrbitSpec(self.size, tuple((v + c, m) for v, m in self.entries),
                         self.semisimple)

    def generic_rank(self) -> int:
        """Rank of a generic element (size minus the multiplicity of 0)."""
        z = sum(m for v, m in self.entries if v == 0)
        return self.size - z


def orbit_from_leg(n: int, leg_dims, leg_params, first=Fraction(0)) -> OrbitSpec:
    """Determinant-zero orbit spec read off a leg.

    leg_dims and leg_params run from the node adjacent to the centre
    outward; the ordered eigenvalues are first, then first minus the
    partial sums of the parameters, with multiplicities given by the
    consecutive dimension drops (n at the centre).
    """
    dims = [n] + [int(d) for d in leg_dims] + [0]
    if any(a <= b for a, b in zip(dims, dims[1:])):
        raise ValueError("leg dimensions must strictly decrease")
    entries = []
    val = first if ratlin.is_exact(first) else Fraction(first)
    for j in range(len(dims) - 1):
        mult = dims[j] - dims[j + 1]
        if mult < 0:
            raise ValueError("leg dimensions must strictly decrease")
        if mult > 0:
            if entries and entries[-1][0] == val:
                # vanishing leg parameters collapse flag steps (closures)
                entries[-1] = (val, entries[-1][1] + mult)
            else:
                entries.append((val, mult))
        if j < len(leg_params):
            val = val - leg_params[j]
    return OrbitSpec(n, tuple(entries))


def leg_from_orbit(spec: OrbitSpec) -> tuple[int, ...]:
    """Leg dimensions n_j = rank (A - xi_1)...(A - xi_j), inverse to
    orbit_from_leg on generic specs."""
    n = spec.size
    dims = []
    acc = 0
    for _, m in spec.entries[:-1]:
        acc += m
        dims.append(n - acc)
    return tuple(dims)


def predicted_specs(g: StarGraph, lam: ParamVector, offsets=None) -> tuple[OrbitSpec, ...]:
    """Orbit specs of all m residues predicted by lam (det-zero plus the
    given per-pole scalar offsets)."""
    delta = g.delta
    n = delta[g.center]
    if offsets is None:
        offsets = (Fraction(0),) * g.num_legs
    out = []
    for j in range(g.num_legs):
        nodes = g.leg_nodes(j)
        out.append(orbit_from_leg(n, [delta[k] for k in nodes],
                                  [lam[k] for k in nodes], offsets[j]))
    return tuple(out)


def char_poly_error(a: np.ndarray, spec: OrbitSpec) -> float:
    """Relative coefficient distance between charpoly(a) and the spec's."""
    actual = np.poly(np.asarray(a, dtype=complex))
    target = spec.char_poly_complex()
    scale = max(1.0, float(np.max(np.abs(target))))
    return float(np.max(np.abs(actual - target))) / scale


@dataclass(frozen=True)
class FuchsianSystem:
    """Residue tuple (A_1, ..., A_m) with sum A_i = nu * Id.

    residues holds all m matrices; poles holds the m-1 finite pole
    positions (the last pole is infinity, whose actual residue is
    A_m - nu).  lam is the exact level-zero parameter vector, specs the
    exact per-pole ordered eigenvalue data, offsets the per-pole first
    eigenvalues (all zero in the determinant-zero normalisation).
    """

    graph: StarGraph
    poles: tuple
    residues: tuple
    lam: ParamVector
    offsets: tuple
    nu: object
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        res = tuple(np.asarray(a, dtype=complex) for a in self.residues)
        for a in res:
            a.setflags(write=False)
        object.__setattr__(self, "residues", res)
        object.__setattr__(self, "poles", tuple(complex(p) for p in self.poles))

    # -- structure ----------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.residues)

    @property
    def n(self) -> int:
        return self.residues[0].shape[0]

    @property
    def finite_residues(self) -> tuple:
        return self.residues[:-1]

    @property
    def residue_at_infinity(self) -> np.ndarray:
        return self.residues[-1] - ratlin.to_complex(self.nu) * np.eye(self.n)

    @property
    def specs(self) -> tuple[OrbitSpec, ...]:
        return predicted_specs(self.graph, self.lam, self.offsets)

    @property
    def normalization(self) -> str:
        if all(o == 0 for o in self.offsets):
            return "det_zero"
        if all(s.trace() == 0 for s in self.specs):
            return "trace_zero"
        return "none"

    def rhs(self, z: complex) -> np.ndarray:
        """The rational matrix A(z) = sum A_i / (z - a_i) of the system."""
        acc = np.zeros((self.n, self.n), dtype=complex)
        for a, p in zip(self.finite_residues, self.poles):
            acc += a / (z - p)
        return acc

    # -- verification -------------------------------------------------------

    def verify(self):
        """Check the matrices against the exact bookkeeping; raise on
        failure.  Returns the worst relative orbit error."""
        g = self.graph
        if len(self.poles) != g.num_legs - 1:
            raise ValueError("pole count must match the number of legs minus one")
        if len(set(self.poles)) != len(self.poles):
            raise ValueError("finite poles must be distinct")
        if self.lam.exact and not self.lam.is_level_zero(g.delta):
            raise ValueError("lam must be level zero")
        specs = self.specs
        nu_expected = self.lam[g.center] + sum(self.offsets, Fraction(0))
        if ratlin.is_exact(self.nu) and self.nu != nu_expected:
            raise ValueError("nu inconsistent with lam and offsets")
        scale = sum(float(np.linalg.norm(a)) for a in self.residues)
        total = sum(self.residues) - ratlin.to_complex(self.nu) * np.eye(self.n)
        if float(np.linalg.norm(total)) > 1e-10 * max(1.0, scale):
            raise ValueError("residues do not sum to nu * Id")
        worst = 0.0
        for a, s in zip(self.residues, specs):
            err = char_poly_error(a, s)
            worst = max(worst, err)
            if err > self.tol:
                raise DegeneracyError(
                    f"residue is {err:.2e} away from its orbit spec (tol {self.tol:.1e})")
        return worst

    def with_residues(self, finite, nu=None, lam=None, offsets=None,
                      verify: bool = True) -> "FuchsianSystem":
        nu = self.nu if nu is None else nu
        lam = self.lam if lam is None else lam
        offsets = self.offsets if offsets is None else tuple(offsets)
        n = finite[0].shape[0]
        a_m = ratlin.to_complex(nu) * np.eye(n) - sum(finite)
        sys2 = FuchsianSystem(self.graph, self.poles, tuple(finite) + (a_m,),
                              lam, offsets, nu, self.tol)
        if verify:
            sys2.verify()
        return sys2


def make_system(graph: StarGraph, poles, finite_residues, lam: ParamVector,
                offsets=None, tol: float = DEFAULT_TOL,
                verify: bool = True) -> FuchsianSystem:
    """Assemble a FuchsianSystem from its finite residues; A_m is filled in
    from the scalar constraint."""
    offsets = tuple(offsets) if offsets is not None \
        else (Fraction(0),) * graph.num_legs
    nu = lam[graph.center] + sum(offsets, Fraction(0))
    finite = [np.asarray(a, dtype=complex) for a in finite_residues]
    n = finite[0].shape[0]
    a_m = ratlin.to_complex(nu) * np.eye(n) - sum(finite)
    sys = FuchsianSystem(graph, tuple(poles), tuple(finite) + (a_m,),
                         lam, offsets, nu, tol)
    if verify:
        sys.verify()
    return sys


# ---------------------------------------------------------------------------
# sampling


_NODE_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def random_regular_lam(g: StarGraph, rng: random.Random, max_tries: int = 400,
                       margin: float = 0.05) -> ParamVector:
    """Random exact rational level-zero lam off every root hyperplane.

    Each non-central node draws numerator/prime-denominator with a prime
    of its own, which makes every within-pole eigenvalue difference (a sum
    of the parameters over a run of distinct nodes) provably non-integral,
    so elementary Schlesinger moves can never collide two exponents.  On
    top of that, root pairings must stay `margin` away from zero and the
    within-pole differences a little away from integer neighbourhoods, to
    keep the draw a well-conditioned floating-point witness."""
    from .dynkin import enumerate_roots, root_pairing
    delta = g.delta
    c = g.center
    roots = enumerate_roots(g)
    primes = _NODE_PRIMES
    if g.node_count - 1 > len(primes):
        raise ValueError("graph too large for the prime-denominator draw")
    for _ in range(max_tries):
        vals = [Fraction(0)] * g.node_count
        k = 0
        for node in range(g.node_count):
            if node == c:
                continue
            p = primes[k]
            k += 1
            num = 0
            while num == 0 or num % p == 0:
                num = rng.randint(-4 * p, 4 * p)
            vals[node] = Fraction(num, p)
        rest = sum(d * v for j, (d, v) in enumerate(zip(delta.coords, vals)) if j != c)
        vals[c] = Fraction(-rest, delta[c])
        lam = ParamVector(tuple(vals))
        if lam[c] == 0:
            continue
        if min(abs(float(root_pairing(r, lam))) for r in roots) < margin:
            continue
        diffs = []
        for spec in predicted_specs(g, lam):
            vs = spec.values
            diffs.extend(float(a - b) for i, a in enumerate(vs)
                         for b in vs[i + 1:])
        if all(abs(d - round(d)) >= 0.02 for d in diffs):
            return lam
    raise DegenerateSampleError("could not sample a regular lam")


def _fit_scale(target, diags) -> float:
    return max(1.0, float(np.linalg.norm(target)),
               max(float(np.linalg.norm(d)) for d in diags))


def _tr_gauss_newton(gs, diags, target, tol, max_iters=500):
    """Trust-region Gauss-Newton for sum_k g_k D_k g_k^{-1} = target,
    acting on the conjugators.  Returns (gs, mats, residual)."""
    n = target.shape[0]
    eye = np.eye(n)
    k = len(diags)
    scale = _fit_scale(target, diags)

    def normalize_cols(g):
        # g D g^{-1} is invariant under right-multiplication by diagonals,
        # so column rescaling costs nothing and keeps g well conditioned
        norms = np.linalg.norm(g, axis=0)
        return g / np.where(norms > 0, norms, 1.0)

    def assemble(gs):
        mats = [g @ d @ np.linalg.inv(g) for g, d in zip(gs, diags)]
        return mats, sum(mats) - target

    gs = [normalize_cols(g) for g in gs]
    mats, f = assemble(gs)
    res = float(np.linalg.norm(f))
    radius = 0.5
    for _ in range(max_iters):
        if res < tol * scale:
            break
        jac = np.hstack([np.kron(eye, a.T) - np.kron(a, eye) for a in mats])
        x, *_ = np.linalg.lstsq(jac, -f.ravel(), rcond=None)
        nx = float(np.linalg.norm(x))
        if nx > radius:
            x = x * (radius / nx)
        xs = x.reshape(k, n, n)
        step = 1.0
        accepted = False
        for _ in range(10):
            cand = [normalize_cols((eye + step * xk) @ g)
                    for xk, g in zip(xs, gs)]
            try:
                mats_c, f_c = assemble(cand)
            except np.linalg.LinAlgError:
                step /= 2
                continue
            res_c = float(np.linalg.norm(f_c))
            if res_c < res * (1 - 1e-4 * step):
                gs, mats, f, res = cand, mats_c, f_c, res_c
                accepted = True
                break
            step /= 2
        if accepted and step == 1.0:
            radius = min(radius * 1.6, 20.0)
        elif accepted:
            radius = max(radius * step, 1e-6)
        else:
            radius /= 3
            if radius < 1e-6:
                break
    return gs, mats, res


def _draw_starts(n, count, style, rng):
    eye = np.eye(n)
    if style == 0:
        return [np.linalg.qr(rng.standard_normal((n, n))
                             + 1j * rng.standard_normal((n, n)))[0]
                for _ in range(count)]
    pert = (0.3, 0.6, 1.0, 1.6)[style - 1]
    return [eye + pert * (rng.standard_normal((n, n))
                          + 1j * rng.standard_normal((n, n)))
            for _ in range(count)]


def _fit_orbit_sum(target: np.ndarray, specs, rng: np.random.Generator,
                   tol: float = 2e-11, styles=(1, 0, 2, 3),
                   max_iters: int = 150, homotopy: bool = False):
    """Find A_k in the orbit of specs[k] with sum A_k = target, or None.

    Direct trust-region Gauss-Newton from the given starting styles,
    optionally followed by a continuation that walks the target from a
    self-generated solvable sum (whose exact solution is the starting
    point) to the requested one with warm starts.
    """
    n = target.shape[0]
    diags = [np.diag(s.eigen_complex()) for s in specs]
    scale = _fit_scale(target, diags)

    # different instances favour different starting basins, so cycle the
    # initialisation style
    for style in styles:
        gs = _draw_starts(n, len(specs), style, rng)
        gs, mats, res = _tr_gauss_newton(gs, diags, target, tol, max_iters)
        if res < tol * scale:
            return mats

    if homotopy:
        for _ in range(2):
            gs = _draw_starts(n, len(specs), 2, rng)
            m0 = sum(g @ d @ np.linalg.inv(g) for g, d in zip(gs, diags))
            t_lo, t_step = 0.0, 0.25
            t = t_step
            for _ in range(60):
                tt = (1 - t) * m0 + t * target
                gs_new, mats, res = _tr_gauss_newton(gs, diags, tt, tol,
                                                     max_iters=150)
                if res < tol * _fit_scale(tt, diags):
                    gs = gs_new
                    if t >= 1.0:
                        return mats
                    t_lo, t_step = t, min(t_step * 2, 1.0 - t)
                    t = min(1.0, t + t_step)
                else:
                    t_step /= 2
                    t = t_lo + t_step
                    if t_step < 1e-5:
                        break
    return None


def sample_system(type_name: str, seed: int, tol: float = DEFAULT_TOL,
                  poles=None):
    """Seeded random Fuchsian system of the given affine type, det-zero
    normalised, with exact regular lam.  Returns (system, lam).

    One pole is put in diagonal form and the remaining residues are fitted
    to the complementary sum; which pole is pinned is cycled when the fit
    resists, and as a last resort a fresh lam is drawn (the documented
    retry on degenerate samples).  Deterministic for a given seed.
    """
    g = StarGraph.affine(type_name)
    rng_exact = random.Random(f"starweyl/{type_name}/{seed}")
    rng_np = np.random.default_rng([zlib.crc32(type_name.encode()), seed])
    if poles is None:
        poles = DEFAULT_POLES[g.num_legs]
    m = g.num_legs
    n = g.delta[g.center]
    eye = np.eye(n)
    pivots = [m - 1] + list(range(m - 1))
    # escalation ladder: quick pass over all pivot choices, resample lam on
    # failure (fresh draws are almost always easy), escalate only if several
    # consecutive draws resist
    quick = dict(styles=(1, 0), max_iters=150, homotopy=False)
    heavy = dict(styles=(2, 3, 1, 0), max_iters=400, homotopy=True)
    for attempt in range(8):
        lam = random_regular_lam(g, rng_exact)
        specs = predicted_specs(g, lam)
        nu_c = ratlin.to_complex(lam[g.center])
        opts = quick if attempt < 3 else heavy
        for pivot in pivots:
            target = nu_c * eye - np.diag(specs[pivot].eigen_complex())
            others = [s for k, s in enumerate(specs) if k != pivot]
            fitted = _fit_orbit_sum(target, others, rng_np, **opts)
            if fitted is None:
                continue
            mats = fitted[:pivot] + [np.diag(specs[pivot].eigen_complex())] \
                + fitted[pivot:]
            sys = make_system(g, poles, mats[:-1], lam, tol=tol)
            return sys, lam
    raise DegenerateSampleError(
        f"sampling {type_name} with seed {seed} kept hitting degenerate fits")


# ---------------------------------------------------------------------------
# normalisation, irreducibility, signatures


def normalize(sys: FuchsianSystem, mode: str) -> FuchsianSystem:
    """Fix the scalar-tensoring freedom: mode "det_zero" zeroes the first
    eigenvalue of every residue, "trace_zero" makes every residue
    traceless.  The level-zero lam is untouched."""
    specs = sys.specs
    if mode == "det_zero":
        shifts = [s.first for s in specs]
    elif mode == "trace_zero":
        shifts = [Fraction(s.trace(), s.size) if isinstance(s.trace(), (int, Fraction))
                  else s.trace() / s.size for s in specs]
    else:
        raise ValueError(f"unknown normalisation {mode!r}")
    if all(c == 0 for c in shifts):
        return sys
    finite = [a - ratlin.to_complex(c) * np.eye(sys.n)
              for a, c in zip(sys.finite_residues, shifts[:-1])]
    offsets = tuple(o - c for o, c in zip(sys.offsets, shifts))
    return sys.with_residues(finite, nu=sys.nu - sum(shifts, Fraction(0)),
                             offsets=offsets)


def algebra_dimension(mats, tol: float = 1e-9) -> int:
    """Dimension of the unital algebra generated by the matrices (span of
    all words, grown incrementally with an orthonormal basis)."""
    n = mats[0].shape[0]
    basis = []

    def try_add(m):
        v = m.ravel().astype(complex)
        nrm0 = float(np.linalg.norm(v))
        for b in basis:
            v = v - np.vdot(b, v) * b
        nrm = float(np.linalg.norm(v))
        if nrm > tol * max(1.0, nrm0):
            basis.append(v / nrm)
            return True
        return False

    frontier = []
    if try_add(np.eye(n)):
        frontier.append(np.eye(n))
    while frontier:
        nxt = []
        for w in frontier:
            for g in mats:
                cand = g @ w
                if try_add(cand):
                    nxt.append(cand)
        frontier = nxt
    return len(basis)


def is_irreducible(sys: FuchsianSystem, tol: float = 1e-9) -> bool:
    """Burnside criterion: the finite residues generate the full matrix
    algebra iff no simultaneous block triangularisation exists."""
    n = sys.n
    return algebra_dimension(list(sys.finite_residues), tol) == n * n


@dataclass(frozen=True)
class Signature:
    """Traces of words in the finite residues, in deterministic order
    (lengths 1..L, lexicographic)."""

    length: int
    values: tuple

    def distance(self, other: "Signature") -> float:
        if self.length != other.length or len(self.values) != len(other.values):
            raise ValueError("signatures of different shape")
        scale = max(1.0, max(abs(v) for v in self.values))
        return max(abs(a - b) for a, b in zip(self.values, other.values)) / scale


def signature(sys: FuchsianSystem, length: int = 4) -> Signature:
    mats = sys.finite_residues
    vals = []
    for l in range(1, length + 1):
        for word in itertools.product(range(len(mats)), repeat=l):
            acc = mats[word[0]]
            for i in word[1:]:
                acc = acc @ mats[i]
            vals.append(complex(np.trace(acc)))
    return Signature(length, tuple(vals))


def conjugated(sys: FuchsianSystem, gmat: np.ndarray) -> FuchsianSystem:
    """Simultaneous conjugation witness (same exact data)."""
    ginv = np.linalg.inv(gmat)
    finite = [gmat @ a @ ginv for a in sys.finite_residues]
    return sys.with_residues(finite)
