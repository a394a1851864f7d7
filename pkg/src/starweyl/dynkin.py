"""Star-shaped Dynkin diagrams and their Weyl groups, in exact arithmetic.

A star graph has one centre of degree m and m legs.  The affine types
handled here are recognised by their leg-length signatures

    D4: (1,1,1,1)    E6: (2,2,2)    E7: (1,3,3)    E8: (1,2,5)

Canonical node indexing: centre = 0, then the legs in nondecreasing length
order, walking outward, so a leg of length k occupies k consecutive
indices.  The extending node of an affine diagram is the free end of the
last (longest) leg, i.e. the node with the highest index.

Simple reflections act on integer root vectors by s_i(b) = b - (b, e_i) e_i
and dually on parameter vectors by r_i(lam) = lam - lam_i * alpha_i, where
alpha_i is the i-th row of the Cartan matrix read as an element of C^I.
Both are implemented exactly (Fraction / GaussianRational entries).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .ratlin import (
    GaussianRational,
    is_exact,
    mat,
    nullspace,
    smith_diagonal,
)

AFFINE_LEGS = {
    "D4": (1, 1, 1, 1),
    "E6": (2, 2, 2),
    "E7": (1, 3, 3),
    "E8": (1, 2, 5),
}

COXETER_NUMBER = {"D4": 6, "E6": 12, "E7": 18, "E8": 30}

# |W| for the finite Weyl groups, used only for divisibility spot checks
WEYL_ORDER = {"D4": 192, "E6": 51840, "E7": 2903040, "E8": 696729600}

AFFINE_TYPES = tuple(AFFINE_LEGS)


@dataclass(frozen=True)
class StarGraph:
    """Star-shaped graph with canonical node indexing (centre = 0)."""

    legs: tuple[int, ...]

    def __post_init__(self):
        legs = tuple(int(k) for k in self.legs)
        if len(legs) < 1 or any(k < 1 for k in legs):
            raise ValueError(f"invalid leg lengths {legs}")
        if tuple(sorted(legs)) != legs:
            legs = tuple(sorted(legs))
        object.__setattr__(self, "legs", legs)

    @classmethod
    def affine(cls, name: str) -> "StarGraph":
        if name not in AFFINE_LEGS:
            raise ValueError(f"unknown affine type {name!r}")
        return cls(AFFINE_LEGS[name])

    @property
    def num_legs(self) -> int:
        return len(self.legs)

    @property
    def node_count(self) -> int:
        return 1 + sum(self.legs)

    @property
    def center(self) -> int:
        return 0

    @property
    def extending(self) -> int:
        return self.node_count - 1

    def leg_nodes(self, j: int) -> tuple[int, ...]:
        """Node indices of leg j (0-based), from the centre outward."""
        start = 1 + sum(self.legs[:j])
        return tuple(range(start, start + self.legs[j]))

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Directed edges (tail, head), all pointing toward the centre."""
        out = []
        for j in range(self.num_legs):
            nodes = self.leg_nodes(j)
            prev = self.center
            for n in nodes:
                out.append((n, prev))
                prev = n
        return tuple(out)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj = [[] for _ in range(self.node_count)]
        for t, h in self.edges:
            adj[t].append(h)
            adj[h].append(t)
        return tuple(tuple(sorted(a)) for a in adj)

    def leg_of(self, node: int):
        """(leg index, 1-based position from centre) or None for the centre."""
        if node == self.center:
            return None
        for j in range(self.num_legs):
            nodes = self.leg_nodes(j)
            if node in nodes:
                return (j, nodes.index(node) + 1)
        raise ValueError(f"node {node} out of range")

    @cached_property
    def affine_type(self):
        for name, legs in AFFINE_LEGS.items():
            if self.legs == legs:
                return name
        return None

    @cached_property
    def cartan(self) -> "CartanMatrix":
        return cartan_matrix(self)

    @cached_property
    def delta(self) -> "RootVector":
        """Primitive integer kernel vector of the Cartan matrix (affine only)."""
        ker = nullspace(mat([[Fraction(x) for x in row]
                             for row in self.cartan.entries]))
        if len(ker) != 1:
            raise ValueError("graph is not of affine type: ker C is not a line")
        v = ker[0]
        denom = 1
        for x in v:
            denom = denom * x.denominator // _gcd(denom, x.denominator)
        ints = [int(x * denom) for x in v]
        g = 0
        for x in ints:
            g = _gcd(g, abs(x))
        ints = [x // g for x in ints]
        if ints[self.extending] < 0:
            ints = [-x for x in ints]
        assert ints[self.extending] == 1 and all(x > 0 for x in ints)
        return RootVector(tuple(ints))

    @property
    def finite_nodes(self) -> tuple[int, ...]:
        """All nodes except the extending one (contiguous by construction)."""
        return tuple(range(self.node_count - 1))

    def __repr__(self):
        t = self.affine_type
        return f"StarGraph{self.legs}" + (f"<affine {t}>" if t else "")


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a) if a else abs(b)


@dataclass(frozen=True)
class CartanMatrix:
    """C = 2*Id - A for the (simply laced) star graph."""

    entries: tuple[tuple[int, ...], ...]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def size(self) -> int:
        return len(self.entries)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    @cached_property
    def det(self) -> int:
        from .ratlin import det as _det
        d = _det(mat([[Fraction(x) for x in row] for row in self.entries]))
        assert d.denominator == 1
        return int(d)


def cartan_matrix(g: StarGraph) -> CartanMatrix:
    n = g.node_count
    a = [[0] * n for _ in range(n)]
    for t, h in g.edges:
        a[t][h] += 1
        a[h][t] += 1
    c = tuple(tuple((2 if i == j else 0) - a[i][j] for j in range(n))
              for i in range(n))
    return CartanMatrix(c)


def finite_cartan(g: StarGraph) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix restricted to the non-extending nodes."""
    fin = g.finite_nodes
    c = g.cartan.entries
    return tuple(tuple(c[i][j] for j in fin) for i in fin)


@dataclass(frozen=True)
class RootVector:
    """Integer vector over a node index set (roots, dimension vectors)."""

    coords: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords",
                           tuple(int(x) for x in self.coords))

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return len(self.coords)

    def __add__(self, other):
        return RootVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return RootVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return RootVector(tuple(-a for a in self.coords))

    def dot(self, values) -> object:
        """Pairing sum_i coords_i * values_i (values exact or numeric)."""
        acc = 0
        for c, v in zip(self.coords, values):
            acc = acc + c * v
        return acc


@dataclass(frozen=True)
class ParamVector:
    """Parameter vector lam over a node index set; entries exact or complex.

    The field tag is derived from the entries: "Q" (rationals), "Qi"
    (Gaussian rationals) or "C" (machine complex).
    """

    values: tuple

    def __post_init__(self):
        vals = []
        for v in self.values:
            if isinstance(v, int):
                v = Fraction(v)
            vals.append(v)
        object.__setattr__(self, "values", tuple(vals))

    @property
    def field(self) -> str:
        if all(isinstance(v, Fraction) for v in self.values):
            return "Q"
        if all(is_exact(v) for v in self.values):
            return "Qi"
        return "C"

    @property
    def exact(self) -> bool:
        return self.field in ("Q", "Qi")

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def level(self, delta: RootVector):
        """lam . delta = sum_i delta_i lam_i."""
        return delta.dot(self.values)

    def is_level_zero(self, delta: RootVector, tol: float = 1e-12) -> bool:
        lv = self.level(delta)
        if self.exact:
            return lv == 0
        return abs(complex(lv)) <= tol * max(1.0, max(abs(complex(v)) for v in self.values))

    def replace(self, i: int, value) -> "ParamVector":
        vals = list(self.values)
        vals[i] = value
        return ParamVector(tuple(vals))

    def __add__(self, other):
        ov = other.values if isinstance(other, ParamVector) else other
        return ParamVector(tuple(a + b for a, b in zip(self.values, ov)))

    def __sub__(self, other):
        ov = other.values if isinstance(other, ParamVector) else other
        return ParamVector(tuple(a - b for a, b in zip(self.values, ov)))

    def scale(self, c) -> "ParamVector":
        return ParamVector(tuple(c * v for v in self.values))


def reflect_root(g: StarGraph, i: int, beta: RootVector) -> RootVector:
    """s_i(beta) = beta - (beta, e_i) e_i with (,) the Cartan form."""
    c = g.cartan
    pairing = sum(c[i, j] * beta[j] for j in range(g.node_count))
    coords = list(beta.coords)
    coords[i] -= pairing
    return RootVector(tuple(coords))


def root_form(g: StarGraph, beta: RootVector, gamma: RootVector) -> int:
    """(beta, gamma) = beta^T C gamma."""
    c = g.cartan
    return sum(beta[i] * c[i, j] * gamma[j]
               for i in range(g.node_count) for j in range(g.node_count))


def alpha_vector(g: StarGraph, i: int) -> ParamVector:
    """alpha_i = sum_j (e_i, e_j) e_j as an element of C^I (lies in h)."""
    return ParamVector(tuple(Fraction(x) for x in g.cartan.row(i)))


def reflect_param(g: StarGraph, i: int, lam: ParamVector) -> ParamVector:
    """r_i(lam) = lam - lam_i * alpha_i."""
    li = lam[i]
    row = g.cartan.row(i)
    return ParamVector(tuple(v - li * c for v, c in zip(lam.values, row)))


def coxeter_exponent(g: StarGraph, i: int, j: int) -> int:
    """Order m_ij of r_i r_j: 3 if i,j joined by an edge, else 2."""
    if i == j:
        return 1
    return 3 if j in g.neighbors[i] else 2


# ---------------------------------------------------------------------------
# root enumeration (finite system living on the non-extending nodes)


def _resolve_graph(type_or_graph) -> StarGraph:
    if isinstance(type_or_graph, StarGraph):
        return type_or_graph
    return StarGraph.affine(type_or_graph)


def enumerate_roots(type_or_graph) -> tuple[RootVector, ...]:
    """All roots of the finite system, as coefficient vectors in the
    simple-root basis indexed by the non-extending nodes.

    Breadth-first closure of the simple roots under the simple reflections;
    no type-specific tables.
    """
    g = _resolve_graph(type_or_graph)
    c = finite_cartan(g)
    r = len(c)
    simple = [tuple(1 if k == i else 0 for k in range(r)) for i in range(r)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for root in frontier:
            for i in range(r):
                pairing = sum(c[i][j] * root[j] for j in range(r))
                refl = list(root)
                refl[i] -= pairing
                refl = tuple(refl)
                if refl not in seen:
                    seen.add(refl)
                    nxt.append(refl)
        frontier = nxt
    roots = sorted(seen, reverse=True)
    return tuple(RootVector(v) for v in roots)


def positive_roots(type_or_graph) -> tuple[RootVector, ...]:
    return tuple(r for r in enumerate_roots(type_or_graph)
                 if all(x >= 0 for x in r.coords))


def root_norm(g: StarGraph, root: RootVector) -> int:
    """((root, root)) in the finite form; equals 2 for every root."""
    c = finite_cartan(g)
    r = len(c)
    return sum(root[i] * c[i][j] * root[j] for i in range(r) for j in range(r))


def root_pairing(root: RootVector, lam: ParamVector):
    """((lam, root)) = sum_i c_i lam_i over the non-extending nodes.

    Valid for level-zero lam, where ((lam, alpha_i)) = lam_i.
    """
    return sum((c * lam[i] for i, c in enumerate(root.coords)), Fraction(0))


def is_regular(g: StarGraph, lam: ParamVector):
    """(flag, violated roots): flag is True iff no root pairing vanishes."""
    if lam.exact and not lam.is_level_zero(g.delta):
        raise ValueError("is_regular expects a level-zero parameter vector")
    violated = tuple(r for r in enumerate_roots(g) if root_pairing(r, lam) == 0)
    return (len(violated) == 0, violated)


def hyperplane_count(type_or_graph) -> int:
    return len(enumerate_roots(type_or_graph)) // 2


# ---------------------------------------------------------------------------
# weight lattice P(R) and the extended affine Weyl group


def weight_lattice_member(g: StarGraph, mu) -> bool:
    """mu in P(R) = { lam | lam_i in Z, lam . delta = 0 }."""
    vals = mu.values if isinstance(mu, ParamVector) else tuple(mu)
    ints = []
    for v in vals:
        if isinstance(v, int):
            ints.append(v)
        elif isinstance(v, Fraction) and v.denominator == 1:
            ints.append(int(v))
        elif isinstance(v, GaussianRational) and v.im == 0 and v.re.denominator == 1:
            ints.append(int(v.re))
        else:
            return False
    return g.delta.dot(ints) == 0


def weight_lattice_basis(g: StarGraph) -> tuple[RootVector, ...]:
    """Z-basis of P(R): for each non-extending node i the vector
    e_i - delta_i * e_ext."""
    delta = g.delta
    ext = g.extending
    basis = []
    for i in g.finite_nodes:
        v = [0] * g.node_count
        v[i] = 1
        v[ext] = -delta[i]
        basis.append(RootVector(tuple(v)))
    return tuple(basis)


def lattice_index(type_or_graph) -> int:
    """[P(R):Q(R)] = product of the Smith diagonal of the finite Cartan."""
    g = _resolve_graph(type_or_graph)
    d = smith_diagonal(finite_cartan(g))
    out = 1
    for x in d:
        out *= x
    return out


@dataclass(frozen=True)
class AffineWeylElement:
    """Word in the generators r_0..r_r plus an integral translation mu
    with mu . delta = 0.

    Acting on lam: first translate (lam + mu), then apply the word right
    to left, i.e. word (i1,...,ik) acts as r_i1 o ... o r_ik.
    """

    word: tuple[int, ...] = ()
    translation: tuple[int, ...] = ()

    @classmethod
    def identity(cls, g: StarGraph) -> "AffineWeylElement":
        return cls((), (0,) * g.node_count)

    def validate(self, g: StarGraph):
        if self.translation:
            if len(self.translation) != g.node_count:
                raise ValueError("translation length mismatch")
            if not weight_lattice_member(g, self.translation):
                raise ValueError("translation must be integral and level zero")
        for i in self.word:
            if not 0 <= i < g.node_count:
                raise ValueError(f"generator index {i} out of range")


def apply_affine(g: StarGraph, elt: AffineWeylElement, lam: ParamVector) -> ParamVector:
    elt.validate(g)
    out = lam
    if elt.translation:
        out = out + tuple(Fraction(t) for t in elt.translation)
    for i in reversed(elt.word):
        out = reflect_param(g, i, out)
    return out


def weyl_orbit(g: StarGraph, lam: ParamVector, nodes=None, limit: int = 10 ** 6):
    """Orbit of lam under the reflections r_i for i in nodes (exact BFS)."""
    if nodes is None:
        nodes = g.finite_nodes
    seen = {lam.values}
    frontier = [lam]
    while frontier:
        nxt = []
        for v in frontier:
            for i in nodes:
                w = reflect_param(g, i, v)
                if w.values not in seen:
                    seen.add(w.values)
                    nxt.append(w)
                    if len(seen) > limit:
                        raise RuntimeError("orbit exceeded limit")
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# experimental: diagram automorphisms exposed as parameter permutations


def leg_permutations(g: StarGraph) -> tuple[tuple[int, ...], ...]:
    """Permutations of equal-length legs (diagram automorphisms fixing the
    centre), as node permutations.  Experimental: only the induced
    parameter permutation is exposed, no sphere automorphism."""
    groups = {}
    for j, l in enumerate(g.legs):
        groups.setdefault(l, []).append(j)
    perms = []
    pools = [list(itertools.permutations(js)) for js in groups.values()]
    for combo in itertools.product(*pools):
        perm = list(range(g.node_count))
        for js, target in zip(groups.values(), combo):
            for src, dst in zip(js, target):
                for a, b in zip(g.leg_nodes(src), g.leg_nodes(dst)):
                    perm[a] = b
        perms.append(tuple(perm))
    return tuple(perms)


def permute_param(lam: ParamVector, perm: tuple[int, ...]) -> ParamVector:
    vals = [None] * len(perm)
    for src, dst in enumerate(perm):
        vals[dst] = lam[src]
    return ParamVector(tuple(vals))
