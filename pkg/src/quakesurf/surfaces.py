"""Marked hyperbolic cone surfaces from block data.

A surface is assembled from hyperbolic building blocks glued along pants
curves:

  * ``cone_pants2`` -- disk with two cone points and one geodesic boundary;
  * ``cone_pants1`` -- annulus with one cone point and two geodesic boundaries;
  * ``pants``       -- classical three-holed sphere.

Supported decomposition shapes: a linear chain of blocks realizing an
n-cone sphere (n >= 4), and a single self-glued ``cone_pants1`` realizing
the one-cone torus.  Each block is produced in a normalized position by a
monotone one-dimensional trace bisection, which doubles as the existence
certificate for the input data.

Orientation conventions (used by the earthquake cocycle as well): pants
curve holonomies are oriented by their own translation direction; the
Fenchel-Nielsen twist t inserts translation_along(curve axis, t) into the
gluing; all blocks are built so that glued neighbours develop on opposite
sides of the shared axis (checked at assembly time).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import halfplane as hp
from .errors import (AssemblyError, ClassMismatchError, ExistenceError,
                     IncomparableMarkingError, UnsupportedCurveError)
from .halfplane import (GeodesicLine, HypPoint, Isometry, axis,
                        axis_to_imaginary, classify, fixed_point, side_of,
                        translation_along)
from . import kernels

RELATOR_TOL = 1e-9
PERIPHERAL_TOL = 1e-9


def check_cone_angles(angles):
    angles = tuple(float(t) for t in angles)
    for t in angles:
        if not (0.0 < t < math.pi):
            raise ValueError(f"cone angle {t} outside (0, pi)")
    return angles


# ------------------------------------------------------------------ blocks

def _target_trace(length):
    return -2.0 * math.cosh(length / 2.0)


def _solve_monotone(f, target, lo, hi_start, increasing, what):
    """Root of f(v) = target for monotone f, expanding the upper bracket."""
    g = (lambda v: f(v) - target)
    hi = hi_start
    for _ in range(80):
        if g(lo) * g(hi) < 0:
            return brentq(g, lo, hi, xtol=1e-14, rtol=1e-15)
        hi *= 2.0
        if hi > 1e9:
            break
    raise ExistenceError(
        f"{what}: trace target {target} (|tr| = {-target}) not attained on "
        f"({lo}, {hi}); boundary data violates the existence bound")


def build_cone_pants(theta1, theta2, length):
    """Two-cone block: A, B elliptic about imaginary-axis points, C = (AB)^-1.

    The separation d of the rotation centers solves
    tr(AB) = 2 cos(t1/2) cos(t2/2) - 2 cosh(d) sin(t1/2) sin(t2/2) =
    -2 cosh(length/2); the left side is strictly decreasing in d, so the
    bisection both finds d and certifies existence.
    """
    (theta1, theta2) = check_cone_angles((theta1, theta2))
    if length <= 0:
        raise ValueError("boundary length must be positive")
    c1, s1 = math.cos(theta1 / 2), math.sin(theta1 / 2)
    c2, s2 = math.cos(theta2 / 2), math.sin(theta2 / 2)

    def tr(d):
        return 2 * c1 * c2 - 2 * math.cosh(d) * s1 * s2

    d = _solve_monotone(tr, _target_trace(length), 1e-9, 4.0, False, "cone_pants2")
    A = hp.rotation_about(HypPoint(0.0, 1.0), theta1)
    B = hp.rotation_about(HypPoint(0.0, math.exp(d)), theta2)
    C = (A @ B).inverse()
    return A, B, C, d


def build_cone_pants1(theta, len1, len2):
    """One-cone block: E elliptic at i, D1/D2 hyperbolic of lengths len1/len2,
    with E D1 D2 = Id.  D1 runs along the geodesic (e^v -> e^-v); v solves
    tr(E D1) = -2 cosh(len2/2), strictly increasing in v.
    """
    (theta,) = check_cone_angles((theta,))
    if len1 <= 0 or len2 <= 0:
        raise ValueError("boundary lengths must be positive")
    c0, s0 = math.cos(theta / 2), math.sin(theta / 2)
    ch1 = math.cosh(len1 / 2)
    sh1 = math.sinh(len1 / 2)

    def tr(v):
        return 2 * c0 * ch1 - 2 * s0 * sh1 / math.sinh(v)

    v = _solve_monotone(tr, _target_trace(len2), 1e-9, 4.0, True, "cone_pants1")
    E = hp.rotation_about(HypPoint(0.0, 1.0), theta)
    D1 = translation_along(GeodesicLine(math.exp(v), math.exp(-v)), len1)
    D2 = (E @ D1).inverse()
    return E, D1, D2, v


def build_pants(len1, len2, len3):
    """Classical pants block: X1 X2 X3 = Id with prescribed boundary lengths."""
    if min(len1, len2, len3) <= 0:
        raise ValueError("boundary lengths must be positive")
    a = math.cosh((len1 - len2) / 2)
    b = math.cosh((len1 + len2) / 2)

    def tr(v):
        return (a * math.exp(v) - b * math.exp(-v)) / math.sinh(v)

    v = _solve_monotone(tr, _target_trace(len3), 1e-9, 4.0, True, "pants")
    X1 = translation_along(hp.IMAGINARY_AXIS, len1)
    X2 = translation_along(GeodesicLine(math.exp(v), math.exp(-v)), len2)
    X3 = (X1 @ X2).inverse()
    return X1, X2, X3, v


# ------------------------------------------------------------------ data model

@dataclass(frozen=True)
class BlockSpec:
    kind: str                  # "cone_pants2" | "cone_pants1" | "pants"
    cones: tuple[int, ...]     # indices into the angle list


@dataclass(frozen=True)
class Gluing:
    a: tuple[int, str]         # (block index, slot name)
    b: tuple[int, str]
    curve: str


@dataclass(frozen=True)
class BlockDecomposition:
    genus: int
    n_cones: int
    blocks: tuple[BlockSpec, ...]
    gluings: tuple[Gluing, ...]

    def curve_names(self):
        return [g.curve for g in self.gluings]

    def signature(self):
        return (self.genus, self.n_cones,
                tuple((b.kind, b.cones) for b in self.blocks),
                tuple((g.a, g.b, g.curve) for g in self.gluings))

    def recipe(self) -> str:
        """Identify the supported assembly recipe, or raise."""
        if (self.genus == 1 and self.n_cones == 1 and len(self.blocks) == 1
                and self.blocks[0].kind == "cone_pants1" and len(self.gluings) == 1
                and self.gluings[0].a[0] == 0 and self.gluings[0].b[0] == 0):
            return "torus"
        n = self.n_cones
        k = len(self.blocks) - 2
        if (self.genus == 0 and n >= 4 and k >= 0 and n == k + 4
                and self.blocks[0].kind == "cone_pants2"
                and self.blocks[-1].kind == "cone_pants2"
                and all(b.kind == "cone_pants1" for b in self.blocks[1:-1])
                and len(self.gluings) == k + 1):
            return "chain"
        raise AssemblyError(
            "unsupported block decomposition: expected a linear sphere chain "
            "(cone_pants2, cone_pants1*, cone_pants2) or a self-glued "
            "cone_pants1 torus")


def chain_decomposition(n_cones: int) -> BlockDecomposition:
    """Linear decomposition of the n-cone sphere (n >= 4)."""
    if n_cones < 4:
        raise ValueError("sphere chain needs at least 4 cone points")
    k = n_cones - 4
    blocks = [BlockSpec("cone_pants2", (0, 1))]
    blocks += [BlockSpec("cone_pants1", (j + 2,)) for j in range(k)]
    blocks += [BlockSpec("cone_pants2", (n_cones - 2, n_cones - 1))]
    gluings = []
    for j in range(k + 1):
        a = (j, "bdry" if j == 0 else "d1")
        b = (j + 1, "bdry" if j == k else "d2")
        gluings.append(Gluing(a, b, f"c{j + 1}"))
    return BlockDecomposition(0, n_cones, tuple(blocks), tuple(gluings))


def torus_decomposition() -> BlockDecomposition:
    return BlockDecomposition(1, 1, (BlockSpec("cone_pants1", (0,)),),
                              (Gluing((0, "d1"), (0, "d2"), "c1"),))


@dataclass(frozen=True)
class CurveClass:
    """Free homotopy class given by a word in the marking generators."""

    word: tuple[int, ...]          # signed 1-based generator indices
    simple: bool = False
    peripheral: int | None = None
    name: str | None = None

    def inverse(self):
        return CurveClass(tuple(-s for s in reversed(self.word)),
                          self.simple, self.peripheral)

    def power(self, k: int):
        if k < 0:
            return self.inverse().power(-k)
        return CurveClass(self.word * k, False, self.peripheral)


@dataclass(frozen=True)
class Crossing:
    """One wall crossing of a marking path: which curve, which lift, which way."""

    curve: str
    conj: Isometry      # lift = conj . base_lift(curve)
    sign: int           # +1 when the path crosses left-to-right of the lift


@dataclass
class Marking:
    gen_names: list[str]
    relator: tuple[int, ...] | None
    peripheral_words: list[tuple[int, ...]]
    curve_words: dict[str, tuple[int, ...]]
    transversal_words: dict[str, tuple[int, ...]]
    product_words: dict[str, tuple[int, ...]]
    intersections: dict[str, dict[str, int]]   # class name -> curve -> i

    def determining_system(self):
        out = []
        for c in self.curve_words:
            out.append((f"curve:{c}", self.curve_words[c]))
            out.append((f"trans:{c}", self.transversal_words[c]))
            out.append((f"prod:{c}", self.product_words[c]))
        return out

    def curve_class(self, name: str) -> CurveClass:
        if name in self.curve_words:
            return CurveClass(self.curve_words[name], simple=True, name=name)
        for prefix, table in (("trans:", self.transversal_words),
                              ("prod:", self.product_words)):
            if name.startswith(prefix) and name[len(prefix):] in table:
                key = name[len(prefix):]
                return CurveClass(table[key], simple=(prefix == "trans:"), name=name)
        raise KeyError(f"unknown curve class {name!r}")


@dataclass
class ConeSurface:
    """Marked hyperbolic cone structure with cached holonomy.

    Immutable by convention after assembly; all operations are pure.
    """

    angles: tuple[float, ...]
    decomposition: BlockDecomposition
    fn: dict[str, tuple[float, float]]          # curve -> (length, twist)
    marking: Marking
    gen_images: dict[str, Isometry]
    base_lifts: dict[str, GeodesicLine]         # oriented axis of each curve's holonomy
    itineraries: dict[str, list[Crossing]]      # generator -> wall crossings of its path
    region_refs: list[HypPoint] = field(default_factory=list)
    wall_signs: dict[str, int] = field(default_factory=dict)
    gen_blocks: dict[str, int] = field(default_factory=dict)
    _spectrum_cache: dict = field(default_factory=dict, repr=False)

    # -- words ---------------------------------------------------------

    def image_of(self, word) -> Isometry:
        m = np.eye(2)
        for s in word:
            g = self.gen_images[self.marking.gen_names[abs(s) - 1]]
            m = m @ (g.m if s > 0 else g.inverse().m)
        return Isometry.from_matrix(m) if not np.allclose(m, np.eye(2)) else Isometry.identity()

    def relator_residual(self) -> float:
        if self.marking.relator is None:
            return 0.0
        m = self.image_of(self.marking.relator).m
        return float(min(np.max(np.abs(m - np.eye(2))), np.max(np.abs(m + np.eye(2)))))

    def relator_scale(self) -> float:
        """Largest entry among partial products of the relator (conditioning)."""
        if self.marking.relator is None:
            return 1.0
        m = np.eye(2)
        scale = 1.0
        for s in self.marking.relator:
            g = self.gen_images[self.marking.gen_names[abs(s) - 1]]
            m = m @ (g.m if s > 0 else g.inverse().m)
            scale = max(scale, float(np.max(np.abs(m))), float(np.max(np.abs(g.m))))
        return scale

    def peripheral_angles(self) -> list[float]:
        out = []
        for w in self.marking.peripheral_words:
            c = classify(self.image_of(w))
            if c.kind != "elliptic":
                raise AssemblyError(f"peripheral word {w} is {c.kind}, not elliptic")
            out.append(c.angle)
        return out


def holonomy_word_matrices(surface: ConeSurface):
    gens = np.array([surface.gen_images[g].m for g in surface.marking.gen_names])
    return kernels._prepare_gens(gens)


# ------------------------------------------------------------------ assembly

def _lam(t):
    e = math.exp(t / 2.0)
    return Isometry(e, 0.0, 0.0, 1.0 / e)


def _midpoint(p: HypPoint, q: HypPoint) -> HypPoint:
    d = hp.dist(p, q)
    if d < 1e-12:
        return p
    g = hp.geodesic_through(p, q)
    return translation_along(g, d / 2.0).apply(p)


_K = Isometry(0.0, 1.0, -1.0, 0.0)   # half turn about i; reverses the imaginary axis


def _slot_normalizer(X: Isometry) -> Isometry:
    """N with N X N^-1 = diag(e^{l/2}, e^{-l/2})."""
    return axis_to_imaginary(axis(X))


def _crossing_sign(lift: GeodesicLine, p_from: HypPoint, p_to: HypPoint) -> int:
    s0, s1 = side_of(p_from, lift), side_of(p_to, lift)
    if s0 == s1 or 0 in (s0, s1):
        raise AssemblyError("reference points do not straddle the expected wall")
    return 1 if s0 > 0 else -1     # left(+1) -> right(-1) counts as +1


def relator_gate(surface: "ConeSurface") -> float:
    """Accepted relator residual: the 1e-9 contract, or rounding level.

    Relative errors of order eps in the generator entries turn into an
    absolute residual of order eps * scale^2 through the partial products,
    so at extreme coordinates the absolute contract is not measurable.
    """
    return max(RELATOR_TOL, 1e-13 * surface.relator_scale() ** 2)


def assemble(decomposition: BlockDecomposition, fn, angles) -> ConeSurface:
    """Build the marked holonomy for a decomposition with FN coordinates.

    fn maps curve name -> (length, twist).  Raises AssemblyError when the
    relator or a peripheral invariant fails beyond 1e-9 or when glued
    blocks land on the same side of a shared axis.
    """
    angles = check_cone_angles(angles)
    if len(angles) != decomposition.n_cones:
        raise AssemblyError("angle list does not match decomposition")
    for name in decomposition.curve_names():
        if name not in fn:
            raise AssemblyError(f"missing FN coordinates for curve {name}")
        if not (fn[name][0] > 0):
            raise AssemblyError(f"FN length for {name} must be positive")
    recipe = decomposition.recipe()
    if recipe == "chain":
        surf = _assemble_chain(decomposition, fn, angles)
    else:
        surf = _assemble_torus(decomposition, fn, angles)

    res = surf.relator_residual()
    if res > relator_gate(surf):
        raise AssemblyError(f"relator residual {res:.3e} exceeds {RELATOR_TOL} "
                            f"(scale {surf.relator_scale():.2e})")
    for i, (meas, want) in enumerate(zip(surf.peripheral_angles(), angles)):
        if abs(meas - want) > PERIPHERAL_TOL:
            raise AssemblyError(
                f"peripheral angle {i}: measured {meas} vs required {want}")
    return surf


def _assemble_chain(dec, fn, angles):
    n = dec.n_cones
    k = n - 4
    curves = dec.curve_names()
    lengths = {c: fn[c][0] for c in curves}
    twists = {c: fn[c][1] for c in curves}

    gen_names = [f"g{i + 1}" for i in range(n)]
    images: dict[str, Isometry] = {}
    refs: list[HypPoint] = []

    # root block
    A0, B0, C0, d0 = build_cone_pants(angles[0], angles[1], lengths[curves[0]])
    images["g1"], images["g2"] = A0, B0
    refs.append(HypPoint(0.0, 1.0))

    S = A0 @ B0                       # holonomy of c_1 (word g1 g2)
    S_list = [S]
    frames = [Isometry.identity()]
    block_refs_built = [HypPoint(0.0, 1.0)]

    # middle cone_pants1 blocks; enter through d2, exit through d1.
    # The curve frame pins its origin at the perpendicular foot of the
    # upstream block's cone point, which makes the fn chart a genuine
    # product: twisting one curve moves everything downstream by a pure
    # conjugation and leaves disjoint classes unchanged.
    for j in range(1, k + 1):
        cin, cout = curves[j - 1], curves[j]
        E, D1, D2, _ = build_cone_pants1(angles[j + 1], lengths[cout], lengths[cin])
        M = hp.frame_with_origin(axis(S), refs[j - 1])
        N = _slot_normalizer(D2)
        F = M.inverse() @ _lam(twists[cin]) @ N
        images[f"g{j + 2}"] = F @ E @ F.inverse()
        S = S @ images[f"g{j + 2}"]
        S_list.append(S)
        frames.append(F)
        block_refs_built.append(HypPoint(0.0, 1.0))
        refs.append(F.apply(HypPoint(0.0, 1.0)))

    # last block, entered through its boundary slot
    cin = curves[-1]
    A1, B1, C1, d1 = build_cone_pants(angles[n - 2], angles[n - 1], lengths[cin])
    M = hp.frame_with_origin(axis(S), refs[k])
    N = _slot_normalizer(C1)
    F = M.inverse() @ _lam(twists[cin]) @ N
    images[f"g{n - 1}"] = F @ A1 @ F.inverse()
    images[f"g{n}"] = F @ B1 @ F.inverse()
    frames.append(F)
    refs.append(F.apply(HypPoint(0.0, 1.0)))

    # recenter at the chain midpoint: keeps entries (and roundoff in the
    # relator cancellation) balanced instead of growing with chain depth
    mid = _midpoint(refs[0], refs[-1])
    Q = hp.point_to_i(mid)
    images = {g: Q @ m @ Q.inverse() for g, m in images.items()}
    refs = [Q.apply(p) for p in refs]
    S_list = [Q @ S @ Q.inverse() for S in S_list]

    marking = _chain_marking(n)
    surf = ConeSurface(angles, dec, dict(fn), marking, images, {}, {}, refs)

    # base lifts: oriented axes of the curve-word holonomies
    for j, c in enumerate(curves):
        surf.base_lifts[c] = axis(S_list[j])

    # side checks; wall j separates consecutive base regions
    for j, c in enumerate(curves):
        lift = surf.base_lifts[c]
        if side_of(refs[j], lift) == side_of(refs[j + 1], lift):
            raise AssemblyError(
                f"blocks {j} and {j + 1} develop on the same side of {c}")
        surf.wall_signs[c] = _crossing_sign(lift, refs[j], refs[j + 1])

    for m, gname in enumerate(gen_names):
        surf.gen_blocks[gname] = 0 if m < 2 else (m - 1 if m < n - 2 else k + 1)
    surf.itineraries = chain_itineraries(surf, base_region=0)
    return surf


def chain_itineraries(surface: "ConeSurface", base_region: int = 0):
    """Wall crossings of each marking path, measured from a chosen base region.

    The path for a generator in block b walks the base-region chain from
    ``base_region`` to b, loops there, and walks back translated by the
    generator's image; only the walls between consecutive base regions are
    crossed.
    """
    curves = surface.decomposition.curve_names()
    ident = Isometry.identity()
    out = {}
    for gname, blk in surface.gen_blocks.items():
        into = []
        if blk > base_region:
            for j in range(base_region, blk):
                c = curves[j]
                into.append(Crossing(c, ident, surface.wall_signs[c]))
        else:
            for j in range(base_region - 1, blk - 1, -1):
                c = curves[j]
                into.append(Crossing(c, ident, -surface.wall_signs[c]))
        g = surface.gen_images[gname]
        back = [Crossing(x.curve, g, -x.sign) for x in reversed(into)]
        out[gname] = into + back
    return out


def _chain_marking(n):
    curves = {}
    trans = {}
    prods = {}
    inter = {}
    k = n - 4
    cnames = [f"c{j + 1}" for j in range(k + 1)]
    for j, c in enumerate(cnames):
        curves[c] = tuple(range(1, j + 3))           # g1 ... g_{j+2}
        trans[c] = (j + 2, j + 3)                    # loop around cones j+2, j+3
        prods[c] = trans[c] + curves[c]
        inter[f"curve:{c}"] = {c2: 0 for c2 in cnames}
        inter[f"trans:{c}"] = {c2: (2 if c2 == c else 0) for c2 in cnames}
        inter[f"prod:{c}"] = {c2: (2 if c2 == c else 0) for c2 in cnames}
    return Marking(
        gen_names=[f"g{i + 1}" for i in range(n)],
        relator=tuple(range(1, n + 1)),
        peripheral_words=[(i + 1,) for i in range(n)],
        curve_words=curves,
        transversal_words=trans,
        product_words=prods,
        intersections=inter,
    )


def _assemble_torus(dec, fn, angles):
    c = dec.curve_names()[0]
    length, twist = fn[c]
    E, D1, D2, _ = build_cone_pants1(angles[0], length, length)
    N1 = _slot_normalizer(D1)
    N2 = _slot_normalizer(D2)
    # G D2 G^-1 = D1^-1; the minus sign aligns this chart's twist direction
    # with the chain recipe (right earthquake = t -> t - w in both)
    G = N1.inverse() @ _lam(-twist) @ _K @ N2
    images = {"a": D2.inverse(), "b": G}

    marking = Marking(
        gen_names=["a", "b"],
        relator=None,
        peripheral_words=[(1, 2, -1, -2)],
        curve_words={c: (1,)},
        transversal_words={c: (2,)},
        product_words={c: (2, 1)},
        intersections={f"curve:{c}": {c: 0}, f"trans:{c}": {c: 1}, f"prod:{c}": {c: 1}},
    )
    surf = ConeSurface(angles, dec, dict(fn), marking, images, {}, {},
                       [fixed_point(E)])
    base = axis(images["a"])
    surf.base_lifts[c] = base

    ref = surf.region_refs[0]
    bref = G.apply(ref)
    candidates = []
    for conj in (Isometry.identity(), G):
        lift = GeodesicLine(conj(base.u), conj(base.v))
        s0, s1 = side_of(ref, lift), side_of(bref, lift)
        if s0 != s1 and 0 not in (s0, s1):
            candidates.append((conj, lift, 1 if s0 > 0 else -1))
    if len(candidates) != 1:
        raise AssemblyError(
            f"torus handle wall ambiguous: {len(candidates)} separating walls")
    conj, lift, sign = candidates[0]
    surf.itineraries = {"a": [], "b": [Crossing(c, conj, sign)]}
    surf.gen_blocks = {"a": 0, "b": 0}
    return surf


# ------------------------------------------------------------------ lengths and spectra

def geodesic_length(surface: ConeSurface, curve) -> float:
    """Length of the closed geodesic in the class of ``curve``.

    ``curve`` may be a CurveClass, a determining-system name, or a word
    tuple.  Peripheral (elliptic) or parabolic classes are rejected.
    """
    word = _resolve_word(surface, curve)
    f = surface.image_of(word)
    t = abs(f.trace())
    if t <= 2.0 + hp.PAR_TOL:
        raise ClassMismatchError(
            f"word {word} has |tr| = {t}; not hyperbolic (peripheral or invalid)")
    return 2.0 * math.acosh(t / 2.0)


def _resolve_word(surface, curve):
    if isinstance(curve, CurveClass):
        return curve.word
    if isinstance(curve, str):
        if curve in surface.marking.curve_words:
            return surface.marking.curve_words[curve]
        return surface.marking.curve_class(curve).word
    return tuple(curve)


def length_spectrum(surface: ConeSurface) -> dict[str, float]:
    """Lengths over the determining system (cached)."""
    if "spec" not in surface._spectrum_cache:
        gens, inv = holonomy_word_matrices(surface)
        system = surface.marking.determining_system()
        width = max(len(w) for _, w in system)
        words = np.zeros((len(system), width), dtype=np.int64)
        for i, (_, w) in enumerate(system):
            words[i, :len(w)] = w
        traces = kernels.word_traces(gens, inv, words)
        out = {}
        for (name, w), t in zip(system, traces):
            if t <= 2.0 + hp.PAR_TOL:
                raise ClassMismatchError(f"determining class {name} is not hyperbolic")
            out[name] = 2.0 * math.acosh(t / 2.0)
        surface._spectrum_cache["spec"] = out
    return surface._spectrum_cache["spec"]


def equals_in_teich(s1: ConeSurface, s2: ConeSurface, tol: float = 1e-8) -> bool:
    """Same marked point of Teichmueller space, tested on the determining spectrum."""
    if s1.decomposition.signature() != s2.decomposition.signature():
        raise IncomparableMarkingError("different decompositions cannot be compared")
    if len(s1.angles) != len(s2.angles) or any(
            abs(a - b) > 1e-12 for a, b in zip(s1.angles, s2.angles)):
        raise IncomparableMarkingError("cone angles differ; points lie in different strata")
    sp1, sp2 = length_spectrum(s1), length_spectrum(s2)
    return all(abs(sp1[k] - sp2[k]) <= tol for k in sp1)


def spectrum_distance(s1: ConeSurface, s2: ConeSurface) -> float:
    sp1, sp2 = length_spectrum(s1), length_spectrum(s2)
    return max(abs(sp1[k] - sp2[k]) for k in sp1)


def gauss_bonnet_area(angles, genus: int) -> float:
    """Area of a hyperbolic cone structure: sum(2pi - theta_i) - 2 pi chi."""
    angles = check_cone_angles(angles) if angles else ()
    chi = 2 - 2 * genus
    area = sum(2 * math.pi - t for t in angles) - 2 * math.pi * chi
    if area <= 0:
        raise ValueError(
            f"no hyperbolic structure: angle defect sum {area} is not positive")
    return area


# ------------------------------------------------------------------ singular margin

def singular_margin(surface: ConeSurface, curve, depth: int | None = None,
                    radius_factor: float = 3.0) -> float:
    """Distance from the geodesic in the class ``curve`` to the cone points.

    Minimizes over holonomy translates of the cone-point lifts out to word
    length ``depth`` (default: twice the generator count), after a radius
    cut-off of ``radius_factor`` x a crude fundamental-domain diameter.
    """
    cc = curve if isinstance(curve, CurveClass) else CurveClass(
        _resolve_word(surface, curve), simple=True)
    if not cc.simple:
        raise UnsupportedCurveError("singular margin needs a simple curve class")
    f = surface.image_of(cc.word)
    if classify(f).kind != "hyperbolic":
        raise ClassMismatchError("curve class is not hyperbolic")
    ax = axis(f)
    norm = axis_to_imaginary(ax)

    if depth is None:
        depth = 2 * len(surface.marking.gen_names)
    gens = np.array([surface.gen_images[g].m for g in surface.marking.gen_names])

    cone_pts = []
    for w in surface.marking.peripheral_words:
        cone_pts.append(fixed_point(surface.image_of(w)))

    # crude diameter bound: spread of cone lifts and region reference points
    spread = 0.0
    for p in cone_pts + surface.region_refs:
        for q in cone_pts + surface.region_refs:
            spread = max(spread, hp.dist(p, q))
    radius = radius_factor * max(spread, max(l for l, _ in surface.fn.values()))

    ref = cone_pts[0]

    def prune(mats):
        re, im = kernels.apply_to_point(mats, ref.x, ref.y)
        disp = np.arccosh(1.0 + ((re - ref.x) ** 2 + (im - ref.y) ** 2)
                          / (2.0 * im * ref.y))
        return disp <= radius

    ball = kernels.orbit_ball(gens, depth, prune=prune)

    # apply norm . g to each cone point and measure distance to the imaginary axis
    best = math.inf
    for p in cone_pts:
        stack = np.einsum("ab,nbc->nac", norm.m, ball)
        re, im = kernels.apply_to_point(stack, p.x, p.y)
        d = np.arcsinh(np.abs(re) / im)
        keep = d <= radius
        if keep.any():
            best = min(best, float(np.min(d[keep])))
        else:
            best = min(best, float(np.min(d)))
    return best


# ------------------------------------------------------------------ developed block polygon

def block_half_quadrilateral(theta1, theta2, length):
    """Developed half-block of a two-cone pants: vertices (p1, p2, f2, f1).

    p1, p2 are the cone points, f1, f2 the perpendicular feet on the
    boundary axis; doubling across the seams recovers the block.  Returns
    (vertices, measured interior angles, boundary arc length).
    """
    A, B, C, d = build_cone_pants(theta1, theta2, length)
    p1 = HypPoint(0.0, 1.0)
    p2 = HypPoint(0.0, math.exp(d))
    ax = axis(C)
    f1 = hp.foot_of_perpendicular(p1, ax)
    f2 = hp.foot_of_perpendicular(p2, ax)
    angles = (
        hp.angle_at(p1, p2, f1),
        hp.angle_at(p2, p1, f2),
        hp.angle_at(f2, p2, f1),
        hp.angle_at(f1, f2, p1),
    )
    arc = hp.dist(f1, f2)
    return (p1, p2, f2, f1), angles, arc


def quadrilateral_area(vertices) -> float:
    """Area of the geodesic quadrilateral (v0 v1 v2 v3) by fan triangulation."""
    v0, v1, v2, v3 = vertices
    return hp.triangle_area(v0, v1, v2) + hp.triangle_area(v0, v2, v3)


def triangulated_area(surface: ConeSurface) -> float:
    """Fundamental-domain area of a chain surface, summed over half-block pairs."""
    rec = surface.decomposition.recipe()
    if rec != "chain" or surface.decomposition.n_cones != 4:
        raise UnsupportedCurveError(
            "triangulated area implemented for the four-cone sphere chain")
    c = surface.decomposition.curve_names()[0]
    l = surface.fn[c][0]
    total = 0.0
    for (t1, t2) in ((surface.angles[0], surface.angles[1]),
                     (surface.angles[2], surface.angles[3])):
        verts, _, _ = block_half_quadrilateral(t1, t2, l)
        total += 2.0 * quadrilateral_area(verts)
    return total
