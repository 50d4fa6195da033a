"""Holonomy pairs for globally hyperbolic AdS structures with particles.

A structure is stored as the pair (rho_l, rho_r) of deformed holonomies on
a shared marking, built from bending data (a cone surface plus a weighted
multicurve on its future boundary) through the left/right earthquake
cocycles.  Fenchel-Nielsen recovery inverts a factor back to a marked
surface, and diagram_check validates the factor ordering against the
earthquake identities instead of trusting any convention blindly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import quake as qk
from . import surfaces as sf
from .errors import AssemblyError, ClassMismatchError, RecoveryError
from .halfplane import HypPoint, Isometry, classify, rotation_about
from .quake import WeightedMulticurve
from .surfaces import BlockDecomposition, ConeSurface

PAIR_PERIPHERAL_TOL = 1e-9
FN_RECOVERY_TOL = 1e-8


@dataclass(frozen=True)
class BendData:
    """Future-boundary data: induced metric and bending multicurve."""

    surface: ConeSurface
    bending: WeightedMulticurve


@dataclass
class GhmcData:
    """AdS holonomy pair with matching elliptic angles at peripheral loops."""

    rho_l: dict[str, Isometry]
    rho_r: dict[str, Isometry]
    angles: tuple[float, ...]
    decomposition: BlockDecomposition
    marking: sf.Marking
    source: ConeSurface | None = None
    report: dict = field(default_factory=dict)

    def factor(self, side: str) -> qk.DeformedHolonomy:
        images = self.rho_l if side == "l" else self.rho_r
        base = self.source
        if base is None:
            raise RecoveryError("holonomy pair has no attached base surface")
        return qk.DeformedHolonomy(base, images)

    def check_invariants(self):
        for side in ("l", "r"):
            d = self.factor(side)
            res = d.relator_residual()
            if res > max(sf.RELATOR_TOL, 1e-13 * self.source.relator_scale()):
                raise AssemblyError(f"rho_{side} relator residual {res:.3e}")
            for i, (meas, want) in enumerate(zip(d.peripheral_angles(), self.angles)):
                if abs(meas - want) > PAIR_PERIPHERAL_TOL:
                    raise AssemblyError(
                        f"rho_{side} peripheral {i}: angle {meas} vs {want}")


def from_bending(bend: BendData) -> GhmcData:
    """Holonomy pair of the structure bent along the given multicurve.

    The left factor is the left-earthquake cocycle deformation of the
    boundary holonomy, the right factor the right one; diagram_check
    certifies this ordering against the twist route.
    """
    s = bend.surface
    left = qk.left_earthquake_cocycle(s, bend.bending)
    right = qk.right_earthquake_cocycle(s, bend.bending)
    g = GhmcData(left.images, right.images, s.angles, s.decomposition,
                 s.marking, source=s)
    g.check_invariants()
    return g


# ------------------------------------------------------------------ FN recovery

def _trace_of(images: dict[str, Isometry], marking: sf.Marking, word) -> float:
    m = np.eye(2)
    for t in word:
        g = images[marking.gen_names[abs(t) - 1]]
        m = m @ (g.m if t > 0 else g.inverse().m)
    return float(abs(m[0, 0] + m[1, 1]))


def holonomy_to_fn(images: dict[str, Isometry], decomposition: BlockDecomposition,
                   marking: sf.Marking, angles, twist_window: float = 3.0,
                   scan: int = 241) -> dict[str, tuple[float, float]]:
    """Fenchel-Nielsen coordinates of a representation given on a marking.

    Lengths come straight from the pants-curve traces.  Each twist is
    recovered by one-dimensional root finding on the transversal-word
    trace, scanning +-twist_window full periods; the branch (the trace is
    twist-symmetric about its minimum) is selected by the product word.
    Raises RecoveryError when no bracket or no branch matches.
    """
    curves = decomposition.curve_names()
    lengths = {}
    for c in curves:
        t = _trace_of(images, marking, marking.curve_words[c])
        if t <= 2.0 + 1e-9:
            raise RecoveryError(f"curve {c} trace {t} is not hyperbolic")
        lengths[c] = 2.0 * math.acosh(t / 2.0)

    fn = {c: (lengths[c], 0.0) for c in curves}
    for c in curves:
        target_t = _trace_of(images, marking, marking.transversal_words[c])
        target_p = _trace_of(images, marking, marking.product_words[c])

        def trans_trace(t, _c=c):
            trial = dict(fn)
            trial[_c] = (lengths[_c], t)
            s = sf.assemble(decomposition, trial, angles)
            return _trace_of(s.gen_images, marking, marking.transversal_words[_c])

        # at least +-3 full periods, widened for short curves so that the
        # documented fn sampling range (twists in [-2, 2]) always brackets
        half = max(twist_window * lengths[c], 4.0)
        ts = np.linspace(-half, half, scan)
        vals = np.array([trans_trace(t) - target_t for t in ts])
        roots = []
        for i in range(scan - 1):
            if vals[i] == 0.0:
                roots.append(float(ts[i]))
            elif vals[i] * vals[i + 1] < 0:
                roots.append(brentq(lambda t: trans_trace(t) - target_t,
                                    ts[i], ts[i + 1], xtol=1e-13))
        if not roots:
            raise RecoveryError(
                f"twist recovery for {c}: transversal trace {target_t} not "
                f"bracketed over +-{twist_window} periods")
        best, best_err = None, math.inf
        for t in roots:
            trial = dict(fn)
            trial[c] = (lengths[c], t)
            s = sf.assemble(decomposition, trial, angles)
            err = abs(_trace_of(s.gen_images, marking, marking.product_words[c])
                      - target_p)
            if err < best_err:
                best, best_err = t, err
        rel = best_err / max(1.0, target_p)
        if rel > 1e-6:
            raise RecoveryError(
                f"twist recovery for {c}: no root matches the product word "
                f"(best relative mismatch {rel:.2e})")
        fn[c] = (lengths[c], best)
    return fn


def surface_from_holonomy(images, decomposition, marking, angles) -> ConeSurface:
    """Marked surface whose holonomy matches the given representation."""
    fn = holonomy_to_fn(images, decomposition, marking, angles)
    s = sf.assemble(decomposition, fn, angles)
    worst = 0.0
    for name, w in marking.determining_system():
        t0 = _trace_of(images, marking, w)
        l0 = 2.0 * math.acosh(max(t0, 2.0 + 1e-15) / 2.0)
        worst = max(worst, abs(sf.length_spectrum(s)[name] - l0))
    if worst > FN_RECOVERY_TOL:
        raise RecoveryError(
            f"FN recovery reproduces the spectrum only to {worst:.3e}")
    return s


def left_right_metrics(g: GhmcData) -> tuple[ConeSurface, ConeSurface]:
    """The two marked cone surfaces underlying a holonomy pair."""
    mu_l = surface_from_holonomy(g.rho_l, g.decomposition, g.marking, g.angles)
    mu_r = surface_from_holonomy(g.rho_r, g.decomposition, g.marking, g.angles)
    return mu_l, mu_r


# ------------------------------------------------------------------ diagram

def diagram_check(bend: BendData, tol: float = 1e-7) -> dict:
    """Residuals of the three earthquake identities relating the pair to
    its bending data: mu_l ~ E^l(h+), mu_r ~ E^r(h+), mu_r ~ E^r_2(mu_l)."""
    s, lam = bend.surface, bend.bending
    g = from_bending(bend)
    mu_l, mu_r = left_right_metrics(g)

    e_l = qk.left_earthquake_twist(s, lam)
    e_r = qk.right_earthquake_twist(s, lam)
    r1 = sf.spectrum_distance(mu_l, e_l)
    r2 = sf.spectrum_distance(mu_r, e_r)
    r3 = sf.spectrum_distance(mu_r, qk.right_earthquake_twist(mu_l, lam.scaled(2.0))) \
        if not lam.is_empty() else sf.spectrum_distance(mu_r, mu_l)
    residuals = {"mu_l_vs_left_quake": r1, "mu_r_vs_right_quake": r2,
                 "mu_r_vs_double_quake_of_mu_l": r3}
    return {"residuals": residuals, "tol": tol,
            "passes": all(v <= tol for v in residuals.values())}


# ------------------------------------------------------------------ rotation pairs

def pure_rotation_pair(theta: float, axis_l: HypPoint, axis_r: HypPoint):
    """Left/right factors of a pure AdS rotation of angle theta about a
    time-like line: two elliptic rotations of the same angle."""
    if not (0.0 < theta < 2.0 * math.pi):
        raise ValueError(f"rotation angle must lie in (0, 2pi), got {theta}")
    return rotation_about(axis_l, theta), rotation_about(axis_r, theta)


def decompose_rotation_pair(pair, tol: float = 1e-10) -> float:
    """Angle of a pure rotation pair; raises when the pair is not one."""
    f, g = pair
    cf, cg = classify(f), classify(g)
    if cf.kind != "elliptic" or cg.kind != "elliptic":
        raise ClassMismatchError(
            f"not a rotation: factors classify as {cf.kind}, {cg.kind}")
    if abs(cf.angle - cg.angle) > tol:
        raise ClassMismatchError(
            f"not a rotation: factor angles {cf.angle} and {cg.angle} differ")
    return 0.5 * (cf.angle + cg.angle)
