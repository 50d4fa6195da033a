"""Hot numeric kernels: 2x2 word products, orbit expansion, curvature stencils.

Each kernel has a ``*_numpy`` reference implementation and a jit-compiled
variant; the public name dispatches per the QUAKESURF_DISABLE_NUMBA flag
(see :mod:`quakesurf._accel`).  Words are encoded as int64 arrays of signed
1-based generator indices, 0-padded on the right; negative means inverse.
"""

import numpy as np

from ._accel import JIT_ENABLED, maybe_jit


# ---------------------------------------------------------------- word products

def _prepare_gens(gens):
    """Stack generator matrices and their inverses: index k -> gens[k-1], -k -> inverse."""
    g = np.asarray(gens, dtype=np.float64)
    inv = np.empty_like(g)
    inv[:, 0, 0] = g[:, 1, 1]
    inv[:, 0, 1] = -g[:, 0, 1]
    inv[:, 1, 0] = -g[:, 1, 0]
    inv[:, 1, 1] = g[:, 0, 0]
    return g, inv


def word_traces_numpy(gens, inv, words):
    """|trace| of the matrix of each padded word row."""
    n = words.shape[0]
    out = np.empty(n)
    for i in range(n):
        m = np.eye(2)
        for s in words[i]:
            if s == 0:
                break
            m = m @ (gens[s - 1] if s > 0 else inv[-s - 1])
        out[i] = abs(m[0, 0] + m[1, 1])
    return out


def _word_traces_impl(gens, inv, words):
    n = words.shape[0]
    out = np.empty(n)
    for i in range(n):
        a, b, c, d = 1.0, 0.0, 0.0, 1.0
        for j in range(words.shape[1]):
            s = words[i, j]
            if s == 0:
                break
            if s > 0:
                e, f, g, h = gens[s - 1, 0, 0], gens[s - 1, 0, 1], gens[s - 1, 1, 0], gens[s - 1, 1, 1]
            else:
                e, f, g, h = inv[-s - 1, 0, 0], inv[-s - 1, 0, 1], inv[-s - 1, 1, 0], inv[-s - 1, 1, 1]
            a, b, c, d = a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h
        out[i] = abs(a + d)
    return out


word_traces_jit = maybe_jit(_word_traces_impl)
word_traces = word_traces_jit if JIT_ENABLED else word_traces_numpy


# ---------------------------------------------------------------- orbit expansion

def ball_step_numpy(frontier, gens):
    """One multiplication step of an orbit ball: all products frontier[i] @ gens[j]."""
    return np.einsum("nab,gbc->ngac", frontier, gens).reshape(-1, 2, 2)


def _ball_step_impl(frontier, gens):
    n = frontier.shape[0]
    g = gens.shape[0]
    out = np.empty((n * g, 2, 2))
    for i in range(n):
        a, b, c, d = frontier[i, 0, 0], frontier[i, 0, 1], frontier[i, 1, 0], frontier[i, 1, 1]
        for j in range(g):
            e, f, gg, h = gens[j, 0, 0], gens[j, 0, 1], gens[j, 1, 0], gens[j, 1, 1]
            k = i * g + j
            out[k, 0, 0] = a * e + b * gg
            out[k, 0, 1] = a * f + b * h
            out[k, 1, 0] = c * e + d * gg
            out[k, 1, 1] = c * f + d * h
    return out


ball_step_jit = maybe_jit(_ball_step_impl)
ball_step = ball_step_jit if JIT_ENABLED else ball_step_numpy


def canonical_keys(mats, digits=9):
    """Sign-canonical rounded keys for deduplicating PSL(2,R) elements."""
    flat = mats.reshape(-1, 4).copy()
    sign = np.zeros(flat.shape[0])
    for col in range(4):
        undecided = sign == 0.0
        if not undecided.any():
            break
        live = undecided & (np.abs(flat[:, col]) > 1e-8)
        sign[live] = np.sign(flat[live, col])
    sign[sign == 0.0] = 1.0
    flat *= sign[:, None]
    return np.round(flat, digits)


def orbit_ball(gen_mats, depth, max_size=200000, prune=None):
    """Distinct PSL(2,R) elements of word length <= depth in the given generators.

    Returns an (n,2,2) array including the identity.  Deduplication uses
    sign-canonical keys rounded to 9 digits.  ``prune``, when given, maps a
    stack of matrices to a boolean keep-mask and bounds the search region
    (elements pruned from the frontier are not expanded further).
    """
    gens, inv = _prepare_gens(gen_mats)
    alphabet = np.concatenate([gens, inv], axis=0)
    ball = np.eye(2)[None, :, :]
    seen = {tuple(k) for k in canonical_keys(ball)}
    frontier = ball
    for _ in range(depth):
        prod = ball_step(frontier, alphabet)
        keys = canonical_keys(prod)
        fresh = []
        for i in range(prod.shape[0]):
            k = tuple(keys[i])
            if k not in seen:
                seen.add(k)
                fresh.append(prod[i])
        if not fresh:
            break
        frontier = np.array(fresh)
        if prune is not None:
            keep = prune(frontier)
            frontier = frontier[keep]
            if frontier.shape[0] == 0:
                break
        ball = np.concatenate([ball, frontier], axis=0)
        if ball.shape[0] > max_size:
            raise MemoryError(f"orbit ball exceeded {max_size} elements "
                              f"(raise max_size or tighten the prune radius)")
    return ball


# ---------------------------------------------------------------- apply / distances

def apply_to_point_numpy(mats, x, y):
    """Mobius images of the point x+iy under a stack of matrices: (n,) re, im."""
    z = complex(x, y)
    num = mats[:, 0, 0] * z + mats[:, 0, 1]
    den = mats[:, 1, 0] * z + mats[:, 1, 1]
    w = num / den
    return w.real, w.imag


def _apply_to_point_impl(mats, x, y):
    n = mats.shape[0]
    re = np.empty(n)
    im = np.empty(n)
    for i in range(n):
        a, b, c, d = mats[i, 0, 0], mats[i, 0, 1], mats[i, 1, 0], mats[i, 1, 1]
        nr = a * x + b
        ni = a * y
        dr = c * x + d
        di = c * y
        q = dr * dr + di * di
        re[i] = (nr * dr + ni * di) / q
        im[i] = (ni * dr - nr * di) / q
    return re, im


apply_to_point_jit = maybe_jit(_apply_to_point_impl)
apply_to_point = apply_to_point_jit if JIT_ENABLED else apply_to_point_numpy


def min_dist_to_imaginary(re, im):
    """min over points of hyperbolic distance to the imaginary axis: asinh(|x|/y)."""
    return float(np.min(np.arcsinh(np.abs(re) / im)))


# ---------------------------------------------------------------- curvature stencils

def brioschi_numpy(E, F, G, hu, hv):
    """Gauss curvature of a sampled metric via the Brioschi formula.

    Central differences; returns the (nu-2, nv-2) interior grid.  Axis 0 is
    the u-coordinate, axis 1 is v.
    """
    def du(A):
        return (A[2:, 1:-1] - A[:-2, 1:-1]) / (2 * hu)

    def dv(A):
        return (A[1:-1, 2:] - A[1:-1, :-2]) / (2 * hv)

    def duu(A):
        return (A[2:, 1:-1] - 2 * A[1:-1, 1:-1] + A[:-2, 1:-1]) / (hu * hu)

    def dvv(A):
        return (A[1:-1, 2:] - 2 * A[1:-1, 1:-1] + A[1:-1, :-2]) / (hv * hv)

    def duv(A):
        return (A[2:, 2:] - A[2:, :-2] - A[:-2, 2:] + A[:-2, :-2]) / (4 * hu * hv)

    Ei, Fi, Gi = (A[1:-1, 1:-1] for A in (E, F, G))
    Eu, Ev = du(E), dv(E)
    Gu, Gv = du(G), dv(G)
    Fu, Fv = du(F), dv(F)
    Evv, Guu, Fuv = dvv(E), duu(G), duv(F)

    m1 = np.stack([
        np.stack([-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev], axis=-1),
        np.stack([Fv - 0.5 * Gu, Ei, Fi], axis=-1),
        np.stack([0.5 * Gv, Fi, Gi], axis=-1),
    ], axis=-2)
    zeros = np.zeros_like(Ei)
    m2 = np.stack([
        np.stack([zeros, 0.5 * Ev, 0.5 * Gu], axis=-1),
        np.stack([0.5 * Ev, Ei, Fi], axis=-1),
        np.stack([0.5 * Gu, Fi, Gi], axis=-1),
    ], axis=-2)
    det = Ei * Gi - Fi * Fi
    return (np.linalg.det(m1) - np.linalg.det(m2)) / (det * det)


def _det3(a11, a12, a13, a21, a22, a23, a31, a32, a33):
    return (a11 * (a22 * a33 - a23 * a32)
            - a12 * (a21 * a33 - a23 * a31)
            + a13 * (a21 * a32 - a22 * a31))


def _brioschi_impl(E, F, G, hu, hv):
    nu, nv = E.shape
    out = np.empty((nu - 2, nv - 2))
    for i in range(1, nu - 1):
        for j in range(1, nv - 1):
            Eu = (E[i + 1, j] - E[i - 1, j]) / (2 * hu)
            Ev = (E[i, j + 1] - E[i, j - 1]) / (2 * hv)
            Gu = (G[i + 1, j] - G[i - 1, j]) / (2 * hu)
            Gv = (G[i, j + 1] - G[i, j - 1]) / (2 * hv)
            Fu = (F[i + 1, j] - F[i - 1, j]) / (2 * hu)
            Fv = (F[i, j + 1] - F[i, j - 1]) / (2 * hv)
            Evv = (E[i, j + 1] - 2 * E[i, j] + E[i, j - 1]) / (hv * hv)
            Guu = (G[i + 1, j] - 2 * G[i, j] + G[i - 1, j]) / (hu * hu)
            Fuv = (F[i + 1, j + 1] - F[i + 1, j - 1] - F[i - 1, j + 1] + F[i - 1, j - 1]) / (4 * hu * hv)
            e, f, g = E[i, j], F[i, j], G[i, j]
            d1 = _det3(-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev,
                       Fv - 0.5 * Gu, e, f,
                       0.5 * Gv, f, g)
            d2 = _det3(0.0, 0.5 * Ev, 0.5 * Gu,
                       0.5 * Ev, e, f,
                       0.5 * Gu, f, g)
            det = e * g - f * f
            out[i - 1, j - 1] = (d1 - d2) / (det * det)
    return out


if JIT_ENABLED:
    _det3_jit = maybe_jit(_det3)

    def _make_brioschi_jit():
        det3 = _det3_jit

        def impl(E, F, G, hu, hv):
            nu, nv = E.shape
            out = np.empty((nu - 2, nv - 2))
            for i in range(1, nu - 1):
                for j in range(1, nv - 1):
                    Eu = (E[i + 1, j] - E[i - 1, j]) / (2 * hu)
                    Ev = (E[i, j + 1] - E[i, j - 1]) / (2 * hv)
                    Gu = (G[i + 1, j] - G[i - 1, j]) / (2 * hu)
                    Gv = (G[i, j + 1] - G[i, j - 1]) / (2 * hv)
                    Fu = (F[i + 1, j] - F[i - 1, j]) / (2 * hu)
                    Fv = (F[i, j + 1] - F[i, j - 1]) / (2 * hv)
                    Evv = (E[i, j + 1] - 2 * E[i, j] + E[i, j - 1]) / (hv * hv)
                    Guu = (G[i + 1, j] - 2 * G[i, j] + G[i - 1, j]) / (hu * hu)
                    Fuv = (F[i + 1, j + 1] - F[i + 1, j - 1] - F[i - 1, j + 1]
                           + F[i - 1, j - 1]) / (4 * hu * hv)
                    e, f, g = E[i, j], F[i, j], G[i, j]
                    d1 = det3(-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev,
                              Fv - 0.5 * Gu, e, f,
                              0.5 * Gv, f, g)
                    d2 = det3(0.0, 0.5 * Ev, 0.5 * Gu,
                              0.5 * Ev, e, f,
                              0.5 * Gu, f, g)
                    det = e * g - f * f
                    out[i - 1, j - 1] = (d1 - d2) / (det * det)
            return out

        return maybe_jit(impl)

    brioschi_jit = _make_brioschi_jit()
    brioschi = brioschi_jit
else:
    brioschi_jit = _brioschi_impl
    brioschi = brioschi_numpy
