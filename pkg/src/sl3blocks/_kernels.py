"""Hot numeric kernels: trinode fiber counting/enumeration and the Verlinde sum.

Every kernel exists in two variants: a numba ``@njit`` build (default) and a
pure numpy/Python fallback.  Setting the environment variable
``SL3BLOCKS_NO_JIT=1`` before import selects the fallback path; the public
functions are identical either way and are compared in the benchmark suite
(``benchmarks/bench_kernels.py``) and in the test suite.

The counting kernels implement the closed-form minimal-triangle data: for a
boundary triple ((aa,ab),(ba,bb),(ca,cb)) the fiber of triangles is the
integer segment j in [j0, j1] described in :mod:`sl3blocks.local`; everything
here is O(1) integer arithmetic per triple, which is what makes the batched
graph dynamic programming cheap.
"""

import math
import os

import numpy as np

_flag = os.environ.get("SL3BLOCKS_NO_JIT", "").strip().lower()
JIT_ENABLED = _flag in ("", "0", "false", "no")

if JIT_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        JIT_ENABLED = False

if not JIT_ENABLED:
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


@njit(cache=True)
def _qmin_scalar(aa, ab, ba, bb, ca, cb):
    """Minimal-triangle data for one boundary triple.

    Returns (ok, j0, j1, u, v) where corners of the j-th fiber triangle are
    (u+j, v+j, j); ok=0 means the fiber is empty.
    """
    c1 = cb + aa - ba - bb
    c2 = aa + ab - bb - ca
    if (c1 + c2) % 3 != 0:
        return 0, 0, 0, 0, 0
    u = (c1 + c2) // 3
    v = (2 * c2 - c1) // 3
    j0 = max(0, max(-u, -v))
    j1 = min(min(aa - u, ab - v), min(ba - v, bb), min(ca, cb - u))
    if j1 < j0:
        return 0, 0, 0, 0, 0
    return 1, j0, j1, u, v


@njit(cache=True)
def _vmin_scalar(aa, ab, ba, bb, ca, cb, j0, u, v):
    """Level of the minimal monomial over the corner-zero triangle."""
    k1 = u + j0
    k2 = v + j0
    k3 = j0
    h1 = aa - k1
    h2 = ab - k2
    h3 = ba - k2
    h4 = bb - k3
    h5 = ca - k3
    h6 = cb - k1
    s = min(h1, min(h3, h5))
    t = min(h2, min(h4, h6))
    return (k1 + k2 + k3) + (h1 + h3 + h5) - 2 * s + t


@njit(cache=True)
def _fused_count_loop(bnd, levels, out):
    for i in range(bnd.shape[0]):
        ok, j0, j1, u, v = _qmin_scalar(bnd[i, 0], bnd[i, 1], bnd[i, 2],
                                        bnd[i, 3], bnd[i, 4], bnd[i, 5])
        if ok == 0:
            out[i] = 0
            continue
        vmin = _vmin_scalar(bnd[i, 0], bnd[i, 1], bnd[i, 2], bnd[i, 3],
                            bnd[i, 4], bnd[i, 5], j0, u, v)
        c = levels[i] - vmin + 1
        cap = j1 - j0 + 1
        if c < 0:
            c = 0
        if c > cap:
            c = cap
        out[i] = c


def _fused_count_numpy(bnd, levels):
    aa, ab, ba, bb, ca, cb = (bnd[:, i].astype(np.int64) for i in range(6))
    c1 = cb + aa - ba - bb
    c2 = aa + ab - bb - ca
    ok = (c1 + c2) % 3 == 0
    u = (c1 + c2) // 3
    v = (2 * c2 - c1) // 3
    j0 = np.maximum(0, np.maximum(-u, -v))
    j1 = np.minimum.reduce([aa - u, ab - v, ba - v, bb, ca, cb - u])
    ok &= j1 >= j0
    k1 = u + j0
    k2 = v + j0
    k3 = j0
    h1, h2, h3 = aa - k1, ab - k2, ba - k2
    h4, h5, h6 = bb - k3, ca - k3, cb - k1
    s = np.minimum.reduce([h1, h3, h5])
    t = np.minimum.reduce([h2, h4, h6])
    vmin = (k1 + k2 + k3) + (h1 + h3 + h5) - 2 * s + t
    count = np.clip(levels - vmin + 1, 0, j1 - j0 + 1)
    return np.where(ok, count, 0)


def fused_count_batch(bnd, levels):
    """Conformal-block dimensions for a batch of boundary triples.

    bnd: (N,6) integer array of (aa,ab,ba,bb,ca,cb); levels: (N,) or scalar.
    """
    bnd = np.ascontiguousarray(bnd, dtype=np.int64)
    levels = np.broadcast_to(np.asarray(levels, dtype=np.int64), (bnd.shape[0],))
    if JIT_ENABLED:
        out = np.empty(bnd.shape[0], dtype=np.int64)
        _fused_count_loop(bnd, np.ascontiguousarray(levels), out)
        return out
    return _fused_count_numpy(bnd, levels)


def classical_count_batch(bnd):
    """Classical triple-invariant dimensions (fiber sizes of the triangle map)."""
    bnd = np.ascontiguousarray(bnd, dtype=np.int64)
    big = bnd.sum(axis=1)  # level large enough to reach the classical cap
    return fused_count_batch(bnd, big)


@njit(cache=True)
def _fiber_fill(aa, ab, ba, bb, ca, cb, L, want_bz, buf):
    """Search-based canonical fiber enumeration; returns number of points.

    Exhaustive over the two free parameters (s, p12) of the boundary system;
    kept independent of the closed-form ladder on purpose (dual route).
    """
    n = 0
    d = (aa + ba + ca) - (ab + bb + cb)
    if d % 3 != 0:
        return 0
    smax = min(aa, min(ba, ca))
    for s in range(smax + 1):
        t = s - d // 3
        if t < 0 or t > min(ab, min(bb, cb)):
            continue
        a1 = aa - s
        a2 = ba - s
        a3 = ca - s
        b1 = ab - t
        b2 = bb - t
        b3 = cb - t
        if min(a1, min(a2, a3)) < 0 or min(b1, min(b2, b3)) < 0:
            continue
        for p12 in range(max(a1, b2) + 1):
            p13 = a1 - p12
            p23 = b3 - p13
            p21 = a2 - p23
            p31 = b1 - p21
            p32 = a3 - p31
            if p13 < 0 or p23 < 0 or p21 < 0 or p31 < 0 or p32 < 0:
                continue
            if p32 + p12 != b2:
                continue
            if want_bz:
                if min(p12, min(p23, p31)) != 0:
                    continue
            else:
                if min(p21, min(p32, p13)) != 0:
                    continue
            lvl = s + t + p12 + p23 + p31 + p21 + p32 + p13
            if lvl > L:
                continue
            buf[n, 0] = L - lvl
            buf[n, 1] = s
            buf[n, 2] = t
            buf[n, 3] = p12
            buf[n, 4] = p23
            buf[n, 5] = p31
            buf[n, 6] = p21
            buf[n, 7] = p32
            buf[n, 8] = p13
            n += 1
    return n


def _fiber_fill_py(aa, ab, ba, bb, ca, cb, L, want_bz):
    pts = []
    d = (aa + ba + ca) - (ab + bb + cb)
    if d % 3 != 0:
        return pts
    for s in range(min(aa, ba, ca) + 1):
        t = s - d // 3
        if t < 0 or t > min(ab, bb, cb):
            continue
        a1, a2, a3 = aa - s, ba - s, ca - s
        b1, b2, b3 = ab - t, bb - t, cb - t
        if min(a1, a2, a3, b1, b2, b3) < 0:
            continue
        for p12 in range(max(a1, b2) + 1):
            p13 = a1 - p12
            p23 = b3 - p13
            p21 = a2 - p23
            p31 = b1 - p21
            p32 = a3 - p31
            if min(p13, p23, p21, p31, p32) < 0 or p32 + p12 != b2:
                continue
            if want_bz:
                if min(p12, p23, p31) != 0:
                    continue
            elif min(p21, p32, p13) != 0:
                continue
            lvl = s + t + p12 + p23 + p31 + p21 + p32 + p13
            if lvl <= L:
                pts.append((L - lvl, s, t, p12, p23, p31, p21, p32, p13))
    return pts


def fiber_points(bnd, L, bz=False):
    """Canonical lattice points over one boundary triple at exact level L.

    Returns an (M,9) int64 array in exponent order (x,s,t,p12,p23,p31,p21,p32,p13),
    sorted lexicographically.
    """
    aa, ab, ba, bb, ca, cb = (int(x) for x in bnd)
    if JIT_ENABLED:
        # one point per (s, p12) pair at most
        cap = (min(aa, ba, ca) + 1) * (max(aa, bb) + 2) + 1
        buf = np.empty((cap, 9), dtype=np.int64)
        n = _fiber_fill(aa, ab, ba, bb, ca, cb, int(L), bz, buf)
        pts = buf[:n]
    else:
        pts = np.array(_fiber_fill_py(aa, ab, ba, bb, ca, cb, int(L), bz),
                       dtype=np.int64).reshape(-1, 9)
    if len(pts) > 1:
        order = np.lexsort(pts.T[::-1])
        pts = pts[order]
    return pts


@njit(cache=True)
def _level_points_fill(L, want_bz, buf):
    n = 0
    for s in range(L + 1):
        for t in range(L + 1 - s):
            for p12 in range(L + 1 - s - t):
                for p23 in range(L + 1 - s - t - p12):
                    for p31 in range(L + 1 - s - t - p12 - p23):
                        if want_bz and min(p12, min(p23, p31)) != 0:
                            continue
                        rem = L - s - t - p12 - p23 - p31
                        for p21 in range(rem + 1):
                            for p32 in range(rem + 1 - p21):
                                for p13 in range(rem + 1 - p21 - p32):
                                    if not want_bz and min(p21, min(p32, p13)) != 0:
                                        continue
                                    buf[n, 0] = rem - p21 - p32 - p13
                                    buf[n, 1] = s
                                    buf[n, 2] = t
                                    buf[n, 3] = p12
                                    buf[n, 4] = p23
                                    buf[n, 5] = p31
                                    buf[n, 6] = p21
                                    buf[n, 7] = p32
                                    buf[n, 8] = p13
                                    n += 1
    return n


def _level_points_py(L, want_bz):
    pts = []
    for s in range(L + 1):
        for t in range(L + 1 - s):
            for p12 in range(L + 1 - s - t):
                for p23 in range(L + 1 - s - t - p12):
                    for p31 in range(L + 1 - s - t - p12 - p23):
                        if want_bz and min(p12, p23, p31) != 0:
                            continue
                        rem = L - s - t - p12 - p23 - p31
                        for p21 in range(rem + 1):
                            for p32 in range(rem + 1 - p21):
                                for p13 in range(rem + 1 - p21 - p32):
                                    if not want_bz and min(p21, p32, p13) != 0:
                                        continue
                                    pts.append((rem - p21 - p32 - p13, s, t,
                                                p12, p23, p31, p21, p32, p13))
    return pts


def level_point_count(L):
    """Number of canonical trinode points of level exactly L (either tag)."""
    return math.comb(L + 8, 8) - (math.comb(L + 5, 8) if L >= 3 else 0)


def level_points(L, bz=False):
    """All canonical trinode points of level exactly L, as an (M,9) array."""
    L = int(L)
    if JIT_ENABLED:
        buf = np.empty((level_point_count(L), 9), dtype=np.int64)
        n = _level_points_fill(L, bz, buf)
        return buf[:n]
    return np.array(_level_points_py(L, bz), dtype=np.int64).reshape(-1, 9)


# --- Verlinde alcove sum ----------------------------------------------------

# Weyl group of sl3 as permutations of the three epsilon coordinates, with signs.
_W_PERMS = np.array([[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 0, 1], [1, 2, 0], [2, 1, 0]],
                    dtype=np.int64)
_W_SIGNS = np.array([1, -1, -1, 1, 1, -1], dtype=np.float64)


def _eps3(a, b):
    # 3 * epsilon-coordinates of a*w1 + b*w2 (integral; sum is 0)
    return (2 * a + b, -a + b, -a - 2 * b)


@njit(cache=True)
def _verlinde_sum_jit(wts, g, L, perms, signs):
    m = L + 3
    total = 0.0
    two_pi = 2.0 * math.pi
    lw = np.empty(3, dtype=np.float64)
    rw = np.empty(3, dtype=np.float64)
    rw[0], rw[1], rw[2] = 3.0, 0.0, -3.0
    nv = np.empty(3, dtype=np.float64)
    for a in range(L + 1):
        for b in range(L + 1 - a):
            na = a + 1
            nb = b + 1
            # nu = mu + rho in 3*eps coordinates
            nv[0] = 2 * na + nb
            nv[1] = nb - na
            nv[2] = -na - 2 * nb
            tr_re, tr_im = 1.0, 0.0
            for iw in range(wts.shape[0]):
                la = wts[iw, 0] + 1
                lb = wts[iw, 1] + 1
                lw[0] = 2 * la + lb
                lw[1] = lb - la
                lw[2] = -la - 2 * lb
                num_re = 0.0
                num_im = 0.0
                den_re = 0.0
                den_im = 0.0
                for w in range(6):
                    e = 0.0
                    e2 = 0.0
                    for i in range(3):
                        e += lw[perms[w, i]] * nv[i]
                        e2 += rw[perms[w, i]] * nv[i]
                    e *= two_pi / (9.0 * m)
                    e2 *= two_pi / (9.0 * m)
                    num_re += signs[w] * math.cos(e)
                    num_im += signs[w] * math.sin(e)
                    den_re += signs[w] * math.cos(e2)
                    den_im += signs[w] * math.sin(e2)
                dd = den_re * den_re + den_im * den_im
                ch_re = (num_re * den_re + num_im * den_im) / dd
                ch_im = (num_im * den_re - num_re * den_im) / dd
                tr_re, tr_im = (tr_re * ch_re - tr_im * ch_im,
                                tr_re * ch_im + tr_im * ch_re)
            sprod = 1.0
            # positive roots alpha1, alpha2, theta pair with mu+rho as na, nb, na+nb
            sprod *= abs(2.0 * math.sin(math.pi * na / m)) ** (2 - 2 * g)
            sprod *= abs(2.0 * math.sin(math.pi * nb / m)) ** (2 - 2 * g)
            sprod *= abs(2.0 * math.sin(math.pi * (na + nb) / m)) ** (2 - 2 * g)
            total += tr_re * sprod
    return total


def _verlinde_sum_numpy(wts, g, L):
    m = L + 3
    mu = np.array([(a, b) for a in range(L + 1) for b in range(L + 1 - a)],
                  dtype=np.int64)
    nu = mu + 1  # mu + rho in fundamental-weight coordinates
    nu_eps = np.stack([2 * nu[:, 0] + nu[:, 1], -nu[:, 0] + nu[:, 1],
                       -nu[:, 0] - 2 * nu[:, 1]], axis=1).astype(np.float64)
    tr = np.ones(len(nu), dtype=np.complex128)
    den = None
    for a, b in wts:
        l_eps = np.array(_eps3(a + 1, b + 1), dtype=np.float64)
        num = np.zeros(len(nu), dtype=np.complex128)
        if den is None:
            r_eps = np.array(_eps3(1, 1), dtype=np.float64)
            den = np.zeros(len(nu), dtype=np.complex128)
            for perm, sgn in zip(_W_PERMS, _W_SIGNS):
                den += sgn * np.exp(2j * np.pi * (nu_eps @ r_eps[perm]) / (9 * m))
        for perm, sgn in zip(_W_PERMS, _W_SIGNS):
            num += sgn * np.exp(2j * np.pi * (nu_eps @ l_eps[perm]) / (9 * m))
        tr *= num / den
    sprod = np.ones(len(nu))
    for col in (nu[:, 0], nu[:, 1], nu[:, 0] + nu[:, 1]):
        sprod *= np.abs(2.0 * np.sin(np.pi * col / m)) ** (2 - 2 * g)
    return float((tr.real * sprod).sum())


def verlinde_alcove_sum(weights, g, L):
    """The alcove sum of the Verlinde formula (without the torus-order factor).

    Deterministic summation order (lexicographic over the alcove) on both paths.
    """
    wts = np.array(list(weights), dtype=np.int64).reshape(-1, 2)
    if JIT_ENABLED:
        return _verlinde_sum_jit(wts, g, int(L), _W_PERMS, _W_SIGNS)
    return _verlinde_sum_numpy(wts, g, int(L))
