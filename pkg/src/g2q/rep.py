"""The 7-dimensional U_q(G2)-module V and its structure maps.

Generators act on the weight basis v_1, v_2, v_3, v_0, v_-3, v_-2, v_-1 and on
tensor powers through the coproduct

    Delta(E_i) = E_i (x) K_i + 1 (x) E_i,
    Delta(F_i) = F_i (x) 1 + K_i^-1 (x) F_i,
    Delta(K_i) = K_i (x) K_i.

``structure_maps()`` builds (once) the cup and cap, the trivalent maps gamma
and p, the four block projectors of V (x) V and the braiding.
"""

from __future__ import annotations

import functools

from .exactq import ONE, ZERO, RatFunc, q, qint
from .report import Report, map_equal, tensor_equal
from .tensorla import (
    DIM,
    LABEL_INDEX,
    LABELS,
    EchelonBasis,
    LinMap,
    SparseTensor,
    _SemiEchelon,
    decode,
    digits,
    kernel,
    map_on_legs,
)

GENERATORS = ("E1", "E2", "F1", "F2", "K1", "K2", "K1inv", "K2inv")

# (alpha_1, alpha_2) coordinates of the weight of each basis vector
WEIGHTS = ((2, 1), (1, 1), (1, 0), (0, 0), (-1, 0), (-1, -1), (-2, -1))

# Cartan data: (alpha_i, alpha_j)
CARTAN = ((2, -3), (-3, 6))

# exponents of q for K_1, K_2 on each basis vector
K_EXP = (
    tuple(2 * a - 3 * b for a, b in WEIGHTS),
    tuple(-3 * a + 6 * b for a, b in WEIGHTS),
)

_Q1 = q + q**-1


def _i(a):
    return LABEL_INDEX[a]


# raising and lowering operators as {source position: (target position, coefficient)}
_OFF_DIAG = {
    "E1": {_i(2): (_i(1), ONE), _i(0): (_i(3), _Q1), _i(-3): (_i(0), -_Q1), _i(-1): (_i(-2), -ONE)},
    "E2": {_i(3): (_i(2), ONE), _i(-2): (_i(-3), -ONE)},
    "F1": {_i(1): (_i(2), ONE), _i(3): (_i(0), ONE), _i(0): (_i(-3), -ONE), _i(-2): (_i(-1), -ONE)},
    "F2": {_i(2): (_i(3), ONE), _i(-3): (_i(-2), -ONE)},
}

_KPOW = {}


def _kpow(e):
    r = _KPOW.get(e)
    if r is None:
        r = _KPOW[e] = q**e
    return r


def generator_matrix(g):
    """pi(g) on V as a 1 -> 1 LinMap."""
    if g in _OFF_DIAG:
        return LinMap(1, 1, {s: {t: c} for s, (t, c) in _OFF_DIAG[g].items()})
    if g in ("K1", "K2", "K1inv", "K2inv"):
        i = 0 if g[1] == "1" else 1
        sign = -1 if g.endswith("inv") else 1
        return LinMap(1, 1, {s: {s: _kpow(sign * K_EXP[i][s])} for s in range(DIM)})
    if g == "K2rho":
        return k2rho_matrix()
    raise ValueError("unknown generator %r" % (g,))


def k2rho_matrix():
    """K_{2 rho} = (K_1^5 K_2^3)^2 on V."""
    k1 = generator_matrix("K1")
    k2 = generator_matrix("K2")
    m = LinMap.identity(1)
    for _ in range(5):
        m = k1 @ m
    for _ in range(3):
        m = k2 @ m
    return m @ m


def k2rho_exponent(s):
    return 2 * (5 * K_EXP[0][s] + 3 * K_EXP[1][s])


def act(g, x):
    """The action of a generator on a tensor through the iterated coproduct."""
    n = x.n
    if n < 1:
        raise ValueError("generators act on tensors with at least one leg")
    if g in ("K1", "K2", "K1inv", "K2inv"):
        i = 0 if g[1] == "1" else 1
        sign = -1 if g.endswith("inv") else 1
        exps = K_EXP[i]
        d = {}
        for idx, c in x.entries.items():
            e = sum(exps[p] for p in digits(idx, n))
            d[idx] = c * _kpow(sign * e)
        return SparseTensor(n, d)
    if g not in _OFF_DIAG:
        raise ValueError("unknown generator %r" % (g,))
    table = _OFF_DIAG[g]
    exps = K_EXP[0 if g[1] == "1" else 1]
    raising = g[0] == "E"
    d = {}
    for idx, c in x.entries.items():
        ds = digits(idx, n)
        for k in range(n):
            hit = table.get(ds[k])
            if hit is None:
                continue
            t, a = hit
            if raising:
                # K_i on the legs to the right
                e = sum(exps[p] for p in ds[k + 1 :])
            else:
                # K_i^-1 on the legs to the left
                e = -sum(exps[p] for p in ds[:k])
            w = 7 ** (n - 1 - k)
            new = idx + (t - ds[k]) * w
            v = c * a
            if e:
                v = v * _kpow(e)
            old = d.get(new)
            if old is None:
                d[new] = v
            else:
                s = old + v
                if s:
                    d[new] = s
                else:
                    del d[new]
    return SparseTensor(n, d)


def weight(idx, n):
    a = b = 0
    for p in digits(idx, n):
        a += WEIGHTS[p][0]
        b += WEIGHTS[p][1]
    return a, b


def weight_space(n, w=(0, 0)):
    """Sorted indices of V^{(x)n} basis vectors of weight w."""
    states = {(0, 0): [0]}
    for _ in range(n):
        nxt = {}
        for (a, b), idxs in states.items():
            for p in range(DIM):
                key = (a + WEIGHTS[p][0], b + WEIGHTS[p][1])
                nxt.setdefault(key, []).extend(i * 7 + p for i in idxs)
        states = nxt
    return sorted(states.get(tuple(w), []))


# ---------------------------------------------------------------------------
# transcribed data


def _t(*terms):
    """Two-leg tensor from (coefficient, a, b) triples meaning c * v_a (x) v_b."""
    return SparseTensor.from_labels(2, [((a, b), c) for c, a, b in terms])


# bilinear form (v_a, v_b); zero unless a + b = 0 in label terms
FORM = {
    (1, -1): q**6,
    (2, -2): q**5,
    (3, -3): q**2,
    (0, 0): ONE,
    (-1, 1): q**-4,
    (-2, 2): q**-3,
    (-3, 3): ONE,
}


def basis_v0():
    c0 = _t(
        (q**4, 1, -1), (q**-6, -1, 1), (q**3, 2, -2), (q**-5, -2, 2),
        (1, 3, -3), (q**-2, -3, 3), (1, 0, 0),
    )
    return [c0]


_PT = [((1, 2), q), ((1, 3), q), ((2, -3), q), ((2, 0), q**2), ((3, 0), q**2), ((2, 3), q**3)]


def basis_v2l1():
    out = []
    for i in (1, 2, 3):
        out.append(_t((1, i, i)))
        out.append(_t((1, -i, -i)))
    for (i, j), b in _PT:
        out.append(_t((1, i, j), (b, j, i)))
        out.append(_t((1, -j, -i), (b, -i, -j)))
    c = q**-2 + 1
    out += [
        _t((1, 0, 1), (q**-2, 1, 0), (q**-1, 2, 3), (q**-2, 3, 2)),
        _t((q**2, -1, 0), (1, -3, -2), (q, -2, -3), (1, 0, -1)),
        _t((c, 0, 2), (c, 2, 0), (-1, -3, 1), (-(q**-3), 1, -3)),
        _t((1, 0, -2), (1, -2, 0), (-(q**-2), 3, -1), (-q, -1, 3)),
        _t((1, -2, 1), (q**-3, 1, -2), (c, 3, 0), (c, 0, 3)),
        _t((1, -1, 2), (q**-3, 2, -1), (q**-1, 0, -3), (q**-1, -3, 0)),
        _t((1, -2, 2), (q**-4, 2, -2), (-(q**-1), 3, -3), (-(q**-3), -3, 3)),
        _t((c, 0, 0), (-1, -3, 3), (-(q**-4), 3, -3)),
        _t(
            (2 * c, 0, 0), (q**-3, 2, -2), (q**-1, -2, 2), (-1, -1, 1), (-(q**-4), 1, -1),
            (-c, -3, 3), (-c * q**-2, 3, -3),
        ),
    ]
    return out


# the ordered pairs (i, j) whose two-term vectors belong to B(V_lambda2)
LAMBDA2_PAIRS = ((1, 2), (1, 3), (2, -3))


def basis_vl2():
    out = []
    for i, j in LAMBDA2_PAIRS:
        out.append(_t((1, i, j), (-(q**-1), j, i)))
        out.append(_t((1, -j, -i), (-(q**-1), -i, -j)))
    c = q**-1 + q
    out += [
        _t((1, 2, 3), (-(q**-3), 3, 2), (q**-1, 1, 0), (-(q**-1), 0, 1)),
        _t((1, -3, -2), (-(q**-3), -2, -3), (q**-2 + 1, 0, -1), (-(q**-2 + 1), -1, 0)),
        _t((1, 1, -3), (-q, -3, 1), (c, 0, 2), (-c * q**2, 2, 0)),
        _t((1, 3, -1), (-q, -1, 3), (1, -2, 0), (-(q**2), 0, -2)),
        _t((1, 1, -2), (-q, -2, 1), (c * q**2, 3, 0), (-c, 0, 3)),
        _t((1, 2, -1), (-q, -1, 2), (q**2, 0, -3), (-1, -3, 0)),
        _t((1, 2, -2), (-(q**2), -2, 2), (-(q**3), 3, -3), (q**-1, -3, 3)),
        _t(
            (q**3 - q**-1, 0, 0), (-(q**-1), 1, -1), (q, -1, 1), (1, 2, -2), (-1, -2, 2),
            (-c, 3, -3), (c, -3, 3),
        ),
    ]
    return out


def basis_vl1():
    """[b_1, b_2, b_3, b_0, b_-3, b_-2, b_-1] in the order of LABELS."""
    c13 = q**-3 + q**-1
    c2 = q**-2 * (1 + q**2)
    b = {
        1: _t((1, 1, 0), (-(q**-6), 0, 1), (-c13, 2, 3), (c13 * q**-3, 3, 2)),
        2: _t((q**-4, 0, 2), (-(q**-2), 2, 0), (-(q**-1), 1, -3), (q**-6, -3, 1)),
        3: _t((q**-1, 1, -2), (-(q**-6), -2, 1), (-(q**-2), 3, 0), (q**-4, 0, 3)),
        0: _t(
            (q**-6, -1, 1), (-(q**-2), 1, -1), (-(q**-2 - q**-4), 0, 0), (q**-1, 2, -2),
            (-(q**-7), -2, 2), (q**-4, 3, -3), (-(q**-4), -3, 3),
        ),
        -3: _t((c2, 2, -1), (-c2 * q**-5, -1, 2), (-(q**-2), 0, -3), (q**-4, -3, 0)),
        -2: _t((q**-4, -2, 0), (-(q**-2), 0, -2), (-c2, 3, -1), (c2 * q**-5, -1, 3)),
        -1: _t((1, 0, -1), (-(q**-6), -1, 0), (-(q**-2), -3, -2), (q**-5, -2, -3)),
    }
    return [b[a] for a in LABELS]


BLOCKS = ("0", "2l1", "l2", "l1")
BLOCK_DIMS = {"0": 1, "2l1": 27, "l2": 14, "l1": 7}


def block_bases():
    return {
        "0": basis_v0(),
        "2l1": basis_v2l1(),
        "l2": basis_vl2(),
        "l1": basis_vl1(),
    }


# ---------------------------------------------------------------------------
# structure maps


class SingularBasis(RuntimeError):
    """The transcribed bases of V (x) V are linearly dependent."""


class StructureMaps:
    """Cup, cap, trivalent maps, projectors and braiding of V; build via ``structure_maps()``."""

    def __init__(self):
        bases = block_bases()
        order = [(blk, i) for blk in BLOCKS for i in range(len(bases[blk]))]
        vecs = [bases[blk][i] for blk, i in order]
        if len(vecs) != 49:
            raise SingularBasis("expected 49 basis vectors of V (x) V, got %d" % len(vecs))
        ech = _SemiEchelon()
        for k, v in enumerate(vecs):
            if not ech.insert(dict(v.entries), {k: ONE}):
                blk, i = order[k]
                raise SingularBasis("basis vector %d of block %s is dependent on earlier ones" % (i, blk))
        # coordinates of each standard basis vector e_s in the block basis
        coords = {}
        for s in range(49):
            track = {}
            rest = ech.reduce_dict({s: ONE}, track)
            if rest:
                raise SingularBasis("block bases do not span V (x) V")
            coords[s] = {k: -c for k, c in track.items()}
        proj = {}
        for blk in BLOCKS:
            cols = {}
            for s in range(49):
                d = {}
                for k, c in coords[s].items():
                    if order[k][0] == blk:
                        for j, a in vecs[k].entries.items():
                            old = d.get(j)
                            val = c * a if old is None else old + c * a
                            if val:
                                d[j] = val
                            else:
                                d.pop(j, None)
                if d:
                    cols[s] = d
            proj[blk] = LinMap(2, 2, cols)
        self.bases = bases
        self.projectors = proj
        self.P0 = proj["0"]
        self.P2l1 = proj["2l1"]
        self.Pl2 = proj["l2"]
        self.Pl1 = proj["l1"]

        self.form = dict(FORM)
        self.c0 = bases["0"][0]
        self.cup = LinMap.from_vector(self.c0)
        self.cap = LinMap(2, 0, {_i(a) * 7 + _i(b): {0: c} for (a, b), c in FORM.items()})

        # gamma(v_a) = b_a;  p = -([7]-1) iota^-1 P[l1]
        b = bases["l1"]
        self.gamma = LinMap(1, 2, {s: dict(b[s].entries) for s in range(DIM)})
        self.beta = RatFunc.from_laurent(qint(7)) - 1
        l1_offset = sum(BLOCK_DIMS[x] for x in BLOCKS[: BLOCKS.index("l1")])
        pcols = {}
        for s in range(49):
            d = {}
            for k, c in coords[s].items():
                if order[k][0] == "l1":
                    d[k - l1_offset] = -self.beta * c
            if d:
                pcols[s] = d
        self.p = LinMap(2, 1, pcols)

        self.R = (
            self.P2l1.scale(q**2) + self.P0.scale(q**-12) - self.Pl2 - self.Pl1.scale(q**-6)
        )
        self.Rinv = (
            self.P2l1.scale(q**-2) + self.P0.scale(q**12) - self.Pl2 - self.Pl1.scale(q**6)
        )
        self.dim_q = quantum_dim(1)


@functools.lru_cache(maxsize=None)
def structure_maps():
    return StructureMaps()


def build_projectors():
    return structure_maps()


def rmatrix():
    return structure_maps().R


def rmatrix_inv():
    return structure_maps().Rinv


def quantum_dim(n_or_map=1):
    """Trace of K_{2 rho} on V^{(x)n}, or of K_{2 rho} o f for an endomorphism f."""
    if isinstance(n_or_map, LinMap):
        f = n_or_map
        n = f.in_legs

        def w(i):
            return _kpow(sum(k2rho_exponent(p) for p in digits(i, n)))

        return f.trace_weighted(w)
    n = n_or_map
    single = ZERO
    for s in range(DIM):
        single = single + _kpow(k2rho_exponent(s))
    return single**n


def invariant_space(n):
    """Echelon basis of the U_q-invariants in V^{(x)n}.

    The kernel of E_1, E_2, F_1, F_2 (stacked into one map) on the weight-0
    subspace; K_i acts trivially there.
    """
    if n == 0:
        return EchelonBasis(0, {0: {0: ONE}})
    dom = weight_space(n)
    shift = 7**n
    cols = {}
    for i in dom:
        x = SparseTensor(n, {i: ONE})
        d = {}
        for k, g in enumerate(("E1", "E2", "F1", "F2")):
            for j, c in act(g, x).entries.items():
                d[k * shift + j] = c
        if d:
            cols[i] = d
    return kernel(LinMap(n, n + 1, cols), domain=dom)


def is_invariant(x):
    """True when x is killed by E_i, F_i and fixed by K_i."""
    for g in ("E1", "E2", "F1", "F2"):
        if act(g, x):
            return False
    for g in ("K1", "K2"):
        if act(g, x) != x:
            return False
    return True


# ---------------------------------------------------------------------------
# suites


def rep_suite():
    """Matrix identities of the generators and the braiding on V and V (x) V."""
    rep = Report("rep")
    mats = {g: generator_matrix(g) for g in GENERATORS}
    ident = LinMap.identity(1)
    rep.check(
        "k-inverse",
        lambda: map_equal(mats["K1"] @ mats["K1inv"], ident) or map_equal(mats["K2"] @ mats["K2inv"], ident),
    )

    def conj():
        for i in (0, 1):
            K, Kinv = mats["K%d" % (i + 1)], mats["K%dinv" % (i + 1)]
            for j in (0, 1):
                for kind, sign in (("E", 1), ("F", -1)):
                    m = mats["%s%d" % (kind, j + 1)]
                    w = map_equal(K @ m @ Kinv, m.scale(q ** (sign * CARTAN[i][j])))
                    if w:
                        return "K%d %s%d K%d^-1: %s" % (i + 1, kind, j + 1, i + 1, w)
        return None

    rep.check("k-conjugation", conj)

    def ef():
        for i in (1, 2):
            qi = q ** (1 if i == 1 else 3)
            for j in (1, 2):
                lhs = mats["E%d" % i] @ mats["F%d" % j] - mats["F%d" % j] @ mats["E%d" % i]
                if i == j:
                    rhs = (mats["K%d" % i] - mats["K%dinv" % i]).scale(1 / (qi - qi**-1))
                else:
                    rhs = LinMap.zero(1, 1)
                w = map_equal(lhs, rhs)
                if w:
                    return "[E%d, F%d]: %s" % (i, j, w)
        return None

    rep.check("ef-commutator", ef)

    def serre():
        def qbinom(nn, k, qq):
            num = ONE
            den = ONE
            for t in range(k):
                num = num * (qq ** (nn - t) - qq ** (t - nn))
                den = den * (qq ** (t + 1) - qq ** (-t - 1))
            return num / den

        for kind in ("E", "F"):
            for i, j, power, qi in ((1, 2, 4, q), (2, 1, 2, q**3)):
                a = mats["%s%d" % (kind, i)]
                b = mats["%s%d" % (kind, j)]
                total = LinMap.zero(1, 1)
                for k in range(power + 1):
                    term = b
                    for _ in range(power - k):
                        term = a @ term
                    for _ in range(k):
                        term = term @ a
                    total = total + term.scale((-1) ** k * qbinom(power, k, qi))
                if not total.is_zero():
                    return "Serre relation for %s%d, %s%d fails" % (kind, i, kind, j)
        return None

    rep.check("serre", serre)

    def k2rho():
        m = k2rho_matrix()
        expect = {1: 10, 2: 8, 3: 2, 0: 0, -3: -2, -2: -8, -1: -10}
        for a, e in expect.items():
            s = _i(a)
            if m.entry(s, s) != q**e:
                return "K_2rho on v_%d is %s" % (a, m.entry(s, s))
        return None

    rep.check("k2rho", k2rho)
    rep.check("quantum-dim", lambda: None if quantum_dim(1) == (q**10 + q**8 + q**2 + 1 + q**-2 + q**-8 + q**-10) else "dim_q V = %s" % quantum_dim(1))
    S = structure_maps()

    def projectors():
        P = S.projectors
        for a in BLOCKS:
            for b in BLOCKS:
                lhs = P[a] @ P[b]
                rhs = P[a] if a == b else LinMap.zero(2, 2)
                w = map_equal(lhs, rhs)
                if w:
                    return "P[%s] P[%s]: %s" % (a, b, w)
        total = P["0"] + P["2l1"] + P["l2"] + P["l1"]
        return map_equal(total, LinMap.identity(2))

    rep.check("projectors", projectors)

    def blocks_are_submodules():
        for blk, vecs in S.bases.items():
            span = EchelonBasis.span(2, vecs)
            if span.dim != BLOCK_DIMS[blk]:
                return "block %s has rank %d" % (blk, span.dim)
            for v in vecs:
                for g in GENERATORS:
                    if not span.contains(act(g, v)):
                        return "block %s not stable under %s" % (blk, g)
        return None

    rep.check("blocks-stable", blocks_are_submodules)

    def c0_invariant():
        return None if is_invariant(S.c0) else "c_0 is not invariant"

    rep.check("c0-invariant", c0_invariant)

    def gamma_equivariant():
        for g in GENERATORS:
            for s in range(DIM):
                x = SparseTensor(1, {s: ONE})
                if act(g, S.gamma(x)) != S.gamma(act(g, x)):
                    return "gamma does not commute with %s on v_%d" % (g, LABELS[s])
        return None

    rep.check("gamma-equivariant", gamma_equivariant)

    def r_equivariant():
        for g in GENERATORS:
            for s in range(49):
                x = SparseTensor(2, {s: ONE})
                if act(g, S.R(x)) != S.R(act(g, x)):
                    return "R does not commute with %s on %s" % (g, list(decode(s, 2)))
        return None

    rep.check("r-equivariant", r_equivariant)
    rep.check("r-inverse", lambda: map_equal(S.R @ S.Rinv, LinMap.identity(2)))

    def braid():
        R1 = map_on_legs(S.R, 0, 3)
        R2 = map_on_legs(S.R, 1, 3)
        return map_equal(R1 @ R2 @ R1, R2 @ R1 @ R2)

    rep.check("braid-relation", braid)

    def r0():
        I = LinMap.identity(2)
        m = (S.R - I.scale(q**2)) @ (S.R - I.scale(q**-12)) @ (S.R + I) @ (S.R + I.scale(q**-6))
        return None if m.is_zero() else "minimal polynomial does not kill R"

    rep.check("r-minimal-polynomial", r0)

    def rv1v1():
        x = SparseTensor.basis(1, 1)
        return tensor_equal(S.R(x), x.scale(q**2))

    rep.check("r-on-v1v1", rv1v1)
    return rep


def gamma_p_suite():
    """Cup/cap, gamma/p and braiding identities on V, V (x) V and V^{(x)4}."""
    S = structure_maps()
    rep = Report("structure")
    I1 = LinMap.identity(1)
    id1 = I1
    rep.check("zigzag-left", lambda: map_equal(S.cap.otimes(id1) @ id1.otimes(S.cup), I1))
    rep.check("zigzag-right", lambda: map_equal(id1.otimes(S.cap) @ S.cup.otimes(id1), I1))
    rep.check("cup-cap", lambda: map_equal(S.cup @ S.cap, S.P0.scale(S.dim_q)))
    rep.check("cap-cup", lambda: map_equal(S.cap @ S.cup, LinMap.scalar(S.dim_q)))
    rep.check("R-cup", lambda: map_equal(S.R @ S.cup, S.cup.scale(q**-12)))
    rep.check("Rinv-cup", lambda: map_equal(S.Rinv @ S.cup, S.cup.scale(q**12)))
    rep.check("cap-R", lambda: map_equal(S.cap @ S.R, S.cap.scale(q**-12)))
    rep.check("cap-Rinv", lambda: map_equal(S.cap @ S.Rinv, S.cap.scale(q**12)))
    rep.check(
        "gamma-p-left",
        lambda: map_equal(id1.otimes(S.cap) @ S.gamma.otimes(id1), S.p.scale(-(q**-6))),
    )
    rep.check(
        "gamma-p-right",
        lambda: map_equal(S.cap.otimes(id1) @ id1.otimes(S.gamma), S.p.scale(-(q**-6))),
    )
    rep.check("p-gamma", lambda: map_equal(S.p @ S.gamma, I1.scale(-S.beta)))
    nested = S.cap @ id1.otimes(S.cap).otimes(id1)
    rep.check(
        "gamma-C",
        lambda: map_equal(nested @ S.gamma.otimes(S.gamma), S.cap.scale(q**-6 * S.beta)),
    )
    expected = {1: 0, -1: -10, 2: -1, -2: -9, 3: -4, -3: -6, 0: -6}
    b = dict(zip(LABELS, S.bases["l1"]))
    for a, e in expected.items():
        def pairing(a=a, e=e):
            val = nested(b[a].otimes(b[-a])).scalar_value()
            want = q**e * S.beta
            return None if val == want else "value %s, expected %s" % (val, want)

        rep.check("pairing-b%d-b%d" % (a, -a), pairing)
    return rep
