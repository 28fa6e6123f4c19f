"""The quantum symmetric algebra S_q(V) and braided symmetric algebras A_m(V).

Both are handled as tensor-space quotients. The degree-n part of S_q(V) is
V^{(x)n} modulo the kernel of tau_n, the span of all leg placements of the
quantum exterior square. The kernel is kept in reduced row-echelon form, and
its non-pivot coordinates (normal monomials) are the canonical coordinates.
Sections act band by band in A_m(V).
"""

from __future__ import annotations

import os
from math import factorial

from . import rep
from .exactq import ONE, ZERO, PoleAtOne, as_ratfunc, eval_at_one, q
from .report import Report, tensor_equal
from .tensorla import (
    LABELS,
    EchelonBasis,
    LegMismatch,
    LinMap,
    SparseTensor,
    _SemiEchelon,
    _acc,
    apply_at,
    decode,
    encode,
)


def weyl_dim(n):
    """dim V_{n lambda_1} from the Weyl dimension formula."""
    return factorial(n + 4) * (2 * n + 5) // (120 * factorial(n))


def sqv_dim_oracle(n):
    """Expected dim S_q(V)_n: the harmonic part, plus Phi in degree 2."""
    return weyl_dim(n) + (1 if n == 2 else 0)


def wedge_basis():
    """The 21 vectors spanning the quantum exterior square in V (x) V."""
    return rep.basis_vl2() + rep.basis_vl1()


# ---------------------------------------------------------------------------
# degree data


class DegreeData:
    """Kernel of tau_n and the induced section onto normal monomials."""

    def __init__(self, n, kernel):
        self.n = n
        self.kernel = kernel
        self._pivots = set(kernel.pivots)
        self._memo = {}

    @property
    def dim(self):
        return 7**self.n - self.kernel.dim

    def is_normal(self, index):
        return index not in self._pivots

    def normal_indices(self):
        return [i for i in range(7**self.n) if i not in self._pivots]

    def section_index(self, i):
        """Section of the basis tensor with index i, as a dict."""
        r = self._memo.get(i)
        if r is None:
            if i not in self._pivots:
                r = {i: ONE}
            else:
                r = {k: -a for k, a in self.kernel.row_dict(i).items() if k != i}
            self._memo[i] = r
        return r

    def section(self, x):
        if x.n != self.n:
            raise LegMismatch("section of degree %d applied to %d legs" % (self.n, x.n))
        return section_on_legs(self, 0, x)


def section_on_legs(data, offset, x):
    """Apply the degree-k section to legs offset..offset+k-1 of x."""
    k = data.n
    if k < 2:
        return x
    low = 7 ** (x.n - offset - k)
    mid = 7**k
    out = {}
    for idx, c in x.entries.items():
        hi, rest = divmod(idx, mid * low)
        m, lo = divmod(rest, low)
        for m2, a in data.section_index(m).items():
            _acc(out, (hi * mid + m2) * low + lo, c * a)
    return SparseTensor(x.n, out)


_DEGREE = {}
_cache_dir = None


def set_cache_dir(path):
    """Directory for kernel-n<k>.txt files; None disables the disk cache."""
    global _cache_dir
    _cache_dir = path


def cache_path(n, cache_dir=None):
    d = cache_dir or _cache_dir
    return None if d is None else os.path.join(d, "kernel-n%d.txt" % n)


def degree_data(n, cache_dir=None):
    """DegreeData for degree n, built once per process (and cached on disk if configured)."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    data = _DEGREE.get(n)
    if data is not None:
        return data
    path = cache_path(n, cache_dir)
    kern = None
    if path and os.path.exists(path):
        with open(path) as fh:
            kern = EchelonBasis.from_text(fh.read())
    if kern is None:
        kern = _build_kernel(n, cache_dir)
        if path:
            _write_kernel(path, kern)
    data = DegreeData(n, kern)
    _DEGREE[n] = data
    return data


def _write_kernel(path, kern):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(kern.to_text())
    os.replace(tmp, path)


def save_kernel(n, cache_dir=None):
    """Write the degree-n kernel to the disk cache even if it was built in memory; returns the path."""
    path = cache_path(n, cache_dir)
    if path is None:
        raise ValueError("no cache directory configured")
    data = degree_data(n, cache_dir)
    if not os.path.exists(path):
        _write_kernel(path, data.kernel)
    return path


def clear_memory_cache():
    _DEGREE.clear()


def _build_kernel(n, cache_dir=None):
    # ker tau_n = ker tau_{n-1} (x) V + (normal monomials of degree n-2) (x) wedge
    if n < 2:
        return EchelonBasis(n, {})
    prev = degree_data(n - 1, cache_dir).kernel
    ech = _SemiEchelon()
    for p in prev.pivots:
        row = prev.row_dict(p)
        for c in range(7):
            ech.rows[p * 7 + c] = ({k * 7 + c: a for k, a in row.items()}, None)
    wedge = [w.entries for w in wedge_basis()]
    for m in degree_data(n - 2, cache_dir).normal_indices():
        for w in wedge:
            ech.insert({m * 49 + j: a for j, a in w.items()})
    return EchelonBasis(n, ech.to_rref())


def sqv_dim(n):
    return degree_data(n).dim


def tau_n(x):
    """The section tau_n as a tensor map on V^{(x)n}."""
    return degree_data(x.n).section(x)


# ---------------------------------------------------------------------------
# algebra elements


def _check_degree(d):
    d = tuple(int(x) for x in d)
    if not d or any(x < 0 for x in d):
        raise ValueError("a multidegree needs m >= 1 nonnegative entries, got %r" % (d,))
    return d


def band_sections(d, x):
    """Apply tau_{d_1} (x) ... (x) tau_{d_m} to a tensor with |d| legs."""
    if x.n != sum(d):
        raise LegMismatch("multidegree %r needs %d legs, tensor has %d" % (d, sum(d), x.n))
    offset = 0
    for k in d:
        if k >= 2 and x.entries:
            x = section_on_legs(degree_data(k), offset, x)
        offset += k
    return x


class AlgElem:
    """An element of A_m(V) in canonical band-wise section coordinates."""

    __slots__ = ("m", "components")

    def __init__(self, m, components=None):
        if m < 1:
            raise ValueError("band count must be at least 1")
        self.m = m
        self.components = {}
        for d, t in (components or {}).items():
            d = _check_degree(d)
            if len(d) != m:
                raise ValueError("multidegree %r has %d bands, expected %d" % (d, len(d), m))
            if t.entries:
                self.components[d] = t

    @classmethod
    def zero(cls, m):
        return cls(m)

    @classmethod
    def one(cls, m):
        return cls(m, {(0,) * m: SparseTensor.scalar(ONE)})

    @classmethod
    def gen(cls, i, a, m):
        """X_{ia}: the generator v_a placed in band i (1-based)."""
        if not 1 <= i <= m:
            raise ValueError("band %d out of range 1..%d" % (i, m))
        d = tuple(1 if k == i - 1 else 0 for k in range(m))
        return cls(m, {d: SparseTensor.basis(a)})

    def _same(self, other):
        if not isinstance(other, AlgElem):
            raise TypeError("expected AlgElem")
        if other.m != self.m:
            raise ValueError("band counts %d and %d differ" % (self.m, other.m))

    def __add__(self, other):
        self._same(other)
        comps = dict(self.components)
        for d, t in other.components.items():
            comps[d] = comps[d] + t if d in comps else t
        return AlgElem(self.m, comps)

    def __neg__(self):
        return AlgElem(self.m, {d: -t for d, t in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_ratfunc(c)
        return AlgElem(self.m, {d: t.scale(c) for d, t in self.components.items()})

    def __mul__(self, other):
        if isinstance(other, AlgElem):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, AlgElem):
            return NotImplemented
        return self.m == other.m and self.components == other.components

    __hash__ = None

    def is_zero(self):
        return not self.components

    def __bool__(self):
        return bool(self.components)

    def degrees(self):
        return sorted(self.components)

    def component(self, d):
        return self.components.get(tuple(d), SparseTensor(sum(d), {}))

    def coeff(self, *factors):
        """Coefficient of the monomial X_{i1 a1} X_{i2 a2} ... (bands nondecreasing)."""
        d = [0] * self.m
        labels = []
        for i, a in sorted(factors, key=lambda f: f[0]):
            d[i - 1] += 1
            labels.append(a)
        return self.component(d).coeff(labels)

    def terms(self):
        """(coefficient, [(band, label), ...]) for every nonzero coordinate."""
        out = []
        for d in sorted(self.components):
            t = self.components[d]
            bands = [i + 1 for i, k in enumerate(d) for _ in range(k)]
            for idx in sorted(t.entries):
                labels = decode(idx, t.n)
                out.append((t.entries[idx], list(zip(bands, labels))))
        return out

    def __str__(self):
        if not self.components:
            return "0"
        parts = []
        for c, mono in self.terms():
            word = "".join("X[%d,%d]" % (i, a) for i, a in mono) or "1"
            parts.append("(%s)*%s" % (c, word))
        return " + ".join(parts)

    def __repr__(self):
        return "AlgElem(m=%d, %s)" % (self.m, self)


def tau(d, x):
    """The canonical image of the tensor x in the component of multidegree d."""
    d = _check_degree(d)
    return AlgElem(len(d), {d: band_sections(d, x)})


def _braid_sort(t, bands, schedule):
    """Stably sort legs by band, applying the braiding at each swap."""
    R = rep.structure_maps().R
    bands = list(bands)
    n = len(bands)
    if schedule == "left":
        changed = True
        while changed:
            changed = False
            for i in range(n - 1):
                if bands[i] > bands[i + 1]:
                    t = apply_at(R, i, t)
                    bands[i], bands[i + 1] = bands[i + 1], bands[i]
                    changed = True
    elif schedule == "right":
        changed = True
        while changed:
            changed = False
            for i in range(n - 2, -1, -1):
                if bands[i] > bands[i + 1]:
                    t = apply_at(R, i, t)
                    bands[i], bands[i + 1] = bands[i + 1], bands[i]
                    changed = True
    else:
        raise ValueError("unknown schedule %r" % (schedule,))
    return t


def multiply(x, y, schedule="left"):
    """The braided product in A_m(V)."""
    x._same(y)
    m = x.m
    comps = {}
    for dx, tx in x.components.items():
        bx = [i for i, k in enumerate(dx) for _ in range(k)]
        for dy, ty in y.components.items():
            by = [i for i, k in enumerate(dy) for _ in range(k)]
            t = _braid_sort(tx.otimes(ty), bx + by, schedule)
            d = tuple(a + b for a, b in zip(dx, dy))
            t = band_sections(d, t)
            comps[d] = comps[d] + t if d in comps else t
    return AlgElem(m, comps)


def X(i, a, m=1):
    return AlgElem.gen(i, a, m)


def phi_sq():
    """Phi in S_q(V): the image of c_0."""
    return tau((2,), rep.basis_v0()[0])


# ---------------------------------------------------------------------------
# the presentation of S_q(V)


def _v(*pairs):
    """Two-leg tensor from (coefficient, a, b) triples."""
    return SparseTensor.from_labels(2, [((a, b), as_ratfunc(c)) for c, a, b in pairs])


P_SETS = {1: ((1, 2), (1, 3), (2, -3)), 2: ((1, 0),), 3: ((1, -3), (1, -2))}


def presentation_relations():
    """The 21 quadratic relations as (id, tensor) with tensor = lhs - rhs."""
    out = []
    for ell, pairs in P_SETS.items():
        a = q**ell
        for i, j in pairs:
            out.append(("r1 X%dX%d" % (j, i), _v((1, j, i), (-a, i, j))))
            out.append(("r1 X%dX%d" % (-i, -j), _v((1, -i, -j), (-a, -j, -i))))
    out += [
        ("r2 X3X2", _v((1, 3, 2), (-(q**3), 2, 3), (-(q**2 - q**4), 1, 0))),
        ("r2 X-2X-3", _v((1, -2, -3), (-(q**3), -3, -2), (-(q - q**5), 0, -1))),
        ("r2 X0X2", _v((1, 0, 2), (-(q**2), 2, 0), (-(q**3 - q), 1, -3))),
        ("r2 X-2X0", _v((1, -2, 0), (-(q**2), 0, -2), (-(q**4 - 1), 3, -1))),
        ("r2 X0X3", _v((1, 0, 3), (-(q**2), 3, 0), (-(q - q**3), 1, -2))),
        ("r2 X-3X0", _v((1, -3, 0), (-(q**2), 0, -3), (-(1 - q**4), 2, -1))),
    ]
    e = q**-4 - q**-2
    out.append((
        "r3 X-1X1",
        _v((1, -1, 1), (-(q**2), 1, -1), (-(q**-1 - q**3), 2, -2), (-(q**-4 - 1), 3, -3), (-e, 0, 0), (-e, 1, -1)),
    ))
    f = q**-3 - q**-1
    out.append((
        "r3 X-2X2",
        _v((1, -2, 2), (-1, 2, -2), (-(q**-3 - q), 3, -3), (-f, 0, 0), (-f, 1, -1)),
    ))
    g = 1 - q**2
    out.append((
        "r3 X-3X3",
        _v((1, -3, 3), (-1, 3, -3), (-(q**3 - q), 2, -2), (-g, 0, 0), (-g, 1, -1)),
    ))
    return out


def verify_presentation_sq():
    R = Report("sqv-presentation")
    kern = degree_data(2).kernel
    rels = presentation_relations()
    for rid, t in rels:
        R.check(rid, lambda t=t: None if kern.contains(t) else "not in ker tau_2: %s" % t)
    from .tensorla import rank

    R.add("relation-count", len(rels) == 21, "%d relations" % len(rels))
    r = rank([t for _, t in rels])
    R.add("relation-rank", r == 21, "rank %d" % r)
    r0 = rank([t for _, t in rels] + [rep.basis_v0()[0]])
    R.add("relations-plus-c0-rank", r0 == 22, "rank %d" % r0)
    return R


def verify_sqv(max_degree=4):
    """Dimensions, the presentation, Phi nilpotency and the theta relations."""
    R = Report("sqv", environment={"max_degree": max_degree})
    for n in range(max_degree + 1):
        R.check("dim-%d" % n, lambda n=n: None if sqv_dim(n) == sqv_dim_oracle(n) else "dim %d, expected %d" % (sqv_dim(n), sqv_dim_oracle(n)))
    R.extend(verify_presentation_sq(), "presentation/")
    phi = phi_sq()

    def phi_display():
        t = _v(
            (q**4, 1, -1), (q**3, 2, -2), (1, 3, -3), (q**-6, -1, 1), (q**-5, -2, 2), (q**-2, -3, 3), (1, 0, 0),
        )
        return None if tau((2,), t) == phi else "Phi display differs from tau_2(c_0)"

    R.check("phi-display", phi_display)
    R.check("phi-nonzero", lambda: None if phi else "Phi is zero")
    for a in LABELS:
        R.check("phi-x%d" % a, lambda a=a: None if (phi * X(1, a)).is_zero() else "Phi X_%d != 0" % a)
        R.check("x%d-phi" % a, lambda a=a: None if (X(1, a) * phi).is_zero() else "X_%d Phi != 0" % a)
    R.check("phi-squared", lambda: None if (phi * phi).is_zero() else "Phi^2 != 0")
    R.extend(verify_vartheta(), "vartheta/")
    return R


def vartheta():
    return X(1, -1) * X(1, 1) - (X(1, 1) * X(1, -1)).scale(q**4)


def verify_vartheta():
    R = Report("vartheta")
    th = vartheta()
    c1 = as_ratfunc(q**-4 + q**2 - q**-2)
    factors = {2: q**-2, 3: q**-2, -2: q**2, -3: q**2, 0: ONE, 1: c1.inverse(), -1: c1}
    for a in (2, 3, -2, -3, 0, 1, -1):
        def one(a=a):
            lhs = X(1, a) * th
            rhs = (th * X(1, a)).scale(factors[a])
            return None if lhs == rhs else "X_%d theta: lhs %s, rhs %s" % (a, lhs, rhs)

        R.check("quasicom-x%d" % a, one)
    k = (q**-8 - q**-4 + 1) / as_ratfunc(q**-2 - 1)
    R.check("phi-vs-theta", lambda: None if phi_sq() == th.scale(k) else "Phi != k theta")
    return R


# ---------------------------------------------------------------------------
# presentation of A_m(V)

_BAR = {1: 1, 2: 2, 3: 3, 4: 0, 5: -3, 6: -2, 7: -1}
I_SET = ((1, 2), (1, 3), (2, 5), (3, 6), (5, 7), (6, 7))


def j_sets():
    """J_r for r in [5, 11] other than 8, as {r: (a1, a2)}."""
    out = {}
    for r in range(5, 12):
        if r == 8:
            continue
        pairs = [(a, r - a) for a in range(1, 8) if a < r - a <= 7 and (a, r - a) not in I_SET]
        out[r] = tuple(a for a, _ in pairs)
    return out


def _consts():
    b = as_ratfunc(q**2 + 1 + q**-2)
    c = as_ratfunc(q**2 + q**-2 - q**-6 - 1)
    d = as_ratfunc(1 - q**-2)
    s = as_ratfunc(q**-8 + q**-4 - q**-6 - 1)
    t = as_ratfunc(q**-6 + 1 - q**-4 - q**2)
    return b, c, d, s, t


def a_matrices():
    """The displayed matrices A_5, A_6, A_8, A_9, A_11."""
    b, c, d, s, t = _consts()
    Q = as_ratfunc(q)
    qi = Q.inverse()
    z = ZERO
    one = ONE
    A = {}
    A[5] = [
        [one, z, z, z],
        [Q * d, qi, z, z],
        [-(qi**2) * d, b * d, qi, z],
        [c - qi**2 * d, -(qi**4 + qi**2) * d, (Q + qi) * d, one],
    ]
    A[6] = [
        [qi, z, z, z],
        [-d, one, z, z],
        [qi**2 * d, (1 + Q**2) * d, one, z],
        [c, (1 + qi**2) * d, -(1 + Q**2) * d, qi],
    ]
    A[9] = [
        [qi, z, z, z],
        [(Q + qi) * d, one, z, z],
        [-qi * d, -(1 + Q**2) * d, one, z],
        [c, -qi * d, Q * d, qi],
    ]
    A[11] = [
        [one, z, z, z],
        [(1 + Q**2) * d, qi, z, z],
        [-qi * d, b * d, qi, z],
        [c - qi**2 * d, -(qi**3) * d, d, one],
    ]
    A[8] = [
        [qi**2, z, z, z, z, z, z],
        [-qi * d, qi**2, z, z, z, z, z],
        [-(qi**4) * d, qi**5 - Q, qi**2, z, z, z, z],
        [qi**2 * t, qi**7 - qi**3, qi**4 - 1, one, z, z, z],
        [s, -(qi**5) * d, Q**2 * t, qi**2 - Q**2, qi**2, z, z],
        [qi**3 * s, (Q**2 - qi**8) * d, -(qi**5) * d, qi**5 - qi, qi**5 - Q, qi**2, z],
        [qi**4 * s + c, qi**3 * s, s, t, -(qi**4) * d, -qi * d, qi**2],
    ]
    return A


INVERTED_ENTRIES = ((2, 1), (3, 1), (4, 2), (4, 3))


def derived_matrix(base, rule):
    """A_7 from A_6 (or A_10 from A_9) under a reading of the inversion rule.

    "negate" takes the additive inverse of the flagged entries, "bar"
    substitutes q -> q^-1 and "reciprocal" takes 1/e.
    """
    out = [row[:] for row in base]
    for i, j in INVERTED_ENTRIES:
        e = out[i - 1][j - 1]
        if rule == "negate":
            out[i - 1][j - 1] = -e
        elif rule == "bar":
            out[i - 1][j - 1] = e.bar()
        elif rule == "reciprocal":
            out[i - 1][j - 1] = e.inverse()
        else:
            raise ValueError(rule)
    return out


def _braided_x2x1(a, b):
    """X_{2a} X_{1b} in A_2 as a tensor in the (1,1) component."""
    return (X(2, a, 2) * X(1, b, 2)).component((1, 1))


def computed_block(r):
    """The matrix expressing the r-th block of products in normal order."""
    lhs, rhs = block_labels(r)
    rows = []
    stray = []
    for ja, ib in lhs:
        t = _braided_x2x1(ja, ib)
        row = [t.coeff([c1, c2]) for c1, c2 in rhs]
        used = {encode([c1, c2]) for c1, c2 in rhs}
        extra = [k for k in t.entries if k not in used]
        if extra:
            stray.append((ja, ib, [decode(k, 2) for k in extra]))
        rows.append(row)
    return rows, stray


def _compare(name, got, want, R):
    for i, (rg, rw) in enumerate(zip(got, want)):
        for j, (x, y) in enumerate(zip(rg, rw)):
            R.add("%s[%d,%d]" % (name, i + 1, j + 1), x == y, "computed %s, displayed %s" % (x, y))


def verify_prop_preAm():
    R = Report("pre-am")
    # single-band-pair relations
    for a in range(1, 8):
        if a == 4:
            continue
        ab = _BAR[a]
        R.check(
            "diag-%d" % ab,
            lambda ab=ab: tensor_equal(_braided_x2x1(ab, ab), SparseTensor.basis(ab, ab).scale(q**2)),
        )
    for a, b in I_SET:
        A, B = _BAR[a], _BAR[b]
        R.check(
            "I-(%d,%d)-first" % (a, b),
            lambda A=A, B=B: tensor_equal(_braided_x2x1(A, B), SparseTensor.basis(B, A).scale(q)),
        )
        R.check(
            "I-(%d,%d)-second" % (a, b),
            lambda A=A, B=B: tensor_equal(
                _braided_x2x1(B, A),
                SparseTensor.basis(A, B).scale(q) + SparseTensor.basis(B, A).scale(q**2 - 1),
            ),
        )
    shown = a_matrices()
    for r in (5, 6, 8, 9, 11):
        got, stray = computed_block(r)
        R.add("A%d-closed" % r, not stray, "stray terms %s" % stray)
        _compare("A%d" % r, got, shown[r], R)
    for r, base in ((7, 6), (10, 9)):
        got, stray = computed_block(r)
        R.add("A%d-closed" % r, not stray, "stray terms %s" % stray)
        hits = [r_ for r_ in RULES if got == derived_matrix(shown[base], r_)]
        R.add(
            "A%d-inversion-rule" % r,
            bool(hits),
            "computed A%d matches no reading of the displayed A%d" % (r, base),
        )
        # same rule applied to the computed base block, isolating the rule
        # from misprints in the displayed base
        base_got, _ = computed_block(base)
        R.add(
            "A%d-negates-computed-A%d" % (r, base),
            got == derived_matrix(base_got, "negate"),
            "additive-inverse rule fails against computed A%d" % base,
        )
    return R


RULES = ("negate", "bar", "reciprocal")


def block_labels(r):
    """Row and column label pairs of the r-th block."""
    if r == 8:
        lhs = [(1, -1), (2, -2), (3, -3), (0, 0), (-3, 3), (-2, 2), (-1, 1)]
        rhs = [(-1, 1), (-2, 2), (-3, 3), (0, 0), (3, -3), (2, -2), (1, -1)]
        return lhs, rhs
    a1, a2 = j_sets()[r]
    B = _BAR
    lhs = [(B[a1], B[r - a1]), (B[a2], B[r - a2]), (B[r - a2], B[a2]), (B[r - a1], B[a1])]
    rhs = [(B[r - a1], B[a1]), (B[r - a2], B[a2]), (B[a2], B[r - a2]), (B[a1], B[r - a1])]
    return lhs, rhs


def perturbed_braiding_is_equivariant(r, i, j, value):
    """Does R-check stay a U_q-map after forcing entry (i, j) of A_r to value?

    Entry (i, j) is the coefficient of the j-th normal product in the
    braiding of the i-th row product. Any misprint in a displayed entry
    shows up as a False here, since the true braiding is equivariant.
    """
    got, _ = computed_block(r)
    delta = value - got[i - 1][j - 1]
    lhs, rhs = block_labels(r)
    R = rep.structure_maps().R
    src, dst = encode(list(lhs[i - 1])), encode(list(rhs[j - 1]))
    cols = {k: dict(v) for k, v in R.cols.items()}
    col = cols.setdefault(src, {})
    col[dst] = col.get(dst, ZERO) + delta
    M = LinMap(2, 2, cols)
    for g in rep.GENERATORS:
        for k in range(49):
            x = SparseTensor(2, {k: ONE})
            if M(rep.act(g, x)) != rep.act(g, M(x)):
                return False
    return True


# ---------------------------------------------------------------------------
# classical limit


def structure_constants(a, b):
    """Products of normal monomials of degrees a and b in S_q(V).

    Returns {(i, j): section dict} with i, j normal indices.
    """
    da, db = degree_data(a), degree_data(b)
    dn = degree_data(a + b)
    out = {}
    for i in da.normal_indices():
        for j in db.normal_indices():
            x = SparseTensor(a + b, {i * 7**b + j: ONE})
            out[(i, j)] = dn.section(x).entries
    return out


def classical_limit_check(max_n=3):
    R = Report("classical", environment={"max_degree": max_n})
    special = {}
    for a in range(1, max_n):
        for b in range(1, max_n - a + 1):
            def run(a=a, b=b):
                try:
                    special[(a, b)] = {
                        k: {i: eval_at_one(c) for i, c in v.items()} for k, v in structure_constants(a, b).items()
                    }
                except PoleAtOne as exc:
                    return "pole at q=1: %s" % exc
                return None

            R.check("no-pole-%d-%d" % (a, b), run)
    for a in range(1, max_n):
        for b in range(a, max_n - a + 1):
            def comm(a=a, b=b):
                if (a, b) not in special or (b, a) not in special:
                    return "structure constants missing"
                sab, sba = special[(a, b)], special[(b, a)]
                for (i, j), v in sab.items():
                    w = sba[(j, i)]
                    vz = {k: c for k, c in v.items() if c}
                    wz = {k: c for k, c in w.items() if c}
                    if vz != wz:
                        return "monomials %s and %s do not commute at q=1" % (decode(i, a), decode(j, b))
                return None

            R.check("commutative-%d-%d" % (a, b), comm)

    def phi_kills():
        phi = phi_sq().component((2,))
        for a in LABELS:
            for left in (True, False):
                t = phi.otimes(SparseTensor.basis(a)) if left else SparseTensor.basis(a).otimes(phi)
                s = degree_data(3).section(t)
                if any(eval_at_one(c) for c in s.entries.values()):
                    return "Phi X_%d nonzero at q=1" % a
        return None

    if max_n >= 3:
        R.check("phi-times-x-at-1", phi_kills)
    for n in range(max_n + 1):
        R.check(
            "dim-%d" % n,
            lambda n=n: None if degree_data(n).dim == sqv_dim_oracle(n) else "dim %d vs classical %d" % (degree_data(n).dim, sqv_dim_oracle(n)),
        )
    return R


# ---------------------------------------------------------------------------
# equivariance of the canonical coordinates


def act_elem(g, x):
    """Apply a generator of U_q to every component (through the coproduct)."""
    return AlgElem(x.m, {d: band_sections(d, rep.act(g, t)) for d, t in x.components.items()})


def lift_in_kernel(n, rng):
    """A random element of ker tau_n (a leg placement of a wedge vector)."""
    w = rng.choice(wedge_basis())
    k = rng.randint(0, n - 2)
    pre = SparseTensor.basis(*[rng.choice(LABELS) for _ in range(k)]) if k else SparseTensor.scalar(ONE)
    suf = SparseTensor.basis(*[rng.choice(LABELS) for _ in range(n - 2 - k)]) if n - 2 - k else SparseTensor.scalar(ONE)
    return pre.otimes(w).otimes(suf)

