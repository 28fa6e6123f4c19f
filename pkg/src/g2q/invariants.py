"""Invariants of A_m(V): construction, commutation relations and spanning.

An invariant built from an invariant tensor x of V^{(x)n} and a list of
bands (one per leg) is the product of generators X_{b_1 a_1} ... X_{b_n a_n}
summed with the coefficients of x. When the bands are nondecreasing this
is just tau_d(x); otherwise the legs are braided into band order first.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from . import rep
from .algebra import AlgElem, X, _braid_sort, band_sections, multiply, tau
from .diagrams import apply_diagram, evaluate, parse
from .exactq import ONE, q
from .report import Report
from .tensorla import LABELS, SparseTensor, apply_at, rank

__all__ = [
    "GeneratorRef",
    "InvariantValue",
    "InvarianceError",
    "kappa",
    "placed",
    "phi",
    "psi",
    "upsilon",
    "upsilon_prime",
    "theta",
    "gamma_pair",
    "phi_pm",
    "is_invariant_elem",
    "invariant_dim",
    "verify_constructions",
    "verify_commutation",
    "fft_span_check",
    "SUITES",
]


class InvarianceError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorRef:
    kind: str
    indices: tuple

    def __str__(self):
        return "%s(%s)" % (self.kind, ",".join(str(i) for i in self.indices))


@dataclass
class InvariantValue:
    elem: AlgElem
    source: object

    def __str__(self):
        return str(self.elem)


# ---------------------------------------------------------------------------
# tensors behind the invariants


def _S():
    return rep.structure_maps()


@functools.lru_cache(maxsize=None)
def _qq():
    # q + q^-1, q^2 + q^-2 and the recurring ratio (1 - q^14)/dim_q V
    return q - q**-1, q**2 + q**-2, (1 - q**14) / rep.quantum_dim(1)


def kappa():
    return _qq()[2]



def _column(f, i=0):
    return SparseTensor(f.out_legs, dict(f.cols.get(i, {})))


@functools.lru_cache(maxsize=None)
def c0():
    return _S().c0


@functools.lru_cache(maxsize=None)
def gamma_vec(a):
    """The split vertex on v_a, -q^3 gamma(v_a) = -q^3 b_a.

    This is the normalisation under which the gamma-pairs appear in the
    relations with Psi; it matches the factor already inside c_rst.
    """
    return apply_at(_S().gamma, 0, SparseTensor.basis(a)).scale(-(q**3))


@functools.lru_cache(maxsize=None)
def psi_tensor():
    """c_rst = -q^3 sum_c phi_rc gamma_cst."""
    return apply_at(_S().gamma, 1, c0()).scale(-(q**3))


@functools.lru_cache(maxsize=None)
def upsilon_tensor():
    """c_abcd = q^6 sum phi_fh gamma_fab gamma_hcd."""
    g = _S().gamma
    return apply_at(g, 0, apply_at(g, 1, c0())).scale(q**6)


UPSILON_PRIME = "cup ; split id ; id split id"
THETA_PICTURE = "cup ; split id ; id split id ; id id id split"


@functools.lru_cache(maxsize=None)
def upsilon_prime_tensor():
    return _column(evaluate(UPSILON_PRIME))


@functools.lru_cache(maxsize=None)
def theta_tensor(path="picture"):
    """The quintic tree.

    "picture" evaluates the drawn tree; "composite" is the nested composite
    (id (x) g (x) g) o (id (x) g) o cup with g the split vertex -q^3 gamma and
    agrees with it. "composite-raw" uses gamma itself and "composite-left" the
    mirrored nesting; both are kept to report how they fare.
    """
    if path == "picture":
        return _column(evaluate(THETA_PICTURE))
    g = _S().gamma
    if path in ("composite", "composite-raw"):
        t = apply_at(g, 1, c0())
        t = apply_at(g, 1, apply_at(g, 2, t))
        return t.scale(-(q**9)) if path == "composite" else t
    if path == "composite-left":
        t = apply_at(g, 0, c0())
        return apply_at(g, 0, apply_at(g, 1, t)).scale(-(q**9))
    raise ValueError("unknown theta path %r" % (path,))


THETA_PATHS = ("picture", "composite", "composite-raw", "composite-left")


# T_+ pulls the bottom right leg of split o merge up to the top right, T_- the left one
T_DIAGRAMS = {
    "+": "id cup ; merge id ; split id",
    "-": "cup id ; id merge ; id split",
}


@functools.lru_cache(maxsize=None)
def phi_pm_tensor(sign, a):
    d = parse(T_DIAGRAMS[sign])
    return apply_diagram(d, SparseTensor.basis(a))


# ---------------------------------------------------------------------------
# placing tensors in bands


def placed(x, bands, m):
    """sum_a x_a X_{b_1 a_1} ... X_{b_n a_n} in A_m(V)."""
    bands = tuple(bands)
    if len(bands) != x.n:
        raise ValueError("%d bands for a %d-leg tensor" % (len(bands), x.n))
    for b in bands:
        if not 1 <= b <= m:
            raise ValueError("band %d out of range 1..%d" % (b, m))
    d = [0] * m
    for b in bands:
        d[b - 1] += 1
    if any(b1 > b2 for b1, b2 in zip(bands, bands[1:])):
        x = _braid_sort(x, [b - 1 for b in bands], "left")
    return tau(tuple(d), x)


def _nondecreasing(idx, what):
    if any(a > b for a, b in zip(idx, idx[1:])):
        raise ValueError("%s needs nondecreasing band indices, got %r" % (what, idx))


@functools.lru_cache(maxsize=None)
def _cached_elem(kind, idx, m):
    if kind == "Phi":
        return placed(c0(), idx, m)
    if kind == "Psi":
        return placed(psi_tensor(), idx, m)
    if kind == "Upsilon":
        return placed(upsilon_tensor(), idx, m)
    if kind == "UpsilonPrime":
        return placed(upsilon_prime_tensor(), idx, m)
    if kind.startswith("Theta"):
        path = kind.partition(":")[2] or "picture"
        return placed(theta_tensor(path), idx, m)
    if kind == "GammaPair":
        a, i, j = idx
        return placed(gamma_vec(a), (i, j), m)
    if kind in ("PhiPlus", "PhiMinus"):
        a, i, j, k = idx
        return placed(phi_pm_tensor("+" if kind == "PhiPlus" else "-", a), (i, j, k), m)
    raise ValueError(kind)


def is_invariant_elem(x):
    """Killed by E_i, F_i and fixed by K_i in canonical coordinates."""
    for d, t in x.components.items():
        for g in ("E1", "E2", "F1", "F2"):
            if band_sections(d, rep.act(g, t)).entries:
                return False
        for g in ("K1", "K2"):
            if band_sections(d, rep.act(g, t)) != t:
                return False
    return True


def _invariant(kind, idx, m, check):
    elem = _cached_elem(kind, tuple(idx), m)
    if check and not is_invariant_elem(elem):
        raise InvarianceError("%s%r is not U_q-invariant" % (kind, tuple(idx)))
    return InvariantValue(elem, GeneratorRef(kind, tuple(idx)))


def phi(i, j, m, check=True):
    """Phi^{(i,j)}; for i > j the displayed formula with i and j exchanged."""
    return _invariant("Phi", (i, j), m, check)


def psi(i, j, k, m, check=True):
    """Psi^{(i,j,k)} = sum c_rst X_ir X_js X_kt, for any band order."""
    return _invariant("Psi", (i, j, k), m, check)


def upsilon(i, j, k, l, m, check=True):
    _nondecreasing((i, j, k, l), "Upsilon")
    return _invariant("Upsilon", (i, j, k, l), m, check)


def upsilon_prime(i, j, k, l, m, check=True):
    _nondecreasing((i, j, k, l), "Upsilon'")
    return _invariant("UpsilonPrime", (i, j, k, l), m, check)


def theta(i, j, r, s, t, m, path="picture", check=True):
    _nondecreasing((i, j, r, s, t), "Theta")
    return _invariant("Theta:" + path, (i, j, r, s, t), m, check)


def gamma_pair(a, i, j, m):
    """(gamma(v_a))^{(i,j)}; covariant, not invariant."""
    return InvariantValue(_cached_elem("GammaPair", (a, i, j), m), GeneratorRef("GammaPair", (a, i, j)))


def phi_pm(sign, a, i, j, k, m):
    """(phi^{sign}_a)^{(i,j,k)}; covariant, not invariant."""
    kind = "PhiPlus" if sign in ("+", 1) else "PhiMinus"
    return InvariantValue(_cached_elem(kind, (a, i, j, k), m), GeneratorRef(kind, (a, i, j, k)))


# ---------------------------------------------------------------------------
# dimensions


@functools.lru_cache(maxsize=None)
def _invariant_rows(n):
    return tuple(rep.invariant_space(n).rows)


def invariant_dim(m, d):
    """dim of the invariants in the multidegree-d component of A_m(V)."""
    d = tuple(d)
    if len(d) != m:
        raise ValueError("multidegree %r does not have %d bands" % (d, m))
    return rank(band_sections(d, v) for v in _invariant_rows(sum(d)))


# ---------------------------------------------------------------------------
# relation checking


def _diff(lhs, rhs):
    if lhs == rhs:
        return None
    w = str(lhs - rhs)
    return "lhs - rhs = " + (w if len(w) < 400 else w[:400] + " ...")


class _Ctx:
    """Short names for the elements of A_m used in relation suites."""

    def __init__(self, m):
        self.m = m

    def X(self, i, a):
        return X(i, a, self.m)

    def P(self, i, j):
        return _cached_elem("Phi", (i, j), self.m)

    def S(self, i, j, k):
        return _cached_elem("Psi", (i, j, k), self.m)

    def U(self, i, j, k, l):
        return _cached_elem("Upsilon", (i, j, k, l), self.m)

    def Up(self, i, j, k, l):
        return _cached_elem("UpsilonPrime", (i, j, k, l), self.m)

    def G(self, a, i, j):
        return _cached_elem("GammaPair", (a, i, j), self.m)

    def Fp(self, a, i, j, k):
        return _cached_elem("PhiPlus", (a, i, j, k), self.m)

    def Fm(self, a, i, j, k):
        return _cached_elem("PhiMinus", (a, i, j, k), self.m)

    def T(self, i, j, r, s, t, path="picture"):
        return _cached_elem("Theta:" + path, (i, j, r, s, t), self.m)


def _rel(R, cid, lhs, rhs):
    R.check(cid, lambda: _diff(lhs(), rhs()))


def _tuples(m, n, strict=True):
    return itertools.combinations(range(1, m + 1), n) if strict else itertools.combinations_with_replacement(range(1, m + 1), n)


# ---------------------------------------------------------------------------
# constructions


def verify_constructions(m=4):
    R = Report("constructions", environment={"m": m})
    C = _Ctx(m)
    z = AlgElem.zero(m)
    for i, j in _tuples(m, 2):
        _rel(R, "r0-(%d,%d)" % (i, j), lambda i=i, j=j: C.P(j, i), lambda i=i, j=j: C.P(i, j).scale(q**-12))
    for i, j in itertools.product(range(1, m + 1), repeat=2):
        _rel(R, "psi-(%d,%d,%d)-zero" % (i, i, j), lambda i=i, j=j: C.S(i, i, j), lambda: z)
        _rel(R, "psi-(%d,%d,%d)-zero" % (i, j, j), lambda i=i, j=j: C.S(i, j, j), lambda: z) if i != j else None
    for i, j, k in itertools.permutations(range(1, m + 1), 3):
        if j > i:
            _rel(R, "psi-swap12-(%d,%d,%d)" % (i, j, k), lambda i=i, j=j, k=k: C.S(j, i, k), lambda i=i, j=j, k=k: C.S(i, j, k).scale(-(q**-6)))
        if k > j:
            _rel(R, "psi-swap23-(%d,%d,%d)" % (i, j, k), lambda i=i, j=j, k=k: C.S(i, k, j), lambda i=i, j=j, k=k: C.S(i, j, k).scale(-(q**-6)))
    for i, j, l in _tuples(m, 3):
        _rel(R, "upsilon-prime-(%d,%d,%d,%d)-zero" % (i, j, j, l), lambda i=i, j=j, l=l: C.Up(i, j, j, l), lambda: z)
    a2 = q**2 - 1 + q**-2
    for i, j, k, l in itertools.product(range(1, m + 1), repeat=4):
        if not i < j <= k < l:
            continue

        def lhs(i=i, j=j, k=k, l=l):
            return C.U(i, j, k, l) + C.Up(i, j, k, l)

        def rhs(i=i, j=j, k=k, l=l):
            return (C.P(j, k) * C.P(i, l) + C.P(i, j) * C.P(k, l)).scale(a2) - (C.P(j, l) * C.P(i, k) + C.P(i, k) * C.P(j, l))

        _rel(R, "up-prime-(%d,%d,%d,%d)" % (i, j, k, l), lhs, rhs)
    _check_psi_display(R)
    # invariance of every construction
    for i, j in itertools.product(range(1, m + 1), repeat=2):
        R.check("invariant-phi-(%d,%d)" % (i, j), _inv_witness, C.P(i, j))
    for t in _tuples(m, 3):
        R.check("invariant-psi-%s" % (t,), _inv_witness, C.S(*t))
    for t in _tuples(m, 4):
        R.check("invariant-upsilon-%s" % (t,), _inv_witness, C.U(*t))
        R.check("invariant-upsilon-prime-%s" % (t,), _inv_witness, C.Up(*t))
    if m >= 5:
        R.check("invariant-theta-(1,2,3,4,5)", _inv_witness, C.T(1, 2, 3, 4, 5))
    return R


def _inv_witness(x):
    return None if is_invariant_elem(x) else "not killed by E/F or not fixed by K"


def _psi_display():
    """The long explicit formula for Psi^{(1,2,3)}, subscripts completed."""
    terms = []

    def add(c, a, b, e):
        terms.append((c, (a, b, e)))

    one = ONE
    p = 1 + q**2
    # - q^7 X_1 ( X0 X-1 - q^-6 X-1 X0 - q^-2 (X-3 X-2 - q^-3 X-2 X-3) )
    for c, b, e in ((one, 0, -1), (-(q**-6), -1, 0), (-(q**-2), -3, -2), (q**-5, -2, -3)):
        add(-(q**7) * c, 1, b, e)
    # - q^-3 X_-1 ( X1 X0 - q^-6 X0 X1 - q^-3 (1+q^2)(X2 X3 - q^-3 X3 X2) )
    for c, b, e in ((one, 1, 0), (-(q**-6), 0, 1), (-(q**-3) * p, 2, 3), (q**-6 * p, 3, 2)):
        add(-(q**-3) * c, -1, b, e)
    # + q^4 X_2 ( q^-2 X-2 X0 - X0 X-2 - (1+q^2)(X3 X-1 - q^-5 X-1 X3) )
    for c, b, e in ((q**-2, -2, 0), (-one, 0, -2), (-p, 3, -1), (q**-5 * p, -1, 3)):
        add(q**4 * c, 2, b, e)
    # - q^-3 X_-2 ( q^-3 (X0 X2 - q^2 X2 X0) - X1 X-3 + q^-5 X-3 X1 )
    for c, b, e in ((q**-3, 0, 2), (-(q**-1), 2, 0), (-one, 1, -3), (q**-5, -3, 1)):
        add(-(q**-3) * c, -2, b, e)
    # - q X_3 ( (1+q^2)(X2 X-1 - q^-5 X-1 X2) - (X0 X-3 - q^-2 X-3 X0) )
    for c, b, e in ((p, 2, -1), (-(q**-5) * p, -1, 2), (-one, 0, -3), (q**-2, -3, 0)):
        add(-q * c, 3, b, e)
    # - X_-3 ( X1 X-2 - q^-5 X-2 X1 - q^-3 (q^2 X3 X0 - X0 X3) )
    for c, b, e in ((one, 1, -2), (-(q**-5), -2, 1), (-(q**-1), 3, 0), (q**-3, 0, 3)):
        add(-c, -3, b, e)
    # - q^2 X_0 ( q^-5 X-1 X1 - q^-1 X1 X-1 + q^-3 (1-q^2) X0 X0 + X2 X-2 - q^-6 X-2 X2 )
    for c, b, e in ((q**-5, -1, 1), (-(q**-1), 1, -1), (q**-3 * (1 - q**2), 0, 0), (one, 2, -2), (-(q**-6), -2, 2)):
        add(-(q**2) * c, 0, b, e)
    x = SparseTensor(3, {})
    for c, labels in terms:
        x = x + SparseTensor.basis(*labels).scale(c)
    return x


def _check_psi_display(R):
    """Secondary: the long display is compared, and a mismatch is only logged."""
    shown, got = _psi_display(), psi_tensor()
    if shown == got:
        R.add("psi-explicit-display", True)
        return
    bad = [k for k in set(shown.entries) | set(got.entries) if shown.entries.get(k) != got.entries.get(k)]
    R.skip("psi-explicit-display", "display differs from c_rst at %d coordinates (logged only)" % len(bad))


# ---------------------------------------------------------------------------
# commutation suites


def _ppp(R, m):
    C = _Ctx(m)
    qm, q22, k = _qq()
    z = AlgElem.zero(m)
    for a in LABELS:
        for i in range(1, m + 1):
            _rel(R, "1-left-i%d-a%d" % (i, a), lambda i=i, a=a: C.X(i, a) * C.P(i, i), lambda: z)
            _rel(R, "1-right-i%d-a%d" % (i, a), lambda i=i, a=a: C.P(i, i) * C.X(i, a), lambda: z)
            for kk in range(1, m + 1):
                if kk != i:
                    _rel(R, "2-k%d-i%d-a%d" % (kk, i, a), lambda i=i, kk=kk, a=a: C.X(kk, a) * C.P(i, i), lambda i=i, kk=kk, a=a: C.P(i, i) * C.X(kk, a))
        for i, j in itertools.permutations(range(1, m + 1), 2):
            for kk in range(1, m + 1):
                if kk < min(i, j) or kk > max(i, j):
                    _rel(
                        R, "3-k%d-(%d,%d)-a%d" % (kk, i, j, a),
                        lambda i=i, j=j, kk=kk, a=a: C.X(kk, a) * C.P(i, j),
                        lambda i=i, j=j, kk=kk, a=a: C.P(i, j) * C.X(kk, a),
                    )
        for i, j in _tuples(m, 2):
            _rel(
                R, "4-(%d,%d)-a%d" % (i, j, a),
                lambda i=i, j=j, a=a: C.X(i, a) * C.P(i, j),
                lambda i=i, j=j, a=a: (C.P(i, j) * C.X(i, a)).scale(q**2) + (C.P(i, i) * C.X(j, a)).scale(k),
            )
            _rel(
                R, "5-(%d,%d)-a%d" % (i, j, a),
                lambda i=i, j=j, a=a: C.X(j, a) * C.P(i, j),
                lambda i=i, j=j, a=a: (C.P(i, j) * C.X(j, a)).scale(q**-2) - (C.P(j, j) * C.X(i, a)).scale(q**-2 * k),
            )
        for i, kk, j in _tuples(m, 3):
            _rel(
                R, "6-(%d,%d,%d)-a%d" % (i, kk, j, a),
                lambda i=i, j=j, kk=kk, a=a: (C.X(kk, a) * C.P(i, j)).scale(q**-1),
                lambda i=i, j=j, kk=kk, a=a: (C.P(i, j) * C.X(kk, a)).scale(q)
                + (C.P(kk, j) * C.X(i, a) - (C.P(i, kk) * C.X(j, a)).scale(q22) + C.Fp(a, i, kk, j)).scale(qm),
            )
            _rel(
                R, "remark-(%d,%d,%d)-a%d" % (i, kk, j, a),
                lambda i=i, j=j, kk=kk, a=a: (C.P(i, j) * C.X(kk, a)).scale(q**-1) - (C.X(kk, a) * C.P(i, j)).scale(q),
                lambda i=i, j=j, kk=kk, a=a: (C.P(i, kk) * C.X(j, a) - (C.P(kk, j) * C.X(i, a)).scale(q22) + C.Fm(a, i, kk, j)).scale(qm),
            )


def _two_two(R, m):
    C = _Ctx(m)
    qm, q22, k = _qq()
    for i, j, kk in itertools.product(range(1, m + 1), repeat=3):
        _rel(R, "1-(%d;%d,%d)" % (i, j, kk), lambda i=i, j=j, kk=kk: C.P(i, i) * C.P(j, kk), lambda i=i, j=j, kk=kk: C.P(j, kk) * C.P(i, i))
    # both relations involve Phi^{(i,k)} and Phi^{(j,k)} written with the smaller
    # index first, so the admissible tuples are i < j < k
    for i, j, kk in _tuples(m, 3):
        _rel(
            R, "2-(%d,%d,%d)" % (i, j, kk),
            lambda i=i, j=j, kk=kk: C.P(i, kk) * C.P(i, j) - (C.P(i, j) * C.P(i, kk)).scale(q**2),
            lambda i=i, j=j, kk=kk: (C.P(i, i) * C.P(j, kk)).scale(k),
        )
        _rel(
            R, "3-(%d,%d,%d)" % (i, j, kk),
            lambda i=i, j=j, kk=kk: C.P(i, j) * C.P(j, kk) - (C.P(j, kk) * C.P(i, j)).scale(q**2),
            lambda i=i, j=j, kk=kk: (C.P(j, j) * C.P(i, kk)).scale(k),
        )
    for (i, j), (kk, l) in itertools.product(list(_tuples(m, 2, strict=False)), repeat=2):
        if j < kk or (kk < i < j < l) or l < i:
            _rel(R, "4-(%d,%d)(%d,%d)" % (i, j, kk, l), lambda i=i, j=j, kk=kk, l=l: C.P(i, j) * C.P(kk, l), lambda i=i, j=j, kk=kk, l=l: C.P(kk, l) * C.P(i, j))
    for i, kk, j, l in _tuples(m, 4):
        _rel(
            R, "5-(%d,%d,%d,%d)" % (i, kk, j, l),
            lambda i=i, j=j, kk=kk, l=l: (C.P(kk, l) * C.P(i, j)).scale(q**-1) - (C.P(i, j) * C.P(kk, l)).scale(q),
            lambda i=i, j=j, kk=kk, l=l: (C.P(i, l) * C.P(kk, j) - (C.P(i, kk) * C.P(j, l)).scale(q22) + C.U(i, kk, j, l)).scale(qm),
        )


def _ijij(R, m):
    C = _Ctx(m)
    for i, j, kk in _tuples(m, 3):
        for a, b in ((i, j), (j, kk), (i, kk)):
            _rel(
                R, "(%d,%d,%d)-phi(%d,%d)" % (i, j, kk, a, b),
                lambda i=i, j=j, kk=kk, a=a, b=b: C.S(i, j, kk) * C.P(a, b),
                lambda i=i, j=j, kk=kk, a=a, b=b: C.P(a, b) * C.S(i, j, kk),
            )


def _phipsi(R, m):
    C = _Ctx(m)
    for i in range(1, m + 1):
        for r, s, t in _tuples(m, 3):
            if i not in (r, s, t):
                _rel(R, "1-i%d-(%d,%d,%d)" % (i, r, s, t), lambda i=i, r=r, s=s, t=t: C.P(i, i) * C.S(r, s, t), lambda i=i, r=r, s=s, t=t: C.S(r, s, t) * C.P(i, i))
    for i, j in _tuples(m, 2, strict=False):
        for r, s, t in _tuples(m, 3):
            if j < r or (r < i and j < s) or (s < i and j < t) or t < i or (i < r and t < j):
                _rel(
                    R, "2-(%d,%d)-(%d,%d,%d)" % (i, j, r, s, t),
                    lambda i=i, j=j, r=r, s=s, t=t: C.P(i, j) * C.S(r, s, t),
                    lambda i=i, j=j, r=r, s=s, t=t: C.S(r, s, t) * C.P(i, j),
                )


def _xpsi(R, m):
    C = _Ctx(m)
    qm, q22, k = _qq()
    for i, j, kk in _tuples(m, 3):
        for a in LABELS:
            for r in range(1, m + 1):
                if r < i or r > kk:
                    _rel(
                        R, "1-r%d-(%d,%d,%d)-a%d" % (r, i, j, kk, a),
                        lambda i=i, j=j, kk=kk, r=r, a=a: C.X(r, a) * C.S(i, j, kk),
                        lambda i=i, j=j, kk=kk, r=r, a=a: C.S(i, j, kk) * C.X(r, a),
                    )
            _rel(
                R, "2-(%d,%d,%d)-a%d" % (i, j, kk, a),
                lambda i=i, j=j, kk=kk, a=a: C.X(i, a) * C.S(i, j, kk),
                lambda i=i, j=j, kk=kk, a=a: (C.S(i, j, kk) * C.X(i, a)).scale(q**2) + (C.P(i, i) * C.G(a, j, kk)).scale(k),
            )
            _rel(
                R, "3-(%d,%d,%d)-a%d" % (i, j, kk, a),
                lambda i=i, j=j, kk=kk, a=a: C.X(kk, a) * C.S(i, j, kk),
                lambda i=i, j=j, kk=kk, a=a: (C.S(i, j, kk) * C.X(kk, a)).scale(q**-2) - (C.P(kk, kk) * C.G(a, i, j)).scale(q**-2 * k),
            )
            _rel(
                R, "xPsi-1-(%d,%d,%d)-a%d" % (i, j, kk, a),
                lambda i=i, j=j, kk=kk, a=a: C.X(j, a) * C.S(i, j, kk),
                lambda i=i, j=j, kk=kk, a=a: C.S(i, j, kk) * C.X(j, a)
                + (
                    C.P(i, j) * C.G(a, j, kk)
                    - (C.P(j, kk) * C.G(a, i, j)).scale(q**2)
                    - (C.P(j, j) * C.G(a, i, kk)).scale(k)
                ).scale(q**-2 - 1),
            )
    for i, r, j, kk in _tuples(m, 4):
        for a in LABELS:
            def lhs(i=i, r=r, j=j, kk=kk, a=a):
                return (C.X(r, a) * C.S(i, j, kk) + (C.X(j, a) * C.S(i, r, kk)).scale(q**2)) - (
                    (C.S(i, j, kk) * C.X(r, a)).scale(q**2) + C.S(i, r, kk) * C.X(j, a)
                )

            def rhs(i=i, r=r, j=j, kk=kk, a=a):
                inner = C.S(r, j, kk) * C.X(i, a) - C.S(i, r, j) * C.X(kk, a)
                inner = inner - (C.P(i, r) * C.G(a, j, kk) - C.P(j, kk) * C.G(a, i, r)).scale(q22)
                return inner.scale(q**2 - 1)

            _rel(R, "xPsi-2-(%d,%d,%d,%d)-a%d" % (i, r, j, kk, a), lhs, rhs)


def _xu(R, m):
    C = _Ctx(m)
    qm, q22, k = _qq()
    for i, j, kk, l in _tuples(m, 4):
        for a in LABELS:
            for r in range(1, m + 1):
                # as stated: r < i or r > k, which includes r = l
                if r < i or r > kk:
                    _rel(
                        R, "commute-r%d-(%d,%d,%d,%d)-a%d" % (r, i, j, kk, l, a),
                        lambda i=i, j=j, kk=kk, l=l, r=r, a=a: C.X(r, a) * C.U(i, j, kk, l),
                        lambda i=i, j=j, kk=kk, l=l, r=r, a=a: C.U(i, j, kk, l) * C.X(r, a),
                    )
            _rel(
                R, "i-(%d,%d,%d,%d)-a%d" % (i, j, kk, l, a),
                lambda i=i, j=j, kk=kk, l=l, a=a: C.X(i, a) * C.U(i, j, kk, l),
                lambda i=i, j=j, kk=kk, l=l, a=a: (C.U(i, j, kk, l) * C.X(i, a)).scale(q**2) + (C.P(i, i) * C.Fm(a, j, kk, l)).scale(k),
            )
            _rel(
                R, "l-(%d,%d,%d,%d)-a%d" % (i, j, kk, l, a),
                lambda i=i, j=j, kk=kk, l=l, a=a: C.X(l, a) * C.U(i, j, kk, l),
                lambda i=i, j=j, kk=kk, l=l, a=a: (C.U(i, j, kk, l) * C.X(l, a)).scale(q**-2) - (C.P(l, l) * C.Fp(a, i, j, kk)).scale(q**-2 * k),
            )
            _rel(
                R, "j-(%d,%d,%d,%d)-a%d" % (i, j, kk, l, a),
                lambda i=i, j=j, kk=kk, l=l, a=a: C.X(j, a) * C.U(i, j, kk, l),
                lambda i=i, j=j, kk=kk, l=l, a=a: C.U(i, j, kk, l) * C.X(j, a)
                + (
                    C.P(i, j) * C.Fm(a, j, kk, l)
                    - (C.S(j, kk, l) * C.G(a, i, j)).scale(q**2)
                    - (C.P(j, j) * C.Fm(a, i, kk, l)).scale(k)
                ).scale(q**-2 - 1),
            )
            _rel(
                R, "k-(%d,%d,%d,%d)-a%d" % (i, j, kk, l, a),
                lambda i=i, j=j, kk=kk, l=l, a=a: C.X(kk, a) * C.U(i, j, kk, l),
                lambda i=i, j=j, kk=kk, l=l, a=a: C.U(i, j, kk, l) * C.X(kk, a)
                - (
                    (C.P(kk, l) * C.Fp(a, i, j, kk)).scale(q**2)
                    + (C.P(kk, kk) * C.Fp(a, i, j, l)).scale(k)
                    - C.S(i, j, kk) * C.G(a, kk, l)
                ).scale(q**-2 - 1),
            )
    for i, r, j, kk, l in _tuples(m, 5):
        for a in LABELS:
            def lhs1(i=i, r=r, j=j, kk=kk, l=l, a=a):
                return ((C.X(r, a) * C.U(i, j, kk, l)).scale(q**-1) + (C.X(j, a) * C.U(i, r, kk, l)).scale(q)) - (
                    (C.U(i, j, kk, l) * C.X(r, a)).scale(q) + (C.U(i, r, kk, l) * C.X(j, a)).scale(q**-1)
                )

            def rhs1(i=i, r=r, j=j, kk=kk, l=l, a=a):
                inner = C.U(r, j, kk, l) * C.X(i, a) - C.S(i, r, j) * C.G(a, kk, l)
                inner = inner + (C.S(j, kk, l) * C.G(a, i, r) - C.P(i, r) * C.Fm(a, j, kk, l)).scale(q22)
                return inner.scale(qm)

            _rel(R, "middle-left-(%d,%d,%d,%d,%d)-a%d" % (i, r, j, kk, l, a), lhs1, rhs1)
        # second form: i<j<k<r<l, relabelled from the same 5-subset
        ii, jj, k2, rr, ll = i, r, j, kk, l
        for a in LABELS:
            def lhs2(i=ii, j=jj, kk=k2, r=rr, l=ll, a=a):
                return ((C.U(i, j, kk, l) * C.X(r, a)).scale(q**-1) + (C.U(i, j, r, l) * C.X(kk, a)).scale(q)) - (
                    C.X(r, a) * C.U(i, j, kk, l) + (C.X(kk, a) * C.U(i, j, r, l)).scale(q**-1)
                ).scale(q)

            def rhs2(i=ii, j=jj, kk=k2, r=rr, l=ll, a=a):
                inner = C.U(i, j, kk, r) * C.X(l, a) - C.S(kk, r, l) * C.G(a, i, j)
                inner = inner + (C.S(i, j, kk) * C.G(a, r, l) - C.P(r, l) * C.Fp(a, i, j, kk)).scale(q22)
                return inner.scale(qm)

            _rel(R, "middle-right-(%d,%d,%d,%d,%d)-a%d" % (ii, jj, k2, rr, ll, a), lhs2, rhs2)


# the four pictures of the quintic relation, legs 1..5
GRAPHT3 = {
    "D1": "cup cup ; id over id ; id id id split",
    "D2": "cup cup ; id under id ; id id id split",
    "D3": "cup cup ; id id split id",
    "D4": "cup ; id cup id ; id id id split",
}


def theta_from_relation(i, j, r, s, t, m):
    """Theta^{(i,j,r,s,t)} solved from the quintic relation after applying tau-hat."""
    C = _Ctx(m)
    qm, q22, _ = _qq()
    rhs = (C.P(i, r) * C.S(j, s, t)).scale(q**-1) - (C.S(j, s, t) * C.P(i, r)).scale(q)
    rhs = rhs - (C.P(i, j) * C.S(r, s, t)).scale(qm) + (C.P(j, r) * C.S(i, s, t)).scale(qm * q22)
    return rhs.scale(1 / qm)


def _theta(R, m):
    qm, q22, _ = _qq()
    if m < 5:
        R.skip("theta", "needs m >= 5")
        return
    C = _Ctx(m)
    cols = {name: _column(evaluate(src)) for name, src in GRAPHT3.items()}

    def diagram_relation(path):
        lhs = theta_tensor(path).scale(qm)
        rhs = cols["D1"].scale(q**-1) - cols["D2"].scale(q) - (cols["D3"] - cols["D4"].scale(q22)).scale(qm)
        return None if lhs == rhs else "the %s Theta does not satisfy the quintic relation in V^(x)5" % path

    for path in THETA_PATHS:
        cid = "grapht3-diagram-%s" % path
        if path in ("picture", "composite"):
            R.check(cid, diagram_relation, path)
        else:
            _informational(R, cid, diagram_relation(path))
    for i, j, r, s, t in _tuples(m, 5):
        lhs = lambda i=i, j=j, r=r, s=s, t=t: (C.S(j, s, t) * C.P(i, r)).scale(q)  # noqa: E731

        def rhs_for(path, i=i, j=j, r=r, s=s, t=t):
            out = (C.P(i, r) * C.S(j, s, t)).scale(q**-1) - (C.P(i, j) * C.S(r, s, t)).scale(qm)
            inner = C.T(i, j, r, s, t, path) - (C.P(j, r) * C.S(i, s, t)).scale(q22)
            return out - inner.scale(qm)

        for path in THETA_PATHS:
            cid = "lemma-%s-(%d,%d,%d,%d,%d)" % (path, i, j, r, s, t)
            if path in ("picture", "composite"):
                R.check(cid, lambda path=path, lhs=lhs, rhs_for=rhs_for: _diff(lhs(), rhs_for(path)))
            else:
                _informational(R, cid, _diff(lhs(), rhs_for(path)))
        R.check(
            "relation-defined-equals-picture-(%d,%d,%d,%d,%d)" % (i, j, r, s, t),
            lambda i=i, j=j, r=r, s=s, t=t: _diff(theta_from_relation(i, j, r, s, t, m), C.T(i, j, r, s, t)),
        )
        R.check(
            "relation-defined-invariant-(%d,%d,%d,%d,%d)" % (i, j, r, s, t),
            lambda i=i, j=j, r=r, s=s, t=t: _inv_witness(theta_from_relation(i, j, r, s, t, m)),
        )


def _informational(R, cid, witness):
    """Alternative conventions: a pass is a pass, a miss is recorded as a skip."""
    if witness is None:
        R.add(cid, True)
    else:
        R.skip(cid, "alternative convention, relation does not hold: " + witness[:200])


# zeta pictures: input v_c at the bottom right
ZETA = {
    1: "cup id ; id over",
    2: "cup id ; id under",
    3: "cup id ; split id id ; id id over",
    4: "cup id ; split id id ; id id under",
}


def zeta_image(alpha, c, bands, m):
    x = apply_diagram(parse(ZETA[alpha]), SparseTensor.basis(c))
    return placed(x, bands, m)


def _zeta(R, m):
    C = _Ctx(m)
    k = _qq()[2]
    rng = range(1, m + 1)
    coef = q**-5 * (q**7 - q**-7) / rep.quantum_dim(1)
    for c in LABELS:
        for i1, i2, i3 in itertools.product(rng, repeat=3):
            if i1 <= i2 < i3:
                _rel(R, "zeta1-(%d,%d,%d)-c%d" % (i1, i2, i3, c), lambda i1=i1, i2=i2, i3=i3, c=c: zeta_image(1, c, (i1, i2, i3), m), lambda i1=i1, i2=i2, i3=i3, c=c: C.P(i1, i3) * C.X(i2, c))
            if i1 < i2 <= i3:
                _rel(R, "zeta2-(%d,%d,%d)-c%d" % (i1, i2, i3, c), lambda i1=i1, i2=i2, i3=i3, c=c: zeta_image(2, c, (i1, i2, i3), m), lambda i1=i1, i2=i2, i3=i3, c=c: C.X(i2, c) * C.P(i1, i3))
        for i, j, kk, l in itertools.product(rng, repeat=4):
            if not (i <= j <= kk < l):
                continue
            _rel(
                R, "zeta3-(%d,%d,%d,%d)-c%d" % (i, j, kk, l, c),
                lambda i=i, j=j, kk=kk, l=l, c=c: zeta_image(3, c, (i, j, kk, l), m),
                lambda i=i, j=j, kk=kk, l=l, c=c: C.S(i, j, l) * C.X(kk, c),
            )
            if i < j == kk < l:
                rhs = lambda i=i, j=j, l=l, c=c: (C.X(j, c) * C.S(i, j, l)).scale(q**2) - (C.G(c, i, l) * C.P(j, j)).scale(coef)  # noqa: E731
            elif i <= j < kk:
                rhs = lambda i=i, j=j, kk=kk, l=l, c=c: C.X(kk, c) * C.S(i, j, l)  # noqa: E731
            else:
                continue
            _rel(R, "zeta4-(%d,%d,%d,%d)-c%d" % (i, j, kk, l, c), lambda i=i, j=j, kk=kk, l=l, c=c: zeta_image(4, c, (i, j, kk, l), m), rhs)
    del k


SUITES = {
    "ppp": (_ppp, 3),
    "2-2-tensors": (_two_two, 4),
    "ijij": (_ijij, 3),
    "phipsi": (_phipsi, 5),
    "xPsi": (_xpsi, 3),
    "xU": (_xu, 4),
    "Theta": (_theta, 5),
    "zeta": (_zeta, 4),
}


def verify_commutation(suite_id, m=None):
    """Instantiate one lemma's relations for every admissible tuple up to m."""
    if suite_id not in SUITES:
        raise ValueError("unknown suite %r; choose from %s" % (suite_id, ", ".join(SUITES)))
    fn, default_m = SUITES[suite_id]
    m = default_m if m is None else m
    R = Report("commute-" + suite_id, environment={"m": m})
    fn(R, m)
    return R


# ---------------------------------------------------------------------------
# first fundamental theorem at desk scale


def multidegrees(m, total):
    if m == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in multidegrees(m - 1, total - first):
            yield (first,) + rest


def _generators(m):
    gens = []
    for i, j in _tuples(m, 2, strict=False):
        d = [0] * m
        d[i - 1] += 1
        d[j - 1] += 1
        gens.append(("Phi", (i, j), tuple(d)))
    for t in _tuples(m, 3):
        d = [0] * m
        for b in t:
            d[b - 1] += 1
        gens.append(("Psi", t, tuple(d)))
    return gens


def _words(gens, d):
    if not any(d):
        yield ()
        return
    for g in gens:
        rest = tuple(a - b for a, b in zip(d, g[2]))
        if min(rest) < 0:
            continue
        for w in _words(gens, rest):
            yield (g,) + w


def span_rank(m, d):
    """Rank of all ordered Phi/Psi words of multidegree d, with the word count."""
    gens = _generators(m)
    vecs = []
    n = 0
    for w in _words(gens, d):
        x = AlgElem.one(m)
        for kind, idx, _ in w:
            x = multiply(x, _cached_elem(kind, idx, m))
        n += 1
        vecs.append(x.component(d))
    return (rank(vecs) if vecs else 0), n


def fft_span_check(m, dmax, extra=(), space_dims=()):
    """Phi/Psi products span the invariants in every multidegree |d| <= dmax."""
    R = Report("fft-m%d" % m, environment={"m": m, "max_total_degree": dmax})
    todo = [d for total in range(1, dmax + 1) for d in multidegrees(m, total)]
    todo += [tuple(d) for d in extra]
    for d in todo:
        def run(d=d):
            want = invariant_dim(len(d), d)
            got, n = span_rank(len(d), d)
            if got > want:
                return "rank %d exceeds invariant dim %d" % (got, want)
            if got != want:
                return "%d words reach rank %d of %d" % (n, got, want)
            return None

        R.check("d=%s" % ",".join(map(str, d)), run)
    for n, want in space_dims:
        R.check(
            "invariant-space-%d" % n,
            lambda n=n, want=want: None if len(_invariant_rows(n)) == want else "dim %d, expected %d" % (len(_invariant_rows(n)), want),
        )
    return R
