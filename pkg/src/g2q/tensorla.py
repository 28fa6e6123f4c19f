"""Sparse exact linear algebra on tensor powers of a 7-dimensional space.

Basis vectors of V are labelled by the ordered alphabet (1, 2, 3, 0, -3, -2, -1).
A basis vector of V^{(x)n} is a tuple of n labels, encoded as a base-7 integer
with the first leg most significant, so integer order is lexicographic order
on label tuples. All canonical forms (pivots, echelon rows, sections) use
this order.

Scalars are ``RatFunc`` values. Dicts holding coefficients never store zeros.
"""

from __future__ import annotations

import heapq
from fractions import Fraction

from .exactq import ONE, ZERO, as_ratfunc, parse_ratfunc

LABELS = (1, 2, 3, 0, -3, -2, -1)
LABEL_INDEX = {a: i for i, a in enumerate(LABELS)}
DIM = 7

_POW7 = [7**k for k in range(40)]


class LegMismatch(ValueError):
    """Leg counts of tensors or maps do not fit together."""


def encode(labels):
    """Label tuple -> integer index."""
    i = 0
    for a in labels:
        i = i * 7 + LABEL_INDEX[a]
    return i


def decode(index, n):
    """Integer index -> label tuple of length n."""
    out = [0] * n
    for k in range(n - 1, -1, -1):
        index, r = divmod(index, 7)
        out[k] = LABELS[r]
    return tuple(out)


def digits(index, n):
    """Integer index -> tuple of per-leg positions 0..6."""
    out = [0] * n
    for k in range(n - 1, -1, -1):
        index, out[k] = divmod(index, 7)
    return tuple(out)


def _acc(d, k, v):
    # d[k] += v, dropping zeros
    old = d.get(k)
    if old is None:
        d[k] = v
    else:
        s = old + v
        if s:
            d[k] = s
        else:
            del d[k]


def _clean(d):
    return {k: v for k, v in d.items() if v}


# ---------------------------------------------------------------------------
# vectors


class SparseTensor:
    """An element of V^{(x)n} as a sparse map index -> RatFunc.

    Treat instances as immutable; ``entries`` is shared, not copied.
    """

    __slots__ = ("n", "entries")

    def __init__(self, n, entries=None):
        self.n = n
        self.entries = entries if entries is not None else {}

    @classmethod
    def basis(cls, *labels):
        return cls(len(labels), {encode(labels): ONE})

    @classmethod
    def from_labels(cls, n, items):
        """Build from an iterable of (label tuple, scalar) pairs."""
        d = {}
        for labels, c in items:
            if len(labels) != n:
                raise LegMismatch("expected %d labels, got %r" % (n, labels))
            c = as_ratfunc(c)
            if c:
                _acc(d, encode(labels), c)
        return cls(n, d)

    @classmethod
    def scalar(cls, c):
        c = as_ratfunc(c)
        return cls(0, {0: c} if c else {})

    def is_zero(self):
        return not self.entries

    def __bool__(self):
        return bool(self.entries)

    def __len__(self):
        return len(self.entries)

    def coeff(self, labels):
        return self.entries.get(encode(labels), ZERO)

    def items_labels(self):
        for k in sorted(self.entries):
            yield decode(k, self.n), self.entries[k]

    def _check(self, other):
        if not isinstance(other, SparseTensor):
            return False
        if other.n != self.n:
            raise LegMismatch("tensors with %d and %d legs" % (self.n, other.n))
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        if len(other.entries) > len(self.entries):
            self, other = other, self
        d = dict(self.entries)
        for k, v in other.entries.items():
            _acc(d, k, v)
        return SparseTensor(self.n, d)

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        d = dict(self.entries)
        for k, v in other.entries.items():
            _acc(d, k, -v)
        return SparseTensor(self.n, d)

    def __neg__(self):
        return SparseTensor(self.n, {k: -v for k, v in self.entries.items()})

    def scale(self, c):
        c = as_ratfunc(c)
        if not c:
            return SparseTensor(self.n, {})
        if c == ONE:
            return self
        return SparseTensor(self.n, {k: v * c for k, v in self.entries.items()})

    def __mul__(self, c):
        if isinstance(c, SparseTensor):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, SparseTensor):
            return self.n == other.n and self.entries == other.entries
        if other == 0:
            return not self.entries
        return NotImplemented

    __hash__ = None

    def otimes(self, other):
        """Tensor product self (x) other; legs of self come first."""
        m = _POW7[other.n]
        d = {}
        for i, a in self.entries.items():
            base = i * m
            for j, b in other.entries.items():
                d[base + j] = a * b
        return SparseTensor(self.n + other.n, d)

    def scalar_value(self):
        """The coefficient of a 0-leg tensor."""
        if self.n != 0:
            raise LegMismatch("not a scalar: %d legs" % self.n)
        return self.entries.get(0, ZERO)

    def map_coeffs(self, f):
        return SparseTensor(self.n, _clean({k: f(v) for k, v in self.entries.items()}))

    def __str__(self):
        if not self.entries:
            return "0"
        parts = []
        for labels, c in self.items_labels():
            parts.append("(%s)*v[%s]" % (c, ",".join(str(a) for a in labels)))
        return " + ".join(parts)

    def __repr__(self):
        return "SparseTensor(n=%d, %d terms)" % (self.n, len(self.entries))


def tensor_all(vectors):
    out = SparseTensor.scalar(1)
    for v in vectors:
        out = out.otimes(v)
    return out


# ---------------------------------------------------------------------------
# maps


class LinMap:
    """A linear map V^{(x)in_legs} -> V^{(x)out_legs}.

    ``cols`` maps an input index to its image as a raw dict; absent keys are
    zero columns.
    """

    __slots__ = ("in_legs", "out_legs", "cols")

    def __init__(self, in_legs, out_legs, cols):
        self.in_legs = in_legs
        self.out_legs = out_legs
        self.cols = cols

    @classmethod
    def from_columns(cls, in_legs, out_legs, columns):
        cols = {}
        for i, t in columns.items():
            if isinstance(t, SparseTensor):
                if t.n != out_legs:
                    raise LegMismatch("column with %d legs in a map to %d legs" % (t.n, out_legs))
                t = t.entries
            t = _clean(t)
            if t:
                cols[i] = t
        return cls(in_legs, out_legs, cols)

    @classmethod
    def from_function(cls, in_legs, out_legs, f):
        """Tabulate f (SparseTensor -> SparseTensor) on all basis vectors."""
        cols = {}
        for i in range(_POW7[in_legs]):
            img = f(SparseTensor(in_legs, {i: ONE}))
            if img.n != out_legs:
                raise LegMismatch("image has %d legs, expected %d" % (img.n, out_legs))
            if img.entries:
                cols[i] = img.entries
        return cls(in_legs, out_legs, cols)

    @classmethod
    def identity(cls, n=1):
        return cls(n, n, {i: {i: ONE} for i in range(_POW7[n])})

    @classmethod
    def zero(cls, in_legs, out_legs):
        return cls(in_legs, out_legs, {})

    @classmethod
    def scalar(cls, c):
        c = as_ratfunc(c)
        return cls(0, 0, {0: {0: c}} if c else {})

    @classmethod
    def from_vector(cls, t):
        """The map C(q) -> V^{(x)n} sending 1 to t."""
        return cls(0, t.n, {0: dict(t.entries)} if t.entries else {})

    @classmethod
    def covector(cls, n, f):
        """The map V^{(x)n} -> C(q) with values f(index) on basis vectors."""
        cols = {}
        for i in range(_POW7[n]):
            c = f(i)
            if c:
                cols[i] = {0: as_ratfunc(c)}
        return cls(n, 0, cols)

    def column(self, i):
        return SparseTensor(self.out_legs, self.cols.get(i, {}))

    @property
    def columns(self):
        return {i: SparseTensor(self.out_legs, c) for i, c in self.cols.items()}

    def entry(self, out_index, in_index):
        return self.cols.get(in_index, {}).get(out_index, ZERO)

    def __call__(self, x):
        if x.n != self.in_legs:
            raise LegMismatch("map on %d legs applied to a %d-leg tensor" % (self.in_legs, x.n))
        d = {}
        cols = self.cols
        for i, a in x.entries.items():
            col = cols.get(i)
            if col is None:
                continue
            if a == ONE:
                for k, v in col.items():
                    _acc(d, k, v)
            else:
                for k, v in col.items():
                    _acc(d, k, a * v)
        return SparseTensor(self.out_legs, d)

    def compose(self, other):
        """self o other (apply other first)."""
        if other.out_legs != self.in_legs:
            raise LegMismatch(
                "cannot compose %d->%d after %d->%d"
                % (self.in_legs, self.out_legs, other.in_legs, other.out_legs)
            )
        cols = {}
        for i, col in other.cols.items():
            img = self(SparseTensor(other.out_legs, col))
            if img.entries:
                cols[i] = img.entries
        return LinMap(other.in_legs, self.out_legs, cols)

    def __matmul__(self, other):
        return self.compose(other)

    def otimes(self, other):
        """self (x) other acting on legs (self's legs, then other's legs)."""
        mi = _POW7[other.in_legs]
        mo = _POW7[other.out_legs]
        cols = {}
        for i, ci in self.cols.items():
            for j, cj in other.cols.items():
                d = {}
                for k, a in ci.items():
                    base = k * mo
                    for l, b in cj.items():
                        d[base + l] = a * b
                cols[i * mi + j] = d
        return LinMap(self.in_legs + other.in_legs, self.out_legs + other.out_legs, cols)

    def _same_shape(self, other):
        if (self.in_legs, self.out_legs) != (other.in_legs, other.out_legs):
            raise LegMismatch(
                "maps of shape %d->%d and %d->%d"
                % (self.in_legs, self.out_legs, other.in_legs, other.out_legs)
            )

    def __add__(self, other):
        self._same_shape(other)
        cols = {i: dict(c) for i, c in self.cols.items()}
        for i, c in other.cols.items():
            d = cols.setdefault(i, {})
            for k, v in c.items():
                _acc(d, k, v)
            if not d:
                del cols[i]
        return LinMap(self.in_legs, self.out_legs, cols)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = as_ratfunc(c)
        if not c:
            return LinMap(self.in_legs, self.out_legs, {})
        return LinMap(
            self.in_legs,
            self.out_legs,
            {i: {k: v * c for k, v in col.items()} for i, col in self.cols.items()},
        )

    def __mul__(self, c):
        if isinstance(c, LinMap):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LinMap):
            return NotImplemented
        return (
            self.in_legs == other.in_legs
            and self.out_legs == other.out_legs
            and self.cols == other.cols
        )

    __hash__ = None

    def is_zero(self):
        return not self.cols

    def difference_witness(self, other):
        """None if equal, else (input labels, output labels, lhs, rhs) for one entry."""
        self._same_shape(other)
        for i in sorted(set(self.cols) | set(other.cols)):
            a = self.cols.get(i, {})
            b = other.cols.get(i, {})
            if a != b:
                for k in sorted(set(a) | set(b)):
                    x, y = a.get(k, ZERO), b.get(k, ZERO)
                    if x != y:
                        return decode(i, self.in_legs), decode(k, self.out_legs), x, y
        return None

    def proportional_to(self, other):
        """The scalar c with self == c*other, or None if there is none."""
        self._same_shape(other)
        c = None
        if set(self.cols) != set(other.cols):
            return None
        for i, a in self.cols.items():
            b = other.cols[i]
            if set(a) != set(b):
                return None
            for k, x in a.items():
                r = x / b[k]
                if c is None:
                    c = r
                elif r != c:
                    return None
        return ZERO if c is None else c

    def scalar_value(self):
        if self.in_legs or self.out_legs:
            raise LegMismatch("not a scalar map: %d->%d" % (self.in_legs, self.out_legs))
        return self.cols.get(0, {}).get(0, ZERO)

    def trace_weighted(self, weight):
        """sum_i weight(i) * self[i, i] for an endomorphism."""
        if self.in_legs != self.out_legs:
            raise LegMismatch("trace of a non-square map")
        total = ZERO
        for i, col in self.cols.items():
            c = col.get(i)
            if c:
                total = total + weight(i) * c
        return total

    def restrict(self, domain):
        """The same map with columns outside ``domain`` dropped."""
        dom = set(domain)
        return LinMap(self.in_legs, self.out_legs, {i: c for i, c in self.cols.items() if i in dom})

    def __repr__(self):
        return "LinMap(%d->%d, %d columns)" % (self.in_legs, self.out_legs, len(self.cols))


def apply_on_legs(f, at, x):
    """Apply f to the contiguous legs ``at`` (1-based, ascending) of x.

    The identity acts on every other leg. The result has
    x.n + f.out_legs - f.in_legs legs.
    """
    at = list(at)
    k = f.in_legs
    if len(at) != k:
        raise LegMismatch("map on %d legs given %d positions" % (k, len(at)))
    if k == 0:
        if len(at) == 0:
            raise LegMismatch("0-leg map needs an insertion point; use apply_at")
    start = at[0]
    if at != list(range(start, start + k)) or start < 1 or start + k - 1 > x.n:
        raise LegMismatch("legs %r are not a contiguous run inside %d legs" % (at, x.n))
    return apply_at(f, start - 1, x)


def apply_at(f, offset, x):
    """Apply f to legs offset+1 .. offset+f.in_legs of x (offset counts legs to the left)."""
    k, l = f.in_legs, f.out_legs
    n = x.n
    r = n - offset - k
    if offset < 0 or r < 0:
        raise LegMismatch("map on %d legs at offset %d of a %d-leg tensor" % (k, offset, n))
    pr = _POW7[r]
    pk = _POW7[k]
    pout = _POW7[l] * pr
    cols = f.cols
    d = {}
    for idx, a in x.entries.items():
        head, suf = divmod(idx, pr)
        pre, mid = divmod(head, pk)
        col = cols.get(mid)
        if col is None:
            continue
        base = pre * pout + suf
        if a == ONE:
            for o, c in col.items():
                _acc(d, base + o * pr, c)
        else:
            for o, c in col.items():
                _acc(d, base + o * pr, a * c)
    return SparseTensor(n - k + l, d)


def map_on_legs(f, offset, n):
    """The map id^{offset} (x) f (x) id^{rest} on n input legs, as a LinMap."""
    rest = n - offset - f.in_legs
    if rest < 0 or offset < 0:
        raise LegMismatch("cannot place a %d-leg map at offset %d of %d legs" % (f.in_legs, offset, n))
    return LinMap.identity(offset).otimes(f).otimes(LinMap.identity(rest))


# ---------------------------------------------------------------------------
# elimination


class _SemiEchelon:
    """Rows keyed by pivot (smallest index in the row, coefficient 1).

    Rows are only forward-reduced; ``to_rref`` finishes the job.
    """

    def __init__(self):
        self.rows = {}

    def reduce_dict(self, v, track=None):
        """Reduce the dict v in place; track (if given) follows the same row ops."""
        rows = self.rows
        heap = [k for k in v if k in rows]
        if not heap:
            return v
        heapq.heapify(heap)
        seen = set()
        while heap:
            p = heapq.heappop(heap)
            if p in seen:
                continue
            seen.add(p)
            c = v.get(p)
            if c is None:
                continue
            row, comb = rows[p]
            for k, a in row.items():
                old = v.get(k)
                if old is None:
                    v[k] = -(c * a)
                    if k in rows and k not in seen:
                        heapq.heappush(heap, k)
                else:
                    s = old - c * a
                    if s:
                        v[k] = s
                    else:
                        del v[k]
            if track is not None and comb is not None:
                for k, a in comb.items():
                    _acc(track, k, -(c * a))
        return v

    def insert(self, v, track=None):
        """Reduce and insert; returns True if v was independent."""
        v = self.reduce_dict(v, track)
        if not v:
            return False
        p = min(v)
        c = v[p]
        if c != ONE:
            inv = c.inverse()
            v = {k: a * inv for k, a in v.items()}
            if track is not None:
                track = {k: a * inv for k, a in track.items()}
        self.rows[p] = (v, track)
        return True

    def to_rref(self):
        """Back-substitute; returns {pivot: row dict} with rows fully reduced."""
        done = {}
        for p in sorted(self.rows, reverse=True):
            row = dict(self.rows[p][0])
            for k in sorted(k for k in row if k != p and k in done):
                c = row.get(k)
                if c is None:
                    continue
                for j, a in done[k].items():
                    _acc(row, j, -(c * a))
            done[p] = row
        return done


class EchelonBasis:
    """A subspace of V^{(x)n} in reduced row-echelon form.

    Every row has coefficient 1 at its pivot (its smallest index), and each
    pivot column vanishes in all other rows. The rows are therefore a
    canonical basis determined by the subspace alone.
    """

    __slots__ = ("n", "_rows", "pivots")

    def __init__(self, n, rref=None):
        self.n = n
        self._rows = rref or {}
        self.pivots = sorted(self._rows)

    @classmethod
    def span(cls, n, vectors):
        ech = _SemiEchelon()
        for v in vectors:
            if v.n != n:
                raise LegMismatch("vector with %d legs in a span of %d-leg vectors" % (v.n, n))
            ech.insert(dict(v.entries))
        return cls(n, ech.to_rref())

    @property
    def rows(self):
        return [SparseTensor(self.n, self._rows[p]) for p in self.pivots]

    def row(self, pivot):
        return SparseTensor(self.n, self._rows[pivot])

    def row_dict(self, pivot):
        return self._rows[pivot]

    @property
    def dim(self):
        return len(self.pivots)

    def __len__(self):
        return len(self.pivots)

    def reduce(self, x):
        """The representative of x + span with zeros at every pivot."""
        if x.n != self.n:
            raise LegMismatch("reducing a %d-leg tensor by a %d-leg basis" % (x.n, self.n))
        rows = self._rows
        hits = [k for k in x.entries if k in rows]
        if not hits:
            return x
        d = dict(x.entries)
        for p in hits:
            c = d.pop(p)
            for k, a in rows[p].items():
                if k != p:
                    _acc(d, k, -(c * a))
        return SparseTensor(self.n, d)

    def contains(self, x):
        return not self.reduce(x).entries

    def to_text(self):
        """Line-oriented cache format; RatFuncs use the exactq rendering."""
        lines = ["G2Q-KERNEL v1 n=%d dim=%d" % (self.n, self.dim)]
        for p in self.pivots:
            row = self._rows[p]
            lines.append(" ".join("%d:%s" % (k, str(row[k]).replace(" ", "")) for k in sorted(row)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = text.splitlines()
        head = lines[0].split()
        if head[:2] != ["G2Q-KERNEL", "v1"]:
            raise ValueError("not a kernel cache file")
        fields = dict(h.split("=") for h in head[2:])
        n, dim = int(fields["n"]), int(fields["dim"])
        rows = {}
        for line in lines[1:]:
            if not line.strip():
                continue
            row = {}
            for tok in line.split():
                k, c = tok.split(":", 1)
                row[int(k)] = parse_ratfunc(c)
            rows[min(row)] = row
        if len(rows) != dim:
            raise ValueError("cache declares dim=%d but holds %d rows" % (dim, len(rows)))
        return cls(n, rows)

    def __eq__(self, other):
        if not isinstance(other, EchelonBasis):
            return NotImplemented
        return self.n == other.n and self._rows == other._rows

    __hash__ = None

    def __repr__(self):
        return "EchelonBasis(n=%d, dim=%d)" % (self.n, self.dim)


def kernel(f, domain=None):
    """Reduced echelon basis of ker f, optionally restricted to basis indices ``domain``."""
    if domain is None:
        domain = range(_POW7[f.in_legs])
    images = _SemiEchelon()
    kern = _SemiEchelon()
    for i in domain:
        img = dict(f.cols.get(i, {}))
        track = {i: ONE}
        if img:
            img = images.reduce_dict(img, track)
        if img:
            images.insert(img, track)
        else:
            kern.insert(track)
    return EchelonBasis(f.in_legs, kern.to_rref())


def rank(vectors):
    """Exact rank of a list of SparseTensors with a common leg count."""
    vectors = list(vectors)
    if not vectors:
        return 0
    n = vectors[0].n
    ech = _SemiEchelon()
    r = 0
    for v in vectors:
        if v.n != n:
            raise LegMismatch("rank of tensors with mixed leg counts")
        r += ech.insert(dict(v.entries))
    return r


def solve_in_span(vectors, target):
    """Coefficients c with sum c_i vectors[i] == target, or None."""
    ech = _SemiEchelon()
    for i, v in enumerate(vectors):
        ech.insert(dict(v.entries), {i: ONE})
    track = {}
    rest = ech.reduce_dict(dict(target.entries), track)
    if rest:
        return None
    return {i: -c for i, c in track.items()}


def eval_tensor_at(x, value):
    """Specialise every coefficient at q = value (exact rationals)."""
    value = Fraction(value)
    return {k: c(value) for k, c in x.entries.items()}
