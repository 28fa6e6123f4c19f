"""Tangle diagrams with trivalent vertices, their evaluation, and cycle reduction.

A diagram is a list of slices read bottom to top; each slice is a row of
atoms read left to right. Text form::

    diagram := slice (';' slice)*
    slice   := atom+
    atom    := id | cup | cap | over | under | merge | split

``over`` is the crossing whose strand from bottom right to top left lies on
top. The evaluation functor sends it to the braiding R, ``under`` to R^-1,
``merge`` to q^-3 p and ``split`` to -q^3 gamma.

``reduce_to_acyclic`` rewrites a diagram as a linear combination of
diagrams without crossings or cycles. Crossings are resolved first. The
crossing-free remainder is turned into a planar graph (a rotation system),
and its internal faces are collapsed smallest first.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass

from .exactq import ONE, ZERO, RatFunc, as_ratfunc, q, qint
from .report import Report, map_equal
from .tensorla import LinMap, SparseTensor, _SemiEchelon, _acc, apply_at
from . import rep

ARITY = {
    "id": (1, 1),
    "cup": (0, 2),
    "cap": (2, 0),
    "over": (2, 2),
    "under": (2, 2),
    "merge": (2, 1),
    "split": (1, 2),
}

ALPHA = -(q**-6)
BETA = RatFunc.from_laurent(qint(7)) - 1


class DiagramSyntaxError(ValueError):
    """Malformed diagram text; carries line and column."""

    def __init__(self, msg, line, col):
        super().__init__("%s at line %d, column %d" % (msg, line, col))
        self.line = line
        self.col = col


class WidthMismatch(ValueError):
    """Consecutive slices do not compose."""

    def __init__(self, msg, slice_index):
        super().__init__("%s (slice %d)" % (msg, slice_index))
        self.slice_index = slice_index


class IrreducibleFace(RuntimeError):
    """Every internal face has six or more vertices."""


def _row_arity(row):
    return sum(ARITY[a][0] for a in row), sum(ARITY[a][1] for a in row)


@dataclass(frozen=True)
class Diagram:
    """A morphism bottom -> top given as slices of atoms."""

    slices: tuple
    bottom: int
    top: int

    def __post_init__(self):
        width = self.bottom
        for k, row in enumerate(self.slices):
            if not row:
                raise WidthMismatch("empty slice", k)
            for a in row:
                if a not in ARITY:
                    raise ValueError("unknown atom %r" % (a,))
            i, o = _row_arity(row)
            if i != width:
                raise WidthMismatch("slice takes %d strands but %d arrive" % (i, width), k)
            width = o
        if width != self.top:
            raise WidthMismatch("diagram ends with %d strands, declared %d" % (width, self.top), len(self.slices))

    @classmethod
    def from_slices(cls, slices):
        slices = tuple(tuple(r) for r in slices)
        if not slices:
            return cls((), 0, 0)
        bottom = _row_arity(slices[0])[0]
        width = bottom
        for k, row in enumerate(slices):
            i, o = _row_arity(row)
            if i != width:
                raise WidthMismatch("slice takes %d strands but %d arrive" % (i, width), k)
            width = o
        return cls(slices, bottom, width)

    @classmethod
    def identity(cls, n):
        if n == 0:
            return cls((), 0, 0)
        return cls((("id",) * n,), n, n)

    def then(self, other):
        """Stack ``other`` on top of self."""
        if other.bottom != self.top:
            raise WidthMismatch("cannot stack %d->%d on %d->%d" % (other.bottom, other.top, self.bottom, self.top), len(self.slices))
        return Diagram(self.slices + other.slices, self.bottom, other.top)

    def tensor(self, other):
        """Side by side, self on the left."""
        rows = _par([(list(self.slices), self.bottom, self.top), (list(other.slices), other.bottom, other.top)])
        return Diagram(tuple(rows), self.bottom + other.bottom, self.top + other.top)

    def count(self, *atoms):
        return sum(a in atoms for row in self.slices for a in row)

    @property
    def crossings(self):
        return self.count("over", "under")

    @property
    def vertices(self):
        return self.count("merge", "split")

    def to_dsl(self):
        return " ; ".join(" ".join(row) for row in self.slices)

    def __str__(self):
        return self.to_dsl() or "(empty)"


def _par(parts):
    """Place slice lists side by side; each part is (rows, in_width, out_width)."""
    depth = max((len(r) for r, _, _ in parts), default=0)
    out = []
    for t in range(depth):
        row = []
        for rows, _, w_out in parts:
            if t < len(rows):
                row.extend(rows[t])
            else:
                row.extend(["id"] * w_out)
        out.append(tuple(row))
    return out


_TOKEN = re.compile(r"\s*(?:(;)|([A-Za-z_]+)|(\S))")


def parse(src):
    """Parse diagram text into a Diagram."""
    rows = [[]]
    starts = [None]
    pos = 0
    n = len(src)

    def where(i):
        line = src.count("\n", 0, i) + 1
        col = i - (src.rfind("\n", 0, i) + 1) + 1
        return line, col

    while pos < n:
        m = _TOKEN.match(src, pos)
        if m is None:
            break
        semi, word, junk = m.groups()
        at = m.start(1 if semi else 2 if word else 3) if (semi or word or junk) else m.end()
        if semi:
            if not rows[-1]:
                raise DiagramSyntaxError("empty slice before ';'", *where(at))
            rows.append([])
            starts.append(None)
        elif word:
            if word not in ARITY:
                raise DiagramSyntaxError("unknown atom %r" % word, *where(at))
            if starts[-1] is None:
                starts[-1] = at
            rows[-1].append(word)
        elif junk:
            raise DiagramSyntaxError("unexpected character %r" % junk, *where(at))
        pos = m.end()
    if not rows[-1]:
        if len(rows) == 1:
            raise DiagramSyntaxError("empty diagram", *where(n))
        raise DiagramSyntaxError("empty slice at end of input", *where(n))
    width = _row_arity(rows[0])[0]
    for k, row in enumerate(rows):
        i, o = _row_arity(row)
        if i != width:
            line, col = where(starts[k])
            raise WidthMismatch(
                "slice takes %d strands but %d arrive (line %d, column %d)" % (i, width, line, col), k
            )
        width = o
    return Diagram(tuple(tuple(r) for r in rows), _row_arity(rows[0])[0], width)


# ---------------------------------------------------------------------------
# evaluation


@functools.lru_cache(maxsize=None)
def atom_map(name):
    S = rep.structure_maps()
    if name == "id":
        return LinMap.identity(1)
    if name == "cup":
        return S.cup
    if name == "cap":
        return S.cap
    if name == "over":
        return S.R
    if name == "under":
        return S.Rinv
    if name == "merge":
        return S.p.scale(q**-3)
    if name == "split":
        return S.gamma.scale(-(q**3))
    raise ValueError("unknown atom %r" % (name,))


def apply_slice(row, x):
    offset = 0
    for a in row:
        if a == "id":
            offset += 1
            continue
        x = apply_at(atom_map(a), offset, x)
        offset += ARITY[a][1]
    return x


def apply_diagram(d, x):
    """Push a tensor with d.bottom legs through the diagram."""
    for row in d.slices:
        x = apply_slice(row, x)
        if not x.entries:
            return SparseTensor(d.top, {})
    return x


def _split_bent(d):
    """If d = nested caps o (id^k (x) W) with W: 0 -> k+top, return W's slices."""
    k = d.bottom
    if k == 0 or len(d.slices) < k:
        return None
    body, tail = d.slices[: len(d.slices) - k], d.slices[len(d.slices) - k :]
    width = 2 * k + d.top
    for t, row in enumerate(tail):
        left = k - 1 - t
        if row != ("id",) * left + ("cap",) + ("id",) * (width - left - 2):
            return None
        width -= 2
    inner = []
    for row in body:
        if row[:k] != ("id",) * k:
            return None
        inner.append(row[k:])
    if inner and _row_arity(inner[0])[0] != 0:
        return None
    return inner


@functools.lru_cache(maxsize=None)
def _cap_pairs():
    """For each right leg y, the (x, value) with cap(v_x (x) v_y) nonzero."""
    cap = atom_map("cap")
    out = {}
    for i, col in cap.cols.items():
        x, y = divmod(i, 7)
        v = col.get(0)
        if v:
            out.setdefault(y, []).append((x, v))
    return out


def _evaluate_bent(k, top, inner):
    w = apply_diagram(Diagram(tuple(inner), 0, k + top), SparseTensor.scalar(1)) if inner else None
    if w is None:
        # W is the empty diagram: only possible when k + top == 0
        return None
    pairs = _cap_pairs()
    tpow = 7**top
    cols = {}
    for idx, c in w.entries.items():
        ys, t = divmod(idx, tpow)
        # ys holds (y_k, ..., y_1), most significant first; input x_j caps y_j
        xs = [((), c)]
        for j in range(k):
            ys, y = divmod(ys, 7)
            # y is y_{j+1}; collect input digits x_1..x_k from least significant
            xs = [(xd + (x,), a * v) for xd, a in xs for x, v in pairs.get(y, ())]
        for xd, a in xs:
            i = 0
            for x in xd:
                i = i * 7 + x
            _acc_col(cols, i, t, a)
    return LinMap(k, top, cols)


def _acc_col(cols, i, t, a):
    col = cols.setdefault(i, {})
    s = col.get(t)
    s = a if s is None else s + a
    if s:
        col[t] = s
    else:
        del col[t]
        if not col:
            del cols[i]


@functools.lru_cache(maxsize=4096)
def evaluate(d):
    """The functor value of a diagram as a LinMap (scalars are 0 -> 0 maps)."""
    if isinstance(d, str):
        d = parse(d)
    inner = _split_bent(d)
    if inner is not None:
        m = _evaluate_bent(d.bottom, d.top, inner)
        if m is not None:
            return m
    cols = {}
    for i in range(7**d.bottom):
        y = apply_diagram(d, SparseTensor(d.bottom, {i: ONE}))
        if y.entries:
            cols[i] = y.entries
    return LinMap(d.bottom, d.top, cols)


def ev(src):
    return evaluate(parse(src))


# ---------------------------------------------------------------------------
# linear combinations


class LinComb:
    """A finite formal combination of diagrams with RatFunc coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for d, c in (terms.items() if isinstance(terms, dict) else terms):
                self.add(d, c)

    def add(self, d, c):
        c = as_ratfunc(c)
        if not c:
            return
        s = self.terms.get(d, ZERO) + c
        if s:
            self.terms[d] = s
        else:
            self.terms.pop(d, None)

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def scale(self, c):
        return LinComb({d: v * c for d, v in self.terms.items()})

    def evaluate(self):
        out = None
        for d, c in self.terms.items():
            m = evaluate(d).scale(c)
            out = m if out is None else out + m
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join("(%s)*[%s]" % (c, d) for d, c in self.terms.items())


# ---------------------------------------------------------------------------
# phase 1: crossings


def _expansion(kind):
    """Crossing-free combination equal to an over or under crossing."""
    s = 1 / (q + q**-1)
    id2 = parse("id id")
    cc = parse("cap ; cup")
    eta = parse(ETA)
    ii = parse("merge ; split")
    if kind == "over":
        return [(q**3 * s, id2), (q**-3 * s, cc), (-q * s, eta), (-(q**-1) * s, ii)]
    return [(q**-3 * s, id2), (q**3 * s, cc), (-(q**-1) * s, eta), (-q * s, ii)]


ETA = "id cup id ; id split split id ; cap id id cap"


def _substitute(d, si, ai, sub):
    """Replace atom ai of slice si by the 2->2 diagram ``sub``."""
    row = d.slices[si]
    before, after = row[:ai], row[ai + 1 :]
    wb = sum(ARITY[a][1] for a in before)
    wa = sum(ARITY[a][1] for a in after)
    new_rows = []
    for t, srow in enumerate(sub.slices):
        if t == 0:
            new_rows.append(tuple(before) + srow + tuple(after))
        else:
            new_rows.append(("id",) * wb + srow + ("id",) * wa)
    if not sub.slices:
        new_rows.append(tuple(before) + tuple(after))
    rows = d.slices[:si] + tuple(r for r in new_rows if r) + d.slices[si + 1 :]
    return Diagram(rows, d.bottom, d.top)


def remove_crossings(d):
    """LinComb of crossing-free diagrams equal to d."""
    out = LinComb()
    stack = [(d, ONE)]
    while stack:
        e, c = stack.pop()
        hit = None
        for si, row in enumerate(e.slices):
            for ai, a in enumerate(row):
                if a in ("over", "under"):
                    hit = (si, ai, a)
                    break
            if hit:
                break
        if hit is None:
            out.add(e, c)
            continue
        si, ai, a = hit
        for k, sub in _expansion(a):
            stack.append((_substitute(e, si, ai, sub), c * k))
    return out


# ---------------------------------------------------------------------------
# phase 2: planar graphs
#
# Nodes are 'v' (trivalent vertex), 'b' (boundary point) or 'w' (two-port
# wire piece, contracted away). Ports of 'v' and 'b' are listed clockwise.
# merge: (out, in_right, in_left); split: (in, out_left, out_right);
# bottom boundary: (leg, frame_right, frame_left); top: (leg, frame_left, frame_right).


class PGraph:
    __slots__ = ("kind", "adj", "bottom", "top", "next_id")

    def __init__(self):
        self.kind = {}
        self.adj = {}
        self.bottom = []
        self.top = []
        self.next_id = 0

    def copy(self):
        g = PGraph()
        g.kind = dict(self.kind)
        g.adj = dict(self.adj)
        g.bottom = list(self.bottom)
        g.top = list(self.top)
        g.next_id = self.next_id
        return g

    def new(self, kind):
        n = self.next_id
        self.next_id += 1
        self.kind[n] = kind
        return n

    def link(self, a, b):
        self.adj[a] = b
        self.adj[b] = a

    def remove(self, node):
        del self.kind[node]
        for p in range(3):
            self.adj.pop((node, p), None)

    def contract_wires(self):
        """Remove 'w' nodes; returns the number of closed loops found."""
        loops = 0
        for w in [n for n, k in self.kind.items() if k == "w"]:
            a = self.adj.pop((w, 0))
            b = self.adj.pop((w, 1))
            del self.kind[w]
            if a == (w, 1):
                loops += 1
                continue
            self.link(a, b)
        return loops


def to_graph(d, allow_crossings=False):
    """Planar graph of a crossing-free diagram; returns (graph, loop count).

    With ``allow_crossings`` a crossing just swaps its two strands, which
    gives the underlying (possibly non-planar) graph; faces are then
    meaningless but connectivity is right.
    """
    if d.crossings and not allow_crossings:
        raise ValueError("to_graph needs a crossing-free diagram")
    g = PGraph()
    ends = []
    for i in range(d.bottom):
        b = g.new("b")
        g.bottom.append(b)
        ends.append((b, 0))
    for row in d.slices:
        new_ends = []
        k = 0
        for a in row:
            if a == "id":
                new_ends.append(ends[k])
                k += 1
            elif a == "cup":
                w = g.new("w")
                new_ends += [(w, 0), (w, 1)]
            elif a == "cap":
                g.link(ends[k], ends[k + 1])
                k += 2
            elif a in ("over", "under"):
                new_ends += [ends[k + 1], ends[k]]
                k += 2
            elif a == "merge":
                u = g.new("v")
                g.link(ends[k], (u, 2))
                g.link(ends[k + 1], (u, 1))
                new_ends.append((u, 0))
                k += 2
            elif a == "split":
                u = g.new("v")
                g.link(ends[k], (u, 0))
                new_ends += [(u, 1), (u, 2)]
                k += 1
        ends = new_ends
    for e in ends:
        t = g.new("b")
        g.top.append(t)
        g.link(e, (t, 0))
    loops = g.contract_wires()
    _add_frame(g)
    return g, loops


def _add_frame(g):
    bottom, top = g.bottom, g.top
    ring = [(b, 1, 2) for b in bottom] + [(t, 2, 1) for t in reversed(top)]
    # ring lists (node, port towards next, port towards previous) going
    # counterclockwise: along the bottom to the right, then the top to the left
    m = len(ring)
    for i in range(m):
        node, nxt_port, _ = ring[i]
        node2, _, prv_port = ring[(i + 1) % m]
        g.link((node, nxt_port), (node2, prv_port))


def _faces(g):
    """All faces as lists of darts (node, port)."""
    seen = set()
    faces = []
    for start in g.adj:
        if start in seen:
            continue
        face = []
        d = start
        while d not in seen:
            seen.add(d)
            face.append(d)
            v, p = g.adj[d]
            d = (v, (p + 1) % 3)
        faces.append(face)
    return faces


def _pick_face(g):
    """Smallest simple face made only of vertices; None if there is none."""
    best = None
    for face in _faces(g):
        nodes = [v for v, _ in face]
        if any(g.kind[v] != "v" for v in nodes):
            continue
        if len(set(nodes)) != len(nodes):
            continue
        if best is None or len(face) < len(best):
            best = face
            if len(best) <= 2:
                break
    return best


# local replacements: a term is (coefficient, vertices, arcs) where vertices
# lists clockwise port targets ('L', i) or ('N', k, port) and arcs are leg pairs


def _forest_local(n, forest):
    """Local graph of a planar forest on legs 0..n-1 (counterclockwise).

    ``forest`` is a tuple of blocks; a block is (legs, shape) where shape is a
    nested binary tuple over legs[1:], rooted at legs[0].
    """
    verts = []
    arcs = []

    def build(shape, parent):
        # returns the endpoint to attach to ``parent``
        if isinstance(shape, int):
            return ("L", shape)
        k = len(verts)
        verts.append([None, None, None])
        left = build(shape[0], ("N", k, 2))
        right = build(shape[1], ("N", k, 1))
        # counterclockwise: parent, left subtree, right subtree; ports are clockwise
        verts[k][0] = parent
        verts[k][2] = left
        verts[k][1] = right
        return ("N", k, 0)

    for legs, shape in forest:
        top = build(shape, ("L", legs[0]))
        if top[0] == "L":
            arcs.append((legs[0], top[1]))
    return verts, arcs


def _binary_shapes(leaves):
    """All full binary bracketings of an ordered tuple of leaves."""
    if len(leaves) == 1:
        return [leaves[0]]
    out = []
    for k in range(1, len(leaves)):
        for a in _binary_shapes(leaves[:k]):
            for b in _binary_shapes(leaves[k:]):
                out.append((a, b))
    return out


def _noncrossing_partitions(points):
    """Noncrossing partitions of a sorted tuple into blocks of size >= 2."""
    if not points:
        return [()]
    first = points[0]
    rest = points[1:]
    out = []
    # choose the other members of first's block
    for r in range(1, len(rest) + 1):
        for others in itertools.combinations(rest, r):
            block = (first,) + others
            # gaps between consecutive members, and the tail after the last
            segs = []
            prev = first
            for x in others:
                segs.append(tuple(p for p in points if prev < p < x))
                prev = x
            segs.append(tuple(p for p in points if p > prev))
            parts = [_noncrossing_partitions(s) for s in segs]
            for combo in itertools.product(*parts):
                out.append((block,) + tuple(b for c in combo for b in c))
    return out


def planar_forests(n):
    """All acyclic planar trivalent forests on n legs in a line."""
    out = []
    for part in _noncrossing_partitions(tuple(range(n))):
        per_block = []
        for block in part:
            per_block.append([(block, s) for s in _binary_shapes(block[1:])])
        for choice in itertools.product(*per_block):
            out.append(tuple(sorted(choice)))
    return out


def _tree_rows(shape):
    """Slices of a 1 -> m binary splitting tree."""
    if isinstance(shape, int):
        return [], 1
    lrows, lw = _tree_rows(shape[0])
    rrows, rw = _tree_rows(shape[1])
    rows = [("split",)] + _par([(lrows, 1, lw), (rrows, 1, rw)])
    return rows, lw + rw


def forest_rows(forest, positions):
    """Slices of the 0 -> len(positions) diagram of a planar forest.

    ``positions`` is the sorted tuple of leg labels in this interval.
    """
    if not positions:
        return []
    blocks = {b[0][0]: b for b in forest}
    legs, shape = blocks[positions[0]]
    trows, m = _tree_rows(shape)
    rows = [("cup",)] + _par([([], 1, 1), (trows, 1, m)])
    width = 1 + m
    # fill the gaps between consecutive legs of this block
    for j in range(len(legs) - 2, -1, -1):
        gap = tuple(p for p in positions if legs[j] < p < legs[j + 1])
        if gap:
            grows = forest_rows(forest, gap)
            rows += _par([([], j + 1, j + 1), (grows, 0, len(gap)), ([], width - j - 1, width - j - 1)])
            width += len(gap)
    tail = tuple(p for p in positions if p > legs[-1])
    if tail:
        rows = _par([(rows, 0, width), (forest_rows(forest, tail), 0, len(tail))])
    return rows


def forest_diagram(n, forest):
    rows = forest_rows(forest, tuple(range(n)))
    return Diagram(tuple(rows), 0, n)


def polygon_diagram(n):
    """The n-cycle with one leg per vertex, as a 0 -> n diagram (n >= 2)."""
    if n == 2:
        return parse("cup ; split id ; id merge")
    k = (n - 1) // 2
    m = n - 1 - k
    rows = [("cup",)]
    # split k times on the left strand and m times on the right strand
    w_left = 0
    w_right = 0
    for t in range(max(k, m)):
        row = ["id"] * w_left
        row += ["split"] if t < k else ["id"]
        row += ["split"] if t < m else ["id"]
        row += ["id"] * w_right
        # left splits emit the leg on the left; right splits on the right
        rows.append(tuple(row))
        if t < k:
            w_left += 1
        if t < m:
            w_right += 1
    # after splitting, strands are: w_left legs, left cycle strand, right cycle strand, w_right legs
    rows.append(("id",) * w_left + ("merge",) + ("id",) * w_right)
    return Diagram.from_slices(rows)


@functools.lru_cache(maxsize=None)
def polygon_expansion(n):
    """Coefficients expressing the n-gon (legs in a line) in planar forests.

    Returns a list of (coefficient, forest). Solved by exact linear algebra
    on the invariant vectors of V^{(x)n}.
    """
    target = apply_diagram(polygon_diagram(n), SparseTensor.scalar(1))
    forests = planar_forests(n)
    vecs = [apply_diagram(forest_diagram(n, f), SparseTensor.scalar(1)) for f in forests]
    ech = _SemiEchelon()
    for i, v in enumerate(vecs):
        ech.insert(dict(v.entries), {i: ONE})
    track = {}
    rest = ech.reduce_dict(dict(target.entries), track)
    if rest:
        raise IrreducibleFace("the %d-gon is not a combination of crossing-free acyclic graphs" % n)
    return [(-c, forests[i]) for i, c in sorted(track.items())]


MAX_FACE = 5


def _local_terms(n):
    """Replacement terms for an n-gon with legs 0..n-1 counterclockwise."""
    if n == 1:
        return []
    terms = []
    for c, forest in polygon_expansion(n):
        # forest legs run left to right on top of a 0 -> n diagram, which is
        # clockwise; flip to counterclockwise
        flipped = []
        for legs, shape in forest:
            flipped.append(_flip_block(n, legs, shape))
        verts, arcs = _forest_local(n, flipped)
        terms.append((c, verts, arcs))
    return terms


def _flip_block(n, legs, shape):
    """Relabel leg i as n-1-i and re-root so the tree stays planar."""
    new_legs = sorted(n - 1 - x for x in legs)

    # re-root at the new smallest leg by rebuilding from the edge structure
    edges = _tree_edges(legs[0], shape)
    medges = [(_m(n, a), _m(n, b)) for a, b in edges]
    return new_legs, _rooted_shape(medges, tuple(new_legs))


def _m(n, x):
    if isinstance(x, tuple):
        return x
    return n - 1 - x


def _tree_edges(root, shape):
    """Edges of a rooted binary tree; inner nodes are named by tuples."""
    edges = []
    counter = [0]

    def walk(s, parent):
        if isinstance(s, int):
            edges.append((parent, s))
            return
        me = ("n", counter[0])
        counter[0] += 1
        edges.append((parent, me))
        walk(s[0], me)
        walk(s[1], me)

    walk(shape, root)
    return edges


def _rooted_shape(edges, legs):
    """Binary shape over legs[1:] rooted at legs[0], children ordered by leg position."""
    nbrs = {}
    for a, b in edges:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)

    def leaves_under(node, parent):
        if not isinstance(node, tuple):
            return [node]
        out = []
        for x in nbrs[node]:
            if x != parent:
                out += leaves_under(x, node)
        return out

    def shape_at(node, parent):
        if not isinstance(node, tuple):
            return node
        kids = [x for x in nbrs[node] if x != parent]
        kids.sort(key=lambda x: min(leaves_under(x, node)))
        return (shape_at(kids[0], node), shape_at(kids[1], node))

    root = legs[0]
    (child,) = nbrs[root]
    return shape_at(child, root)


def _apply_face(g, face):
    """Replace a simple internal face; returns list of (coefficient, graph, loops)."""
    n = len(face)
    if n == 1:
        return []
    # vertices in traversal order, and their external ports
    ext = []
    for v, p_out in face:
        ext.append((v, (p_out + 1) % 3))
    vs = [v for v, _ in face]
    vset = set(vs)
    far = [g.adj[e] for e in ext]
    ext_index = {e: i for i, e in enumerate(ext)}
    out = []
    for coeff, verts, arcs in _local_terms(n):
        h = g.copy()
        for v in vs:
            h.remove(v)
        wires = [h.new("w") for _ in range(n)]
        done = set()
        for i in range(n):
            f = far[i]
            if f[0] in vset:
                j = ext_index[f]
                if (j, i) not in done:
                    h.link((wires[i], 1), (wires[j], 1))
                    done.add((i, j))
            else:
                h.link((wires[i], 1), f)
        new_ids = [h.new("v") for _ in verts]
        for k, ports in enumerate(verts):
            for p, tgt in enumerate(ports):
                if tgt[0] == "L":
                    h.link((new_ids[k], p), (wires[tgt[1]], 0))
                else:
                    h.link((new_ids[k], p), (new_ids[tgt[1]], tgt[2]))
        for i, j in arcs:
            h.link((wires[i], 0), (wires[j], 0))
        loops = h.contract_wires()
        out.append((coeff, h, loops))
    return out


def _reduce_graph(g, loops):
    """Fully reduce a planar graph; returns list of (coefficient, acyclic graph)."""
    dq = rep.structure_maps().dim_q
    results = []
    stack = [(ONE * dq**loops, g)]
    while stack:
        c, h = stack.pop()
        face = _pick_face(h)
        if face is None:
            if any(k == "v" for k in h.kind.values()) and _has_cycle(h):
                raise IrreducibleFace("a cycle remains with no reducible face")
            results.append((c, h))
            continue
        if len(face) > MAX_FACE:
            raise IrreducibleFace(
                "smallest internal face has %d vertices; crossing-free reduction stops at %d"
                % (len(face), MAX_FACE)
            )
        for k, h2, lp in _apply_face(h, face):
            stack.append((c * k * dq**lp, h2))
    return results


def _has_cycle(g):
    # the graph without the frame is a forest iff edges = nodes - components
    nodes = [n for n in g.kind]
    edges = set()
    for (a, pa), (b, pb) in g.adj.items():
        if g.kind[a] == "b" and pa != 0:
            continue
        if g.kind[b] == "b" and pb != 0:
            continue
        edges.add(frozenset([(a, pa), (b, pb)]))
    parent = {n: n for n in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        if len(e) == 1:
            return True
        (a, _), (b, _) = tuple(e)
        ra, rb = find(a), find(b)
        if ra == rb:
            return True
        parent[ra] = rb
    return False


# ---------------------------------------------------------------------------
# phase 3: back to slices


def graph_to_diagram(g):
    """Slice diagram of an acyclic planar graph with boundary."""
    k, l = len(g.bottom), len(g.top)
    order = list(reversed(g.bottom)) + list(g.top)
    pos = {b: i for i, b in enumerate(order)}
    forest = []
    seen = set()
    for b in order:
        if b in seen:
            continue
        # collect the tree of b with its structure rooted at b
        edges = []
        leaves = []

        def walk(node, port, parent_key):
            other, op = g.adj[(node, port)]
            if g.kind[other] == "b":
                seen.add(other)
                leaves.append(pos[other])
                edges.append((parent_key, pos[other]))
                return
            key = ("n", other)
            edges.append((parent_key, key))
            walk(other, (op + 1) % 3, key)
            walk(other, (op + 2) % 3, key)

        seen.add(b)
        leaves.append(pos[b])
        walk(b, 0, pos[b])
        legs = tuple(sorted(leaves))
        forest.append((legs, _rooted_shape(edges, legs)))
    rows = forest_rows(tuple(forest), tuple(range(k + l)))
    return _bend_down(rows, k, l)


def _bend_down(rows, k, l):
    """Turn a 0 -> k+l diagram into k -> l, bending the first k legs down.

    The legs of the 0 -> k+l diagram are read as (bottom k, ..., bottom 1,
    top 1, ..., top l).
    """
    n = k + l
    rows = _par([([], k, k), (list(rows), 0, n)])
    width = k + n
    for t in range(k):
        left = k - 1 - t
        rows.append(("id",) * left + ("cap",) + ("id",) * (width - left - 2))
        width -= 2
    if not rows:
        return Diagram.identity(n)
    return Diagram(tuple(rows), k, l)


def _bend_up(d):
    """The 0 -> k+l diagram whose bent-down form is d."""
    k = d.bottom
    rows = []
    for t in range(k):
        rows.append(("id",) * t + ("cup",) + ("id",) * t)
    rows = rows + _par([([], k, k), (list(d.slices), k, d.top)])
    return Diagram(tuple(rows), 0, k + d.top)


def reduce_to_acyclic(d):
    """LinComb of crossing-free, cycle-free diagrams with the same value as d."""
    if isinstance(d, str):
        d = parse(d)
    out = LinComb()
    stuck = False
    for e, c in remove_crossings(d):
        g, loops = to_graph(e)
        try:
            reduced = [(k, graph_to_diagram(h)) for k, h in _reduce_graph(g, loops)]
        except IrreducibleFace:
            stuck = True
            continue
        for k, f in reduced:
            out.add(f, c * k)
    if stuck:
        # everything that local rewriting could not handle, at once: the
        # residual is linear in the stuck terms, so one elimination suffices
        residual = bent_vector(d)
        for f, c in out:
            residual = residual - bent_vector(f).scale(c)
        spanner = _SPANNERS.setdefault((d.bottom, d.top), _AcyclicSpanner(d.bottom, d.top))
        for k, f in spanner.express_vector(residual):
            out.add(f, k)
    return out


@functools.lru_cache(maxsize=4096)
def bent_vector(d):
    """The invariant vector of the 0 -> bottom+top diagram obtained by bending d up."""
    inner = _split_bent(d)
    if inner is not None:
        w = Diagram(tuple(inner), 0, d.bottom + d.top)
    else:
        w = _bend_up(d)
    return apply_diagram(w, SparseTensor.scalar(1))


def is_acyclic(d, allow_crossings=False):
    """True if the diagram's underlying graph has no cycle.

    By default crossings are not allowed at all; with ``allow_crossings`` a
    crossing counts as two strands passing each other.
    """
    if d.crossings and not allow_crossings:
        return False
    g, loops = to_graph(d, allow_crossings=True)
    return loops == 0 and not _has_cycle(g)


def _set_partitions(points):
    """All set partitions of a tuple into blocks of size >= 2."""
    if not points:
        yield ()
        return
    first, rest = points[0], points[1:]
    for r in range(1, len(rest) + 1):
        for others in itertools.combinations(rest, r):
            left = tuple(p for p in rest if p not in others)
            for tail in _set_partitions(left):
                yield ((first,) + others,) + tail


def _is_noncrossing(part):
    for a, b in itertools.combinations(part, 2):
        for x, y in itertools.combinations(a, 2):
            inside = [p for p in b if x < p < y]
            if inside and len(inside) != len(b):
                return False
    return True


def crossed_forest_rows(n, forest):
    """Slices of a 0 -> n acyclic forest whose blocks may interleave.

    Blocks are drawn side by side in order of their first leg and then
    moved into place with over-crossings.
    """
    blocks = sorted(forest, key=lambda b: b[0][0])
    order = [x for legs, _ in blocks for x in legs]
    relabel = {x: i for i, x in enumerate(order)}

    def rl(shape):
        return relabel[shape] if isinstance(shape, int) else (rl(shape[0]), rl(shape[1]))

    flat = tuple((tuple(relabel[x] for x in legs), rl(shape)) for legs, shape in blocks)
    rows = forest_rows(flat, tuple(range(n)))
    cur = list(order)
    moved = True
    while moved:
        moved = False
        for i in range(n - 1):
            if cur[i] > cur[i + 1]:
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                rows.append(("id",) * i + ("over",) + ("id",) * (n - i - 2))
                moved = True
    return rows


class _AcyclicSpanner:
    """Grows a spanning set of acyclic diagrams for k -> l on demand.

    Crossing-free forests come first; forests with interleaved blocks, drawn
    with crossings, follow. Targets are solved on a subset of coordinates and
    the solution is then checked on every coordinate; a failed check adds
    the offending coordinates and solves again, so the result is exact.
    """

    def __init__(self, k, l):
        self.k, self.l = k, l
        self.n = k + l
        self.vectors = []
        self.diagrams = []
        self.coords = set()
        self.ech = _SemiEchelon()
        self._source = self._candidates()

    def _candidates(self):
        n = self.n
        for f in planar_forests(n):
            yield forest_rows(f, tuple(range(n)))
        for part in _set_partitions(tuple(range(n))):
            if _is_noncrossing(part):
                continue
            per_block = [[(b, s) for s in _binary_shapes(b[1:])] for b in part]
            for choice in itertools.product(*per_block):
                yield crossed_forest_rows(n, choice)

    def _restrict(self, v):
        return {i: c for i, c in v.items() if i in self.coords}

    def _rebuild(self):
        self.ech = _SemiEchelon()
        for i, v in enumerate(self.vectors):
            self.ech.insert(self._restrict(v), {i: ONE})

    def _grow(self, support, count):
        extra = sorted(set(support) - self.coords)
        step = max(1, len(extra) // count)
        self.coords.update(extra[::step][:count])

    def express(self, d):
        return self.express_vector(bent_vector(d))

    def express_vector(self, target):
        target = dict(target.entries)
        if not target:
            return []
        if not self.coords:
            self._grow(target, 256)
            self._rebuild()
        while True:
            track = {}
            rest = self.ech.reduce_dict(self._restrict(target), track)
            if rest:
                rows = next(self._source, None)
                if rows is None:
                    raise IrreducibleFace("acyclic diagrams do not span %d -> %d" % (self.k, self.l))
                vec = apply_diagram(Diagram(tuple(rows), 0, self.n), SparseTensor.scalar(1))
                i = len(self.vectors)
                self.vectors.append(vec.entries)
                self.diagrams.append(_bend_down(rows, self.k, self.l))
                self.ech.insert(self._restrict(vec.entries), {i: ONE})
                continue
            diff = dict(target)
            for i, c in track.items():
                for idx, a in self.vectors[i].items():
                    _acc(diff, idx, c * a)
            if not diff:
                return [(-c, self.diagrams[i]) for i, c in sorted(track.items())]
            self._grow(diff, 64)
            self._rebuild()


_SPANNERS = {}


# ---------------------------------------------------------------------------
# random diagrams


def random_diagram(rng, max_atoms=12, max_width=4, max_boundary=6):
    """A random valid diagram with at most ``max_atoms`` non-identity atoms.

    Intermediate widths stay at most ``max_width`` + 2 and the total number
    of boundary points at most ``max_boundary``.
    """
    while True:
        width = rng.randint(0, 3)
        start = width
        rows = []
        for _ in range(rng.randint(1, max_atoms)):
            choices = []
            if width <= max_width:
                choices += ["cup", "split", "split"] if width else ["cup"]
            if width >= 2:
                choices += ["cap", "over", "under", "merge", "over", "under", "merge"]
            a = rng.choice(choices)
            i, o = ARITY[a]
            pos = rng.randint(0, width - i)
            rows.append(("id",) * pos + (a,) + ("id",) * (width - pos - i))
            width += o - i
        if start + width <= max_boundary:
            return Diagram(tuple(rows), start, width)


# ---------------------------------------------------------------------------
# relation suite


def _sum(terms):
    out = None
    for c, m in terms:
        m = m.scale(c)
        out = m if out is None else out + m
    return out


def relation_suite():
    """Every defining relation and derived identity of the diagram category."""
    S = rep.structure_maps()
    R = Report("functor")
    z = lambda src: ev(src).is_zero()  # noqa: E731

    def zero(src):
        return None if z(src) else "%r does not evaluate to 0" % src

    def equal(a, b, c=ONE):
        return map_equal(ev(a), ev(b).scale(c))

    R.check("loop", lambda: None if ev("cup ; cap").scalar_value() == S.dim_q else "loop value wrong")
    R.check("jgen-crossing-vertex", lambda: map_equal(ev("over ; merge") - ev("merge").scale(ALPHA), LinMap.zero(2, 1)))
    R.check("jgen-bigon", lambda: map_equal(ev("split ; merge") - ev("id").scale(BETA), LinMap.zero(1, 1)))
    R.check("jgen-lollipop", lambda: zero("cup ; merge"))
    R.check("jgen-split-forms", lambda: equal("cup id ; id merge", "id cup ; merge id"))
    R.check("split-is-bent-merge", lambda: equal("split", "cup id ; id merge"))
    R.check("split-gamma", lambda: map_equal(ev("split"), S.gamma.scale(-(q**3))))
    R.check("merge-p", lambda: map_equal(ev("merge"), S.p.scale(q**-3)))
    R.check("merge-rotation-left", lambda: equal("id split ; cap id", "merge"))
    R.check("merge-rotation-right", lambda: equal("split id ; id cap", "merge"))
    R.check("tripod-rotation", lambda: equal("cup ; split id", "cup ; id split"))
    R.check("zigzag-left", lambda: equal("id cup ; cap id", "id"))
    R.check("zigzag-right", lambda: equal("cup id ; id cap", "id"))
    R.check("yang-baxter", lambda: equal("over id ; id over ; over id", "id over ; over id ; id over"))
    R.check("reidemeister-2", lambda: equal("over ; under", "id id"))
    # curls: strand with a kink closed on the right or on the left
    R.check("curl-right-over", lambda: equal("id cup ; over id ; id cap", "id", q**12))
    R.check("curl-left-over", lambda: equal("cup id ; id over ; cap id", "id", q**12))
    R.check("curl-right-under", lambda: equal("id cup ; under id ; id cap", "id", q**-12))
    R.check("curl-left-under", lambda: equal("cup id ; id under ; cap id", "id", q**-12))
    R.check("polo-cup-over", lambda: equal("cup ; over", "cup", q**-12))
    R.check("polo-cup-under", lambda: equal("cup ; under", "cup", q**12))
    R.check("polo-cap-over", lambda: equal("over ; cap", "cap", q**-12))
    R.check("polo-cap-under", lambda: equal("under ; cap", "cap", q**12))
    R.check("tri-over", lambda: equal("over ; merge", "merge", -(q**-6)))
    R.check("tri-under", lambda: equal("under ; merge", "merge", -(q**6)))
    R.check("cycle2", lambda: equal("split ; merge", "id", BETA))
    R.check("lollipop-cap", lambda: zero("split ; cap"))
    R.check("lollipop-cup", lambda: zero("cup ; merge"))

    def skein():
        lhs = ev("over").scale(q**-1) - ev("under").scale(q)
        rhs = _sum([
            (q - q**-1, ev("id id")),
            ((q**-1 - q) * (q**2 + q**-2), ev("cap ; cup")),
            (q - q**-1, ev("merge ; split")),
        ])
        return map_equal(lhs, rhs)

    R.check("skein", skein)

    def eta_spectral():
        rhs = _sum([
            (BETA, S.P0), (-1, S.P2l1), (q**2 + 1 + q**-2, S.Pl2), (-(q**4 + 1 + q**-4), S.Pl1),
        ])
        return map_equal(ev(ETA), rhs)

    R.check("eta-spectral", eta_spectral)
    R.check("cupcap-projector", lambda: map_equal(ev("cap ; cup"), S.P0.scale(S.dim_q)))
    R.check("vertical-h-projector", lambda: map_equal(ev("merge ; split"), S.Pl1.scale(BETA)))

    def cross(kind):
        a, b = (q, q**-1) if kind == "over" else (q**-1, q)
        lhs = ev(kind).scale(q + q**-1)
        rhs = _sum([(a**3, ev("id id")), (b**3, ev("cap ; cup")), (-a, ev(ETA)), (-b, ev("merge ; split"))])
        return map_equal(lhs, rhs)

    R.check("cross", cross, "over")
    R.check("crossprime", cross, "under")
    R.check("triangle", lambda: equal(ETA + " ; merge", "merge", -(q**4 + 1 + q**-4)))

    def square():
        lhs = ev(ETA + " ; " + ETA)
        rhs = _sum([
            (q**2 + 1 + q**-2, ev("id id")), (q**2 + 1 + q**-2, ev("cap ; cup")),
            (q**2 + q**-2, ev(ETA)), (q**2 + q**-2, ev("merge ; split")),
        ])
        return map_equal(lhs, rhs)

    R.check("square", square)
    # a strand crossing the vertex from bottom right to top left, under or over
    for kind in ("under", "over"):
        R.check(
            "slide-%s" % kind,
            lambda kind=kind: equal("merge id ; %s" % kind, "id %s ; %s id ; id merge" % (kind, kind)),
        )
    # mixed readings are recorded: they are not expected to hold
    for a, b in (("under", "over"), ("over", "under")):
        same = ev("merge id ; %s" % a) == ev("id %s ; %s id ; id merge" % (b, b))
        R.add("slide-mixed-%s-vs-%s-does-not-hold" % (a, b), not same, "mixed reading holds unexpectedly")
    # mirror slides: strand from bottom left to top right
    for kind in ("under", "over"):
        R.check(
            "slide-mirror-%s" % kind,
            lambda kind=kind: equal("id merge ; %s" % kind, "%s id ; id %s ; merge id" % (kind, kind)),
        )
    return R


def cycle_reduction_suite(n_random=200, seed=0):
    """Bigon, triangle and square coefficients, then reduce() on random diagrams."""
    import random

    R = Report("cycle-reduction", environment={"n_random": n_random, "seed": seed})
    full = relation_suite()
    for c in full.checks:
        if c.id in ("cycle2", "triangle", "square"):
            R.checks.append(c)
    rng = random.Random(seed)
    for k in range(n_random):
        d = random_diagram(rng)

        def run(d=d):
            lc = reduce_to_acyclic(d)
            for f, _ in lc:
                if not is_acyclic(f):
                    return "term %s still has a cycle or crossing" % (f,)
            got = lc.evaluate() if len(lc) else LinMap.zero(d.bottom, d.top)
            return map_equal(got, evaluate(d))

        R.check("random-%03d" % k, run)
    return R
