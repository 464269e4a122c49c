"""Quadratic presentations over a vertex ring and their graded dimensions.

A presentation has a finite ordered vertex set, degree-1 generators (arrows
between vertices), and degree-2 relations: sums c*(b o a) of scalar multiples
of composable generator pairs, all terms of one relation sharing a single
(end, start) vertex pair. Graded pieces of the quotient algebra are computed
degree by degree with exact linear algebra over Q or GF(p).

Convention used throughout: a path is a tuple of generator indices written
left to right, composing right to left. In (g1, ..., gd) the rightmost gd is
applied first, so the path runs from t(gd) to h(g1); the dims matrix entry
(i, j) counts paths ending at vertex i and starting at vertex j. Degree-0
paths (one per vertex) are keyed by the vertex index itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .field import QQ, FieldSpec, SparseRref
from .quiver import Quiver, double
from .series import MatrixSeries


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    tail: int
    head: int


class Relation:
    """Block-homogeneous quadratic relation: terms (c, b, a) meaning c*(b o a)
    with a applied first, h(a) = t(b); every term runs start -> end."""

    __slots__ = ("terms", "start", "end")

    def __init__(self, terms, start: int, end: int):
        self.terms = tuple(terms)
        self.start = start
        self.end = end

    def __repr__(self) -> str:
        return "Relation(%d terms, block end=%d start=%d)" % (
            len(self.terms), self.end, self.start)


class Presentation:
    """Vertices, generators, relations, field. Relations come in as raw
    (coefficient, b, a) triples; coefficients are converted into the field,
    duplicate (b, a) pairs merged, zero terms and empty relations dropped."""

    __slots__ = ("vertices", "generators", "relations", "field")

    def __init__(self, vertices, generators, relations, field: FieldSpec = QQ):
        self.vertices = tuple(vertices)
        if not self.vertices:
            raise AlgebraError("a presentation needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex name")
        n = len(self.vertices)
        self.generators = tuple(generators)
        names = set()
        for g in self.generators:
            if not g.name or g.name in names:
                raise AlgebraError("missing or duplicate generator name %r" % (g.name,))
            names.add(g.name)
            if not (0 <= g.tail < n and 0 <= g.head < n):
                raise AlgebraError("generator %r endpoints out of range" % (g.name,))
        self.field = field
        rels = []
        for raw in relations:
            rel = self._make_relation(raw)
            if rel is not None:
                rels.append(rel)
        self.relations = tuple(rels)

    def _make_relation(self, raw):
        gens = self.generators
        block = None
        merged: dict[tuple[int, int], object] = {}
        seen_any = False
        for c, b, a in raw:
            seen_any = True
            if not (0 <= b < len(gens) and 0 <= a < len(gens)):
                raise AlgebraError("relation term uses unknown generator index")
            if gens[a].head != gens[b].tail:
                raise AlgebraError(
                    "term (%s, %s) is not composable" % (gens[b].name, gens[a].name))
            blk = (gens[b].head, gens[a].tail)
            if block is None:
                block = blk
            elif blk != block:
                raise AlgebraError("relation mixes blocks %s and %s" % (block, blk))
            cv = self.field.convert(c)
            key = (b, a)
            nv = self.field.add(merged.get(key, self.field.zero), cv)
            if nv:
                merged[key] = nv
            elif key in merged:
                del merged[key]
        if not seen_any:
            raise AlgebraError("empty relation")
        if not merged:
            return None
        end, start = block
        terms = tuple((merged[k], k[0], k[1]) for k in sorted(merged))
        return Relation(terms, start, end)

    def __repr__(self) -> str:
        return "Presentation(%d vertices, %d generators, %d relations, %s)" % (
            len(self.vertices), len(self.generators), len(self.relations),
            self.field.name)


def generator_matrix(p: Presentation) -> list[list[int]]:
    """C[i][j] = number of generators from j to i."""
    n = len(p.vertices)
    C = [[0] * n for _ in range(n)]
    for g in p.generators:
        C[g.head][g.tail] += 1
    return C


def relation_space_rows(p: Presentation) -> list[dict]:
    """Canonical reduced echelon basis of the span of the relations, as rows
    over the degree-2 monomial keys (b, a). Independent of listing order."""
    ech = SparseRref(p.field, reduced=True)
    for rel in p.relations:
        ech.add_row({(b, a): c for c, b, a in rel.terms})
    return [dict(ech.rows[k]) for k in sorted(ech.rows)]


def relation_dim_matrix(p: Presentation) -> list[list[int]]:
    """D[i][j] = dimension of the relation span in block (i, j), i.e. the
    rank of the relations there, not the count of listed relations."""
    n = len(p.vertices)
    D = [[0] * n for _ in range(n)]
    gens = p.generators
    for row in relation_space_rows(p):
        b, a = next(iter(row))
        D[gens[b].head][gens[a].tail] += 1
    return D


def preprojective_presentation(q: Quiver, field: FieldSpec = QQ) -> Presentation:
    """Presentation on the double of q with one relation per black vertex:
    sum over arrows a with h(a)=i of gamma_a (a o a*) minus sum over arrows a
    with t(a)=i of gamma_{a*} (a* o a). Absent gamma means all weights 1; a
    nonempty gamma must cover exactly the doubled arrows touching a black
    vertex, with every weight a unit in the field."""
    dq = double(q)
    idx = {v: i for i, v in enumerate(q.vertices)}
    gens = tuple(Generator(a.name, idx[a.tail], idx[a.head]) for a in dq.arrows)
    nA = len(q.arrows)
    black = q.black
    if q.gamma:
        touching = {a.name for a in dq.arrows
                    if a.tail in black or a.head in black}
        missing = sorted(touching - set(q.gamma))
        if missing:
            raise AlgebraError("gamma missing for %s" % ", ".join(missing))
        weight = lambda name: q.gamma[name]
    else:
        weight = lambda name: Fraction(1)
    rels = []
    for i, v in enumerate(q.vertices):
        if v in q.white:
            continue
        terms = []
        for k, a in enumerate(q.arrows):
            if idx[a.head] == i:
                terms.append((field.unit(weight(a.name)), k, nA + k))
            if idx[a.tail] == i:
                terms.append((field.neg(field.unit(weight(a.name + "*"))),
                              nA + k, k))
        if terms:
            rels.append(terms)
    return Presentation(q.vertices, gens, rels, field)


class GradedEngine:
    """Degreewise quotient of the tensor algebra on the generators by the
    two-sided ideal of the relations.

    Degree-d monomial candidates are (g,) + w over the degree d-1 basis; the
    relation placements rel o u, u running over the degree d-2 basis, are
    expanded in those candidates through the degree d-1 rewrite table and fed
    to an exact row echelon with lexicographically minimal pivots. Candidates
    that are not pivots form the degree-d basis, which is therefore
    suffix-closed and independent of relation listing order. Rewrite tables
    (pivot monomial -> basis expansion) come from the reduced echelon; a
    degree computed in forward-only mode (cheaper, used for a final degree)
    has no rewrite table and is rebuilt on demand.
    """

    def __init__(self, pres: Presentation):
        self.pres = pres
        self.field = pres.field
        n = len(pres.vertices)
        self._gens_by_tail: dict[int, list[int]] = {}
        for k, g in enumerate(pres.generators):
            self._gens_by_tail.setdefault(g.tail, []).append(k)
        self._basis = [tuple(range(n))]
        self._basis_set = [frozenset(range(n))]
        self._by_end = [None]
        self._by_start = [None]
        self._rewrite: list[dict | None] = [{}]
        b1 = tuple((k,) for k in range(len(pres.generators)))
        self._basis.append(b1)
        self._basis_set.append(frozenset(b1))
        self._by_end.append(self._group(b1, by_end=True))
        self._by_start.append(self._group(b1, by_end=False))
        self._rewrite.append({})
        self._mul_cache: dict = {}

    def _group(self, paths, by_end: bool):
        gens = self.pres.generators
        out: dict[int, list] = {}
        for m in paths:
            v = gens[m[0]].head if by_end else gens[m[-1]].tail
            out.setdefault(v, []).append(m)
        return out

    def path_end(self, m) -> int:
        return m if isinstance(m, int) else self.pres.generators[m[0]].head

    def path_start(self, m) -> int:
        return m if isinstance(m, int) else self.pres.generators[m[-1]].tail

    def computed_degree(self) -> int:
        return len(self._basis) - 1

    def _ensure(self, d: int, need_rewrite: bool) -> None:
        if d <= 1:
            return
        if len(self._basis) > d and (self._rewrite[d] is not None
                                     or not need_rewrite):
            return
        self._ensure(d - 1, True)
        self._build(d, need_rewrite)

    def _build(self, d: int, with_rewrite: bool) -> None:
        field = self.field
        gens = self.pres.generators
        gbt = self._gens_by_tail
        zero, fadd, fmul = field.zero, field.add, field.mul
        cands = []
        for w in self._basis[d - 1]:
            for g in gbt.get(gens[w[0]].head, ()):
                cands.append((g,) + w)
        cands.sort()
        ech = SparseRref(field, reduced=with_rewrite)
        bset = self._basis_set[d - 1]
        rw = self._rewrite[d - 1]

        def acc(row, key, val):
            nv = fadd(row.get(key, zero), val)
            if nv:
                row[key] = nv
            elif key in row:
                del row[key]

        for rel in self.pres.relations:
            if d == 2:
                row = {}
                for c, b, a in rel.terms:
                    acc(row, (b, a), c)
                if row:
                    ech.add_row(row)
                continue
            for u in self._by_end[d - 2].get(rel.start, ()):
                row = {}
                for c, b, a in rel.terms:
                    m = (a,) + u
                    if m in bset:
                        acc(row, (b,) + m, c)
                    else:
                        for w2, c2 in rw[m].items():
                            acc(row, (b,) + w2, fmul(c, c2))
                if row:
                    ech.add_row(row)

        pivots = ech.rows
        basis = tuple(m for m in cands if m not in pivots)
        rewrite = None
        if with_rewrite:
            rewrite = {piv: {m: field.neg(c) for m, c in r.items() if m != piv}
                       for piv, r in pivots.items()}
        if len(self._basis) > d:
            # forward-mode degree upgraded in place; pivots are canonical so
            # the basis cannot change
            if self._basis[d] != basis:
                raise AssertionError("degree %d basis changed on rebuild" % d)
            self._rewrite[d] = rewrite
        else:
            self._basis.append(basis)
            self._basis_set.append(frozenset(basis))
            self._by_end.append(self._group(basis, by_end=True))
            self._by_start.append(self._group(basis, by_end=False))
            self._rewrite.append(rewrite)

    def basis(self, d: int):
        """Degree-d basis paths (vertex indices at d=0), lexicographic."""
        if d < 0:
            raise AlgebraError("negative degree")
        self._ensure(d, False)
        return self._basis[d]

    def basis_by_start(self, d: int, v: int):
        """Degree-d basis paths starting at vertex v (at d=0: the trivial
        path, keyed by the vertex index itself)."""
        self._ensure(d, False)
        if d == 0:
            return (v,)
        return tuple(self._by_start[d].get(v, ()))

    def dims(self, d: int) -> list[list[int]]:
        n = len(self.pres.vertices)
        if d == 0:
            return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        self._ensure(d, False)
        gens = self.pres.generators
        M = [[0] * n for _ in range(n)]
        for m in self._basis[d]:
            M[gens[m[0]].head][gens[m[-1]].tail] += 1
        return M

    def series(self, N: int) -> MatrixSeries:
        """Dims to degree N; the final degree runs in forward-only mode."""
        for d in range(2, N):
            self._ensure(d, True)
        if N >= 2:
            self._ensure(N, False)
        return MatrixSeries(len(self.pres.vertices),
                            [self.dims(d) for d in range(N + 1)])

    def left_mul_path(self, g: int, w):
        """Normal form of generator g times the basis path w (an int means
        the trivial path at that vertex): {basis path: coeff}, empty when the
        product vanishes. Cached; callers must not mutate the result."""
        key = (g, w)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        gens = self.pres.generators
        if isinstance(w, int):
            out = {(g,): self.field.one} if gens[g].tail == w else {}
        elif gens[g].tail != gens[w[0]].head:
            out = {}
        else:
            m = (g,) + w
            d1 = len(m)
            self._ensure(d1, True)
            if m in self._basis_set[d1]:
                out = {m: self.field.one}
            else:
                out = self._rewrite[d1][m]
        self._mul_cache[key] = out
        return out

    def left_mul(self, g: int, vec: dict, d: int) -> dict:
        """Left-multiply a degree-d coordinate vector by generator g, in
        degree d+1 coordinates. Degree-0 vectors are keyed by vertex index."""
        field = self.field
        out: dict = {}
        for w, c in vec.items():
            for m, c2 in self.left_mul_path(g, w).items():
                nv = field.add(out.get(m, field.zero), field.mul(c, c2))
                if nv:
                    out[m] = nv
                elif m in out:
                    del out[m]
        return out

    def normal_form(self, path) -> dict:
        """Basis expansion of an arbitrary word of generator indices; {} for
        a non-composable (hence zero) word."""
        path = tuple(path)
        gens = self.pres.generators
        for g in path:
            if not (0 <= g < len(gens)):
                raise AlgebraError("unknown generator index %r" % (g,))
        if not path:
            raise AlgebraError("empty word has no single vertex; use dims(0)")
        vec = {gens[path[-1]].tail: self.field.one}
        for pos in range(len(path) - 1, -1, -1):
            vec = self.left_mul(path[pos], vec, len(path) - 1 - pos)
            if not vec:
                return {}
        return vec


def graded_dimension(p: Presentation, d: int,
                     engine: GradedEngine | None = None) -> list[list[int]]:
    return (engine or GradedEngine(p)).dims(d)


def hilbert_series(p: Presentation, N: int,
                   engine: GradedEngine | None = None) -> MatrixSeries:
    return (engine or GradedEngine(p)).series(N)


def free_product(p1: Presentation, p2: Presentation) -> Presentation:
    """Coproduct over the vertex ring: generators concatenated (second
    factor's names disjointified with primes), relations concatenated."""
    if p1.vertices != p2.vertices:
        raise AlgebraError("vertex sets differ")
    if p1.field != p2.field:
        raise AlgebraError("fields differ")
    names = {g.name for g in p1.generators}
    gens = list(p1.generators)
    for g in p2.generators:
        nm = g.name
        while nm in names:
            nm += "'"
        names.add(nm)
        gens.append(Generator(nm, g.tail, g.head))
    off = len(p1.generators)
    rels = [list(r.terms) for r in p1.relations]
    rels += [[(c, b + off, a + off) for c, b, a in r.terms]
             for r in p2.relations]
    return Presentation(p1.vertices, gens, rels, p1.field)


def associated_graded(p: Presentation, weights) -> Presentation:
    """Degeneration by generator weights: each relation keeps only its terms
    of maximal total weight (weight of (c, b, a) = w[b] + w[a]).

    weights maps generator names to nonnegative integers; a sequence indexed
    by generator position is accepted too."""
    try:
        if isinstance(weights, dict) and any(
                isinstance(k, str) for k in weights):
            w = [weights[g.name] for g in p.generators]
        else:
            w = [weights[k] for k in range(len(p.generators))]
    except (KeyError, IndexError):
        raise AlgebraError("weights must cover every generator") from None
    if any(not isinstance(x, int) or x < 0 for x in w):
        raise AlgebraError("weights must be nonnegative integers")
    rels = []
    for r in p.relations:
        top = max(w[b] + w[a] for c, b, a in r.terms)
        rels.append([(c, b, a) for c, b, a in r.terms if w[b] + w[a] == top])
    return Presentation(p.vertices, p.generators, rels, p.field)


def count_avoiding_paths(n: int, N: int) -> MatrixSeries:
    """Transfer-matrix count of paths in the doubled n-cycle (arrows
    a_k: k -> k+1 mod n and stars a_k*: k+1 -> k) whose written form never
    contains a_k* immediately left of a_k. Entry (i, j) of the degree-d
    coefficient counts such paths from j to i."""
    if n < 1:
        raise AlgebraError("cycle length must be >= 1")
    # generator k < n is a_k (k -> k+1); generator n+k is a_k* (k+1 -> k)
    tail = [k % n for k in range(n)] + [(k + 1) % n for k in range(n)]
    head = [(k + 1) % n for k in range(n)] + [k % n for k in range(n)]
    gens = range(2 * n)

    def allowed(left: int, right: int) -> bool:
        if tail[left] != head[right]:
            return False
        return not (left >= n and right == left - n)

    mats = [[[1 if i == j else 0 for j in range(n)] for i in range(n)]]
    # count[g][j] = paths of the current degree from j whose leftmost factor
    # is g
    count = [[1 if tail[g] == j else 0 for j in range(n)] for g in gens]
    for d in range(1, N + 1):
        if d > 1:
            count = [[sum(count[g2][j] for g2 in gens if allowed(g, g2))
                      for j in range(n)] for g in gens]
        M = [[0] * n for _ in range(n)]
        for g in gens:
            for j in range(n):
                M[head[g]][j] += count[g][j]
        mats.append(M)
    return MatrixSeries(n, mats[:N + 1])
