"""Exact linear algebra over Q and over GF(p).

Scalars are Fraction over Q and canonical ints in [0, p) over GF(p).
No floating point is used anywhere. Matrices are stored sparsely as
(row, col) -> value dictionaries; row vectors as key -> value dictionaries
over arbitrary ordered hashable keys.
"""

from __future__ import annotations

from fractions import Fraction
from heapq import heapify, heappop, heappush


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FieldSpec:
    """The coefficient field: Q (p is None) or GF(p) for a prime p."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None and not is_prime(p):
            raise FieldError("not a prime: %r" % (p,))
        self.p = p

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def prime_field(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse 'q' or 'f<p>' (e.g. 'f2', 'f7')."""
        t = text.strip().lower()
        if t == "q":
            return cls(None)
        if t.startswith("f") and t[1:].isdigit():
            return cls(int(t[1:]))
        raise FieldError("unrecognized field %r (expected q or f<p>)" % (text,))

    @property
    def name(self) -> str:
        return "Q" if self.p is None else "GF(%d)" % self.p

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and self.p == other.p

    def __hash__(self) -> int:
        return hash(("FieldSpec", self.p))

    def __repr__(self) -> str:
        return "FieldSpec(%r)" % (self.p,)

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def convert(self, x):
        """Map an int or Fraction into the field. Raises FieldError when a
        denominator vanishes mod p."""
        if self.p is None:
            return Fraction(x)
        q = Fraction(x)
        if q.denominator % self.p == 0:
            raise FieldError("denominator of %s is 0 mod %d" % (q, self.p))
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def unit(self, x):
        v = self.convert(x)
        if not v:
            raise FieldError("%s reduces to 0 in %s" % (x, self.name))
        return v

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if self.p is None:
            return Fraction(1) / a
        return pow(a, -1, self.p)

    def mul(self, a, b):
        return a * b if self.p is None else a * b % self.p

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def row_axpy(self, dst: dict, c, src: dict) -> None:
        """dst += c * src, dropping zero entries. Mutates dst."""
        p = self.p
        if p is None:
            for k, v in src.items():
                nv = dst.get(k, 0) + c * v
                if nv:
                    dst[k] = nv
                elif k in dst:
                    del dst[k]
        else:
            for k, v in src.items():
                nv = (dst.get(k, 0) + c * v) % p
                if nv:
                    dst[k] = nv
                elif k in dst:
                    del dst[k]

    def row_scale(self, row: dict, c) -> None:
        p = self.p
        if p is None:
            for k in row:
                row[k] *= c
        else:
            for k in row:
                row[k] = row[k] * c % p


QQ = FieldSpec.rationals()


class SparseRref:
    """Incremental row echelon form over a FieldSpec.

    Keys are ordered hashables; the pivot of a row is its minimal key.
    In reduced mode the pivot rows are kept fully inter-reduced (true RREF:
    a pivot row has coefficient 1 at its pivot and contains no other pivot
    key), which makes the stored rows canonical for the row space and lets
    them serve directly as rewrite rules. In forward mode rows are only
    pivot-normalized; cheaper, and ranks/kernels are unaffected since the
    pivot key set is the staircase of the row space either way.

    With track=True every stored row carries a history vector expressing it
    as a combination of the rows fed in (tagged by the caller); a row that
    reduces to zero hands back its history, i.e. an exact kernel combination.
    """

    def __init__(self, field: FieldSpec, reduced: bool = True, track: bool = False):
        self.field = field
        self.reduced = reduced
        self.track = track
        self.rows: dict = {}
        self.histories: dict = {}
        self._uses: dict = {}  # key -> set of pivot keys whose rows contain key

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row: dict, history: dict | None = None):
        """Fully reduce a row against the stored pivots. Returns the reduced
        row (a fresh dict) and its updated history."""
        field = self.field
        row = dict(row)
        if history is not None:
            history = dict(history)
        rows = self.rows
        if self.reduced:
            # pivot rows contain no other pivot keys, so eliminating the
            # initial hits never reintroduces one
            for k in sorted(k for k in row if k in rows):
                c = row.get(k)
                if not c:
                    continue
                nc = field.neg(c)
                field.row_axpy(row, nc, rows[k])
                if history is not None and self.track:
                    field.row_axpy(history, nc, self.histories[k])
        else:
            heap = sorted(row)
            seen = set(heap)
            heapify(heap)
            while heap:
                k = heappop(heap)
                c = row.get(k)
                if not c or k not in rows:
                    continue
                nc = field.neg(c)
                piv = rows[k]
                field.row_axpy(row, nc, piv)
                if history is not None and self.track:
                    field.row_axpy(history, nc, self.histories[k])
                for nk in piv:
                    if nk not in seen:
                        seen.add(nk)
                        heappush(heap, nk)
        return row, history

    def add_row(self, row: dict, tag=None):
        """Reduce and insert a row. Returns (pivot_key, history).

        pivot_key is None when the row reduced to zero; with track=True the
        returned history is then the vanishing combination (it includes the
        row's own tag with coefficient 1).
        """
        field = self.field
        history = None
        if self.track:
            history = {tag: field.one} if tag is not None else {}
        row, history = self.reduce(row, history)
        if not row:
            return None, history
        k = min(row)
        c = row[k]
        if c != field.one:
            ic = field.inv(c)
            field.row_scale(row, ic)
            if self.track:
                field.row_scale(history, ic)
        self.rows[k] = row
        if self.track:
            self.histories[k] = history
        if self.reduced:
            uses = self._uses
            for key in row:
                uses.setdefault(key, set()).add(k)
            # restore full reduction: eliminate the new pivot key from every
            # older pivot row that contains it
            holders = uses.get(k)
            if holders and len(holders) > 1:
                for p in sorted(holders - {k}):
                    self._eliminate_from_pivot(p, k)
        return k, history

    def _eliminate_from_pivot(self, pkey, k) -> None:
        field = self.field
        target = self.rows[pkey]
        c = target.get(k)
        if not c:
            return
        nc = field.neg(c)
        src = self.rows[k]
        uses = self._uses
        p = field.p
        for key, v in src.items():
            if p is None:
                nv = target.get(key, 0) + nc * v
            else:
                nv = (target.get(key, 0) + nc * v) % p
            if nv:
                if key not in target:
                    uses.setdefault(key, set()).add(pkey)
                target[key] = nv
            elif key in target:
                del target[key]
                uses[key].discard(pkey)
        if self.track:
            field.row_axpy(self.histories[pkey], nc, self.histories[k])


class ExactMatrix:
    """Sparse exact matrix: (row, col) -> nonzero int or Fraction."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: dict | None = None):
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < rows and 0 <= c < cols):
                    raise ValueError("entry (%d,%d) outside %dx%d" % (r, c, rows, cols))
                if v:
                    self.entries[(r, c)] = v

    @classmethod
    def from_rows(cls, data) -> "ExactMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        m = cls(rows, cols)
        for r, line in enumerate(data):
            if len(line) != cols:
                raise ValueError("ragged rows")
            for c, v in enumerate(line):
                if v:
                    m.entries[(r, c)] = v
        return m

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols)

    def to_rows(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self):
        rows: list[dict] = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows


def rank(m: ExactMatrix, field: FieldSpec) -> int:
    """Exact rank of m over the given field."""
    ech = SparseRref(field, reduced=False)
    for row in m.row_dicts():
        frow = {}
        for c, v in row.items():
            fv = field.convert(v)
            if fv:
                frow[c] = fv
        if frow:
            ech.add_row(frow)
    return ech.rank


def smith_normal_form(m: ExactMatrix) -> list[int]:
    """Elementary divisors d_1 | d_2 | ... of an integer matrix.

    Returns min(rows, cols) nonnegative integers, nonzero divisors first,
    each dividing the next, zeros trailing.
    """
    for v in m.entries.values():
        if not isinstance(v, int):
            raise ValueError("smith_normal_form needs integer entries, got %r" % (v,))
    rows: dict[int, dict[int, int]] = {}
    col_index: dict[int, set[int]] = {}
    for (r, c), v in m.entries.items():
        if not v:
            continue
        rows.setdefault(r, {})[c] = v
        col_index.setdefault(c, set()).add(r)

    def axpy_row(dst: int, c: int, src: int) -> None:
        drow = rows.setdefault(dst, {})
        for col, v in rows.get(src, {}).items():
            nv = drow.get(col, 0) + c * v
            if nv:
                drow[col] = nv
                col_index.setdefault(col, set()).add(dst)
            elif col in drow:
                del drow[col]
                col_index[col].discard(dst)
        if not drow:
            del rows[dst]

    active_rows = set(range(m.rows))
    active_cols = set(range(m.cols))
    divisors: list[int] = []
    total = min(m.rows, m.cols)

    while len(divisors) < total:
        # smallest |value| pivot among active entries, ties by position,
        # keeps intermediate growth down
        best = None
        for r in active_rows & rows.keys():
            for c, v in rows[r].items():
                if c not in active_cols:
                    continue
                key = (abs(v), r, c)
                if best is None or key < best[0]:
                    best = (key, r, c)
        if best is None:
            divisors.extend([0] * (total - len(divisors)))
            break
        _, pr, pc = best
        while True:
            pv = rows[pr][pc]
            # clear the pivot column by row operations; a nonzero remainder
            # becomes the new, smaller pivot
            again = False
            for r in sorted((col_index.get(pc) or set()) & active_rows):
                if r == pr:
                    continue
                v = rows.get(r, {}).get(pc, 0)
                if not v:
                    continue
                q = v // pv
                if q:
                    axpy_row(r, -q, pr)
                if rows.get(r, {}).get(pc):
                    pr = r
                    again = True
                    break
            if again:
                continue
            # clear the pivot row by column operations (columns live only in
            # the index, so do it entrywise)
            prow = rows[pr]
            moved = False
            for c in sorted(set(prow) & active_cols):
                if c == pc:
                    continue
                q, rem = divmod(prow[c], pv)
                if q:
                    for r in sorted((col_index.get(c) or set()) | {pr}):
                        if r not in active_rows and r != pr:
                            continue
                        rrow = rows.get(r)
                        if rrow is None:
                            continue
                        nv = rrow.get(c, 0) - q * rrow.get(pc, 0)
                        if nv:
                            rrow[c] = nv
                            col_index.setdefault(c, set()).add(r)
                        elif c in rrow:
                            del rrow[c]
                            col_index[c].discard(r)
                if rem:
                    pc = c
                    moved = True
                    break
            if moved:
                continue
            # pivot row and column are clean; enforce divisibility
            bad = None
            for r in active_rows & rows.keys():
                if r == pr:
                    continue
                for c, v in rows[r].items():
                    if c in active_cols and v % pv:
                        bad = r
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            axpy_row(pr, 1, bad)
        divisors.append(abs(rows[pr][pc]))
        active_rows.discard(pr)
        active_cols.discard(pc)

    nonzero = sorted(d for d in divisors if d)
    out = nonzero + [0] * (len(divisors) - len(nonzero))
    for i in range(len(nonzero) - 1):
        if nonzero[i + 1] % nonzero[i]:
            raise AssertionError("divisor chain broken: %r" % (out,))
    return out
