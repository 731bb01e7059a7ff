"""The three concrete base categories.

Every computation in this package happens inside one of three symmetric
monoidal categories, all exact:

- "finset": finite labeled sets with functions; monoidal product is the
  cartesian product.
- "vectq": finite dimensional rational vector spaces with linear maps;
  monoidal product is the tensor product.
- "chq": bounded chain complexes of finite dimensional rational spaces;
  monoidal product is the tensor product of complexes with the usual sign.

Objects and morphisms are immutable. The tensor product is strictly
associative by representation choice: finset labels are tuples of atoms and
tensoring concatenates them, vectq/chq use Kronecker products, and the unit
satisfies I (x) X == X literally on vectq/chq.

compose(f, g) is diagrammatic: f first, then g. Morphisms also expose
f.then(g) which reads left to right.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import ratmat
from .ratmat import ZERO, ONE

BACKENDS = ("finset", "vectq", "chq")


@dataclass(frozen=True)
class MObject:
    """An object of one of the three base categories.

    Exactly one payload group is populated: `labels` for finset (a tuple of
    labels, each label itself a tuple of atom strings), `dim` for vectq,
    `degrees` and `diff` for chq (one square differential matrix with
    d(basis j) read off column j; entries only where deg(row) = deg(col)-1
    and d*d = 0).
    """

    backend: str
    labels: tuple = None
    dim: int = None
    degrees: tuple = None
    diff: tuple = None

    def size(self):
        if self.backend == "finset":
            return len(self.labels)
        if self.backend == "vectq":
            return self.dim
        return len(self.degrees)

    def is_empty(self):
        return self.size() == 0


def finset_obj(labels):
    """A finite set. Labels may be strings (wrapped as one-atom tuples)."""
    norm = tuple(
        (lbl,) if isinstance(lbl, str) else tuple(lbl) for lbl in labels
    )
    if len(set(norm)) != len(norm):
        raise ValueError("finset labels must be distinct: %r" % (norm,))
    for lbl in norm:
        if not lbl or not all(isinstance(a, str) and a for a in lbl):
            raise ValueError("bad finset label %r" % (lbl,))
    return MObject("finset", labels=norm)


def vectq_obj(dim):
    if dim < 0:
        raise ValueError("negative dimension")
    return MObject("vectq", dim=int(dim))


def chq_obj(degrees, diff):
    degrees = tuple(int(d) for d in degrees)
    diff = ratmat.mat(diff) if degrees else ()
    n = len(degrees)
    if degrees and ratmat.shape(diff) != (n, n):
        raise ValueError("chq differential must be %dx%d" % (n, n))
    for i in range(n):
        for j in range(n):
            if diff[i][j] != 0 and degrees[i] != degrees[j] - 1:
                raise ValueError("chq differential entry off the degree line")
    if n and not ratmat.is_zero(ratmat.matmul(diff, diff)):
        raise ValueError("chq differential does not square to zero")
    return MObject("chq", degrees=degrees, diff=diff)


def empty(backend):
    if backend == "finset":
        return finset_obj([])
    if backend == "vectq":
        return vectq_obj(0)
    return chq_obj([], [])


def unit(backend):
    if backend == "finset":
        return finset_obj(["I"])
    if backend == "vectq":
        return vectq_obj(1)
    return chq_obj([0], [[0]])


def sphere(n):
    """One generator in degree n, zero differential."""
    return chq_obj([n], [[0]])


def disk(n):
    """Generators e0 in degree n and e1 in degree n-1 with d(e0) = e1."""
    return chq_obj([n, n - 1], [[0, 0], [1, 0]])


@dataclass(frozen=True)
class MMorphism:
    """A morphism src -> dst.

    finset: `mapping[i]` is the dst index of the image of src label i.
    vectq/chq: `matrix` has dst.size() rows and src.size() columns; chq
    matrices are degree preserving and commute with the differentials.
    """

    backend: str
    src: MObject
    dst: MObject
    mapping: tuple = None
    matrix: tuple = None

    def then(self, other):
        """Diagrammatic composition: self first, then other."""
        if self.dst != other.src:
            raise ValueError("composition mismatch")
        if self.backend == "finset":
            return MMorphism(
                "finset", self.src, other.dst,
                mapping=tuple(other.mapping[i] for i in self.mapping))
        m, k, n = other.dst.size(), self.dst.size(), self.src.size()
        if m == 0 or n == 0 or k == 0:
            mx = ratmat.zeros(m, n)
        else:
            mx = ratmat.matmul(other.matrix, self.matrix)
        return MMorphism(self.backend, self.src, other.dst, matrix=mx)

    def apply_index(self, i):
        return self.mapping[i]


def finset_map(src, dst, mapping):
    mapping = tuple(int(i) for i in mapping)
    if len(mapping) != len(src.labels):
        raise ValueError("finset mapping has wrong length")
    for i in mapping:
        if not (0 <= i < len(dst.labels)):
            raise ValueError("finset mapping index out of range")
    return MMorphism("finset", src, dst, mapping=mapping)


def finset_map_by_label(src, dst, table):
    """Build a finset map from a {src label: dst label} dict."""
    idx = {lbl: i for i, lbl in enumerate(dst.labels)}
    return finset_map(src, dst, [idx[table[lbl]] for lbl in src.labels])


def vectq_map(src, dst, matrix):
    matrix = ratmat.mat(matrix) if dst.dim else ()
    if dst.dim and ratmat.shape(matrix) != (dst.dim, src.dim):
        raise ValueError("vectq matrix must be %dx%d" % (dst.dim, src.dim))
    return MMorphism("vectq", src, dst, matrix=matrix)


def chq_map(src, dst, matrix):
    m, n = len(dst.degrees), len(src.degrees)
    matrix = ratmat.mat(matrix) if m else ()
    if m and ratmat.shape(matrix) != (m, n):
        raise ValueError("chq matrix must be %dx%d" % (m, n))
    for i in range(m):
        for j in range(n):
            if matrix[i][j] != 0 and dst.degrees[i] != src.degrees[j]:
                raise ValueError("chq map entry off the degree diagonal")
    if m and n:
        if ratmat.matmul(dst.diff, matrix) != ratmat.matmul(matrix, src.diff):
            raise ValueError("chq map does not commute with differentials")
    return MMorphism("chq", src, dst, matrix=matrix)


def make_map(src, dst, payload):
    if src.backend == "finset":
        return finset_map(src, dst, payload)
    if src.backend == "vectq":
        return vectq_map(src, dst, payload)
    return chq_map(src, dst, payload)


def identity(x):
    if x.backend == "finset":
        return MMorphism("finset", x, x, mapping=tuple(range(len(x.labels))))
    return MMorphism(x.backend, x, x, matrix=ratmat.eye(x.size()))


def compose(f, g):
    """The composite "f then g" (diagrammatic order)."""
    return f.then(g)


def zero_map(src, dst):
    """The zero map for vectq/chq; for finset only out of the empty set."""
    if src.backend == "finset":
        if src.labels:
            raise ValueError("finset has no zero maps out of nonempty sets")
        return MMorphism("finset", src, dst, mapping=())
    return MMorphism(src.backend, src, dst,
                     matrix=ratmat.zeros(dst.size(), src.size()))


def is_identity(f):
    return f.src == f.dst and f == identity(f.src)


# ---------------------------------------------------------------------------
# tensor


def _pair_label(a, b):
    return a + b


def tensor(x, y):
    if x.backend != y.backend:
        raise ValueError("backend mismatch")
    if x.backend == "finset":
        labels = tuple(_pair_label(a, b) for a in x.labels for b in y.labels)
        if len(set(labels)) != len(labels):
            raise ValueError("tensor label collision")
        return MObject("finset", labels=labels)
    if x.backend == "vectq":
        return vectq_obj(x.dim * y.dim)
    degrees = tuple(dx + dy for dx in x.degrees for dy in y.degrees)
    nx, ny = len(x.degrees), len(y.degrees)
    if nx == 0 or ny == 0:
        return chq_obj([], [])
    sign = tuple(
        tuple((-1) ** x.degrees[i] * ONE if i == j else ZERO for j in range(nx))
        for i in range(nx))
    diff = ratmat.madd(
        ratmat.kron(x.diff, ratmat.eye(ny)), ratmat.kron(sign, y.diff))
    return MObject("chq", degrees=degrees, diff=diff)


def tensor_mor(f, g):
    src = tensor(f.src, g.src)
    dst = tensor(f.dst, g.dst)
    if f.backend == "finset":
        ns = len(g.src.labels)
        nd = len(g.dst.labels)
        mapping = tuple(
            f.mapping[i] * nd + g.mapping[j]
            for i in range(len(f.src.labels)) for j in range(ns))
        return MMorphism("finset", src, dst, mapping=mapping)
    if src.size() == 0 or dst.size() == 0:
        return MMorphism(f.backend, src, dst,
                         matrix=ratmat.zeros(dst.size(), src.size()))
    return MMorphism(f.backend, src, dst,
                     matrix=ratmat.kron(f.matrix, g.matrix))


def tensor_multi(objs, backend=None):
    objs = list(objs)
    if not objs:
        if backend is None:
            raise ValueError("empty tensor needs an explicit backend")
        return unit(backend)
    out = objs[0]
    for o in objs[1:]:
        out = tensor(out, o)
    return out


def tensor_mor_multi(mors, backend=None):
    mors = list(mors)
    if not mors:
        u = unit(backend)
        return identity(u)
    out = mors[0]
    for m in mors[1:]:
        out = tensor_mor(out, m)
    return out


def symmetry(x, y):
    """The braiding x (x) y -> y (x) x (with Koszul signs on chq)."""
    src = tensor(x, y)
    dst = tensor(y, x)
    nx, ny = x.size(), y.size()
    if x.backend == "finset":
        mapping = tuple(j * nx + i for i in range(nx) for j in range(ny))
        return MMorphism("finset", src, dst, mapping=mapping)
    rows = [[ZERO] * (nx * ny) for _ in range(nx * ny)]
    for i in range(nx):
        for j in range(ny):
            s = ONE
            if x.backend == "chq":
                s = (-1) ** (x.degrees[i] * y.degrees[j]) * ONE
            rows[j * nx + i][i * ny + j] = s
    return make_map(src, dst, tuple(tuple(r) for r in rows))


def left_unitor(x):
    """The canonical iso I (x) x -> x (the identity matrix on vectq/chq)."""
    src = tensor(unit(x.backend), x)
    if x.backend == "finset":
        return MMorphism("finset", src, x, mapping=tuple(range(len(x.labels))))
    return MMorphism(x.backend, src, x, matrix=ratmat.eye(x.size()))


def right_unitor(x):
    src = tensor(x, unit(x.backend))
    if x.backend == "finset":
        return MMorphism("finset", src, x, mapping=tuple(range(len(x.labels))))
    return MMorphism(x.backend, src, x, matrix=ratmat.eye(x.size()))


def invert(f):
    """The inverse of an isomorphism; raises if f is not one."""
    if f.backend == "finset":
        n = len(f.src.labels)
        if len(f.dst.labels) != n or len(set(f.mapping)) != n:
            raise ValueError("not an isomorphism")
        inv = [0] * n
        for i, j in enumerate(f.mapping):
            inv[j] = i
        return MMorphism("finset", f.dst, f.src, mapping=tuple(inv))
    if f.src.size() != f.dst.size():
        raise ValueError("not an isomorphism")
    if f.src.size() == 0:
        return MMorphism(f.backend, f.dst, f.src, matrix=())
    inv = ratmat.inverse(f.matrix)
    if inv is None:
        raise ValueError("not an isomorphism")
    if f.backend == "chq":
        return chq_map(f.dst, f.src, inv)
    return MMorphism(f.backend, f.dst, f.src, matrix=inv)


# ---------------------------------------------------------------------------
# predicates


def is_injective(f):
    if f.backend == "finset":
        return len(set(f.mapping)) == len(f.mapping)
    if f.src.size() == 0:
        return True
    if f.dst.size() == 0:
        return False
    return ratmat.rank(f.matrix) == f.src.size()


def is_surjective(f):
    if f.backend == "finset":
        return len(set(f.mapping)) == len(f.dst.labels)
    if f.dst.size() == 0:
        return True
    if f.src.size() == 0:
        return False
    return ratmat.rank(f.matrix) == f.dst.size()


def is_isomorphism(f):
    return is_injective(f) and is_surjective(f)


def degree_positions(x, n):
    return [i for i, d in enumerate(x.degrees) if d == n]


def _degree_block(x, n):
    """The matrix block of x.diff from degree-n columns to degree-(n-1) rows."""
    cols = degree_positions(x, n)
    rows = degree_positions(x, n - 1)
    return tuple(tuple(x.diff[i][j] for j in cols) for i in rows), len(cols)


def homology(x):
    """Betti numbers of a chq object as a {degree: dim} dict (zeros omitted)."""
    if x.backend != "chq":
        raise ValueError("homology needs the chq backend")
    if not x.degrees:
        return {}
    out = {}
    for n in range(min(x.degrees), max(x.degrees) + 1):
        dn, ncols = _degree_block(x, n)
        rank_dn = ratmat.rank(dn) if dn and dn[0] else 0
        dn1, _ = _degree_block(x, n + 1)
        rank_dn1 = ratmat.rank(dn1) if dn1 and dn1[0] else 0
        h = ncols - rank_dn - rank_dn1
        if h:
            out[n] = h
    return out


def mapping_cone(f):
    """The cone of a chq map: shifted source followed by the target."""
    x, y = f.src, f.dst
    degrees = tuple(d + 1 for d in x.degrees) + y.degrees
    nx, ny = len(x.degrees), len(y.degrees)
    n = nx + ny
    diff = [[ZERO] * n for _ in range(n)]
    for i in range(nx):
        for j in range(nx):
            diff[i][j] = -x.diff[i][j]
    for i in range(ny):
        for j in range(nx):
            diff[nx + i][j] = f.matrix[i][j] if nx and ny else ZERO
        for j in range(ny):
            diff[nx + i][nx + j] = y.diff[i][j]
    return chq_obj(degrees, diff)


def is_quasi_iso(f):
    return not homology(mapping_cone(f))


def is_weak_equivalence(f):
    """finset: bijection; vectq: invertible; chq: quasi-isomorphism."""
    if f.backend == "chq":
        return is_quasi_iso(f)
    return is_isomorphism(f)


def is_fibration(f):
    """Every map for finset/vectq; degreewise surjective for chq."""
    if f.backend != "chq":
        return True
    degs = set(f.src.degrees) | set(f.dst.degrees)
    for n in degs:
        rows = degree_positions(f.dst, n)
        cols = degree_positions(f.src, n)
        if not rows:
            continue
        if not cols:
            return False
        block = tuple(tuple(f.matrix[i][j] for j in cols) for i in rows)
        if ratmat.rank(block) != len(rows):
            return False
    return True


def is_trivial_fibration(f):
    """Surjective for finset/vectq; surjective quasi-iso for chq.

    On finset/vectq this is weaker than "fibration and weak equivalence";
    it is the class factorize produces and the class the generating
    cofibrations detect, which is what every caller needs.
    """
    if f.backend == "chq":
        return is_fibration(f) and is_quasi_iso(f)
    return is_surjective(f)


def is_cofibration(f):
    """Injective (degreewise injective on chq)."""
    return is_injective(f)


# ---------------------------------------------------------------------------
# factorization and lifting


def _suffix_label(lbl, i):
    return (",".join(lbl) + "·" + str(i),)


def factorize(f):
    """Factor f as a cofibration followed by a trivial fibration.

    finset/vectq: through src (+) dst. chq: through the mapping cylinder
    (src, shifted src, dst), whose projection is a surjective quasi-iso.
    """
    x, y = f.src, f.dst
    if f.backend == "finset":
        labels = tuple(_suffix_label(l, 0) for l in x.labels) + tuple(
            _suffix_label(l, 1) for l in y.labels)
        mid = MObject("finset", labels=labels)
        j = MMorphism("finset", x, mid, mapping=tuple(range(len(x.labels))))
        q = MMorphism("finset", mid, y, mapping=tuple(f.mapping) + tuple(
            range(len(y.labels))))
        return j, q
    if f.backend == "vectq":
        nx, ny = x.dim, y.dim
        mid = vectq_obj(nx + ny)
        j = vectq_map(x, mid, ratmat.vstack(
            [ratmat.eye(nx), ratmat.zeros(ny, nx)]) if nx + ny else ())
        fm = f.matrix if nx and ny else ratmat.zeros(ny, nx)
        q = vectq_map(mid, y, ratmat.hstack(
            [fm, ratmat.eye(ny)]) if ny else ())
        return j, q
    nx, ny = len(x.degrees), len(y.degrees)
    degrees = x.degrees + tuple(d + 1 for d in x.degrees) + y.degrees
    n = 2 * nx + ny
    diff = [[ZERO] * n for _ in range(n)]
    for i in range(nx):
        for j in range(nx):
            diff[i][j] = x.diff[i][j]
            diff[i + nx][j + nx] = -x.diff[i][j]
        diff[i][i + nx] = -ONE
    for i in range(ny):
        for j in range(nx):
            diff[2 * nx + i][nx + j] = f.matrix[i][j] if nx and ny else ZERO
        for j in range(ny):
            diff[2 * nx + i][2 * nx + j] = y.diff[i][j]
    mid = chq_obj(degrees, diff)
    jm = [[ZERO] * nx for _ in range(n)]
    for i in range(nx):
        jm[i][i] = ONE
    j = chq_map(x, mid, jm) if n else chq_map(x, mid, ())
    qm = [[ZERO] * n for _ in range(ny)]
    for i in range(ny):
        for jj in range(nx):
            qm[i][jj] = f.matrix[i][jj] if nx and ny else ZERO
        qm[i][2 * nx + i] = ONE
    q = chq_map(mid, y, qm)
    return j, q


def generating_cofibrations(backend, window=None):
    """The generating cofibrations of the backend.

    chq needs a degree window (lo, hi) covering the supports involved; the
    family is sphere(n-1) -> disk(n) for n = lo .. hi+1 (one disk above the
    window, which is needed to detect homology injectivity in the top
    degree).
    """
    if backend == "finset":
        e = empty("finset")
        one = finset_obj(["0"])
        two = finset_obj(["0", "1"])
        return [MMorphism("finset", e, one, mapping=()),
                finset_map(one, two, [0])]
    if backend == "vectq":
        z = empty("vectq")
        q1 = vectq_obj(1)
        q2 = vectq_obj(2)
        return [vectq_map(z, q1, ratmat.zeros(1, 0)),
                vectq_map(q1, q2, [[1], [0]])]
    if window is None:
        raise ValueError("chq generating cofibrations need a degree window")
    lo, hi = window
    out = []
    for n in range(lo, hi + 2):
        s = sphere(n - 1)
        d = disk(n)
        out.append(chq_map(s, d, [[0], [1]]))
    return out


def enumerate_maps(x, y):
    """All finset maps x -> y (exhaustive; meant for small sets)."""
    if x.backend != "finset":
        raise ValueError("enumerate_maps is finset only")
    n = len(x.labels)
    m = len(y.labels)
    if n == 0:
        yield MMorphism("finset", x, y, mapping=())
        return
    if m == 0:
        return
    for mapping in itertools.product(range(m), repeat=n):
        yield MMorphism("finset", x, y, mapping=mapping)


def _hom_constraint(src, dst):
    """Rows cutting out the chain maps inside all dst x src matrices.

    Acts on the column-major vectorization of K: the chain condition
    d_dst K = K d_src together with vanishing off the degree diagonal.
    Empty (no rows) for finset/vectq.
    """
    ns, nd = src.size(), dst.size()
    if src.backend != "chq" or ns == 0 or nd == 0:
        return ratmat.zeros(0, nd * ns)
    left = ratmat.kron(ratmat.eye(ns), dst.diff)
    right = ratmat.kron(ratmat.transpose(src.diff), ratmat.eye(nd))
    rows = list(ratmat.msub(left, right))
    for j in range(ns):
        for i in range(nd):
            if dst.degrees[i] != src.degrees[j]:
                row = [ZERO] * (nd * ns)
                row[j * nd + i] = ONE
                rows.append(tuple(row))
    return tuple(rows)


def chq_hom_basis(src, dst):
    """A basis of the space of chain maps src -> dst, as morphisms."""
    ns, nd = src.size(), dst.size()
    if ns == 0 or nd == 0:
        return ()
    cons = _hom_constraint(src, dst)
    k = (ratmat.kernel_basis(cons) if ratmat.shape(cons)[0]
         else ratmat.eye(ns * nd))
    out = []
    for c in range(ratmat.shape(k)[1]):
        v = tuple(k[r][c] for r in range(nd * ns))
        out.append(chq_map(src, dst, _unvec(v, nd, ns)))
    return tuple(out)


def _vec(matrix, rows, cols):
    """Column-major vectorization as a single tuple."""
    if rows == 0 or cols == 0:
        return ()
    return tuple(matrix[i][j] for j in range(cols) for i in range(rows))


def _unvec(v, rows, cols):
    return tuple(tuple(v[j * rows + i] for j in range(cols))
                 for i in range(rows))


def find_lift(i, p, f, g):
    """A lift in the square (f: A->X, g: B->Y) against i: A->B, p: X->Y.

    Returns h: B -> X with i.then(h) == f and h.then(p) == g, or None.
    """
    if not (i.then(g) == f.then(p)):
        raise ValueError("the square does not commute")
    a, b, x, y = i.src, i.dst, p.src, p.dst
    if i.backend == "finset":
        nb, nx = len(b.labels), len(x.labels)
        forced = {}
        for ia in range(len(a.labels)):
            jb = i.mapping[ia]
            if jb in forced and forced[jb] != f.mapping[ia]:
                return None
            forced[jb] = f.mapping[ia]
        slots = []
        for jb in range(nb):
            if jb in forced:
                cand = [forced[jb]]
            else:
                cand = [jx for jx in range(nx)
                        if p.mapping[jx] == g.mapping[jb]]
            if not cand:
                return None
            slots.append(cand)
        for choice in itertools.product(*slots):
            h = MMorphism("finset", b, x, mapping=choice)
            if i.then(h) == f and h.then(p) == g:
                return h
        return None
    nb, nx, na, ny = b.size(), x.size(), a.size(), y.size()
    if nb == 0 or nx == 0:
        h = zero_map(b, x)
        if i.then(h) == f and h.then(p) == g:
            return h
        return None
    hom = _hom_constraint(b, x)
    blocks = [hom]
    target = [ZERO] * ratmat.shape(hom)[0]
    if na:
        blocks.append(ratmat.kron(ratmat.transpose(i.matrix), ratmat.eye(nx)))
        target.extend(_vec(f.matrix, nx, na))
    if ny:
        blocks.append(ratmat.kron(ratmat.eye(nb), p.matrix))
        target.extend(_vec(g.matrix, ny, nb))
    big = ratmat.vstack(blocks)
    if not big:
        sol = (ZERO,) * (nx * nb)
    else:
        sol = ratmat.solve_vec(big, tuple(target))
    if sol is None:
        return None
    hm = _unvec(sol, nx, nb)
    h = make_map(b, x, hm)
    if i.then(h) == f and h.then(p) == g:
        return h
    return None


def has_rlp(i, p):
    """Whether p has the right lifting property against i, over all squares.

    finset: exhaustive over all commuting squares (desk scale). vectq/chq:
    exact rank condition on the space of (chain) maps. For an explicit
    witness lift on a concrete square use find_lift.
    """
    if i.backend != p.backend:
        raise ValueError("backend mismatch")
    a, b, x, y = i.src, i.dst, p.src, p.dst
    if i.backend == "finset":
        for f in enumerate_maps(a, x):
            for g in enumerate_maps(b, y):
                if i.then(g) == f.then(p):
                    if find_lift(i, p, f, g) is None:
                        return False
        return True
    na, nb, nx, ny = a.size(), b.size(), x.size(), y.size()

    def hom_basis(s, d):
        constraints = _hom_constraint(s, d)
        if s.size() == 0 or d.size() == 0:
            return ratmat.zeros(0, 0)
        if ratmat.shape(constraints)[0] == 0:
            return ratmat.eye(s.size() * d.size())
        return ratmat.kernel_basis(constraints)

    k_bx = hom_basis(b, x)
    k_ax = hom_basis(a, x)
    k_by = hom_basis(b, y)
    dim_ax = na * nx
    dim_by = nb * ny
    # the space of commuting squares: pairs (F, G) with p.F = G.i
    nax = ratmat.shape(k_ax)[1] if dim_ax else 0
    nby = ratmat.shape(k_by)[1] if dim_by else 0
    if nax + nby == 0:
        return True
    cols = []
    for c in range(nax):
        fv = tuple(k_ax[r][c] for r in range(dim_ax))
        fm = _unvec(fv, nx, na)
        pf = ratmat.matmul(p.matrix, fm) if nx and ny and na else ratmat.zeros(ny, na)
        cols.append(_vec(pf, ny, na) if ny and na else ())
    left = (tuple(tuple(col[r] for col in cols) for r in range(ny * na))
            if ny * na else ratmat.zeros(0, nax))
    cols = []
    for c in range(nby):
        gv = tuple(k_by[r][c] for r in range(dim_by))
        gm = _unvec(gv, ny, nb)
        gi = ratmat.matmul(gm, i.matrix) if ny and nb and na else ratmat.zeros(ny, na)
        cols.append(_vec(gi, ny, na) if ny and na else ())
    right = (tuple(tuple(col[r] for col in cols) for r in range(ny * na))
             if ny * na else ratmat.zeros(0, nby))
    if ny * na:
        square_rel = ratmat.hstack([left, ratmat.mneg(right)])
        squares = ratmat.kernel_basis(square_rel)
    else:
        squares = ratmat.eye(nax + nby)
    # the map sending a lift K to its boundary square (K.i, p.K), expressed
    # in the same parametrized coordinates
    nk = ratmat.shape(k_bx)[1] if nb * nx else 0
    tcols = []
    for c in range(nk):
        kv = tuple(k_bx[r][c] for r in range(nb * nx))
        km = _unvec(kv, nx, nb)
        ki = ratmat.matmul(km, i.matrix) if na else ratmat.zeros(nx, 0)
        pk = ratmat.matmul(p.matrix, km) if ny else ratmat.zeros(0, nb)
        fv = _vec(ki, nx, na)
        gv = _vec(pk, ny, nb)
        fc = ratmat.solve_vec(k_ax, fv) if dim_ax else ()
        gc = ratmat.solve_vec(k_by, gv) if dim_by else ()
        tcols.append(tuple(fc) + tuple(gc))
    t = (tuple(tuple(col[r] for col in tcols) for r in range(nax + nby))
         if tcols else ratmat.zeros(nax + nby, 0))
    rank_t = ratmat.rank(t) if tcols else 0
    both = ratmat.hstack([t, squares]) if tcols else squares
    return ratmat.rank(both) == rank_t
