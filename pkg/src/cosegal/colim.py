"""Finite colimits and limits in the three base categories.

Everything returns canonical representatives so that repeated runs on the
same input produce identical objects: coproducts keep the argument order,
finset quotients pick the least representative of each class, vectq/chq
quotients use the canonical rref cokernel from ratmat.

Induced maps out of a quotient are built through a linear (or pointwise)
section and then checked against the cocone; if the given data does not
descend, that check fails loudly rather than returning garbage.
"""

from dataclasses import dataclass

from . import ratmat
from .ratmat import ZERO, ONE
from .base import (
    MObject, MMorphism, chq_map, chq_obj, empty, identity, invert,
    is_identity, is_isomorphism, make_map, vectq_map, vectq_obj,
    _suffix_label,
)


# ---------------------------------------------------------------------------
# coproducts


def coproduct(objs, backend=None):
    """The coproduct with its injections.

    finset labels get collapsed to a single fresh atom per element (the old
    atoms joined with "," plus a summand counter) so nested coproducts and
    tensors cannot collide.
    """
    objs = list(objs)
    if backend is None:
        backend = objs[0].backend
    if backend == "finset":
        labels = []
        offsets = []
        for i, o in enumerate(objs):
            offsets.append(len(labels))
            labels.extend(_suffix_label(l, i) for l in o.labels)
        cop = MObject("finset", labels=tuple(labels))
        injs = [
            MMorphism("finset", o, cop,
                      mapping=tuple(range(off, off + len(o.labels))))
            for o, off in zip(objs, offsets)]
        return cop, injs
    if backend == "vectq":
        total = sum(o.dim for o in objs)
        cop = vectq_obj(total)
        injs = []
        off = 0
        for o in objs:
            m = [[ONE if j + off == i else ZERO for j in range(o.dim)]
                 for i in range(total)]
            injs.append(vectq_map(o, cop, m))
            off += o.dim
        return cop, injs
    degrees = tuple(d for o in objs for d in o.degrees)
    diff = ratmat.block_diag([o.diff for o in objs])
    cop = chq_obj(degrees, diff)
    total = len(degrees)
    injs = []
    off = 0
    for o in objs:
        n = len(o.degrees)
        m = [[ONE if j + off == i else ZERO for j in range(n)]
             for i in range(total)]
        injs.append(chq_map(o, cop, m))
        off += n
    return cop, injs


def copair(cop, maps, dst):
    """The map out of a coproduct assembled from maps out of the summands.

    `cop` must be the coproduct of the sources of `maps` in order.
    """
    backend = cop.backend
    if backend == "finset":
        mapping = tuple(i for f in maps for i in f.mapping)
        if len(mapping) != len(cop.labels):
            raise ValueError("copair does not cover the coproduct")
        return MMorphism("finset", cop, dst, mapping=mapping)
    blocks = [f.matrix if f.src.size() else ratmat.zeros(dst.size(), 0)
              for f in maps]
    if dst.size() == 0:
        matrix = ratmat.zeros(0, cop.size())
    elif cop.size() == 0:
        matrix = ratmat.zeros(dst.size(), 0)
    else:
        matrix = ratmat.hstack(blocks)
    if backend == "chq":
        return chq_map(cop, dst, matrix)
    return vectq_map(cop, dst, matrix)


# ---------------------------------------------------------------------------
# coequalizers and friends


@dataclass(frozen=True)
class Quotient:
    """A coequalizer (or any one-step quotient): obj and projection, plus a
    section payload used to induce maps out (finset: representative index
    per class; vectq/chq: a linear section matrix)."""

    obj: MObject
    proj: MMorphism
    section: tuple


def _dsu_classes(n, pairs):
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    reps = sorted({find(i) for i in range(n)})
    index = {r: k for k, r in enumerate(reps)}
    return tuple(index[find(i)] for i in range(n)), tuple(reps)


def quotient_finset(y, pairs):
    """The quotient of a finset object by generated identifications."""
    cls, reps = _dsu_classes(len(y.labels), pairs)
    obj = MObject("finset", labels=tuple(y.labels[r] for r in reps))
    proj = MMorphism("finset", y, obj, mapping=cls)
    return Quotient(obj, proj, reps)


def quotient_linear(y, rel_matrix):
    """The quotient of a vectq/chq object by the column space of rel_matrix."""
    k, p, s = ratmat.cokernel(rel_matrix if rel_matrix else
                              ratmat.zeros(y.size(), 0))
    if y.backend == "vectq":
        obj = vectq_obj(k)
        proj = vectq_map(y, obj, p)
        return Quotient(obj, proj, s)
    free = []
    for j in range(k):
        free.append(next(i for i in range(y.size()) if s[i][j] == 1))
    degrees = tuple(y.degrees[f] for f in free)
    if k == 0:
        return Quotient(empty("chq"), chq_map(y, empty("chq"), ()), s)
    if y.size():
        dq = ratmat.matmul(ratmat.matmul(p, y.diff), s)
    else:
        dq = ratmat.zeros(k, k)
    obj = chq_obj(degrees, dq)
    proj = chq_map(y, obj, p)
    return Quotient(obj, proj, s)


def coequalizer(f, g):
    """The coequalizer of a parallel pair f, g: X -> Y."""
    if f.src != g.src or f.dst != g.dst:
        raise ValueError("coequalizer needs a parallel pair")
    y = f.dst
    if f.backend == "finset":
        pairs = [(f.mapping[i], g.mapping[i])
                 for i in range(len(f.src.labels))]
        return quotient_finset(y, pairs)
    if f.src.size() == 0 or y.size() == 0:
        rel = ratmat.zeros(y.size(), 0)
    else:
        rel = ratmat.msub(f.matrix, g.matrix)
    return quotient_linear(y, rel)


def quotient_induced(q, h):
    """The map out of a quotient determined by h on the covered object.

    Verifies that h actually descends; raises ValueError otherwise.
    """
    if q.proj.backend == "finset":
        ind = MMorphism("finset", q.obj, h.dst,
                        mapping=tuple(h.mapping[r] for r in q.section))
    else:
        if q.obj.size() == 0:
            ind = MMorphism(h.backend, q.obj, h.dst,
                            matrix=ratmat.zeros(h.dst.size(), 0))
        elif h.dst.size() == 0:
            ind = MMorphism(h.backend, q.obj, h.dst, matrix=())
        else:
            ind = make_map(q.obj, h.dst, ratmat.matmul(h.matrix, q.section))
    if q.proj.then(ind) != h:
        raise ValueError("map does not descend to the quotient")
    return ind


# ---------------------------------------------------------------------------
# pushouts


@dataclass(frozen=True)
class Pushout:
    obj: MObject
    left: MMorphism   # from f.dst
    right: MMorphism  # from g.dst
    _cop: MObject
    _injs: tuple
    _q: Quotient


def pushout(f, g):
    """The pushout of f: A -> B and g: A -> C, with both legs."""
    if f.src != g.src:
        raise ValueError("pushout needs a common source")
    cop, injs = coproduct([f.dst, g.dst], backend=f.backend)
    q = coequalizer(f.then(injs[0]), g.then(injs[1]))
    return Pushout(q.obj, injs[0].then(q.proj), injs[1].then(q.proj),
                   cop, tuple(injs), q)


def pushout_induced(po, u, v):
    """The universal map out of a pushout given a commuting cone (u, v)."""
    h = copair(po._cop, [u, v], u.dst)
    return quotient_induced(po._q, h)


@dataclass(frozen=True)
class WidePushout:
    obj: MObject
    maps: tuple        # one leg from each target D_i
    through: MMorphism  # the common composite from the base
    _cop: MObject
    _q: Quotient


def wide_pushout(base, legs):
    """The wide pushout of a family of maps out of one object.

    Zero legs return the base itself; one leg returns its target. Both come
    with the same interface as the general case.
    """
    legs = list(legs)
    for leg in legs:
        if leg.src != base:
            raise ValueError("wide pushout legs must share their source")
    if not legs:
        return WidePushout(base, (), identity(base), None, None)
    if len(legs) == 1:
        return WidePushout(legs[0].dst, (identity(legs[0].dst),), legs[0],
                           None, None)
    cop, injs = coproduct([leg.dst for leg in legs], backend=base.backend)
    n = len(legs)
    rel_src, rel_injs = coproduct([base] * (n - 1), backend=base.backend)
    lmap = copair(rel_src, [legs[0].then(injs[0])] * (n - 1), cop)
    rmap = copair(rel_src, [legs[i].then(injs[i]) for i in range(1, n)], cop)
    q = coequalizer(lmap, rmap)
    maps = tuple(inj.then(q.proj) for inj in injs)
    return WidePushout(q.obj, maps, legs[0].then(maps[0]), cop, q)


def wide_pushout_induced(wp, cone, through=None):
    """The universal map from a wide pushout to a cone.

    `cone` lists one map per leg target; for the zero-leg case pass the
    map out of the base as `through`.
    """
    cone = list(cone)
    if not cone:
        if through is None:
            raise ValueError("empty wide pushout needs the base cone map")
        return through
    if len(cone) == 1:
        return cone[0]
    h = copair(wp._cop, cone, cone[0].dst)
    return quotient_induced(wp._q, h)


# ---------------------------------------------------------------------------
# general finite diagrams


@dataclass(frozen=True)
class Colimit:
    obj: MObject
    cocone: dict
    _cop: MObject
    _injs: dict
    _q: Quotient


def _identity_connected(keys, edges):
    if len(keys) <= 1:
        return True
    keyset = set(keys)
    adj = {k: set() for k in keys}
    for a, b, m in edges:
        if a in keyset and b in keyset:
            if not is_identity(m):
                return False
            adj[a].add(b)
            adj[b].add(a)
    seen = {keys[0]}
    stack = [keys[0]]
    while stack:
        k = stack.pop()
        for nxt in adj[k]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == len(keys)


def colimit(nodes, edges, source_key=None):
    """The colimit of a finite diagram.

    nodes: {key: MObject}; edges: [(src_key, dst_key, MMorphism)].

    When `source_key` names a node with no incoming edges whose outgoing
    edges are all one common map, and every other node carries one common
    value with identity edges connecting them all, the colimit is taken to
    be that common value on the nose (cocone: the common map at the source,
    identities elsewhere). This keeps strict inputs strict; the general
    presentation is used otherwise.
    """
    keys = sorted(nodes)
    for a, b, m in edges:
        if m.src != nodes[a] or m.dst != nodes[b]:
            raise ValueError("edge %r -> %r does not match its nodes" % (a, b))
    if source_key is not None and source_key in nodes:
        rest = [k for k in keys if k != source_key]
        out_maps = [m for a, b, m in edges if a == source_key]
        into_source = [1 for a, b, m in edges if b == source_key]
        rest_vals = {nodes[k] for k in rest}
        rest_edges = [(a, b, m) for a, b, m in edges
                      if a != source_key and b != source_key]
        if (rest and not into_source and len(rest_vals) == 1
                and out_maps and all(m == out_maps[0] for m in out_maps)
                and all(b != source_key for _, b, _ in edges)
                and _identity_connected(rest, rest_edges)):
            w = nodes[rest[0]]
            cocone = {k: identity(w) for k in rest}
            cocone[source_key] = out_maps[0]
            return Colimit(w, cocone, None, None, None)
    backend = nodes[keys[0]].backend
    cop, injs = coproduct([nodes[k] for k in keys], backend=backend)
    inj_by_key = dict(zip(keys, injs))
    if edges:
        rel_src, _ = coproduct([nodes[a] for a, _, _ in edges],
                               backend=backend)
        lmap = copair(rel_src, [inj_by_key[a] for a, _, _ in edges], cop)
        rmap = copair(rel_src, [m.then(inj_by_key[b]) for _, b, m in edges],
                      cop)
        q = coequalizer(lmap, rmap)
    else:
        zero_rel = (ratmat.zeros(cop.size(), 0) if backend != "finset"
                    else None)
        if backend == "finset":
            q = quotient_finset(cop, [])
        else:
            q = quotient_linear(cop, zero_rel)
    cocone = {k: inj_by_key[k].then(q.proj) for k in keys}
    return Colimit(q.obj, cocone, cop, inj_by_key, q)


def colimit_induced(col, cone):
    """The universal map out of a colimit; cone is {key: map to Z}."""
    keys = sorted(col.cocone)
    dst = cone[keys[0]].dst
    if col._q is None:
        rest = [k for k in keys
                if col.cocone[k].src == col.cocone[k].dst
                and col.cocone[k] == identity(col.obj)]
        ind = cone[rest[0]]
    else:
        h = copair(col._cop, [cone[k] for k in keys], dst)
        ind = quotient_induced(col._q, h)
    for k in keys:
        if col.cocone[k].then(ind) != cone[k]:
            raise ValueError("cone is not compatible at node %r" % (k,))
    return ind


# ---------------------------------------------------------------------------
# equalizers (the one limit the package needs)


def equalizer(f, g):
    """The equalizer of f, g: X -> Y as (object, inclusion)."""
    if f.src != g.src or f.dst != g.dst:
        raise ValueError("equalizer needs a parallel pair")
    x = f.src
    if f.backend == "finset":
        keep = [i for i in range(len(x.labels))
                if f.mapping[i] == g.mapping[i]]
        obj = MObject("finset", labels=tuple(x.labels[i] for i in keep))
        return obj, MMorphism("finset", obj, x, mapping=tuple(keep))
    if f.dst.size() == 0 or x.size() == 0:
        if x.size() == 0:
            obj = empty(f.backend)
            return obj, MMorphism(f.backend, obj, x,
                                  matrix=ratmat.zeros(x.size(), 0))
        return x, identity(x)
    k, free = ratmat.kernel_data(ratmat.msub(f.matrix, g.matrix))
    dim = len(free)
    if f.backend == "vectq":
        obj = vectq_obj(dim)
        if dim == 0:
            return obj, MMorphism("vectq", obj, x,
                                  matrix=ratmat.zeros(x.size(), 0))
        return obj, vectq_map(obj, x, k)
    degrees = tuple(x.degrees[i] for i in free)
    if dim == 0:
        obj = empty("chq")
        return obj, MMorphism("chq", obj, x, matrix=ratmat.zeros(x.size(), 0))
    dsub = ratmat.solve_matrix(k, ratmat.matmul(x.diff, k))
    if dsub is None:
        raise ValueError("equalizer is not a subcomplex")
    obj = chq_obj(degrees, dsub)
    return obj, chq_map(obj, x, k)


# ---------------------------------------------------------------------------
# interleaved sequences and the coproduct/pushout exchange


class StabilizationError(RuntimeError):
    pass


def stabilization_index(maps):
    """The least index from which every listed map is an isomorphism."""
    idx = len(maps)
    for i in range(len(maps) - 1, -1, -1):
        if is_isomorphism(maps[i]):
            idx = i
        else:
            break
    if idx == len(maps):
        raise StabilizationError("sequence does not stabilize in range")
    return idx


def compare_interleaved_colimits(etas, epsilons, downs, ups):
    """Check that two interleaved sequences share their colimit.

    Data: etas[i]: A_i -> A_{i+1}, epsilons[i]: B_i -> B_{i+1},
    downs[i]: A_i -> B_i (one per object of A), ups[i]: B_i -> A_{i+1},
    subject to downs[i].then(ups[i]) == etas[i] and
    ups[i].then(downs[i+1]) == epsilons[i].

    Both sequences must become isomorphisms inside the given window; the
    returned report carries the stabilization indices and the mutually
    inverse comparison maps between the stable values.
    """
    n = len(etas)
    if len(epsilons) != n or len(downs) != n + 1 or len(ups) != n:
        raise ValueError("interleaving data has mismatched lengths")
    for i in range(n):
        if downs[i].then(ups[i]) != etas[i]:
            raise ValueError("interleaving fails over eta at %d" % i)
        if ups[i].then(downs[i + 1]) != epsilons[i]:
            raise ValueError("interleaving fails under epsilon at %d" % i)
    m = max(stabilization_index(etas), stabilization_index(epsilons))
    u = downs[m]
    v = ups[m].then(invert(etas[m]))
    ok_vu = u.then(v) == identity(u.src)
    ok_uv = v.then(u) == identity(u.dst)
    return {
        "stable-index": m,
        "forward": u,
        "backward": v,
        "mutually-inverse": ok_vu and ok_uv,
    }


def compare_coproduct_pushout(base, items):
    """Compare gluing a family all at once against gluing leg by leg.

    items: [(p_i: A_i -> C_i, h_i: A_i -> B)]. Route one pushes out the
    coproduct of the p_i along the combined attachment; route two forms
    each pushout D_i separately and takes the wide pushout of B -> D_i.
    Returns the two objects with explicit mutually inverse comparison maps.
    """
    backend = base.backend
    ps = [p for p, _ in items]
    hs = [h for _, h in items]
    for p, h in items:
        if p.src != h.src or h.dst != base:
            raise ValueError("family legs do not match the base")
    cop_a, inj_a = coproduct([p.src for p in ps], backend=backend)
    cop_c, inj_c = coproduct([p.dst for p in ps], backend=backend)
    big_p = copair(cop_a, [p.then(ic) for p, ic in zip(ps, inj_c)], cop_c)
    big_h = copair(cop_a, hs, base)
    route_one = pushout(big_p, big_h)
    # route_one.left: cop_c -> E, route_one.right: B -> E
    pos = [pushout(p, h) for p, h in items]
    route_two = wide_pushout(base, [po.right for po in pos])
    # E -> wide pushout: send each C_i through its own pushout leg, B along
    # the common anchor
    cone_c = copair(cop_c,
                    [po.left.then(m) for po, m in zip(pos, route_two.maps)],
                    route_two.obj)
    u = pushout_induced(route_one, cone_c, route_two.through)
    # wide pushout -> E: each D_i maps in via its universal property
    cone_d = [pushout_induced(po, inj_c[i].then(route_one.left),
                              route_one.right)
              for i, po in enumerate(pos)]
    v = wide_pushout_induced(route_two, cone_d, through=route_one.right)
    ok = (u.then(v) == identity(route_one.obj)
          and v.then(u) == identity(route_two.obj))
    return {
        "all-at-once": route_one.obj,
        "leg-by-leg": route_two.obj,
        "forward": u,
        "backward": v,
        "mutually-inverse": ok,
    }
