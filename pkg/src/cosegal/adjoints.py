"""Free constructions on chain diagrams and the unit-forcing machinery.

The central objects here:

* KObject: a bare functor on chains (values plus structure maps against
  deletions), no laxity. The left adjoint `gamma` freely adds laxity.
* `point` freely adds unit points: the value at a chain becomes a sum
  over decompositions into carrier parts and unit parts.
* `unitalize` quotients a pointed precategory until the unit laws hold,
  by gluing one universal gadget per violated constraint and iterating.
* `realize` collapses each endpoint component to its colimit and solves
  for the induced composition.
* `psi` packages an arrow of the backend into a free unital precategory
  concentrated over one chain; it is the engine behind the lifting-set
  calculus.
* `pushforward` / `pullback` move precategories along a map of letter
  sets.

Everything is exact: each colimit is a finite presentation handed to the
backend, and every induced map is produced by descent through an explicit
quotient, which re-verifies the defining relations as it goes.
"""

import itertools
from dataclasses import dataclass

from . import shapes
from .base import (
    MMorphism, _hom_constraint, empty, identity, invert, is_isomorphism,
    is_surjective, left_unitor, make_map, tensor, tensor_mor,
    tensor_mor_multi, tensor_multi, unit,
)
from .colim import (
    colimit, colimit_induced, coequalizer, copair, coproduct,
    quotient_finset, quotient_induced, quotient_linear, wide_pushout,
    wide_pushout_induced,
)
from .precat import (
    PrecatMorphism, StrictCategory, check_unital, expected_laxity_keys,
    identity_morphism, make_precategory, unit_constraint_maps,
)
from . import ratmat
from .ratmat import ZERO


# ---------------------------------------------------------------------------
# sums with a literal single-summand convention


def _sum_objects(backend, items):
    """Coproduct whose one-summand case is the summand itself.

    Keeps degree-1 slots of the free constructions literally equal to
    their inputs instead of relabeled copies.
    """
    items = list(items)
    if len(items) == 1:
        return items[0], [identity(items[0])]
    obj, injs = coproduct(items, backend)
    return obj, list(injs)


def _assemble(sum_obj, comps, dst, backend):
    """The map out of a `_sum_objects` sum given one map per summand."""
    if len(comps) == 1:
        return comps[0]
    if not comps:
        return copair(sum_obj, [], dst)
    return copair(sum_obj, comps, dst)


def _pair_assemble(backend, left, right, targets, dst):
    """A map out of a tensor of two sums, one component per summand pair.

    left/right are (sum object, injections, sources) triples; targets maps
    a pair (i, j) of summand indices to the component map out of
    sources_left[i] (x) sources_right[j]. The distribution isomorphism is
    computed explicitly and inverted, so the result is a genuine morphism
    out of the tensor of the two sum objects.
    """
    lobj, linjs, lsrcs = left
    robj, rinjs, rsrcs = right
    pair_srcs = [tensor(a, b) for a in lsrcs for b in rsrcs]
    cop, _ = _sum_objects(backend, pair_srcs)
    spread = [tensor_mor(li, rj) for li in linjs for rj in rinjs]
    t_iso = _assemble(cop, spread, tensor(lobj, robj), backend)
    if not is_isomorphism(t_iso):
        raise AssertionError("tensor distribution failed to be invertible")
    comps = [targets[(i, j)] for i in range(len(lsrcs))
             for j in range(len(rsrcs))]
    return invert(t_iso).then(_assemble(cop, comps, dst, backend))


# ---------------------------------------------------------------------------
# bare chain diagrams


@dataclass
class KObject:
    """Values on every chain plus structure maps against deletions.

    The shape of a precategory with the laxity forgotten; `gamma` is its
    left adjoint back."""

    backend: str
    letters: tuple
    truncation: int
    values: dict
    maps: dict  # (chain, inner position) -> map into that chain's value

    def value(self, s):
        return self.values[s]

    def gen_map(self, s, p):
        return self.maps[(s, p)]

    def structure(self, d):
        out = identity(self.values[d.dst])
        for step in reversed(shapes.del_singles(d)):
            out = out.then(self.maps[(step.src, step.deleted()[0])])
        return out


def make_kobject(backend, letters, truncation, values, maps):
    letters = tuple(sorted(letters))
    need = set(shapes.all_chains(letters, truncation))
    if set(values) != need:
        raise ValueError("values must cover every chain once")
    return KObject(backend, letters, truncation, dict(values), dict(maps))


def validate_kobject(k, strict=False):
    errors = []
    for s in k.values:
        for p in range(1, len(s) - 1):
            m = k.maps.get((s, p))
            t = shapes.delete(s, p)
            if m is None:
                errors.append("missing structure map at %r, %d" % (s, p))
            elif m.src != k.values[t] or m.dst != k.values[s]:
                errors.append("structure map at %r, %d has wrong ends"
                              % (s, p))
    if not errors:
        for s in k.values:
            n = len(s)
            for p in range(1, n - 1):
                for q in range(p + 1, n - 1):
                    a = k.gen_map(shapes.delete(s, q), p).then(
                        k.gen_map(s, q))
                    b = k.gen_map(shapes.delete(s, p), q - 1).then(
                        k.gen_map(s, p))
                    if a != b:
                        errors.append(
                            "structure maps break the simplicial identity "
                            "at %r positions %d, %d" % (s, p, q))
    if strict and errors:
        raise ValueError("; ".join(errors))
    return errors


@dataclass
class KMorphism:
    src: KObject
    dst: KObject
    components: dict

    def at(self, s):
        return self.components[s]

    def then(self, other):
        return KMorphism(self.src, other.dst, {
            s: self.components[s].then(other.components[s])
            for s in self.components})


def validate_kmorphism(phi, strict=False):
    errors = []
    for s in phi.src.values:
        c = phi.components.get(s)
        if c is None or c.src != phi.src.values[s] \
                or c.dst != phi.dst.values[s]:
            errors.append("component at %r missing or mis-typed" % (s,))
    if not errors:
        for (s, p), m in phi.src.maps.items():
            t = shapes.delete(s, p)
            if phi.at(t).then(phi.dst.gen_map(s, p)) != m.then(phi.at(s)):
                errors.append("not natural at %r, %d" % (s, p))
    if strict and errors:
        raise ValueError("; ".join(errors))
    return errors


# ---------------------------------------------------------------------------
# gamma: free laxity


def gamma_keys(z):
    """Summand keys of the free value at z: the chain itself, then every
    subdivision into composable parts, in canonical order."""
    keys = [("whole", ())]
    for cuts, _ in shapes.subdivisions(z):
        keys.append(("sub", cuts))
    return keys


def _gamma_src(k, z, key):
    kind, cuts = key
    if kind == "whole":
        return k.value(z)
    return tensor_multi([k.value(p) for p in shapes.parts_of(z, cuts)],
                        k.backend)


def _gamma_sum(k, z):
    keys = gamma_keys(z)
    srcs = [_gamma_src(k, z, key) for key in keys]
    obj, injs = _sum_objects(k.backend, srcs)
    return obj, injs, srcs, keys


def gamma(k):
    """The free precategory on a bare chain diagram.

    Values collect the diagram's value together with one tensor block per
    subdivision; laxity maps are the block injections; structure maps
    reinsert the deleted letter into the one part that absorbs it. The
    degree-1 slots are the input's objects on the nose.
    """
    backend = k.backend
    values = {}
    sums = {}
    for z in k.values:
        obj, injs, srcs, keys = _gamma_sum(k, z)
        values[z] = obj
        sums[z] = (obj, injs, srcs, keys)
    maps = {}
    for z in k.values:
        obj, injs, srcs, keys = sums[z]
        pos = {key: i for i, key in enumerate(keys)}
        for p in range(1, len(z) - 1):
            zp = shapes.delete(z, p)
            sobj, sinjs, ssrcs, skeys = sums[zp]
            comps = []
            for key in skeys:
                kind, cuts = key
                if kind == "whole":
                    comps.append(k.gen_map(z, p).then(
                        injs[pos[("whole", ())]]))
                    continue
                big_cuts, j, rel = shapes.reinsert(z, cuts, p)
                parts = shapes.parts_of(z, big_cuts)
                factors = [identity(k.value(q)) for q in parts]
                factors[j] = k.gen_map(parts[j], rel)
                comps.append(tensor_mor_multi(factors, backend).then(
                    injs[pos[("sub", big_cuts)]]))
            maps[(z, p)] = _assemble(sobj, comps, obj, backend)
    laxity = {}
    chainset = set(k.values)
    for s in k.values:
        for t in k.values:
            if s[-1] != t[0]:
                continue
            st = shapes.concat(s, t)
            if shapes.degree(st) > k.truncation or st not in chainset:
                continue
            tobj, tinjs, _, tkeys = sums[st]
            tpos = {key: i for i, key in enumerate(tkeys)}
            sobj, sinjs, ssrcs, skeys = sums[s]
            uobj, uinjs, usrcs, ukeys = sums[t]
            shift = shapes.degree(s)
            targets = {}
            for i, ks in enumerate(skeys):
                cuts_s = ks[1] if ks[0] == "sub" else ()
                for j, kt in enumerate(ukeys):
                    cuts_t = kt[1] if kt[0] == "sub" else ()
                    cuts = cuts_s + (shift,) + tuple(
                        c + shift for c in cuts_t)
                    targets[(i, j)] = tinjs[tpos[("sub", cuts)]]
            laxity[(s, t)] = _pair_assemble(
                backend, (sobj, sinjs, ssrcs), (uobj, uinjs, usrcs),
                targets, tobj)
    return make_precategory(backend, k.letters, k.truncation, values, maps,
                            laxity)


def gamma_map(phi):
    """The action of gamma on a morphism of bare chain diagrams."""
    src = gamma(phi.src)
    dst = gamma(phi.dst)
    comps = {}
    for z in phi.src.values:
        sobj, _, _, skeys = _gamma_sum(phi.src, z)
        dobj, dinjs, _, dkeys = _gamma_sum(phi.dst, z)
        pos = {key: i for i, key in enumerate(dkeys)}
        legs = []
        for key in skeys:
            kind, cuts = key
            if kind == "whole":
                legs.append(phi.at(z).then(dinjs[pos[key]]))
            else:
                parts = shapes.parts_of(z, cuts)
                legs.append(tensor_mor_multi(
                    [phi.at(q) for q in parts], phi.src.backend).then(
                        dinjs[pos[key]]))
        comps[z] = _assemble(sobj, legs, dobj, phi.src.backend)
    return PrecatMorphism(src, dst, comps)


# ---------------------------------------------------------------------------
# point: free unit summands


def kobject_of(pc):
    """Forget the laxity (and units): the underlying bare chain diagram."""
    return KObject(pc.backend, pc.letters, pc.truncation, dict(pc.values),
                   dict(pc.maps))


def gamma_unit(k):
    """k -> forget(gamma(k)): the inclusion of the chain block."""
    g = gamma(k)
    comps = {}
    for z in k.values:
        _, injs, _, keys = _gamma_sum(k, z)
        comps[z] = injs[keys.index(("whole", ()))]
    return KMorphism(k, kobject_of(g), comps)


def gamma_counit(pc):
    """gamma(forget(pc)) -> pc: identity on the chain block, iterated
    laxity on each subdivision block."""
    k = kobject_of(pc)
    g = gamma(k)
    comps = {}
    for z in pc.chains:
        sobj, _, _, keys = _gamma_sum(k, z)
        legs = []
        for kind, cuts in keys:
            if kind == "whole":
                legs.append(identity(pc.value(z)))
            else:
                legs.append(pc.lax_multi(shapes.parts_of(z, cuts)))
        comps[z] = _assemble(sobj, legs, pc.value(z), pc.backend)
    return PrecatMorphism(g, pc, comps)


def point_keys(z):
    """Decomposition keys of the freely pointed value at z.

    A key is (cuts, labels): a subdivision of z together with a strictly
    alternating labeling of the parts as carrier ("f") or unit ("u");
    unit parts must have equal endpoints. Adjacent same-label parts never
    appear because the laxity merges them.
    """
    out = []
    candidates = [((), (z,))]
    candidates.extend(shapes.subdivisions(z))
    for cuts, parts in candidates:
        npart = len(parts)
        for start in ("f", "u"):
            labels = tuple(("f" if (i % 2 == 0) == (start == "f") else "u")
                           for i in range(npart))
            if all(p[0] == p[-1] for p, l in zip(parts, labels)
                   if l == "u"):
                out.append((cuts, labels))
    return out


def _point_src(pc, z, key):
    cuts, labels = key
    parts = shapes.parts_of(z, cuts)
    factors = [pc.value(p) if l == "f" else unit(pc.backend)
               for p, l in zip(parts, labels)]
    return tensor_multi(factors, pc.backend)


def _point_sum(pc, z):
    keys = point_keys(z)
    srcs = [_point_src(pc, z, key) for key in keys]
    obj, injs = _sum_objects(pc.backend, srcs)
    return obj, injs, srcs, keys


def point(pc):
    """Freely adjoin unit points to a precategory.

    The value at a chain is the sum over decompositions into carrier
    parts and equal-endpoint unit parts with strictly alternating labels;
    the carrier embeds as the one-part decomposition, diagonal values
    additionally gain a unit summand. Degree-1 slots with distinct
    endpoints are untouched on the nose.
    """
    if pc.is_pointed():
        raise ValueError("point expects an unpointed precategory")
    backend = pc.backend
    values = {}
    sums = {}
    for z in pc.chains:
        obj, injs, srcs, keys = _point_sum(pc, z)
        values[z] = obj
        sums[z] = (obj, injs, srcs, keys)
    maps = {}
    for z in pc.chains:
        obj, injs, srcs, keys = sums[z]
        pos = {key: i for i, key in enumerate(keys)}
        for p in range(1, len(z) - 1):
            zp = shapes.delete(z, p)
            sobj, _, _, skeys = sums[zp]
            comps = []
            for cuts, labels in skeys:
                big_cuts, j, rel = shapes.reinsert(z, cuts, p)
                parts = shapes.parts_of(z, big_cuts)
                factors = []
                for i, (q, l) in enumerate(zip(parts, labels)):
                    if l == "u":
                        factors.append(identity(unit(backend)))
                    elif i == j:
                        factors.append(pc.gen_map(q, rel))
                    else:
                        factors.append(identity(pc.value(q)))
                comps.append(tensor_mor_multi(factors, backend).then(
                    injs[pos[(big_cuts, labels)]]))
            maps[(z, p)] = _assemble(sobj, comps, obj, backend)
    laxity = {}
    chainset = set(pc.chains)
    for s in pc.chains:
        for t in pc.chains:
            if s[-1] != t[0]:
                continue
            st = shapes.concat(s, t)
            if shapes.degree(st) > pc.truncation or st not in chainset:
                continue
            tobj, tinjs, _, tkeys = sums[st]
            tpos = {key: i for i, key in enumerate(tkeys)}
            sobj, sinjs, ssrcs, skeys = sums[s]
            uobj, uinjs, usrcs, ukeys = sums[t]
            shift = shapes.degree(s)
            targets = {}
            for i, (cuts1, labels1) in enumerate(skeys):
                parts1 = shapes.parts_of(s, cuts1)
                for j, (cuts2, labels2) in enumerate(ukeys):
                    parts2 = shapes.parts_of(t, cuts2)
                    shifted = tuple(c + shift for c in cuts2)
                    if labels1[-1] != labels2[0]:
                        key = (cuts1 + (shift,) + shifted,
                               labels1 + labels2)
                        targets[(i, j)] = tinjs[tpos[key]]
                        continue
                    merged_cuts = cuts1 + shifted
                    merged_labels = labels1 + labels2[1:]
                    factors = []
                    for q, l in zip(parts1[:-1], labels1[:-1]):
                        factors.append(identity(
                            pc.value(q) if l == "f" else unit(backend)))
                    if labels1[-1] == "f":
                        factors.append(pc.lax(parts1[-1], parts2[0]))
                    else:
                        factors.append(left_unitor(unit(backend)))
                    for q, l in zip(parts2[1:], labels2[1:]):
                        factors.append(identity(
                            pc.value(q) if l == "f" else unit(backend)))
                    targets[(i, j)] = tensor_mor_multi(
                        factors, backend).then(
                            tinjs[tpos[(merged_cuts, merged_labels)]])
            laxity[(s, t)] = _pair_assemble(
                backend, (sobj, sinjs, ssrcs), (uobj, uinjs, usrcs),
                targets, tobj)
    units = {}
    for a in pc.letters:
        obj, injs, _, keys = sums[(a, a)]
        units[a] = injs[keys.index(((), ("u",)))]
    out = make_precategory(backend, pc.letters, pc.truncation, values,
                           maps, laxity, units=units)
    return out


def point_map(alpha):
    """The action of point on a morphism of unpointed precategories."""
    src = point(alpha.src)
    dst = point(alpha.dst)
    backend = alpha.src.backend
    comps = {}
    for z in alpha.src.chains:
        sobj, _, _, skeys = _point_sum(alpha.src, z)
        dobj, dinjs, _, dkeys = _point_sum(alpha.dst, z)
        pos = {key: i for i, key in enumerate(dkeys)}
        legs = []
        for cuts, labels in skeys:
            parts = shapes.parts_of(z, cuts)
            factors = [alpha.at(q) if l == "f" else identity(unit(backend))
                       for q, l in zip(parts, labels)]
            legs.append(tensor_mor_multi(factors, backend).then(
                dinjs[pos[(cuts, labels)]]))
        comps[z] = _assemble(sobj, legs, dobj, backend)
    return PrecatMorphism(src, dst, comps)


def point_carrier_inclusion(pc):
    """The inclusion of the carrier into its free pointing, one-part
    decompositions only."""
    dst = point(pc)
    comps = {}
    for z in pc.chains:
        _, injs, _, keys = _point_sum(pc, z)
        comps[z] = injs[keys.index(((), ("f",)))]
    return PrecatMorphism(pc, dst, comps)


# ---------------------------------------------------------------------------
# the one-chain universal gadget


def free_hom_kobject(letters, truncation, z0, m):
    """The bare chain diagram freely generated by m sitting at z0.

    The value at w is one copy of m per deletion w -> z0 (so chains that
    cannot reach z0, in particular everything outside the endpoint
    component of z0, carry the initial object), and structure maps act by
    composing deletion indices.
    """
    backend = m.backend
    letters = tuple(sorted(letters))
    values = {}
    homs = {}
    for w in shapes.all_chains(letters, truncation):
        ds = shapes.hom_set(w, z0)
        homs[w] = ds
        obj, injs = _sum_objects(backend, [m] * len(ds))
        values[w] = obj if ds else empty(backend)
    k = KObject(backend, letters, truncation, values, {})
    maps = {}
    for w in values:
        obj, injs = _sum_objects(backend, [m] * len(homs[w]))
        if not homs[w]:
            obj, injs = empty(backend), []
        for p in range(1, len(w) - 1):
            wp = shapes.delete(w, p)
            step = shapes.del_single(w, p)
            sobj, sinjs = _sum_objects(backend, [m] * len(homs[wp]))
            if not homs[wp]:
                sobj, sinjs = empty(backend), []
            comps = []
            for d in homs[wp]:
                comps.append(injs[homs[w].index(step.then(d))])
            maps[(w, p)] = _assemble(sobj, comps, values[w], backend)
    k.maps = maps
    return k


def free_hom_kmorphism(letters, truncation, z0, f):
    """The action of the free one-chain diagram on a map f: m -> m2."""
    src = free_hom_kobject(letters, truncation, z0, f.src)
    dst = free_hom_kobject(letters, truncation, z0, f.dst)
    backend = f.backend
    comps = {}
    for w in src.values:
        ds = shapes.hom_set(w, z0)
        sobj, _ = _sum_objects(backend, [f.src] * len(ds))
        dobj, dinjs = _sum_objects(backend, [f.dst] * len(ds))
        if not ds:
            comps[w] = identity(empty(backend))
            continue
        legs = [f.then(dinjs[i]) for i in range(len(ds))]
        comps[w] = _assemble(sobj, legs, dst.values[w], backend)
    return KMorphism(src, dst, comps)


def upsilon(letters, truncation, z0, m):
    """point(gamma(-)) of the free one-chain diagram: the representing
    object for maps m -> H(z0) into pointed precategories H."""
    return point(gamma(free_hom_kobject(letters, truncation, z0, m)))


def upsilon_map(letters, truncation, z0, f):
    return point_map(gamma_map(free_hom_kmorphism(letters, truncation,
                                                  z0, f)))


def upsilon_center_inclusion(letters, truncation, z0, m):
    """The canonical summand inclusion m -> upsilon(...)(z0): identity
    deletion index, no subdivision, one carrier part."""
    k = free_hom_kobject(letters, truncation, z0, m)
    ds = shapes.hom_set(z0, z0)
    _, kinjs = _sum_objects(m.backend, [m] * len(ds))
    into_k = kinjs[ds.index(shapes.del_identity(z0))]
    _, ginjs, _, gkeys = _gamma_sum(k, z0)
    into_gamma = ginjs[gkeys.index(("whole", ()))]
    g = gamma(k)
    _, pinjs, _, pkeys = _point_sum(g, z0)
    into_point = pinjs[pkeys.index(((), ("f",)))]
    return into_k.then(into_gamma).then(into_point)


def upsilon_transpose(h, z0, g):
    """The pointed morphism upsilon(..., g.src) -> h classified by
    g: m -> h(z0).

    Deletion indices go to h's structure maps, unit parts to derived
    units, and blocks merge through h's laxity.
    """
    if not h.is_pointed():
        raise ValueError("transpose needs a pointed target")
    backend = h.backend
    m = g.src
    k = free_hom_kobject(h.letters, h.truncation, z0, m)
    gk = gamma(k)
    ups = point(gk)

    def k_component(w):
        ds = shapes.hom_set(w, z0)
        sobj, _ = _sum_objects(backend, [m] * len(ds))
        if not ds:
            sobj = empty(backend)
        legs = [g.then(h.structure(d)) for d in ds]
        return _assemble(sobj, legs, h.value(w), backend)

    def gamma_component(w):
        sobj, _, _, keys = _gamma_sum(k, w)
        legs = []
        for kind, cuts in keys:
            if kind == "whole":
                legs.append(k_component(w))
                continue
            parts = shapes.parts_of(w, cuts)
            legs.append(tensor_mor_multi(
                [k_component(q) for q in parts], backend).then(
                    h.lax_multi(parts)))
        return _assemble(sobj, legs, h.value(w), backend)

    def derived_unit(part):
        a = part[0]
        return h.unit_map(a).then(h.structure(shapes.to_initial(part)))

    comps = {}
    for w in ups.chains:
        sobj, _, _, keys = _point_sum(gk, w)
        legs = []
        for cuts, labels in keys:
            parts = shapes.parts_of(w, cuts)
            factors = [gamma_component(q) if l == "f" else derived_unit(q)
                       for q, l in zip(parts, labels)]
            legs.append(tensor_mor_multi(factors, backend).then(
                h.lax_multi(parts)))
        comps[w] = _assemble(sobj, legs, h.value(w), backend)
    return PrecatMorphism(ups, h, comps)


# ---------------------------------------------------------------------------
# colimits of pointed precategories


@dataclass
class SliceRecord:
    """One degree-1 slice of a precategory colimit: the plain backend
    diagram that was solved, and what came out."""

    nodes: dict
    edges: list
    value: object
    cocone: dict


def precat_colimit(nodes, edges):
    """The colimit of a finite connected diagram of pointed precategories.

    Degree-1 slots are plain backend colimits of the slices. A higher
    slot is presented by one block per node value plus one block per
    two-part subdivision (the formal products of lower colimit values),
    with relations for the diagram's edges, for each node's laxity
    against the cocone, and for three-part reassociation. Structure maps
    descend through the quotients, which re-checks the relations.

    Returns (colimit precategory, {key: cocone morphism}, slice records).
    """
    keys = sorted(nodes)
    first = nodes[keys[0]]
    backend = first.backend
    chains = first.chains
    for key in keys:
        if nodes[key].chains != chains or not nodes[key].is_pointed():
            raise ValueError("nodes must be pointed with a common shape")
    values = {}
    lax = {}
    psi = {}
    gen = {}
    slices = {}
    pres = {}
    chainset = set(chains)

    def block_layout(z):
        blocks = [("node", key) for key in keys]
        for c in range(1, len(z) - 1):
            blocks.append(("pair", c))
        return blocks

    def block_obj(z, block):
        kind, which = block
        if kind == "node":
            return nodes[which].value(z)
        s, t = z[:which + 1], z[which:]
        return tensor(values[s], values[t])

    for z in sorted(chains, key=lambda s: (len(s), s)):
        if len(z) == 2:
            snodes = {key: nodes[key].value(z) for key in keys}
            sedges = [(a, b, m.at(z)) for a, b, m in edges]
            col = colimit(snodes, sedges)
            values[z] = col.obj
            for key in keys:
                psi[(key, z)] = col.cocone[key]
            slices[z] = SliceRecord(snodes, sedges, col.obj,
                                    dict(col.cocone))
            pres[z] = ("deg1", col)
            continue
        blocks = block_layout(z)
        bobjs = [block_obj(z, b) for b in blocks]
        cop, binjs = coproduct(bobjs, backend=backend)
        binj = dict(zip(blocks, binjs))
        rel = []
        for a, b, alpha in edges:
            rel.append((nodes[a].value(z), binj[("node", a)],
                        alpha.at(z).then(binj[("node", b)])))
        for key in keys:
            nd = nodes[key]
            for c in range(1, len(z) - 1):
                s, t = z[:c + 1], z[c:]
                src = tensor(nd.value(s), nd.value(t))
                rel.append((
                    src,
                    nd.lax(s, t).then(binj[("node", key)]),
                    tensor_mor(psi[(key, s)], psi[(key, t)]).then(
                        binj[("pair", c)])))
        for cuts in shapes.cut_tuples(z, 3):
            c1, c2 = cuts
            r, sm, t = z[:c1 + 1], z[c1:c2 + 1], z[c2:]
            src = tensor_multi([values[r], values[sm], values[t]], backend)
            rel.append((
                src,
                tensor_mor(lax[(r, sm)], identity(values[t])).then(
                    binj[("pair", c2)]),
                tensor_mor(identity(values[r]), lax[(sm, t)]).then(
                    binj[("pair", c1)])))
        rel_cop, _ = coproduct([s for s, _, _ in rel], backend=backend)
        fl = copair(rel_cop, [l for _, l, _ in rel], cop)
        fr = copair(rel_cop, [r for _, _, r in rel], cop)
        q = coequalizer(fl, fr)
        values[z] = q.obj
        for key in keys:
            psi[(key, z)] = binj[("node", key)].then(q.proj)
        for c in range(1, len(z) - 1):
            lax[(z[:c + 1], z[c:])] = binj[("pair", c)].then(q.proj)
        pres[z] = ("coeq", q, cop, blocks, binj)

    # structure maps, by descent through the source presentation
    for z in sorted(chains, key=lambda s: (len(s), s)):
        for p in range(1, len(z) - 1):
            zp = shapes.delete(z, p)
            kind = pres[zp][0]
            if kind == "deg1":
                col = pres[zp][1]
                cone = {key: nodes[key].gen_map(z, p).then(psi[(key, z)])
                        for key in keys}
                gen[(z, p)] = colimit_induced(col, cone)
                continue
            _, q, cop, blocks, binj = pres[zp]
            legs = []
            for block in blocks:
                bkind, which = block
                if bkind == "node":
                    legs.append(nodes[which].gen_map(z, p).then(
                        psi[(which, z)]))
                    continue
                big_cuts, j, rel_pos = shapes.reinsert(z, (which,), p)
                s, t = z[:big_cuts[0] + 1], z[big_cuts[0]:]
                if j == 0:
                    part_map = tensor_mor(gen[(s, rel_pos)],
                                          identity(values[t]))
                else:
                    part_map = tensor_mor(identity(values[s]),
                                          gen[(t, rel_pos)])
                legs.append(part_map.then(lax[(s, t)]))
            h = copair(cop, legs, values[z])
            gen[(z, p)] = quotient_induced(q, h)

    # remaining laxity keys all arise as pair blocks of their concat chain
    full_lax = {}
    for s in chains:
        for t in chains:
            if s[-1] != t[0]:
                continue
            st = shapes.concat(s, t)
            if shapes.degree(st) > first.truncation or st not in chainset:
                continue
            full_lax[(s, t)] = lax[(s, t)]
    units = {}
    for a in first.letters:
        cands = [nodes[key].unit_map(a).then(psi[(key, (a, a))])
                 for key in keys]
        if any(c != cands[0] for c in cands):
            raise AssertionError("unit points disagree across the diagram")
        units[a] = cands[0]
    out = make_precategory(backend, first.letters, first.truncation,
                           values, gen, full_lax, units=units)
    cocone = {key: PrecatMorphism(nodes[key], out,
                                  {z: psi[(key, z)] for z in chains})
              for key in keys}
    return out, cocone, slices


# ---------------------------------------------------------------------------
# unitalization


@dataclass
class RoundRecord:
    """Everything one round of unitalization did: which constraints were
    violated, the parallel pairs and their coequalizers, the summand
    inclusions of the new values, the round morphism, and the degree-1
    slice diagrams that were glued."""

    constraints: list
    pairs: list
    coeqs: list
    xis: list
    delta: object
    slices: dict


@dataclass
class UnitalizationTrace:
    stages: list
    rounds: list

    def stable_after(self):
        return len(self.rounds)

    def summary(self):
        return {
            "rounds": len(self.rounds),
            "constraints": [
                [list(map(str, c)) for c in r.constraints]
                for r in self.rounds],
            "sizes": [
                {".".join(s): stage.value(s).size() for s in stage.chains}
                for stage in self.stages],
        }


@dataclass
class UnitalizationResult:
    precat: object
    eta: object
    trace: object


class NonStabilizing(RuntimeError):
    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


def unitalize(pc, cap=64):
    """Force the unit laws of a pointed precategory by iterated gluing.

    Each round coequalizes every violated unit constraint in the slot
    where it lives, transports the result through the one-chain gadget,
    and glues all gadgets onto the precategory in a single simultaneous
    colimit. Rounds repeat until no constraint is violated; each
    effective round strictly shrinks some slot, so the loop terminates,
    but a configurable cap guards it anyway.
    """
    if not pc.is_pointed():
        raise ValueError("unitalize needs a pointed precategory")
    current = pc
    stages = [pc]
    rounds = []
    for _ in range(cap):
        bad = check_unital(current)
        if not bad:
            trace = UnitalizationTrace(stages, rounds)
            eta = identity_morphism(pc)
            for r in rounds:
                eta = eta.then(r.delta)
            return UnitalizationResult(current, eta, trace)
        nodes = {("center",): current}
        edges = []
        pairs = []
        coeqs = []
        for i, con in enumerate(bad):
            firstm, secondm = unit_constraint_maps(current, con)
            q = coequalizer(firstm, secondm)
            pairs.append((firstm, secondm))
            coeqs.append(q)
            z = con[4]
            apex = upsilon(current.letters, current.truncation, z,
                           current.value(z))
            gad = upsilon(current.letters, current.truncation, z, q.obj)
            uj = upsilon_map(current.letters, current.truncation, z,
                             q.proj)
            uj = PrecatMorphism(apex, gad, uj.components)
            ev = upsilon_transpose(current, z,
                                   identity(current.value(z)))
            ev = PrecatMorphism(apex, current, ev.components)
            nodes[("apex", i)] = apex
            nodes[("gad", i)] = gad
            edges.append((("apex", i), ("center",), ev))
            edges.append((("apex", i), ("gad", i), uj))
        new, cocone, slices = precat_colimit(nodes, edges)
        xis = []
        for i, con in enumerate(bad):
            z = con[4]
            incl = upsilon_center_inclusion(
                current.letters, current.truncation, z, coeqs[i].obj)
            xis.append(incl.then(cocone[("gad", i)].at(z)))
        delta = cocone[("center",)]
        rounds.append(RoundRecord(bad, pairs, coeqs, xis, delta, slices))
        stages.append(new)
        current = new
    trace = UnitalizationTrace(stages, rounds)
    raise NonStabilizing("unitalization did not stabilize within %d "
                         "rounds" % cap, trace)


def factor_through_unital(eta, psi):
    """Factor psi: F -> G through eta: F -> U when eta is a levelwise
    surjection, producing the unique bar: U -> G with eta.then(bar) ==
    psi.

    This is how morphisms out of a unitalization are induced: the round
    maps are all surjective, so the factorization exists exactly when
    psi kills what eta kills, and that is re-verified per slot.
    """
    comps = {}
    backend = eta.src.backend
    for s in eta.src.chains:
        e = eta.at(s)
        p = psi.at(s)
        if not is_surjective(e):
            raise ValueError("eta is not surjective at %r" % (s,))
        if backend == "finset":
            out = []
            for target in range(len(e.dst.labels)):
                pre = e.mapping.index(target)
                out.append(p.mapping[pre])
            bar = make_map(e.dst, p.dst, tuple(out))
        else:
            if p.dst.size() == 0 or e.dst.size() == 0:
                mat = ratmat.zeros(p.dst.size(), e.dst.size())
            else:
                sec = ratmat.solve_matrix(e.matrix,
                                          ratmat.eye(e.dst.size()))
                mat = ratmat.matmul(p.matrix, sec)
            bar = make_map(e.dst, p.dst, mat)
        if e.then(bar) != p:
            raise ValueError("map does not descend through the "
                             "unitalization at %r" % (s,))
        comps[s] = bar
    return PrecatMorphism(eta.dst, psi.dst, comps)


# ---------------------------------------------------------------------------
# realization


@dataclass
class Realization:
    """The endpoint-pair colimits of a precategory with the composition
    solved against the cocone, plus the comparison morphism."""

    backend: str
    truncation: int
    homs: dict
    comps: dict
    determined: dict
    idpoints: dict
    stable: dict
    constant: object
    eta: object
    category: object


def _solve_composition(pc, cols, a, b, c):
    backend = pc.backend
    hab = cols[(a, b)].obj
    hbc = cols[(b, c)].obj
    hac = cols[(a, c)].obj
    pairs = []
    for (s, t) in pc.laxity:
        if s[0] == a and s[-1] == b and t[-1] == c:
            pairs.append((s, t))
    if backend == "finset":
        size = hab.size() * hbc.size()
        table = [None] * size
        for (s, t) in pairs:
            ps = cols[(a, b)].cocone[s]
            pt = cols[(b, c)].cocone[t]
            rhs = pc.lax(s, t).then(
                cols[(a, c)].cocone[shapes.concat(s, t)])
            fs = pc.value(s).size()
            ft = pc.value(t).size()
            for i in range(fs):
                for j in range(ft):
                    q = ps.mapping[i] * hbc.size() + pt.mapping[j]
                    v = rhs.mapping[i * ft + j]
                    if table[q] is None:
                        table[q] = v
                    elif table[q] != v:
                        raise ValueError(
                            "composition is inconsistent at %r"
                            % ((a, b, c),))
        if any(v is None for v in table):
            return None, False
        m = MMorphism("finset", tensor(hab, hbc), hac,
                      mapping=tuple(table))
        return m, True
    nsrc = hab.size() * hbc.size()
    ndst = hac.size()
    lin = tensor(hab, hbc)
    if nsrc == 0 or ndst == 0:
        m = MMorphism(backend, lin, hac,
                      matrix=ratmat.zeros(ndst, nsrc))
        return m, True

    # unknowns: vec(m) column-major; each composable pair (s, t) of the
    # cocone contributes the block m @ (psi_s (x) psi_t) == psi_st . lax
    def vec(mat, r, cdim):
        return tuple(mat[i][j] for j in range(cdim) for i in range(r))

    rows = []
    rhs_vec = []
    for (s, t) in pairs:
        fs = pc.value(s).size()
        ft = pc.value(t).size()
        if fs * ft == 0:
            continue
        kst = tensor_mor(cols[(a, b)].cocone[s],
                         cols[(b, c)].cocone[t]).matrix
        rmat = pc.lax(s, t).then(
            cols[(a, c)].cocone[shapes.concat(s, t)]).matrix
        rows.append(ratmat.kron(ratmat.transpose(kst), ratmat.eye(ndst)))
        rhs_vec.extend(vec(rmat, ndst, fs * ft))
    if backend == "chq":
        hom_rows = _hom_constraint(lin, hac)
        if ratmat.shape(hom_rows)[0]:
            rows.append(hom_rows)
            rhs_vec.extend([ZERO] * ratmat.shape(hom_rows)[0])
    if not rows:
        return None, False
    system = ratmat.vstack(rows)
    sol = ratmat.solve_vec(system, tuple(rhs_vec))
    if sol is None:
        raise ValueError("composition is inconsistent at %r" % ((a, b, c),))
    if ratmat.rank(system) != ndst * nsrc:
        return None, False
    mat = tuple(tuple(sol[j * ndst + i] for j in range(nsrc))
                for i in range(ndst))
    return make_map(lin, hac, mat), True


def realize(pc):
    """Collapse every endpoint component to its colimit.

    Returns the hom objects, the solved composition (with a per-triple
    flag telling whether the truncated data pins it down uniquely), the
    comparison morphism eta into the constant precategory when the
    composition is total, and a stability flag per pair comparing
    against the one-step-lower truncation.
    """
    letters = pc.letters
    cols = {}
    stable = {}
    for a in letters:
        for b in letters:
            nodes = {s: pc.value(s) for s in pc.chains
                     if s[0] == a and s[-1] == b}
            edges = []
            for z in nodes:
                for p in range(1, len(z) - 1):
                    edges.append((shapes.delete(z, p), z,
                                  pc.gen_map(z, p)))
            if not nodes:
                continue
            col = colimit(nodes, edges, source_key=(a, b))
            cols[(a, b)] = col
            subnodes = {s: v for s, v in nodes.items()
                        if shapes.degree(s) <= pc.truncation - 1}
            if not subnodes:
                stable[(a, b)] = False
                continue
            subedges = [(u, v, m) for u, v, m in edges if v in subnodes]
            subcol = colimit(subnodes, subedges, source_key=(a, b))
            u = colimit_induced(subcol,
                                {s: col.cocone[s] for s in subnodes})
            stable[(a, b)] = is_isomorphism(u)
    homs = {key: cols[key].obj for key in cols}
    comps = {}
    determined = {}
    for a in letters:
        for b in letters:
            for c in letters:
                m, ok = _solve_composition(pc, cols, a, b, c)
                comps[(a, b, c)] = m
                determined[(a, b, c)] = ok
    idpoints = None
    if pc.is_pointed():
        idpoints = {a: pc.unit_map(a).then(cols[(a, a)].cocone[(a, a)])
                    for a in letters}
    constant = None
    eta = None
    category = None
    if all(determined.values()):
        values = {}
        for s in pc.chains:
            values[s] = homs[(s[0], s[-1])]
        maps = {(s, p): identity(values[s])
                for s in pc.chains for p in range(1, len(s) - 1)}
        laxity = {}
        constant = make_precategory(pc.backend, letters, pc.truncation,
                                    values, maps, laxity,
                                    units=idpoints)
        for (s, t) in expected_laxity_keys(constant):
            laxity[(s, t)] = comps[(s[0], s[-1], t[-1])]
        constant.laxity.update(laxity)
        eta = PrecatMorphism(pc, constant, {
            s: cols[(s[0], s[-1])].cocone[s] for s in pc.chains})
        if pc.is_pointed():
            category = StrictCategory(pc.backend, letters, dict(homs),
                                      dict(comps), dict(idpoints))
    return Realization(pc.backend, pc.truncation, homs, comps, determined,
                       idpoints, stable, constant, eta, category)


# ---------------------------------------------------------------------------
# arrows over one chain


def hom_extension_kobject(letters, truncation, z0, alpha):
    """The bare diagram of the arrow alpha: U -> V pushed over z0.

    At a chain w the value is the wide pushout of one copy of alpha per
    deletion w -> z0 under the single U; chains that cannot reach z0
    carry U itself, other endpoint components the initial object.
    Returns (KObject, {chain: WidePushout or None}).
    """
    backend = alpha.backend
    letters = tuple(sorted(letters))
    a0, b0 = shapes.endpoints(z0)
    values = {}
    wps = {}
    for w in shapes.all_chains(letters, truncation):
        if shapes.endpoints(w) != (a0, b0):
            values[w] = empty(backend)
            wps[w] = None
            continue
        ds = shapes.hom_set(w, z0)
        wp = wide_pushout(alpha.src, [alpha] * len(ds))
        values[w] = wp.obj
        wps[w] = wp
    maps = {}
    for w in values:
        for p in range(1, len(w) - 1):
            wp = shapes.delete(w, p)
            if wps[wp] is None:
                maps[(w, p)] = identity(empty(backend))
                continue
            step = shapes.del_single(w, p)
            ds_small = shapes.hom_set(wp, z0)
            ds_big = shapes.hom_set(w, z0)
            big = wps[w]
            cone = [big.maps[ds_big.index(step.then(d))]
                    for d in ds_small]
            maps[(w, p)] = wide_pushout_induced(
                wps[wp], cone, through=big.through)
    k = KObject(backend, letters, truncation, values, maps)
    return k, wps


def hom_extension_square(letters, truncation, z0, square, src_data,
                         dst_data):
    """The diagram morphism induced by a commuting square (u, v) between
    arrows alpha -> beta."""
    u, v = square
    ksrc, wsrc = src_data
    kdst, wdst = dst_data
    backend = u.backend
    comps = {}
    for w in ksrc.values:
        if wsrc[w] is None:
            comps[w] = identity(empty(backend))
            continue
        ds = shapes.hom_set(w, z0)
        cone = [v.then(wdst[w].maps[i]) for i in range(len(ds))]
        comps[w] = wide_pushout_induced(wsrc[w], cone,
                                        through=u.then(wdst[w].through))
    return KMorphism(ksrc, kdst, comps)


@dataclass
class PsiResult:
    precat: object
    eta: object
    pointed: object
    trace: object
    kobject: object
    wps: dict


def psi(z0, alpha, letters=None, truncation=None, cap=64):
    """The free unital precategory on an arrow sitting over one chain.

    Maps out of it into a unital pointed precategory H correspond to
    maps alpha -> H(u_{z0}) in the arrow category; `psi_transpose`
    realizes that correspondence and `psi_square` the functoriality.
    """
    if letters is None:
        letters = tuple(sorted(set(z0)))
    if truncation is None:
        truncation = shapes.degree(z0)
    k, wps = hom_extension_kobject(letters, truncation, z0, alpha)
    pointed = point(gamma(k))
    res = unitalize(pointed, cap=cap)
    return PsiResult(res.precat, res.eta, pointed, res.trace, k, wps)


def psi_square(z0, square, src_res, dst_res):
    """Functorial action of psi on a commuting square of arrows."""
    phi = hom_extension_square(
        src_res.pointed.letters, src_res.pointed.truncation, z0, square,
        (src_res.kobject, src_res.wps), (dst_res.kobject, dst_res.wps))
    raw = point_map(gamma_map(phi))
    raw = PrecatMorphism(src_res.pointed, dst_res.pointed, raw.components)
    return factor_through_unital(src_res.eta, raw.then(dst_res.eta))


def psi_inclusions(res, z0):
    """The canonical maps of the arrow into the free unital precategory:
    (source arrow end -> value at the endpoints, target end -> value at
    z0)."""
    ends = shapes.endpoints(z0)
    k, wps = res.kobject, res.wps
    gk = gamma(k)

    def chain_block(w, into_k):
        _, ginjs, _, gkeys = _gamma_sum(k, w)
        g = into_k.then(ginjs[gkeys.index(("whole", ()))])
        _, pinjs, _, pkeys = _point_sum(gk, w)
        return g.then(pinjs[pkeys.index(((), ("f",)))])

    inc_u = chain_block(ends, wps[ends].through)
    ds = shapes.hom_set(z0, z0)
    inc_v = chain_block(z0, wps[z0].maps[ds.index(shapes.del_identity(z0))])
    return (inc_u.then(res.eta.at(ends)), inc_v.then(res.eta.at(z0)))


def psi_restrict(res, z0, theta):
    """A morphism out of the free unital precategory, restricted to the
    commuting square it classifies."""
    inc_u, inc_v = psi_inclusions(res, z0)
    ends = shapes.endpoints(z0)
    return (inc_u.then(theta.at(ends)), inc_v.then(theta.at(z0)))


def psi_transpose(res, z0, h, square):
    """The morphism out of the free unital precategory classified by a
    commuting square (top, bottom) from the generating arrow to the
    cosegal arrow of h at z0: top into h at the endpoints, bottom into h
    at z0, with top . h(to initial) == alpha . bottom."""
    top, bottom = square
    if not h.is_pointed():
        raise ValueError("transpose needs a pointed target")
    backend = h.backend
    k, wps = res.kobject, res.wps
    gk = gamma(k)

    def k_component(w):
        if wps[w] is None:
            return copair(empty(backend), [], h.value(w))
        ds = shapes.hom_set(w, z0)
        cone = [bottom.then(h.structure(d)) for d in ds]
        through = top.then(h.structure(shapes.to_initial(w)))
        return wide_pushout_induced(wps[w], cone, through=through)

    def gamma_component(w):
        sobj, _, _, keys = _gamma_sum(k, w)
        legs = []
        for kind, cuts in keys:
            if kind == "whole":
                legs.append(k_component(w))
                continue
            parts = shapes.parts_of(w, cuts)
            legs.append(tensor_mor_multi(
                [k_component(q) for q in parts], backend).then(
                    h.lax_multi(parts)))
        return _assemble(sobj, legs, h.value(w), backend)

    def derived_unit(part):
        return h.unit_map(part[0]).then(
            h.structure(shapes.to_initial(part)))

    comps = {}
    for w in res.pointed.chains:
        sobj, _, _, keys = _point_sum(gk, w)
        legs = []
        for cuts, labels in keys:
            parts = shapes.parts_of(w, cuts)
            factors = [gamma_component(q) if l == "f" else derived_unit(q)
                       for q, l in zip(parts, labels)]
            legs.append(tensor_mor_multi(factors, backend).then(
                h.lax_multi(parts)))
        comps[w] = _assemble(sobj, legs, h.value(w), backend)
    raw = PrecatMorphism(res.pointed, h, comps)
    return factor_through_unital(res.eta, raw)


def arrow_codiagonal(alpha):
    """The two inclusions into the pushout of alpha along itself and the
    fold map collapsing them."""
    from .colim import pushout, pushout_induced
    po = pushout(alpha, alpha)
    fold = pushout_induced(po, identity(alpha.dst), identity(alpha.dst))
    return po, fold


def square_down(alpha):
    """(alpha, id): the arrow alpha over the identity on its target."""
    return (alpha, identity(alpha.dst))


def square_xi(alpha):
    """(alpha, first inclusion): alpha into the codiagonal's second
    inclusion."""
    po, _ = arrow_codiagonal(alpha)
    return (alpha, po.left)


def square_ell(alpha):
    """(id, fold): the codiagonal's second inclusion down to the
    identity."""
    po, fold = arrow_codiagonal(alpha)
    return (identity(alpha.dst), fold)


def codiagonal_arrow(alpha):
    """The second inclusion V -> V +_U V, the middle arrow of the
    down-square factorization."""
    po, _ = arrow_codiagonal(alpha)
    return po.right


# ---------------------------------------------------------------------------
# direct and inverse image along a letter map


def _image_chain(f, s):
    return tuple(f[a] for a in s)


def pullback(f, g):
    """Restrict a precategory along a map of letter sets: the value at a
    chain is the value at its letterwise image."""
    letters = tuple(sorted(f))
    for a in f.values():
        if a not in set(g.letters):
            raise ValueError("letter map lands outside the target")
    values = {}
    for s in shapes.all_chains(letters, g.truncation):
        values[s] = g.value(_image_chain(f, s))
    maps = {}
    for s in values:
        for p in range(1, len(s) - 1):
            maps[(s, p)] = g.gen_map(_image_chain(f, s), p)
    out = make_precategory(g.backend, letters, g.truncation, values, maps,
                           {})
    laxity = {}
    for (s, t) in expected_laxity_keys(out):
        laxity[(s, t)] = g.lax(_image_chain(f, s), _image_chain(f, t))
    out.laxity.update(laxity)
    if g.is_pointed():
        out.units = {a: g.unit_map(f[a]) for a in letters}
    return out


def pushforward(f, pc):
    """Freely extend a precategory along a map of letter sets.

    The value at a target chain is presented by blocks: a subdivision
    into parts, each carrying a source chain and a deletion of the part
    onto its letterwise image. Relations glue source structure maps and
    merge adjacent composable parts through the laxity. Degree-1 slots
    reduce to the sum of the fibers.
    """
    if pc.is_pointed():
        raise ValueError("pushforward is defined on unpointed "
                         "precategories; unitalize after extending")
    backend = pc.backend
    target_letters = tuple(sorted(set(f.values())))
    src_chains = set(pc.chains)

    def part_blocks(part):
        out = []
        for s in pc.chains:
            img = _image_chain(f, s)
            for d in shapes.hom_set(part, img):
                out.append((s, d))
        return out

    def blocks_of(w):
        out = []
        candidates = [((), (w,))]
        candidates.extend(shapes.subdivisions(w))
        for cuts, parts in candidates:
            per_part = [part_blocks(q) for q in parts]
            if any(not pb for pb in per_part):
                continue
            for combo in itertools.product(*per_part):
                out.append((cuts, combo))
        return out

    def block_src(block):
        _, combo = block
        return tensor_multi([pc.value(s) for s, _ in combo], backend)

    values = {}
    quots = {}
    layouts = {}
    for w in shapes.all_chains(target_letters, pc.truncation):
        blocks = blocks_of(w)
        layouts[w] = blocks
        bsrcs = [block_src(b) for b in blocks]
        cop, binjs = coproduct(bsrcs, backend=backend)
        binj = dict(zip(blocks, binjs))
        rel = []
        for block in blocks:
            cuts, combo = block
            for i, (s, d) in enumerate(combo):
                for r in range(1, len(s) - 1):
                    s2 = shapes.delete(s, r)
                    img_step = shapes.del_single(_image_chain(f, s), r)
                    new_combo = list(combo)
                    new_combo[i] = (s2, d.then(img_step))
                    other = (cuts, tuple(new_combo))
                    factors = [identity(pc.value(ss)) for ss, _ in combo]
                    factors[i] = pc.gen_map(s, r)
                    src = tensor_multi(
                        [pc.value(ss) for ss, _ in new_combo], backend)
                    rel.append((
                        src,
                        binj[other],
                        tensor_mor_multi(factors, backend).then(
                            binj[block])))
            for i in range(len(combo) - 1):
                s1, d1 = combo[i]
                s2, d2 = combo[i + 1]
                if s1[-1] != s2[0]:
                    continue
                merged = shapes.concat(s1, s2)
                if merged not in src_chains:
                    continue
                new_cuts = cuts[:i] + cuts[i + 1:]
                new_combo = combo[:i] + ((merged, _concat_del(d1, d2)),) \
                    + combo[i + 2:]
                other = (new_cuts, new_combo)
                factors = [identity(pc.value(ss)) for ss, _ in combo]
                pre = factors[:i] + [pc.lax(s1, s2)] + factors[i + 2:]
                rel.append((
                    block_src(block),
                    tensor_mor_multi(pre, backend).then(binj[other]),
                    binj[block]))
        if rel:
            rel_cop, _ = coproduct([s for s, _, _ in rel],
                                   backend=backend)
            fl = copair(rel_cop, [l for _, l, _ in rel], cop)
            fr = copair(rel_cop, [r for _, _, r in rel], cop)
            q = coequalizer(fl, fr)
        elif backend == "finset":
            q = quotient_finset(cop, [])
        else:
            q = quotient_linear(cop, ratmat.zeros(cop.size(), 0))
        values[w] = q.obj
        quots[w] = (q, cop, binj)
    maps = {}
    for w in values:
        for p in range(1, len(w) - 1):
            wp = shapes.delete(w, p)
            qp, copp, binjp = quots[wp]
            q, cop, binj = quots[w]
            legs = []
            for block in layouts[wp]:
                cuts, combo = block
                big_cuts, j, rel_pos = shapes.reinsert(w, cuts, p)
                s_j, d_j = combo[j]
                parts = shapes.parts_of(w, big_cuts)
                step = shapes.del_single(parts[j], rel_pos)
                new_combo = list(combo)
                new_combo[j] = (s_j, _compose_del(step, d_j))
                target = (big_cuts, tuple(new_combo))
                legs.append(binj[target].then(q.proj))
            h = copair(copp, legs, values[w])
            maps[(w, p)] = quotient_induced(qp, h)
    out = make_precategory(backend, target_letters, pc.truncation, values,
                           maps, {})
    laxity = {}
    for (sbar, tbar) in expected_laxity_keys(out):
        qs, cop_s, binjs_s = quots[sbar]
        qt, cop_t, binjs_t = quots[tbar]
        qst, _, binjs_st = quots[shapes.concat(sbar, tbar)]
        shift = shapes.degree(sbar)
        targets = {}
        lsrcs = [block_src(b) for b in layouts[sbar]]
        rsrcs = [block_src(b) for b in layouts[tbar]]
        for i, (cuts1, combo1) in enumerate(layouts[sbar]):
            for j, (cuts2, combo2) in enumerate(layouts[tbar]):
                cuts = cuts1 + (shift,) + tuple(c + shift for c in cuts2)
                key = (cuts, combo1 + combo2)
                targets[(i, j)] = binjs_st[key].then(qst.proj)
        linjs = [binjs_s[b] for b in layouts[sbar]]
        rinjs = [binjs_t[b] for b in layouts[tbar]]
        # assemble on the presentation coproducts, then push through the
        # quotients' sections and re-verify
        on_cops = _pair_assemble(
            backend, (cop_s, linjs, lsrcs), (cop_t, rinjs, rsrcs),
            targets, values[shapes.concat(sbar, tbar)])
        laxity[(sbar, tbar)] = _descend_tensor(qs, qt, on_cops)
    out.laxity.update(laxity)
    return out


def _compose_del(first, second):
    return first.then(second)


def _concat_del(d1, d2):
    """Two deletions side by side: parts concatenate, kept positions of
    the second shift past the first source."""
    s = shapes.concat(d1.src, d2.src)
    t = shapes.concat(d1.dst, d2.dst)
    off = len(d1.src) - 1
    kept = tuple(d1.kept) + tuple(k + off for k in d2.kept[1:])
    return shapes.Del(s, t, kept)


def _descend_tensor(qs, qt, on_cops):
    """Turn a map defined on a tensor of presentation coproducts into a
    map on the tensor of the quotients, verifying independence of the
    chosen sections."""
    backend = on_cops.backend
    src = tensor(qs.obj, qt.obj)
    if backend == "finset":
        reps_s = qs.section
        reps_t = qt.section
        mapping = []
        for i in range(len(qs.obj.labels)):
            for j in range(len(qt.obj.labels)):
                big = reps_s[i] * len(qt.proj.src.labels) + reps_t[j]
                mapping.append(on_cops.mapping[big])
        cand = make_map(src, on_cops.dst, tuple(mapping))
    else:
        if src.size() == 0 or on_cops.dst.size() == 0:
            mat = ratmat.zeros(on_cops.dst.size(), src.size())
        else:
            sec = ratmat.kron(qs.section, qt.section)
            mat = ratmat.matmul(on_cops.matrix, sec)
        cand = MMorphism(backend, src, on_cops.dst, matrix=mat)
    check = tensor_mor(qs.proj, qt.proj).then(cand)
    if check != on_cops:
        raise ValueError("laxity does not descend to the quotient")
    return cand
