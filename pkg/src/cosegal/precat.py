"""Precategories: values on chains, structure maps against deletions,
laxity maps along concatenation, and optional unit points.

A precategory F over a letter set X assigns an M-object to every stored
chain (degree 1 up to the truncation), a structure map
F(sigma): F(t) -> F(s) to every generating deletion sigma: s -> t, and a
laxity map F(s) (x) F(t) -> F(concat(s, t)) to every composable pair whose
concatenation is still stored. Composite structure maps are built from the
generators; `validate` checks the simplicial coherence that makes this
unambiguous, plus naturality and associativity of the laxity.

Pointed means units I -> F((a, a)) are present. No axiom is imposed on
them here; `check_unital` reports exactly which unit constraints hold and
which fail, and the unitalization machinery consumes that report.

The stored chain set is explicit, which lets the same structure carry
join-shaped carriers (module bimodules) and other partial shapes: the only
closure requirements are under inner deletions and under the laxity keys
present.
"""

from dataclasses import dataclass, field

from . import shapes
from .base import (
    identity, is_isomorphism, is_weak_equivalence, tensor, tensor_mor,
    unit, left_unitor, right_unitor,
)


@dataclass
class Precategory:
    backend: str
    letters: tuple
    truncation: int
    chains: tuple
    values: dict
    maps: dict      # (chain, inner position) -> structure map into it
    laxity: dict    # (s, t) -> map out of values[s] (x) values[t]
    units: dict = None
    split: tuple = None

    def value(self, s):
        return self.values[s]

    def gen_map(self, s, p):
        """The structure map F(delete(s, p)) -> F(s)."""
        return self.maps[(s, p)]

    def structure(self, d):
        """The structure map F(d.dst) -> F(d.src) for any deletion d."""
        out = identity(self.values[d.dst])
        for step in reversed(shapes.del_singles(d)):
            p = step.deleted()[0]
            out = out.then(self.maps[(step.src, p)])
        return out

    def cosegal_map(self, s):
        """The canonical map from the endpoint 2-chain value into F(s)."""
        return self.structure(shapes.to_initial(s))

    def lax(self, s, t):
        return self.laxity[(s, t)]

    def lax_multi(self, parts):
        """The laxity map out of the tensor of several parts, bracketed
        from the left."""
        parts = list(parts)
        if len(parts) == 1:
            return identity(self.values[parts[0]])
        out = self.lax(parts[0], parts[1])
        cur = shapes.concat(parts[0], parts[1])
        for nxt in parts[2:]:
            out = tensor_mor(out, identity(self.values[nxt])).then(
                self.lax(cur, nxt))
            cur = shapes.concat(cur, nxt)
        return out

    def is_pointed(self):
        return self.units is not None

    def unit_map(self, a):
        return self.units[a]


def make_precategory(backend, letters, truncation, values, maps, laxity,
                     units=None, split=None):
    chains = tuple(sorted(values, key=lambda s: (len(s), s)))
    return Precategory(backend, tuple(sorted(letters)), truncation, chains,
                       dict(values), dict(maps), dict(laxity), units, split)


def full_chain_set(letters, truncation):
    return shapes.all_chains(letters, truncation)


def expected_laxity_keys(pc):
    chainset = set(pc.chains)
    keys = []
    for s in pc.chains:
        for t in pc.chains:
            if s[-1] != t[0]:
                continue
            if shapes.degree(s) + shapes.degree(t) > pc.truncation:
                continue
            if shapes.concat(s, t) in chainset:
                keys.append((s, t))
    return keys


def split_admissible(split, s):
    """No left-side letter may follow a right-side letter."""
    left, right = split
    seen_right = False
    for a in s:
        if a in right:
            seen_right = True
        elif seen_right:
            return False
    return True


def validate(pc, strict=False):
    """All structural defects of a precategory, as readable strings.

    With strict=True a nonempty report raises ValueError instead.
    """
    errors = []
    chainset = set(pc.chains)
    letterset = set(pc.letters)
    for s in pc.chains:
        if not shapes.is_chain(s):
            errors.append("not a chain: %r" % (s,))
            continue
        if not set(s) <= letterset:
            errors.append("chain %r uses unknown letters" % (s,))
        if shapes.degree(s) > pc.truncation:
            errors.append("chain %r exceeds the truncation" % (s,))
        if s not in pc.values:
            errors.append("chain %r has no value" % (s,))
            continue
        if pc.values[s].backend != pc.backend:
            errors.append("value at %r is on the wrong backend" % (s,))
        if pc.split is not None and not split_admissible(pc.split, s):
            errors.append("chain %r is not admissible for the split" % (s,))
    if set(pc.values) != chainset:
        errors.append("values and chain list disagree")
    # structure map generators and their sources
    expected_maps = set()
    for s in pc.chains:
        for p in range(1, len(s) - 1):
            t = shapes.delete(s, p)
            if t not in chainset:
                errors.append(
                    "chain %r lacks its deletion %r at %d" % (s, t, p))
                continue
            expected_maps.add((s, p))
            m = pc.maps.get((s, p))
            if m is None:
                errors.append("missing structure map at %r, %d" % (s, p))
            elif m.src != pc.values[t] or m.dst != pc.values[s]:
                errors.append("structure map at %r, %d has wrong ends"
                              % (s, p))
    for key in pc.maps:
        if key not in expected_maps:
            errors.append("unexpected structure map key %r" % (key,))
    if errors:
        return _finish(errors, strict)
    # simplicial coherence: both orders of a double deletion agree
    for s in pc.chains:
        n = len(s)
        for p in range(1, n - 1):
            for q in range(p + 1, n - 1):
                t_q = shapes.delete(s, q)
                t_p = shapes.delete(s, p)
                route_a = pc.gen_map(t_q, p).then(pc.gen_map(s, q))
                route_b = pc.gen_map(t_p, q - 1).then(pc.gen_map(s, p))
                if route_a != route_b:
                    errors.append(
                        "structure maps break the simplicial identity at "
                        "%r positions %d, %d" % (s, p, q))
    # laxity keys, ends, naturality, associativity
    expected_lax = set(expected_laxity_keys(pc))
    if set(pc.laxity) != expected_lax:
        missing = expected_lax - set(pc.laxity)
        extra = set(pc.laxity) - expected_lax
        if missing:
            errors.append("missing laxity keys %r" % (sorted(missing),))
        if extra:
            errors.append("unexpected laxity keys %r" % (sorted(extra),))
    for (s, t) in sorted(expected_lax & set(pc.laxity)):
        phi = pc.laxity[(s, t)]
        st = shapes.concat(s, t)
        if (phi.src != tensor(pc.values[s], pc.values[t])
                or phi.dst != pc.values[st]):
            errors.append("laxity at %r has wrong ends" % ((s, t),))
            continue
        ds = shapes.degree(s)
        for p in range(1, len(s) - 1):
            s2 = shapes.delete(s, p)
            if (s2, t) not in pc.laxity:
                continue
            left = tensor_mor(pc.gen_map(s, p),
                              identity(pc.values[t])).then(phi)
            right = pc.laxity[(s2, t)].then(pc.gen_map(st, p))
            if left != right:
                errors.append("laxity at %r not natural in the left part "
                              "at %d" % ((s, t), p))
        for p in range(1, len(t) - 1):
            t2 = shapes.delete(t, p)
            if (s, t2) not in pc.laxity:
                continue
            left = tensor_mor(identity(pc.values[s]),
                              pc.gen_map(t, p)).then(phi)
            right = pc.laxity[(s, t2)].then(pc.gen_map(st, ds + p))
            if left != right:
                errors.append("laxity at %r not natural in the right part "
                              "at %d" % ((s, t), p))
    for (s, t) in sorted(expected_lax & set(pc.laxity)):
        st = shapes.concat(s, t)
        for u in pc.chains:
            if t[-1] != u[0] or (st, u) not in pc.laxity:
                continue
            if (t, u) not in pc.laxity or (s, shapes.concat(t, u)) \
                    not in pc.laxity:
                continue
            left = tensor_mor(pc.lax(s, t),
                              identity(pc.values[u])).then(pc.lax(st, u))
            right = tensor_mor(identity(pc.values[s]), pc.lax(t, u)).then(
                pc.lax(s, shapes.concat(t, u)))
            if left != right:
                errors.append("laxity not associative at %r"
                              % ((s, t, u),))
    if pc.units is not None:
        for a in pc.letters:
            if (a, a) not in chainset:
                errors.append("pointed but chain %r is missing" % ((a, a),))
                continue
            ua = pc.units.get(a)
            if ua is None:
                errors.append("missing unit at %r" % (a,))
            elif ua.src != unit(pc.backend) or ua.dst != pc.values[(a, a)]:
                errors.append("unit at %r has wrong ends" % (a,))
        for a in pc.units:
            if a not in set(pc.letters):
                errors.append("unit at unknown letter %r" % (a,))
    return _finish(errors, strict)


def _finish(errors, strict):
    if strict and errors:
        raise ValueError("; ".join(errors))
    return errors


# ---------------------------------------------------------------------------
# unit constraints


def unit_constraints(pc):
    """Every unit law instance a pointed precategory must satisfy.

    Yields (side, letter, s, p, z) where z = concat of the unit 2-chain
    with s on the given side, and p runs over every position whose deletion
    maps z back onto s on the nose.
    """
    if not pc.is_pointed():
        return
    chainset = set(pc.chains)
    for s in pc.chains:
        a, b = shapes.endpoints(s)
        z_l = shapes.concat((a, a), s)
        if z_l in chainset:
            for p in range(1, len(z_l) - 1):
                if shapes.delete(z_l, p) == s:
                    yield ("l", a, s, p, z_l)
        z_r = shapes.concat(s, (b, b))
        if z_r in chainset:
            for p in range(1, len(z_r) - 1):
                if shapes.delete(z_r, p) == s:
                    yield ("r", b, s, p, z_r)


def unit_constraint_maps(pc, con):
    """The two parallel maps of a unit constraint, out of I (x) F(s) (or
    F(s) (x) I on the right side)."""
    side, a, s, p, z = con
    fs = pc.values[s]
    if side == "l":
        first = tensor_mor(pc.unit_map(a), identity(fs)).then(
            pc.lax((a, a), s))
        second = left_unitor(fs).then(pc.gen_map(z, p))
    else:
        first = tensor_mor(identity(fs), pc.unit_map(a)).then(
            pc.lax(s, (a, a)))
        second = right_unitor(fs).then(pc.gen_map(z, p))
    return first, second


def check_unital(pc):
    """The list of violated unit constraints of a pointed precategory."""
    if not pc.is_pointed():
        raise ValueError("check_unital needs a pointed precategory")
    bad = []
    for con in unit_constraints(pc):
        first, second = unit_constraint_maps(pc, con)
        if first != second:
            bad.append(con)
    return bad


# ---------------------------------------------------------------------------
# morphisms of precategories


@dataclass
class PrecatMorphism:
    src: Precategory
    dst: Precategory
    components: dict  # chain -> MMorphism

    def at(self, s):
        return self.components[s]

    def then(self, other):
        if self.dst.values != other.src.values:
            raise ValueError("precategory morphism composition mismatch")
        return PrecatMorphism(self.src, other.dst, {
            s: self.components[s].then(other.components[s])
            for s in self.components})


def identity_morphism(pc):
    return PrecatMorphism(pc, pc, {s: identity(pc.values[s])
                                   for s in pc.chains})


def validate_morphism(alpha, strict=False):
    """Naturality, monoidality and unit preservation of a morphism."""
    errors = []
    f, g = alpha.src, alpha.dst
    if f.chains != g.chains:
        errors.append("source and target store different chains")
        return _finish(errors, strict)
    for s in f.chains:
        c = alpha.components.get(s)
        if c is None:
            errors.append("missing component at %r" % (s,))
        elif c.src != f.values[s] or c.dst != g.values[s]:
            errors.append("component at %r has wrong ends" % (s,))
    if errors:
        return _finish(errors, strict)
    for (s, p) in f.maps:
        t = shapes.delete(s, p)
        if alpha.at(t).then(g.gen_map(s, p)) != \
                f.gen_map(s, p).then(alpha.at(s)):
            errors.append("not natural at %r, %d" % (s, p))
    for (s, t) in f.laxity:
        st = shapes.concat(s, t)
        left = tensor_mor(alpha.at(s), alpha.at(t)).then(g.lax(s, t))
        right = f.lax(s, t).then(alpha.at(st))
        if left != right:
            errors.append("not monoidal at %r" % ((s, t),))
    if f.is_pointed() and g.is_pointed():
        for a in f.letters:
            if f.unit_map(a).then(alpha.at((a, a))) != g.unit_map(a):
                errors.append("unit not preserved at %r" % (a,))
    return _finish(errors, strict)


def is_levelwise_weak_equivalence(alpha):
    return all(is_weak_equivalence(alpha.at(s)) for s in alpha.src.chains)


def is_levelwise_isomorphism(alpha):
    return all(is_isomorphism(alpha.at(s)) for s in alpha.src.chains)


def is_easy_weak_equivalence(alpha):
    """Weak equivalence on the degree-1 components only.  Coarser than the
    levelwise check: higher chains may change arbitrarily."""
    return all(
        is_weak_equivalence(alpha.at(s)) for s in alpha.src.chains if len(s) == 2
    )


# ---------------------------------------------------------------------------
# strict categories as precategories


@dataclass
class StrictCategory:
    """A finite strict category enriched in one of the backends: hom objects,
    a diagrammatic composition map per triple, an identity point per
    object."""

    backend: str
    objects: tuple
    homs: dict    # (a, b) -> MObject
    comps: dict   # (a, b, c) -> MMorphism from homs[a,b] (x) homs[b,c]
    idpoints: dict  # a -> MMorphism from the monoidal unit


def validate_strict_category(cat, strict=False):
    errors = []
    obs = cat.objects
    for a in obs:
        for b in obs:
            if (a, b) not in cat.homs:
                errors.append("missing hom at %r" % ((a, b),))
    if errors:
        return _finish(errors, strict)
    for a in obs:
        for b in obs:
            for c in obs:
                m = cat.comps.get((a, b, c))
                if m is None:
                    errors.append("missing composition at %r" % ((a, b, c),))
                    continue
                if m.src != tensor(cat.homs[(a, b)], cat.homs[(b, c)]) \
                        or m.dst != cat.homs[(a, c)]:
                    errors.append("composition at %r has wrong ends"
                                  % ((a, b, c),))
    if errors:
        return _finish(errors, strict)
    for a in obs:
        for b in obs:
            for c in obs:
                for d in obs:
                    h_ab, h_bc, h_cd = (cat.homs[(a, b)], cat.homs[(b, c)],
                                        cat.homs[(c, d)])
                    left = tensor_mor(cat.comps[(a, b, c)],
                                      identity(h_cd)).then(
                        cat.comps[(a, c, d)])
                    right = tensor_mor(identity(h_ab),
                                       cat.comps[(b, c, d)]).then(
                        cat.comps[(a, b, d)])
                    if left != right:
                        errors.append("composition not associative at %r"
                                      % ((a, b, c, d),))
    for a in obs:
        e = cat.idpoints.get(a)
        if e is None or e.src != unit(cat.backend) \
                or e.dst != cat.homs[(a, a)]:
            errors.append("identity point at %r missing or mis-typed" % (a,))
            continue
        for b in obs:
            h = cat.homs[(a, b)]
            lu = tensor_mor(e, identity(h)).then(cat.comps[(a, a, b)])
            if lu != left_unitor(h):
                errors.append("left unit law fails at %r" % ((a, b),))
            h2 = cat.homs[(b, a)]
            ru = tensor_mor(identity(h2), e).then(cat.comps[(b, a, a)])
            if ru != right_unitor(h2):
                errors.append("right unit law fails at %r" % ((b, a),))
    return _finish(errors, strict)


def from_strict_category(cat, truncation):
    """The constant-on-chains precategory of a strict category.

    Every chain takes the hom object of its endpoints, structure maps are
    identities, the laxity composes, units are the identity points. The
    result is unital and co-Segal by construction; `validate` and
    `check_unital` confirm rather than assume this.
    """
    validate_strict_category(cat, strict=True)
    letters = tuple(sorted(cat.objects))
    values = {}
    for s in shapes.all_chains(letters, truncation):
        values[s] = cat.homs[(s[0], s[-1])]
    maps = {}
    for s in values:
        for p in range(1, len(s) - 1):
            maps[(s, p)] = identity(values[s])
    laxity = {}
    pc = make_precategory(cat.backend, letters, truncation, values, maps,
                          laxity)
    for (s, t) in expected_laxity_keys(pc):
        laxity[(s, t)] = cat.comps[(s[0], s[-1], t[-1])]
    pc.laxity.update(laxity)
    units = {a: cat.idpoints[a] for a in letters}
    pc.units = units
    return pc
