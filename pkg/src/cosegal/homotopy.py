"""Homotopical checks and the 2-constant constructions.

A precategory is co-Segal when every composite structure map from the
degree-1 slot is a backend weak equivalence; the lifting report checks the
stronger trivial-fibration property twice, once through the predicate and
once through lifting against the generating cofibrations, and the two
routes must agree.

2-constant precategories keep one object per endpoint pair on all chains
of degree 2 and up, with identity maps between them.  They support an
exact co-Segalification: factor each transition map as a cofibration
followed by a trivial fibration and re-seat the degree-1 slot on the
middle object.  The laxity on the output reuses the realized composition,
precomposed with the trivial fibration on whichever side still sits in
degree 1.
"""

from dataclasses import dataclass

from .base import (
    generating_cofibrations, has_rlp, identity, is_fibration,
    is_trivial_fibration, is_weak_equivalence, factorize, tensor_mor, unit,
)
from . import shapes
from .precat import (
    PrecatMorphism, StrictCategory, make_precategory, expected_laxity_keys,
    from_strict_category, validate_strict_category,
)
from .adjoints import realize


def is_cosegal(pc):
    return all(ok for _, ok in cosegal_report(pc))


def cosegal_report(pc):
    """Per-chain weak-equivalence verdicts for the composite maps out of
    the degree-1 slots, in chain order."""
    out = []
    for s in pc.chains:
        if len(s) > 2:
            out.append((s, is_weak_equivalence(pc.cosegal_map(s))))
    return out


def _degree_window(pc):
    degs = set()
    for s in pc.chains:
        v = pc.value(s)
        if v.degrees:
            degs.update(v.degrees)
    degs.update(unit(pc.backend).degrees)
    if not degs:
        return (0, 0)
    return (min(degs), max(degs))


def k_injectivity_report(pc, window=None, strong=False):
    """Check each composite structure map two ways: the trivial-fibration
    predicate, and the right lifting property against every generating
    cofibration.  The routes are computed independently and both are
    reported; `agree` is their comparison, `passed` the shared verdict.

    chq needs a degree window for its generating family; it defaults to
    the span of degrees appearing in the precategory.  With strong=True
    the report also records whether each single deletion step is a
    fibration on its own.
    """
    if pc.backend == "chq" and window is None:
        window = _degree_window(pc)
    gens = generating_cofibrations(pc.backend, window)
    entries = []
    for s in pc.chains:
        if len(s) <= 2:
            continue
        u = pc.cosegal_map(s)
        tf = is_trivial_fibration(u)
        rlp = all(has_rlp(i, u) for i in gens)
        entry = {
            "chain": s,
            "trivial_fibration": tf,
            "rlp": rlp,
            "agree": tf == rlp,
            "passed": tf and rlp,
            "src_size": u.src.size(),
            "dst_size": u.dst.size(),
        }
        if strong:
            entry["steps_fibrant"] = all(
                is_fibration(pc.gen_map(s, p)) for p in range(1, len(s) - 1))
        entries.append(entry)
    return entries


def report_passes(entries):
    return all(e["agree"] and e["passed"] for e in entries)


# ---------------------------------------------------------------------------
# 2-constancy


def is_two_constant(pc):
    """Constant on chains of degree 2 and up: equal values per endpoint
    pair and identity maps between them."""
    ref = {}
    for s in pc.chains:
        if len(s) <= 2:
            continue
        pair = (s[0], s[-1])
        if pair not in ref:
            ref[pair] = pc.value(s)
        elif pc.value(s) != ref[pair]:
            return False
        if len(s) > 3:
            for p in range(1, len(s) - 1):
                if pc.gen_map(s, p) != identity(ref[pair]):
                    return False
    return True


def two_constant_values(pc):
    """The constant object per endpoint pair; raises off 2-constant
    input."""
    if not is_two_constant(pc):
        raise ValueError("not constant on degree >= 2 chains")
    out = {}
    for s in pc.chains:
        if len(s) == 3:
            out[(s[0], s[-1])] = pc.value(s)
    return out


def transition_maps(pc):
    """The map from each degree-1 slot into the shared degree >= 2 object.

    Every degree-2 chain over the pair must induce the same map, otherwise
    the transition is ambiguous and we refuse (deeper truncation forces
    agreement through the degree-3 deletions)."""
    two_constant_values(pc)
    out = {}
    for s in pc.chains:
        if len(s) != 3:
            continue
        pair = (s[0], s[-1])
        u = pc.cosegal_map(s)
        if pair in out and out[pair] != u:
            raise ValueError(
                "transition maps over %r disagree between degree-2 chains"
                % (pair,))
        out[pair] = u
    return out


# ---------------------------------------------------------------------------
# homotopy transfer


@dataclass
class TwoConstantData:
    """A strict category, a replacement slot per endpoint pair mapping
    onto each hom object, and a lift of each identity point to the
    replacement of the diagonal slot."""

    category: StrictCategory
    replacements: dict  # (a, b) -> MMorphism, dst = category hom
    unit_lifts: dict    # a -> MMorphism from the monoidal unit


def validate_two_constant_data(d):
    cat = d.category
    validate_strict_category(cat, strict=True)
    for a in cat.objects:
        for b in cat.objects:
            f = d.replacements.get((a, b))
            if f is None or f.dst != cat.homs[(a, b)]:
                raise ValueError("replacement at %r missing or mis-typed"
                                 % ((a, b),))
    for a in cat.objects:
        e = d.unit_lifts.get(a)
        if e is None or e.src != unit(cat.backend) \
                or e.dst != d.replacements[(a, a)].src:
            raise ValueError("unit lift at %r missing or mis-typed" % (a,))
        if e.then(d.replacements[(a, a)]) != cat.idpoints[a]:
            raise ValueError("unit lift at %r does not factor the identity"
                             % (a,))


def _mixed_laxity(fs, comps, left_raw, right_raw, s, t):
    """Compose through the strict category, replacing whichever side still
    sits in degree 1 before composing."""
    a, b, c = s[0], s[-1], t[-1]
    lf = fs[(a, b)] if len(s) == 2 else None
    rf = fs[(b, c)] if len(t) == 2 else None
    li = lf if lf is not None else identity(left_raw)
    ri = rf if rf is not None else identity(right_raw)
    return tensor_mor(li, ri).then(comps[(a, b, c)])


def two_constant_transfer(d, truncation):
    """Spread a strict category over the chains with a chosen replacement
    in each degree-1 slot.  Degree >= 2 keeps the strict hom object, the
    transitions are the replacement maps, and all four laxity shapes
    funnel through the strict composition."""
    validate_two_constant_data(d)
    cat = d.category
    letters = tuple(sorted(cat.objects))
    values = {}
    for s in shapes.all_chains(letters, truncation):
        pair = (s[0], s[-1])
        values[s] = d.replacements[pair].src if len(s) == 2 \
            else cat.homs[pair]
    maps = {}
    for s in values:
        for p in range(1, len(s) - 1):
            pair = (s[0], s[-1])
            maps[(s, p)] = d.replacements[pair] if len(s) == 3 \
                else identity(cat.homs[pair])
    pc = make_precategory(cat.backend, letters, truncation, values, maps,
                          {})
    for (s, t) in expected_laxity_keys(pc):
        pc.laxity[(s, t)] = _mixed_laxity(
            d.replacements, cat.comps, pc.value(s), pc.value(t), s, t)
    pc.units = {a: d.unit_lifts[a] for a in letters}
    return pc


def transfer_comparison(d, truncation):
    """The levelwise map from the transfer onto the constant spread of the
    strict category: replacements in degree 1, identities above."""
    src = two_constant_transfer(d, truncation)
    dst = from_strict_category(d.category, truncation)
    comps = {}
    for s in src.chains:
        pair = (s[0], s[-1])
        comps[s] = d.replacements[pair] if len(s) == 2 \
            else identity(d.category.homs[pair])
    return PrecatMorphism(src, dst, comps)


# ---------------------------------------------------------------------------
# the 2-constant spread of a realization


def associated_two_constant(pc):
    """Flatten everything above degree 1 onto the realized hom objects.

    Returns (flat, rho, eps): rho keeps every degree-1 slot on the nose
    and sends higher chains along the realization cocone; eps collapses
    the degree-1 slots too.  Their composite is the realization unit."""
    r = realize(pc)
    if r.category is None:
        raise ValueError("realization composition is not determined")
    letters = pc.letters
    fs = {}
    for a in letters:
        for b in letters:
            fs[(a, b)] = r.eta.at((a, b))
    values = {}
    for s in pc.chains:
        pair = (s[0], s[-1])
        values[s] = pc.value(s) if len(s) == 2 else r.homs[pair]
    maps = {}
    for s in values:
        for p in range(1, len(s) - 1):
            pair = (s[0], s[-1])
            maps[(s, p)] = fs[pair] if len(s) == 3 \
                else identity(r.homs[pair])
    flat = make_precategory(pc.backend, letters, pc.truncation, values,
                            maps, {})
    for (s, t) in expected_laxity_keys(flat):
        flat.laxity[(s, t)] = _mixed_laxity(
            fs, r.comps, flat.value(s), flat.value(t), s, t)
    flat.units = dict(pc.units)
    rho = PrecatMorphism(pc, flat, {
        s: identity(pc.value(s)) if len(s) == 2 else r.eta.at(s)
        for s in pc.chains})
    eps = PrecatMorphism(flat, r.constant, {
        s: fs[(s[0], s[-1])] if len(s) == 2
        else identity(r.homs[(s[0], s[-1])])
        for s in flat.chains})
    return flat, rho, eps


# ---------------------------------------------------------------------------
# co-Segalification of 2-constant precategories


def cosegalify_two_constant(pc):
    """Factor each transition map as cofibration then trivial fibration
    and move the degree-1 slot to the middle object.

    Needs the realization to land on the stored constant objects with an
    identity cocone there (deep enough truncation), so the realized
    composition can serve as the glue.  Returns (out, eta) with eta the
    levelwise map that is the cofibration in degree 1 and the identity
    above."""
    if pc.truncation < 2:
        raise ValueError("truncation below 2 carries no transition to fix")
    if not pc.is_pointed():
        raise ValueError("need a pointed input")
    trans = transition_maps(pc)
    consts = two_constant_values(pc)
    r = realize(pc)
    if r.category is None:
        raise ValueError("realization composition is not determined")
    for s in pc.chains:
        pair = (s[0], s[-1])
        want = trans[pair] if len(s) == 2 else identity(consts[pair])
        if r.eta.at(s) != want:
            raise ValueError(
                "realization at %r does not sit on the constant object; "
                "deepen the truncation" % (pair,))
    cofs = {}
    tfibs = {}
    for pair, u in trans.items():
        c, t = factorize(u)
        cofs[pair] = c
        tfibs[pair] = t
    letters = pc.letters
    values = {}
    for s in pc.chains:
        pair = (s[0], s[-1])
        values[s] = cofs[pair].dst if len(s) == 2 else pc.value(s)
    maps = {}
    for s in values:
        for p in range(1, len(s) - 1):
            pair = (s[0], s[-1])
            maps[(s, p)] = tfibs[pair] if len(s) == 3 \
                else identity(consts[pair])
    out = make_precategory(pc.backend, letters, pc.truncation, values,
                           maps, {})
    for (s, t) in expected_laxity_keys(out):
        out.laxity[(s, t)] = _mixed_laxity(
            tfibs, r.comps, out.value(s), out.value(t), s, t)
    out.units = {a: pc.unit_map(a).then(cofs[(a, a)]) for a in letters}
    eta = PrecatMorphism(pc, out, {
        s: cofs[(s[0], s[-1])] if len(s) == 2 else identity(pc.value(s))
        for s in pc.chains})
    return out, eta
