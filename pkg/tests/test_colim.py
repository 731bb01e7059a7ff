import pytest

from cosegal import base, colim
from cosegal.base import (
    chq_map, chq_obj, disk, empty, finset_map, finset_obj, identity,
    is_isomorphism, sphere, unit, vectq_map, vectq_obj, zero_map,
)
from cosegal.colim import (
    coequalizer, colimit, colimit_induced, compare_coproduct_pushout,
    compare_interleaved_colimits, copair, coproduct, equalizer, pushout,
    pushout_induced, quotient_induced, wide_pushout, wide_pushout_induced,
)

from test_base import rand_chq, rand_chq_map


def test_coproduct_injections_jointly_surjective():
    x = finset_obj(["a", "b"])
    y = finset_obj(["c"])
    cop, injs = coproduct([x, y])
    assert len(cop.labels) == 3
    seen = set(injs[0].mapping) | set(injs[1].mapping)
    assert seen == {0, 1, 2}
    f = finset_map(x, y, [0, 0])
    g = identity(y)
    h = copair(cop, [f, g], y)
    assert injs[0].then(h) == f and injs[1].then(h) == g


def test_coproduct_chq_direct_sum():
    cop, injs = coproduct([sphere(0), disk(1)])
    assert cop.degrees == (0, 1, 0)
    assert base.homology(cop) == {0: 1}
    assert all(base.is_cofibration(i) for i in injs)


def test_coequalizer_finset_union_find():
    y = finset_obj(["a", "b", "c", "d"])
    x = finset_obj(["p", "q"])
    f = finset_map(x, y, [0, 1])
    g = finset_map(x, y, [1, 2])
    q = coequalizer(f, g)
    assert len(q.obj.labels) == 2  # {a,b,c} and {d}
    assert q.proj.mapping == (0, 0, 0, 1)
    h = finset_map(y, finset_obj(["z", "w"]), [0, 0, 0, 1])
    ind = quotient_induced(q, h)
    assert q.proj.then(ind) == h
    bad = finset_map(y, finset_obj(["z", "w"]), [0, 1, 0, 1])
    with pytest.raises(ValueError):
        quotient_induced(q, bad)


def test_coequalizer_vectq_cokernel():
    x = vectq_obj(1)
    y = vectq_obj(2)
    f = vectq_map(x, y, [[1], [0]])
    g = vectq_map(x, y, [[0], [1]])
    q = coequalizer(f, g)
    assert q.obj.dim == 1
    assert f.then(q.proj) == g.then(q.proj)


def test_coequalizer_chq_inherits_degrees():
    x = sphere(1)
    y = coproduct([sphere(1), disk(1)])[0]
    f = chq_map(x, y, [[1], [0], [0]])
    g = chq_map(x, y, [[0], [0], [0]])
    q = coequalizer(f, g)
    assert q.obj.degrees == (1, 0)
    assert base.homology(q.obj) == {}


def test_pushout_universal_property(rng):
    a = finset_obj(["x"])
    b = finset_obj(["x", "y"])
    c = finset_obj(["u", "v"])
    f = finset_map(a, b, [0])
    g = finset_map(a, c, [1])
    po = pushout(f, g)
    assert len(po.obj.labels) == 3
    assert f.then(po.left) == g.then(po.right)
    z = finset_obj(["0", "1", "2"])
    u = finset_map(b, z, [0, 1])
    v = finset_map(c, z, [2, 0])
    ind = pushout_induced(po, u, v)
    assert po.left.then(ind) == u and po.right.then(ind) == v


def test_wide_pushout_degenerate_cases():
    b = vectq_obj(2)
    wp0 = wide_pushout(b, [])
    assert wp0.obj == b and wp0.through == identity(b)
    f = vectq_map(b, vectq_obj(1), [[1, 1]])
    wp1 = wide_pushout(b, [f])
    assert wp1.obj == f.dst and wp1.through == f
    assert wide_pushout_induced(wp1, [identity(f.dst)]) == identity(f.dst)


def test_wide_pushout_three_legs():
    b = vectq_obj(1)
    legs = [vectq_map(b, vectq_obj(2), [[1], [0]]) for _ in range(3)]
    wp = wide_pushout(b, legs)
    # three planes glued along a shared line
    assert wp.obj.dim == 4
    for m, leg in zip(wp.maps, legs):
        assert leg.then(m) == wp.through
    cone = [vectq_map(l.dst, vectq_obj(1), [[1, 0]]) for l in legs]
    ind = wide_pushout_induced(wp, cone)
    assert wp.maps[0].then(ind) == cone[0]


def test_colimit_general_span():
    # a span glued into a pushout through the generic presentation
    nodes = {"a": finset_obj(["x"]), "b": finset_obj(["x", "y"]),
             "c": finset_obj(["u", "v"])}
    edges = [("a", "b", finset_map(nodes["a"], nodes["b"], [0])),
             ("a", "c", finset_map(nodes["a"], nodes["c"], [1]))]
    col = colimit(nodes, edges)
    assert len(col.obj.labels) == 3
    cone = {"a": finset_map(nodes["a"], finset_obj(["z"]), [0]),
            "b": finset_map(nodes["b"], finset_obj(["z"]), [0, 0]),
            "c": finset_map(nodes["c"], finset_obj(["z"]), [0, 0])}
    ind = colimit_induced(col, cone)
    assert col.cocone["b"].then(ind) == cone["b"]


def test_colimit_constant_shortcut_is_literal():
    w = vectq_obj(2)
    s = vectq_obj(1)
    tau = vectq_map(s, w, [[1], [1]])
    nodes = {"src": s, "n1": w, "n2": w}
    edges = [("src", "n1", tau), ("src", "n2", tau),
             ("n1", "n2", identity(w))]
    col = colimit(nodes, edges, source_key="src")
    assert col.obj is w
    assert col.cocone["n1"] == identity(w)
    assert col.cocone["src"] == tau
    ind = colimit_induced(col, {"src": tau, "n1": identity(w),
                                "n2": identity(w)})
    assert ind == identity(w)


def test_colimit_shortcut_refuses_disconnected():
    w = vectq_obj(1)
    s = vectq_obj(1)
    tau = vectq_map(s, w, [[2]])
    nodes = {"src": s, "n1": w, "n2": w}
    edges = [("src", "n1", tau), ("src", "n2", tau)]
    col = colimit(nodes, edges, source_key="src")
    # no identity edge joins n1 to n2, so this is a genuine pushout
    assert col.obj.dim == 1
    assert col.cocone["n1"] != identity(w) or col.cocone["n2"] != identity(w)


def test_equalizer_all_backends():
    x = finset_obj(["a", "b", "c"])
    y = finset_obj(["u", "v"])
    f = finset_map(x, y, [0, 1, 0])
    g = finset_map(x, y, [0, 0, 0])
    obj, incl = equalizer(f, g)
    assert obj.labels == (("a",), ("c",))
    assert incl.then(f) == incl.then(g)
    a = vectq_obj(2)
    h = vectq_map(a, a, [[1, 1], [0, 1]])
    obj2, incl2 = equalizer(h, identity(a))
    assert obj2.dim == 1
    c = disk(1)
    obj3, incl3 = equalizer(identity(c), identity(c))
    assert obj3.degrees == c.degrees
    obj4, incl4 = equalizer(identity(c), zero_map(c, c))
    assert obj4.degrees == ()


def interleave_shifted(etas, twists):
    """The cofinal-subsequence interleaving B_i = A_{i+1} twisted by isos.

    etas lists n+1 maps A_0 -> ... -> A_{n+1}; twists lists n+1 isos, one
    out of each A_{i+1}. Only the first n etas form the tested sequence (the
    extra one feeds the shifted epsilons). Returns (etas', epsilons, downs,
    ups) ready for compare_interleaved_colimits.
    """
    n = len(etas) - 1
    downs = [etas[i].then(twists[i]) for i in range(n + 1)]
    ups = [base.invert(twists[i]) for i in range(n)]
    epsilons = [ups[i].then(etas[i + 1]).then(twists[i + 1])
                for i in range(n)]
    return etas[:n], epsilons, downs, ups


def test_interleaved_colimits_agree(rng):
    for _ in range(8):
        a = rand_chq(rng)
        b = rand_chq(rng)
        m0 = rand_chq_map(rng, a, b)
        m1 = rand_chq_map(rng, b, a)
        raw = [m0, m1, identity(a), identity(a)]
        twists = [identity(m.dst) for m in raw]
        etas, epsilons, downs, ups = interleave_shifted(raw, twists)
        report = compare_interleaved_colimits(etas, epsilons, downs, ups)
        assert report["mutually-inverse"]
        assert report["stable-index"] <= 2


def test_interleaved_small_explicit():
    a = vectq_obj(1)
    b = vectq_obj(1)
    two = vectq_map(a, b, [[2]])
    half = vectq_map(b, a, [["1/2"]])
    etas = [two.then(half)]
    epsilons = [half.then(two)]
    downs = [two, two]
    ups = [half]
    report = compare_interleaved_colimits(etas, epsilons, downs, ups)
    assert report["mutually-inverse"]
    assert report["stable-index"] == 0


def test_compare_coproduct_pushout_finset():
    b = finset_obj(["b0", "b1"])
    a1 = finset_obj(["a"])
    c1 = finset_obj(["c", "c'"])
    a2 = finset_obj(["a2"])
    c2 = finset_obj(["d"])
    items = [
        (finset_map(a1, c1, [0]), finset_map(a1, b, [0])),
        (finset_map(a2, c2, [0]), finset_map(a2, b, [1])),
    ]
    report = compare_coproduct_pushout(b, items)
    assert report["mutually-inverse"]
    assert len(report["all-at-once"].labels) == len(
        report["leg-by-leg"].labels)


def test_compare_coproduct_pushout_chq(rng):
    for _ in range(5):
        b = rand_chq(rng)
        items = []
        for _ in range(rng.randint(0, 3)):
            a = rand_chq(rng, max_rank=2)
            c = rand_chq(rng, max_rank=2)
            items.append((rand_chq_map(rng, a, c), rand_chq_map(rng, a, b)))
        report = compare_coproduct_pushout(b, items)
        assert report["mutually-inverse"]
