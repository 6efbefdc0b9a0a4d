"""Smoke test for the pyhypercover extension.

Build and run from the workspace root:

    cargo build --release -p hypercover-py
    cp target/release/libpyhypercover.so crates/py/python/pyhypercover.so
    python3 crates/py/python/smoke_test.py

or install with `maturin develop` inside crates/py and run the script.
"""

import json

import pyhypercover as hc


def main():
    evens = hc.EpSet.ap(0, 2)
    odds = hc.EpSet.ap(1, 2)
    assert 4 in evens and 5 not in evens
    assert (evens | odds) == hc.EpSet.naturals()
    assert (evens & odds).is_empty()
    assert evens.cardinality() is None
    assert hc.EpSet.finite([3, 1]).cardinality() == 2
    assert evens.enumerate(3) == [0, 2, 4]
    assert hc.EpSet.from_json(evens.to_json()) == evens

    path = hc.Hypergraph.from_finite([[1, 2], [2, 3], [3, 4]])
    assert len(path) == 3
    assert path.check_c(2, 2) is None
    assert path.check_c(2, 1) == [0, 1]
    assert hc.brute_minimal_covers(path) == [[1, 3], [2, 3], [2, 4]]

    w = hc.find_witness(path, {2, 3})
    assert w.cover == [2, 3] and w.witness == {2: 0, 3: 2}
    w.verify(path)
    assert hc.WitnessedCover.from_json(w.to_json()) == w
    try:
        hc.find_witness(path, {1, 2, 3})
    except ValueError:
        pass
    else:
        raise AssertionError("non-minimal cover accepted")

    h = hc.Hypergraph([evens])
    order = hc.build_maximizing(h, 2, 1)
    assert order.is_maximizing(h)
    assert order.edge_max(evens) == 0
    assert json.loads(order.to_json())[0]["inner"] == {"promoted": 0}
    assert hc.klimo_extract(order, h).cover == [0]
    assert hc.two_tier_cover(h, 2, 1).cover == [0]

    mixed = hc.Hypergraph([evens, hc.EpSet.finite([1, 5])])
    cover = hc.two_tier_cover(mixed, 2, 1)
    cover.verify(mixed)

    g = hc.Hypergraph.from_finite([[0, 1], [1, 2]])
    layers = hc.build_closure_chain(g, 2, 2, [hc.EpSet.finite([0]), hc.EpSet.finite([2])])
    assert [l.to_json() for l in layers] == [
        '{"fin":[]}',
        '{"fin":[0]}',
        '{"fin":[0,2]}',
        '{"fin":[0,1,2]}',
    ]
    assert hc.is_good_cut(g, layers)
    assert hc.layered_cover(g, layers).cover in ([1], [0, 2])
    assert hc.layered_order(g, layers, 2, 2).is_maximizing(g)

    inst = hc.generate("epset_ckr", 3, 2, 4, vertices=40, seed=7)
    assert inst.check_c(3, 2) is None
    hc.klimo_extract(hc.build_maximizing(inst, 3, 2), inst).verify(inst)

    print("pyhypercover smoke test passed")


if __name__ == "__main__":
    main()
