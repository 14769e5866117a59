"""Smoke test for the magnus_kerint extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`,
or put the built `libmagnus_kerint.so` on PYTHONPATH as `magnus_kerint.so`.
"""

import magnus_kerint as mk


def main():
    ab = mk.Alphabet("a,b")
    a, b = ab.parse("a"), ab.parse("b")
    comm = a.commutator(b)
    assert str(comm) == "a^-1 b^-1 a b"
    assert comm == ab.parse("[a,b]")
    assert len(comm) == 4
    assert (a * a.inverse()).is_identity()

    series = mk.expand("[a,b]", 3)
    assert str(series) == "1 + a.b - b.a"
    assert series.coefficient("b.a") == "-1"
    assert (series * series.inverse()).min_positive_degree() is None
    assert mk.expand("a^-1", 3, gens="a").to_json()["coeffs"] == {"": "1", "a": "-1", "a.a": "1"}

    assert mk.is_member("[[a,b],a]", "lcs", 3)
    assert not mk.is_member("a^2", "lpc", 3, p=2)
    assert mk.violation("a^2", "lpc", 3, p=2)["required"] == "4Z"
    assert mk.violation("a^4", "zass:2", 3) is None

    assert mk.kerint("a^4", "zass", 3, p=2, mode="exhaustive")
    assert not mk.kerint("[a,b]", "lcs", 3)

    report = mk.cross_validate("zass", 3, p=2, max_len=6)
    assert report["words_tested"] == 1457 and report["disagreements"] == 0

    g = mk.Group.gnp(3, 2)
    assert g.order() == 32
    sizes = g.series_sizes()
    assert sizes[0] == 32 and sizes[-1] == 1
    u3 = mk.Group.unipotent("F2", 3)
    assert u3.order() == 8 and len(u3.elements()) == 8

    x = mk.Matrix("Z", [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    y = mk.Matrix("Z", [[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    image = mk.Group.unipotent("Z", 3).hom_eval([x, y], comm)
    assert image.rows() == [["1", "0", "1"], ["0", "1", "0"], ["0", "0", "1"]]

    assert mk.nilpotency_probe(3, trials=100)
    assert not mk.nilpotency_probe(3, depth=2, trials=100)

    try:
        mk.cross_validate("zass", 3, p=2, cap=10)
    except mk.BudgetExceeded:
        pass
    else:
        raise AssertionError("expected BudgetExceeded")
    try:
        ab.parse("[a,")
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
