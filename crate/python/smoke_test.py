"""Quick end-to-end check of the Python bindings."""

import raagsurf


def main():
    c5 = raagsurf.Graph.cycle(5)
    assert c5.n == 5 and len(c5.edges()) == 5
    assert raagsurf.Graph.from_graph6(c5.to_graph6()) == c5
    assert c5.complement().is_isomorphic(c5)

    engine = raagsurf.Engine()
    v = engine.classify(c5)
    assert v.verdict == "FORBIDDEN" and v.pattern == "C5", v
    v = engine.classify(raagsurf.Graph.cycle(4))
    assert v.verdict == "EXCLUDED" and v.move_id is not None, v
    assert engine.is_excluded("FB]lg")

    counts, text = engine.pipeline(6)
    assert counts[-1] == 0 and text.endswith("survivors: 0\n")
    assert len(raagsurf.enumerate(5)) == 34

    lines = raagsurf.verify_skew(6)
    assert all(not bad for _, _, bad in lines)

    reports = {r.name: r for r in raagsurf.check_bundled()}
    assert reports["C5"].passed and reports["P1_7"].passed
    print(f"P2_8 conservative: {reports['P2_8']!r}")

    # K3 extended over every vertex is K4
    k4 = raagsurf.central_extension(raagsurf.Graph(3, [(0, 1), (1, 2), (0, 2)]), [0, 1, 2])
    assert len(k4.edges()) == 6
    assert raagsurf.set_commutator(raagsurf.Graph.path(3), [0], [2]) == [0, 2]
    try:
        raagsurf.Graph.from_graph6("!!")
    except ValueError:
        pass
    else:
        raise AssertionError("bad graph6 accepted")
    print("smoke test ok")


if __name__ == "__main__":
    main()
