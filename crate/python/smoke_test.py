"""Quick end-to-end check of the pysemilin extension module."""

import json

import pysemilin as ps


def main():
    f2, f4 = ps.Field("GF(2)"), ps.Field("GF(4)")
    assert f4.order == 4 and f4.characteristic == 2
    assert f4.mul(2, 3) == 1
    assert len(f2.homomorphisms_into(f4)) == 1

    frob = f4.homomorphisms_into(f4)[-1]
    l = ps.SemilinearMap(f4, f4, frob, [[1, 2, 0], [0, 1, 3], [2, 0, 1]])
    assert l.is_strong_embedding()

    report = l.to_table().check_gl()
    assert report["is_gl_mapping"] and report["dim_vg"] == 3
    assert report["strong_embedding"]["holds"]

    points = l.induced_point_map()
    assert points.check_pgl()["is_pgl_mapping"]
    recovered = points.reconstruct()
    assert recovered.scalar_multiple_of(l) is not None

    constant = ps.PointMap("GF(2)^3", "GF(2)^3", [0] * 7)
    try:
        constant.reconstruct()
    except ValueError as err:
        assert "ImageInLine" in str(err)
    else:
        raise AssertionError("constant map reconstructed")

    identity = ps.MappingTable("GF(2)^2", "GF(2)^2", [[0, 0], [0, 1], [1, 0], [1, 1]])
    again = ps.MappingTable.from_json(identity.to_json())
    assert again.images() == identity.images()

    c = ps.classify(ps.Field("GF(3)"), 2, [[1, 0], [0, 1], [1, 1], [1, 2]], projective=True)
    assert c["class"] == "Harmonic" and c["fully_extendable"]

    s = ps.search("GF(2)^2", "GF(2)^2")
    assert s["nontrivial_gl_dim_le_n"] == 6 and s["trivial_gl"] == 16

    suite = ps.run_suite("harmonic")
    assert suite["passed"], json.dumps(suite, indent=2)
    assert "harmonic" in ps.SUITES

    try:
        ps.Field("GF(6)")
    except ValueError:
        pass
    else:
        raise AssertionError("GF(6) accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
