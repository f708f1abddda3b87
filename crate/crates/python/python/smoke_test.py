"""Smoke test for the sumset_py extension. Build first with `maturin develop`."""

import sumset_py as sd


def main():
    assert sd.parse_density("0.55") == (11, 20)

    a = sd.build_greedy([0, 1], "1/2", 12)
    assert a.elements() == [3, 7, 11]
    assert 7 in a and len(a) == 3
    assert a.sumset([0, 1]).elements() == [3, 4, 7, 8, 11, 12]
    assert sd.GroundSet.from_bytes(a.to_bytes()) == a

    case_a = sd.rational_construction("1/2", 2)
    assert case_a["modulus"] == 12
    assert case_a["densities"] == ["1/4", "1/2"]

    theta = sd.Theta("sqrt:2")
    assert theta.floor_mul(5) == 7
    assert theta.frac_compare(1, "1/2") == -1
    assert theta.frac_compare(2, "1/2") == 1
    assert sd.beatty_construction(theta, 3, 10).elements() == [4, 7]

    n = 100_000
    a = sd.beatty_construction(theta, 2, n)
    two_a = a.iterated_sumset(2)
    ratio = two_a.counting(n) / n
    assert abs(ratio - 1 / float(theta)) < 2e-3, ratio

    report = sd.density_report(two_a)
    assert report["horizon"] == n
    assert report["tail_lower"] <= report["tail_upper"]

    check = sd.verify_case_b(theta, 2, 2, 10_000, epsilon="1/10")
    assert check["passed"] and not check["violations"]

    try:
        sd.parse_density("7/4")
    except ValueError:
        pass
    else:
        raise AssertionError("7/4 accepted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
