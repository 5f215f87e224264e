from fractions import Fraction

import torheight


def frac(s):
    return Fraction(s)


def test_hull_and_volume():
    hull = torheight.hull([[0, 0], [2, 0], [0, 2], [1, 1]])
    assert len(hull["vertices"]) == 3  # interior point dropped
    assert torheight.volume(hull) == "2"


def test_dual_involution():
    pieces = {"pieces": [{"slope": ["0"], "constant": "1"}, {"slope": ["1"], "constant": "0"}]}
    lift = torheight.dual(pieces)
    assert {tuple(e["point"]) for e in lift["lift"]} == {("0",), ("1",)}
    back = torheight.dual(lift)
    assert back == pieces


def test_monge_ampere_mass():
    pieces = {"pieces": [{"slope": ["0"], "constant": "1"}, {"slope": ["1"], "constant": "0"}]}
    mu = torheight.monge_ampere(pieces)
    assert sum(frac(a["mass"]) for a in mu["atoms"]) == 1


def test_degree_unit_square():
    psi = {
        "pieces": [
            {"slope": ["0", "0"], "constant": "0"},
            {"slope": ["1", "0"], "constant": "0"},
            {"slope": ["0", "1"], "constant": "0"},
            {"slope": ["1", "1"], "constant": "0"},
        ]
    }
    assert torheight.degree(psi) == "2"


def test_local_height_example():
    big_psi = {"pieces": [{"slope": ["0"], "constant": "0"}, {"slope": ["1"], "constant": "0"}]}
    psi = {"pieces": [{"slope": ["0"], "constant": "1"}, {"slope": ["1"], "constant": "0"}]}
    assert torheight.local_height(big_psi, psi) == "-1"


def test_local_height_gamma():
    big_psi = {"pieces": [{"slope": ["0"], "constant": "0"}, {"slope": ["1"], "constant": "0"}]}
    psi = {"pieces": [{"slope": ["0"], "constant": "1/2"}, {"slope": ["1"], "constant": "0"}]}
    assert torheight.local_height(big_psi, psi, gamma="discrete:1/2") == "-1/2"


def test_global_height_desk_instance():
    instance = {
        "dimension": 1,
        "exponents": [[0], [1]],
        "places": [
            {"id": "fin", "kind": "finite", "weight": "1", "height": "1", "orders": [0, -1]},
            {
                "id": "arc",
                "kind": "circle",
                "weight": "1",
                "length": "1",
                "lambdas": [[["0", "0"]], [["0", "0"], ["1/2", "1/2"]]],
            },
        ],
    }
    report = torheight.global_height(instance)
    assert report["total"] == "5/4"
    assert report["exact"] is True
    assert [e["integral"] for e in report["per_place"]] == ["1/2", "1/8"]
