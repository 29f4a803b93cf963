from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ptamc.model import (Guard, InvalidRun, ModelError, Move, Run, State, build, load_model, run_cost,
                         same_model, serialize, states_of, validate_nonblocking)
from ptamc.regions import Partition, RegionGraph
from ptamc.testkit.generators import RandomParams, gen_random, gen_repair


def test_guard_parsing():
    g = Guard.parse("x>=2 & x<5")
    assert 2 in g and 5 not in g and Fraction(9, 2) in g
    assert str(g) == "x>=2 & x<5"
    assert str(Guard.parse("x==3")) == "x=3"
    assert str(Guard.parse(None)) == "true"
    with pytest.raises(ModelError):
        Guard.parse("x>3 & x<2")
    with pytest.raises(ModelError):
        Guard.parse("y<2")


def test_repair_shape():
    p = gen_repair()
    assert p.locations == ("OK", "Problem", "Cheap", "Expensive")
    assert p.max_constant == 20
    assert [p.cost().rate[q] for q in p.locations] == [0, 3, 2, 4]
    assert p.cost().discrete == (0, 0, 0, 5, 0)
    assert validate_nonblocking(p) == []


def test_errors_carry_line_numbers():
    text = "locations:\n  - {name: a}\nedges:\n  - {from: a, to: b}\n"
    with pytest.raises(ModelError, match=r"line 4, edges\[0\]\.to"):
        load_model(text)
    with pytest.raises(ModelError, match="duplicate"):
        load_model("locations: [a, a]\n")
    with pytest.raises(ModelError, match="natural"):
        load_model("locations:\n  - {name: a, rate: -1}\n")
    with pytest.raises(ModelError, match="upper bounds"):
        load_model("locations:\n  - {name: a, invariant: 'x>1'}\n")


def test_blocking_is_reported():
    with pytest.raises(ModelError, match="blocking at x=2 in a"):
        build([{"name": "a", "invariant": "x<=2"}], [])
    build([{"name": "a", "invariant": "x<=2"}], [], check_blocking=False)


def test_runs_and_costs():
    p = gen_repair()
    run = Run(State("OK", Fraction(0)), (Move(Fraction(0), 0), Move(Fraction(2), 1), Move(Fraction(18), 3)))
    assert [str(s) for s in states_of(p, run)] == ["(OK,0)", "(Problem,0)", "(Cheap,2)", "(OK,0)"]
    assert run_cost(p, run) == 6 + 36 + 5
    with pytest.raises(InvalidRun, match="move 1"):
        states_of(p, Run(State("OK", Fraction(0)), (Move(Fraction(0), 0), Move(Fraction(1), 1))))


@given(st.integers(0, 10_000))
def test_serialization_roundtrip(seed):
    p = gen_random(RandomParams(max_discrete=2), seed)
    for fmt in ("yaml", "json"):
        assert same_model(load_model(serialize(p, fmt)), p)


def test_random_models_are_deterministic_and_nonblocking():
    a = gen_random(RandomParams(), 7)
    b = gen_random(RandomParams(), 7)
    assert serialize(a) == serialize(b)
    assert validate_nonblocking(a) == []
    sw = gen_random(RandomParams(rates=(0, 1)), 3)
    assert sw.cost().is_stopwatch()
    flat = gen_random(RandomParams(max_constant=0), 5)
    assert flat.max_constant == 0


def test_partition_indexing():
    part = Partition.of([0, 1, Fraction(5, 2)])
    assert part.count == 6
    assert [part.region_of(x) for x in (0, Fraction(1, 2), 1, 2, Fraction(5, 2), 3)] == [0, 1, 2, 3, 4, 5]
    assert part.label(3) == "(1,5/2)"
    assert part.sample(5) == Fraction(7, 2)


@given(st.integers(0, 10_000))
def test_region_graph_matches_concrete_moves(seed):
    """Every concrete discrete move from a region sample lands in the abstract target region."""
    p = gen_random(RandomParams(), seed)
    rg = RegionGraph(p, p.classical())
    part = rg.part
    for q, r in rg.nodes():
        x = part.sample(r)
        for e in p.out_edges[q]:
            edge = p.edges[e]
            t = rg.edge_targets(e, r)
            fires = x in edge.guard and (0 if edge.reset else x) in p.invariant[edge.target]
            assert (t is not None) == fires
            if fires:
                assert t == part.region_of(0 if edge.reset else x)
