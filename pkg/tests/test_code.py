import random

import pytest
from hypothesis import given, settings, strategies as st

from codegraphs import BlockStructure, LinearCode, MatrixGF, PrimeField, cross_section, dual_code, project

from catalog import RM8_ROWS
from oracles import brute_dual, random_matrix, words

GF2 = PrimeField(2)


def bits(n, prefix="x"):
    return BlockStructure(tuple((f"{prefix}{k}", 1) for k in range(n)))


def code(rows, n, p=2):
    return LinearCode.from_rows(PrimeField(p), bits(n), rows)


SPC3 = [[1, 1, 0], [1, 0, 1]]


def test_block_structure_rules():
    s = BlockStructure.of(("a", 2), ("b", 0), ("c", 1))
    assert s.total_dim == 3 and s.offset("c") == 2 and s.columns(["c", "a"]) == [2, 0, 1]
    assert s.restrict(["c", "a"]).labels == ("a", "c")
    with pytest.raises(ValueError):
        BlockStructure.of(("a", 1), ("a", 1))
    with pytest.raises(ValueError):
        BlockStructure.of(("a", -1))
    with pytest.raises(ValueError):
        s.restrict(["zz"])


def test_dual_of_two_word_code():
    c = code([[1, 1, 0]], 3)
    assert words(dual_code(c)) == {(0, 0, 0), (1, 1, 0), (0, 0, 1), (1, 1, 1)}


def test_dual_of_full_space_is_zero():
    assert dual_code(LinearCode.full(GF2, bits(4))).dim == 0


def test_reed_muller_code_is_self_dual():
    c = code(RM8_ROWS, 8)
    assert c.dim == 4 and dual_code(c) == c


def test_projection_examples():
    c = code(SPC3, 3)
    assert words(project(c, ["x0", "x1"])) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert project(c, ["x0", "x1", "x2"]) == c
    assert project(c, []).dim == 0 and project(c, []).length == 0


def test_cross_section_examples():
    c = code(SPC3, 3)
    expected = {w[:2] for w in words(c) if w[2] == 0}
    assert words(cross_section(c, ["x0", "x1"])) == expected == {(0, 0), (1, 1)}
    assert cross_section(c, ["x0", "x1", "x2"]) == c
    assert cross_section(LinearCode.zero(GF2, bits(3)), ["x1"]).dim == 0


def test_unknown_label_errors():
    c = code(SPC3, 3)
    with pytest.raises(ValueError):
        project(c, ["nope"])
    with pytest.raises(ValueError):
        cross_section(c, ["nope"])


def test_enumerate_examples():
    assert LinearCode.zero(GF2, bits(3)).enumerate() == [(0, 0, 0)]
    assert code([[1, 1, 0]], 3).enumerate() == [(0, 0, 0), (1, 1, 0)]
    big = LinearCode.full(GF2, bits(25))
    with pytest.raises(ValueError):
        big.enumerate()


def test_contains_and_equality_canonical():
    a = code([[1, 1, 0], [0, 1, 1]], 3)
    b = code([[1, 0, 1], [1, 1, 0], [0, 1, 1]], 3)
    assert a == b
    assert a.contains([1, 0, 1]) and not a.contains([1, 0, 0])


@settings(max_examples=200, derandomize=True, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(1, 6), st.integers(0, 2**31), st.integers(0, 63))
def test_projection_cross_section_duality(p, n, seed, mask):
    rng = random.Random(seed)
    c = code(random_matrix(rng, p, rng.randint(0, n), n), n, p)
    keep = [f"x{k}" for k in range(n) if mask >> k & 1]
    left = dual_code(cross_section(c, keep))
    right = project(dual_code(c), keep)
    assert left == right
    assert project(c, keep).dim >= cross_section(c, keep).dim


@settings(max_examples=100, derandomize=True, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(1, 5), st.integers(0, 2**31))
def test_dual_matches_brute_force_and_closure(p, n, seed):
    rng = random.Random(seed)
    c = code(random_matrix(rng, p, rng.randint(0, n), n), n, p)
    ws = words(c)
    assert words(dual_code(c)) == brute_dual(ws, p, n)
    assert set(c.enumerate()) == ws
    listed = list(ws)
    for _ in range(5):
        x, y = rng.choice(listed), rng.choice(listed)
        assert tuple((a + b) % p for a, b in zip(x, y)) in ws
