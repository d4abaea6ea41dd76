import random

from hypothesis import given, settings, strategies as st

from codegraphs import (
    LinearCode,
    b_perp,
    build_realization,
    dual_code,
    dualize,
    full_behavior,
    graph_topology,
    realized_code,
    validate,
)

from codegraphs.realization import parse_row

from catalog import GF2, TB53_DUAL_CODES, short_trellis, spc3_star, spc3_tailbiting, tb53
from oracles import brute_dual, random_realization, words


def codes_of(r):
    return {c.id: words(c.code) for c in r.constraints}


def test_dual_of_short_trellis_constraints():
    d = dualize(short_trellis())
    got = codes_of(d)
    # trivial end-state coordinates are zero-width blocks
    assert got["C0"] == {(0, 0), (1, 1)}
    assert got["C1"] == {(0, 0, 0), (0, 1, 1), (1, 1, 0), (1, 0, 1)}
    assert got["C2"] == {(0, 0), (0, 1)}
    assert words(realized_code(d)) == {(0, 0, 0), (1, 1, 0), (0, 0, 1), (1, 1, 1)}


def test_dual_of_tail_biting_even_weight_sections():
    d = dualize(spc3_tailbiting())
    for ws in codes_of(d).values():
        assert ws == {(0, 0, 0), (1, 1, 1)}


def test_dual_of_tail_biting_53_matches_listed_codes():
    d = dualize(tb53())
    for c in d.constraints:
        ref = LinearCode.from_rows(GF2, c.code.structure, [_row(x, c) for x in TB53_DUAL_CODES[c.id]])
        assert c.code == ref


def _row(text, c):
    return parse_row(text, list(c.code.structure.dims))


def test_dualize_is_an_involution_gf3():
    r = build_realization(
        3, ["a", "b"], {"s": 2},
        [("x", ["a", "s"], ["1|12", "0|11"]), ("y", ["s", "b"], ["21|1"])],
    )
    assert dualize(dualize(r)) == r
    assert realized_code(dualize(r)) == dual_code(realized_code(r))


def test_sign_inverter_applied_at_second_endpoint_only():
    r = build_realization(3, ["a", "b"], {"s": 1}, [("x", ["a", "s"], ["1|1"]), ("y", ["s", "b"], ["1|1"])])
    d = dualize(r)
    # x: orth of (1,1) is (1,2); y: orth (1,2) then negate s -> (2,2) ~ (1,1)
    assert d.constraint("x").code.generators.tolist() == [[1, 2]]
    assert d.constraint("y").code.generators.tolist() == [[1, 1]]
    assert realized_code(d) == dual_code(realized_code(r))


def test_explicit_inverter_form_realizes_same_dual():
    r = build_realization(3, ["a", "b"], {"s": 1}, [("x", ["a", "s"], ["1|1"]), ("y", ["s", "b"], ["1|2"])])
    e = dualize(r, explicit_inverters=True)
    assert "inv_s" in e.constraint_ids and validate(e).ok
    assert realized_code(e) == realized_code(dualize(r))


def test_b_perp_examples():
    r = spc3_star()
    assert b_perp(r) == dual_code(full_behavior(r).code)
    assert words(b_perp(r)) == brute_dual(words(full_behavior(r).code), 2, 6)
    assert b_perp(spc3_tailbiting()).dim == 3
    zero = build_realization(2, ["a"], {}, [("x", ["a"], [])])
    assert b_perp(zero).dim == 1


@settings(max_examples=200, derandomize=True, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(0, 2**31))
def test_dualization_properties(p, seed):
    r = random_realization(random.Random(seed), p)
    d = dualize(r)
    assert realized_code(d) == dual_code(realized_code(r))
    assert b_perp(r) == dual_code(full_behavior(r).code)
    assert validate(d).ok == validate(r).ok
    t, td = graph_topology(r), graph_topology(d)
    assert t.edges == td.edges and t.degrees == td.degrees
    assert dualize(d) == r
