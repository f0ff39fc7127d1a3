import pytest
from hypothesis import given, settings, strategies as st

from besc import bowtie as bt
from besc.config_search import (
    BadIndex,
    Configuration,
    SearchBudget,
    Status,
    component_guided_search,
    exhaustive_search,
    greedy_extend,
    is_config,
    seed_from_bowtie_edge,
)
from besc.triple_system import generate_random_linear, generate_steiner, validate

import oracles


def test_is_config_examples(fano):
    assert not is_config(fano, {0, 1, 2}, 6, 3)
    assert is_config(fano, {0, 1, 3}, 6, 3)
    assert is_config(fano, {4}, 3, 1)
    assert not is_config(fano, {0, 1, 3}, 6, 4)
    with pytest.raises(BadIndex):
        is_config(fano, {7}, 6, 1)


def test_seed_from_bowtie_edge(fano):
    B = bt.build_bowtie(fano)
    target = {0, 1, 3}  # lines 012, 034, 135
    hits = [j for j in range(B.e) if set(B.labels_of_edge(j)) == target]
    assert hits
    c = seed_from_bowtie_edge(fano, B, hits[0])
    assert c.edge_indices == frozenset(target) and len(c.span) == 6
    for j in range(B.e):
        c = seed_from_bowtie_edge(fano, B, j)
        assert c.k == 3 and is_config(fano, c.edge_indices, 6, 3)


def test_greedy_examples(single):
    seed = Configuration.of(single, [0])
    assert greedy_extend(single, seed, 1).config == seed
    res = greedy_extend(single, seed, 2)
    assert res.status is Status.FAILED and res.config.k == 1


def test_greedy_rejects_bad_seed(fano):
    with pytest.raises(ValueError):
        greedy_extend(fano, Configuration.of(fano, [0, 1, 2]), 4)
    with pytest.raises(ValueError):
        greedy_extend(fano, Configuration.of(fano, [0, 1, 3]), 2)


@pytest.mark.parametrize("n", [15, 19, 21, 25, 27])
def test_greedy_k6_on_steiner(n):
    H = generate_steiner(n)
    B = bt.build_bowtie(H)
    for j in range(0, B.e, max(1, B.e // 25)):
        res = greedy_extend(H, seed_from_bowtie_edge(H, B, j), 6)
        assert res.found
        assert is_config(H, res.config.edge_indices, 9, 6)


def test_greedy_with_random_ties_is_reproducible():
    H = generate_steiner(15)
    B = bt.build_bowtie(H)
    seed = seed_from_bowtie_edge(H, B, 0)
    a = greedy_extend(H, seed, 8, rng_seed=11)
    b = greedy_extend(H, seed, 8, rng_seed=11)
    assert a == b and a.found


def test_exhaustive_fano(fano):
    res = exhaustive_search(fano, 3, 6)
    assert res.found
    assert tuple(sorted(res.config.edge_indices)) == oracles.first_config(oracles.FANO, 3, 6) == (0, 1, 3)


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_exhaustive_fano_all_k(fano, k):
    res = exhaustive_search(fano, k, k + 3)
    assert res.found and is_config(fano, res.config.edge_indices, k + 3, k)


def test_exhaustive_not_found_and_budget(single):
    assert exhaustive_search(single, 2, 5).status is Status.NOT_FOUND
    H = generate_steiner(31)
    assert exhaustive_search(H, 10, 11, SearchBudget(max_nodes=1)).status is Status.INDETERMINATE
    assert exhaustive_search(H, 10, 11, SearchBudget(max_millis=1)).status in (Status.INDETERMINATE, Status.FOUND)


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        SearchBudget(max_nodes=0)
    with pytest.raises(ValueError):
        SearchBudget(max_millis=-5)


@settings(max_examples=60, deadline=None)
@given(st.integers(6, 13), st.fractions(0, 1), st.integers(0, 10**6), st.integers(1, 4), st.integers(0, 3))
def test_exhaustive_agrees_with_brute_force(n, target, seed, k, extra):
    H = generate_random_linear(n, target, seed)
    s = k + extra
    res = exhaustive_search(H, k, s)
    expected = oracles.first_config(list(H.edges), k, s)
    if expected is None:
        assert res.status is Status.NOT_FOUND
    else:
        assert res.found and tuple(sorted(res.config.edge_indices)) == expected


def test_component_guided_examples(fano):
    B = bt.build_bowtie(fano)
    (comp,) = bt.components(B)
    res = component_guided_search(fano, B, comp, 4)
    assert res.found and is_config(fano, res.config.edge_indices, 7, 4)

    H = validate(5, [(0, 1, 2), (0, 3, 4)])
    B = bt.build_bowtie(H)
    (iso,) = bt.components(B)
    assert component_guided_search(H, B, iso, 3).status is Status.FAILED

    H = generate_steiner(13)
    B = bt.build_bowtie(H)
    res = component_guided_search(H, B, bt.components(B)[0], 5)
    assert res.found and is_config(H, res.config.edge_indices, 8, 5)


def test_component_guided_seed_budget():
    H = validate(20, [(10, 11, 12), (10, 13, 14), (0, 1, 2), (0, 3, 4), (1, 3, 5)])
    B = bt.build_bowtie(H)
    comp = bt.components(B)[0]
    res = component_guided_search(H, B, comp, 6, SearchBudget(max_nodes=1))
    assert res.status is Status.INDETERMINATE
    res = component_guided_search(H, B, comp, 6)
    assert res.status is Status.FAILED and res.config.k == 3


@settings(max_examples=40, deadline=None)
@given(st.integers(7, 21), st.fractions(1, 2) | st.just(1), st.integers(0, 10**6), st.integers(3, 5))
def test_greedy_success_implies_exhaustive_success(n, target, seed, k):
    H = generate_random_linear(n, target, seed)
    B = bt.build_bowtie(H)
    for comp in bt.components(B):
        res = component_guided_search(H, B, comp, k)
        if res.found:
            assert is_config(H, res.config.edge_indices, k + 3, k)
            assert exhaustive_search(H, k, k + 3).found
            break
