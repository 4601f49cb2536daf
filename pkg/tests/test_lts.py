"""LTS algebra: composition, reachability, minimization, trace oracles."""

import random

import pytest

from recomp.lts import (Lts, StateBoundExceeded, bisimilar, compose,
                        compose_all, dump, hide_labels, minimize,
                        pi_reachable, reachable, trace_set, traces_equal,
                        unit_lts)

LABELS = [("A", None), ("B", None), ("C", None), ("D", None)]


def rand_lts(rng, max_states=5, with_pi=False, alphabet=None):
    n = rng.randrange(1, max_states + 1)
    if alphabet is None:
        alphabet = rng.sample(LABELS, rng.randrange(2, len(LABELS) + 1))
    pi = None
    if with_pi:
        pi = n
        n += 1
    edges = []
    for s in range(n):
        for l in range(len(alphabet)):
            if s == pi:
                edges.append((s, l, pi))  # absorbing
            elif rng.random() < 0.5:
                edges.append((s, l, rng.randrange(n)))
    initials = [0]
    return Lts.from_edges(n, alphabet, edges, initials, pi)


def test_from_edges_layout():
    l = Lts.from_edges(3, LABELS[:2], [(0, 0, 1), (0, 1, 2), (1, 0, 0)], [0])
    assert sorted(l.out(0)) == [(0, 1), (1, 2)]
    assert list(l.out(2)) == []
    assert l.n_edges == 3
    assert l.grouped(0) == {0: [1], 1: [2]}


def test_unit_is_identity():
    rng = random.Random(7)
    for _ in range(20):
        l = rand_lts(rng)
        assert bisimilar(compose(unit_lts(), l), l)
        assert bisimilar(compose(l, unit_lts()), l)


def test_compose_commutative_up_to_bisimulation():
    rng = random.Random(8)
    for _ in range(30):
        a, b = rand_lts(rng), rand_lts(rng)
        assert bisimilar(compose(a, b), compose(b, a))


def test_compose_associative_up_to_bisimulation():
    rng = random.Random(9)
    for _ in range(20):
        a, b, c = (rand_lts(rng, 4) for _ in range(3))
        assert bisimilar(compose(compose(a, b), c), compose(a, compose(b, c)))


def test_compose_synchronizes_shared_and_interleaves_rest():
    # a: A then B; b: B then C; shared B must wait for both
    a = Lts.from_edges(3, [("A", None), ("B", None)],
                       [(0, 0, 1), (1, 1, 2)], [0])
    b = Lts.from_edges(3, [("B", None), ("C", None)],
                       [(0, 0, 1), (1, 1, 2)], [0])
    c = compose(a, b)
    traces = trace_set(c, 3)
    assert (("A", None), ("B", None), ("C", None)) in traces
    assert (("B", None),) not in traces  # B blocked until A happened
    assert (("C", None),) not in traces  # C blocked until B happened


def test_pi_collapses_and_absorbs():
    err = Lts.from_edges(2, [("A", None)], [(0, 0, 1), (1, 0, 1)], [0], pi=1)
    other = Lts.from_edges(2, [("A", None), ("B", None)],
                           [(0, 0, 1), (0, 1, 0)], [0])
    c = compose(err, other)
    assert c.pi is not None
    assert pi_reachable(c)
    # absorbing: every alphabet letter self-loops on pi
    assert sorted(c.grouped(c.pi)) == list(range(len(c.alphabet)))


def test_compose_respects_bound():
    a = Lts.from_edges(3, [("A", None)], [(0, 0, 1), (1, 0, 2)], [0])
    b = Lts.from_edges(3, [("B", None)], [(0, 0, 1), (1, 0, 2)], [0])
    with pytest.raises(StateBoundExceeded):
        compose(a, b, bound=2)


def test_two_pi_operands_rejected():
    rng = random.Random(11)
    a = rand_lts(rng, 3, with_pi=True)
    b = rand_lts(rng, 3, with_pi=True)
    with pytest.raises(ValueError):
        compose(a, b)


def test_minimize_strong_preserves_bisimilarity():
    rng = random.Random(12)
    for _ in range(30):
        l = rand_lts(rng, 6, with_pi=rng.random() < 0.3)
        m = minimize(l, "strong")
        assert m.n_states <= l.n_states
        assert bisimilar(l, m)
        assert pi_reachable(m) == pi_reachable(l)
        # idempotent
        assert minimize(m, "strong").n_states == m.n_states


def test_minimize_merges_duplicate_states():
    # two states with identical behavior collapse to one
    l = Lts.from_edges(3, [("A", None)],
                       [(0, 0, 1), (0, 0, 2)], [0])
    m = minimize(l, "strong")
    assert m.n_states == 2


def test_observational_minimize_collapses_internal_steps():
    # s0 -B-> s1 -A-> s2 with B hidden: s0 and s1 are weakly equivalent
    l = Lts.from_edges(3, [("A", None), ("B", None)],
                       [(0, 1, 1), (1, 0, 2)], [0])
    m = minimize(l, "observational", hide={("B", None)})
    assert m.n_states == 2
    # strong minimization cannot merge them
    assert minimize(l, "strong").n_states == 3


def test_observational_keeps_pi_separate():
    l = Lts.from_edges(2, [("A", None)], [(0, 0, 1), (1, 0, 1)], [0], pi=1)
    m = minimize(l, "observational", hide={("A", None)})
    assert m.pi is not None
    assert pi_reachable(m)


def test_hide_labels_uses_fresh_tau():
    l = Lts.from_edges(2, LABELS[:2], [(0, 0, 1), (0, 1, 1)], [0])
    h1 = hide_labels(l, {LABELS[0]})
    h2 = hide_labels(l, {LABELS[0]})
    t1 = [lab for lab in h1.alphabet if lab[0] == "τ"]
    t2 = [lab for lab in h2.alphabet if lab[0] == "τ"]
    assert t1 and t2 and t1 != t2  # never synchronizes across systems


def test_trace_set_with_stuttering_super_alphabet():
    l = Lts.from_edges(2, [("A", None)], [(0, 0, 1)], [0])
    traces = trace_set(l, 2, alphabet=[("A", None), ("Z", None)])
    assert (("Z", None), ("A", None)) in traces
    assert (("A", None), ("A", None)) not in traces


def test_traces_equal_agrees_with_trace_sets():
    rng = random.Random(14)
    for _ in range(40):
        a, b = rand_lts(rng, 4), rand_lts(rng, 4)
        alpha = sorted(set(a.alphabet) | set(b.alphabet))
        expected = (trace_set(a, 4, alpha) == trace_set(b, 4, alpha))
        assert traces_equal(a, b, 4, alphabet=alpha) == expected


def test_bisimilar_is_symmetric_and_reflexive():
    rng = random.Random(15)
    for _ in range(20):
        a, b = rand_lts(rng, 4), rand_lts(rng, 4)
        assert bisimilar(a, a)
        assert bisimilar(a, b) == bisimilar(b, a)


def test_bisimilar_implies_trace_equal():
    # over a common alphabet (with differing alphabets, stuttering on
    # out-of-alphabet actions breaks the implication by design)
    rng = random.Random(16)
    hits = 0
    for _ in range(80):
        a = rand_lts(rng, 3, alphabet=LABELS[:2])
        b = rand_lts(rng, 3, alphabet=LABELS[:2])
        if bisimilar(a, b):
            hits += 1
            assert traces_equal(a, b, 5)
    assert hits > 0


def test_reachable_ignores_disconnected_states():
    l = Lts.from_edges(4, [("A", None)], [(0, 0, 1), (2, 0, 3)], [0])
    assert reachable(l) == {0, 1}


def test_compose_all_folds_left():
    rng = random.Random(17)
    parts = [rand_lts(rng, 3) for _ in range(3)]
    folded = compose_all(parts)
    manual = compose(compose(parts[0], parts[1]), parts[2])
    assert bisimilar(folded, manual)


def test_dump_lists_edges():
    l = Lts.from_edges(2, [("A", None)], [(0, 0, 1)], [0], pi=1)
    text = dump(l)
    assert "states 2" in text
    assert "init 0" in text
    assert "pi 1" in text
    assert "0 A 1" in text
