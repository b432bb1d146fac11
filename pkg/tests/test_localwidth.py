import itertools
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spdp.algebra import format_polynomial
from spdp.errors import NonConfluentError, ParseError
from spdp.families import Rng
from spdp.localwidth import (LocalModel, Profile, Window, circuit_rank_bound,
                             constant_type_profile_bound, count_kappa_step_sequences,
                             count_profiles, default_model, enumerate_histograms, make_blocks,
                             monomial_coordinate_budget, profile_of, profile_subspace_dim,
                             random_window, realized_profiles, round_transitions,
                             single_step_transitions, type_variables, width_for,
                             window_polynomial, words_up_to)

from oracles import all_histograms, all_normal_forms, dense_rank, realized_profiles_bruteforce

MODEL = default_model()


def first_letter_model():
    abc = ("a", "b", "c")
    return LocalModel(abc, tuple((x + y, x) for x in abc for y in abc), q=1)


def words(alphabet, max_len):
    for k in range(max_len + 1):
        for t in itertools.product(alphabet, repeat=k):
            yield "".join(t)


# -----------------------------
# Rewriting
# -----------------------------

def test_normal_form_examples():
    assert MODEL.normal_form("") == ""
    assert MODEL.normal_form("aaa") == "a"
    assert MODEL.normal_form("abab") == "ab"
    assert MODEL.normal_form("bbaab") == "ba"


def test_default_model_normal_forms():
    assert MODEL.normal_forms() == ["", "a", "b", "ab", "ba"]
    assert MODEL.S_prime == 7 == words_up_to(2, 2)


@pytest.mark.parametrize("model", [default_model(), first_letter_model()], ids=["lrb", "first"])
def test_confluence_exhaustive(model):
    for w in words(model.alphabet, 6):
        nfs = all_normal_forms(w, model.rules)
        assert nfs == {model.normal_form(w)}
        assert len(model.normal_form(w)) <= model.q


def test_normal_form_idempotent():
    for w in words(MODEL.alphabet, 6):
        nf = MODEL.normal_form(w)
        assert MODEL.normal_form(nf) == nf


rule_sets = st.lists(
    st.tuples(st.text("abc", min_size=2, max_size=3), st.text("abc", max_size=1)),
    min_size=1, max_size=4)


@settings(max_examples=120, deadline=None)
@given(rule_sets)
def test_critical_pair_check_agrees_with_exhaustive_search(rules):
    try:
        LocalModel(("a", "b", "c"), tuple(rules), q=6)
    except NonConfluentError as exc:
        word, _, _ = exc.pair
        assert len(all_normal_forms(word, rules)) > 1
        return
    except ValueError:
        return   # unbounded normal forms; q bound rejected
    for w in words("abc", 5):
        assert len(all_normal_forms(w, rules)) == 1


def test_nonconfluent_rejected():
    with pytest.raises(NonConfluentError) as info:
        LocalModel(("a", "b"), (("ab", "a"), ("ba", "b")), q=2)
    assert info.value.pair is not None


def test_unbounded_alternation_rejected():
    # idempotent letters alone leave abab... irreducible
    with pytest.raises(ValueError, match="longer than q"):
        LocalModel(("a", "b"), (("aa", "a"), ("bb", "b")), q=2)


def test_non_reducing_rule_rejected():
    with pytest.raises(ValueError, match="length-reducing"):
        LocalModel(("a", "b"), (("ab", "ba"),), q=2)


def test_model_json_roundtrip():
    back = LocalModel.from_json(MODEL.to_json())
    assert back == MODEL
    with pytest.raises(ParseError):
        LocalModel.from_dict({"alphabet": ["a"]})


def test_type_changes_at_most_q():
    for w in words(MODEL.alphabet, 7):
        assert MODEL.type_changes(w) <= MODEL.q
    assert MODEL.type_changes("aabbab") == 2


# -----------------------------
# Windows and profiles
# -----------------------------

def test_profile_of_empty_window():
    w = Window((), ())
    assert profile_of(w, MODEL).counts == ()


def test_identical_words_share_a_bin():
    w = Window(((0, 1), (2,)), (((0, "a"), (1, "a"), (2, "a")), ((0, "b"), (1, "b"), (2, "b"))))
    assert profile_of(w, MODEL).as_dict() == {"ab": 3}


def test_profile_blind_to_relabeling():
    rng = Rng(11)
    for _ in range(50):
        w = random_window(MODEL, 3, rng)
        perm = {0: 1, 1: 0, 2: 3, 3: 2}
        assert profile_of(w.relabel(perm), MODEL) == profile_of(w, MODEL)


def test_window_validation():
    model = default_model(R=2)
    with pytest.raises(ValueError):
        Window(((0, 1, 2),), ()).validate(model)
    with pytest.raises(ValueError):
        Window(((0, 1),), (((0, "a"), (0, "b")),)).validate(model)
    with pytest.raises(ValueError):
        Window(((0,), (1,)), (((0, "z"),),)).validate(model)
    Window(((0, 1),), (((0, "a"), (1, "b")),)).validate(model)


def test_random_windows_validate():
    rng = Rng(2)
    for _ in range(30):
        w = random_window(MODEL, 4, rng)
        w.validate(MODEL)
        assert profile_of(w, MODEL).total == MODEL.R


def test_profile_accessors():
    h = Profile.from_counter(Counter({"a": 2, "b": 0, "ab": 1}))
    assert h.counts == (("a", 2), ("ab", 1)) and h["b"] == 0 and h.total == 3


# -----------------------------
# Counting
# -----------------------------

@pytest.mark.parametrize("R,S,expected", [(3, 2, 4), (0, 5, 1), (5, 3, 21)])
def test_count_profiles_examples(R, S, expected):
    assert count_profiles(R, S) == expected


@pytest.mark.parametrize("R,S", [(R, S) for R in range(9) for S in range(1, 5)])
def test_count_profiles_matches_enumeration(R, S):
    assert count_profiles(R, S) == len(all_histograms(R, S))
    assert sorted(enumerate_histograms(R, S)) == sorted(all_histograms(R, S))


def test_count_profiles_rejects_bad_input():
    with pytest.raises(ValueError):
        count_profiles(-1, 2)
    with pytest.raises(ValueError):
        count_profiles(2, 0)


def test_step_sequences():
    assert all(count_kappa_step_sequences(1, k) == 1 for k in range(6))
    assert count_kappa_step_sequences(2, 3) == 8
    assert count_kappa_step_sequences(3, 40) == 3 ** 40


def test_single_step_transitions():
    # at most one of 3 interfaces, 2 symbols: 1 + 3*2
    assert single_step_transitions(3, 1, 2) == 7
    assert single_step_transitions(2, 2, 2) == 9 == round_transitions(MODEL, 2)


@pytest.mark.parametrize("R,kappa", [(R, k) for R in range(1, 5) for k in range(1, 5)])
def test_realized_profiles_match_bruteforce(R, kappa):
    got = {tuple(sorted(w for w, c in h.counts for _ in range(c)))
           for h in realized_profiles(MODEL, kappa, R)}
    brute = realized_profiles_bruteforce(MODEL, kappa, R)
    assert got == brute
    T = round_transitions(MODEL, R)
    assert len(got) <= min(count_profiles(R, MODEL.S_prime), count_kappa_step_sequences(T, kappa))


@pytest.mark.parametrize("n", [2 ** 8, 2 ** 10])
def test_realized_profiles_independent_of_kappa(n):
    R = width_for(n)
    counts = [len(realized_profiles(MODEL, k, R)) for k in range(2, 9)]
    assert len(set(counts)) == 1
    assert counts[0] <= count_profiles(R, MODEL.S_prime)
    # frozen on first run; every histogram over the five normal forms is reached
    assert counts[0] == {8: 495, 10: 1001}[R] == count_profiles(R, len(MODEL.normal_forms()))


def test_width_for():
    assert width_for(256) == 8 and width_for(1024) == 10
    assert width_for(256, C=2, c=1) == 16
    assert width_for(2) == 1


def test_make_blocks():
    assert make_blocks(5, 2) == ((0, 1), (2, 3), (4,))


# -----------------------------
# Bounds
# -----------------------------

def test_circuit_rank_bound_examples():
    assert circuit_rank_bound(1, 5, 3, 2) == 21
    assert circuit_rank_bound(4, 5, 2, 0) == 4 ** 4
    assert circuit_rank_bound(3, 4, 1, 1, c_gate=3) == 27 * 5
    with pytest.raises(ValueError):
        circuit_rank_bound(0, 4, 1, 1)


def test_constant_type_bound_dominates():
    for R in range(1, 12):
        assert count_profiles(R, 7) <= constant_type_profile_bound(R, 2, 7)


def test_monomial_coordinate_budget():
    # |M_{<=1}| = 4 for n = 3; C(3,1) = 3
    assert monomial_coordinate_budget(3, 1, 1) == 12
    assert monomial_coordinate_budget(3, 1, 1, B=2) == 24


def test_profile_subspace_dim_examples():
    assert profile_subspace_dim(Profile(()), 2) == 1
    assert profile_subspace_dim({"a": 2}, 2) == 3
    assert profile_subspace_dim({"a": 2, "b": 1}, {"a": 2, "b": 3}) == 9
    with pytest.raises(ValueError):
        profile_subspace_dim({"a": 1}, 0)


def test_type_variables():
    var = type_variables(MODEL, 2)
    assert len(var) == 5 and var[("", 1)] == 0


def test_window_polynomial_example():
    w = Window(((0, 1),), (((0, "a"), (1, "b")), ((0, "b"),)))
    # interface 0: "ab" with even length -> state 0; interface 1: "b" -> state 1
    p = window_polynomial(w, MODEL, 2)
    assert format_polynomial(p) == "x3"


@pytest.mark.parametrize("R,kappa,d", [(2, 1, 2), (2, 2, 2), (3, 2, 2), (4, 2, 3)])
def test_profile_subspace_bound_on_toy_instantiation(R, kappa, d):
    """Windows with a common profile span at most the product-of-binomials dimension."""
    model = default_model(R)
    blocks = make_blocks(R, model.b)
    choices = (None,) + model.alphabet
    by_profile = {}
    for picks in itertools.product(choices, repeat=R * kappa):
        steps = tuple(tuple((i, a) for i, a in enumerate(picks[t * R:(t + 1) * R]) if a)
                      for t in range(kappa))
        w = Window(blocks, steps)
        by_profile.setdefault(profile_of(w, model), []).append(window_polynomial(w, model, d))
    assert by_profile
    for h, polys in by_profile.items():
        keys = sorted({k for p in polys for k in p.terms})
        dim = dense_rank([[p.coefficient(k) for k in keys] for p in polys])
        assert dim <= profile_subspace_dim(h, d)
