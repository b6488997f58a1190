import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multimult.catalog import (
    catalan_monoid_mms,
    dihedral_kl_mms,
    undeformable_pair_fixture,
    projective_functor_mms,
    s3_kl_fixture,
    s3_multisemigroup_fixture,
    singleton,
)
from multimult.errors import BoundMismatch, NotAssociative, NotFinitary, UnknownElement, WordTooShort
from multimult.mms import (
    MultiMultisemigroup,
    Multisemigroup,
    MultiplicityFunction,
    diamond_product,
    evaluate_word_prefix,
    evaluate_word_suffix,
    from_structure_constants,
    function_algebra_multiply,
    indicator,
    is_finitary,
    lift_multisemigroup,
    mu,
    reduce,
    structure_constants,
    underlying_multisemigroup,
    verify_associativity,
)
from multimult.semiring import OMEGA, Cardinal

import oracles

S3 = s3_kl_fixture()


def F(m, values):
    return MultiplicityFunction(m.carrier, m.bound, values)


def test_mu_examples():
    assert mu(S3, "st", "st").as_dict() == {"st": 1, "sts": 2}
    assert mu(S3, "ts", "sts").as_dict() == {"sts": 4}
    assert mu(singleton(2), "a", "a").as_dict() == {"a": 2}
    assert mu(S3, "st", "st")["e"] == Cardinal(0)
    with pytest.raises(UnknownElement):
        mu(S3, "st", "tst")


def test_table_values_respect_bound():
    with pytest.raises(BoundMismatch):
        MultiMultisemigroup.from_table(["a"], 2, {("a", "a"): {"a": 3}})
    with pytest.raises(BoundMismatch):
        MultiMultisemigroup.from_table(["a"], 2, {("a", "a"): {"a": "omega"}})
    with pytest.raises(UnknownElement):
        MultiMultisemigroup.from_table(["a"], 2, {("a", "b"): {"a": 1}})
    with pytest.raises(ValueError):
        MultiMultisemigroup.from_table(["a|b"], 2, {})
    with pytest.raises(ValueError):
        MultiMultisemigroup.from_table([], 2, {})


def test_unvalidated_construction_is_flagged():
    m = MultiMultisemigroup.from_table(S3.carrier, OMEGA, S3.table())
    assert not m.validated
    assert m.verified().validated
    bad = S3.with_value("st", "st", "sts", 3)
    assert not bad.validated
    with pytest.raises(NotAssociative):
        bad.verified()
    with pytest.raises(NotAssociative):
        MultiMultisemigroup.from_table(bad.carrier, OMEGA, bad.table(), check=True)


def test_verify_valid_fixture():
    assert verify_associativity(S3) is None


def test_verify_corrupted_fixture():
    bad = S3.with_value("st", "st", "sts", 3)
    # r = e never fails (e is a unit).  With r = s: s*(t*st) = s*(sts + t) = 2 sts + st,
    # while (s*t)*st = st*st = 3 sts + st in the corrupted table.
    expected = ("s", "t", "st", "sts", Cardinal(2), Cardinal(3))
    assert oracles.ref_verify(bad) == expected
    cex = verify_associativity(bad)
    assert (cex.r, cex.s, cex.t, cex.element, cex.lhs, cex.rhs) == expected


@pytest.mark.parametrize("n", range(3, 9))
def test_dihedral_valid(n):
    assert verify_associativity(dihedral_kl_mms(n)) is None


@pytest.mark.parametrize("m", range(2, 6))
def test_catalan_valid(m):
    assert verify_associativity(catalan_monoid_mms(m)) is None


def test_projective_valid_random():
    rng = np.random.default_rng(11)
    for _ in range(10):
        k = int(rng.integers(1, 4))
        d = rng.integers(0, 6, (k, k))
        np.fill_diagonal(d, rng.integers(1, 6, k))
        assert verify_associativity(projective_functor_mms(d)) is None


@st.composite
def small_tables(draw, max_size=3, max_value=2):
    n = draw(st.integers(1, max_size))
    bound = draw(st.sampled_from([1, 2, 3, OMEGA]))
    top = max_value if bound is OMEGA else min(max_value, bound)
    values = draw(st.lists(st.integers(0, top), min_size=n**3, max_size=n**3))
    codes = np.array(values, dtype=np.int64).reshape(n, n, n)
    if bound is OMEGA and draw(st.booleans()):
        omega_mask = np.array(draw(st.lists(st.booleans(), min_size=n**3, max_size=n**3))).reshape(n, n, n)
        codes = np.where(omega_mask & (codes > 0), -1, codes)
    return MultiMultisemigroup([f"x{i}" for i in range(n)], bound, codes)


@settings(max_examples=300, deadline=None)
@given(small_tables())
def test_verify_matches_reference(m):
    ref = oracles.ref_verify(m)
    cex = verify_associativity(m)
    if ref is None:
        assert cex is None
    else:
        assert (cex.r, cex.s, cex.t, cex.element, cex.lhs, cex.rhs) == ref


def test_large_values_stay_exact():
    big = 2**40
    m = singleton(big)
    assert evaluate_word_prefix(m, ["a", "a", "a"])["a"] == Cardinal(big**2)
    assert verify_associativity(m) is None


# -- words ----------------------------------------------------------------------


def test_word_examples():
    assert evaluate_word_prefix(S3, ["st", "st"]).as_dict() == {"st": 1, "sts": 2}
    word = ["sts", "st", "s"]
    expected = oracles.s3_word_oracle(word)
    assert expected == {"sts": 8}
    assert evaluate_word_prefix(S3, word).as_dict() == expected
    assert evaluate_word_suffix(S3, word).as_dict() == expected
    assert evaluate_word_prefix(singleton(2), ["a"] * 3).as_dict() == {"a": 4}


def test_words_match_group_algebra_oracle():
    for word in itertools.product(S3.carrier, repeat=3):
        expected = oracles.s3_word_oracle(list(word))
        assert evaluate_word_prefix(S3, word).as_dict() == expected
        assert evaluate_word_suffix(S3, word).as_dict() == expected


def test_length_two_word_is_mu():
    for s, t in itertools.product(S3.carrier, repeat=2):
        assert evaluate_word_prefix(S3, [s, t]) == S3.mu(s, t)
        assert evaluate_word_suffix(S3, [s, t]) == S3.mu(s, t)


def test_naive_lift_of_undeformable_pair_breaks_word_evaluation():
    base = undeformable_pair_fixture()
    naive = MultiMultisemigroup.from_table(
        base.carrier, OMEGA, {(s, t): {r: 1 for r in base(s, t)} for s, t in itertools.product(base.carrier, repeat=2)}
    )
    word = ["a", "a", "b"]
    prefix = evaluate_word_prefix(naive, word)
    suffix = evaluate_word_suffix(naive, word)
    # a(ab): mu[a,b](a) mu[a,a](a) + mu[a,b](b) mu[a,b](a) = 2; (aa)b: mu[a,a](a) mu[a,b](a) = 1
    assert prefix["a"] == Cardinal(2)
    assert suffix["a"] == Cardinal(1)
    assert verify_associativity(naive) is not None


def test_word_errors():
    with pytest.raises(WordTooShort):
        evaluate_word_prefix(S3, ["s"])
    with pytest.raises(WordTooShort):
        evaluate_word_suffix(S3, [])
    with pytest.raises(UnknownElement):
        evaluate_word_prefix(S3, ["s", "u", "t"])
    with pytest.raises(TypeError):
        evaluate_word_prefix(S3, "sts")


def test_length_four_closed_forms():
    for word in [("s", "t", "s", "t"), ("st", "ts", "sts", "e"), ("ts", "s", "t", "st")]:
        prefix = evaluate_word_prefix(S3, word)
        suffix = evaluate_word_suffix(S3, word)
        for x in S3.carrier:
            assert prefix[x] == oracles.closed_form_prefix4(S3, word, x)
            assert suffix[x] == oracles.closed_form_suffix4(S3, word, x)


def test_associativity_law_equivalent_to_length_three_words_exhaustive_two_elements():
    carrier = ("a", "b")
    for bound in (OMEGA, 2):
        for values in itertools.product(range(3), repeat=8):
            m = MultiMultisemigroup(carrier, bound, np.array(values).reshape(2, 2, 2))
            consistent = all(
                evaluate_word_prefix(m, w) == evaluate_word_suffix(m, w) for w in itertools.product(carrier, repeat=3)
            )
            assert consistent == (verify_associativity(m) is None), values


@settings(max_examples=300, deadline=None)
@given(small_tables(max_size=3, max_value=2))
def test_associativity_law_equivalent_to_length_three_words(m):
    consistent = all(
        evaluate_word_prefix(m, w) == evaluate_word_suffix(m, w) for w in itertools.product(m.carrier, repeat=3)
    )
    assert consistent == (verify_associativity(m) is None)


# -- reduction and lifting -------------------------------------------------------------


def test_reduce_examples():
    assert underlying_multisemigroup(reduce(S3, 1)) == s3_multisemigroup_fixture()
    assert reduce(S3, OMEGA) == S3
    r = reduce(singleton(2), 1)
    assert r.bound == 1 and r.value("a", "a", "a") == Cardinal(1, 1)
    with pytest.raises(BoundMismatch):
        reduce(reduce(S3, 3), 4)


def test_reduce_values():
    r = reduce(S3, 3)
    assert r.mu("sts", "sts").as_dict() == {"sts": 3}
    assert r.mu("st", "st").as_dict() == {"st": 1, "sts": 2}
    assert reduce(S3, 2) == reduce(reduce(S3, 3), 2)


def test_reduce_composes_and_preserves_validity():
    fixtures = [S3, dihedral_kl_mms(4), projective_functor_mms([[2, 1], [0, 3]]), singleton(5)]
    for m in fixtures:
        for lam in range(1, 7):
            r = reduce(m, lam)
            assert verify_associativity(r) is None
            for lam2 in range(1, lam + 1):
                assert reduce(r, lam2) == reduce(m, lam2)


def test_underlying_multisemigroup():
    assert underlying_multisemigroup(S3) == s3_multisemigroup_fixture()
    proj = underlying_multisemigroup(projective_functor_mms([[1, 0], [2, 1]]))
    assert all(len(proj(s, t)) <= 1 for s, t in itertools.product(proj.carrier, repeat=2))
    cat = catalan_monoid_mms(3)
    ms = underlying_multisemigroup(cat)
    for s, t in itertools.product(cat.carrier, repeat=2):
        f = tuple(int(c) for c in s)
        g = tuple(int(c) for c in t)
        fg = "".join(str(f[x - 1]) for x in g)
        assert ms(s, t) == {fg}


def test_lift_examples():
    support = s3_multisemigroup_fixture()
    lifted = lift_multisemigroup(support, OMEGA)
    for s, t in itertools.product(support.carrier, repeat=2):
        assert set(lifted.mu(s, t).as_dict().values()) <= {"omega"}
    assert lifted.mu("s", "ts").as_dict() == {"s": "omega", "sts": "omega"}
    assert underlying_multisemigroup(lifted) == support
    one = Multisemigroup(("a",), {("a", "a"): {"a"}})
    assert lift_multisemigroup(one, 3).value("a", "a", "a") == Cardinal(3, 3)


@pytest.mark.parametrize("kappa", [1, 2, 3, 4, OMEGA])
def test_lift_round_trip(kappa):
    for ms in (s3_multisemigroup_fixture(), undeformable_pair_fixture(), underlying_multisemigroup(catalan_monoid_mms(3))):
        lifted = lift_multisemigroup(ms, kappa)
        assert verify_associativity(lifted) is None
        assert underlying_multisemigroup(lifted) == ms
        assert underlying_multisemigroup(reduce(lifted, 1)) == ms


def test_lift_rejects_non_associative():
    bad = Multisemigroup(("a", "b"), {("a", "a"): {"b"}, ("b", "a"): {"a"}})
    assert bad.associativity_failure() is not None
    with pytest.raises(NotAssociative):
        lift_multisemigroup(bad, 2)


def test_multisemigroup_associativity():
    assert s3_multisemigroup_fixture().is_associative()
    assert undeformable_pair_fixture().is_associative()


# -- finitary and algebras ----------------------------------------------------------------


def test_is_finitary():
    assert is_finitary(S3)
    v = is_finitary(lift_multisemigroup(s3_multisemigroup_fixture(), OMEGA))
    assert not v and "omega" in v.reasons[0]
    assert not is_finitary(reduce(S3, 5))
    assert not is_finitary(singleton(1, 3))


def test_structure_constants():
    alg = structure_constants(S3)
    pos = {x: i for i, x in enumerate(alg.basis)}
    assert alg.constants[pos["sts"], pos["sts"], pos["sts"]] == 6
    assert alg.constants[pos["st"], pos["st"]].tolist() == [0, 0, 0, 1, 0, 2]
    assert structure_constants(singleton(2)).constants.tolist() == [[[2]]]
    proj = structure_constants(projective_functor_mms([[2, 1], [4, 3]]))
    pos = {x: i for i, x in enumerate(proj.basis)}
    d = [[2, 1], [4, 3]]
    for i, j, i2, j2 in itertools.product((1, 2), repeat=4):
        got = proj.constants[pos[f"F_{i}_{j}"], pos[f"F_{i2}_{j2}"], pos[f"F_{i}_{j2}"]]
        assert got == d[j - 1][i2 - 1]
    with pytest.raises(NotFinitary):
        structure_constants(reduce(S3, 1))


def test_structure_constant_product_associative_iff_valid():
    assert structure_constants(S3).is_associative()
    bad = S3.with_value("st", "st", "sts", 3)
    assert not structure_constants(bad).is_associative()
    rng = np.random.default_rng(5)
    for _ in range(200):
        c = rng.integers(0, 3, (2, 2, 2))
        m = MultiMultisemigroup(("a", "b"), OMEGA, c)
        assert structure_constants(m).is_associative() == (verify_associativity(m) is None)


def test_from_structure_constants_round_trip():
    alg = structure_constants(S3)
    assert from_structure_constants(alg) == S3
    with pytest.raises(ValueError):
        from_structure_constants(type(alg)(("a",), np.array([[[-1]]])))


def test_diamond_product_counterexample():
    support = s3_multisemigroup_fixture()
    sts, st_, s = {"sts": 1}, {"st": 1}, {"s": 1}
    assert diamond_product(support, diamond_product(support, sts, st_), s) == {"sts": 1}
    assert diamond_product(support, st_, s) == {"s": 1, "sts": 1}
    assert diamond_product(support, sts, diamond_product(support, st_, s)) == {"sts": 2}
    b = "boolean"
    assert diamond_product(support, diamond_product(support, sts, st_, b), s, b) == {"sts": 1}
    assert diamond_product(support, sts, diamond_product(support, st_, s, b), b) == {"sts": 1}


def test_indicator():
    f = indicator(("a", "b"), OMEGA, "a")
    assert f.as_dict() == {"a": 1}
    with pytest.raises(UnknownElement):
        indicator(("a", "b"), OMEGA, "c")
    total = indicator(S3.carrier, OMEGA, "e")
    for x in S3.carrier[1:]:
        total = total + indicator(S3.carrier, OMEGA, x)
    assert total.as_dict() == {x: 1 for x in S3.carrier}


def test_function_algebra_examples():
    chi = lambda x: indicator(S3.carrier, OMEGA, x)  # noqa: E731
    assert function_algebra_multiply(S3, chi("st"), chi("st")).as_dict() == {"st": 1, "sts": 2}
    zero = F(S3, {})
    assert function_algebra_multiply(S3, zero, chi("ts")) == zero
    assert function_algebra_multiply(S3, chi("s") + chi("t"), chi("e")).as_dict() == {"s": 1, "t": 1}
    with pytest.raises(BoundMismatch):
        function_algebra_multiply(S3, MultiplicityFunction(S3.carrier, 2), chi("e"))


FIXTURES = {
    "s3": S3,
    "d4": dihedral_kl_mms(4),
    "catalan3": catalan_monoid_mms(3),
    "proj": projective_functor_mms([[1, 2], [0, 1]]),
    "singleton": singleton(3),
    "bounded": reduce(dihedral_kl_mms(3), 3),
    "lifted": lift_multisemigroup(undeformable_pair_fixture(), OMEGA),
}


@pytest.mark.parametrize("name", FIXTURES)
def test_indicators_reproduce_mu(name):
    m = FIXTURES[name]
    for s, t in itertools.product(m.carrier, repeat=2):
        got = function_algebra_multiply(m, indicator(m.carrier, m.bound, s), indicator(m.carrier, m.bound, t))
        assert got == m.mu(s, t)


@st.composite
def functions_on(draw, m):
    top = 3 if m.bound is OMEGA else m.bound
    values = {}
    for x in m.carrier:
        v = draw(st.integers(0, top))
        if m.bound is OMEGA and v and draw(st.integers(0, 9)) == 0:
            v = "omega"
        values[x] = v
    return MultiplicityFunction(m.carrier, m.bound, values)


@pytest.mark.parametrize("name", FIXTURES)
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_function_algebra_laws(name, data):
    m = FIXTURES[name]
    f, g, h = (data.draw(functions_on(m)) for _ in range(3))
    mul = lambda a, b: function_algebra_multiply(m, a, b)  # noqa: E731
    assert mul(f, mul(g, h)) == mul(mul(f, g), h)
    assert mul(f + g, h) == mul(f, h) + mul(g, h)
    assert mul(h, f + g) == mul(h, f) + mul(h, g)


def test_scale_adds_copies():
    f = F(S3, {"s": 2, "t": "omega"})
    assert f.scale(Cardinal(3)).as_dict() == {"s": 6, "t": "omega"}
    assert f.scale(Cardinal(0)).as_dict() == {}
    assert f.scale(Cardinal(OMEGA)).as_dict() == {"s": "omega", "t": "omega"}
