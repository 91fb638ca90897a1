import random

import pytest

from sforge import (
    DiagActor,
    HomotopeTower,
    IdempotentFamily,
    LevelBudgetExceeded,
    LevelMismatch,
    MatrixAlgebra,
    NoArrow,
    NonInvertibleComponent,
    RankTooSmall,
    RootActor,
    ScaledOperator,
    Zmod,
    actor_relation_suite,
    ad_equivariance_check,
    equal_after_localization,
    premorphism_equiv,
    random_element,
    random_word,
    scaled_operator_suite,
    split_naturality_suite,
    st_eval,
    tower_ad,
    tower_relation_suite,
)


@pytest.fixture
def tower():
    A = MatrixAlgebra(Zmod(12), 4)
    fam = IdempotentFamily.matrix_units(A)
    return HomotopeTower(A, 2, k_max=4, family=fam)


def test_scale_matches_modular_powers(tower):
    for k in range(50):
        assert tower.scale(k) == pow(2, k, 12)
    assert tower.stable_exponent() == 2


def test_structure_maps_compose_downward(tower, rng):
    alg = tower.algebra
    for _ in range(50):
        x = tower.element(4, random_element(alg, rng))
        one_step = tower.structure_map(tower.structure_map(x, 2), 1)
        assert one_step == tower.structure_map(x, 1)
        assert tower.structure_map(x, 4) == x
    with pytest.raises(NoArrow):
        tower.structure_map(tower.element(1, alg.zero), 2)
    with pytest.raises(NoArrow):
        tower.structure_map(tower.element(1, alg.zero), -1)


def test_structure_map_words_scale_payloads(tower, rng):
    for _ in range(30):
        w = random_word(tower.context(3), rng, 3)
        v = tower.structure_map_word(w, 1)
        assert v.context.level == 1
        for L, M in zip(w.letters, v.letters):
            assert M.a == tower.scalar_pow_mul(2, L.a)
        assert equal_after_localization(
            tower, tower.structure_map_word(v, 0), tower.structure_map_word(w, 0)
        )
    with pytest.raises(NoArrow):
        tower.structure_map_word(random_word(tower.context(1), rng, 1), 2)


def test_homotope_product_is_associative(tower, rng):
    alg = tower.algebra
    for _ in range(100):
        k = rng.randrange(5)
        x, y, z = (tower.element(k, random_element(alg, rng)) for _ in range(3))
        assert tower.homotope_mul(tower.homotope_mul(x, y), z) == tower.homotope_mul(
            x, tower.homotope_mul(y, z)
        )
    with pytest.raises(LevelMismatch):
        tower.homotope_mul(tower.element(1, alg.zero), tower.element(2, alg.zero))
    with pytest.raises(LevelMismatch):
        tower.add(tower.element(1, alg.zero), tower.element(2, alg.zero))


def test_structure_map_respects_products(tower, rng):
    alg = tower.algebra
    for _ in range(100):
        k = rng.randrange(1, 5)
        x = tower.element(k, random_element(alg, rng))
        y = tower.element(k, random_element(alg, rng))
        lhs = tower.structure_map(tower.homotope_mul(x, y), k - 1)
        rhs = tower.homotope_mul(
            tower.structure_map(x, k - 1), tower.structure_map(y, k - 1)
        )
        assert lhs == rhs


def _scalar_tower(m, s, k_max=6):
    return HomotopeTower(Zmod(m), s, k_max=k_max)


def test_premorphism_identical_operators_agree_exactly():
    t = _scalar_tower(12, 2)
    R = t.algebra
    f = ScaledOperator(R, "L", 5, 1)
    g = ScaledOperator(R, "L", 5, 1)
    v = premorphism_equiv(t, f, g, list(R.elements()))
    assert v and v.status == "equivalent" and v.extra_level == 0


def test_premorphism_equivalence_needs_extra_maps():
    t = _scalar_tower(12, 2)
    R = t.algebra
    f = ScaledOperator(R, "L", 3, 0)
    g = ScaledOperator(R, "L", 0, 0)
    v = premorphism_equiv(t, f, g, list(R.elements()))
    assert v.status == "equivalent"
    assert v.extra_level == 2  # 2^2 * 3 = 0 mod 12, 2 * 3 = 6 is not zero


def test_premorphism_inequivalence_has_stable_witness():
    t = _scalar_tower(12, 2)
    R = t.algebra
    f = ScaledOperator(R, "L", 1, 0)
    g = ScaledOperator(R, "L", 0, 0)
    v = premorphism_equiv(t, f, g, list(R.elements()))
    assert v.status == "inequivalent"
    b, residual = v.witness
    assert residual != R.zero
    # residual sits on the power cycle: one full period multiplies back to itself
    period = len(t._power_table()) - t.stable_exponent()
    r = residual
    for _ in range(period):
        r = R.scalar_mul(t.s, r)
    assert r == residual


def test_premorphism_budget_exhaustion_is_inconclusive():
    t = _scalar_tower(32, 2, k_max=2)
    R = t.algebra
    f = ScaledOperator(R, "L", 1, 0)
    g = ScaledOperator(R, "L", 0, 0)
    v = premorphism_equiv(t, f, g, list(R.elements()))
    assert v.status == "inconclusive" and not v
    # the same pair certifies with a budget past the nilpotency degree
    assert premorphism_equiv(t, f, g, list(R.elements()), budget=5).status == "equivalent"


def test_localized_transfer_maps(tower, rng):
    loc = tower.localized()
    assert loc.warning is None
    R, L = tower.scalar, loc.scalar_loc.ring
    for _ in range(200):
        a, b = random.Random(rng.random()).randrange(12), rng.randrange(12)
        pa, pb = loc.scalar_loc.psi(a), loc.scalar_loc.psi(b)
        assert loc.scalar_loc.psi(R.mul(a, b)) == L.mul(pa, pb)
        assert loc.scalar_loc.psi(R.add(a, b)) == L.add(pa, pb)
    for x in L.elements():
        assert loc.scalar_loc.psi(loc.scalar_loc.lift(x)) == x
    assert L.mul(loc.s_unit, loc.s_pow_inv(1)) == L.one


def test_gamma_turns_circle_into_product(tower, rng):
    loc = tower.localized()
    alg = tower.algebra
    for _ in range(100):
        k = rng.randrange(5)
        x = tower.element(k, random_element(alg, rng))
        y = tower.element(k, random_element(alg, rng))
        circ = tower.add(tower.add(x, y), tower.homotope_mul(x, y))
        lhs = loc.gamma(k, circ.payload)
        rhs = loc.algebra.mul(loc.gamma(k, x.payload), loc.gamma(k, y.payload))
        assert lhs == rhs


def test_identity_actor_fixes_words(tower, rng):
    fam = tower.family
    d = DiagActor(tower, 2, fam.idempotent(2), 0)
    for _ in range(30):
        w = random_word(tower.context(3), rng, 3)
        assert tower_ad(tower, d, w) == w


def test_equivariance_scan_all_levels(tower, rng):
    from sforge.tower import _random_actor

    checked = 0
    for _ in range(500):
        k_out = rng.randrange(tower.k_max)
        den = rng.randrange(2)
        actor = _random_actor(tower, rng, den)
        if actor is None:
            continue
        w = random_word(tower.context(k_out + den), rng, rng.randrange(1, 4))
        holds, out = ad_equivariance_check(tower, actor, w)
        assert holds
        assert out.context.level == k_out
        checked += 1
    assert checked > 400


def test_actor_validation():
    A3 = MatrixAlgebra(Zmod(12), 3)
    f3 = IdempotentFamily.matrix_units(A3)
    t3 = HomotopeTower(A3, 2, k_max=3, family=f3)
    with pytest.raises(RankTooSmall):
        RootActor(t3, 1, 2, f3.sample_component(1, 2, random.Random(0)), 0)
    # 3 dies in the localization at 2 of Z/12, so d_i(3) has no inverse there
    bad = A3.scalar_mul(A3.base.element(3), f3.idempotent(1))
    with pytest.raises(NonInvertibleComponent):
        DiagActor(t3, 1, bad, 0)
    # 2 becomes a unit after localization even though it is not one mod 12
    ok = A3.scalar_mul(A3.base.element(2), f3.idempotent(1))
    assert DiagActor(t3, 1, ok, 0).i == 1


def test_actor_denominator_needs_level_headroom(tower, rng):
    fam = tower.family
    actor = RootActor(tower, 1, 2, fam.sample_component(1, 2, rng), 1)
    w = random_word(tower.context(0), rng, 2)
    with pytest.raises(LevelBudgetExceeded):
        tower_ad(tower, actor, w)


def test_tower_relation_suite_clean(tower, rng):
    report = tower_relation_suite(tower, rng, samples_per_level=60)
    assert report["status"] == "checked"
    assert report["violations"] == 0
    assert set(report["levels"]) == {str(k) for k in range(5)}
    for level in report["levels"].values():
        for slot in level.values():
            assert slot["violations"] == 0
            assert slot["checked"] > 0


def test_tower_relation_suite_detects_dropped_scale(tower, rng):
    report = tower_relation_suite(tower, rng, samples_per_level=40, mutate="drop-scale")
    assert report["violations"] > 0
    flagged = [
        lv["St3"]["violations"] for k, lv in report["levels"].items() if k != "0"
    ]
    assert sum(flagged) > 0


def test_zero_level_budget_is_inconclusive():
    A = MatrixAlgebra(Zmod(12), 4)
    fam = IdempotentFamily.matrix_units(A)
    t = HomotopeTower(A, 2, k_max=0, family=fam)
    report = tower_relation_suite(t, random.Random(0), samples_per_level=10)
    assert report["status"] == "inconclusive"
    assert report["violations"] == 0
    assert any("budget" in w for w in report["warnings"])


def test_collapsing_scalars_carry_a_warning():
    A = MatrixAlgebra(Zmod(8), 4)
    fam = IdempotentFamily.matrix_units(A)
    t = HomotopeTower(A, 2, k_max=2, family=fam)
    loc = t.localized()
    assert loc.warning is not None
    # every comparison degenerates to true in the zero ring
    rng = random.Random(1)
    w1 = random_word(t.context(1), rng, 2)
    w2 = random_word(t.context(1), rng, 2)
    assert equal_after_localization(t, w1, w2)


def test_split_naturality_suite_clean(tower, rng):
    report = split_naturality_suite(tower, rng, samples=40)
    assert report == {"checked": 40, "violations": 0}


def test_actor_relation_suite_clean(tower, rng):
    report = actor_relation_suite(tower, rng, samples=40)
    assert report["violations"] == 0
    assert report["checked"] > 0
    for name in (
        "diag_product",
        "diag_commute",
        "diag_root_left",
        "diag_root_right",
        "same_root_stable",
        "root_st2",
        "root_st3",
    ):
        assert name in report["cases"], name
        assert report["cases"][name]["violations"] == 0


def test_scaled_operator_suite_budgets(tower, rng):
    report = scaled_operator_suite(tower, rng)
    assert report["pairs_checked"] == 36  # 12 corner values, 3 exponents
    assert report["violations"] == 0
    assert report["extra_exponent_max"] <= 2
    assert report["identities"] == {"checked": 200, "violations": 0}
    assert report["inequivalent_found"]
