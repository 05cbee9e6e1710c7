import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from randiv.cayley import ball, distance
from randiv.groups import GroupSpec, inverse, multiply, normal_form, parse_word
from randiv.projections import (CosetId, FProfile, InconclusiveProjectionError, PreconditionError,
                                a_set, behrstock_census, behrstock_check, brute_force_HT, check_g0,
                                contraction_census, coset_of, distance_to_subgroup,
                                enumerate_HT, exceptional_count, f_divergence_witness,
                                lipschitz_and_comparability_census, order_check, proj_distance,
                                project, same_coset, triangle_defect, wpd_census)

F2 = GroupSpec.free(2)
P4 = GroupSpec.p4()
Z2 = GroupSpec.z2()
AB = parse_word("ab", F2)
GAMMA = CosetId(AB, ())


def w(text, spec=F2):
    return parse_word(text, spec)


def reduced_words(max_size):
    return st.lists(st.sampled_from(F2.letters), max_size=max_size).map(lambda l: normal_form(l, F2))


def axis_points(k):
    """Vertices of the (ab)-axis with coordinate in [-2k, 2k], built from prefixes."""
    fwd = (1, 2) * k
    bwd = (-2, -1) * k
    pts = {0: ()}
    for i in range(1, 2 * k + 1):
        pts[i] = normal_form(fwd[:i], F2)
        pts[-i] = normal_form(bwd[:i], F2)
    return pts


# --- profiles and cosets ---------------------------------------------------------

def test_fprofile():
    assert FProfile.linear(2, 1)(3) == 7
    assert FProfile.exponential(2)(3) == 8
    tab = FProfile.table([(0, 1), (2, 5)])
    assert (tab(1), tab(2), tab(10)) == (1, 5, 5)
    assert FProfile.from_config({"family": "linear", "slope": 3})(2) == 6
    with pytest.raises(ValueError):
        FProfile.table([(0, 3), (1, 2)])
    with pytest.raises(ValueError):
        FProfile.linear(0)
    with pytest.raises(ValueError):
        FProfile.from_config({"family": "cubic"})


@pytest.mark.parametrize("text, spec", [("1", F2), ("abab", F2), ("abA", F2), ("adad", P4)])
def test_check_g0_rejects(text, spec):
    with pytest.raises(PreconditionError):
        check_g0(parse_word(text, spec), spec)


def test_coset_rep_is_canonical():
    assert coset_of(w("(ab)^7"), AB, F2) == GAMMA
    assert coset_of(w("b(ab)^3"), AB, F2) == coset_of(w("b"), AB, F2)
    assert coset_of(w("b"), AB, F2).rep == w("A")  # b (ab)^-1 = a^-1
    assert not same_coset(w("a"), w("b"), AB, F2)


@settings(max_examples=60)
@given(reduced_words(10), st.integers(-6, 6))
def test_coset_membership_by_powers(h, k):
    g = multiply(h, normal_form(AB * k if k >= 0 else inverse(AB, F2) * -k, F2), F2)
    assert same_coset(h, g, AB, F2)
    c = coset_of(h, AB, F2)
    # the representative lies in the coset and is no longer than h
    assert same_coset(c.rep, h, AB, F2) and len(c.rep) <= len(h)


# --- project / proj_distance ---------------------------------------------------------

def test_project_examples():
    x = w("(ab)^3")
    im = project(x, GAMMA, F2)
    assert im.points == (x,) and im.diameter == 0
    # b^-1 = (ab)^-1 a lies on the axis, so it is its own projection
    assert project(w("B"), GAMMA, F2).points == (w("B"),)
    assert project(w("(ab)^2 b"), GAMMA, F2).points == (w("(ab)^2"),)


def test_project_window_too_small():
    with pytest.raises(InconclusiveProjectionError):
        project(w("(ab)^5 bb"), GAMMA, F2, search_radius=3)


@settings(max_examples=80)
@given(reduced_words(12))
def test_project_matches_axis_window_oracle(x):
    pts = axis_points(12)
    d = {t: distance(x, p, F2) for t, p in pts.items()}
    best = min(d.values())
    nearest = [pts[t] for t, v in d.items() if v == best]
    im = project(x, GAMMA, F2)
    assert list(im.points) == nearest
    assert im.dist == best
    # orbit points are axis points, so the subgroup is never closer than the axis
    orbit = min(distance(x, pts[t], F2) for t in pts if t % 2 == 0)
    assert distance_to_subgroup(x, AB, F2) == orbit >= best


def test_proj_distance_examples():
    assert proj_distance(w("ba"), w("ba"), GAMMA, F2) == 0
    assert proj_distance((), w("(ab)^5"), GAMMA, F2) == 10
    assert proj_distance(w("B"), w("(ab)^2 b"), GAMMA, F2) == 5


def test_raag_projection_is_orbit_set():
    ad = w("ad", P4)
    im = project(w("b", P4), CosetId(ad, ()), P4)
    assert im.points == ((),) and im.dist == 1
    # points of the orbit are within distance |t1 - t2|
    im = project(w("(ad)^2 c", P4), CosetId(ad, ()), P4)
    assert im.coords == (4,)


# --- H_T ----------------------------------------------------------------------------

def test_enumerate_ht_examples():
    ht = enumerate_HT((), w("(ab)^5"), 4, AB, F2)
    assert ht.cosets == (GAMMA,) and ht.distances == (10,)
    assert len(enumerate_HT(w("ab"), w("ab"), 4, AB, F2)) == 0
    ht = enumerate_HT((), w("b(ab)^5 a"), 4, AB, F2)
    assert ht.cosets == (coset_of(w("b"), AB, F2),)


def test_enumerate_ht_against_ball_of_cosets():
    y = w("(ab)^5")
    found = {c for h in ball((), 6, F2).members
             for c in [coset_of(h, AB, F2)] if proj_distance((), y, c, F2) >= 4}
    assert found == {GAMMA}


def test_enumerate_ht_errors():
    with pytest.raises(PreconditionError):
        enumerate_HT((), w("ab"), 0, AB, F2)
    with pytest.raises(PreconditionError):
        enumerate_HT((), w("ad", P4), 2, w("ad", P4), P4)
    with pytest.raises(PreconditionError):
        enumerate_HT((), w("ad", P4), 2, w("ad", P4), P4, mode="census")


def test_census_mode_is_lower_bound():
    x, y = (), w("(ad)^3", P4)
    ht = enumerate_HT(x, y, 4, w("ad", P4), P4, mode="census", radius=2)
    assert ht.mode == "census" and CosetId(w("ad", P4), ()) in ht
    assert all(d >= 4 for d in ht.distances)


@settings(max_examples=60, deadline=None)
@given(reduced_words(20), reduced_words(20), st.integers(1, 6))
def test_tree_ht_matches_brute_force(x, y, T):
    assert set(enumerate_HT(x, y, T, AB, F2).cosets) == brute_force_HT(x, y, T, AB, F2)


@settings(max_examples=40, deadline=None)
@given(reduced_words(16), reduced_words(16), reduced_words(8))
def test_ht_equivariance(x, y, g):
    ht = enumerate_HT(x, y, 3, AB, F2)
    moved = enumerate_HT(multiply(g, x, F2), multiply(g, y, F2), 3, AB, F2)
    assert set(moved.cosets) == {c.translate(g, F2) for c in ht.cosets}


# --- order, exceptional cosets, triangle ------------------------------------------------

def test_order_examples():
    y = w("(ab)^4 b A (BA)^4")
    ht = enumerate_HT((), y, 4, AB, F2)
    assert len(ht) == 2 and ht.cosets[0] == GAMMA
    rep = order_check(ht, F2)
    assert rep.consistent and rep.pairs_checked == 1
    single = enumerate_HT((), w("(ab)^5"), 4, AB, F2)
    assert order_check(single, F2).consistent and order_check(single, F2).pairs_checked == 0


@settings(max_examples=60, deadline=None)
@given(reduced_words(40), reduced_words(40))
def test_order_has_no_violations(x, y):
    assert order_check(enumerate_HT(x, y, 10, AB, F2), F2).consistent


@settings(max_examples=60, deadline=None)
@given(reduced_words(40), reduced_words(40), reduced_words(40))
def test_exceptional_and_triangle_bounds(x, y, z):
    assert exceptional_count(x, y, z, 10, AB, F2) <= 2
    assert triangle_defect(x, y, z, 10, AB, F2) <= 2


def test_exceptional_examples():
    x, y = w("ba(ab)^6"), w("(ab)^-5 bb")
    assert exceptional_count(x, y, x, 4, AB, F2) == 0
    assert exceptional_count(x, y, y, 4, AB, F2) == 0


def test_triangle_defect_examples():
    e = ()
    assert triangle_defect(e, e, e, 6, AB, F2) == 0
    assert triangle_defect(e, w("(ab)^2"), w("(ab)^4"), 6, AB, F2) == 1
    assert triangle_defect(e, w("(ab)^4"), w("(ab)^8"), 6, AB, F2) == -1


# --- Behrstock ----------------------------------------------------------------------------

def test_behrstock_examples():
    c2 = coset_of(w("bbaa"), AB, F2)
    rep = behrstock_check(w("(ab)^6"), GAMMA, c2, 0, F2)
    assert rep.antecedent and rep.consequent and rep.passed
    rep = behrstock_check(w("bbaa"), GAMMA, c2, 100, F2)
    assert not rep.antecedent and rep.passed
    with pytest.raises(PreconditionError):
        behrstock_check((), GAMMA, GAMMA, 0, F2)


def test_behrstock_census_small():
    cen = behrstock_census(AB, F2, coset_radius=2, x_radius=4)
    assert cen.B_hat == 0 and cen.failures_at_zero == 0 and cen.instances > 1000


def test_behrstock_census_holds_on_domain():
    cosets = {coset_of(h, AB, F2) for h in ball((), 2, F2).members} - {GAMMA}
    for c2 in cosets:
        for x in ball((), 3, F2).members:
            assert behrstock_check(x, GAMMA, c2, 0, F2).passed


# --- A^S ------------------------------------------------------------------------------------

def test_a_set_examples():
    y = w("(ab)^5")
    assert a_set((), y, 4, 2, AB, F2).cosets == (GAMMA,)
    full = enumerate_HT(w("bb"), y, 4, AB, F2)
    assert a_set(w("bb"), y, 4, 100, AB, F2).cosets == full.cosets
    assert len(a_set(w("bb"), y, 4, 0, AB, F2)) == 0


@settings(max_examples=50, deadline=None)
@given(reduced_words(30), reduced_words(30), st.integers(0, 15), st.integers(0, 15))
def test_a_set_subset_and_monotone(x, y, s1, s2):
    lo, hi = sorted((s1, s2))
    ht = set(enumerate_HT(x, y, 4, AB, F2).cosets)
    small = set(a_set(x, y, 4, lo, AB, F2).cosets)
    big = set(a_set(x, y, 4, hi, AB, F2).cosets)
    assert small <= big <= ht


# --- censuses ------------------------------------------------------------------------------

def test_lipschitz_census_tree():
    cen = lipschitz_and_comparability_census(AB, F2, 6)
    assert cen.L_hat <= 1 and cen.D_hat == 0 and cen.points == 1 + 2 * (3 ** 6 - 1)


def test_wpd_census():
    assert wpd_census(AB, 1, 6, F2, 4) == 1
    assert wpd_census(AB, 0, 6, F2, 4) == 0
    assert wpd_census(AB, 2, 6, F2, 4) == wpd_census(AB, 2, 6, F2, 6)
    assert wpd_census(AB, 3, 6, F2, 6) == wpd_census(AB, 3, 6, F2, 8)
    with pytest.raises(PreconditionError):
        wpd_census(AB, 5, 6, F2, 4)


def test_wpd_census_matches_direct_count():
    gN = normal_form(AB * 6, F2)
    count = sum(1 for h in ball((), 4, F2).members
                if len(h) < 3 and distance(gN, multiply(h, gN, F2), F2) < 3)
    assert wpd_census(AB, 3, 6, F2, 4) == count


# --- f-divergence witnesses -------------------------------------------------------------------

def test_f_divergence_tree():
    lin = FProfile.linear(1)
    res = f_divergence_witness(AB, w("(ab)^5"), w("(ab)^-5"), 2, lin, F2)
    assert res.verdict == "no_path"
    res = f_divergence_witness(AB, w("bb(ab)^5"), w("bb(ab)^-5"), 2, lin, F2)
    assert res.verdict == "no_path" and res.certificate == "tree-cut-vertex"
    res = f_divergence_witness(AB, w("b"), w("bb"), 0, lin, F2)
    assert res.verdict == "path" and res.length == 1 and res.bound_holds


@pytest.mark.parametrize("d", [1, 2, 3])
def test_f_divergence_raag(d):
    ad = w("ad", P4)
    x, y = w("bb(ad)^3", P4), w("bb(ad)^-3", P4)
    res = f_divergence_witness(ad, x, y, d, FProfile.linear(1), P4)
    assert res.verdict == "path" and res.bound_holds
    assert res.length >= distance(x, y, P4)


def test_f_divergence_theta_precondition():
    with pytest.raises(PreconditionError):
        f_divergence_witness(AB, w("bb"), w("bbb"), 1, FProfile.linear(1), F2, theta=1)


def test_contraction_census():
    ad = w("ad", P4)
    xs = [w("b^8", P4), w("c^8", P4), w("(bc)^4", P4)]
    rows = contraction_census(ad, P4, [2, 4, 6], xs)
    by_d = {d: max(r.diameter for r in rows if r.d == d) for d in (2, 4, 6)}
    assert len(set(by_d.values())) == 1
    z = contraction_census(w("a", Z2), Z2, [2, 4, 6], [w("b^8", Z2)])
    assert [r.diameter for r in z] == [2, 4, 6]
    tree = contraction_census(AB, F2, [2, 4], [w("b^9"), w("A^9")])
    assert all(r.diameter == 0 for r in tree)
    skipped = contraction_census(AB, F2, [4], [w("bb")])
    assert skipped[0].skipped and skipped[0].diameter is None
