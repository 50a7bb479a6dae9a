#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "fixtures.hpp"
#include "matpoly/matpoly.hpp"
#include "plans.hpp"

using namespace matpoly;

TEST_CASE("selection enumeration counts") {
    const auto pair4 = fixtures::fixture4_pair();
    CHECK(enumerate_selections(pair4, 2, SelectionSide::t_only).items.size() == 1);
    CHECK(enumerate_selections(pair4, 2, SelectionSide::both).items.size() == 4);

    // After full inversion the Z side holds blocks of sizes 1, 1, 2: four
    // prefix assignments of total dimension 2.
    const auto inverted =
        spectral_inversion(pair4, {Complex(2.0), Complex(-2.0)}, InversionSide::to_infinite);
    CHECK(enumerate_selections(inverted, 2, SelectionSide::z_only).items.size() == 4);

    const auto pair6 = fixtures::fixture6_pair();
    CHECK(enumerate_selections(pair6, 3, SelectionSide::both).items.size() == 8);

    // Enumeration cap reports truncation.
    const auto capped = enumerate_selections(pair6, 3, SelectionSide::both, 3);
    CHECK(capped.truncated);
    CHECK(capped.items.size() == 3);
}

TEST_CASE("solvent count bound") {
    CHECK(solvent_count_bound(fixtures::fixture4()) == 1);
    CHECK(solvent_count_bound(fixtures::fixture3()) == 0);  // M = 1 < m = 2
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(6, 3) == 20);
}

TEST_CASE("the 2x2 quadratic fixture has exactly one solvent") {
    const auto result = solvents(fixtures::fixture4());
    REQUIRE(result.items.size() == 1);
    CHECK(result.bound == 1);
    CHECK_FALSE(result.infinite_family);
    CHECK(fixtures::entry_gap(result.items[0].matrix, fixtures::fixture4_solvent()) < 1e-8);
    CHECK(result.items[0].residual <= 1e-10);
}

TEST_CASE("fixtures with no solvents") {
    CHECK(solvents(fixtures::fixture6()).items.empty());
    CHECK_FALSE(solvents(fixtures::fixture6()).infinite_family);
    CHECK(solvents(fixtures::fixture3()).items.empty());
    CHECK(cosolvents(fixtures::fixture6()).items.empty());
}

TEST_CASE("the 2x2 quadratic fixture has exactly three cosolvents, one nilpotent") {
    const auto result = cosolvents(fixtures::fixture4());
    REQUIRE(result.items.size() == 3);
    const auto expected = fixtures::fixture4_cosolvents();
    for (size_t i = 0; i < 3; ++i) {
        CHECK(fixtures::entry_gap(result.items[i].matrix, expected[i]) < 1e-8);
        CHECK(result.items[i].residual <= 1e-9);
    }
    CHECK_FALSE(result.items[0].nilpotent);
    CHECK_FALSE(result.items[1].nilpotent);
    CHECK(result.items[2].nilpotent);
}

TEST_CASE("a nonsingular solvent inverts to a cosolvent") {
    const CMat s = solvents(fixtures::fixture4()).items[0].matrix;
    const CMat first_cosolvent = cosolvents(fixtures::fixture4()).items[0].matrix;
    CHECK(fixtures::entry_gap(invert(s), first_cosolvent) < 1e-8);
}

TEST_CASE("emitted solvents and cosolvents pass direct substitution") {
    for (const auto& item : solvents(fixtures::fixture4()).items)
        CHECK(brute_solvent_check(fixtures::fixture4(), item.matrix) <= 1e-8);
    for (const auto& item : cosolvents(fixtures::fixture4()).items) {
        // reverse equation: substitute into the reversed polynomial
        CHECK(brute_solvent_check(reverse(fixtures::fixture4()), item.matrix) <= 1e-8);
    }
}

TEST_CASE("solvent spectra are subordinate to the finite spectrum") {
    const auto result = solvents(fixtures::fixture4());
    for (const auto& item : result.items)
        for (const auto& chain : matrix_jordan_structure(item.matrix)) {
            const bool known = std::abs(chain.eigenvalue - Complex(2.0)) < 1e-6 ||
                               std::abs(chain.eigenvalue - Complex(-2.0)) < 1e-6;
            CHECK(known);
        }
}

TEST_CASE("bisolvent from the pure T-side selection is the solvent embedding") {
    const auto pair = fixtures::fixture4_pair();
    const auto sels = enumerate_selections(pair, 2, SelectionSide::t_only);
    REQUIRE(sels.items.size() == 1);
    const auto b = bisolvent_from_selection(pair, sels.items[0]);
    CHECK(fixtures::entry_gap(b.S2, identity(2)) < 1e-12);
    CHECK(fixtures::entry_gap(b.Pi, identity(2)) < 1e-12);
    CHECK(fixtures::entry_gap(b.S1, fixtures::fixture4_solvent()) < 1e-8);
}

TEST_CASE("singular selections are rejected with SingularQ0") {
    const auto pair = fixtures::fixture6_pair();
    // Selecting the leading vectors of the chains at 3 and 2 plus the
    // infinite chain gives two equal columns.
    SubspaceSelection sel;
    sel.components = {{false, 0, 1}, {false, 1, 1}, {true, 0, 1}};
    sel.t_dim = 2;
    sel.z_dim = 1;
    CHECK_THROWS_AS(bisolvent_from_selection(pair, sel), SingularQ0);
}

TEST_CASE("the 3x3 quadratic fixture has exactly the two published bisolvents") {
    const auto result = bisolvents(fixtures::fixture6());
    REQUIRE(result.items.size() == 2);
    const CMat s1 = fixtures::conjugate_by_frame(fixtures::diag3(3, 0, 1));
    const CMat s2 = fixtures::conjugate_by_frame(fixtures::diag3(1, 1, 0));
    const CMat s1_alt = fixtures::conjugate_by_frame(fixtures::diag3(2, 0, 1));
    CHECK(fixtures::entry_gap(result.items[0].S1, s1) < 1e-7);
    CHECK(fixtures::entry_gap(result.items[0].S2, s2) < 1e-7);
    CHECK(fixtures::entry_gap(result.items[1].S1, s1_alt) < 1e-7);
    CHECK(fixtures::entry_gap(result.items[1].S2, s2) < 1e-7);
    for (const auto& b : result.items) {
        const auto check = verify_bisolvent(fixtures::fixture6(), b);
        CHECK(check.passes(Tolerance{}));
    }
}

TEST_CASE("the 2x2 quadratic fixture enumeration includes the solvent embedding") {
    const auto result = bisolvents(fixtures::fixture4());
    bool found = false;
    for (const auto& b : result.items)
        found = found || (fixtures::entry_gap(b.S2, identity(2)) < 1e-9 &&
                          fixtures::entry_gap(b.S1, fixtures::fixture4_solvent()) < 1e-7);
    CHECK(found);
}

TEST_CASE("the diagonal pencil fixture bisolvent carries two idempotents") {
    const auto result = bisolvents(fixtures::fixture5());
    REQUIRE(result.items.size() == 1);
    const auto& b = result.items[0];
    CHECK(fixtures::entry_gap(b.S1, fixtures::diag3(0, 1, 1)) < 1e-9);
    CHECK(fixtures::entry_gap(b.S2, fixtures::diag3(1, 1, 0)) < 1e-9);
    REQUIRE(b.idempotents.size() == 2);
    // diag(1,1,0) from the canonical selection, diag(1,0,0) from moving the
    // unit eigenvalue to the other side of the splitting.
    CHECK(fixtures::entry_gap(b.idempotents[0], fixtures::diag3(1, 1, 0)) < 1e-9);
    CHECK(fixtures::entry_gap(b.idempotents[1], fixtures::diag3(1, 0, 0)) < 1e-9);
    for (const auto& pi : b.idempotents) {
        Bisolvent variant = b;
        variant.Pi = pi;
        CHECK(verify_bisolvent(fixtures::fixture5(), variant).passes(Tolerance{}));
    }
}

TEST_CASE("verify_bisolvent check semantics") {
    const auto p = fixtures::fixture4();

    // S1 = S2 = 0 satisfies the bisolvent equation for k >= 2 but is not
    // separable with respect to any idempotent.
    Bisolvent degenerate;
    degenerate.S1 = zeros(2, 2);
    degenerate.S2 = zeros(2, 2);
    degenerate.Pi = fixtures::mat2(1, 0, 0, 0);
    auto check = verify_bisolvent(p, degenerate);
    CHECK(check.residual <= 1e-12);
    CHECK(check.commute <= 1e-12);
    CHECK(check.separable > 1e-3);

    // A 1e-3 perturbation of a genuine bisolvent breaks the residual.
    const auto good = bisolvents(p).items[0];
    Bisolvent bad = good;
    bad.S1(0, 0) += 1e-3;
    check = verify_bisolvent(p, bad);
    CHECK(check.residual > 1e-6);
}

TEST_CASE("reduce_bisolvent") {
    const auto p4 = fixtures::fixture4();
    // Solvent embedding reduces to the solvent.
    const auto pair = fixtures::fixture4_pair();
    const auto sels = enumerate_selections(pair, 2, SelectionSide::t_only);
    const auto embedding = bisolvent_from_selection(pair, sels.items[0]);
    const auto red = reduce_bisolvent(p4, embedding);
    REQUIRE(red.solvent.has_value());
    CHECK(fixtures::entry_gap(*red.solvent, fixtures::fixture4_solvent()) < 1e-8);

    // Both diagonal factors of the first published bisolvent of the 3x3
    // fixture are singular: neither a solvent nor a cosolvent comes out.
    const auto b6 = bisolvents(fixtures::fixture6()).items[0];
    const auto red6 = reduce_bisolvent(fixtures::fixture6(), b6);
    CHECK_FALSE(red6.solvent.has_value());
    CHECK_FALSE(red6.cosolvent.has_value());

    // Same for the diagonal pencil fixture, although a regular factor exists.
    const auto b5 = bisolvents(fixtures::fixture5()).items[0];
    const auto red5 = reduce_bisolvent(fixtures::fixture5(), b5);
    CHECK_FALSE(red5.solvent.has_value());
    CHECK_FALSE(red5.cosolvent.has_value());
}

TEST_CASE("additive formalism") {
    // Solvent embedding: Pi = I gives P1 = S1, P2 = 0.
    const auto pair = fixtures::fixture4_pair();
    const auto embedding =
        bisolvent_from_selection(pair, enumerate_selections(pair, 2, SelectionSide::t_only).items[0]);
    const auto add = to_additive(embedding);
    CHECK(fixtures::entry_gap(add.P1, embedding.S1) < 1e-10);
    CHECK(add.P2.norm() < 1e-10);

    // Published diagonal case with Pi = diag(1,0,0): P1 = 0, P2 = diag(0,1,0).
    Bisolvent b5;
    b5.S1 = fixtures::diag3(0, 1, 1);
    b5.S2 = fixtures::diag3(1, 1, 0);
    b5.Pi = fixtures::diag3(1, 0, 0);
    const auto add5 = to_additive(b5);
    CHECK(add5.P1.norm() < 1e-12);
    CHECK(fixtures::entry_gap(add5.P2, fixtures::diag3(0, 1, 0)) < 1e-12);
    const auto back5 = from_additive(add5);
    CHECK(fixtures::entry_gap(back5.S1, b5.S1) < 1e-12);
    CHECK(fixtures::entry_gap(back5.S2, b5.S2) < 1e-12);

    // Round trip is the identity on enumerated bisolvents.
    for (const auto& b : bisolvents(fixtures::fixture6()).items) {
        const auto back = from_additive(to_additive(b));
        CHECK(fixtures::entry_gap(back.S1, b.S1) < 1e-12);
        CHECK(fixtures::entry_gap(back.S2, b.S2) < 1e-12);
        CHECK(fixtures::entry_gap(back.Pi, b.Pi) < 1e-12);
    }
}

TEST_CASE("from_additive validates its invariants") {
    AdditiveBisolvent bad;
    bad.P1 = fixtures::mat2(1, 0, 0, 0);
    bad.P2 = fixtures::mat2(1, 0, 0, 0);  // P1 P2 != 0
    bad.Pi = fixtures::mat2(1, 0, 0, 0);
    CHECK_THROWS_AS(from_additive(bad), InvariantViolation);

    // Trivial input (P1 = P2 = 0, Pi = I) maps to S1 = 0, S2 = I.
    AdditiveBisolvent trivial;
    trivial.P1 = zeros(2, 2);
    trivial.P2 = zeros(2, 2);
    trivial.Pi = identity(2);
    const auto b = from_additive(trivial);
    CHECK(b.S1.norm() == 0.0);
    CHECK(fixtures::entry_gap(b.S2, identity(2)) == 0.0);
}

TEST_CASE("power identity spot check") {
    // S1^2 S2 = P1^2 + P2 on a random verified bisolvent.
    const auto inst = random_regular(plans::sample_plan(4));
    const auto result = bisolvents(inst.polynomial);
    REQUIRE_FALSE(result.items.empty());
    const auto& b = result.items[0];
    const auto add = to_additive(b);
    CHECK(fixtures::entry_gap(b.S1 * b.S1 * b.S2, add.P1 * add.P1 + add.P2) < 1e-9);
}

TEST_CASE("no zero or infinite eigenvalues: bisolvents reduce bijectively to solvents") {
    int checked = 0;
    for (int trial = 0; trial < 12 && checked < 3; trial += 3) {
        const auto plan = plans::sample_semisimple_plan(trial);  // nonzero simple, no infinite
        if (!plan.infinite.empty()) continue;
        const auto inst = random_regular(plan);
        const auto sol = solvents(inst.polynomial);
        const auto bis = bisolvents(inst.polynomial);
        CHECK(sol.items.size() == bis.items.size());
        for (size_t i = 0; i < bis.items.size(); ++i) {
            const auto red = reduce_bisolvent(inst.polynomial, bis.items[i]);
            REQUIRE(red.solvent.has_value());
            bool matched = false;
            for (const auto& s : sol.items)
                matched = matched || fixtures::entry_gap(*red.solvent, s.matrix) <
                                         1e-7 * (1.0 + s.matrix.norm());
            CHECK(matched);
        }
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("derogatory spectra raise the infinite-family flag") {
    // diag((x-1)(x-2), (x-1)(x-3)): eigenvalue 1 has two independent
    // eigenvectors; a solvent using only one of them can be rotated freely.
    CMat a0 = fixtures::mat2(2, 0, 0, 3);
    CMat a1 = fixtures::mat2(-3, 0, 0, -4);
    const auto p = make_polynomial({a0, a1, identity(2)});
    const auto result = solvents(p);
    CHECK(result.infinite_family);
    for (const auto& item : result.items)
        CHECK(brute_solvent_check(p, item.matrix) <= 1e-8);
}
