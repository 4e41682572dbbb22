#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "dispersal/analysis.hpp"
#include "dispersal/scenario.hpp"
#include "dispersal/solver.hpp"

using namespace dispersal;

namespace {

GridSpec unit_grid(int n = 512) { return GridSpec(0.0, 1.0, n); }

ScalarField cos_pi_field(const GridSpec& g, double base) {
    return ScalarField::from_fn(g, [base](double x) { return base + std::cos(M_PI * x); });
}

struct ScenarioRun {
    Scenario sc;
    ScalarField K, P, r;
    SweepTable table;
    std::vector<SolveResult> small;
    std::vector<VerdictReport> reports;
};

ScenarioRun run_verdicts(const Scenario& sc) {
    ScalarField K = sc.sample_K(), P = sc.sample_P(), r = sc.sample_r();
    auto d = sc.d_grid();
    auto results = continuation_sweep(K, P, r, d, sc.options());
    SweepTable t = build_sweep_table(sc.name(), K, P, r, d, results);
    std::vector<SolveResult> small{results[0], results[1]};
    auto reps = verdicts(sc, t, small, K, P, r);
    return ScenarioRun{sc, std::move(K), std::move(P), std::move(r), std::move(t),
                       std::move(small), std::move(reps)};
}

// Sweeps are expensive enough to share across assertions.
const ScenarioRun& cached_run(const std::string& key) {
    static std::map<std::string, ScenarioRun> cache;
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    Scenario sc = [&]() {
        if (key == "ex4.4_l0") return builtin_example("ex4.4").with_lambda(0.0);
        if (key == "k_squared_movement") {
            ScenarioConfig cfg;
            cfg.name = key;
            cfg.K = "2+cos(pi*x)";
            cfg.P = "(2+cos(pi*x))^2";
            cfg.r = "2+cos(pi*x)";
            return make_scenario(cfg);
        }
        return builtin_example(key);
    }();
    return cache.emplace(key, run_verdicts(sc)).first->second;
}

const VerdictReport& report_for(const ScenarioRun& run, ClaimId id) {
    for (const auto& rep : run.reports)
        if (rep.claim == id) return rep;
    FAIL("claim missing from report list");
    return run.reports.front();
}

}  // namespace

TEST_CASE("total population integrates the solution field") {
    auto g = unit_grid();
    CHECK(total_population(ScalarField::constant(g, 1.0)) == Catch::Approx(1.0).margin(1e-14));
    CHECK(total_population(cos_pi_field(g, 2.0)) == Catch::Approx(2.0).margin(1e-10));
    // constant u = beta on the unit interval integrates to beta exactly
    CHECK(total_population(ScalarField::constant(g, std::sqrt(3.0))) ==
          Catch::Approx(std::sqrt(3.0)).margin(1e-14));
}

TEST_CASE("correlation integral matches analytic anchors") {
    auto g = unit_grid();

    SECTION("gradient-free growth rate gives exactly zero") {
        Scenario sc = builtin_example("ex4.2a");
        ScalarField K = sc.sample_K(), P = sc.sample_P();
        CHECK(correlation_integral(K, P, ScalarField::constant(g, 1.25)) == 0.0);
    }

    SECTION("orthogonal construction lands inside 1e-6") {
        Scenario sc = builtin_example("ex4.1a");
        double I = correlation_integral(sc.sample_K(), sc.sample_P(), sc.sample_r());
        CHECK(std::abs(I) <= 1e-6);
    }

    SECTION("pure cosine capacity against itself gives pi^2/2 at second order") {
        const double exact = M_PI * M_PI / 2.0;
        auto value_at = [](int n) {
            auto gn = GridSpec(0.0, 1.0, n);
            ScalarField K = cos_pi_field(gn, 2.0);
            return correlation_integral(K, ScalarField::constant(gn, 1.0), K);
        };
        double e512 = std::abs(value_at(512) - exact);
        double e256 = std::abs(value_at(256) - exact);
        CHECK(e512 < 1.5e-4);
        CHECK(e256 / e512 == Catch::Approx(4.0).margin(0.5));
    }
}

TEST_CASE("beta limit reproduces closed forms") {
    auto g = unit_grid();
    ScalarField one = ScalarField::constant(g, 1.0);
    ScalarField K = cos_pi_field(g, 2.0);

    // int 1/(2+cos(pi x)) = 1/sqrt(3), so beta = sqrt(3)
    CHECK(beta_limit(one, K, one) == Catch::Approx(std::sqrt(3.0)).margin(1e-10));
    // r = K collapses beta to int K
    CHECK(beta_limit(K, K, one) == Catch::Approx(2.0).margin(1e-10));

    SECTION("movement matched to K/r gives beta = intK / int(K/r)") {
        ScalarField r = ScalarField::from_fn(g, [](double x) {
            return 1.25 + 0.25 * std::cos(M_PI * x);
        });
        ScalarField P = K / r;
        double expected = integrate(K) / integrate(K / r);
        CHECK(beta_limit(r, K, P) == Catch::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("the large-d population limit obeys its algebraic identities") {
    Scenario sc = builtin_example("ex4.4");
    ScalarField K = sc.sample_K(), P = sc.sample_P();

    SECTION("exponent one collapses to the capacity integral on every builtin") {
        for (const auto& id : builtin_example_ids()) {
            Scenario b = builtin_example(id);
            ScalarField Kb = b.sample_K(), Pb = b.sample_P();
            INFO("example " << id);
            CHECK(m_infinity(1.0, Kb, Pb) ==
                  Catch::Approx(integrate(Kb)).epsilon(1e-12));
        }
    }

    SECTION("agrees with the quadrature route through beta") {
        for (double lam : {0.0, 1.0, 2.5, -1.5}) {
            PowerGrowth pw;
            pw.lambda = lam;
            ScalarField r = power_family_rate(K, P, pw);
            INFO("lambda " << lam);
            CHECK(m_infinity(lam, K, P) ==
                  Catch::Approx(beta_limit(r, K, P) * integrate(P)).epsilon(1e-12));
        }
    }

    SECTION("constant growth rate lands strictly below the capacity integral") {
        CHECK(m_infinity(0.0, K, P) < integrate(K) - 0.01);
    }

    SECTION("strictly increasing in the exponent") {
        for (double lam : {-2.0, -1.0, 0.0, 1.0, 2.0})
            CHECK(m_infinity(lam + 0.5, K, P) > m_infinity(lam, K, P));
    }
}

TEST_CASE("weighted moments satisfy substitution and scaling identities") {
    Scenario sc = builtin_example("ex4.2a");
    ScalarField K = sc.sample_K(), P = sc.sample_P(), r = sc.sample_r();

    WeightedMoments at_K = weighted_moments(K, r, K, P);
    CHECK(at_K.int_Pu == at_K.int_PK);
    CHECK(at_K.int_ru2 == at_K.int_rKu);
    CHECK(at_K.int_rKu == at_K.int_rK2);

    WeightedMoments at_2K = weighted_moments(2.0 * K, r, K, P);
    CHECK(at_2K.int_rKu == 2.0 * at_2K.int_rK2);
    CHECK(at_2K.int_ru2 == 4.0 * at_2K.int_rK2);
    CHECK(at_2K.int_Pu == 2.0 * at_2K.int_PK);
}

namespace {

SweepTable synthetic_table(const std::vector<double>& Ms) {
    SweepTable t;
    t.scenario_name = "synthetic";
    t.intK = 1.0;
    t.beta = 1.0;
    t.m_inf = 1.0;
    for (std::size_t i = 0; i < Ms.size(); ++i) {
        SweepRow row;
        row.d = std::pow(10.0, static_cast<double>(i));
        row.M = Ms[i];
        row.M_minus_intK = Ms[i] - 1.0;
        row.iterations = 1;
        row.residual = 0.0;
        row.method = SolveMethod::newton;
        t.rows.push_back(row);
    }
    return t;
}

}  // namespace

TEST_CASE("profile classification maps difference signs to shapes") {
    auto shape_of = [](const std::vector<double>& Ms) {
        return classify_profile(synthetic_table(Ms)).shape;
    };

    CHECK(shape_of({1, 2, 3, 4, 5, 6}) == Shape::increasing);
    CHECK(shape_of({6, 5, 4, 3, 2, 1}) == Shape::decreasing);
    CHECK(shape_of({1, 1, 1, 1, 1}) == Shape::flat);
    CHECK(shape_of({1, 2, 3, 2.5, 2, 1.5}) == Shape::unimodal_max);
    CHECK(shape_of({3, 2, 1, 1.5, 2, 2.5}) == Shape::unimodal_min);
    CHECK(shape_of({1, 2, 1.5, 2.5, 1.8, 1.2}) == Shape::multimodal);

    SECTION("sub-threshold wiggles do not count as monotonicity changes") {
        // jitter at 1e-9 of the range must vanish under the 1e-6 threshold
        std::vector<double> Ms;
        for (int i = 0; i < 20; ++i)
            Ms.push_back(1.0 + 0.05 * i + ((i % 2) ? 1e-9 : -1e-9));
        CHECK(shape_of(Ms) == Shape::increasing);
    }

    SECTION("counters agree with the shape") {
        ProfileClass two_humps =
            classify_profile(synthetic_table({1, 3, 2, 4, 2.5, 2.0, 1.0}));
        CHECK(two_humps.shape == Shape::multimodal);
        CHECK(two_humps.n_interior_maxima == 2);
        CHECK(two_humps.n_sign_changes_of_slope == 3);
        CHECK(two_humps.argmax_d == Catch::Approx(1000.0));  // row 3 carries max M

        ProfileClass hump = classify_profile(synthetic_table({1, 2, 3, 2, 1}));
        CHECK(hump.n_interior_maxima == 1);
        CHECK(hump.n_sign_changes_of_slope == 1);
    }

    SECTION("too few rows is an error") {
        CHECK_THROWS_AS(classify_profile(synthetic_table({1, 2, 3, 4})), TooFewPoints);
    }
}

TEST_CASE("hypothesis detectors separate exact structure from noise") {
    auto g = unit_grid();
    ScalarField K = cos_pi_field(g, 2.0);

    CHECK(relative_deviation_from_mean(ScalarField::constant(g, 3.0)) == 0.0);
    CHECK(relative_deviation_from_mean(K / K) == 0.0);
    CHECK(relative_deviation_from_mean(K) > 0.1);

    CHECK(nearly_constant(ScalarField::constant(g, 2.5), 1e-12));
    CHECK_FALSE(nearly_constant(K, 1e-12));
    ScalarField wiggle = map(K / K, [](double v) { return v * (1.0 + 1e-14); });
    CHECK(nearly_constant(wiggle, 1e-12));
}

TEST_CASE("manufactured movement yields a flat curve and abstentions") {
    const auto& run = cached_run("pk_manufactured");

    for (const auto& row : run.table.rows) {
        CHECK(row.method == SolveMethod::newton);
        CHECK(std::abs(row.M_minus_intK) <= 1e-8);
    }
    CHECK(report_for(run, ClaimId::lou_conjecture_probe).observed.find("shape = flat") !=
          std::string::npos);

    CHECK(report_for(run, ClaimId::thm31).verdict == Verdict::inapplicable);
    CHECK(report_for(run, ClaimId::thm32).verdict == Verdict::inapplicable);
    CHECK(report_for(run, ClaimId::cor23_limit).verdict == Verdict::inapplicable);
    CHECK(report_for(run, ClaimId::cor34).verdict == Verdict::indeterminate);
    CHECK(report_for(run, ClaimId::lem33_pos).verdict == Verdict::indeterminate);
    CHECK(report_for(run, ClaimId::lem33_neg).verdict == Verdict::indeterminate);
    CHECK(report_for(run, ClaimId::thm36).verdict == Verdict::inapplicable);
    CHECK(report_for(run, ClaimId::thmA1).verdict == Verdict::inapplicable);
    CHECK(report_for(run, ClaimId::thmA2_upper).verdict == Verdict::inapplicable);
    CHECK(report_for(run, ClaimId::thmA2_lower).verdict == Verdict::inapplicable);
}

TEST_CASE("movement matched to K/r confirms the population excess claims") {
    const auto& run = cached_run("ex4.4");

    CHECK(report_for(run, ClaimId::thm31).verdict == Verdict::confirmed);
    CHECK(report_for(run, ClaimId::thm32).verdict == Verdict::inapplicable);
    CHECK(report_for(run, ClaimId::lem33_pos).verdict == Verdict::confirmed);
    CHECK(report_for(run, ClaimId::lem33_neg).verdict == Verdict::inapplicable);
    CHECK(report_for(run, ClaimId::thm35_pos).verdict == Verdict::confirmed);
    CHECK(report_for(run, ClaimId::thm35_neg).verdict == Verdict::inapplicable);
    CHECK(report_for(run, ClaimId::thm36).verdict == Verdict::confirmed);
    CHECK(report_for(run, ClaimId::cor23_limit).verdict == Verdict::confirmed);
    CHECK(report_for(run, ClaimId::cor34).verdict == Verdict::inapplicable);

    // every row of the curve sits strictly above the capacity integral
    for (const auto& row : run.table.rows) CHECK(row.M_minus_intK > 0.0);
}

TEST_CASE("constant growth rate confirms the population deficit claim") {
    const auto& run = cached_run("ex4.4_l0");

    CHECK(report_for(run, ClaimId::thm32).verdict == Verdict::confirmed);
    CHECK(report_for(run, ClaimId::thm31).verdict == Verdict::inapplicable);
    CHECK(report_for(run, ClaimId::thm35_pos).verdict == Verdict::inapplicable);
    CHECK(report_for(run, ClaimId::thm35_neg).verdict == Verdict::inapplicable);
    CHECK(report_for(run, ClaimId::lem33_pos).verdict == Verdict::indeterminate);
    CHECK(report_for(run, ClaimId::lem33_neg).verdict == Verdict::indeterminate);

    for (const auto& row : run.table.rows) CHECK(row.M_minus_intK < 0.0);
}

TEST_CASE("anti-aligned capacity and movement confirm the weighted excess") {
    const auto& run = cached_run("a1_demo");

    const auto& a1 = report_for(run, ClaimId::thmA1);
    CHECK(a1.verdict == Verdict::confirmed);
    CHECK(a1.hypotheses_hold);

    const auto& c34 = report_for(run, ClaimId::cor34);
    CHECK(c34.verdict == Verdict::confirmed);
    CHECK(c34.predicted.find("M(d) - intK > 0") != std::string::npos);

    // the analytic gradient-alignment integral is -pi^2/2
    double J = integrate(gradient(run.K) * gradient(run.P));
    CHECK(J == Catch::Approx(-M_PI * M_PI / 2.0).margin(2e-4));
}

TEST_CASE("square-law movement flips the small-d side and the moment chain") {
    const auto& run = cached_run("k_squared_movement");

    const auto& c34 = report_for(run, ClaimId::cor34);
    CHECK(c34.verdict == Verdict::confirmed);
    CHECK(c34.predicted.find("M(d) - intK < 0") != std::string::npos);

    CHECK(report_for(run, ClaimId::thmA2_upper).verdict == Verdict::confirmed);
    CHECK(report_for(run, ClaimId::thmA2_lower).verdict == Verdict::inapplicable);

    // r = K but gradients align positively, so the weighted-excess claim
    // does not apply
    CHECK(report_for(run, ClaimId::thmA1).verdict == Verdict::inapplicable);
}

TEST_CASE("square-root movement keeps the ordered moment chain") {
    const auto& run = cached_run("ex4.1a");

    CHECK(report_for(run, ClaimId::thmA2_lower).verdict == Verdict::confirmed);
    CHECK(report_for(run, ClaimId::thmA2_upper).verdict == Verdict::inapplicable);
    CHECK(report_for(run, ClaimId::cor34).verdict == Verdict::inapplicable);
    CHECK(report_for(run, ClaimId::lem33_pos).verdict == Verdict::indeterminate);
    CHECK(report_for(run, ClaimId::lem33_neg).verdict == Verdict::indeterminate);

    WeightedMoments m = weighted_moments(run.small[0].u, run.r, run.K, run.P);
    CHECK(m.int_ru2 < m.int_rKu);
    CHECK(m.int_rKu < m.int_rK2);
}

TEST_CASE("every verdict respects the applicability contract") {
    for (const char* key : {"pk_manufactured", "ex4.4", "ex4.4_l0", "a1_demo",
                            "k_squared_movement", "ex4.1a"}) {
        const auto& run = cached_run(key);
        REQUIRE(run.reports.size() == all_claims().size());
        for (const auto& rep : run.reports) {
            INFO(key << " / " << to_string(rep.claim));
            CHECK((rep.verdict == Verdict::inapplicable) == !rep.hypotheses_hold);
            if (rep.verdict == Verdict::violated) CHECK_FALSE(rep.witness_rows.empty());
            if (rep.verdict != Verdict::violated) CHECK(rep.witness_rows.empty());
            CHECK(!rep.predicted.empty());
            CHECK(!rep.observed.empty());
        }
        CHECK(report_for(run, ClaimId::lou_conjecture_probe).verdict ==
              Verdict::indeterminate);
    }
}

TEST_CASE("lambda sweep runs the power panel and tags failures") {
    Scenario sc = builtin_example("ex4.4").with_d_grid(1e-4, 1e4, 33);
    ScalarField K = sc.sample_K(), P = sc.sample_P();
    auto d = sc.d_grid();

    auto entries = lambda_sweep(K, P, 1.0, {0.0, 1.0}, d);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].lambda == 0.0);
    CHECK(entries[1].lambda == 1.0);
    CHECK(entries[1].table.m_inf == Catch::Approx(integrate(K)).epsilon(1e-12));
    CHECK(classify_profile(entries[0].table).shape == Shape::decreasing);
    CHECK(classify_profile(entries[1].table).shape == Shape::unimodal_max);

    for (const auto& e : entries) {
        double gap = std::abs(e.table.rows.back().M - e.table.m_inf);
        CHECK(gap <= 0.01 * e.table.m_inf);
    }

    SECTION("failures carry the exponent") {
        SolverOptions broken;
        broken.max_newton_iters = 0;
        broken.pt_max_steps = 1;
        try {
            lambda_sweep(K, P, 1.0, {0.5}, d, broken);
            FAIL("expected SweepFailure");
        } catch (const SweepFailure& f) {
            CHECK(f.lambda == 0.5);
            CHECK(f.d == d.front());
        }
    }

    SECTION("alpha and lambda validation") {
        CHECK_THROWS_AS(lambda_sweep(K, P, 0.0, {1.0}, d), std::invalid_argument);
        CHECK_THROWS_AS(lambda_sweep(K, P, 1.0, {std::nan("")}, d), std::invalid_argument);
    }
}

TEST_CASE("sweep tables reject inconsistent inputs") {
    Scenario sc = builtin_example("pk_manufactured").with_d_grid(1e-2, 1e2, 9);
    ScalarField K = sc.sample_K(), P = sc.sample_P(), r = sc.sample_r();
    auto d = sc.d_grid();
    auto results = continuation_sweep(K, P, r, d, sc.options());

    CHECK_THROWS_AS(build_sweep_table("x", K, P, r, std::vector<double>{1.0}, results),
                    std::invalid_argument);

    auto bad = results;
    bad.front().converged = false;
    CHECK_THROWS_AS(build_sweep_table("x", K, P, r, d, bad), std::invalid_argument);

    SweepTable t = build_sweep_table("pk", K, P, r, d, results);
    CHECK(t.intK == Catch::Approx(2.0).margin(1e-10));
    CHECK(t.beta * integrate(P) == Catch::Approx(t.m_inf));
    REQUIRE(t.rows.size() == d.size());
    CHECK(t.rows.front().d == 1e-2);
    CHECK(t.rows.back().d == 1e2);
}
