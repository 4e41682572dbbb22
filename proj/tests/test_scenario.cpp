#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include "dispersal/scenario.hpp"

using namespace dispersal;

namespace {

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    return inf_norm_diff(a, b);
}

}  // namespace

TEST_CASE("every builtin example loads with strictly positive fields") {
    for (const auto& id : builtin_example_ids()) {
        INFO("example " << id);
        Scenario s = builtin_example(id);
        CHECK(s.name() == id);
        CHECK(min_value(s.sample_K()) > 0.0);
        CHECK(min_value(s.sample_P()) > 0.0);
        CHECK(min_value(s.sample_r()) > 0.0);
        auto d = s.d_grid();
        REQUIRE(d.size() == 81);
        CHECK(d.front() == 1e-4);
        CHECK(d.back() == 1e4);
    }
    CHECK_THROWS_AS(builtin_example("ex9.9"), UnknownExample);
}

TEST_CASE("serialize then load reproduces identical sampled fields") {
    for (const auto& id : builtin_example_ids()) {
        INFO("example " << id);
        Scenario a = builtin_example(id);
        Scenario b = load_scenario(a.serialize());
        CHECK(b.name() == a.name());
        CHECK(b.grid() == a.grid());
        CHECK(max_abs_diff(a.sample_K(), b.sample_K()) == 0.0);
        CHECK(max_abs_diff(a.sample_P(), b.sample_P()) == 0.0);
        CHECK(max_abs_diff(a.sample_r(), b.sample_r()) == 0.0);
        CHECK(a.d_grid() == b.d_grid());
        CHECK(b.options().newton_tol == a.options().newton_tol);
        CHECK(b.options().pt_tol == a.options().pt_tol);
    }
}

TEST_CASE("a minimal config file reproduces the K, P, power-rate example") {
    const char* text =
        "# growth through the power family\n"
        "K = \"2+cos(pi*x)\"\n"
        "P = \"2-cos(2*pi*x)\"\n"
        "r_lambda = 1\n"
        "r_alpha = 1\n";
    Scenario s = load_scenario(text);
    Scenario ref = builtin_example("ex4.4");
    CHECK(s.grid() == ref.grid());
    CHECK(max_abs_diff(s.sample_K(), ref.sample_K()) == 0.0);
    CHECK(max_abs_diff(s.sample_P(), ref.sample_P()) == 0.0);
    CHECK(max_abs_diff(s.sample_r(), ref.sample_r()) == 0.0);
    CHECK(s.d_grid() == ref.d_grid());
    CHECK(s.name() == "custom");  // name was not given
}

TEST_CASE("non-positive fields are rejected at load with location info") {
    const char* text =
        "K = \"cos(pi*x)\"\n"
        "P = \"1\"\n"
        "r = \"1\"\n";
    try {
        load_scenario(text);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("K") != std::string::npos);
        CHECK(msg.find("positive") != std::string::npos);
        CHECK(msg.find("x = ") != std::string::npos);
    }
}

TEST_CASE("structural config errors carry the offending line or key") {
    auto message_of = [](const char* text) {
        try {
            load_scenario(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("NO ERROR");
    };

    CHECK(message_of("K = \"1\"\nr = \"1\"\n") == "missing key P");
    CHECK(message_of("P = \"1\"\nr = \"1\"\n") == "missing key K");
    CHECK(message_of("K = \"1\"\nP = \"1\"\n") ==
          "missing key r (or r_lambda for the power family)");
    CHECK(message_of("K = \"1\"\nP = \"1\"\nfoo = 3\nr = \"1\"\n")
              .find("line 3: unknown key 'foo'") != std::string::npos);
    CHECK(message_of("K = \"1\"\nK = \"2\"\nP = \"1\"\nr = \"1\"\n")
              .find("line 2: duplicate key 'K'") != std::string::npos);
    CHECK(message_of("K = \"1\"\nP = \"1\"\nr = \"1\"\nr_lambda = 1\n")
              .find("mutually exclusive") != std::string::npos);
    CHECK(message_of("K = \"1\"\nP = \"1\"\nr_alpha = 2\n")
              .find("r_alpha given without r_lambda") != std::string::npos);
    CHECK(message_of("K = \"1\"\nP = \"1\"\nr = \"1\"\nd_min = abc\n")
              .find("line 4") != std::string::npos);
    CHECK(message_of("K = 2+x\nP = \"1\"\nr = \"1\"\n")
              .find("double-quoted") != std::string::npos);
    CHECK(message_of("K \"1\"\nP = \"1\"\nr = \"1\"\n")
              .find("expected key = value") != std::string::npos);
    CHECK(message_of("K = \"2+*x\"\nP = \"1\"\nr = \"1\"\n")
              .find("in K:") != std::string::npos);
    CHECK(message_of("K = \"1\"\nP = \"1\"\nr = \"1\"\nd_min = -1\n")
              .find("d_min") != std::string::npos);
    CHECK(message_of("K = \"1\"\nP = \"1\"\nr = \"1\"\nd_max = 1e-5\n")
              .find("d_max") != std::string::npos);
    CHECK(message_of("K = \"1\"\nP = \"1\"\nr = \"1\"\nd_points = 1\n")
              .find("d_points") != std::string::npos);
    CHECK(message_of("K = \"1\"\nP = \"1\"\nr = \"1\"\nn_cells = 4\n")
              .find("n_cells") != std::string::npos);
    CHECK(message_of("K = \"ln(x)\"\nP = \"1\"\nr = \"1\"\n")
              .find("K fails to evaluate") != std::string::npos);
}

TEST_CASE("power-family rates match alpha*(K/P)^lambda nodewise") {
    Scenario base = builtin_example("ex4.4");
    ScalarField K = base.sample_K();
    ScalarField P = base.sample_P();

    SECTION("lambda = 0 gives exactly constant alpha") {
        ScalarField r = base.with_lambda(0.0).sample_r();
        for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == 1.0);
    }
    SECTION("lambda = 1 gives exactly K/P") {
        ScalarField r = base.sample_r();
        ScalarField q = K / P;
        CHECK(max_abs_diff(r, q) == 0.0);
    }
    SECTION("general lambda matches pow") {
        ScalarField r = base.with_lambda(2.5).sample_r();
        for (std::size_t i = 0; i < r.size(); ++i)
            CHECK(r[i] == std::pow(K[i] / P[i], 2.5));
    }
    SECTION("alpha scales the rate") {
        ScenarioConfig cfg = base.config();
        cfg.r_alpha = 3.0;
        ScalarField r = make_scenario(cfg).sample_r();
        ScalarField q = K / P;
        for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == 3.0 * q[i]);
    }
    SECTION("with_lambda requires a power-law scenario") {
        CHECK_THROWS_AS(builtin_example("pk_manufactured").with_lambda(2.0), ConfigError);
    }
}

TEST_CASE("derived scenarios rebuild grids and d-grids") {
    Scenario s = builtin_example("ex4.2a");
    Scenario fine = s.with_resolution(1024);
    CHECK(fine.grid().n_cells == 1024);
    CHECK(fine.sample_K().size() == 1025);
    CHECK(max_abs_diff(fine.sample_K(s.grid()), s.sample_K()) == 0.0);

    Scenario narrow = s.with_d_grid(1e-2, 1e2, 5);
    auto d = narrow.d_grid();
    REQUIRE(d.size() == 5);
    CHECK(d.front() == 1e-2);
    CHECK(d[2] == Catch::Approx(1.0).margin(1e-15));
    CHECK(d.back() == 1e2);
}

TEST_CASE("solver tolerances flow from the config into the options") {
    const char* text =
        "name = tight run\n"
        "K = \"2+cos(pi*x)\"\n"
        "P = \"1\"\n"
        "r = \"1\"\n"
        "newton_tol = 1e-12\n"
        "pt_tol = 1e-9\n"
        "n_cells = 64\n";
    Scenario s = load_scenario(text);
    CHECK(s.name() == "tight run");
    CHECK(s.options().newton_tol == 1e-12);
    CHECK(s.options().pt_tol == 1e-9);
    CHECK(s.grid().n_cells == 64);
    Scenario again = load_scenario(s.serialize());
    CHECK(again.name() == "tight run");
    CHECK(again.options().newton_tol == 1e-12);
}

TEST_CASE("the narrow carrying-capacity dip of the bump example stays resolved") {
    Scenario s = builtin_example("ex4.3");
    double mn = min_value(s.sample_K());
    CHECK(mn > 0.0);
    CHECK(mn < 0.2);  // the field genuinely dips near its analytic minimum
    CHECK(min_value(s.sample_P()) > 0.15);
}
