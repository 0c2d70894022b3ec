#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "heatlab/config.hpp"

using namespace heatlab;

TEST_CASE("key = value parsing with comments and defaults") {
    const auto cfg = parse_config_text(
        "# experiment description\n"
        "grid.dim = 2\n"
        "grid.half_width = 12.5   # box half width\n"
        "grid.points = 64\n"
        "nonlinearity = power(1.5)\n"
        "initial_data = gaussian(0.5, 1)\n"
        "experiment = classify\n"
        "\n"
        "tol = 1e-7\n");
    CHECK(cfg.grid.dim == 2);
    CHECK(cfg.grid.half_width == 12.5);
    CHECK(cfg.grid.points_per_axis == 64);
    CHECK(cfg.nonlinearity == "power(1.5)");
    CHECK(cfg.experiment == "classify");
    CHECK(cfg.tol == 1e-7);
    CHECK(cfg.max_iter == 60);  // default
    CHECK(cfg.time_nodes == 48);
    CHECK(cfg.output_dir == ".");
}

TEST_CASE("diagnostics name the offending key or line") {
    CHECK_THROWS_WITH_AS(parse_config_text("tol 1e-6\n"),
                         doctest::Contains("line 1"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config_text("tol = abc\n"),
                         doctest::Contains("tol"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config_text("experiment = dance\n"),
                         doctest::Contains("dance"), std::runtime_error);
    CHECK_THROWS_AS(parse_config_text("tol = -1\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_config_text("max_iter = 0\n"), std::runtime_error);
    CHECK_THROWS_AS(parse_config_file("no_such_config_file.cfg"), std::runtime_error);
}

TEST_CASE("typed accessors fall back when keys are absent") {
    const auto cfg = parse_config_text("experiment = solve\nsmallness = 1e-2\n");
    CHECK(cfg.get_double("smallness", 0.5) == 1e-2);
    CHECK(cfg.get_double("absent", 0.5) == 0.5);
    CHECK(cfg.get_int("absent", 7) == 7);
    CHECK(cfg.get_string("absent", "x") == "x");
    CHECK(cfg.has("smallness"));
    CHECK_FALSE(cfg.has("absent"));
}

TEST_CASE("manifest round trip preserves semantic fields") {
    const auto cfg = parse_config_text(
        "grid.dim = 2\n"
        "grid.half_width = 7.5\n"
        "grid.points = 32\n"
        "nonlinearity = minpower(2,4)\n"
        "initial_data = gaussian(0.1, 1) - 0.5*gaussian(0.05, 2, 1)\n"
        "experiment = solve\n"
        "tol = 1e-9\n"
        "seed = 42\n"
        "out = runs/demo\n");
    const auto back = ExperimentConfig::from_manifest(cfg.to_manifest());
    CHECK(back.grid == cfg.grid);
    CHECK(back.nonlinearity == cfg.nonlinearity);
    CHECK(back.initial_data == cfg.initial_data);
    CHECK(back.experiment == cfg.experiment);
    CHECK(back.tol == cfg.tol);
    CHECK(back.seed == cfg.seed);
    CHECK(back.output_dir == cfg.output_dir);
}

TEST_CASE("initial data shapes") {
    const GridSpec spec(1, 20.0, 512);

    SUBCASE("gaussian carries its mass argument") {
        const GridField f = make_initial_data("gaussian(0.5, 1.0)", spec);
        CHECK(norm_l1(f) == doctest::Approx(0.5).epsilon(1e-8));
        CHECK(mass(f) == doctest::Approx(0.5).epsilon(1e-8));
        // peak value mass / (width sqrt(2 pi)) at the center
        CHECK(norm_linf(f) == doctest::Approx(0.5 / std::sqrt(2.0 * M_PI)).epsilon(1e-4));
    }
    SUBCASE("signed sums superpose") {
        const GridField f =
            make_initial_data("gaussian(0.3, 1, -5) - 0.5*gaussian(0.2, 1, 5)", spec);
        // disjoint supports: masses add in absolute value
        CHECK(norm_l1(f) == doctest::Approx(0.3 + 0.1).epsilon(1e-6));
        CHECK(mass(f) == doctest::Approx(0.3 - 0.1).epsilon(1e-6));
    }
    SUBCASE("bump is compactly supported with the requested mass") {
        const GridField f = make_initial_data("bump(0.25, 2.0)", spec);
        CHECK(mass(f) == doctest::Approx(0.25).epsilon(1e-10));
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double x = f.spec.axis_coord(f.spec.unflatten(i)[0]);
            if (std::fabs(x) >= 2.0) CHECK(f.values[i] == 0.0);
        }
    }
    SUBCASE("spike concentrates everything in one cell") {
        const GridField f = make_initial_data("spike(0.7)", spec);
        int nonzero = 0;
        for (double v : f.values)
            if (v != 0.0) ++nonzero;
        CHECK(nonzero == 1);
        CHECK(norm_l1(f) == doctest::Approx(0.7).epsilon(1e-12));
    }
    SUBCASE("2d gaussian mass") {
        const GridField f = make_initial_data("gaussian(0.4, 0.8)", GridSpec(2, 10.0, 64));
        CHECK(norm_l1(f) == doctest::Approx(0.4).epsilon(1e-6));
    }
    SUBCASE("grammar errors") {
        CHECK_THROWS_AS(make_initial_data("blob(1, 1)", spec), std::runtime_error);
        CHECK_THROWS_AS(make_initial_data("gaussian(1", spec), std::runtime_error);
        CHECK_THROWS_AS(make_initial_data("gaussian(1, -2)", spec), std::runtime_error);
        CHECK_THROWS_AS(make_initial_data("gaussian(1,1) & spike(1)", spec),
                        std::runtime_error);
    }
}
