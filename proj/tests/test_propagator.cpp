#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "heatlab/fft.hpp"
#include "heatlab/propagator.hpp"

using namespace heatlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

GridField sampled_kernel(const GridSpec& spec, double t) {
    return sample(spec,
                  [&](const std::array<double, 3>& x) { return heat_kernel(x, t, spec.dim); });
}

GridField random_gaussian_mix(const GridSpec& spec, std::mt19937& rng) {
    std::uniform_real_distribution<double> center(-5.0, 5.0);
    std::uniform_real_distribution<double> width(0.5, 2.0);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    GridField f(spec);
    for (int k = 0; k < 3; ++k) {
        const double c = center(rng), w = width(rng), a = amp(rng);
        const GridField g = sample(spec, [&](const std::array<double, 3>& x) {
            double r2 = 0.0;
            for (int d = 0; d < spec.dim; ++d) r2 += (x[d] - c) * (x[d] - c);
            return a * std::exp(-r2 / (2.0 * w * w));
        });
        f = f + g;
    }
    return f;
}

}  // namespace

TEST_CASE("fft round trip and a known transform") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<std::complex<double>> data(64), orig;
    for (auto& z : data) z = {dist(rng), dist(rng)};
    orig = data;
    fft_inplace(data, false);
    fft_inplace(data, true);
    for (std::size_t i = 0; i < data.size(); ++i)
        CHECK(std::abs(data[i] - orig[i]) < 1e-12);

    // delta impulse transforms to the all-ones spectrum
    std::vector<std::complex<double>> delta(8, 0.0);
    delta[0] = 1.0;
    fft_inplace(delta, false);
    for (const auto& z : delta) CHECK(std::abs(z - 1.0) < 1e-14);
}

TEST_CASE("heat kernel closed-form values") {
    CHECK(heat_kernel({0, 0, 0}, 1.0, 1) == doctest::Approx(std::pow(4.0 * M_PI, -0.5)));
    CHECK(heat_kernel({0, 0, 0}, 0.3, 2) == doctest::Approx(std::pow(4.0 * M_PI * 0.3, -1.0)));
    CHECK(heat_kernel({1, 0, 0}, 0.25, 1) ==
          doctest::Approx(std::exp(-1.0) / std::sqrt(M_PI)).epsilon(1e-12));
    CHECK_THROWS_AS(heat_kernel({0, 0, 0}, 0.0, 1), std::invalid_argument);

    // kernel mass on a wide grid is 1
    const GridField g = sampled_kernel(GridSpec(1, 20.0, 512), 0.5);
    CHECK(norm_l1(g) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("apply at t = 0 is the identity") {
    std::mt19937 rng(17);
    const GridSpec spec(1, 10.0, 128);
    const HeatPropagator prop(spec);
    const GridField f = random_gaussian_mix(spec, rng);
    const GridField g = prop.apply(f, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(g.values[i] == f.values[i]);
}

TEST_CASE("constant fields are fixed points") {
    const GridSpec spec(2, 5.0, 16);
    const HeatPropagator prop(spec);
    const GridField c(spec, 2.5);
    const GridField g = prop.apply(c, 0.7);
    for (double v : g.values) CHECK(v == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("propagation reproduces the translated Gaussian kernel") {
    const GridSpec spec(1, 20.0, 512);
    const HeatPropagator prop(spec);
    const GridField g_half = sampled_kernel(spec, 0.5);
    const GridField expect = sampled_kernel(spec, 1.5);
    const GridField got = prop.apply(g_half, 1.0);
    CHECK(norm_l1(got - expect) / norm_l1(expect) < 1e-8);
}

TEST_CASE("semigroup law, mass conservation, positivity, monotonicity") {
    std::mt19937 rng(23);
    const GridSpec spec(1, 10.0, 256);
    const HeatPropagator prop(spec);
    const GridField f = random_gaussian_mix(spec, rng);

    const GridField two_step = prop.apply(prop.apply(f, 0.3), 0.45);
    const GridField one_step = prop.apply(f, 0.75);
    CHECK(norm_l1(two_step - one_step) / norm_l1(one_step) < 1e-10);

    CHECK(std::fabs(mass(prop.apply(f, 0.6)) - mass(f)) <= 1e-12 * norm_l1(f));

    const GridField pos = positive_part(f);
    const GridField evolved = prop.apply(pos, 0.5);
    for (double v : evolved.values) CHECK(v >= -1e-12 * norm_linf(pos));

    GridField g = f;
    for (auto& v : g.values) v += 0.25;
    const GridField fe = prop.apply(f, 0.4), ge = prop.apply(g, 0.4);
    CHECK(pointwise_leq(fe, ge, 1e-12 * norm_linf(g - f)));
}

TEST_CASE("smoothing ratio stays below one in the validity window") {
    std::mt19937 rng(31);
    const GridSpec spec(1, 20.0, 256);
    const HeatPropagator prop(spec);
    const GridField f = random_gaussian_mix(spec, rng);
    REQUIRE(prop.validity_window() == doctest::Approx(25.0));

    for (double t : {1e-3, 1e-2, 0.1, 1.0}) {
        CHECK(prop.smoothing_ratio(f, 1.0, kInf, t) <= 1.0 + 1e-6);
        CHECK(prop.smoothing_ratio(f, 1.0, 1.0, t) <= 1.0 + 1e-6);  // q = r contraction
        CHECK(prop.smoothing_ratio(f, 1.0, 2.0, t) <= 1.0 + 1e-6);
    }
    CHECK_THROWS_AS(prop.smoothing_ratio(GridField(spec), 1.0, kInf, 0.5),
                    std::invalid_argument);
}

TEST_CASE("Gaussian smoothing ratio has the closed form (t/(4 pi (s+t)))^{n/2}") {
    // ||S(t) G(., s)||_inf = (4 pi (s+t))^{-n/2} and ||G(., s)||_1 = 1, so the
    // q = 1, r = inf ratio t^{n/2} ||S(t) G||_inf equals (t / (4 pi (s+t)))^{n/2}.
    const GridSpec spec(1, 20.0, 512);
    const HeatPropagator prop(spec);
    const double s = 0.25;
    const GridField g = sampled_kernel(spec, s);
    for (double t : {0.05, 0.2, 1.0}) {
        const double expect = std::pow(t / (4.0 * M_PI * (s + t)), 0.5);
        CHECK(prop.smoothing_ratio(g, 1.0, kInf, t) == doctest::Approx(expect).epsilon(1e-4));
    }
}

TEST_CASE("smoothing decay profile") {
    const GridSpec spec(1, 20.0, 256);
    const HeatPropagator prop(spec);

    SUBCASE("bounded data: profile vanishes as t -> 0") {
        const GridField bump = sample(spec, [](const std::array<double, 3>& x) {
            const double r = x[0] / 2.0;
            return r * r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0;
        });
        const auto prof = prop.smoothing_decay_profile(bump, 1.0, kInf,
                                                       {1e-4, 1e-3, 1e-2, 0.1});
        REQUIRE(prof.size() == 4);
        for (std::size_t i = 1; i < prof.size(); ++i)
            CHECK(prof[i - 1].second < prof[i].second);  // shrinks toward t = 0
        CHECK(prof.front().second <= std::sqrt(1e-4) * norm_linf(bump) * (1 + 1e-12));
    }
    SUBCASE("spike data: profile bounded by the mass") {
        GridField spike(spec);
        spike.values[128] = 1.0 / spec.cell_volume();  // unit mass in one cell
        const auto prof = prop.smoothing_decay_profile(spike, 1.0, kInf,
                                                       {1e-3, 1e-2, 0.1, 1.0});
        for (const auto& [t, v] : prof) CHECK(v <= norm_l1(spike) * (1.0 + 1e-6));
    }
    SUBCASE("zero field: profile identically zero") {
        const auto prof = prop.smoothing_decay_profile(GridField(spec), 1.0, kInf, {0.1, 1.0});
        for (const auto& [t, v] : prof) CHECK(v == 0.0);
    }
    CHECK_THROWS_AS(prop.smoothing_decay_profile(GridField(spec, 1.0), 1.0, kInf, {}),
                    std::invalid_argument);
}
