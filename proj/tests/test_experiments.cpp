#include <catch2/catch_amalgamated.hpp>

#include "usf/experiments.hpp"

using namespace usf;

TEST_CASE("wired past experiment at desk scale") {
    ExperimentSpec spec;
    spec.depth = 5;
    spec.n_samples = 4000;
    spec.seed = 2;
    spec.threads = 2;
    auto res = run_wired_past_experiment(spec);

    CHECK(res.censored_fraction < 0.2);
    CHECK(res.atom_z < 4.5);
    CHECK(res.diameter_fit.slope < -0.3);
    CHECK(res.area_fit.slope < -0.2);
    // nonempty pasts carry positive area and the atom matches the absent count
    std::int64_t zeros = 0;
    for (std::size_t i = 0; i < res.area.observable.size(); ++i) {
        if (res.area.observable[i] == 0.0)
            ++zeros;
        else
            CHECK(res.area.observable[i] > 0.0);
    }
    CHECK(zeros >= res.absent_count);
}

TEST_CASE("experiment output is identical across worker counts") {
    ExperimentSpec a;
    a.depth = 4;
    a.n_samples = 1500;
    a.seed = 5;
    a.threads = 1;
    ExperimentSpec b = a;
    b.threads = 2;
    auto ra = run_wired_past_experiment(a);
    auto rb = run_wired_past_experiment(b);
    CHECK(ra.diameter.to_csv() == rb.diameter.to_csv());
    CHECK(ra.area.to_csv() == rb.area.to_csv());
    CHECK(fit_csv(ra.diameter_fit, ra.censored_fraction) ==
          fit_csv(rb.diameter_fit, rb.censored_fraction));
}

TEST_CASE("free length experiment") {
    ExperimentSpec spec;
    spec.depth = 5;
    spec.n_samples = 4000;
    spec.seed = 3;
    auto res = run_free_length_experiment(spec);
    for (double x : res.length.observable) CHECK(x >= 1.0);
    CHECK(res.fit.slope < -0.2);
    CHECK(res.censored_fraction < 0.35);  // shallow ball; deep runs sit well below
}

TEST_CASE("parabolic reach probabilities dominate the closed-form bound") {
    CHECK(tube_column_decay(1.0) == Catch::Approx(2.0 - std::sqrt(3.0)).margin(1e-15));
    CHECK(tube_column_decay(0.25) == Catch::Approx(0.5).margin(1e-15));
    CHECK(tube_column_decay(1e4) < 1e-4);  // vanishing bound as c grows

    auto row = run_parabolic_experiment(1.0, 30, 4000, 11, 2);
    const auto n = 4000.0;
    for (std::size_t i = 0; i < row.reach_probability.size(); ++i) {
        const double p = row.reach_probability[i];
        const double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / n);
        CHECK(p >= row.reach_bound[i] - 4.0 * sigma);
    }
    CHECK(row.fit.slope < 0.0);
}

TEST_CASE("fits are stable under doubling the truncation depth") {
    // robustness check: violation is a warning, not a failure
    auto small = run_parabolic_experiment(1.0, 30, 6000, 21, 2);
    auto big = run_parabolic_experiment(1.0, 60, 6000, 21, 2);
    CHECK_NOFAIL(fits_compatible(small.fit, big.fit));

    ExperimentSpec a;
    a.depth = 4;
    a.n_samples = 3000;
    a.seed = 23;
    ExperimentSpec b = a;
    b.depth = 8;
    CHECK_NOFAIL(fits_compatible(run_free_length_experiment(a).fit,
                                 run_free_length_experiment(b).fit));
}

TEST_CASE("parabolic tails order by ring weight") {
    auto light = run_parabolic_experiment(4.0, 24, 6000, 13, 2);
    auto heavy = run_parabolic_experiment(0.1, 24, 6000, 13, 2);
    CHECK(std::abs(light.fit.slope) > std::abs(heavy.fit.slope));
}
