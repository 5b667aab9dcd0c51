#include <doctest.h>

#include <cmath>
#include <vector>

#include "polarlat/lattice.hpp"

using namespace polarlat;

namespace {

// Wide-truncation oracle: sum over lambda in {-50 alpha V, ..., +50 V}.
double pdf_oracle(double n, double sigma, double v) {
    double sum = 0.0;
    for (int k = -50; k <= 50; ++k) {
        const double d = n - k * v;
        sum += std::exp(-d * d / (2.0 * sigma * sigma));
    }
    return sum / (std::sqrt(2.0 * M_PI) * sigma);
}

// Riemann-sum entropy oracle over one cell, >= 1e6 points, in bits.
double entropy_oracle(double sigma, double v, long points = 2'000'001) {
    const double h = v / static_cast<double>(points - 1);
    double acc = 0.0;
    for (long i = 0; i < points; ++i) {
        const double x = -0.5 * v + h * static_cast<double>(i);
        const double f = pdf_oracle(x, sigma, v);
        const double term = f > 1e-300 ? -f * std::log2(f) : 0.0;
        acc += (i == 0 || i == points - 1) ? 0.5 * term : term;
    }
    return acc * h;
}

const PartitionChain kChain{2.5, 3};

}  // namespace

TEST_CASE("partition chain validation and cell volumes") {
    CHECK_THROWS_AS(PartitionChain(0.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(PartitionChain(-1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(PartitionChain(2.5, 1), std::invalid_argument);
    CHECK(kChain.cell_volume(1) == doctest::Approx(2.5));
    CHECK(kChain.cell_volume(2) == doctest::Approx(5.0));
    CHECK(kChain.cell_volume(3) == doctest::Approx(10.0));
    CHECK_THROWS_AS(kChain.cell_volume(4), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("mod_lattice maps into the half-open cell") {
    CHECK(mod_lattice(3.0, kChain, 1) == doctest::Approx(0.5).epsilon(1e-12));
    // the boundary point belongs to the lower edge
    CHECK(mod_lattice(1.25, kChain, 1) == doctest::Approx(-1.25).epsilon(1e-12));
    CHECK(mod_lattice(-7.0, kChain, 2) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK_THROWS_AS(mod_lattice(1.0, kChain, 0), std::invalid_argument);
    CHECK_THROWS_AS(mod_lattice(1.0, kChain, 4), std::invalid_argument);

    // idempotence and range over a sweep
    for (int i = -400; i <= 400; ++i) {
        const double x = 0.173 * i;
        for (int level = 1; level <= 3; ++level) {
            const double r = mod_lattice(x, kChain, level);
            const double v = kChain.cell_volume(level);
            CHECK(r >= -0.5 * v);
            CHECK(r < 0.5 * v);
            CHECK(mod_lattice(r, kChain, level) == doctest::Approx(r).epsilon(1e-15));
        }
    }
}

TEST_CASE("aliased gaussian density limits and golden value") {
    // large sigma: uniform over the cell
    CHECK(aliased_gaussian_pdf(0.0, 100.0, kChain, 1) == doctest::Approx(0.4).epsilon(1e-6));
    // small sigma: plain gaussian at the origin
    CHECK(aliased_gaussian_pdf(0.0, 0.01, kChain, 1) ==
          doctest::Approx(1.0 / (std::sqrt(2.0 * M_PI) * 0.01)).epsilon(1e-9));
    // wide-truncation oracle, frozen from the oracle run
    const double oracle = pdf_oracle(0.7, 1.0, 2.5);
    CHECK(oracle == doctest::Approx(0.393626750241724).epsilon(1e-12));
    CHECK(aliased_gaussian_pdf(0.7, 1.0, kChain, 1) == doctest::Approx(oracle).epsilon(1e-12));

    CHECK_THROWS_AS(aliased_gaussian_pdf(0.0, 0.0, kChain, 1), std::invalid_argument);
    CHECK_THROWS_AS(aliased_gaussian_pdf(0.0, -1.0, kChain, 1), std::invalid_argument);
}

TEST_CASE("aliased density is normalized and periodic") {
    const std::vector<double> alphas{0.8, 2.5};
    const std::vector<double> sigmas{0.3, 1.0, 3.0};
    for (double alpha : alphas) {
        const PartitionChain chain(alpha, 3);
        for (int level = 1; level <= 3; ++level) {
            const double v = chain.cell_volume(level);
            for (double sigma : sigmas) {
                // trapezoid over one cell
                const long pts = 20001;
                const double h = v / static_cast<double>(pts - 1);
                double mass = 0.0;
                for (long i = 0; i < pts; ++i) {
                    const double x = -0.5 * v + h * static_cast<double>(i);
                    const double f = aliased_gaussian_pdf(x, sigma, chain, level);
                    mass += (i == 0 || i == pts - 1) ? 0.5 * f : f;
                }
                CHECK(mass * h == doctest::Approx(1.0).epsilon(1e-9));

                for (double x : {0.1 * v, -0.37 * v, 0.49 * v})
                    CHECK(aliased_gaussian_pdf(x, sigma, chain, level) ==
                          doctest::Approx(aliased_gaussian_pdf(x + v, sigma, chain, level))
                              .epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("log density agrees with the density where both are representable") {
    for (double sigma : {0.05, 1.0, 10.0}) {
        for (double x : {0.0, 0.3, 1.2, -1.24}) {
            const double f = aliased_gaussian_pdf(x, sigma, kChain, 1);
            if (f > 1e-290)
                CHECK(log_aliased_gaussian_pdf(x, sigma, kChain, 1) ==
                      doctest::Approx(std::log(f)).epsilon(1e-10));
        }
    }
    // far tail of a narrow gaussian: plain density underflows, log stays finite
    const double lf = log_aliased_gaussian_pdf(1.25, 0.01, kChain, 1);
    CHECK(std::isfinite(lf));
    CHECK(lf < -7000.0);
}

TEST_CASE("differential entropy limits, oracle value, and bounds") {
    CHECK(differential_entropy(kChain, 1, 100.0) ==
          doctest::Approx(std::log2(2.5)).epsilon(1e-4));
    CHECK(differential_entropy(kChain, 1, 0.01) ==
          doctest::Approx(0.5 * std::log2(2.0 * M_PI * M_E * 1e-4)).epsilon(1e-6));

    // fine Riemann-sum oracle, frozen at the recorded golden value
    const double golden = 2.0470930946101387;  // bits, sigma=1, level 3
    CHECK(entropy_oracle(1.0, 10.0) == doctest::Approx(golden).epsilon(1e-9));
    CHECK(differential_entropy(kChain, 3, 1.0) == doctest::Approx(golden).epsilon(1e-8));

    CHECK_THROWS_AS(differential_entropy(kChain, 1, 0.0), std::invalid_argument);

    // h <= min(log2 V, gaussian entropy) within quadrature tolerance
    for (double sigma : {0.2, 0.7, 1.0, 2.0, 5.0}) {
        for (int level = 1; level <= 3; ++level) {
            const double h = differential_entropy(kChain, level, sigma);
            const double cap = std::min(std::log2(kChain.cell_volume(level)),
                                        0.5 * std::log2(2.0 * M_PI * M_E * sigma * sigma));
            CHECK(h <= cap + 1e-8);
        }
    }
}

TEST_CASE("mod channel capacity limits and golden value") {
    CHECK(mod_channel_capacity(kChain, 1, 100.0) == doctest::Approx(0.0).epsilon(1e-4));
    CHECK(mod_channel_capacity(kChain, 1, 0.01) ==
          doctest::Approx(std::log2(2.5) - 0.5 * std::log2(2.0 * M_PI * M_E * 1e-4))
              .epsilon(1e-6));
    // golden from the entropy oracle: log2(5) - h(5Z, 1)
    CHECK(mod_channel_capacity(kChain, 2, 1.0) == doctest::Approx(0.3244745011000187).epsilon(1e-7));

    // monotone nonincreasing in sigma
    double prev = mod_channel_capacity(kChain, 2, 0.1);
    for (double sigma : {0.3, 0.6, 1.0, 1.8, 3.0, 6.0}) {
        const double c = mod_channel_capacity(kChain, 2, sigma);
        CHECK(c <= prev + 1e-9);
        CHECK(c >= 0.0);
        prev = c;
    }
}

TEST_CASE("partition channel capacity limits and ordering") {
    CHECK(partition_channel_capacity(kChain, 1, 0.01) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(partition_channel_capacity(kChain, 1, 100.0) == doctest::Approx(0.0).epsilon(1e-4));
    CHECK(partition_channel_capacity(kChain, 2, 100.0) == doctest::Approx(0.0).epsilon(1e-4));
    CHECK_THROWS_AS(partition_channel_capacity(kChain, 3, 1.0), std::invalid_argument);

    // degradation ordering across levels at fixed sigma
    for (double sigma : {0.5, 1.0, 2.0})
        CHECK(partition_channel_capacity(kChain, 1, sigma) <=
              partition_channel_capacity(kChain, 2, sigma) + 1e-9);
}

TEST_CASE("capacity telescoping across the chain") {
    const std::vector<double> alphas{0.7, 1.3, 2.5};
    const std::vector<double> sigmas{0.4, 1.0, 2.2};
    for (double alpha : alphas) {
        for (double sigma : sigmas) {
            const PartitionChain chain(alpha, 3);
            const double lhs = partition_channel_capacity(chain, 1, sigma) +
                               partition_channel_capacity(chain, 2, sigma);
            const double rhs =
                mod_channel_capacity(chain, 3, sigma) - mod_channel_capacity(chain, 1, sigma);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
        }
    }
}

TEST_CASE("volume-to-noise ratio") {
    CHECK(vnr(kChain, 1, 1.0) == doctest::Approx(6.25));
    CHECK(vnr(PartitionChain(1.0, 2), 2, 2.0) == doctest::Approx(1.0));
    CHECK(vnr(kChain, 3, 2.0) == doctest::Approx(25.0));
    CHECK_THROWS_AS(vnr(kChain, 1, 0.0), std::invalid_argument);
}
