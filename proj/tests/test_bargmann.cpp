#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "qrm/bargmann.hpp"
#include "test_util.hpp"

using namespace qrm;

namespace {
const double kJuddG = std::sqrt(3.0) / 4.0;
constexpr double kJuddLambda = 0.5;
constexpr double kJuddEnergy = 0.8125;
}  // namespace

TEST_CASE("PolyExp algebra: derivative and affine multiplication") {
    // f = (1 + 2z) e^{-0.5 z}
    const PolyExp f{{1.0, 2.0}, -0.5, 0};
    const PolyExp d = derivative(f);
    REQUIRE(d.coeffs.size() == 2);
    CHECK(d.coeffs[0] == Approx(2.0 - 0.5));        // p' + mu p at z^0
    CHECK(d.coeffs[1] == Approx(-0.5 * 2.0));

    const PolyExp zf = mul_affine(f, 0.3);          // (z + 0.3) f
    REQUIRE(zf.coeffs.size() == 3);
    CHECK(zf.coeffs[0] == Approx(0.3));
    CHECK(zf.coeffs[1] == Approx(1.0 + 0.6));
    CHECK(zf.coeffs[2] == Approx(2.0));

    // numeric cross-check of the derivative at a point
    const double z = 0.731, h = 1e-6;
    const double fd = (eval(f, z + h) - eval(f, z - h)) / (2.0 * h);
    CHECK(eval(d, z) == Approx(fd).epsilon(1e-8));

    CHECK_THROWS_AS(add(f, PolyExp{{1.0}, 0.25, 0}), std::invalid_argument);
}

TEST_CASE("judd_candidate at the showcase point") {
    const JuddCandidate c = judd_candidate(kJuddLambda, kJuddG);
    CHECK(eval(c.phi1, 0.0) == Approx(1.25));
    CHECK(eval(c.phi2, 0.0) == Approx(1.0));
    REQUIRE(c.phi1.coeffs.size() == 2);
    CHECK(c.phi1.coeffs[0] == Approx(1.25));
    CHECK(c.phi1.coeffs[1] == Approx(std::sqrt(3.0)));
    CHECK(c.phi1.rate == Approx(-kJuddG));
    CHECK(c.point.energy == Approx(kJuddEnergy));
    CHECK(std::abs(c.point.constraint_residual) < 1e-12);
}

TEST_CASE("judd_candidate at the 3-4-5 point and the free endpoint") {
    const JuddCandidate c = judd_candidate(0.6, 0.4);
    CHECK(std::abs(c.point.constraint_residual) < 1e-15);
    CHECK(c.point.energy == Approx(0.84));

    const JuddCandidate free = judd_candidate(1.0, 0.0);
    REQUIRE(free.phi1.coeffs.size() == 1);
    CHECK(free.phi1.coeffs[0] == Approx(1.0));
    CHECK(free.phi2.coeffs[0] == Approx(1.0));
    CHECK(free.point.energy == Approx(1.0));
}

TEST_CASE("judd_candidate rejects off-constraint input") {
    CHECK_THROWS_AS(judd_candidate(0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(judd_candidate(0.0, 0.5), std::invalid_argument);
}

TEST_CASE("the quasi-exact pair solves the coupled equations identically") {
    const JuddCandidate c = judd_candidate(kJuddLambda, kJuddG);
    const std::vector<double> zs{0.0, 0.5, -0.5, 1.0, -1.0, 3.0};
    const OdeResidualReport rep =
        ode_residual(c.phi1, c.phi2, c.point.params, c.point.energy, zs);
    CHECK(rep.max_coeff < 1e-14);
    CHECK(rep.identically_zero);
    CHECK(rep.max_abs < 1e-13);
}

TEST_CASE("ode_residual is linear in E") {
    const JuddCandidate c = judd_candidate(kJuddLambda, kJuddG);
    const std::vector<double> zs{0.0};
    const double shift = 0.01;
    const OdeResidualReport rep =
        ode_residual(c.phi1, c.phi2, c.point.params, c.point.energy + shift, zs);
    CHECK_FALSE(rep.identically_zero);
    // residual = -shift * phi_i as a PolyExp identity
    for (std::size_t j = 0; j < rep.r1.coeffs.size(); ++j) {
        const double want = j < c.phi1.coeffs.size() ? -shift * c.phi1.coeffs[j] : 0.0;
        CHECK(rep.r1.coeffs[j] == Approx(want).margin(1e-13));
    }
    CHECK(rep.max_abs == Approx(shift * eval(c.phi1, 0.0)).epsilon(1e-10));

    // residual(E1) - residual(E2) = (E2 - E1) * phi_i at arbitrary energies
    const double e1 = 0.31, e2 = -0.57;
    const OdeResidualReport ra = ode_residual(c.phi1, c.phi2, c.point.params, e1, zs);
    const OdeResidualReport rb = ode_residual(c.phi1, c.phi2, c.point.params, e2, zs);
    for (std::size_t j = 0; j < ra.r1.coeffs.size(); ++j) {
        const double phi = j < c.phi1.coeffs.size() ? c.phi1.coeffs[j] : 0.0;
        CHECK(ra.r1.coeffs[j] - rb.r1.coeffs[j] == Approx((e2 - e1) * phi).margin(1e-12));
    }
    for (std::size_t j = 0; j < ra.r2.coeffs.size(); ++j) {
        const double phi = j < c.phi2.coeffs.size() ? c.phi2.coeffs[j] : 0.0;
        CHECK(ra.r2.coeffs[j] - rb.r2.coeffs[j] == Approx((e2 - e1) * phi).margin(1e-12));
    }
}

TEST_CASE("the same functional form off the constraint leaves a residual") {
    const double lambda = 0.5, g = 0.4;   // violates lambda^2 + 4g^2 = 1
    const PolyExp phi1{{lambda + 2.0 * g * g / lambda, 2.0 * g / lambda}, -g, 1};
    const PolyExp phi2{{1.0}, -g, 2};
    const ModelParams p{1.0, g, lambda, 0.0};
    const std::vector<double> zs{0.0, 1.0};
    const OdeResidualReport rep = ode_residual(phi1, phi2, p, 1.0 - g * g, zs);
    CHECK(rep.max_coeff > 0.01);
    CHECK_FALSE(rep.identically_zero);
}

TEST_CASE("ode_residual frame and rate preconditions") {
    const JuddCandidate c = judd_candidate(kJuddLambda, kJuddG);
    const std::vector<double> zs{0.0};
    CHECK_THROWS_WITH(
        ode_residual(c.phi1, c.phi2, ModelParams{2.0, kJuddG, kJuddLambda, 0.0}, 0.8, zs),
        Catch::Matchers::Contains("omega = 1"));
    CHECK_THROWS_AS(ode_residual(c.phi1, PolyExp{{1.0}, 0.1, 2}, c.point.params, 0.8, zs),
                    std::invalid_argument);
}

TEST_CASE("bargmann_norm of a pure exponential is e^{g^2}") {
    for (double g : {0.25, kJuddG, 1.0}) {
        const PolyExp f{{1.0}, -g, 0};
        CHECK(bargmann_norm(f) == Approx(std::exp(g * g)).margin(1e-12));
    }
}

TEST_CASE("bargmann_norm of the lowest monomials") {
    CHECK(bargmann_norm(PolyExp{{1.0}, 0.0, 0}) == Approx(1.0));
    CHECK(bargmann_norm(PolyExp{{0.0, 1.0}, 0.0, 0}) == Approx(1.0));
    CHECK(bargmann_norm(PolyExp{{0.0, 0.0, 1.0}, 0.0, 0}) == Approx(2.0));   // ||z^2||^2 = 2!
}

TEST_CASE("bargmann_norm is quadratically homogeneous") {
    test::Rng rng(131);
    for (int rep = 0; rep < 8; ++rep) {
        PolyExp f;
        f.rate = rng.uniform(-1.2, 1.2);
        const std::size_t deg = rng.next() % 4;
        for (std::size_t j = 0; j <= deg; ++j) f.coeffs.push_back(rng.uniform(-2.0, 2.0));
        const double c = rng.uniform(0.1, 3.0);
        const double base = bargmann_norm(f);
        CHECK(bargmann_norm(scaled(f, c)) == Approx(c * c * base).epsilon(1e-12));
    }
}

TEST_CASE("Fock coefficients of the quasi-exact pair decay and sum to the norm") {
    const JuddCandidate c = judd_candidate(kJuddLambda, kJuddG);
    const std::size_t M = 60;
    const std::vector<double> f2 = fock_coeffs(c.phi2, M);
    CHECK(std::abs(f2[40]) < 1e-12);

    double partial = 0.0;
    for (double v : f2) partial += v * v;
    CHECK(partial == Approx(bargmann_norm(c.phi2)).margin(1e-12));
}

TEST_CASE("real-axis divergence coexists with a finite Bargmann norm") {
    const PolyExp f{{1.0}, -kJuddG, 0};
    const auto table = real_axis_divergence_demo(f, -10.0);
    REQUIRE(table.size() == 11);
    CHECK(table.front().first == 0.0);
    CHECK(table.back().first == -10.0);
    CHECK(table.back().second == Approx(std::exp(10.0 * kJuddG)).epsilon(1e-12));
    CHECK(table.back().second > 50.0);
    CHECK(bargmann_norm(f) < 3.0);

    // rate 0: only polynomial growth
    const auto poly_table = real_axis_divergence_demo(PolyExp{{1.0, 1.0}, 0.0, 0}, -10.0);
    CHECK(poly_table.back().second == Approx(9.0));

    // the quasi-exact pair itself
    const JuddCandidate c = judd_candidate(kJuddLambda, kJuddG);
    const double p1 = std::abs(eval(c.phi1, -10.0));
    const double p2 = std::abs(eval(c.phi2, -10.0));
    CHECK(p1 > p2);
    CHECK(p2 > 1.0);
    CHECK(std::isfinite(bargmann_norm(c.phi1)));
}

TEST_CASE("Bargmann and Fock pictures agree on the quasi-exact state") {
    // psi_up = (phi1 + phi2)/2, psi_dn = (phi1 - phi2)/2; their Fock
    // coefficients must satisfy the ansatz recurrences at E = 1 - g^2
    const JuddCandidate c = judd_candidate(kJuddLambda, kJuddG);
    const double E = c.point.energy, g = kJuddG, lambda = kJuddLambda;
    const std::size_t M = 30;
    const std::vector<double> a1 = series_coeffs(c.phi1, M + 1);
    const std::vector<double> a2 = series_coeffs(c.phi2, M + 1);

    std::vector<double> alpha(M + 2), beta(M + 2);
    double root_fact = 1.0;
    for (std::size_t m = 0; m <= M + 1; ++m) {
        if (m > 0) root_fact *= std::sqrt(double(m));
        beta[m] = 0.5 * (a1[m] + a2[m]) * root_fact;    // spin-up component
        alpha[m] = 0.5 * (a1[m] - a2[m]) * root_fact;   // spin-down component
    }

    auto norm_residual = [](std::initializer_list<double> terms) {
        double sum = 0.0, scale = 0.0;
        for (double t : terms) {
            sum += t;
            scale = std::max(scale, std::abs(t));
        }
        return scale > 0.0 ? std::abs(sum) / scale : 0.0;
    };

    CHECK(norm_residual({(E + lambda) * alpha[0], -g * beta[1]}) < 1e-10);
    CHECK(norm_residual({(E - lambda) * beta[0], -g * alpha[1]}) < 1e-10);
    for (std::size_t m = 1; m <= M; ++m) {
        const double md = double(m);
        CHECK(norm_residual({(E - md + lambda) * alpha[m], -g * std::sqrt(md + 1.0) * beta[m + 1],
                             -g * std::sqrt(md) * beta[m - 1]}) < 1e-10);
        CHECK(norm_residual({(E - md - lambda) * beta[m], -g * std::sqrt(md + 1.0) * alpha[m + 1],
                             -g * std::sqrt(md) * alpha[m - 1]}) < 1e-10);
    }
}

TEST_CASE("judd_cross_check bundles the full refutation chain") {
    const JuddReport rep = judd_cross_check(kJuddLambda, kJuddG);
    CHECK(rep.found_in_parity_plus);
    CHECK(rep.found_in_parity_minus);
    CHECK(rep.miller_defect_value < 1e-6);
    CHECK(rep.nearest_zhang_distance > 0.01);
    CHECK(rep.ode_residual_max < 1e-12);
    CHECK(rep.pass);
    CHECK(rep.energy == Approx(kJuddEnergy));
}

TEST_CASE("judd_cross_check at the 3-4-5 constraint point") {
    const JuddReport rep = judd_cross_check(0.6, 0.4);
    CHECK(rep.energy == Approx(0.84));
    CHECK(rep.found_in_parity_plus);
    CHECK(rep.found_in_parity_minus);
    CHECK(rep.miller_defect_value < 1e-6);
    CHECK(rep.ode_residual_max < 1e-12);
    CHECK(rep.pass);
}

TEST_CASE("degenerate doublets across the constraint circle") {
    // five points with lambda^2 + 4g^2 = 1: both parity spectra contain 1 - g^2
    for (double lambda : {0.2, 0.4, 0.6, 0.8, 0.95}) {
        const double g = 0.5 * std::sqrt(1.0 - lambda * lambda);
        const double E = 1.0 - g * g;
        const ConvergedSpectrum cs = converge_spectrum(ModelParams{1.0, g, lambda, 0.0}, 6, 1e-10);
        double dev_plus = 1e9, dev_minus = 1e9;
        for (const Level& l : cs.spectrum.levels) {
            const double d = std::abs(l.energy - E);
            if (l.parity == Parity::plus) dev_plus = std::min(dev_plus, d);
            if (l.parity == Parity::minus) dev_minus = std::min(dev_minus, d);
        }
        CHECK(dev_plus < 1e-8);
        CHECK(dev_minus < 1e-8);
    }
}

TEST_CASE("frame conversion reaches the omega = 1 frame") {
    const ModelParams p{2.0, 0.6, 1.2, 0.0};
    const ModelParams u = to_unit_frame(p);
    CHECK(u.omega == 1.0);
    CHECK(u.g == Approx(0.3));
    CHECK(u.lambda == Approx(0.6));
    // the omega-general constraint residual is frame invariant
    CHECK(judd_constraint_residual(p) == Approx(judd_constraint_residual(u)));
}
