#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qrm/eigensolve.hpp"
#include "qrm/model.hpp"
#include "qrm/zhang.hpp"
#include "test_util.hpp"

using namespace qrm;

namespace {

const ModelParams kJuddParams{1.0, std::sqrt(3.0) / 4.0, 0.5, 0.0};
constexpr double kJuddEnergy = 0.8125;

// 2x2 ladder-block oracle: eigenvalues of [[d1, c], [c, d2]]
std::pair<double, double> two_by_two(double d1, double d2, double c) {
    const double mean = 0.5 * (d1 + d2);
    const double r = std::hypot(0.5 * (d1 - d2), c);
    return {mean - r, mean + r};
}

}  // namespace

TEST_CASE("zhang_level: uncoupled limit reproduces omega*n +- lambda") {
    const ModelParams p{1.0, 0.0, 0.3, 0.0};
    CHECK(zhang_level(p, Subspectrum::II, 0, Branch::plus) == Approx(0.7));
    CHECK(zhang_level(p, Subspectrum::II, 0, Branch::minus) == Approx(0.3));
}

TEST_CASE("zhang_level matches the 2x2 JC block oracle") {
    const ModelParams p{1.0, 0.2, 0.3, 0.0};
    // JC pair {|n+1,v>, |n,^>} at n = 0
    const auto [lo, hi] = two_by_two(p.omega - p.lambda, p.lambda, p.g);
    CHECK(zhang_level(p, Subspectrum::II, 0, Branch::minus) == Approx(lo).epsilon(1e-14));
    CHECK(zhang_level(p, Subspectrum::II, 0, Branch::plus) == Approx(hi).epsilon(1e-14));
    CHECK(hi == Approx(0.5 + std::sqrt(0.08)));
    CHECK(std::sqrt(0.08) == Approx(0.28284271247461903));
}

TEST_CASE("zhang_level matches the 2x2 AJC block oracle at the showcase point") {
    // AJC pair {|n+1,^>, |n,v>} at n = 0
    const auto [lo, hi] = two_by_two(kJuddParams.omega + kJuddParams.lambda,
                                     -kJuddParams.lambda, kJuddParams.g);
    CHECK(zhang_level(kJuddParams, Subspectrum::I, 0, Branch::plus) == Approx(hi).epsilon(1e-14));
    CHECK(zhang_level(kJuddParams, Subspectrum::I, 0, Branch::minus) == Approx(lo).epsilon(1e-14));
    CHECK(hi == Approx(1.5897247358851684));
    CHECK(lo == Approx(-0.5897247358851684));
}

TEST_CASE("every ladder level is an eigenvalue of its truncated matrix") {
    const ModelParams p{1.0, 0.35, 0.22, 0.0};
    const Truncation t{16};
    const Spectrum jc = eigs_dense(build_jc(p, t), 1e-15);
    const Spectrum ajc = eigs_dense(build_ajc(p, t), 1e-15);

    auto contains = [](const Spectrum& s, double e) {
        double best = 1e9;
        for (const auto& l : s.levels) best = std::min(best, std::abs(l.energy - e));
        return best;
    };
    for (std::size_t n = 0; n + 2 <= t.n_max; ++n)
        for (Branch b : {Branch::minus, Branch::plus}) {
            CHECK(contains(jc, zhang_level(p, Subspectrum::II, n, b)) < 1e-12);
            CHECK(contains(ajc, zhang_level(p, Subspectrum::I, n, b)) < 1e-12);
        }
    // isolated uncoupled levels sit outside the ladder formulas
    CHECK(contains(jc, -p.lambda) < 1e-12);
    CHECK(contains(ajc, p.lambda) < 1e-12);
}

TEST_CASE("enumerate_zhang: uncoupled limit lists both ladders") {
    const ModelParams p{1.0, 0.0, 0.3, 0.0};
    const auto levels = enumerate_zhang(p, 2.1);
    std::vector<double> es;
    for (const auto& l : levels) es.push_back(l.energy);
    const std::vector<double> expect{-0.3, 0.3, 0.7, 0.7, 1.3, 1.3, 1.7, 1.7};
    REQUIRE(es.size() == expect.size());
    for (std::size_t i = 0; i < es.size(); ++i) CHECK(es[i] == Approx(expect[i]).margin(1e-14));
    CHECK(std::is_sorted(es.begin(), es.end()));
}

TEST_CASE("enumerate_zhang: below the lowest level the list is empty") {
    CHECK(enumerate_zhang(ModelParams{1.0, 0.0, 0.3, 0.0}, -2.0).empty());
}

TEST_CASE("enumerate_zhang: no n reaches the quasi-exact energy") {
    const auto levels = enumerate_zhang(kJuddParams, 1.0);
    CHECK(levels.size() == 5);
    for (const auto& l : levels) CHECK(std::abs(l.energy - kJuddEnergy) > 0.01);
}

TEST_CASE("enumerate_zhang: isolated levels appear only on request") {
    const ModelParams p{1.0, 0.4, 0.3, 0.0};
    const auto bare = enumerate_zhang(p, 3.0);
    const auto with = enumerate_zhang(p, 3.0, true);
    CHECK(with.size() == bare.size() + 2);
    int isolated = 0;
    for (const auto& l : with)
        if (l.isolated) {
            ++isolated;
            CHECK((l.energy == p.lambda || l.energy == -p.lambda));
        }
    CHECK(isolated == 2);
}

TEST_CASE("invert_level is the inverse of zhang_level on integers") {
    const ModelParams p{1.0, 0.37, 0.21, 0.0};
    const double e = zhang_level(p, Subspectrum::I, 3, Branch::plus);
    const auto n = invert_level(p, Subspectrum::I, Branch::plus, e);
    REQUIRE(n.has_value());
    CHECK(*n == Approx(3.0).margin(1e-12));

    test::Rng rng(71);
    for (int rep = 0; rep < 30; ++rep) {
        const ModelParams q{1.0, rng.uniform(0.05, 1.0), rng.uniform(-0.9, 0.9), 0.0};
        const auto sub = rng.next() % 2 ? Subspectrum::I : Subspectrum::II;
        const auto br = rng.next() % 2 ? Branch::plus : Branch::minus;
        const auto nn = rng.next() % 12;
        const auto back = invert_level(q, sub, br, zhang_level(q, sub, nn, br));
        REQUIRE(back.has_value());
        CHECK(*back == Approx(double(nn)).margin(1e-9));
    }
}

TEST_CASE("invert_level: no real solution below the branch minimum") {
    const ModelParams p{1.0, 0.5, 0.3, 0.0};
    CHECK_FALSE(invert_level(p, Subspectrum::II, Branch::minus, -10.0).has_value());
    CHECK_FALSE(invert_level(p, Subspectrum::II, Branch::plus, -10.0).has_value());
}

TEST_CASE("branch scan at the quasi-exact energy: no root is a nonnegative integer") {
    // the two positive roots and the magnitudes of the two negative ones;
    // the latter match the published reference values 0.714 and 0.0986
    const auto roots_i = invert_level_roots(kJuddParams, Subspectrum::I, kJuddEnergy);
    const auto roots_ii = invert_level_roots(kJuddParams, Subspectrum::II, kJuddEnergy);
    REQUIRE(roots_i.size() == 2);
    REQUIRE(roots_ii.size() == 2);
    CHECK(roots_i[0].n == Approx(-0.713965520558433).margin(1e-12));
    CHECK(roots_i[1].n == Approx(1.526465520558433).margin(1e-12));
    CHECK(roots_ii[0].n == Approx(-0.098609200668860).margin(1e-12));
    CHECK(roots_ii[1].n == Approx(0.911109200668860).margin(1e-12));
    CHECK(std::abs(roots_i[0].n) == Approx(0.714).margin(5e-4));
    CHECK(std::abs(roots_ii[0].n) == Approx(0.0986).margin(5e-4));

    for (Subspectrum sub : {Subspectrum::I, Subspectrum::II})
        for (Branch b : {Branch::minus, Branch::plus}) {
            const auto n = invert_level(kJuddParams, sub, b, kJuddEnergy);
            if (!n.has_value()) continue;
            CHECK(std::abs(*n - std::round(*n)) >= 0.01);
        }
}

TEST_CASE("nearest_zhang: zero distance on a ladder level") {
    const ModelParams p{1.0, 0.42, 0.27, 0.0};
    const double e = zhang_level(p, Subspectrum::II, 2, Branch::minus);
    const auto [level, dist] = nearest_zhang(p, e);
    CHECK(dist == Approx(0.0).margin(1e-14));
    CHECK(level.sub == Subspectrum::II);
    CHECK(level.n == 2);
}

TEST_CASE("nearest_zhang: the quasi-exact energy is missed by a finite margin") {
    const auto [level, dist] = nearest_zhang(kJuddParams, kJuddEnergy);
    CHECK(dist > 0.01);
    // frozen minimum: |0.8125 - (1.5 - sqrt(0.375))| for subspectrum II, n = 1
    CHECK(dist == Approx(0.0751275643042055).margin(1e-12));
    CHECK(level.sub == Subspectrum::II);
    CHECK(level.n == 1);
    CHECK(level.branch == Branch::minus);
}

TEST_CASE("nearest_zhang: the true ground energy is missed at finite coupling") {
    const ModelParams p{1.0, 0.5, 0.3, 0.0};
    const ConvergedSpectrum cs = converge_spectrum(p, 2, 1e-10);
    const double ground = cs.spectrum.levels.front().energy;
    CHECK(nearest_zhang(p, ground).distance > 0.01);
}

TEST_CASE("nearest_zhang handles energies far below the ladder") {
    const auto [level, dist] = nearest_zhang(ModelParams{1.0, 0.3, 0.2, 0.0}, -25.0);
    CHECK(dist > 20.0);
}

TEST_CASE("zhang_level: plus branch increases strictly with n") {
    test::Rng rng(83);
    for (int rep = 0; rep < 10; ++rep) {
        const ModelParams p{1.0, rng.uniform(0.0, 1.2), rng.uniform(-1.0, 1.0), 0.0};
        for (Subspectrum sub : {Subspectrum::I, Subspectrum::II}) {
            double prev = zhang_level(p, sub, 0, Branch::plus);
            for (std::size_t n = 1; n < 20; ++n) {
                const double cur = zhang_level(p, sub, n, Branch::plus);
                CHECK(cur > prev);
                prev = cur;
            }
        }
    }
}

TEST_CASE("at g = 0 the ladders coincide with the true spectrum level by level") {
    for (double lambda : {0.3, 0.5}) {
        const ModelParams p{1.0, 0.0, lambda, 0.0};
        const ConvergedSpectrum cs = converge_spectrum(p, 6, 1e-10);
        for (const Level& l : cs.spectrum.levels)
            CHECK(nearest_zhang(p, l.energy).distance < 1e-10);
    }
}

TEST_CASE("AnalyticLevel energies satisfy their defining form") {
    const ModelParams p{1.0, 0.77, 0.31, 0.0};
    for (const AnalyticLevel& l : enumerate_zhang(p, 6.0)) {
        const double c = l.sub == Subspectrum::I ? 0.5 * p.omega + p.lambda
                                                 : 0.5 * p.omega - p.lambda;
        const double rad = c * c + (double(l.n) + 1.0) * p.g * p.g;
        REQUIRE(rad >= 0.0);
        const double expect = p.omega * (double(l.n) + 0.5) +
                              (l.branch == Branch::plus ? 1.0 : -1.0) * std::sqrt(rad);
        CHECK(l.energy == Approx(expect).margin(1e-14));
    }
}
