// recurrence.hpp — the coefficient recurrences of the eigenstate ansatz
// psi = sum_m alpha_m |m,v> + beta_m |m,^> and the normalizability condition
// sum_m (alpha_m^2 + beta_m^2) < infinity that selects the true eigenvalues.
//
// Projecting H psi = E psi on <m,v| and <m,^| gives, at epsilon = 0,
//   (E - omega*m + lambda) alpha_m = g sqrt(m+1) beta_{m+1} + g sqrt(m) beta_{m-1}
//   (E - omega*m - lambda) beta_m  = g sqrt(m+1) alpha_{m+1} + g sqrt(m) alpha_{m-1}
// The forward pass starts from (alpha_0, beta_0) and shows the generic
// divergence; the backward (Miller) pass extracts the minimal solution family
// stably and turns the two m = 0 equations into a boundary determinant whose
// zeros are the eigenvalues.
//
// Coefficients grow like sqrt(m!) for generic E, so all trajectories are kept
// in a rescaled frame with the accumulated log factor tracked separately.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qrm/eigensolve.hpp"
#include "qrm/model.hpp"

namespace qrm {

struct CoeffTrail {
    std::vector<double> alphas;        // rescaled-frame values, one per m
    std::vector<double> betas;
    std::vector<double> logscale;      // true alpha_m = alphas[m] * exp(logscale[m])
    std::vector<double> partial_norms; // log of sum_{j<=m} (alpha_j^2 + beta_j^2), true frame
    double energy{0.0};
    ModelParams params;

    std::size_t length() const { return alphas.size(); }
};

namespace detail {

constexpr double kRescaleHi = 1e4;
constexpr double kRescaleLo = 1e-4;

inline double log_add(double la, double lb) {
    if (la == -std::numeric_limits<double>::infinity()) return lb;
    if (lb == -std::numeric_limits<double>::infinity()) return la;
    const double m = std::max(la, lb);
    return m + std::log(std::exp(la - m) + std::exp(lb - m));
}

}  // namespace detail

// Forward iteration of the recurrences from (alpha_0, beta_0) up to index M.
inline CoeffTrail forward_trail(const ModelParams& p, double E, double alpha0, double beta0,
                                std::size_t M) {
    validate(p);
    if (p.epsilon != 0.0)
        throw std::invalid_argument("forward_trail: parity broken (epsilon != 0)");
    if (!(p.g > 0.0))
        throw std::invalid_argument("forward_trail: recurrence undefined at g = 0");
    if (alpha0 == 0.0 && beta0 == 0.0)
        throw std::invalid_argument("forward_trail: initial coefficients must not both vanish");
    if (M < 2)
        throw std::invalid_argument("forward_trail: M must be >= 2");

    CoeffTrail t;
    t.energy = E;
    t.params = p;
    t.alphas.reserve(M + 1);
    t.betas.reserve(M + 1);
    t.logscale.reserve(M + 1);
    t.partial_norms.reserve(M + 1);

    double log_factor = 0.0;
    double log_norm = -std::numeric_limits<double>::infinity();
    {
        const double mag0 = std::max(std::abs(alpha0), std::abs(beta0));
        if (mag0 > detail::kRescaleHi || mag0 < detail::kRescaleLo) {
            alpha0 /= mag0;
            beta0 /= mag0;
            log_factor = std::log(mag0);
        }
    }
    auto record = [&](double a, double b) {
        t.alphas.push_back(a);
        t.betas.push_back(b);
        t.logscale.push_back(log_factor);
        const double sq = a * a + b * b;
        if (sq > 0.0)
            log_norm = detail::log_add(log_norm, std::log(sq) + 2.0 * log_factor);
        t.partial_norms.push_back(log_norm);
    };

    // working pair: levels m-1 and m in the current frame
    double a_prev = 0.0, b_prev = 0.0;
    double a_cur = alpha0, b_cur = beta0;
    record(a_cur, b_cur);

    for (std::size_t m = 0; m < M; ++m) {
        const double md = static_cast<double>(m);
        const double s_up = p.g * std::sqrt(md + 1.0);
        const double s_dn = (m == 0) ? 0.0 : p.g * std::sqrt(md);
        double b_next = ((E - p.omega * md + p.lambda) * a_cur - s_dn * b_prev) / s_up;
        double a_next = ((E - p.omega * md - p.lambda) * b_cur - s_dn * a_prev) / s_up;

        const double mag = std::max(std::abs(a_next), std::abs(b_next));
        if (mag > detail::kRescaleHi || (mag > 0.0 && mag < detail::kRescaleLo)) {
            a_next /= mag;
            b_next /= mag;
            a_cur /= mag;
            b_cur /= mag;
            log_factor += std::log(mag);
        }
        a_prev = a_cur;
        b_prev = b_cur;
        a_cur = a_next;
        b_cur = b_next;
        record(a_cur, b_cur);
    }
    return t;
}

// Largest per-step residual of the two defining equations over the trail,
// each normalized by the magnitude of its participating terms. A valid trail
// stays many orders below 1e-10.
inline double trail_residual(const CoeffTrail& t) {
    const ModelParams& p = t.params;
    const double E = t.energy;
    double worst = 0.0;
    for (std::size_t m = 0; m + 1 < t.length(); ++m) {
        const double md = static_cast<double>(m);
        const double base = t.logscale[m];
        auto in_frame = [&](std::size_t j, double v) {
            return v * std::exp(t.logscale[j] - base);
        };
        const double am = t.alphas[m], bm = t.betas[m];
        const double an = in_frame(m + 1, t.alphas[m + 1]);
        const double bn = in_frame(m + 1, t.betas[m + 1]);
        const double ap = m == 0 ? 0.0 : in_frame(m - 1, t.alphas[m - 1]);
        const double bp = m == 0 ? 0.0 : in_frame(m - 1, t.betas[m - 1]);
        const double s_up = p.g * std::sqrt(md + 1.0);
        const double s_dn = m == 0 ? 0.0 : p.g * std::sqrt(md);

        const std::array<double, 3> ta{(E - p.omega * md + p.lambda) * am, -s_up * bn, -s_dn * bp};
        const std::array<double, 3> tb{(E - p.omega * md - p.lambda) * bm, -s_up * an, -s_dn * ap};
        for (const auto& terms : {ta, tb}) {
            double r = 0.0, scale = 0.0;
            for (double v : terms) {
                r += v;
                scale = std::max(scale, std::abs(v));
            }
            if (scale > 0.0) worst = std::max(worst, std::abs(r) / scale);
        }
    }
    return worst;
}

namespace detail {

// One backward-recursion solution: levels m+1 ("hi") and m ("lo") of the
// working window, in an arbitrary common scale.
struct BackPair {
    double a_hi, b_hi;
    double a_lo, b_lo;

    double norm() const {
        return std::sqrt(a_hi * a_hi + b_hi * b_hi + a_lo * a_lo + b_lo * b_lo);
    }
    void scale(double f) {
        a_hi *= f;
        b_hi *= f;
        a_lo *= f;
        b_lo *= f;
    }
};

// Step the window from (m+1, m) to (m, m-1) using the level-m equations.
inline BackPair back_step(const ModelParams& p, double E, std::size_t m, const BackPair& v) {
    const double md = static_cast<double>(m);
    const double s_up = p.g * std::sqrt(md + 1.0);
    const double s_dn = p.g * std::sqrt(md);   // m >= 1 here
    BackPair out;
    out.a_hi = v.a_lo;
    out.b_hi = v.b_lo;
    out.b_lo = ((E - p.omega * md + p.lambda) * v.a_lo - s_up * v.b_hi) / s_dn;
    out.a_lo = ((E - p.omega * md - p.lambda) * v.b_lo - s_up * v.a_hi) / s_dn;
    return out;
}

}  // namespace detail

inline std::size_t miller_default_depth(const ModelParams& p, double E) {
    const double by_energy = 4.0 * std::abs(E) / p.omega;
    return std::max<std::size_t>(200, static_cast<std::size_t>(std::ceil(by_energy)));
}

// Scaled boundary determinant of the backward (Miller) recursion. The
// recurrence never mixes the two parity sectors (alpha on even Fock levels
// pairs with beta on odd ones and vice versa), so the backward-dominant
// subspace is spanned by one minimal solution per sector; the two tail seeds
// excite alpha_M and beta_M, one sector each. Applying the two m = 0
// equations to the pair gives a 2x2 boundary matrix whose determinant,
// scaled by the norms of the two boundary functionals, is a dimensionless
// defect in [0, 1] vanishing exactly at the eigenvalues of either parity.
// M = 0 selects the default depth.
inline double miller_defect(const ModelParams& p, double E, std::size_t M = 0) {
    validate(p);
    if (p.epsilon != 0.0)
        throw std::invalid_argument("miller_defect: parity broken (epsilon != 0)");
    if (!(p.g > 0.0))
        throw std::invalid_argument("miller_defect: recurrence undefined at g = 0");
    if (M == 0) M = miller_default_depth(p, E);
    if (p.omega * static_cast<double>(M) <= std::abs(E) + 2.0 * std::abs(p.lambda) + 4.0 * p.g)
        throw std::invalid_argument("miller_defect: tail regime violated (M too small)");

    detail::BackPair v1{1.0, 0.0, 0.0, 0.0};   // alpha_M excited
    detail::BackPair v2{0.0, 1.0, 0.0, 0.0};   // beta_M excited, the other sector
    for (std::size_t m = M - 1; m >= 1; --m) {
        v1 = detail::back_step(p, E, m, v1);
        v2 = detail::back_step(p, E, m, v2);
        const double n1 = v1.norm();
        if (n1 > 0.0) v1.scale(1.0 / n1);
        const double n2 = v2.norm();
        if (n2 > 0.0) v2.scale(1.0 / n2);
    }

    // window is now (m+1, m) = (1, 0); rows are the two m = 0 equations
    auto boundary = [&](const detail::BackPair& v, double& b1, double& b2) {
        detail::BackPair u = v;
        const double n = u.norm();
        if (n > 0.0) u.scale(1.0 / n);
        b1 = (E + p.lambda) * u.a_lo - p.g * u.b_hi;
        b2 = (E - p.lambda) * u.b_lo - p.g * u.a_hi;
    };
    double c00, c10, c01, c11;
    boundary(v1, c00, c10);
    boundary(v2, c01, c11);

    const double det = c00 * c11 - c01 * c10;
    const double s1 = std::hypot(E + p.lambda, p.g);
    const double s2 = std::hypot(E - p.lambda, p.g);
    return std::abs(det) / std::max(s1 * s2, 1e-300);
}

enum class EnergyClass { spectral, non_spectral };

inline const char* to_string(EnergyClass c) {
    return c == EnergyClass::spectral ? "spectral" : "non_spectral";
}

struct ClassifyReport {
    EnergyClass verdict{EnergyClass::non_spectral};
    double defect{0.0};
    double defect_tol{0.0};
    double nearest_energy{0.0};
    double distance{0.0};
    bool defect_criterion{false};     // miller_defect < tol
    bool spectrum_criterion{false};   // within 1e-6 * omega of a converged level
    bool agree{true};
};

// Classifies E through both routes: the Miller defect and the distance to the
// diagonalization spectrum. Spectral requires both; a split decision is
// recorded in the report rather than resolved silently.
inline ClassifyReport classify_energy(const ModelParams& p, double E, double tol = 1e-6) {
    ClassifyReport r;
    r.defect_tol = tol;
    r.defect = miller_defect(p, E);
    r.defect_criterion = r.defect < tol;

    const double span = (E + std::abs(p.lambda) + p.g * p.g / p.omega) / p.omega;
    const std::size_t k = std::max<std::size_t>(
        6, span > 0.0 ? static_cast<std::size_t>(std::ceil(span)) + 4 : 6);
    ConvergedSpectrum cs = converge_spectrum(p, k, 1e-10);
    r.nearest_energy = cs.spectrum.levels.front().energy;
    for (const Level& l : cs.spectrum.levels)
        if (std::abs(E - l.energy) < std::abs(E - r.nearest_energy))
            r.nearest_energy = l.energy;
    r.distance = std::abs(E - r.nearest_energy);
    r.spectrum_criterion = r.distance < 1e-6 * p.omega;

    r.agree = (r.defect_criterion == r.spectrum_criterion);
    r.verdict = (r.defect_criterion && r.spectrum_criterion) ? EnergyClass::spectral
                                                             : EnergyClass::non_spectral;
    return r;
}

}  // namespace qrm
