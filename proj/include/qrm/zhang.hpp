// zhang.hpp — the closed-form JC/AJC energy ladders claimed to be the QRM
// spectrum, plus level inversion E -> n and nearest-level queries.
//
// Subspectrum I is the anti-Jaynes-Cummings ladder, subspectrum II the
// Jaynes-Cummings one. The radicand carries the squared detuning term,
//   E = omega*(n + 1/2) +- sqrt((omega/2 +- lambda)^2 + (n+1) g^2),
// which is what elementary diagonalization of the 2x2 blocks gives; at
// lambda = omega/2 the squared and unsquared readings coincide.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qrm/model.hpp"

namespace qrm {

enum class Subspectrum { I, II };         // I = AJC ladder, II = JC ladder
enum class Branch : int { plus = +1, minus = -1 };

inline const char* to_string(Subspectrum s) { return s == Subspectrum::I ? "I" : "II"; }
inline const char* to_string(Branch b) { return b == Branch::plus ? "+" : "-"; }

struct AnalyticLevel {
    Subspectrum sub{Subspectrum::II};
    std::size_t n{0};
    Branch branch{Branch::minus};
    double energy{0.0};
    bool isolated{false};   // the uncoupled |0,v> / |0,^> level, no (n, branch) meaning
};

namespace detail {

inline double zhang_detuning(const ModelParams& p, Subspectrum sub) {
    return sub == Subspectrum::I ? 0.5 * p.omega + p.lambda : 0.5 * p.omega - p.lambda;
}

inline double zhang_radicand(const ModelParams& p, Subspectrum sub, std::size_t n) {
    const double c = zhang_detuning(p, sub);
    return c * c + (static_cast<double>(n) + 1.0) * p.g * p.g;
}

}  // namespace detail

inline double zhang_level(const ModelParams& p, Subspectrum sub, std::size_t n, Branch b) {
    validate(p);
    return p.omega * (static_cast<double>(n) + 0.5) +
           sign_of(b == Branch::plus ? Parity::plus : Parity::minus) *
               std::sqrt(detail::zhang_radicand(p, sub, n));
}

namespace detail {

inline AnalyticLevel make_level(const ModelParams& p, Subspectrum sub, std::size_t n, Branch b) {
    return AnalyticLevel{sub, n, b, zhang_level(p, sub, n, b), false};
}

}  // namespace detail

// All ladder levels with energy <= e_max, both subspectra and branches,
// sorted ascending. The isolated uncoupled levels (-lambda for JC, +lambda
// for AJC) sit outside the ladder formulas and are appended only on request.
inline std::vector<AnalyticLevel> enumerate_zhang(const ModelParams& p, double e_max,
                                                  bool include_isolated = false) {
    validate(p);
    if (!std::isfinite(e_max))
        throw std::invalid_argument("enumerate_zhang: e_max must be finite");

    std::vector<AnalyticLevel> out;
    const double c_max = 0.5 * p.omega + std::abs(p.lambda);
    for (std::size_t n = 0;; ++n) {
        // lower bound on both subspectra's minus branches at this n
        const double floor_n = p.omega * (static_cast<double>(n) + 0.5) -
                               std::sqrt(c_max * c_max + (static_cast<double>(n) + 1.0) * p.g * p.g);
        if (floor_n > e_max) break;
        for (Subspectrum sub : {Subspectrum::I, Subspectrum::II})
            for (Branch b : {Branch::minus, Branch::plus}) {
                AnalyticLevel l = detail::make_level(p, sub, n, b);
                if (l.energy <= e_max) out.push_back(l);
            }
        if (n > 100000)
            throw std::runtime_error("enumerate_zhang: runaway enumeration");
    }
    if (include_isolated) {
        if (-p.lambda <= e_max)
            out.push_back(AnalyticLevel{Subspectrum::II, 0, Branch::minus, -p.lambda, true});
        if (p.lambda <= e_max)
            out.push_back(AnalyticLevel{Subspectrum::I, 0, Branch::plus, p.lambda, true});
    }
    std::sort(out.begin(), out.end(),
              [](const AnalyticLevel& a, const AnalyticLevel& b) { return a.energy < b.energy; });
    return out;
}

// One real root of zhang_level(., n, .) = E, with the branch it belongs to.
struct InvertRoot {
    double n{0.0};
    Branch branch{Branch::minus};   // branch consistent with the root's sign
    bool nonnegative{false};
};

// Both roots of the quadratic obtained by isolating and squaring the radical.
// Each root is tagged with the branch whose sign it actually satisfies, so a
// caller can scan the full (sub, branch) grid and record the reference values
// the admissible-root filter of invert_level discards.
inline std::vector<InvertRoot> invert_level_roots(const ModelParams& p, Subspectrum sub,
                                                  double E) {
    validate(p);
    const double w = p.omega;
    const double c = detail::zhang_detuning(p, sub);
    // (E - w n - w/2)^2 = c^2 + (n+1) g^2, quadratic in n
    const double A = w * w;
    const double B = w * w - 2.0 * E * w - p.g * p.g;
    const double C = E * E - E * w + 0.25 * w * w - c * c - p.g * p.g;
    const double disc = B * B - 4.0 * A * C;
    std::vector<InvertRoot> roots;
    if (disc < 0.0) return roots;
    const double sq = std::sqrt(disc);
    for (double n : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
        const double u = E - w * (n + 0.5);
        roots.push_back(InvertRoot{n, u >= 0.0 ? Branch::plus : Branch::minus, n >= 0.0});
    }
    return roots;
}

// Real n >= 0 with zhang_level(p, sub, n_real, branch) = E, if one exists.
// The squaring step can introduce a root belonging to the opposite branch;
// such roots are filtered by the sign of E - omega*(n + 1/2).
inline std::optional<double> invert_level(const ModelParams& p, Subspectrum sub, Branch b,
                                          double E) {
    std::optional<double> best;
    for (const InvertRoot& r : invert_level_roots(p, sub, E)) {
        if (!r.nonnegative) continue;
        const double u = E - p.omega * (r.n + 0.5);
        const bool consistent =
            (b == Branch::plus) ? u >= 0.0 : u <= 0.0;   // u == 0 fits either branch
        if (!consistent) continue;
        if (!best || r.n < *best) best = r.n;
    }
    return best;
}

struct NearestZhang {
    AnalyticLevel level;
    double distance{0.0};
};

// Closest ladder level to E. Enumerates up to E + 2*omega, widening the
// window if the ladder has not started yet at that energy.
inline NearestZhang nearest_zhang(const ModelParams& p, double E) {
    validate(p);
    double e_max = E + 2.0 * p.omega;
    std::vector<AnalyticLevel> levels = enumerate_zhang(p, e_max);
    while (levels.empty()) {
        e_max += 2.0 * p.omega;
        levels = enumerate_zhang(p, e_max);
    }
    NearestZhang best{levels.front(), std::abs(E - levels.front().energy)};
    for (const AnalyticLevel& l : levels) {
        const double d = std::abs(E - l.energy);
        if (d < best.distance) best = NearestZhang{l, d};
    }
    return best;
}

}  // namespace qrm
