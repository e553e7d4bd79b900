// eigensolve.hpp — real symmetric eigensolvers built from scratch:
// Sturm-sequence bisection for tridiagonal parity blocks, cyclic Jacobi for
// dense matrices, and a truncation-doubling convergence controller.
//
// Only eigenvalues are computed. Bisection delivers certified brackets and
// lets us ask for just the k lowest levels, which is all the spectral checks
// in this library need.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrm/model.hpp"

namespace qrm {

struct Level {
    double energy{0.0};
    std::optional<Parity> parity;   // nullopt for full-space (dense) levels
    std::size_t index{0};           // position within its sector, from 0
};

struct Spectrum {
    std::vector<Level> levels;      // sorted ascending by energy
    Truncation trunc_used;
    std::size_t converged_count{0};
};

// Convergence budget exhausted; carries a human-readable diagnostic.
class BudgetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Number of eigenvalues of the tridiagonal span (d, e2) strictly below x,
// via the signs of the LDL^T pivots. Zero pivots are nudged to -pivmin
// (Barth-Martin-Wilkinson guard), so the count is total in x.
inline std::size_t sturm_count_span(std::span<const double> d,
                                    std::span<const double> e2, double x) {
    double max_e2 = 1.0;
    for (double v : e2) max_e2 = std::max(max_e2, v);
    const double pivmin = std::numeric_limits<double>::min() * max_e2;

    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        q = (i == 0) ? d[0] - x : (d[i] - x) - e2[i - 1] / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

inline void gershgorin_span(std::span<const double> d, std::span<const double> e,
                            double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (std::size_t i = 0; i < d.size(); ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(e[i - 1]);
        if (i + 1 < d.size()) r += std::abs(e[i]);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }
    const double pad = 16.0 * kEps * std::max({1.0, std::abs(lo), std::abs(hi)});
    lo -= pad;
    hi += pad;
}

// k lowest eigenvalues of one unreducible span by bisection on the Sturm count.
inline void bisect_lowest_span(std::span<const double> d, std::span<const double> e,
                               std::span<const double> e2, std::size_t k,
                               double abs_tol, std::vector<double>& out) {
    double lo0, hi0;
    gershgorin_span(d, e, lo0, hi0);
    for (std::size_t j = 0; j < k; ++j) {
        double lo = lo0, hi = hi0;
        while (hi - lo > std::max(abs_tol, 2.0 * kEps * (std::abs(lo) + std::abs(hi)))) {
            const double mid = 0.5 * (lo + hi);
            if (sturm_count_span(d, e2, mid) <= j)
                lo = mid;
            else
                hi = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
}

}  // namespace detail

// Eigenvalue count of `block` strictly below x.
inline std::size_t sturm_count(const TriBlock& block, double x) {
    std::vector<double> e2(block.offdiag.size());
    for (std::size_t i = 0; i < e2.size(); ++i) e2[i] = block.offdiag[i] * block.offdiag[i];
    return detail::sturm_count_span(block.diag, e2, x);
}

// The k lowest eigenvalues of a parity block, each bracketed by bisection to
// interval width < abs_tol. Numerically zero off-diagonals split the block
// into independent sub-blocks first (this handles g = 0 exactly).
inline Spectrum eigs_tridiag(const TriBlock& block, std::size_t k, double abs_tol) {
    const std::size_t n = block.size();
    if (k < 1 || k > n)
        throw std::invalid_argument("eigs_tridiag: k out of range");
    if (!(abs_tol > 0.0))
        throw std::invalid_argument("eigs_tridiag: abs_tol must be > 0");

    std::vector<double> e2(block.offdiag.size());
    std::vector<std::size_t> split{0};   // start of each sub-block
    for (std::size_t i = 0; i < block.offdiag.size(); ++i) {
        e2[i] = block.offdiag[i] * block.offdiag[i];
        if (std::abs(block.offdiag[i]) <=
            detail::kEps * (std::abs(block.diag[i]) + std::abs(block.diag[i + 1]))) {
            e2[i] = 0.0;
            split.push_back(i + 1);
        }
    }
    split.push_back(n);

    std::vector<double> values;
    values.reserve(k * split.size());
    for (std::size_t s = 0; s + 1 < split.size(); ++s) {
        const std::size_t p = split[s], q = split[s + 1];
        const std::size_t len = q - p;
        std::span<const double> d(block.diag.data() + p, len);
        std::span<const double> e(block.offdiag.data() + p, len > 1 ? len - 1 : 0);
        std::span<const double> se2(e2.data() + p, len > 1 ? len - 1 : 0);
        detail::bisect_lowest_span(d, e, se2, std::min(k, len), abs_tol, values);
    }
    std::sort(values.begin(), values.end());
    values.resize(k);

    Spectrum s;
    s.trunc_used = Truncation{n};
    s.converged_count = 0;
    s.levels.reserve(k);
    for (std::size_t j = 0; j < k; ++j)
        s.levels.push_back(Level{values[j], block.parity, j});
    return s;
}

// All eigenvalues of a dense symmetric matrix by cyclic Jacobi sweeps.
// Terminates when the off-diagonal Frobenius norm falls below
// abs_tol * (initial Frobenius norm); throws after the sweep budget.
inline Spectrum eigs_dense(const DenseSym& m, double abs_tol) {
    const std::size_t n = m.dim;
    if (n < 1) throw std::invalid_argument("eigs_dense: empty matrix");
    std::vector<double> a = m.entries;

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * a[p * n + q] * a[p * n + q];
        return std::sqrt(s);
    };
    double fro0 = 0.0;
    for (double v : a) fro0 += v * v;
    fro0 = std::sqrt(fro0);
    const double target = std::max(abs_tol * fro0,
                                   std::numeric_limits<double>::min());

    const int max_sweeps = 40;
    int sweeps = 0;
    if (fro0 > 0.0) {
        const double rot_floor = target / (10.0 * static_cast<double>(n));
        while (off_norm() >= target) {
            if (sweeps++ >= max_sweeps)
                throw std::runtime_error("eigs_dense: Jacobi did not converge after " +
                                         std::to_string(max_sweeps) + " sweeps");
            for (std::size_t p = 0; p < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const double apq = a[p * n + q];
                    if (std::abs(apq) <= rot_floor) continue;
                    const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    const double c = 1.0 / std::sqrt(t * t + 1.0);
                    const double s = t * c;
                    for (std::size_t i = 0; i < n; ++i) {
                        const double aip = a[i * n + p], aiq = a[i * n + q];
                        a[i * n + p] = c * aip - s * aiq;
                        a[i * n + q] = s * aip + c * aiq;
                    }
                    for (std::size_t i = 0; i < n; ++i) {
                        const double api = a[p * n + i], aqi = a[q * n + i];
                        a[p * n + i] = c * api - s * aqi;
                        a[q * n + i] = s * api + c * aqi;
                    }
                }
            }
        }
    }

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a[i * n + i];
    std::sort(values.begin(), values.end());

    Spectrum s;
    s.trunc_used = Truncation{std::max<std::size_t>(2, n / 2)};
    s.converged_count = 0;
    s.levels.reserve(n);
    for (std::size_t j = 0; j < n; ++j)
        s.levels.push_back(Level{values[j], std::nullopt, j});
    return s;
}

struct ConvergenceStep {
    std::size_t n_prev{0};
    std::size_t n_next{0};
    double max_delta{0.0};   // max change of the tracked levels, either parity
};

struct ConvergedSpectrum {
    Spectrum spectrum;               // 2k levels, both parities merged, sorted
    Truncation trunc;                // truncation the final solve used
    std::vector<ConvergenceStep> history;
};

struct ConvergeOptions {
    std::size_t n_start{0};          // 0 means max(32, 4k)
    std::size_t n_cap{16384};
    double bisect_tol{0.0};          // 0 means min(1e-12, 0.01 * rel_tol * omega)
};

// Doubles the truncation until the k lowest levels of each parity move by
// less than rel_tol * omega between consecutive truncations.
inline ConvergedSpectrum converge_spectrum(const ModelParams& p, std::size_t k,
                                           double rel_tol, const ConvergeOptions& opt = {}) {
    validate(p);
    if (p.epsilon != 0.0)
        throw std::invalid_argument("converge_spectrum: parity broken (epsilon != 0)");
    if (k < 1) throw std::invalid_argument("converge_spectrum: k must be >= 1");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("converge_spectrum: rel_tol must be > 0");

    const double bis_tol = opt.bisect_tol > 0.0
                               ? opt.bisect_tol
                               : std::min(1e-12, 0.01 * rel_tol * p.omega);
    auto solve = [&](std::size_t n, Parity parity) {
        return eigs_tridiag(build_parity_block(p, Truncation{n}, parity), k, bis_tol);
    };

    ConvergedSpectrum result;
    std::size_t n = opt.n_start ? opt.n_start : std::max<std::size_t>(32, 4 * k);
    Spectrum plus = solve(n, Parity::plus);
    Spectrum minus = solve(n, Parity::minus);

    while (true) {
        const std::size_t n2 = 2 * n;
        if (n2 > opt.n_cap)
            throw BudgetError("converge_spectrum: truncation cap " +
                              std::to_string(opt.n_cap) + " exceeded at N=" +
                              std::to_string(n) + " (rel_tol=" + std::to_string(rel_tol) + ")");
        Spectrum plus2 = solve(n2, Parity::plus);
        Spectrum minus2 = solve(n2, Parity::minus);

        double delta = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            delta = std::max(delta, std::abs(plus2.levels[j].energy - plus.levels[j].energy));
            delta = std::max(delta, std::abs(minus2.levels[j].energy - minus.levels[j].energy));
        }
        result.history.push_back(ConvergenceStep{n, n2, delta});

        if (delta < rel_tol * p.omega) {
            Spectrum merged;
            merged.trunc_used = Truncation{n2};
            merged.converged_count = 2 * k;
            merged.levels.reserve(2 * k);
            for (const auto& l : plus2.levels) merged.levels.push_back(l);
            for (const auto& l : minus2.levels) merged.levels.push_back(l);
            std::sort(merged.levels.begin(), merged.levels.end(),
                      [](const Level& a, const Level& b) {
                          if (a.energy != b.energy) return a.energy < b.energy;
                          if (a.parity != b.parity)
                              return a.parity == Parity::plus;   // stable tie order
                          return a.index < b.index;
                      });
            result.spectrum = std::move(merged);
            result.trunc = Truncation{n2};
            return result;
        }
        n = n2;
        plus = std::move(plus2);
        minus = std::move(minus2);
    }
}

}  // namespace qrm
