// model.hpp — Quantum Rabi model parameters and truncated Hamiltonian builders.
//
// Basis convention, fixed once for the whole library: Fock levels interleaved
// with spin, |0,v>, |0,^>, |1,v>, |1,^>, ...  with sigma_z|v> = -|v>.
// All builders are pure functions returning plain value types.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qrm {

struct ModelParams {
    double omega{1.0};    // oscillator frequency, sets the energy unit
    double g{0.0};        // oscillator-qubit coupling
    double lambda{0.0};   // qubit level splitting
    double epsilon{0.0};  // asymmetry term (breaks parity when nonzero)
};

inline void validate(const ModelParams& p) {
    if (!std::isfinite(p.omega) || p.omega <= 0.0)
        throw std::invalid_argument("ModelParams: omega must be finite and > 0");
    if (!std::isfinite(p.g) || p.g < 0.0)
        throw std::invalid_argument("ModelParams: g must be finite and >= 0");
    if (!std::isfinite(p.lambda) || !std::isfinite(p.epsilon))
        throw std::invalid_argument("ModelParams: lambda and epsilon must be finite");
}

// Number of Fock levels kept; states 0..n_max-1 survive the truncation.
struct Truncation {
    std::size_t n_max{2};
};

inline void validate(const Truncation& t) {
    if (t.n_max < 2)
        throw std::invalid_argument("Truncation: n_max must be >= 2");
}

enum class Parity : int { plus = +1, minus = -1 };

inline int sign_of(Parity p) { return static_cast<int>(p); }
inline Parity opposite(Parity p) { return p == Parity::plus ? Parity::minus : Parity::plus; }
inline const char* to_string(Parity p) { return p == Parity::plus ? "+1" : "-1"; }

// One parity sector at epsilon = 0, stored as a real symmetric tridiagonal
// matrix:  diag[n] = omega*n + parity*lambda*(-1)^n,  offdiag[n] = g*sqrt(n+1).
struct TriBlock {
    std::vector<double> diag;
    std::vector<double> offdiag;   // size() == diag.size() - 1
    Parity parity{Parity::plus};
    ModelParams params;

    std::size_t size() const { return diag.size(); }
};

struct BasisState {
    int fock;   // oscillator quantum number m >= 0
    int spin;   // -1 down, +1 up
};

// Dense real symmetric matrix in the interleaved Fock(x)spin basis.
struct DenseSym {
    std::size_t dim{0};
    std::vector<double> entries;     // row-major, dim*dim
    std::vector<BasisState> basis;   // basis[i] labels row/column i

    double at(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }
    void set_sym(std::size_t i, std::size_t j, double v) {
        entries[i * dim + j] = v;
        entries[j * dim + i] = v;
    }
};

namespace detail {

inline std::size_t state_index(std::size_t m, int spin) {
    return 2 * m + (spin > 0 ? 1 : 0);
}

// Shared skeleton: diagonal omega*m + lambda*spin, basis labels, zero couplings.
inline DenseSym spin_fock_diagonal(const ModelParams& p, const Truncation& t) {
    validate(p);
    validate(t);
    DenseSym h;
    h.dim = 2 * t.n_max;
    h.entries.assign(h.dim * h.dim, 0.0);
    h.basis.resize(h.dim);
    for (std::size_t m = 0; m < t.n_max; ++m) {
        for (int spin : {-1, +1}) {
            const std::size_t i = state_index(m, spin);
            h.basis[i] = BasisState{static_cast<int>(m), spin};
            h.entries[i * h.dim + i] = p.omega * static_cast<double>(m) + p.lambda * spin;
        }
    }
    return h;
}

}  // namespace detail

// omega a^dag a + g (a + a^dag) sigma_x + lambda sigma_z + epsilon sigma_x.
// sigma_x flips spin, (a + a^dag) moves the Fock index by one, so the coupling
// connects |m,s> and |m+1,-s> with strength g*sqrt(m+1); epsilon connects
// |m,s> and |m,-s>.
inline DenseSym build_full(const ModelParams& p, const Truncation& t) {
    DenseSym h = detail::spin_fock_diagonal(p, t);
    for (std::size_t m = 0; m < t.n_max; ++m) {
        for (int spin : {-1, +1}) {
            const std::size_t i = detail::state_index(m, spin);
            if (p.epsilon != 0.0 && spin < 0)
                h.set_sym(i, detail::state_index(m, +1), p.epsilon);
            if (m + 1 < t.n_max)
                h.set_sym(i, detail::state_index(m + 1, -spin),
                          p.g * std::sqrt(static_cast<double>(m) + 1.0));
        }
    }
    return h;
}

// Parity sector of build_full at epsilon = 0. The sector with parity sign p
// consists of the states |m,s> with (-1)^m * s = p; ordered by m they form a
// tridiagonal chain with the closed-form entries stored in TriBlock.
inline TriBlock build_parity_block(const ModelParams& p, const Truncation& t, Parity parity) {
    validate(p);
    validate(t);
    if (p.epsilon != 0.0)
        throw std::invalid_argument("build_parity_block: parity broken (epsilon != 0)");
    TriBlock b;
    b.parity = parity;
    b.params = p;
    b.diag.resize(t.n_max);
    b.offdiag.resize(t.n_max - 1);
    for (std::size_t n = 0; n < t.n_max; ++n) {
        const double alt = (n % 2 == 0) ? 1.0 : -1.0;
        b.diag[n] = p.omega * static_cast<double>(n) + sign_of(parity) * p.lambda * alt;
        if (n + 1 < t.n_max)
            b.offdiag[n] = p.g * std::sqrt(static_cast<double>(n) + 1.0);
    }
    return b;
}

// Jaynes-Cummings:  omega a^dag a + g (a sigma^+ + a^dag sigma^-) + lambda sigma_z.
// Couples |m+1,v> and |m,^> with g*sqrt(m+1); epsilon is not part of the model.
inline DenseSym build_jc(const ModelParams& p, const Truncation& t) {
    DenseSym h = detail::spin_fock_diagonal(p, t);
    for (std::size_t m = 0; m + 1 < t.n_max; ++m)
        h.set_sym(detail::state_index(m + 1, -1), detail::state_index(m, +1),
                  p.g * std::sqrt(static_cast<double>(m) + 1.0));
    return h;
}

// Anti-Jaynes-Cummings:  omega a^dag a + g (a sigma^- + a^dag sigma^+) + lambda sigma_z.
// Couples |m+1,^> and |m,v> with g*sqrt(m+1).
inline DenseSym build_ajc(const ModelParams& p, const Truncation& t) {
    DenseSym h = detail::spin_fock_diagonal(p, t);
    for (std::size_t m = 0; m + 1 < t.n_max; ++m)
        h.set_sym(detail::state_index(m + 1, +1), detail::state_index(m, -1),
                  p.g * std::sqrt(static_cast<double>(m) + 1.0));
    return h;
}

// Indices of the full-space basis states belonging to one parity sector,
// ordered by Fock level. Used to check that permuting build_full block-
// diagonalizes it into the two TriBlocks.
inline std::vector<std::size_t> parity_sector_indices(const Truncation& t, Parity parity) {
    std::vector<std::size_t> idx;
    idx.reserve(t.n_max);
    for (std::size_t m = 0; m < t.n_max; ++m) {
        const int alt = (m % 2 == 0) ? 1 : -1;
        const int spin = sign_of(parity) * alt;   // (-1)^m * spin = parity
        idx.push_back(detail::state_index(m, spin));
    }
    return idx;
}

}  // namespace qrm
