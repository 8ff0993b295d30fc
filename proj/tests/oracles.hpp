#pragma once

// Reference computations that share no code path with the library:
// brute-force enumeration over all k^n strings, unscaled long-double matrix
// products, closed-form 2x2 singular values and eigenvalues.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<long double>>;
using Rows = std::vector<std::vector<double>>;

inline Mat to_mat(const Rows& r) {
    Mat m(r.size(), std::vector<long double>(r.size()));
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j) m[i][j] = r[i][j];
    return m;
}

inline Mat mul(const Mat& a, const Mat& b) {
    const std::size_t d = a.size();
    Mat c(d, std::vector<long double>(d, 0.0L));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t l = 0; l < d; ++l)
            for (std::size_t j = 0; j < d; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
}

/// A_{w_{n-1}} ... A_{w_0}, no rescaling.
inline Mat naive_product(const std::string& w, const std::vector<Rows>& mats) {
    const std::size_t d = mats.front().size();
    Mat acc(d, std::vector<long double>(d, 0.0L));
    for (std::size_t i = 0; i < d; ++i) acc[i][i] = 1.0L;
    for (char c : w) acc = mul(to_mat(mats[static_cast<std::size_t>(c - '0')]), acc);
    return acc;
}

/// Largest singular value of a 2x2 matrix in closed form.
inline long double sigma_max_2x2(const Mat& m) {
    // Divide by the largest entry first so s1 * s1 cannot overflow for long products.
    long double scale = 0.0L;
    for (const auto& row : m)
        for (long double v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0.0L) return 0.0L;
    const long double a = m[0][0] / scale, b = m[0][1] / scale, c = m[1][0] / scale, d = m[1][1] / scale;
    const long double s1 = a * a + b * b + c * c + d * d;
    const long double det = a * d - b * c;
    const long double disc = std::sqrt(std::max(0.0L, s1 * s1 - 4.0L * det * det));
    return scale * std::sqrt((s1 + disc) / 2.0L);
}

/// Spectral radius of a 2x2 matrix from its characteristic polynomial.
inline long double rho_2x2(const Mat& m) {
    const std::complex<long double> tr = m[0][0] + m[1][1];
    const std::complex<long double> det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const auto disc = std::sqrt(tr * tr - 4.0L * det);
    return std::max(std::abs((tr + disc) / 2.0L), std::abs((tr - disc) / 2.0L));
}

/// All strings of length n over k symbols, lexicographic, filtered by admissibility.
inline std::vector<std::string> all_words(std::size_t n, const std::vector<std::vector<int>>& trans) {
    const std::size_t k = trans.size();
    std::vector<std::string> out;
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= k;
    for (std::size_t code = 0; code < total; ++code) {
        std::string w(n, '0');
        std::size_t c = code;
        for (std::size_t i = n; i-- > 0;) {
            w[i] = static_cast<char>('0' + c % k);
            c /= k;
        }
        bool ok = true;
        for (std::size_t i = 0; i + 1 < n && ok; ++i) ok = trans[w[i] - '0'][w[i + 1] - '0'] == 1;
        if (ok) out.push_back(w);
    }
    return out;
}

inline std::vector<std::vector<int>> full(std::size_t k) {
    return std::vector<std::vector<int>>(k, std::vector<int>(k, 1));
}

/// Longest subword whose internal and wrap-around transitions are allowed; earliest start on ties.
inline std::string brute_close(const std::string& w, const std::vector<std::vector<int>>& trans) {
    std::string best;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i + 1; j <= w.size(); ++j) {
            bool ok = true;
            for (std::size_t p = i; p + 1 < j && ok; ++p) ok = trans[w[p] - '0'][w[p + 1] - '0'] == 1;
            ok = ok && trans[w[j - 1] - '0'][w[i] - '0'] == 1;
            if (ok && j - i > best.size()) best = w.substr(i, j - i);
        }
    return best;
}

/// (1/n) log sum_w exp(t s(w)) in long double with a plain max shift.
inline long double lse_pressure(const std::vector<long double>& s, long double t, std::size_t n) {
    long double m = -INFINITY;
    for (auto v : s) m = std::max(m, t * v);
    long double acc = 0.0L;
    for (auto v : s) acc += std::exp(t * v - m);
    return (m + std::log(acc)) / static_cast<long double>(n);
}

/// Random 2x2 matrix with entries U[-2, 2] and |det| >= 0.1.
inline Rows random_invertible_2x2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (;;) {
        Rows m{{u(rng), u(rng)}, {u(rng), u(rng)}};
        if (std::abs(m[0][0] * m[1][1] - m[0][1] * m[1][0]) >= 0.1) return m;
    }
}

}  // namespace oracle
