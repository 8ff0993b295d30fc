#pragma once

// Locally constant matrix cocycles and the submultiplicative potentials they
// generate.
//
// Product order: for a word w = w_0 w_1 ... w_{n-1} the cocycle product is
//     A_w = A_{w_{n-1}} ... A_{w_1} A_{w_0},
// i.e. the last symbol is applied last (leftmost factor). Exponents and the
// maximal exponent do not depend on this convention; witness words do.

#include "subpress/symbolic.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace subpress {

/// Dense real d x d matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t d) : d_(d), a_(d * d, 0.0) {}
    Matrix(std::size_t d, std::vector<double> row_major);
    static Matrix identity(std::size_t d);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    [[nodiscard]] std::size_t dim() const noexcept { return d_; }
    double& operator()(std::size_t r, std::size_t c) { return a_[r * d_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a_[r * d_ + c]; }
    [[nodiscard]] std::span<const double> data() const noexcept { return a_; }
    [[nodiscard]] std::vector<std::vector<double>> rows() const;

    [[nodiscard]] double frobenius() const;
    /// Largest singular value, from the largest eigenvalue of A^T A (cyclic Jacobi).
    [[nodiscard]] double operator_norm() const;
    [[nodiscard]] double determinant() const;
    [[nodiscard]] Matrix transpose() const;

    Matrix& operator*=(double c);
    friend Matrix operator*(const Matrix& lhs, const Matrix& rhs);
    bool operator==(const Matrix&) const = default;

private:
    std::size_t d_ = 0;
    std::vector<double> a_;
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(const Matrix& s, double tol = 1e-12);

/// Generators A_0 .. A_{k-1} of a locally constant GL(d, R) cocycle.
class MatrixSet {
public:
    /// Validates square shape, common dimension and |det| > 1e-12 * ||A||^d.
    explicit MatrixSet(std::vector<Matrix> mats);

    [[nodiscard]] std::size_t dim() const noexcept { return d_; }
    [[nodiscard]] std::size_t size() const noexcept { return mats_.size(); }
    [[nodiscard]] const Matrix& operator[](std::size_t i) const { return mats_[i]; }
    [[nodiscard]] const std::vector<Matrix>& matrices() const noexcept { return mats_; }
    /// Every generator multiplied by c (c != 0).
    [[nodiscard]] MatrixSet scaled(double c) const;

    bool operator==(const MatrixSet&) const = default;

private:
    std::size_t d_ = 0;
    std::vector<Matrix> mats_;
};

/// exp(logscale) * body, with the scale kept as a power of two so rescaling is exact.
class ScaledMatrix {
public:
    ScaledMatrix() = default;
    explicit ScaledMatrix(Matrix m);

    [[nodiscard]] double logscale() const noexcept;
    [[nodiscard]] std::int64_t exponent2() const noexcept { return exp2_; }
    [[nodiscard]] const Matrix& body() const noexcept { return body_; }
    [[nodiscard]] std::size_t dim() const noexcept { return body_.dim(); }
    /// log of the operator 2-norm of the represented matrix.
    [[nodiscard]] double log_norm() const;

    /// Returns lhs * rhs, renormalized.
    friend ScaledMatrix operator*(const ScaledMatrix& lhs, const ScaledMatrix& rhs);
    /// In-place left multiplication: *this = m * (*this).
    void left_multiply(const Matrix& m);

private:
    void renormalize();

    std::int64_t exp2_ = 0;
    Matrix body_;
};

/// Cocycle product A_w for a word; leftmost factor is the last symbol.
[[nodiscard]] ScaledMatrix product(std::span<const Symbol> w, const MatrixSet& ms);
inline ScaledMatrix product(const Word& w, const MatrixSet& ms) { return product(w.symbols(), ms); }

/// log rho of the represented matrix via the Gelfand limit log||A^(2^j)|| / 2^j.
/// Always runs 40 squarings; throws NonConvergence when the last two estimates
/// still differ by more than 1e-6.
[[nodiscard]] double spectral_radius(const ScaledMatrix& m);

/// log rho from the characteristic polynomial (d <= 3); fallback for spectral_radius.
[[nodiscard]] double spectral_radius_charpoly(const Matrix& m);

/// log rho used throughout: closed form for d <= 2, otherwise spectral_radius with
/// the characteristic-polynomial fallback (d = 3) on NonConvergence.
[[nodiscard]] double log_spectral_radius(const ScaledMatrix& m);

struct MatrixNormPotential {
    MatrixSet matrices;
    bool operator==(const MatrixNormPotential&) const = default;
};

/// s(w) = f(w_0) + ... + f(w_{n-1}).
struct AdditivePotential {
    std::vector<double> f;
    bool operator==(const AdditivePotential&) const = default;
};

/// Explicit positive weights on the words of a single level; s(w) = log weight.
struct TableWeights {
    std::size_t level = 1;
    std::size_t k = 1;
    std::map<std::string, double> weights;
    bool operator==(const TableWeights&) const = default;
};

/// The subadditive potential s(w) = log phi_{|w|} on the cylinder of w.
class Potential {
public:
    using Kind = std::variant<MatrixNormPotential, AdditivePotential, TableWeights>;

    Potential(MatrixSet ms) : kind_(MatrixNormPotential{std::move(ms)}) {}  // NOLINT
    Potential(AdditivePotential a);                                          // NOLINT
    Potential(TableWeights t);                                               // NOLINT

    [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t alphabet_size() const;
    [[nodiscard]] const MatrixSet* matrix_set() const noexcept;
    /// True for kinds with a periodic-orbit exponent (matrix norm, additive).
    [[nodiscard]] bool has_cycle_exponent() const noexcept;
    [[nodiscard]] std::string kind_name() const;

    bool operator==(const Potential&) const = default;

private:
    Kind kind_;
};

/// s(w); matrix kind: log of the operator 2-norm of A_w.
[[nodiscard]] double log_norm(std::span<const Symbol> w, const Potential& pot);
inline double log_norm(const Word& w, const Potential& pot) { return log_norm(w.symbols(), pot); }

/// Per-symbol exponent of the periodic orbit through w: (1/|w|) log rho(A_w) for
/// matrices, the cycle mean of f for additive potentials.
[[nodiscard]] double cycle_exponent(std::span<const Symbol> w, const Potential& pot);
inline double cycle_exponent(const Word& w, const Potential& pot) { return cycle_exponent(w.symbols(), pot); }

/// Incremental evaluation of s along a depth-first word traversal.
class PotentialCursor {
public:
    explicit PotentialCursor(const Potential& pot);

    void push(Symbol s);
    void pop();
    [[nodiscard]] std::size_t depth() const noexcept { return word_.size(); }
    [[nodiscard]] std::span<const Symbol> word() const noexcept { return word_; }
    /// s of the current word.
    [[nodiscard]] double value() const;
    /// Per-symbol periodic exponent of the current word (see cycle_exponent).
    [[nodiscard]] double cycle_value() const;

private:
    const Potential* pot_;
    std::vector<Symbol> word_;
    std::vector<ScaledMatrix> products_;
    std::vector<double> sums_;
};

}  // namespace subpress
