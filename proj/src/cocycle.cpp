#include "subpress/cocycle.hpp"

#include "subpress/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace subpress {

Matrix::Matrix(std::size_t d, std::vector<double> row_major) : d_(d), a_(std::move(row_major)) {
    if (a_.size() != d_ * d_) throw std::invalid_argument("matrix data size does not match dimension");
}

Matrix Matrix::identity(std::size_t d) {
    Matrix m(d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t d = rows.size();
    if (d == 0) throw std::invalid_argument("matrix must have at least one row");
    Matrix m(d);
    for (std::size_t r = 0; r < d; ++r) {
        if (rows[r].size() != d) throw std::invalid_argument("matrix must be square");
        for (std::size_t c = 0; c < d; ++c) {
            if (!std::isfinite(rows[r][c])) throw std::invalid_argument("matrix entries must be finite");
            m(r, c) = rows[r][c];
        }
    }
    return m;
}

std::vector<std::vector<double>> Matrix::rows() const {
    std::vector<std::vector<double>> out(d_, std::vector<double>(d_));
    for (std::size_t r = 0; r < d_; ++r)
        for (std::size_t c = 0; c < d_; ++c) out[r][c] = (*this)(r, c);
    return out;
}

double Matrix::frobenius() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

Matrix Matrix::transpose() const {
    Matrix t(d_);
    for (std::size_t r = 0; r < d_; ++r)
        for (std::size_t c = 0; c < d_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix& Matrix::operator*=(double c) {
    for (double& v : a_) v *= c;
    return *this;
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    const std::size_t d = lhs.d_;
    Matrix out(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t l = 0; l < d; ++l) {
            const double a = lhs.a_[i * d + l];
            for (std::size_t j = 0; j < d; ++j) out.a_[i * d + j] += a * rhs.a_[l * d + j];
        }
    return out;
}

std::vector<double> symmetric_eigenvalues(const Matrix& s, double tol) {
    const std::size_t d = s.dim();
    Matrix a = s;
    auto off_norm = [&] {
        double o = 0.0;
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) o += a(p, q) * a(p, q);
        return std::sqrt(o);
    };
    const double scale = std::max(s.frobenius(), std::numeric_limits<double>::min());
    for (int sweep = 0; sweep < 64 && off_norm() > tol * scale; ++sweep) {
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
                const double c = 1.0 / std::hypot(t, 1.0);
                const double sn = t * c;
                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t r = 0; r < d; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = a(p, r) = c * arp - sn * arq;
                    a(r, q) = a(q, r) = sn * arp + c * arq;
                }
            }
    }
    std::vector<double> eig(d);
    for (std::size_t i = 0; i < d; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

double Matrix::operator_norm() const {
    if (d_ == 1) return std::abs(a_[0]);
    Matrix gram(d_);
    for (std::size_t i = 0; i < d_; ++i)
        for (std::size_t j = i; j < d_; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < d_; ++r) s += (*this)(r, i) * (*this)(r, j);
            gram(i, j) = gram(j, i) = s;
        }
    return std::sqrt(std::max(0.0, symmetric_eigenvalues(gram).back()));
}

double Matrix::determinant() const {
    Matrix lu = *this;
    double det = 1.0;
    for (std::size_t col = 0; col < d_; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d_; ++r)
            if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
        if (lu(pivot, col) == 0.0) return 0.0;
        if (pivot != col) {
            for (std::size_t c = 0; c < d_; ++c) std::swap(lu(pivot, c), lu(col, c));
            det = -det;
        }
        det *= lu(col, col);
        for (std::size_t r = col + 1; r < d_; ++r) {
            const double f = lu(r, col) / lu(col, col);
            for (std::size_t c = col; c < d_; ++c) lu(r, c) -= f * lu(col, c);
        }
    }
    return det;
}

MatrixSet::MatrixSet(std::vector<Matrix> mats) : mats_(std::move(mats)) {
    if (mats_.empty()) throw std::invalid_argument("matrix set must contain at least one matrix");
    if (mats_.size() > kMaxAlphabet) throw std::invalid_argument("at most 36 matrices are supported");
    d_ = mats_.front().dim();
    if (d_ == 0) throw std::invalid_argument("matrix dimension must be >= 1");
    for (std::size_t i = 0; i < mats_.size(); ++i) {
        const Matrix& m = mats_[i];
        if (m.dim() != d_) throw std::invalid_argument("all matrices must share one dimension");
        const double norm = m.operator_norm();
        const double det = m.determinant();
        if (!(std::abs(det) > 1e-12 * std::pow(norm, static_cast<double>(d_))))
            throw std::invalid_argument("matrix " + std::to_string(i) + " is singular or nearly singular");
    }
}

MatrixSet MatrixSet::scaled(double c) const {
    std::vector<Matrix> out = mats_;
    for (Matrix& m : out) m *= c;
    return MatrixSet(std::move(out));
}

ScaledMatrix::ScaledMatrix(Matrix m) : body_(std::move(m)) { renormalize(); }

double ScaledMatrix::logscale() const noexcept {
    return static_cast<double>(exp2_) * std::numbers::ln2;
}

double ScaledMatrix::log_norm() const { return logscale() + std::log(body_.operator_norm()); }

// Keeps the body's operator norm in [2^-1/2, 2^1/2]; scaling by a power of two is exact.
void ScaledMatrix::renormalize() {
    // ||B|| lies in [f / sqrt(d), f]; skip the norm when that interval already rounds to 2^0.
    const double f = body_.frobenius();
    const double d = static_cast<double>(body_.dim());
    if (f < std::numbers::sqrt2 && f * f >= d / 2.0) return;
    const double norm = body_.operator_norm();
    if (norm == 0.0 || !std::isfinite(norm)) return;
    const int e = static_cast<int>(std::lround(std::log2(norm)));
    if (e == 0) return;
    const double factor = std::ldexp(1.0, -e);
    body_ *= factor;
    exp2_ += e;
}

ScaledMatrix operator*(const ScaledMatrix& lhs, const ScaledMatrix& rhs) {
    ScaledMatrix out;
    out.body_ = lhs.body_ * rhs.body_;
    out.exp2_ = lhs.exp2_ + rhs.exp2_;
    out.renormalize();
    return out;
}

void ScaledMatrix::left_multiply(const Matrix& m) {
    body_ = m * body_;
    renormalize();
}

ScaledMatrix product(std::span<const Symbol> w, const MatrixSet& ms) {
    ScaledMatrix acc(Matrix::identity(ms.dim()));
    for (Symbol s : w) {
        if (s >= ms.size()) throw std::invalid_argument("symbol out of range for matrix set");
        acc.left_multiply(ms[s]);
    }
    return acc;
}

double spectral_radius(const ScaledMatrix& m) {
    // estimate_j = log||A^(2^j)|| / 2^j, with the scale carried per unit power.
    Matrix body = m.body();
    double per_unit = m.logscale();
    double power = 1.0;
    double estimate = per_unit + std::log(body.operator_norm());
    double gap = 0.0;
    for (int j = 1; j <= 40; ++j) {
        body = body * body;
        power *= 2.0;
        const double norm = body.operator_norm();
        if (norm == 0.0) return -std::numeric_limits<double>::infinity();
        const int e = static_cast<int>(std::lround(std::log2(norm)));
        body *= std::ldexp(1.0, -e);
        per_unit += static_cast<double>(e) * std::numbers::ln2 / power;
        const double next = per_unit + std::log(std::ldexp(norm, -e)) / power;
        // No early exit: with |lambda_2| close to |lambda_1| (complex pairs, +-lambda)
        // successive estimates can agree long before they are accurate.
        gap = std::abs(next - estimate);
        estimate = next;
    }
    if (gap > 1e-6)
        throw NonConvergence("Gelfand iteration did not converge", estimate, gap);
    return estimate;
}

double spectral_radius_charpoly(const Matrix& m) {
    const std::size_t d = m.dim();
    if (d == 1) return std::log(std::abs(m(0, 0)));
    if (d == 2) {
        const std::complex<double> tr = m(0, 0) + m(1, 1);
        const std::complex<double> det = m.determinant();
        const std::complex<double> disc = std::sqrt(tr * tr - 4.0 * det);
        const double r = std::max(std::abs((tr + disc) / 2.0), std::abs((tr - disc) / 2.0));
        return std::log(r);
    }
    if (d == 3) {
        // x^3 + c2 x^2 + c1 x + c0
        const double tr = m(0, 0) + m(1, 1) + m(2, 2);
        const double minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                              m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
        const double c2 = -tr;
        const double c1 = minors;
        const double c0 = -m.determinant();
        auto poly = [&](std::complex<double> x) { return ((x + c2) * x + c1) * x + c0; };
        const double bound = 1.0 + std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
        std::array<std::complex<double>, 3> roots;
        const std::complex<double> seed(0.4, 0.9);
        for (std::size_t i = 0; i < 3; ++i) roots[i] = bound * std::pow(seed, static_cast<int>(i));
        for (int iter = 0; iter < 500; ++iter) {
            double delta = 0.0;
            for (std::size_t i = 0; i < 3; ++i) {
                std::complex<double> denom = 1.0;
                for (std::size_t j = 0; j < 3; ++j)
                    if (j != i) denom *= roots[i] - roots[j];
                const auto step = poly(roots[i]) / denom;
                roots[i] -= step;
                delta = std::max(delta, std::abs(step));
            }
            if (delta < 1e-15 * bound) break;
        }
        double r = 0.0;
        for (const auto& z : roots) r = std::max(r, std::abs(z));
        return std::log(r);
    }
    throw std::invalid_argument("characteristic polynomial fallback supports d <= 3 only");
}

double log_spectral_radius(const ScaledMatrix& m) {
    // In 2D the quadratic formula is exact up to rounding and much cheaper.
    if (m.dim() <= 2) return m.logscale() + spectral_radius_charpoly(m.body());
    try {
        return spectral_radius(m);
    } catch (const NonConvergence&) {
        if (m.dim() > 3) throw;
        return m.logscale() + spectral_radius_charpoly(m.body());
    }
}

Potential::Potential(AdditivePotential a) : kind_(std::move(a)) {
    const auto& f = std::get<AdditivePotential>(kind_).f;
    if (f.empty() || f.size() > kMaxAlphabet) throw std::invalid_argument("additive potential needs 1..36 values");
    for (double v : f)
        if (!std::isfinite(v)) throw std::invalid_argument("additive potential values must be finite");
}

Potential::Potential(TableWeights t) : kind_(std::move(t)) {
    const auto& table = std::get<TableWeights>(kind_);
    if (table.level == 0) throw std::invalid_argument("table level must be >= 1");
    if (table.k == 0 || table.k > kMaxAlphabet) throw std::invalid_argument("table alphabet must be 1..36");
    for (const auto& [word, weight] : table.weights) {
        const Word w = Word::parse(word);
        if (w.size() != table.level) throw std::invalid_argument("table word '" + word + "' has wrong length");
        for (Symbol s : w.symbols())
            if (s >= table.k) throw std::invalid_argument("table word '" + word + "' uses symbol outside alphabet");
        if (!(weight > 0.0) || !std::isfinite(weight))
            throw std::invalid_argument("table weights must be positive and finite");
    }
}

std::size_t Potential::alphabet_size() const {
    return std::visit(
        [](const auto& p) -> std::size_t {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, MatrixNormPotential>) return p.matrices.size();
            else if constexpr (std::is_same_v<T, AdditivePotential>) return p.f.size();
            else return p.k;
        },
        kind_);
}

const MatrixSet* Potential::matrix_set() const noexcept {
    if (const auto* m = std::get_if<MatrixNormPotential>(&kind_)) return &m->matrices;
    return nullptr;
}

bool Potential::has_cycle_exponent() const noexcept { return !std::holds_alternative<TableWeights>(kind_); }

std::string Potential::kind_name() const {
    switch (kind_.index()) {
        case 0: return "matrix_norm";
        case 1: return "additive";
        default: return "table";
    }
}

namespace {

double table_lookup(const TableWeights& table, std::span<const Symbol> w) {
    if (w.size() != table.level)
        throw std::invalid_argument("table potential is only defined at level " + std::to_string(table.level));
    const auto it = table.weights.find(to_string(w));
    if (it == table.weights.end())
        throw std::invalid_argument("table potential has no weight for word '" + to_string(w) + "'");
    return std::log(it->second);
}

}  // namespace

double log_norm(std::span<const Symbol> w, const Potential& pot) {
    if (const auto* m = std::get_if<MatrixNormPotential>(&pot.kind())) return product(w, m->matrices).log_norm();
    if (const auto* a = std::get_if<AdditivePotential>(&pot.kind())) {
        double s = 0.0;
        for (Symbol x : w) s += a->f.at(x);
        return s;
    }
    return table_lookup(std::get<TableWeights>(pot.kind()), w);
}

double cycle_exponent(std::span<const Symbol> w, const Potential& pot) {
    if (w.empty()) throw std::invalid_argument("cycle exponent of an empty word");
    const double n = static_cast<double>(w.size());
    if (const auto* m = std::get_if<MatrixNormPotential>(&pot.kind()))
        return log_spectral_radius(product(w, m->matrices)) / n;
    if (std::holds_alternative<AdditivePotential>(pot.kind())) return log_norm(w, pot) / n;
    throw std::invalid_argument("table potentials have no periodic-orbit exponent");
}

PotentialCursor::PotentialCursor(const Potential& pot) : pot_(&pot) {
    if (const auto* m = pot.matrix_set()) products_.emplace_back(Matrix::identity(m->dim()));
    sums_.push_back(0.0);
}

void PotentialCursor::push(Symbol s) {
    word_.push_back(s);
    if (const auto* m = std::get_if<MatrixNormPotential>(&pot_->kind())) {
        ScaledMatrix next = products_.back();
        next.left_multiply(m->matrices[s]);
        products_.push_back(std::move(next));
    } else if (const auto* a = std::get_if<AdditivePotential>(&pot_->kind())) {
        sums_.push_back(sums_.back() + a->f[s]);
    }
}

void PotentialCursor::pop() {
    word_.pop_back();
    if (products_.size() > 1) products_.pop_back();
    if (sums_.size() > 1) sums_.pop_back();
}

double PotentialCursor::value() const {
    switch (pot_->kind().index()) {
        case 0: return products_.back().log_norm();
        case 1: return sums_.back();
        default: return table_lookup(std::get<TableWeights>(pot_->kind()), word_);
    }
}

double PotentialCursor::cycle_value() const {
    const double n = static_cast<double>(word_.size());
    switch (pot_->kind().index()) {
        case 0: return log_spectral_radius(products_.back()) / n;
        case 1: return sums_.back() / n;
        default: throw std::invalid_argument("table potentials have no periodic-orbit exponent");
    }
}

}  // namespace subpress
