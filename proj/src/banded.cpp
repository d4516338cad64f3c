#include "tfem/banded.hpp"

#include <algorithm>
#include <cmath>

#include "tfem/error.hpp"

namespace tfem {

BandMatrix::BandMatrix(std::size_t n, std::size_t lower, std::size_t upper)
    : n_(n), kl_(lower), ku_(upper), data_(n * (lower + upper + 1), 0.0)
{
}

bool BandMatrix::in_band(std::size_t i, std::size_t j) const noexcept
{
    return i < n_ && j < n_ && j + kl_ >= i && j <= i + ku_;
}

double BandMatrix::operator()(std::size_t i, std::size_t j) const noexcept
{
    if (!in_band(i, j))
        return 0.0;
    return data_[i * (kl_ + ku_ + 1) + (j + kl_ - i)];
}

double& BandMatrix::at(std::size_t i, std::size_t j)
{
    if (!in_band(i, j))
        throw InvalidArgument("BandMatrix: entry (" + std::to_string(i) + "," +
                              std::to_string(j) + ") is outside the band");
    return data_[i * (kl_ + ku_ + 1) + (j + kl_ - i)];
}

Eigen::VectorXd BandMatrix::multiply(const Eigen::VectorXd& x) const
{
    if (static_cast<std::size_t>(x.size()) != n_)
        throw InvalidArgument("BandMatrix::multiply: size mismatch");
    Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (std::size_t j = j0; j <= j1; ++j)
            s += (*this)(i, j) * x[static_cast<Eigen::Index>(j)];
        y[static_cast<Eigen::Index>(i)] = s;
    }
    return y;
}

Eigen::MatrixXd BandMatrix::to_dense() const
{
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        for (std::size_t j = j0; j <= j1; ++j)
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j);
    }
    return d;
}

BandMatrix BandMatrix::transposed() const
{
    BandMatrix t(n_, ku_, kl_);
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        for (std::size_t j = j0; j <= j1; ++j)
            t.at(j, i) = (*this)(i, j);
    }
    return t;
}

BandMatrix& BandMatrix::operator+=(const BandMatrix& other)
{
    if (other.n_ != n_)
        throw InvalidArgument("BandMatrix: size mismatch in +=");
    if (other.kl_ > kl_ || other.ku_ > ku_) {
        BandMatrix wide(n_, std::max(kl_, other.kl_), std::max(ku_, other.ku_));
        wide += *this;
        *this = std::move(wide);
    }
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i >= other.kl_ ? i - other.kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + other.ku_);
        for (std::size_t j = j0; j <= j1; ++j)
            at(i, j) += other(i, j);
    }
    return *this;
}

BandMatrix& BandMatrix::operator*=(double s)
{
    for (double& v : data_)
        v *= s;
    return *this;
}

double BandMatrix::asymmetry() const
{
    double worst = 0.0;
    const std::size_t k = std::max(kl_, ku_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < std::min(n_, i + k + 1); ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    return worst;
}

BandMatrix operator+(BandMatrix a, const BandMatrix& b)
{
    a += b;
    return a;
}

BandMatrix operator*(double s, BandMatrix a)
{
    a *= s;
    return a;
}

BandLU::BandLU(const BandMatrix& a)
    : n_(a.size()), kl_(a.lower()), width_(2 * a.lower() + a.upper() + 1),
      lu_(a.size() * (2 * a.lower() + a.upper() + 1), 0.0), pivot_(a.size(), 0)
{
    const std::size_t ku = a.upper();
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku);
        for (std::size_t j = j0; j <= j1; ++j)
            cell(i, j) = a(i, j);
    }

    const std::size_t reach = kl_ + ku;
    for (std::size_t k = 0; k < n_; ++k) {
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        const std::size_t last_col = std::min(n_ - 1, k + reach);

        std::size_t p = k;
        double best = std::abs(cell(k, k));
        for (std::size_t r = k + 1; r <= last_row; ++r) {
            if (std::abs(cell(r, k)) > best) {
                best = std::abs(cell(r, k));
                p = r;
            }
        }
        if (!(best > 0.0) || !std::isfinite(best))
            throw NumericalFailure("BandLU: singular matrix at pivot " + std::to_string(k));
        pivot_[k] = p;
        if (p != k)
            for (std::size_t c = k; c <= last_col; ++c)
                std::swap(cell(k, c), cell(p, c));

        const double inv = 1.0 / cell(k, k);
        for (std::size_t r = k + 1; r <= last_row; ++r) {
            const double m = cell(r, k) * inv;
            cell(r, k) = m;
            if (m == 0.0)
                continue;
            for (std::size_t c = k + 1; c <= last_col; ++c)
                cell(r, c) -= m * cell(k, c);
        }
    }
}

Eigen::VectorXd BandLU::solve(const Eigen::VectorXd& b) const
{
    if (static_cast<std::size_t>(b.size()) != n_)
        throw InvalidArgument("BandLU::solve: size mismatch");
    Eigen::VectorXd x = b;
    const std::size_t reach = width_ - kl_ - 1;
    for (std::size_t k = 0; k < n_; ++k) {
        const auto ki = static_cast<Eigen::Index>(k);
        if (pivot_[k] != k)
            std::swap(x[ki], x[static_cast<Eigen::Index>(pivot_[k])]);
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        for (std::size_t r = k + 1; r <= last_row; ++r)
            x[static_cast<Eigen::Index>(r)] -= cell(r, k) * x[ki];
    }
    for (std::size_t k = n_; k-- > 0;) {
        const std::size_t last_col = std::min(n_ - 1, k + reach);
        double s = x[static_cast<Eigen::Index>(k)];
        for (std::size_t c = k + 1; c <= last_col; ++c)
            s -= cell(k, c) * x[static_cast<Eigen::Index>(c)];
        x[static_cast<Eigen::Index>(k)] = s / cell(k, k);
    }
    return x;
}

Eigen::MatrixXd BandLU::solve(const Eigen::MatrixXd& b) const
{
    Eigen::MatrixXd x(b.rows(), b.cols());
    for (Eigen::Index c = 0; c < b.cols(); ++c)
        x.col(c) = solve(Eigen::VectorXd(b.col(c)));
    return x;
}

bool is_positive_definite(const BandMatrix& a)
{
    // Banded Cholesky; the factor keeps the lower bandwidth.
    const std::size_t n = a.size();
    const std::size_t k = std::max(a.lower(), a.upper());
    BandMatrix l(n, k, 0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        const std::size_t p0 = j >= k ? j - k : 0;
        for (std::size_t p = p0; p < j; ++p)
            d -= l(j, p) * l(j, p);
        if (!(d > 0.0))
            return false;
        l.at(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i <= std::min(n - 1, j + k); ++i) {
            double s = a(i, j);
            const std::size_t q0 = i >= k ? i - k : 0;
            for (std::size_t p = std::max(p0, q0); p < j; ++p)
                s -= l(i, p) * l(j, p);
            l.at(i, j) = s / l(j, j);
        }
    }
    return true;
}

} // namespace tfem
