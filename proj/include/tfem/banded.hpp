#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace tfem {

/// Square matrix with `lower` sub-diagonals and `upper` super-diagonals.
/// Entries outside the band read as zero; writing outside the band throws.
class BandMatrix {
public:
    BandMatrix() = default;
    BandMatrix(std::size_t n, std::size_t lower, std::size_t upper);

    std::size_t size() const noexcept { return n_; }
    std::size_t lower() const noexcept { return kl_; }
    std::size_t upper() const noexcept { return ku_; }

    bool in_band(std::size_t i, std::size_t j) const noexcept;
    double operator()(std::size_t i, std::size_t j) const noexcept;
    double& at(std::size_t i, std::size_t j);
    void add(std::size_t i, std::size_t j, double v) { at(i, j) += v; }

    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd to_dense() const;

    BandMatrix transposed() const;
    BandMatrix& operator+=(const BandMatrix& other);
    BandMatrix& operator*=(double s);

    /// Largest |a_ij - a_ji|.
    double asymmetry() const;

private:
    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;
    std::vector<double> data_; // row-major, width kl + ku + 1
};

BandMatrix operator+(BandMatrix a, const BandMatrix& b);
BandMatrix operator*(double s, BandMatrix a);

/// LU factorization with partial pivoting restricted to the band.
/// Fill-in widens the upper bandwidth of U to lower + upper.
class BandLU {
public:
    explicit BandLU(const BandMatrix& a);

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
    /// Solves column by column.
    Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

    std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_;
    std::size_t kl_;
    std::size_t width_; // stored columns per row: [r - kl, r + kl + ku]
    std::vector<double> lu_;
    std::vector<std::size_t> pivot_;

    double& cell(std::size_t r, std::size_t c) { return lu_[r * width_ + (c + kl_ - r)]; }
    double cell(std::size_t r, std::size_t c) const { return lu_[r * width_ + (c + kl_ - r)]; }
};

/// True when a symmetric band matrix admits a Cholesky factorization.
bool is_positive_definite(const BandMatrix& a);

} // namespace tfem
