#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ringform/geometry.hpp"

namespace ringform {

/// Undirected ring on n >= 3 vertices; neighbours of i are i-1 and i+1 mod n.
class RingGraph {
public:
    explicit RingGraph(std::size_t n);

    std::size_t size() const { return n_; }
    std::size_t next(std::size_t i) const { return (i + 1) % n_; }
    std::size_t prev(std::size_t i) const { return (i + n_ - 1) % n_; }

private:
    std::size_t n_;
};

/// Dense square matrix, row-major.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t order, double fill = 0.0);

    static SquareMatrix identity(std::size_t order);
    static SquareMatrix diagonal(std::span<const double> diag);

    std::size_t order() const { return order_; }
    double& operator()(std::size_t r, std::size_t c) { return a_[r * order_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a_[r * order_ + c]; }
    std::span<const double> data() const { return a_; }

    SquareMatrix transposed() const;
    SquareMatrix operator*(const SquareMatrix& o) const;
    SquareMatrix operator-(const SquareMatrix& o) const;
    std::vector<double> operator*(std::span<const double> x) const;

    double trace() const;
    double frobenius_norm() const;
    double max_asymmetry() const;
    bool is_symmetric(double tol = 1e-10) const { return max_asymmetry() <= tol; }
    double quadratic_form(std::span<const double> x) const;

private:
    std::size_t order_ = 0;
    std::vector<double> a_;
};

/// Edge-by-vertex incidence matrix of the directed ring: row i has +1 at
/// column i and -1 at column i+1 mod n.
SquareMatrix ring_incidence(std::size_t n);

/// diag((g_i^perp)^T g_{i-1}) for the ring whose i-th edge bearing is
/// `edge_bearings[i]` (pointing from agent i to agent i+1).
SquareMatrix bearing_diagonal(std::span<const Bearing> edge_bearings);

/// Ascending eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
/// Throws NotSymmetric when asymmetry exceeds 1e-10.
std::vector<double> symmetric_eigenvalues(const SquareMatrix& a);

struct SymmetricEigen {
    std::vector<double> values;            // ascending
    std::vector<std::vector<double>> vectors;  // vectors[k] pairs with values[k], unit norm
};
/// Eigenvalues and eigenvectors from the same Jacobi iteration.
SymmetricEigen symmetric_eigen(const SquareMatrix& a);

/// Threshold used when counting eigenvalues as zero; grows with the matrix
/// scale once entries exceed O(1).
double zero_eigenvalue_threshold(const SquareMatrix& a);
std::size_t numeric_rank(const SquareMatrix& symmetric);

/// Smallest positive eigenvalue of E^T E for the n-ring: 2 - 2 cos(2 pi / n).
double ring_lambda2(std::size_t n);

/// Solves A x = b for symmetric positive definite A (Cholesky). Throws
/// DomainError when A is not numerically positive definite.
std::vector<double> solve_spd(const SquareMatrix& a, std::span<const double> b);

}  // namespace ringform
