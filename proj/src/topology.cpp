#include "ringform/topology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ringform/errors.hpp"

namespace ringform {

namespace {

void require_ring_order(std::size_t n) {
    if (n < 3) throw InvalidOrder("ring needs at least 3 agents, got " + std::to_string(n));
}

}  // namespace

RingGraph::RingGraph(std::size_t n) : n_(n) { require_ring_order(n); }

SquareMatrix::SquareMatrix(std::size_t order, double fill) : order_(order), a_(order * order, fill) {}

SquareMatrix SquareMatrix::identity(std::size_t order) {
    SquareMatrix m(order);
    for (std::size_t i = 0; i < order; ++i) m(i, i) = 1.0;
    return m;
}

SquareMatrix SquareMatrix::diagonal(std::span<const double> diag) {
    SquareMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

SquareMatrix SquareMatrix::transposed() const {
    SquareMatrix t(order_);
    for (std::size_t r = 0; r < order_; ++r)
        for (std::size_t c = 0; c < order_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& o) const {
    if (o.order_ != order_) throw DomainError("matrix order mismatch");
    SquareMatrix p(order_);
    for (std::size_t r = 0; r < order_; ++r)
        for (std::size_t k = 0; k < order_; ++k) {
            const double v = (*this)(r, k);
            if (v == 0.0) continue;
            for (std::size_t c = 0; c < order_; ++c) p(r, c) += v * o(k, c);
        }
    return p;
}

SquareMatrix SquareMatrix::operator-(const SquareMatrix& o) const {
    if (o.order_ != order_) throw DomainError("matrix order mismatch");
    SquareMatrix d(*this);
    for (std::size_t i = 0; i < a_.size(); ++i) d.a_[i] -= o.a_[i];
    return d;
}

std::vector<double> SquareMatrix::operator*(std::span<const double> x) const {
    if (x.size() != order_) throw DomainError("vector length mismatch");
    std::vector<double> y(order_, 0.0);
    for (std::size_t r = 0; r < order_; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < order_; ++c) s += (*this)(r, c) * x[c];
        y[r] = s;
    }
    return y;
}

double SquareMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < order_; ++i) t += (*this)(i, i);
    return t;
}

double SquareMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double SquareMatrix::max_asymmetry() const {
    double m = 0.0;
    for (std::size_t r = 0; r < order_; ++r)
        for (std::size_t c = r + 1; c < order_; ++c) m = std::max(m, std::abs((*this)(r, c) - (*this)(c, r)));
    return m;
}

double SquareMatrix::quadratic_form(std::span<const double> x) const {
    const std::vector<double> ax = (*this) * x;
    double s = 0.0;
    for (std::size_t i = 0; i < order_; ++i) s += x[i] * ax[i];
    return s;
}

SquareMatrix ring_incidence(std::size_t n) {
    require_ring_order(n);
    SquareMatrix e(n);
    for (std::size_t i = 0; i < n; ++i) {
        e(i, i) = 1.0;
        e(i, (i + 1) % n) = -1.0;
    }
    return e;
}

SquareMatrix bearing_diagonal(std::span<const Bearing> edge_bearings) {
    const std::size_t n = edge_bearings.size();
    require_ring_order(n);
    SquareMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d(i, i) = dot(perp(edge_bearings[i]), edge_bearings[(i + n - 1) % n]);
    }
    return d;
}

SymmetricEigen symmetric_eigen(const SquareMatrix& input) {
    if (!input.is_symmetric(1e-10)) {
        throw NotSymmetric("matrix asymmetry " + std::to_string(input.max_asymmetry()) + " exceeds 1e-10");
    }
    const std::size_t n = input.order();
    SquareMatrix a = input;
    SquareMatrix v = SquareMatrix::identity(n);
    // symmetrize exactly so rotations stay consistent
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r + 1; c < n; ++c) a(r, c) = a(c, r) = 0.5 * (a(r, c) + a(c, r));

    const double scale = std::max(1.0, input.frobenius_norm());
    const double tol = 1e-12 * scale;
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = r + 1; c < n; ++c) s += 2.0 * a(r, c) * a(r, c);
        return std::sqrt(s);
    };

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm() >= tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // rotation angle chosen so the (p,q) entry vanishes; take the
                // smaller root for stability
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return a(l, l) < a(r, r); });
    SymmetricEigen out;
    for (std::size_t k : order) {
        out.values.push_back(a(k, k));
        std::vector<double> col(n);
        for (std::size_t r = 0; r < n; ++r) col[r] = v(r, k);
        out.vectors.push_back(std::move(col));
    }
    return out;
}

std::vector<double> symmetric_eigenvalues(const SquareMatrix& a) { return symmetric_eigen(a).values; }

double zero_eigenvalue_threshold(const SquareMatrix& a) {
    double max_entry = 0.0;
    for (double v : a.data()) max_entry = std::max(max_entry, std::abs(v));
    return 1e-9 * std::max(1.0, max_entry);
}

std::size_t numeric_rank(const SquareMatrix& symmetric) {
    const double thr = zero_eigenvalue_threshold(symmetric);
    std::size_t rank = 0;
    for (double l : symmetric_eigenvalues(symmetric))
        if (std::abs(l) >= thr) ++rank;
    return rank;
}

double ring_lambda2(std::size_t n) {
    require_ring_order(n);
    return 2.0 - 2.0 * std::cos(kTwoPi / static_cast<double>(n));
}

std::vector<double> solve_spd(const SquareMatrix& a, std::span<const double> b) {
    const std::size_t n = a.order();
    if (b.size() != n) throw DomainError("vector length mismatch");
    SquareMatrix l(n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) throw DomainError("matrix is not positive definite");
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    std::vector<double> y(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
        y[i] /= l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) y[i] -= l(k, i) * y[k];
        y[i] /= l(i, i);
    }
    return y;
}

}  // namespace ringform
