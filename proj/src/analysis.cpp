#include "ringform/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ringform/controller.hpp"
#include "ringform/errors.hpp"
#include "ringform/kernels.hpp"

namespace ringform::analysis {

namespace {

bool same_side_of_pi(double x, double y) {
    return (x > 0.0 && x < kPi && y > 0.0 && y < kPi) || (x > kPi && x < kTwoPi && y > kPi && y < kTwoPi);
}

void require_ring_n(std::size_t n) {
    if (n < 3) throw DomainError("ring constants need n >= 3");
}

double beta_of(const FormationState& state) {
    const EdgeSet e = edges_of(state.positions);
    const std::size_t n = e.bearings.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = dot(e.bearings[i], e.bearings[(i + n - 1) % n]) - 1.0;
        s += v * v;
    }
    return std::sqrt(s);
}

}  // namespace

double lyapunov(std::span<const double> eps, double a) {
    require_exponent(a);
    double s = 0.0;
    for (double e : eps) s += (a == 1.0) ? e * e : std::pow(std::abs(e), a + 1.0);
    return s / (a + 1.0);
}

bool mixed_sign_check(std::span<const double> values, double zero_tol) {
    bool pos = false, neg = false, nonzero = false;
    for (double v : values) {
        if (std::abs(v) <= zero_tol) continue;
        nonzero = true;
        (v > 0.0 ? pos : neg) = true;
    }
    return !nonzero || (pos && neg);
}

KConstant k_constant(std::size_t n, double a, double lambda1_DtD) {
    require_ring_n(n);
    if (!(a > 0.0 && a <= 1.0)) throw DomainError("k_constant: a must lie in (0, 1]");
    if (!(lambda1_DtD > 0.0 && lambda1_DtD <= 1.0 + 1e-12))
        throw DomainError("k_constant: lambda1(D^T D) must lie in (0, 1], got " + std::to_string(lambda1_DtD));
    const double l1 = std::min(lambda1_DtD, 1.0);
    const double gap = ring_lambda2(n) / static_cast<double>(n);
    const double product = l1 * gap;
    KConstant k;
    k.value = std::pow(a + 1.0, 2.0 * a / (a + 1.0)) * product;
    k.at_boundary = product >= 1.0 - 1e-12;
    return k;
}

double kappa_constant(std::size_t n, double a) {
    require_exponent(a);
    return std::pow(a + 1.0, 2.0 * a / (a + 1.0)) * std::pow(static_cast<double>(n), (1.0 - a) / (1.0 + a));
}

double norm_equivalence_constant(std::size_t n, double a) {
    if (n < 1) throw DomainError("norm_equivalence_constant: n >= 1 required");
    require_exponent(a);
    return std::pow(static_cast<double>(n), a / (a + 1.0));
}

double lambda1_dtd(const FormationState& state) {
    const EdgeSet e = edges_of(state.positions);
    const SquareMatrix d = bearing_diagonal(e.bearings);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.order(); ++i) m = std::min(m, d(i, i) * d(i, i));
    return m;
}

double decay_rhs(const FormationState& state, const TargetFormation& targets, double a) {
    require_exponent(a);
    const std::size_t n = state.size();
    const EdgeSet e = edges_of(state.positions);
    const SquareMatrix d = bearing_diagonal(e.bearings);
    const std::vector<double> eps = angle_errors(e, targets);

    double eps_inf = 0.0;
    for (double x : eps) eps_inf = std::max(eps_inf, std::abs(x));
    if (eps_inf < kernels::kVelocityClampEps) return 0.0;

    std::vector<double> d_sigma(n);
    double l1 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(d(i, i)) < 1e-9)
            throw DegenerateD("sin(theta_" + std::to_string(i + 1) + ") vanishes; decay bound undefined");
        d_sigma[i] = d(i, i) * sigma(eps[i], a);
        l1 = std::min(l1, d(i, i) * d(i, i));
    }
    if (!mixed_sign_check(d_sigma)) throw MixedSignViolated("nonzero entries of D sigma share one sign");

    const double v = lyapunov(eps, a);
    if (v == 0.0) return 0.0;
    double rho = 0.0;
    for (double len : e.lengths) rho += len;
    const double k = k_constant(n, a, l1).value;
    return -(k / rho) * std::pow(v, 2.0 * a / (a + 1.0));
}

double lemma1_bound(const SquareMatrix& a) {
    const std::size_t n = a.order();
    if (n < 2) throw PreconditionViolated("lemma1: order must be at least 2");
    if (!a.is_symmetric(1e-10)) throw PreconditionViolated("lemma1: matrix is not symmetric");
    const double thr = zero_eigenvalue_threshold(a);
    const std::vector<double> ones(n, 1.0);
    for (double r : a * std::span<const double>(ones))
        if (std::abs(r) > thr) throw PreconditionViolated("lemma1: A 1 != 0");
    const std::vector<double> eig = symmetric_eigenvalues(a);
    if (eig.front() < -thr) throw PreconditionViolated("lemma1: matrix is not positive semidefinite");
    if (!(eig[1] > thr)) throw PreconditionViolated("lemma1: zero eigenvalue is not simple");
    return eig[1] / static_cast<double>(n);
}

Lemma1Oracle lemma1_oracle(const SquareMatrix& a, std::size_t sample_count, std::uint64_t seed) {
    Lemma1Oracle out;
    out.bound = lemma1_bound(a);
    const std::size_t n = a.order();
    out.sampled_min = kernels::min_mixed_sign_quadratic_omp(a, sample_count, seed);

    constexpr double kInset = 1e-6;
    auto probe_value = [&](std::vector<double> x, std::size_t zero_at) {
        x[zero_at] = -kInset;
        double nrm = 0.0;
        for (double v : x) nrm += v * v;
        nrm = std::sqrt(nrm);
        for (double& v : x) v /= nrm;
        return a.quadratic_form(x);
    };

    out.p_probe_min = std::numeric_limits<double>::infinity();
    out.boundary_infimum = std::numeric_limits<double>::infinity();
    double best_boundary_probe = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        // p_i: projection of 1 onto the hyperplane x_i = 0
        std::vector<double> p(n, 1.0);
        out.p_probe_min = std::min(out.p_probe_min, probe_value(p, i));

        // lowest Rayleigh quotient with x_i = 0: bottom eigenpair of A minus row/column i
        SquareMatrix sub(n - 1);
        for (std::size_t r = 0, rr = 0; r < n; ++r) {
            if (r == i) continue;
            for (std::size_t c = 0, cc = 0; c < n; ++c) {
                if (c == i) continue;
                sub(rr, cc++) = a(r, c);
            }
            ++rr;
        }
        const SymmetricEigen eig = symmetric_eigen(sub);
        std::vector<double> v = eig.vectors.front();
        double sum = 0.0;
        for (double x : v) sum += x;
        if (sum < 0.0)
            for (double& x : v) x = -x;
        if (std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; })) {
            out.boundary_infimum = std::min(out.boundary_infimum, eig.values.front());
            std::vector<double> x(n, 0.0);
            for (std::size_t r = 0, rr = 0; r < n; ++r)
                if (r != i) x[r] = v[rr++];
            best_boundary_probe = std::min(best_boundary_probe, probe_value(x, i));
        }
    }
    out.probe_min = std::min(out.p_probe_min, best_boundary_probe);
    return out;
}

Lemma3Sides lemma3_check(std::span<const double> x, double p) {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("lemma3: p must lie in (0, 1]");
    if (x.empty()) throw DomainError("lemma3: x must be nonempty");
    double sum = 0.0, sum_pow = 0.0;
    for (double v : x) {
        if (!(v >= 0.0)) throw DomainError("lemma3: entries must be nonnegative");
        sum += v;
        sum_pow += std::pow(v, p);
    }
    Lemma3Sides s;
    s.left = std::pow(sum, p);
    s.middle = sum_pow;
    s.right = std::pow(static_cast<double>(x.size()), 1.0 - p) * s.left;
    return s;
}

double lemma2_bound(double k, double c, double x0) {
    if (!(k > 0.0 && k < 1.0)) throw DomainError("lemma2: k must lie in (0, 1)");
    if (!(x0 > 0.0) || !(c >= x0)) throw DomainError("lemma2: need c >= x(0) > 0");
    const double mu = (1.0 - k) / std::pow(c, k);
    const double bound = x0 + (1.0 / k) * std::pow(mu, -1.0 / k) * std::exp(1.0 - k) * std::tgamma(1.0 / k);
    if (!std::isfinite(bound)) throw DomainError("lemma2: bound overflows double precision");
    return bound;
}

double lemma2_bound(double k, double c) { return lemma2_bound(k, c, c); }

DisplacementCheck displacement_check(const TrajectoryLog& log, double a) {
    if (log.states.empty() || log.samples.empty()) throw DomainError("displacement_check needs a nonempty log");
    const auto& z0 = log.states.front().positions;
    const auto& z1 = log.states.back().positions;
    DisplacementCheck out;
    for (std::size_t i = 0; i < z0.size(); ++i) out.total_displacement += norm(z1[i] - z0[i]);
    double s = 0.0;
    for (double e : log.samples.front().eps) s += std::pow(std::abs(e), a + 1.0);
    out.eps0_norm = std::pow(s, 1.0 / (a + 1.0));
    out.ratio = out.eps0_norm > 0.0 ? out.total_displacement / out.eps0_norm : 0.0;
    return out;
}

ProofDiagnostics proof_diagnostics(const FormationState& state, const TargetFormation& targets) {
    const std::size_t n = state.size();
    const EdgeSet e = edges_of(state.positions);
    ProofDiagnostics p;
    p.theta = subtended_angles(e);
    p.eps = angle_errors(e, targets);
    const SquareMatrix d = bearing_diagonal(e.bearings);
    p.certified_region = true;
    p.dw_same_sign = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double delta = p.theta[i] - targets.angle(i);
        p.delta.push_back(delta);
        p.w.push_back(std::abs(delta) < 1e-9 ? -std::sin(targets.angle(i))
                                             : (std::cos(p.theta[i]) - targets.cosine(i)) / delta);
        p.d_diag.push_back(d(i, i));
        p.certified_region = p.certified_region && same_side_of_pi(p.theta[i], targets.angle(i)) &&
                             std::abs(d(i, i)) >= 1e-9;
        p.dw_same_sign = p.dw_same_sign && d(i, i) * p.w.back() < 0.0;
    }
    return p;
}

BoundReport bound_report(const FormationState& state, std::size_t n, double a) {
    require_ring_n(n);
    BoundReport r;
    r.lambda2_EtE = ring_lambda2(n);
    r.lambda1_DtD = lambda1_dtd(state);
    r.kappa = kappa_constant(n, a);
    r.C_norm = norm_equivalence_constant(n, a);
    for (double l : edges_of(state.positions).lengths) r.rho_max_observed += l;
    r.beta_observed = beta_of(state);
    if (r.lambda1_DtD > 0.0) {
        const KConstant k = k_constant(n, a, r.lambda1_DtD);
        r.K = k.value;
        r.K_at_boundary = k.at_boundary;
        r.eta_fit = 2.0 * r.C_norm * (a + 1.0) * r.rho_max_observed / r.K;
    } else {
        r.eta_fit = std::numeric_limits<double>::infinity();
    }
    return r;
}

BoundReport bound_report(const TrajectoryLog& log, double a) {
    if (log.states.empty()) throw DomainError("bound_report needs a nonempty log");
    const std::size_t n = log.states.front().size();
    BoundReport r = bound_report(log.states.front(), n, a);
    for (std::size_t k = 1; k < log.states.size(); ++k) {
        r.lambda1_DtD = std::min(r.lambda1_DtD, lambda1_dtd(log.states[k]));
        r.beta_observed = std::max(r.beta_observed, beta_of(log.states[k]));
    }
    for (const DiagnosticsSample& s : log.samples) r.rho_max_observed = std::max(r.rho_max_observed, s.rho);
    if (r.lambda1_DtD > 0.0) {
        const KConstant k = k_constant(n, a, r.lambda1_DtD);
        r.K = k.value;
        r.K_at_boundary = k.at_boundary;
        r.eta_fit = 2.0 * r.C_norm * (a + 1.0) * r.rho_max_observed / r.K;
    } else {
        r.K = 0.0;
        r.K_at_boundary = false;
        r.eta_fit = std::numeric_limits<double>::infinity();
    }
    return r;
}

}  // namespace ringform::analysis
