#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ringform/dynamics.hpp"
#include "ringform/formation.hpp"
#include "ringform/topology.hpp"

namespace ringform::analysis {

/// V = 1/(a+1) sum |eps_i|^(a+1).
double lyapunov(std::span<const double> eps, double a);

/// True iff the nonzero entries contain both signs, or every entry is zero.
/// Entries with |v| <= zero_tol count as zero.
bool mixed_sign_check(std::span<const double> values, double zero_tol = 0.0);

struct KConstant {
    double value = 0.0;
    /// lambda1 * lambda2/n reached 1, a combination no ring can realize;
    /// value then sits on the excluded endpoint 2^(2a/(a+1)).
    bool at_boundary = false;
};

/// K = (a+1)^(2a/(a+1)) lambda1(D^T D) lambda2(E^T E)/n.
/// Throws DomainError outside n >= 3, a in (0,1], lambda1 in (0,1].
KConstant k_constant(std::size_t n, double a, double lambda1_DtD);

/// kappa = (a+1)^(2a/(a+1)) n^((1-a)/(1+a)), the constant in |sigma|^2 <= kappa V^(2a/(a+1)).
double kappa_constant(std::size_t n, double a);

/// Tight C with |x|_1 <= C |x|_(a+1): n^(a/(a+1)).
double norm_equivalence_constant(std::size_t n, double a);

/// -(K_inst/rho) V^(2a/(a+1)) with the instantaneous lambda1(D^2) = min sin^2 theta_i.
/// Throws DegenerateD when some |sin theta_i| < 1e-9 and MixedSignViolated
/// when the nonzero entries of D sigma share one sign.
double decay_rhs(const FormationState& state, const TargetFormation& targets, double a);

/// lambda2(A)/n, the lower bound on x^T A x over mixed-sign unit vectors.
/// Throws PreconditionViolated unless A is symmetric PSD with A 1 = 0 and a
/// simple zero eigenvalue.
double lemma1_bound(const SquareMatrix& a);

struct Lemma1Oracle {
    double sampled_min = 0.0;   // over random mixed-sign unit vectors
    double probe_min = 0.0;     // over the deterministic boundary probes
    double p_probe_min = 0.0;   // probes built from the projections p_i of 1
    double bound = 0.0;         // lambda2/n
    /// Smallest x^T A x over nonnegative unit vectors with a zero entry, i.e.
    /// the infimum actually approached on the boundary of the mixed-sign cone.
    double boundary_infimum = 0.0;
    double overall_min() const { return sampled_min < probe_min ? sampled_min : probe_min; }
};

/// Sampling oracle for the Lemma 1 infimum. Samples only mixed-sign vectors;
/// probes sit a distance 1e-6 inside the cone next to each p_i and next to
/// the minimizing boundary vectors.
Lemma1Oracle lemma1_oracle(const SquareMatrix& a, std::size_t sample_count, std::uint64_t seed);

struct Lemma3Sides {
    double left = 0.0;    // (sum x)^p
    double middle = 0.0;  // sum x^p
    double right = 0.0;   // n^(1-p) (sum x)^p
};
Lemma3Sides lemma3_check(std::span<const double> x, double p);

/// x(0) + (1/k) mu^(-1/k) e^(1-k) Gamma(1/k), mu = (1-k)/c^k.
double lemma2_bound(double k, double c, double x0);
double lemma2_bound(double k, double c);

struct DisplacementCheck {
    double total_displacement = 0.0;  // sum_i |z_i(final) - z_i(0)|
    double eps0_norm = 0.0;           // |eps(0)|_(a+1)
    double ratio = 0.0;               // 0 when eps0_norm is 0
};
DisplacementCheck displacement_check(const TrajectoryLog& log, double a);

struct ProofDiagnostics {
    std::vector<double> theta;
    std::vector<double> delta;    // theta_i - theta_i*
    std::vector<double> w;        // (cos theta - cos theta*)/(theta - theta*), limit -sin theta*
    std::vector<double> d_diag;   // (g_i^perp)^T g_{i-1} = sin theta_i
    std::vector<double> eps;
    /// theta_i and theta_i* on the same side of pi and |sin theta_i| >= 1e-9 for all i.
    bool certified_region = false;
    /// D_ii w_i < 0 for all i (holds inside the certified region).
    bool dw_same_sign = false;
};
ProofDiagnostics proof_diagnostics(const FormationState& state, const TargetFormation& targets);

/// Instantaneous lambda1(D^T D) = min_i sin^2 theta_i.
double lambda1_dtd(const FormationState& state);

struct BoundReport {
    double K = 0.0;
    bool K_at_boundary = false;
    double lambda2_EtE = 0.0;
    double lambda1_DtD = 0.0;
    double kappa = 0.0;
    double C_norm = 0.0;
    double rho_max_observed = 0.0;  // stands in for gamma
    double eta_fit = 0.0;           // 2 C (a+1) gamma / K
    double beta_observed = 0.0;     // max |v|, v_i = g_i^T g_{i-1} - 1
};

/// Constants at a single state.
BoundReport bound_report(const FormationState& state, std::size_t n, double a);
/// Constants along a run: lambda1 is the minimum over the sampled states, gamma
/// and beta the observed maxima.
BoundReport bound_report(const TrajectoryLog& log, double a);

}  // namespace ringform::analysis
