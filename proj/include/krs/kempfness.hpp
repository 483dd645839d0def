#ifndef KRS_KEMPFNESS_HPP
#define KRS_KEMPFNESS_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "krs/rational.hpp"

namespace krs {

/// A point b in a torus representation: (C^*)^k acts on C^N diagonally with
/// integer weights w_i.
struct TorusRepPoint {
    int k = 0;
    std::vector<std::vector<long long>> weights;
    std::vector<std::complex<double>> point;
};

/// mu(b) = sum_i |b_i|^2 w_i.
Eigen::VectorXd linear_moment_map(const TorusRepPoint& rp);

enum class Stability { polystable, semistable_not_polystable, unstable };

struct StabilityVerdict {
    Stability verdict = Stability::polystable;
    // For polystable points: a zero-moment point in the orbit closure.
    std::vector<std::complex<double>> zero_moment_point;
    // For non-polystable points: integer one-parameter subgroup driving b
    // out of its orbit (all active pairings <= 0, some < 0).
    std::vector<long long> destabilizer;
};

/// Exact combinatorial stability test: 0 in conv(active weights) iff
/// semistable, 0 in its relative interior iff polystable, decided by
/// rational vertex enumeration of {c >= 0, sum c_i w_i = 0, sum c_i = 1}.
StabilityVerdict polystable(const TorusRepPoint& rp);

struct MinimizeResult {
    bool converged = false;
    Eigen::VectorXd v_star;              // minimizer in the span of active weights
    Eigen::VectorXd recession_direction; // along which phi decreases to its infimum
    int iters = 0;
};

/// Newton minimization of phi(v) = 1/2 sum |b_i|^2 e^{2<w_i, v>}, restricted
/// to the span of the active weights; grad phi(v) = mu(e^{iv} b).
MinimizeResult kempf_ness_minimize(const TorusRepPoint& rp, double tol = 1e-10);

struct LemmaBoundReport {
    bool applicable = false;
    bool holds = false;
    double v_star_norm = 0.0;
    double lambda = 0.0;     // sup of ||(2 G(v))^{-1}|| over the sampled ball
    double mu_norm = 0.0;
};

/// Quantitative bound ||v*|| <= lambda ||mu(b)||, with lambda estimated by
/// sampling the weighted Gram matrix G(v) = sum |b_i(v)|^2 w_i w_i^T on
/// ||v|| < delta (restricted to the span of active weights); applicable
/// when lambda ||mu(b)|| < delta.
LemmaBoundReport sze_lemma_bound_check(const TorusRepPoint& rp, double delta);

/// Exact quadratic homogeneity mu(t b) = t^2 mu(b); returns max deviation.
double scaling_expansion_check(const TorusRepPoint& rp, const std::vector<double>& t_list);

}  // namespace krs

#endif
