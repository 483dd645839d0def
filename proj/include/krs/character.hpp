#ifndef KRS_CHARACTER_HPP
#define KRS_CHARACTER_HPP

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "krs/polytope.hpp"

namespace krs {

/// Weight-multiplicity map of H^0(X, -mK) for a toric Fano X: each lattice
/// point of mP carries multiplicity one.
struct WeightedCharacter {
    int level = 0;
    std::map<std::vector<long long>, long long> weights;
    long long total = 0;
};

WeightedCharacter hilbert_character(const MomentPolytope& P, int m);

/// chi_m(exp eta) = sum_u mult(u) e^{<u,eta>}.
double character_value(const WeightedCharacter& chi, const Eigen::VectorXd& eta);

struct AsymptoticReport {
    std::vector<std::pair<int, double>> ratios;      // (m, h0(m)/m^n)
    double volume = 0.0;
    double fitted_exponent = 0.0;                    // log-log slope of |ratio - vol|
    std::vector<std::pair<int, double>> moment_gaps; // (m, |m^{-n} chi_m(xi/1) - F(xi)| at a probe xi)
};

/// Leading-order consistency of the section counts with the polytope volume
/// and of the scaled character sums with the exponential moments.
AsymptoticReport hrr_asymptotic_check(const MomentPolytope& P, const std::vector<int>& m_list);

/// Weight-map equality at a common level. With normalize_reflection, both
/// maps are first replaced by min(map, map o (u -> -u)) pointwise keys,
/// identifying characters that differ by the lattice involution.
bool characters_equal(const WeightedCharacter& a, const WeightedCharacter& b,
                      bool normalize_reflection = false);

/// Least-squares slope of log|y| against log x, skipping zero gaps.
double loglog_slope(const std::vector<std::pair<int, double>>& gaps);

}  // namespace krs

#endif
