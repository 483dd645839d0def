#ifndef KRS_RATIONAL_HPP
#define KRS_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace krs {

using Rat = boost::multiprecision::cpp_rational;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<std::vector<Rat>>;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

/// Parses "p/q" or "p" into an exact rational.
Rat parse_rational(const std::string& s);

/// Serializes as "p/q" (or "p" when the denominator is 1).
std::string format_rational(const Rat& r);

/// Solves the square system A x = b by fraction-free Gaussian elimination.
/// Returns false if A is singular.
bool solve_linear(RatMat A, RatVec b, RatVec& x);

/// Rank of a rational matrix (rows of equal length).
int rank(RatMat A);

/// Dimension of the affine hull of a point set.
int affine_rank(const std::vector<RatVec>& points);

/// One-dimensional kernel vector of an (n-1) x n matrix of full row rank;
/// returns empty if the kernel is not one-dimensional.
RatVec kernel_direction(const RatMat& A, int n);

}  // namespace krs

#endif
