#ifndef KRS_POLYTOPE_HPP
#define KRS_POLYTOPE_HPP

#include <Eigen/Dense>
#include <vector>

#include "krs/rational.hpp"

namespace krs {

struct Facet {
    std::vector<long long> normal;  // primitive integer vector in N
    Rat offset;                     // inequality <u, normal> >= offset
};

/// Exponential moments of a polytope:
///   value    = int_P e^{<v,xi>} dv
///   gradient = int_P v e^{<v,xi>} dv
///   hessian  = int_P v v^T e^{<v,xi>} dv
struct ExpMoments {
    double value = 0.0;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
};

/// A full-dimensional bounded lattice polytope given by an exact H-rep
/// (integer facet normals, rational offsets) with the V-rep computed
/// exactly on construction.
class MomentPolytope {
public:
    /// P = { u : <u, v_i> >= -1 } for primitive fan rays v_i.
    /// Throws std::invalid_argument on duplicate or non-primitive rays,
    /// std::runtime_error if the rays do not positively span (unbounded).
    static MomentPolytope anticanonical(const std::vector<std::vector<long long>>& rays);

    /// General H-rep constructor (used by the JSON loader).
    static MomentPolytope from_facets(int dim, std::vector<Facet> facets);

    int dim() const { return dim_; }
    const std::vector<Facet>& facets() const { return facets_; }
    const std::vector<RatVec>& vertices() const { return vertices_; }

    bool contains(const RatVec& u) const;

    /// mP cap M, sorted lexicographically.
    std::vector<std::vector<long long>> lattice_points(int m) const;

    /// Exact Lebesgue volume via the simplicial decomposition.
    Rat volume() const;

    /// Exact barycenter (int_P v dv) / vol(P).
    RatVec barycenter() const;

    /// F, grad F, hess F of xi |-> int_P e^{<v,xi>} dv, via per-simplex
    /// divided differences of exp over the vertex exponents.
    ExpMoments exp_moments(const Eigen::VectorXd& xi) const;

    /// Simplices of the fan triangulation, as vertex index (n+1)-tuples.
    const std::vector<std::vector<int>>& triangulation() const { return simplices_; }

private:
    MomentPolytope() = default;
    void enumerate_vertices();
    void check_bounded() const;
    void triangulate();

    int dim_ = 0;
    std::vector<Facet> facets_;
    std::vector<RatVec> vertices_;
    std::vector<std::vector<int>> simplices_;
};

/// Divided difference exp[x_0,...,x_m] of the exponential over the given
/// nodes (order irrelevant). Switches to a confluent series when nodes
/// cluster; exact limit 1/m! when all nodes coincide.
double exp_divided_difference(std::vector<double> nodes);

}  // namespace krs

#endif
