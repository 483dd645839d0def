#ifndef KRS_SOLITON_HPP
#define KRS_SOLITON_HPP

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "krs/polytope.hpp"

namespace krs {

struct ConvergenceRow {
    int m = 0;
    double df_disc = 0.0;
    double df_cont = 0.0;
    double gap = 0.0;
};

struct SolitonReport {
    Eigen::VectorXd xi_star;
    double residual = 0.0;   // sup over lattice basis lambda of |df_continuum|
    int newton_iters = 0;
    std::vector<ConvergenceRow> convergence_table;
};

/// Central-fiber weight data: level m -> list of (weight in M x Z, mult).
struct EquivariantWeightTable {
    std::map<int, std::vector<std::pair<std::vector<long long>, long long>>> levels;
};

/// -w(m;lambda)/(m h0(m)) with w = sum_{u in mP cap M} e^{<u,xi>/m} <u,lambda>.
double df_discrete(const MomentPolytope& P, const Eigen::VectorXd& xi,
                   const std::vector<long long>& lambda, int m);

/// Continuum limit -(int_P <v,lambda> e^{<v,xi>} dv) / vol(P).
double df_continuum(const MomentPolytope& P, const Eigen::VectorXd& xi,
                    const Eigen::VectorXd& lambda);

/// Damped Newton minimization of F(xi) = int_P e^{<v,xi>} dv, started at 0,
/// stopping at ||grad F||/vol <= tol. Requires the origin interior to P.
SolitonReport k_optimal_vector(const MomentPolytope& P, double tol = 1e-10);

/// Exact barycenter criterion: KE iff barycenter(P) = 0.
bool is_kahler_einstein(const MomentPolytope& P);

/// Product test configuration twisted by mu; equals df_continuum(P, xi, mu).
double df_product_configuration(const MomentPolytope& P, const Eigen::VectorXd& xi,
                                const std::vector<long long>& mu);

struct WeightTableEstimate {
    double value = 0.0;
    double error_bar = 0.0;
    std::vector<std::pair<int, double>> per_level;  // (m, df at level m)
};

/// Per-level -w(m)/(m h0(m)) using the grading component (last coordinate)
/// as the pairing, Richardson-extrapolated in 1/m.
WeightTableEstimate df_from_weight_table(const EquivariantWeightTable& table,
                                         const Eigen::VectorXd& xi_bar, int m_max);

struct OptimalityCheck {
    int rank = 0;
    std::vector<std::vector<long long>> relations;
    bool heuristic = true;
};

/// Integer relations sum c_i xi_i = 0 with |c| <= 1e6, found by lattice
/// reduction on [I | S*xi]; rank of the minimal rational subspace holding xi.
OptimalityCheck k_optimality_check(const Eigen::VectorXd& xi, double tol);

}  // namespace krs

#endif
