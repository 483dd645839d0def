#ifndef KRS_MOMENTMAP_HPP
#define KRS_MOMENTMAP_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace krs {

/// Linear-algebra data of a compatible triple at a single point: symplectic
/// form omega, almost complex structure J, metric g = omega(-, J-), a
/// tangent direction A (anti-J-commuting, omega-symmetric), plus covectors
/// df, dtheta and a vector xi used by the integrand identities.
struct PointFrame {
    int dim = 0;  // 2n
    Eigen::MatrixXd omega;
    Eigen::MatrixXd J;
    Eigen::MatrixXd g;
    Eigen::MatrixXd A;
    Eigen::VectorXd df;
    Eigen::VectorXd dtheta;
    Eigen::VectorXd xi_vec;
    double f_val = 0.0;
    double theta_val = 0.0;
};

/// Deterministic compatible frame: conjugates the standard pair by a random
/// invertible matrix and projects a random endomorphism onto the tangent
/// directions (JA + AJ = 0, omega(A.,.) symmetric).
PointFrame random_compatible_frame(int n, std::uint64_t seed);

/// Max violation of the frame's defining invariants (J^2 = -I, g = omega J
/// symmetric positive definite, tangency of A).
double frame_invariant_residual(const PointFrame& fr);

struct NamedResidual {
    std::string name;
    double residual = 0.0;
};

/// Index-calculus bookkeeping rules relating omega, J, g, their inverses,
/// Hamiltonian vector fields and the direction A; one residual per rule.
std::vector<NamedResidual> check_tensor_rules(const PointFrame& fr);

/// The six pointwise integrand identities behind the moment-map derivative:
/// five algebraic rearrangements of (u (x) alpha, JA) contractions and one
/// finite-difference check of d/dt[g_t^{-1}(dtheta, df)] along the
/// compatible path J_t = J exp(-t JA).
std::vector<NamedResidual> check_pointwise_identities(const PointFrame& fr);

/// S^1-invariant Kaehler structure on S^2 in action coordinates x in (-1,1),
/// area form dx ^ dphi (total area 4 pi). The potential is stored through
/// its smooth part v = u - u0, u0 the round potential, so that u'' =
/// 1/(1-x^2) + v'' stays finite at the poles. theta is the normalized
/// Hamiltonian of the vector field xi_coeff * d/dphi.
struct ReducedKahlerStructure {
    Eigen::VectorXd x;      // Gauss-Legendre nodes
    Eigen::VectorXd w;      // quadrature weights
    Eigen::MatrixXd D;      // spectral differentiation matrix on the nodes
    Eigen::MatrixXd D2;     // second-derivative matrix (direct barycentric form)
    Eigen::VectorXd v;      // u - u0 at the nodes
    double xi_coeff = 0.0;
    Eigen::VectorXd upp;          // u''
    Eigen::VectorXd theta;        // xi_coeff * x + normalization constant
    Eigen::VectorXd theta_prime;  // -2 theta
};

/// Gauss-Legendre nodes and weights on (-1, 1).
void gauss_legendre(int n, Eigen::VectorXd& x, Eigen::VectorXd& w);

/// Barycentric differentiation matrix for the polynomial interpolant.
Eigen::MatrixXd differentiation_matrix(const Eigen::VectorXd& x);

/// Second-derivative matrix in direct barycentric form (more accurate than
/// squaring the first-derivative matrix).
Eigen::MatrixXd second_derivative_matrix(const Eigen::VectorXd& x);

/// Builds the structure from nodal values of v = u - u0; enforces u'' > 0
/// and the normalization int theta e^{-2 theta} omega = 0 (closed form in
/// the additive constant, since theta is affine in x).
ReducedKahlerStructure reduced_structure(int n_nodes, double xi_coeff,
                                         const Eigen::VectorXd& v_values);

/// Weighted inner product (p, q)_xi = 2 pi sum w_k p q e^{-2 theta}.
double weighted_pairing(const ReducedKahlerStructure& S, const Eigen::VectorXd& p,
                        const Eigen::VectorXd& q);

/// Scalar curvature s = -1/2 (1/u'')'' in action coordinates, normalized so
/// the round potential gives s = 1.
Eigen::VectorXd reduced_scalar_curvature(const ReducedKahlerStructure& S);

/// s_{xi,zeta} = (s - 1) + Delta theta' - xi' theta' - theta'_xi -
/// theta'_zeta in reduced coordinates, where theta' = -2 theta. With
/// phi = 1/u'' and the positive-spectrum Laplacian the middle terms read
///   Delta theta'    = -(phi theta'_x)_x
///   -xi' theta'     = +xi_coeff phi theta'_x
/// (xi' acts as the real part of the holomorphic extension of xi; on an
/// invariant function only the J xi = (1/u'') d/dx component survives, and
/// the sign is fixed by requiring s_{xi,0} to be the gradient of the
/// weighted Calabi energy, i.e. by the KE case s_{0,0} = 0 together with
/// constancy of Delta theta' - xi' theta' - theta' on soliton structures).
Eigen::VectorXd modified_scalar_curvature(const ReducedKahlerStructure& S,
                                          double zeta_coeff);

struct DerivativeCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_err = 0.0;
};

/// Verifies -d/dt (4 s_xi(u + t a), f)_xi = Omega_xi(L_{X_f} J, Jdot):
/// lhs by central differences with one Richardson level, rhs by direct
/// quadrature 2 pi int (-2 f'' a'' phi^2) e^{-2 theta} dx.
DerivativeCheck moment_map_derivative_check(const ReducedKahlerStructure& S,
                                            Eigen::VectorXd f, const Eigen::VectorXd& a_dir,
                                            double h);

/// Normalized Futaki-type pairing on the round structure: pairs s_{xi,0}
/// against the unit-norm centered generator (x - xbar)/||x - xbar||_xi and
/// divides by the weighted-volume ratio c(xi) = int e^{-2 theta} omega /
/// int omega. Proportional to the continuum Donaldson-Futaki value of the
/// interval [-1,1] at the matching torus weight.
double futaki_pairing(double xi_df, int n_nodes = 256);

}  // namespace krs

#endif
