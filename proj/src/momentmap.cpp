#include "krs/momentmap.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace krs {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    MatrixXd M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M(i, j) = U(rng);
    return M;
}

// g^{ij} g_{kl} S^k_i T^l_j.
double pair_gg(const MatrixXd& S, const MatrixXd& T, const MatrixXd& g,
               const MatrixXd& ginv) {
    return (S.transpose() * g * T * ginv).trace();
}

double norm_inf(const MatrixXd& M) { return M.cwiseAbs().maxCoeff(); }

// Normalization constant of theta = xi_coeff x + c on the grid:
// int (xi_coeff x + c) e^{-2(xi_coeff x + c)} dx = 0 is linear in c after
// factoring e^{-2c}.
double theta_constant(const VectorXd& x, const VectorXd& w, double xi_coeff) {
    double A = 0.0, B = 0.0;
    for (int k = 0; k < x.size(); ++k) {
        const double e = std::exp(-2.0 * xi_coeff * x(k));
        A += w(k) * xi_coeff * x(k) * e;
        B += w(k) * e;
    }
    return -A / B;
}

// s - 1 and the theta' terms, evaluated through psi = (1 - x^2) - phi so
// that the round contribution is exact: s = -phi''/2 = 1 + psi''/2 and
// phi' = -2x - psi'. theta is affine, so theta'_x = -2 xi_coeff exactly.
VectorXd modified_curvature_from(const ReducedKahlerStructure& S, const VectorXd& upp,
                                 double zeta_coeff) {
    const VectorXd phi = upp.cwiseInverse();
    const VectorXd psi = (1.0 - S.x.array().square()).matrix() - phi;
    const VectorXd s_minus_1 = 0.5 * (S.D2 * psi);
    const VectorXd phi_x = -2.0 * S.x - S.D * psi;
    const double tpx = -2.0 * S.xi_coeff;
    VectorXd theta_zeta = zeta_coeff * S.x;
    theta_zeta.array() += theta_constant(S.x, S.w, zeta_coeff);
    return s_minus_1.array() - tpx * phi_x.array()
           + S.xi_coeff * tpx * phi.array() - S.theta_prime.array()
           + 2.0 * theta_zeta.array();
}

}  // namespace

PointFrame random_compatible_frame(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const int d = 2 * n;
    std::mt19937_64 rng(seed);

    MatrixXd W0 = MatrixXd::Zero(d, d), J0 = MatrixXd::Zero(d, d);
    W0.topRightCorner(n, n) = MatrixXd::Identity(n, n);
    W0.bottomLeftCorner(n, n) = -MatrixXd::Identity(n, n);
    J0.topRightCorner(n, n) = -MatrixXd::Identity(n, n);
    J0.bottomLeftCorner(n, n) = MatrixXd::Identity(n, n);

    // Well-conditioned random conjugation: orthogonal factors around a
    // moderate diagonal keep the residual tolerances meaningful.
    Eigen::HouseholderQR<MatrixXd> qr1(random_matrix(d, d, rng));
    Eigen::HouseholderQR<MatrixXd> qr2(random_matrix(d, d, rng));
    std::uniform_real_distribution<double> Usv(0.7, 1.5);
    VectorXd sv(d);
    for (int i = 0; i < d; ++i) sv(i) = Usv(rng);
    MatrixXd Q = MatrixXd(qr1.householderQ()) * sv.asDiagonal() *
                 MatrixXd(qr2.householderQ());

    PointFrame fr;
    fr.dim = d;
    fr.omega = Q.transpose() * W0 * Q;
    fr.J = Q.inverse() * J0 * Q;
    fr.g = fr.omega * fr.J;  // = Q^T Q, positive definite by construction

    MatrixXd B = random_matrix(d, d, rng);
    MatrixXd A1 = 0.5 * (B + fr.J * B * fr.J);
    MatrixXd ginv = fr.g.inverse();
    fr.A = 0.5 * (A1 + ginv * A1.transpose() * fr.g);

    fr.df = random_matrix(d, 1, rng);
    fr.xi_vec = random_matrix(d, 1, rng);
    // dtheta is the Hamiltonian covector of xi: xi = -omega^{-T} dtheta.
    fr.dtheta = -fr.omega.transpose() * fr.xi_vec;
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    fr.f_val = U(rng);
    fr.theta_val = U(rng);
    return fr;
}

double frame_invariant_residual(const PointFrame& fr) {
    const int d = fr.dim;
    double r = 0.0;
    r = std::max(r, norm_inf(fr.J * fr.J + MatrixXd::Identity(d, d)));
    r = std::max(r, norm_inf(fr.omega + fr.omega.transpose()));
    r = std::max(r, norm_inf(fr.g - fr.omega * fr.J));
    r = std::max(r, norm_inf(fr.g - fr.g.transpose()));
    r = std::max(r, norm_inf(fr.J * fr.A + fr.A * fr.J));
    MatrixXd M = fr.A.transpose() * fr.omega;
    r = std::max(r, norm_inf(M - M.transpose()));
    r = std::max(r, (fr.dtheta + fr.omega.transpose() * fr.xi_vec).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (fr.g + fr.g.transpose()));
    r = std::max(r, std::max(0.0, -es.eigenvalues().minCoeff()));
    return r;
}

std::vector<NamedResidual> check_tensor_rules(const PointFrame& fr) {
    const int d = fr.dim;
    const MatrixXd& W = fr.omega;
    const MatrixXd& J = fr.J;
    const MatrixXd& g = fr.g;
    const MatrixXd& A = fr.A;
    const MatrixXd I = MatrixXd::Identity(d, d);
    const MatrixXd Om = (-W).inverse();          // omega^{kj}: Om W^T = I
    const MatrixXd ginv = g.inverse();
    const VectorXd Xf = -Om * fr.df;             // Hamiltonian field of f
    const MatrixXd JA = J * A;

    std::vector<NamedResidual> out;
    auto add = [&](const char* name, double r) { out.push_back({name, r}); };

    add("antisymmetry-omega", norm_inf(W + W.transpose()));
    add("J-squared", norm_inf(J * J + I));
    add("symmetry-g", norm_inf(g - g.transpose()));
    add("omega-from-gJ", std::max(norm_inf(W - J.transpose() * g), norm_inf(W + g * J)));
    add("g-from-omegaJ", std::max(norm_inf(g - W * J), norm_inf(g + J.transpose() * W)));
    add("inverse-omega-from-gJ",
        std::max({norm_inf(Om + J * ginv), norm_inf(Om - ginv * J.transpose()),
                  norm_inf(Om + Om.transpose())}));
    add("inverse-g-from-omegaJ",
        std::max({norm_inf(ginv - J * Om), norm_inf(ginv + Om * J.transpose()),
                  norm_inf(ginv - ginv.transpose())}));
    add("omega-inverse-pairing",
        std::max(norm_inf(Om * W.transpose() - I), norm_inf(Om.transpose() * W - I)));
    add("g-inverse-pairing", norm_inf(ginv * g - I));
    add("hamiltonian-covector",
        std::max({norm_inf(fr.df + W.transpose() * Xf),
                  norm_inf(fr.df - J.transpose() * g * Xf), norm_inf(fr.df + g * J * Xf)}));
    add("hamiltonian-vector",
        std::max({norm_inf(Xf + Om * fr.df), norm_inf(Xf - J * ginv * fr.df),
                  norm_inf(Xf + ginv * J.transpose() * fr.df)}));
    MatrixXd AW = A.transpose() * W;
    add("direction-tangency",
        std::max(norm_inf(J * A + A * J), norm_inf(AW - AW.transpose())));
    add("metric-conjugation", norm_inf(ginv * JA.transpose() * g - JA));
    return out;
}

std::vector<NamedResidual> check_pointwise_identities(const PointFrame& fr) {
    const MatrixXd& W = fr.omega;
    const MatrixXd& J = fr.J;
    const MatrixXd& g = fr.g;
    const MatrixXd& A = fr.A;
    const MatrixXd Om = (-W).inverse();
    const MatrixXd ginv = g.inverse();
    const VectorXd Xf = -Om * fr.df;
    const MatrixXd JA = J * A;
    const VectorXd& dth = fr.dtheta;
    const VectorXd& df = fr.df;
    const VectorXd& xi = fr.xi_vec;

    // (u (x) alpha)^k_i = u^k alpha_i.
    auto ten = [](const VectorXd& u, const VectorXd& alpha) -> MatrixXd {
        return u * alpha.transpose();
    };
    auto pr = [&](const MatrixXd& S) { return pair_gg(S, JA, g, ginv); };

    std::vector<NamedResidual> out;
    auto add = [&](const char* name, double lhs, double rhs) {
        out.push_back({name, std::abs(lhs - rhs)});
    };

    add("jdtheta-xf-swap", pr(ten(Xf, J.transpose() * dth)), -pr(ten(J * Xf, dth)));
    add("jdf-xi-exchange", pr(ten(xi, J.transpose() * df)), -pr(ten(J * Xf, dth)));
    add("df-jxi-swap", -pr(ten(J * xi, df)), pr(ten(xi, J.transpose() * df)));
    add("jdtheta-xi-contraction", pr(ten(xi, J.transpose() * dth)),
        -dth.dot(A * xi));
    add("dtheta-jxi-swap", -pr(ten(J * xi, dth)), pr(ten(xi, J.transpose() * dth)));

    // d/dt [g_t^{-1}(dtheta, df)] along J_t = J exp(-t J A), against the
    // closed-form -dtheta^T Om A^T df.
    auto scal = [&](double t) {
        MatrixXd Jt = J * (-t * JA).exp();
        MatrixXd gt = W * Jt;
        return dth.dot(gt.inverse() * df);
    };
    const double h = 1e-5;
    auto central = [&](double step) { return (scal(step) - scal(-step)) / (2.0 * step); };
    const double deriv = (4.0 * central(h / 2) - central(h)) / 3.0;
    add("metric-variation", deriv, -dth.dot(Om * A.transpose() * df));
    return out;
}

void gauss_legendre(int n, VectorXd& x, VectorXd& w) {
    if (n < 2) throw std::invalid_argument("need at least 2 nodes");
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / pp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x(n - 1 - i) = t;
        w(n - 1 - i) = 2.0 / ((1.0 - t * t) * pp * pp);
    }
}

Eigen::MatrixXd differentiation_matrix(const VectorXd& x) {
    const int n = static_cast<int>(x.size());
    // Stable barycentric weights for Gauss nodes: lambda_i ~ (-1)^i
    // sqrt((1 - x_i^2) w_i); any common scale cancels in the ratios.
    VectorXd gw;
    {
        VectorXd gx;
        gauss_legendre(n, gx, gw);
        if ((gx - x).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("differentiation matrix expects Gauss nodes");
    }
    VectorXd lam(n);
    for (int i = 0; i < n; ++i)
        lam(i) = ((i % 2) ? -1.0 : 1.0) * std::sqrt((1.0 - x(i) * x(i)) * gw(i));
    MatrixXd D = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            D(i, j) = (lam(j) / lam(i)) / (x(i) - x(j));
            diag -= D(i, j);
        }
        D(i, i) = diag;
    }
    return D;
}

Eigen::MatrixXd second_derivative_matrix(const VectorXd& x) {
    const int n = static_cast<int>(x.size());
    const MatrixXd D = differentiation_matrix(x);
    MatrixXd D2 = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            D2(i, j) = 2.0 * D(i, j) * (D(i, i) - 1.0 / (x(i) - x(j)));
            diag -= D2(i, j);
        }
        D2(i, i) = diag;
    }
    return D2;
}

ReducedKahlerStructure reduced_structure(int n_nodes, double xi_coeff,
                                         const VectorXd& v_values) {
    ReducedKahlerStructure S;
    gauss_legendre(n_nodes, S.x, S.w);
    S.D = differentiation_matrix(S.x);
    S.D2 = second_derivative_matrix(S.x);
    S.v = (v_values.size() == 0) ? VectorXd::Zero(n_nodes) : v_values;
    if (S.v.size() != n_nodes) throw std::invalid_argument("v grid size mismatch");
    S.xi_coeff = xi_coeff;
    S.upp = (1.0 - S.x.array().square()).inverse().matrix() + S.D2 * S.v;
    if (S.upp.minCoeff() <= 0.0)
        throw std::runtime_error("potential is not strictly convex");
    S.theta = xi_coeff * S.x;
    S.theta.array() += theta_constant(S.x, S.w, xi_coeff);
    S.theta_prime = -2.0 * S.theta;
    return S;
}

double weighted_pairing(const ReducedKahlerStructure& S, const VectorXd& p,
                        const VectorXd& q) {
    double s = 0.0;
    for (int k = 0; k < S.x.size(); ++k)
        s += S.w(k) * p(k) * q(k) * std::exp(-2.0 * S.theta(k));
    return 2.0 * std::numbers::pi * s;
}

VectorXd reduced_scalar_curvature(const ReducedKahlerStructure& S) {
    const VectorXd psi =
        (1.0 - S.x.array().square()).matrix() - S.upp.cwiseInverse().eval();
    return VectorXd::Ones(S.x.size()) + 0.5 * (S.D2 * psi);
}

VectorXd modified_scalar_curvature(const ReducedKahlerStructure& S, double zeta_coeff) {
    return modified_curvature_from(S, S.upp, zeta_coeff);
}

DerivativeCheck moment_map_derivative_check(const ReducedKahlerStructure& S,
                                            VectorXd f, const VectorXd& a_dir,
                                            double h) {
    if (h <= 0) throw std::invalid_argument("step must be positive");
    if (f.size() != S.x.size() || a_dir.size() != S.x.size())
        throw std::invalid_argument("grid size mismatch");

    // Project f onto zero xi-weighted mean.
    const VectorXd ones = VectorXd::Ones(S.x.size());
    f.array() -= weighted_pairing(S, f, ones) / weighted_pairing(S, ones, ones);

    const VectorXd base = (1.0 - S.x.array().square()).inverse().matrix();
    const VectorXd app = S.D2 * a_dir;

    // The pairing (4 s_xi(u_t), f)_xi is evaluated with the second
    // derivative moved onto the fixed factor f e^{-2 theta} by parts (the
    // boundary terms vanish since psi and phi have double and simple zeros
    // at the poles). This keeps the finite-difference numerator free of
    // spectral roundoff on the t-dependent quantities.
    const VectorXd wgt = (-2.0 * S.theta.array()).exp().matrix();
    const VectorXd fw = f.cwiseProduct(wgt);
    const VectorXd fw1 = S.D * fw;
    const VectorXd fw2 = S.D2 * fw;
    const double tpx = -2.0 * S.xi_coeff;
    const double two_pi = 2.0 * std::numbers::pi;
    auto pairing_at = [&](double t) {
        VectorXd upp = base + S.D2 * (S.v + t * a_dir).eval();
        if (upp.minCoeff() <= 0.0)
            throw std::runtime_error("convexity lost along the variation path");
        VectorXd phi = upp.cwiseInverse();
        VectorXd psi = (1.0 - S.x.array().square()).matrix() - phi;
        double sum = 0.0;
        for (int k = 0; k < S.x.size(); ++k) {
            sum += S.w(k) * (0.5 * psi(k) * fw2(k) + tpx * phi(k) * fw1(k)
                             + S.xi_coeff * tpx * phi(k) * fw(k)
                             - S.theta_prime(k) * fw(k));
        }
        return 4.0 * two_pi * sum;
    };

    auto central = [&](double step) {
        return (pairing_at(step) - pairing_at(-step)) / (2.0 * step);
    };
    DerivativeCheck out;
    out.lhs = -(4.0 * central(h / 2) - central(h)) / 3.0;

    const VectorXd phi = S.upp.cwiseInverse();
    const VectorXd fpp = S.D2 * f;
    VectorXd integrand =
        -2.0 * fpp.cwiseProduct(app).cwiseProduct(phi.cwiseProduct(phi));
    out.rhs = weighted_pairing(S, integrand, ones);
    out.rel_err = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.lhs), 1e-8);
    return out;
}

double futaki_pairing(double xi_df, int n_nodes) {
    auto S = reduced_structure(n_nodes, -0.5 * xi_df, VectorXd());
    const VectorXd s_xi = modified_scalar_curvature(S, 0.0);
    const VectorXd ones = VectorXd::Ones(n_nodes);
    VectorXd fgen = S.x;
    fgen.array() -= weighted_pairing(S, fgen, ones) / weighted_pairing(S, ones, ones);
    fgen /= std::sqrt(weighted_pairing(S, fgen, fgen));
    double c = 0.0, vol = 0.0;
    for (int k = 0; k < n_nodes; ++k) {
        c += S.w(k) * std::exp(S.theta_prime(k));
        vol += S.w(k);
    }
    return weighted_pairing(S, s_xi, fgen) / (c / vol);
}

}  // namespace krs
