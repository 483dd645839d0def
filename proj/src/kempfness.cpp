#include "krs/kempfness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace krs {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void validate(const TorusRepPoint& rp) {
    if (rp.k < 1) throw std::invalid_argument("torus rank must be >= 1");
    if (rp.weights.empty() || rp.weights.size() != rp.point.size())
        throw std::invalid_argument("weights/point size mismatch");
    for (const auto& w : rp.weights) {
        if (static_cast<int>(w.size()) != rp.k)
            throw std::invalid_argument("weight dimension mismatch");
    }
}

std::vector<int> active_indices(const TorusRepPoint& rp) {
    std::vector<int> act;
    for (size_t i = 0; i < rp.point.size(); ++i) {
        if (std::norm(rp.point[i]) > 0.0) act.push_back(static_cast<int>(i));
    }
    return act;
}

// Vertices of {c >= 0, sum_i c_i w_i = 0, sum_i c_i = 1} over the active
// weights, by exact basic-feasible-solution enumeration.
std::vector<RatVec> convex_combination_vertices(const TorusRepPoint& rp,
                                                const std::vector<int>& act) {
    const int m = static_cast<int>(act.size());
    const int rows = rp.k + 1;
    RatMat A(rows, RatVec(m, Rat(0)));
    for (int c = 0; c < m; ++c) {
        for (int r = 0; r < rp.k; ++r) A[r][c] = Rat(rp.weights[act[c]][r]);
        A[rp.k][c] = 1;
    }
    const int r = rank(A);

    std::set<RatVec> found;
    std::vector<bool> mask(m, false);
    std::fill(mask.begin(), mask.begin() + std::min(r, m), true);
    if (r > m) return {};
    do {
        std::vector<int> cols;
        for (int c = 0; c < m; ++c)
            if (mask[c]) cols.push_back(c);
        // Row-reduce [A_S | rhs] and demand a unique nonnegative solution.
        RatMat M(rows, RatVec(r + 1, Rat(0)));
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < r; ++j) M[i][j] = A[i][cols[j]];
            M[i][r] = (i == rp.k) ? Rat(1) : Rat(0);
        }
        int piv_row = 0;
        std::vector<int> piv_of_col(r, -1);
        for (int col = 0; col < r && piv_row < rows; ++col) {
            int p = -1;
            for (int row = piv_row; row < rows; ++row)
                if (M[row][col] != 0) { p = row; break; }
            if (p < 0) continue;
            std::swap(M[piv_row], M[p]);
            for (int row = 0; row < rows; ++row) {
                if (row == piv_row || M[row][col] == 0) continue;
                Rat f = M[row][col] / M[piv_row][col];
                for (int t = col; t <= r; ++t) M[row][t] -= f * M[piv_row][t];
            }
            piv_of_col[col] = piv_row;
            ++piv_row;
        }
        bool ok = true;
        for (int col = 0; col < r; ++col)
            if (piv_of_col[col] < 0) ok = false;          // dependent basis
        for (int row = piv_row; row < rows && ok; ++row)
            if (M[row][r] != 0) ok = false;               // inconsistent
        if (!ok) continue;
        RatVec c(m, Rat(0));
        for (int col = 0; col < r && ok; ++col) {
            Rat val = M[piv_of_col[col]][r] / M[piv_of_col[col]][col];
            if (val < 0) ok = false;
            c[cols[col]] = val;
        }
        if (ok) found.insert(std::move(c));
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return {found.begin(), found.end()};
}

// First integer one-parameter subgroup (lexicographic sweep, |entries| <= 10)
// with all active pairings <= 0 and at least one < 0; strict = all < 0.
std::vector<long long> destabilizer_sweep(const TorusRepPoint& rp,
                                          const std::vector<int>& act, bool strict,
                                          long long radius = 10) {
    const int k = rp.k;
    // Shells of growing sup-norm so the reported subgroup is minimal.
    for (long long R = 1; R <= radius; ++R) {
        std::vector<long long> lam(k, -R);
        while (true) {
            long long sup = 0;
            for (long long c : lam) sup = std::max(sup, std::llabs(c));
            if (sup == R) {
                bool ok = true, some_strict = false;
                for (int i : act) {
                    long long dot = 0;
                    for (int j = 0; j < k; ++j) dot += rp.weights[i][j] * lam[j];
                    if (dot > 0 || (strict && dot >= 0)) { ok = false; break; }
                    if (dot < 0) some_strict = true;
                }
                if (ok && (strict || some_strict)) return lam;
            }
            int j = k - 1;
            while (j >= 0 && lam[j] == R) lam[j--] = -R;
            if (j < 0) break;
            ++lam[j];
        }
    }
    return {};
}

// Orthonormal basis (columns) of the span of the active weights.
MatrixXd active_span_basis(const TorusRepPoint& rp, const std::vector<int>& act) {
    MatrixXd Wm(rp.k, act.size());
    for (size_t c = 0; c < act.size(); ++c)
        for (int r = 0; r < rp.k; ++r) Wm(r, c) = static_cast<double>(rp.weights[act[c]][r]);
    Eigen::JacobiSVD<MatrixXd> svd(Wm, Eigen::ComputeFullU);
    int r = 0;
    while (r < svd.singularValues().size() && svd.singularValues()(r) > 1e-12) ++r;
    return svd.matrixU().leftCols(r);
}

VectorXd moment_at(const TorusRepPoint& rp, const VectorXd& v) {
    VectorXd mu = VectorXd::Zero(rp.k);
    for (size_t i = 0; i < rp.point.size(); ++i) {
        double dot = 0.0;
        for (int j = 0; j < rp.k; ++j) dot += rp.weights[i][j] * v(j);
        const double s = std::norm(rp.point[i]) * std::exp(2.0 * dot);
        for (int j = 0; j < rp.k; ++j) mu(j) += s * rp.weights[i][j];
    }
    return mu;
}

MatrixXd gram_at(const TorusRepPoint& rp, const VectorXd& v) {
    MatrixXd G = MatrixXd::Zero(rp.k, rp.k);
    for (size_t i = 0; i < rp.point.size(); ++i) {
        double dot = 0.0;
        for (int j = 0; j < rp.k; ++j) dot += rp.weights[i][j] * v(j);
        const double s = std::norm(rp.point[i]) * std::exp(2.0 * dot);
        VectorXd w(rp.k);
        for (int j = 0; j < rp.k; ++j) w(j) = static_cast<double>(rp.weights[i][j]);
        G += s * w * w.transpose();
    }
    return G;
}

double kn_function(const TorusRepPoint& rp, const VectorXd& v) {
    double phi = 0.0;
    for (size_t i = 0; i < rp.point.size(); ++i) {
        double dot = 0.0;
        for (int j = 0; j < rp.k; ++j) dot += rp.weights[i][j] * v(j);
        phi += 0.5 * std::norm(rp.point[i]) * std::exp(2.0 * dot);
    }
    return phi;
}

}  // namespace

VectorXd linear_moment_map(const TorusRepPoint& rp) {
    validate(rp);
    return moment_at(rp, VectorXd::Zero(rp.k));
}

StabilityVerdict polystable(const TorusRepPoint& rp) {
    validate(rp);
    StabilityVerdict out;
    const auto act = active_indices(rp);
    if (act.empty()) {
        out.verdict = Stability::polystable;
        out.zero_moment_point = rp.point;  // the fixed point 0
        return out;
    }
    const auto vertices = convex_combination_vertices(rp, act);
    if (vertices.empty()) {
        out.verdict = Stability::unstable;
        out.destabilizer = destabilizer_sweep(rp, act, true);
        if (out.destabilizer.empty())
            out.destabilizer = destabilizer_sweep(rp, act, false);
        return out;
    }
    bool relint = true;
    for (size_t c = 0; c < act.size() && relint; ++c) {
        bool positive_somewhere = false;
        for (const auto& vtx : vertices) positive_somewhere = positive_somewhere || vtx[c] > 0;
        relint = positive_somewhere;
    }
    if (!relint) {
        out.verdict = Stability::semistable_not_polystable;
        out.destabilizer = destabilizer_sweep(rp, act, false);
        return out;
    }
    out.verdict = Stability::polystable;
    auto mr = kempf_ness_minimize(rp);
    out.zero_moment_point.resize(rp.point.size());
    for (size_t i = 0; i < rp.point.size(); ++i) {
        double dot = 0.0;
        for (int j = 0; j < rp.k; ++j) dot += rp.weights[i][j] * mr.v_star(j);
        out.zero_moment_point[i] = rp.point[i] * std::exp(dot);
    }
    return out;
}

MinimizeResult kempf_ness_minimize(const TorusRepPoint& rp, double tol) {
    validate(rp);
    if (tol <= 0) throw std::invalid_argument("tol must be positive");
    MinimizeResult out;
    out.v_star = VectorXd::Zero(rp.k);
    const auto act = active_indices(rp);
    if (act.empty()) {
        out.converged = true;
        return out;
    }

    // Infimum is attained iff 0 lies in the relative interior of the active
    // weight hull; otherwise report the recession direction.
    const auto vertices = convex_combination_vertices(rp, act);
    bool attained = !vertices.empty();
    for (size_t c = 0; c < act.size() && attained; ++c) {
        bool pos = false;
        for (const auto& vtx : vertices) pos = pos || vtx[c] > 0;
        attained = pos;
    }
    if (!attained) {
        auto lam = destabilizer_sweep(rp, act, true);
        if (lam.empty()) lam = destabilizer_sweep(rp, act, false);
        out.recession_direction = VectorXd::Zero(rp.k);
        for (int j = 0; j < rp.k; ++j)
            out.recession_direction(j) = static_cast<double>(lam.empty() ? 0 : lam[j]);
        if (out.recession_direction.norm() > 0) out.recession_direction.normalize();
        return out;
    }

    const MatrixXd U = active_span_basis(rp, act);
    VectorXd y = VectorXd::Zero(U.cols());
    for (int it = 0; it < 200; ++it) {
        const VectorXd v = U * y;
        const VectorXd grad = moment_at(rp, v);
        if (grad.norm() <= tol) {
            out.converged = true;
            out.v_star = v;
            out.iters = it;
            return out;
        }
        const MatrixXd H = U.transpose() * (2.0 * gram_at(rp, v)) * U;
        const VectorXd gy = U.transpose() * grad;
        VectorXd step = H.ldlt().solve(gy);
        if (!step.allFinite() || step.norm() > 4.0) step = gy * (4.0 / gy.norm());
        const double phi0 = kn_function(rp, v);
        // Near the minimum the decrease falls below the rounding noise of
        // phi; plain Newton steps still contract, so skip the line search.
        if (grad.norm() < 1e-4 * (1.0 + phi0)) {
            y -= step;
            continue;
        }
        double t = 1.0;
        for (int h = 0; h < 60; ++h) {
            const double trial = kn_function(rp, U * (y - t * step));
            if (std::isfinite(trial) && trial < phi0) break;
            t *= 0.5;
        }
        y -= t * step;
    }
    throw std::runtime_error("Kempf-Ness Newton did not converge within 200 iterations");
}

LemmaBoundReport sze_lemma_bound_check(const TorusRepPoint& rp, double delta) {
    validate(rp);
    if (delta <= 0) throw std::invalid_argument("delta must be positive");
    const auto verdict = polystable(rp).verdict;
    if (verdict != Stability::polystable)
        throw std::invalid_argument("lemma bound requires a polystable point");

    LemmaBoundReport rep;
    const auto act = active_indices(rp);
    const auto mr = kempf_ness_minimize(rp);
    rep.v_star_norm = mr.v_star.norm();
    rep.mu_norm = linear_moment_map(rp).norm();
    if (act.empty()) {
        rep.lambda = 0.0;
        rep.applicable = true;
        rep.holds = true;
        return rep;
    }

    const MatrixXd U = active_span_basis(rp, act);
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> N(0.0, 1.0);
    std::uniform_real_distribution<double> R(0.0, 1.0);
    double lambda = 0.0;
    auto probe = [&](const VectorXd& v) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(U.transpose() * (2.0 * gram_at(rp, v)) * U);
        lambda = std::max(lambda, 1.0 / es.eigenvalues().minCoeff());
    };
    probe(VectorXd::Zero(rp.k));
    for (int s = 0; s < 400; ++s) {
        VectorXd v(rp.k);
        for (int j = 0; j < rp.k; ++j) v(j) = N(rng);
        if (v.norm() > 0) v *= delta * std::pow(R(rng), 1.0 / rp.k) / v.norm();
        probe(v);
    }
    rep.lambda = lambda;
    rep.applicable = lambda * rep.mu_norm < delta;
    rep.holds = rep.applicable && rep.v_star_norm <= lambda * rep.mu_norm + 1e-12;
    return rep;
}

double scaling_expansion_check(const TorusRepPoint& rp, const std::vector<double>& t_list) {
    validate(rp);
    const VectorXd mu = linear_moment_map(rp);
    double worst = 0.0;
    for (double t : t_list) {
        TorusRepPoint scaled = rp;
        for (auto& b : scaled.point) b *= t;
        worst = std::max(worst,
                         (linear_moment_map(scaled) - t * t * mu).cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace krs
