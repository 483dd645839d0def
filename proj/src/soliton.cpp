#include "krs/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace krs {

namespace {

bool origin_interior(const MomentPolytope& P) {
    RatVec zero(P.dim(), Rat(0));
    for (const auto& fc : P.facets()) {
        if (fc.offset >= 0) return false;
    }
    return P.contains(zero);
}

// Sup over the standard lattice basis of |df_continuum(P, xi, e_j)|.
double basis_residual(const MomentPolytope& P, const Eigen::VectorXd& xi) {
    double r = 0.0;
    for (int j = 0; j < P.dim(); ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(P.dim());
        e(j) = 1.0;
        r = std::max(r, std::abs(df_continuum(P, xi, e)));
    }
    return r;
}

using BigInt = boost::multiprecision::cpp_int;

// Textbook LLL (delta = 0.99) over exact rationals on integer row vectors.
void lll_reduce(std::vector<std::vector<BigInt>>& basis) {
    const size_t n = basis.size();
    const size_t dim = basis[0].size();
    auto dot = [&](const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
        BigInt s = 0;
        for (size_t j = 0; j < dim; ++j) s += a[j] * b[j];
        return s;
    };
    std::vector<std::vector<Rat>> mu(n, std::vector<Rat>(n, Rat(0)));
    std::vector<Rat> B(n, Rat(0));
    auto gram_schmidt = [&]() {
        std::vector<std::vector<Rat>> star(n, std::vector<Rat>(dim, Rat(0)));
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < dim; ++j) star[i][j] = Rat(basis[i][j]);
            for (size_t k = 0; k < i; ++k) {
                Rat num = 0;
                for (size_t j = 0; j < dim; ++j) num += Rat(basis[i][j]) * star[k][j];
                mu[i][k] = (B[k] == 0) ? Rat(0) : num / B[k];
                for (size_t j = 0; j < dim; ++j) star[i][j] -= mu[i][k] * star[k][j];
            }
            B[i] = 0;
            for (size_t j = 0; j < dim; ++j) B[i] += star[i][j] * star[i][j];
        }
    };
    gram_schmidt();
    const Rat delta(99, 100);
    size_t k = 1;
    int guard = 0;
    while (k < n && ++guard < 10000) {
        for (size_t j = k; j-- > 0;) {
            Rat m = mu[k][j] + Rat(1, 2);
            BigInt q = numerator(m) / denominator(m);
            if (m < 0 && Rat(q) != m) --q;  // floor for negatives
            if (q != 0) {
                for (size_t t = 0; t < dim; ++t) basis[k][t] -= q * basis[j][t];
            }
        }
        gram_schmidt();
        if (B[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            ++k;
        } else {
            std::swap(basis[k], basis[k - 1]);
            gram_schmidt();
            k = std::max<size_t>(k - 1, 1);
        }
    }
    (void)dot;
}

int int_rank(const std::vector<std::vector<long long>>& rows, int n) {
    RatMat M;
    for (const auto& r : rows) {
        RatVec row(n);
        for (int j = 0; j < n; ++j) row[j] = Rat(r[j]);
        M.push_back(std::move(row));
    }
    return rank(std::move(M));
}

}  // namespace

double df_discrete(const MomentPolytope& P, const Eigen::VectorXd& xi,
                   const std::vector<long long>& lambda, int m) {
    if (xi.size() != P.dim() || static_cast<int>(lambda.size()) != P.dim())
        throw std::invalid_argument("dimension mismatch");
    const auto pts = P.lattice_points(m);
    double w = 0.0;
    for (const auto& u : pts) {
        double dot = 0.0, pair = 0.0;
        for (int j = 0; j < P.dim(); ++j) {
            dot += static_cast<double>(u[j]) * xi(j);
            pair += static_cast<double>(u[j]) * static_cast<double>(lambda[j]);
        }
        w += std::exp(dot / m) * pair;
    }
    return -w / (static_cast<double>(m) * static_cast<double>(pts.size()));
}

double df_continuum(const MomentPolytope& P, const Eigen::VectorXd& xi,
                    const Eigen::VectorXd& lambda) {
    if (xi.size() != P.dim() || lambda.size() != P.dim())
        throw std::invalid_argument("dimension mismatch");
    const auto em = P.exp_moments(xi);
    return -em.gradient.dot(lambda) / to_double(P.volume());
}

SolitonReport k_optimal_vector(const MomentPolytope& P, double tol) {
    if (tol <= 0) throw std::invalid_argument("tol must be positive");
    if (!origin_interior(P)) throw std::invalid_argument("origin must be interior to P");
    const int n = P.dim();
    const double vol = to_double(P.volume());

    SolitonReport rep;
    Eigen::VectorXd xi = Eigen::VectorXd::Zero(n);
    auto em = P.exp_moments(xi);
    int it = 0;
    for (; it < 100; ++it) {
        if (em.gradient.norm() / vol <= tol) break;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(em.hessian);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
            throw std::runtime_error("hessian not positive definite");
        Eigen::VectorXd step = ldlt.solve(em.gradient);
        double t = 1.0;
        bool accepted = false;
        for (int h = 0; h < 60; ++h) {
            auto trial = P.exp_moments(xi - t * step);
            if (trial.value < em.value) {
                xi -= t * step;
                em = trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }
    if (em.gradient.norm() / vol > tol)
        throw std::runtime_error("Newton solver did not converge within 100 iterations");

    rep.xi_star = xi;
    rep.newton_iters = it;
    rep.residual = basis_residual(P, xi);
    for (int m : {10, 20, 40, 80, 160}) {
        ConvergenceRow row;
        row.m = m;
        double worst = 0.0;
        for (int j = 0; j < n; ++j) {
            std::vector<long long> lam(n, 0);
            lam[j] = 1;
            Eigen::VectorXd laml = Eigen::VectorXd::Zero(n);
            laml(j) = 1.0;
            const double d = df_discrete(P, xi, lam, m);
            const double c = df_continuum(P, xi, laml);
            if (std::abs(d - c) >= worst) {
                worst = std::abs(d - c);
                row.df_disc = d;
                row.df_cont = c;
            }
        }
        row.gap = worst;
        rep.convergence_table.push_back(row);
    }
    return rep;
}

bool is_kahler_einstein(const MomentPolytope& P) {
    for (const auto& c : P.barycenter()) {
        if (c != 0) return false;
    }
    return true;
}

double df_product_configuration(const MomentPolytope& P, const Eigen::VectorXd& xi,
                                const std::vector<long long>& mu) {
    Eigen::VectorXd lambda(P.dim());
    if (static_cast<int>(mu.size()) != P.dim())
        throw std::invalid_argument("dimension mismatch");
    for (int j = 0; j < P.dim(); ++j) lambda(j) = static_cast<double>(mu[j]);
    return df_continuum(P, xi, lambda);
}

WeightTableEstimate df_from_weight_table(const EquivariantWeightTable& table,
                                         const Eigen::VectorXd& xi_bar, int m_max) {
    if (m_max < 3) throw std::invalid_argument("m_max must be >= 3");
    WeightTableEstimate est;
    for (int m = 1; m <= m_max; ++m) {
        auto it = table.levels.find(m);
        if (it == table.levels.end() || it->second.empty())
            throw std::invalid_argument("weight table missing level " + std::to_string(m));
        double w = 0.0;
        long long h0 = 0;
        for (const auto& [u, mult] : it->second) {
            if (static_cast<Eigen::Index>(u.size()) != xi_bar.size())
                throw std::invalid_argument("weight dimension mismatch");
            if (mult < 1) throw std::invalid_argument("multiplicities must be >= 1");
            double dot = 0.0;
            for (size_t j = 0; j < u.size(); ++j) dot += static_cast<double>(u[j]) * xi_bar(j);
            w += mult * std::exp(dot / m) * static_cast<double>(u.back());
            h0 += mult;
        }
        est.per_level.emplace_back(m, -w / (static_cast<double>(m) * h0));
    }
    // One Richardson level for a + b/m behavior.
    std::vector<double> extrap;
    for (size_t i = 1; i < est.per_level.size(); ++i) {
        const auto [m0, d0] = est.per_level[i - 1];
        const auto [m1, d1] = est.per_level[i];
        extrap.push_back((m1 * d1 - m0 * d0) / static_cast<double>(m1 - m0));
    }
    est.value = extrap.back();
    est.error_bar = std::abs(extrap.back() - extrap[extrap.size() - 2]);
    return est;
}

OptimalityCheck k_optimality_check(const Eigen::VectorXd& xi, double tol) {
    if (tol <= 0) throw std::invalid_argument("tol must be positive");
    const int k = static_cast<int>(xi.size());
    OptimalityCheck out;
    if (k == 0) return out;

    const double scale = 1e12;
    std::vector<std::vector<BigInt>> basis(k, std::vector<BigInt>(k + 1, 0));
    for (int i = 0; i < k; ++i) {
        basis[i][i] = 1;
        basis[i][k] = BigInt(std::llround(scale * xi(i)));
    }
    lll_reduce(basis);

    const long long cmax = 1000000;
    std::vector<std::vector<long long>> rels;
    for (const auto& row : basis) {
        std::vector<long long> c(k);
        bool ok = true;
        for (int j = 0; j < k; ++j) {
            if (abs(row[j]) > cmax) { ok = false; break; }
            c[j] = row[j].convert_to<long long>();
        }
        if (!ok) continue;
        double s = 0.0;
        bool nonzero = false;
        for (int j = 0; j < k; ++j) {
            s += c[j] * xi(j);
            nonzero = nonzero || c[j] != 0;
        }
        if (!nonzero || std::abs(s) > tol) continue;
        // Sign-normalize on the first nonzero entry.
        for (int j = 0; j < k; ++j) {
            if (c[j] == 0) continue;
            if (c[j] < 0) {
                for (auto& v : c) v = -v;
            }
            break;
        }
        auto cand = rels;
        cand.push_back(c);
        if (int_rank(cand, k) > int_rank(rels, k)) rels.push_back(c);
    }
    out.relations = std::move(rels);
    out.rank = k - int_rank(out.relations, k);
    out.heuristic = true;
    return out;
}

}  // namespace krs
