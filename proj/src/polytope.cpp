#include "krs/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace krs {

namespace {

boost::multiprecision::cpp_int rat_floor(const Rat& r) {
    boost::multiprecision::cpp_int q = numerator(r) / denominator(r);
    if (numerator(r) < 0 && q * denominator(r) != numerator(r)) --q;
    return q;
}

boost::multiprecision::cpp_int rat_ceil(const Rat& r) { return -rat_floor(-r); }

Rat rat_det(RatMat A) {
    const int n = static_cast<int>(A.size());
    Rat det = 1;
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int row = col; row < n; ++row) {
            if (A[row][col] != 0) { pivot = row; break; }
        }
        if (pivot < 0) return Rat(0);
        if (pivot != col) { std::swap(A[col], A[pivot]); det = -det; }
        det *= A[col][col];
        for (int row = col + 1; row < n; ++row) {
            if (A[row][col] == 0) continue;
            Rat factor = A[row][col] / A[col][col];
            for (int k = col; k < n; ++k) A[row][k] -= factor * A[col][k];
        }
    }
    return det;
}

long long llgcd(long long a, long long b) {
    a = std::llabs(a); b = std::llabs(b);
    while (b) { a %= b; std::swap(a, b); }
    return a;
}

}  // namespace

double exp_divided_difference(std::vector<double> nodes) {
    std::sort(nodes.begin(), nodes.end());
    const int n = static_cast<int>(nodes.size());
    constexpr double kClusterTol = 1e-6;
    constexpr int kSeriesTerms = 6;

    // dd[i][j] = exp[nodes_i, ..., nodes_j], filled by subrange length.
    std::vector<std::vector<double>> dd(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) dd[i][i] = std::exp(nodes[i]);
    for (int len = 1; len < n; ++len) {
        for (int i = 0; i + len < n; ++i) {
            const int j = i + len;
            const double spread = nodes[j] - nodes[i];
            if (spread < kClusterTol) {
                // Confluent regime: exp[x_i..x_j] = e^mu sum_k h_k(delta)/(len+k)!
                // with h_k the complete homogeneous symmetric polynomials of the
                // shifts delta = x - mu.
                double mu = 0.0;
                for (int k = i; k <= j; ++k) mu += nodes[k];
                mu /= (len + 1);
                std::vector<double> h(kSeriesTerms, 0.0);
                h[0] = 1.0;
                for (int k = i; k <= j; ++k) {
                    const double d = nodes[k] - mu;
                    for (int t = 1; t < kSeriesTerms; ++t) h[t] += d * h[t - 1];
                }
                double fact = 1.0;
                for (int t = 2; t <= len; ++t) fact *= t;  // len!
                double sum = 0.0;
                for (int t = 0; t < kSeriesTerms; ++t) {
                    sum += h[t] / fact;
                    fact *= (len + t + 1);
                }
                dd[i][j] = std::exp(mu) * sum;
            } else {
                dd[i][j] = (dd[i + 1][j] - dd[i][j - 1]) / spread;
            }
        }
    }
    return dd[0][n - 1];
}

MomentPolytope MomentPolytope::anticanonical(const std::vector<std::vector<long long>>& rays) {
    if (rays.empty()) throw std::invalid_argument("no rays given");
    const int n = static_cast<int>(rays[0].size());
    if (n < 1) throw std::invalid_argument("dimension must be positive");

    std::set<std::vector<long long>> seen;
    for (const auto& r : rays) {
        if (static_cast<int>(r.size()) != n)
            throw std::invalid_argument("ray dimension mismatch");
        long long g = 0;
        for (long long c : r) g = llgcd(g, c);
        if (g != 1) throw std::invalid_argument("ray is not primitive");
        if (!seen.insert(r).second) throw std::invalid_argument("duplicate ray");
    }

    RatMat span;
    for (const auto& r : rays) {
        RatVec row;
        for (long long c : r) row.emplace_back(c);
        span.push_back(std::move(row));
    }
    if (rank(span) != n)
        throw std::runtime_error("rays do not span N_R: polytope unbounded");

    std::vector<Facet> facets;
    for (const auto& r : rays) facets.push_back(Facet{r, Rat(-1)});
    return from_facets(n, std::move(facets));
}

MomentPolytope MomentPolytope::from_facets(int dim, std::vector<Facet> facets) {
    MomentPolytope P;
    P.dim_ = dim;
    P.facets_ = std::move(facets);
    P.check_bounded();
    P.enumerate_vertices();
    if (P.vertices_.empty() || affine_rank(P.vertices_) != dim)
        throw std::runtime_error("polytope is not full-dimensional");
    P.triangulate();
    return P;
}

void MomentPolytope::check_bounded() const {
    const int n = dim_;
    const int f = static_cast<int>(facets_.size());
    auto in_recession_cone = [&](const RatVec& u) {
        for (const auto& fc : facets_) {
            Rat s = 0;
            for (int j = 0; j < n; ++j) s += u[j] * fc.normal[j];
            if (s < 0) return false;
        }
        return true;
    };
    if (n == 1) {
        for (int sgn : {1, -1}) {
            if (in_recession_cone({Rat(sgn)}))
                throw std::runtime_error("polytope unbounded");
        }
        return;
    }
    // Any nontrivial recession direction lies on an extreme ray of the cone
    // { u : <u, normal> >= 0 }, cut out by n-1 independent normals.
    std::vector<int> idx(n - 1);
    std::vector<bool> mask(f, false);
    std::fill(mask.begin(), mask.begin() + (n - 1), true);
    std::vector<std::vector<bool>> masks;
    do { masks.push_back(mask); } while (std::prev_permutation(mask.begin(), mask.end()));
    for (const auto& mk : masks) {
        RatMat A;
        for (int i = 0; i < f; ++i) {
            if (!mk[i]) continue;
            RatVec row;
            for (long long c : facets_[i].normal) row.emplace_back(c);
            A.push_back(std::move(row));
        }
        RatVec u = kernel_direction(A, n);
        if (u.empty()) continue;
        for (int sgn : {1, -1}) {
            RatVec v(n);
            for (int j = 0; j < n; ++j) v[j] = sgn * u[j];
            if (in_recession_cone(v)) throw std::runtime_error("polytope unbounded");
        }
    }
}

void MomentPolytope::enumerate_vertices() {
    const int n = dim_;
    const int f = static_cast<int>(facets_.size());
    if (f < n) throw std::runtime_error("too few facets");
    std::vector<bool> mask(f, false);
    std::fill(mask.begin(), mask.begin() + n, true);
    std::set<RatVec> found;
    do {
        RatMat A;
        RatVec b;
        for (int i = 0; i < f; ++i) {
            if (!mask[i]) continue;
            RatVec row;
            for (long long c : facets_[i].normal) row.emplace_back(c);
            A.push_back(std::move(row));
            b.push_back(facets_[i].offset);
        }
        RatVec x;
        if (!solve_linear(std::move(A), std::move(b), x)) continue;
        if (contains(x)) found.insert(x);
    } while (std::prev_permutation(mask.begin(), mask.end()));
    vertices_.assign(found.begin(), found.end());
}

bool MomentPolytope::contains(const RatVec& u) const {
    for (const auto& fc : facets_) {
        Rat s = 0;
        for (int j = 0; j < dim_; ++j) s += u[j] * fc.normal[j];
        if (s < fc.offset) return false;
    }
    return true;
}

void MomentPolytope::triangulate() {
    const int n = dim_;
    const int nv = static_cast<int>(vertices_.size());
    // Vertex incidence per facet.
    std::vector<std::vector<int>> facet_verts(facets_.size());
    for (size_t fi = 0; fi < facets_.size(); ++fi) {
        for (int vi = 0; vi < nv; ++vi) {
            Rat s = 0;
            for (int j = 0; j < n; ++j) s += vertices_[vi][j] * facets_[fi].normal[j];
            if (s == facets_[fi].offset) facet_verts[fi].push_back(vi);
        }
    }

    auto face_points = [&](const std::vector<int>& face) {
        std::vector<RatVec> pts;
        for (int vi : face) pts.push_back(vertices_[vi]);
        return pts;
    };

    // Recursive cone-over-boundary decomposition; faces are sorted vertex
    // index lists, subfaces obtained by intersecting with facet hyperplanes.
    std::function<std::vector<std::vector<int>>(const std::vector<int>&, int)> tri =
        [&](const std::vector<int>& face, int face_dim) -> std::vector<std::vector<int>> {
        if (static_cast<int>(face.size()) == face_dim + 1) return {face};
        const int apex = face[0];
        std::set<std::vector<int>> subfaces;
        for (const auto& fv : facet_verts) {
            std::vector<int> s;
            std::set_intersection(face.begin(), face.end(), fv.begin(), fv.end(),
                                  std::back_inserter(s));
            if (s.size() == face.size() || s.empty()) continue;
            if (std::binary_search(s.begin(), s.end(), apex)) continue;
            if (affine_rank(face_points(s)) != face_dim - 1) continue;
            subfaces.insert(std::move(s));
        }
        std::vector<std::vector<int>> out;
        for (const auto& s : subfaces) {
            for (auto simplex : tri(s, face_dim - 1)) {
                simplex.insert(simplex.begin(), apex);
                out.push_back(std::move(simplex));
            }
        }
        return out;
    };

    std::vector<int> all(nv);
    std::iota(all.begin(), all.end(), 0);
    simplices_ = tri(all, n);
}

std::vector<std::vector<long long>> MomentPolytope::lattice_points(int m) const {
    if (m < 1) throw std::invalid_argument("level m must be >= 1");
    const int n = dim_;
    std::vector<long long> lo(n), hi(n);
    for (int j = 0; j < n; ++j) {
        Rat mn = vertices_[0][j], mx = vertices_[0][j];
        for (const auto& v : vertices_) {
            mn = std::min(mn, v[j]);
            mx = std::max(mx, v[j]);
        }
        lo[j] = rat_floor(Rat(m) * mn).convert_to<long long>();
        hi[j] = rat_ceil(Rat(m) * mx).convert_to<long long>();
    }
    std::vector<std::vector<long long>> out;
    std::vector<long long> u(n);
    std::function<void(int)> scan = [&](int j) {
        if (j == n) {
            for (const auto& fc : facets_) {
                boost::multiprecision::cpp_int s = 0;
                for (int t = 0; t < n; ++t) s += boost::multiprecision::cpp_int(u[t]) * fc.normal[t];
                if (Rat(s) < Rat(m) * fc.offset) return;
            }
            out.push_back(u);
            return;
        }
        for (long long c = lo[j]; c <= hi[j]; ++c) { u[j] = c; scan(j + 1); }
    };
    scan(0);
    std::sort(out.begin(), out.end());
    return out;
}

Rat MomentPolytope::volume() const {
    const int n = dim_;
    Rat nfact = 1;
    for (int k = 2; k <= n; ++k) nfact *= k;
    Rat vol = 0;
    for (const auto& s : simplices_) {
        RatMat A;
        for (int i = 1; i <= n; ++i) {
            RatVec row(n);
            for (int j = 0; j < n; ++j) row[j] = vertices_[s[i]][j] - vertices_[s[0]][j];
            A.push_back(std::move(row));
        }
        vol += abs(rat_det(std::move(A))) / nfact;
    }
    return vol;
}

RatVec MomentPolytope::barycenter() const {
    const int n = dim_;
    Rat nfact = 1;
    for (int k = 2; k <= n; ++k) nfact *= k;
    Rat vol = 0;
    RatVec moment(n, Rat(0));
    for (const auto& s : simplices_) {
        RatMat A;
        for (int i = 1; i <= n; ++i) {
            RatVec row(n);
            for (int j = 0; j < n; ++j) row[j] = vertices_[s[i]][j] - vertices_[s[0]][j];
            A.push_back(std::move(row));
        }
        Rat v = abs(rat_det(std::move(A))) / nfact;
        vol += v;
        for (int j = 0; j < n; ++j) {
            Rat c = 0;
            for (int i = 0; i <= n; ++i) c += vertices_[s[i]][j];
            moment[j] += v * c / (n + 1);
        }
    }
    if (vol == 0) throw std::runtime_error("degenerate polytope");
    for (int j = 0; j < n; ++j) moment[j] /= vol;
    return moment;
}

ExpMoments MomentPolytope::exp_moments(const Eigen::VectorXd& xi) const {
    const int n = dim_;
    if (xi.size() != n) throw std::invalid_argument("xi dimension mismatch");
    if (!xi.allFinite()) throw std::invalid_argument("xi must be finite");

    ExpMoments em;
    em.gradient = Eigen::VectorXd::Zero(n);
    em.hessian = Eigen::MatrixXd::Zero(n, n);

    for (const auto& s : simplices_) {
        std::vector<Eigen::VectorXd> p(n + 1);
        for (int i = 0; i <= n; ++i) {
            p[i] = Eigen::VectorXd(n);
            for (int j = 0; j < n; ++j) p[i](j) = to_double(vertices_[s[i]][j]);
        }
        RatMat A;
        for (int i = 1; i <= n; ++i) {
            RatVec row(n);
            for (int j = 0; j < n; ++j) row[j] = vertices_[s[i]][j] - vertices_[s[0]][j];
            A.push_back(std::move(row));
        }
        const double det = std::abs(to_double(rat_det(std::move(A))));
        if (det == 0.0) continue;

        std::vector<double> a(n + 1);
        for (int i = 0; i <= n; ++i) a[i] = p[i].dot(xi);

        em.value += det * exp_divided_difference(a);
        for (int i = 0; i <= n; ++i) {
            auto ai = a;
            ai.push_back(a[i]);
            const double ci = det * exp_divided_difference(ai);
            em.gradient += ci * p[i];
            for (int j = 0; j <= n; ++j) {
                auto aij = ai;
                aij.push_back(a[j]);
                const double fac = (i == j) ? 2.0 : 1.0;
                em.hessian += det * fac * exp_divided_difference(aij) * (p[i] * p[j].transpose());
            }
        }
    }
    return em;
}

}  // namespace krs
