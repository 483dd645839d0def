#include "krs/character.hpp"

#include <cmath>
#include <stdexcept>

namespace krs {

WeightedCharacter hilbert_character(const MomentPolytope& P, int m) {
    if (m < 1) throw std::invalid_argument("level m must be >= 1");
    WeightedCharacter chi;
    chi.level = m;
    for (auto& u : P.lattice_points(m)) chi.weights.emplace(std::move(u), 1);
    chi.total = static_cast<long long>(chi.weights.size());
    return chi;
}

double character_value(const WeightedCharacter& chi, const Eigen::VectorXd& eta) {
    if (!eta.allFinite()) throw std::invalid_argument("eta must be finite");
    double s = 0.0;
    for (const auto& [u, mult] : chi.weights) {
        if (static_cast<Eigen::Index>(u.size()) != eta.size())
            throw std::invalid_argument("eta dimension mismatch");
        double dot = 0.0;
        for (size_t j = 0; j < u.size(); ++j) dot += static_cast<double>(u[j]) * eta(j);
        s += static_cast<double>(mult) * std::exp(dot);
    }
    return s;
}

double loglog_slope(const std::vector<std::pair<int, double>>& gaps) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& [m, g] : gaps) {
        if (g <= 0.0) continue;
        const double x = std::log(static_cast<double>(m));
        const double y = std::log(g);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    if (cnt < 2) return 0.0;
    return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

AsymptoticReport hrr_asymptotic_check(const MomentPolytope& P, const std::vector<int>& m_list) {
    if (m_list.size() < 3) throw std::invalid_argument("need at least 3 levels");
    for (size_t i = 1; i < m_list.size(); ++i) {
        if (m_list[i] <= m_list[i - 1])
            throw std::invalid_argument("levels must be increasing");
    }
    const int n = P.dim();
    AsymptoticReport rep;
    rep.volume = to_double(P.volume());

    Eigen::VectorXd probe = Eigen::VectorXd::Constant(n, 0.3);
    const double F = P.exp_moments(probe).value;

    std::vector<std::pair<int, double>> vol_gaps;
    for (int m : m_list) {
        auto chi = hilbert_character(P, m);
        const double mn = std::pow(static_cast<double>(m), n);
        const double ratio = static_cast<double>(chi.total) / mn;
        rep.ratios.emplace_back(m, ratio);
        vol_gaps.emplace_back(m, std::abs(ratio - rep.volume));
        rep.moment_gaps.emplace_back(m, std::abs(character_value(chi, probe / m) / mn - F));
    }
    rep.fitted_exponent = loglog_slope(vol_gaps);
    return rep;
}

bool characters_equal(const WeightedCharacter& a, const WeightedCharacter& b,
                      bool normalize_reflection) {
    if (a.level != b.level) throw std::invalid_argument("level mismatch");
    if (!normalize_reflection) return a.weights == b.weights;
    auto canon = [](const WeightedCharacter& c) {
        std::map<std::vector<long long>, long long> reflected;
        for (const auto& [u, mult] : c.weights) {
            std::vector<long long> v(u.size());
            for (size_t j = 0; j < u.size(); ++j) v[j] = -u[j];
            reflected.emplace(std::move(v), mult);
        }
        return std::min(c.weights, reflected);
    };
    return canon(a) == canon(b);
}

}  // namespace krs
