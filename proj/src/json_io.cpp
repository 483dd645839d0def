#include "krs/json_io.hpp"

#include <sstream>
#include <stdexcept>

namespace krs {

namespace {

std::vector<long long> int_vector(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected an integer array");
    std::vector<long long> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number_integer()) throw std::invalid_argument("expected an integer array");
        out.push_back(e.get<long long>());
    }
    return out;
}

}  // namespace

MomentPolytope polytope_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim"))
        throw std::invalid_argument("polytope JSON needs a \"dim\" field");
    const int dim = j.at("dim").get<int>();
    if (j.contains("rays")) {
        std::vector<std::vector<long long>> rays;
        for (const auto& r : j.at("rays")) {
            auto v = int_vector(r);
            if ((int)v.size() != dim)
                throw std::invalid_argument("ray dimension mismatch");
            rays.push_back(std::move(v));
        }
        return MomentPolytope::anticanonical(rays);
    }
    if (j.contains("facets")) {
        std::vector<Facet> facets;
        for (const auto& f : j.at("facets")) {
            Facet fc;
            fc.normal = int_vector(f.at("normal"));
            if ((int)fc.normal.size() != dim)
                throw std::invalid_argument("facet normal dimension mismatch");
            fc.offset = parse_rational(f.at("offset").get<std::string>());
            facets.push_back(std::move(fc));
        }
        return MomentPolytope::from_facets(dim, std::move(facets));
    }
    throw std::invalid_argument("polytope JSON needs \"rays\" or \"facets\"");
}

json polytope_to_json(const MomentPolytope& P) {
    json j;
    j["dim"] = P.dim();
    j["facets"] = json::array();
    for (const auto& f : P.facets()) {
        json jf;
        jf["normal"] = f.normal;
        jf["offset"] = format_rational(f.offset);
        j["facets"].push_back(jf);
    }
    j["vertices"] = json::array();
    for (const auto& v : P.vertices()) {
        json jv = json::array();
        for (const auto& c : v) jv.push_back(format_rational(c));
        j["vertices"].push_back(jv);
    }
    j["volume"] = format_rational(P.volume());
    json bc = json::array();
    for (const auto& c : P.barycenter()) bc.push_back(format_rational(c));
    j["barycenter"] = bc;
    return j;
}

std::vector<std::vector<long long>> example_rays(const std::string& name) {
    if (name == "cp1") return {{1}, {-1}};
    if (name == "cp2") return {{1, 0}, {0, 1}, {-1, -1}};
    if (name == "bl1cp2") return {{1, 0}, {0, 1}, {-1, -1}, {1, 1}};
    if (name == "p1xp1") return {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    throw std::invalid_argument("unknown example \"" + name +
                                "\" (expected cp1, cp2, bl1cp2 or p1xp1)");
}

json character_to_json(const WeightedCharacter& chi) {
    json j;
    j["m"] = chi.level;
    j["total"] = chi.total;
    j["weights"] = json::array();
    for (const auto& [u, mult] : chi.weights) {
        json jw;
        jw["u"] = u;
        jw["mult"] = mult;
        j["weights"].push_back(jw);
    }
    return j;
}

WeightedCharacter character_from_json(const json& j) {
    WeightedCharacter chi;
    chi.level = j.at("m").get<int>();
    for (const auto& jw : j.at("weights")) {
        auto u = int_vector(jw.at("u"));
        long long mult = jw.at("mult").get<long long>();
        if (mult <= 0) throw std::invalid_argument("multiplicities must be positive");
        chi.weights[u] += mult;
        chi.total += mult;
    }
    return chi;
}

std::string character_to_csv(const WeightedCharacter& chi) {
    std::ostringstream os;
    size_t n = chi.weights.empty() ? 0 : chi.weights.begin()->first.size();
    for (size_t i = 0; i < n; ++i) os << "u" << (i + 1) << ",";
    os << "mult\n";
    for (const auto& [u, mult] : chi.weights) {
        for (long long c : u) os << c << ",";
        os << mult << "\n";
    }
    return os.str();
}

json soliton_report_to_json(const SolitonReport& rep) {
    json j;
    j["xi_star"] = json::array();
    for (int i = 0; i < rep.xi_star.size(); ++i) j["xi_star"].push_back(rep.xi_star[i]);
    j["residual"] = rep.residual;
    j["iters"] = rep.newton_iters;
    j["table"] = json::array();
    for (const auto& row : rep.convergence_table) {
        json jr;
        jr["m"] = row.m;
        jr["df_disc"] = row.df_disc;
        jr["df_cont"] = row.df_cont;
        jr["gap"] = row.gap;
        j["table"].push_back(jr);
    }
    return j;
}

EquivariantWeightTable weight_table_from_json(const json& j) {
    EquivariantWeightTable table;
    for (const auto& jl : j.at("levels")) {
        const int m = jl.at("m").get<int>();
        auto& level = table.levels[m];
        for (const auto& jw : jl.at("weights")) {
            level.emplace_back(int_vector(jw.at("u")), jw.at("mult").get<long long>());
        }
    }
    return table;
}

TorusRepPoint rep_from_json(const json& j) {
    TorusRepPoint rp;
    rp.k = j.at("k").get<int>();
    for (const auto& w : j.at("weights")) {
        auto v = int_vector(w);
        if ((int)v.size() != rp.k) throw std::invalid_argument("weight dimension mismatch");
        rp.weights.push_back(std::move(v));
    }
    for (const auto& z : j.at("point")) {
        if (!z.is_array() || z.size() != 2)
            throw std::invalid_argument("point entries must be [re, im] pairs");
        rp.point.emplace_back(z[0].get<double>(), z[1].get<double>());
    }
    if (rp.point.size() != rp.weights.size())
        throw std::invalid_argument("point and weight counts differ");
    return rp;
}

json stability_to_json(const StabilityVerdict& v) {
    json j;
    switch (v.verdict) {
        case Stability::polystable: j["verdict"] = "polystable"; break;
        case Stability::semistable_not_polystable:
            j["verdict"] = "semistable_not_polystable";
            break;
        case Stability::unstable: j["verdict"] = "unstable"; break;
    }
    if (v.verdict == Stability::polystable) {
        json pt = json::array();
        for (const auto& z : v.zero_moment_point)
            pt.push_back(json::array({z.real(), z.imag()}));
        j["zero_moment_point"] = pt;
    } else {
        j["destabilizer"] = v.destabilizer;
    }
    return j;
}

std::string lattice_points_csv(const MomentPolytope& P, int m_max) {
    std::ostringstream os;
    os << "m";
    for (int i = 0; i < P.dim(); ++i) os << ",u" << (i + 1);
    os << "\n";
    for (int m = 1; m <= m_max; ++m) {
        for (const auto& u : P.lattice_points(m)) {
            os << m;
            for (long long c : u) os << "," << c;
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace krs
