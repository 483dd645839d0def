#include <CLI11.hpp>
#include <Eigen/Dense>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "krs/character.hpp"
#include "krs/json_io.hpp"
#include "krs/kempfness.hpp"
#include "krs/momentmap.hpp"
#include "krs/polytope.hpp"
#include "krs/soliton.hpp"

namespace {

using krs::json;

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(output_path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output file " + output_path);
    os << text;
}

void emit_json(const json& j, const std::string& output_path) {
    emit(j.dump(2) + "\n", output_path);
}

json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open input file " + path);
    return json::parse(is);
}

krs::MomentPolytope load_polytope(const std::string& input, const std::string& example) {
    if (!example.empty() && !input.empty())
        throw std::invalid_argument("give either --input or --example, not both");
    if (!example.empty())
        return krs::MomentPolytope::anticanonical(krs::example_rays(example));
    if (!input.empty()) return krs::polytope_from_json(read_json_file(input));
    throw std::invalid_argument("need --input or --example");
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("bad number \"" + tok + "\"");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty vector argument");
    return out;
}

std::vector<long long> parse_longs(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        long long v = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("bad integer \"" + tok + "\"");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty vector argument");
    return out;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    Eigen::VectorXd x(v.size());
    for (size_t i = 0; i < v.size(); ++i) x[(Eigen::Index)i] = v[i];
    return x;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

struct CheckRow {
    std::string name;
    double residual;
    double tolerance;
};

int emit_verification(const std::string& suite, const std::vector<CheckRow>& rows,
                      const std::string& output_path) {
    json j;
    j["suite"] = suite;
    j["checks"] = json::array();
    bool all_pass = true;
    for (const auto& r : rows) {
        bool pass = r.residual <= r.tolerance;
        all_pass = all_pass && pass;
        json jc;
        jc["name"] = r.name;
        jc["residual"] = r.residual;
        jc["tolerance"] = r.tolerance;
        jc["pass"] = pass;
        j["checks"].push_back(jc);
    }
    j["pass"] = all_pass;
    emit_json(j, output_path);
    return all_pass ? 0 : 1;
}

int run_polytope(const std::string& input, const std::string& example,
                 const std::string& output, const std::string& format, int m_max) {
    auto P = load_polytope(input, example);
    if (format == "csv") {
        emit(krs::lattice_points_csv(P, m_max), output);
    } else {
        emit_json(krs::polytope_to_json(P), output);
    }
    return 0;
}

int run_character(const std::string& input, const std::string& example,
                  const std::string& output, const std::string& format, int m_max) {
    auto P = load_polytope(input, example);
    auto chi = krs::hilbert_character(P, m_max);
    if (format == "csv") {
        emit(krs::character_to_csv(chi), output);
    } else {
        emit_json(krs::character_to_json(chi), output);
    }
    return 0;
}

int run_df(const std::string& input, const std::string& example,
           const std::string& weight_table, const std::string& output,
           const std::string& format, const std::string& xi_arg,
           const std::string& lambda_arg, int m_max) {
    if (!weight_table.empty()) {
        auto table = krs::weight_table_from_json(read_json_file(weight_table));
        Eigen::VectorXd xi = to_eigen(parse_doubles(xi_arg.empty() ? "0" : xi_arg));
        auto est = krs::df_from_weight_table(table, xi, m_max);
        json j;
        j["df"] = est.value;
        j["error_bar"] = est.error_bar;
        j["per_level"] = json::array();
        for (const auto& [m, v] : est.per_level)
            j["per_level"].push_back(json{{"m", m}, {"df", v}});
        emit_json(j, output);
        return 0;
    }
    auto P = load_polytope(input, example);
    Eigen::VectorXd xi = xi_arg.empty() ? Eigen::VectorXd::Zero(P.dim()).eval()
                                        : to_eigen(parse_doubles(xi_arg));
    std::vector<long long> lambda =
        lambda_arg.empty() ? std::vector<long long>(P.dim(), 0) : parse_longs(lambda_arg);
    if ((int)lambda.size() != P.dim() || xi.size() != P.dim())
        throw std::invalid_argument("xi/lambda dimension mismatch");
    Eigen::VectorXd lam_d(P.dim());
    for (int i = 0; i < P.dim(); ++i) lam_d[i] = (double)lambda[(size_t)i];
    double cont = krs::df_continuum(P, xi, lam_d);

    std::vector<int> m_list;
    if (m_max < 10) m_list.push_back(std::max(1, m_max));
    else for (int m = 10; m <= m_max; m *= 2) m_list.push_back(m);

    std::vector<std::pair<int, double>> gaps;
    std::ostringstream csv;
    csv << "m,df_disc,df_cont,gap,slope_so_far\n";
    json rows = json::array();
    for (int m : m_list) {
        double disc = krs::df_discrete(P, xi, lambda, m);
        double gap = std::abs(disc - cont);
        gaps.emplace_back(m, gap);
        std::string slope = gaps.size() >= 2 ? fmt(krs::loglog_slope(gaps)) : "";
        csv << m << "," << fmt(disc) << "," << fmt(cont) << "," << fmt(gap) << "," << slope
            << "\n";
        json jr{{"m", m}, {"df_disc", disc}, {"df_cont", cont}, {"gap", gap}};
        if (!slope.empty()) jr["slope_so_far"] = krs::loglog_slope(gaps);
        rows.push_back(jr);
    }
    if (format == "csv") emit(csv.str(), output);
    else emit_json(json{{"table", rows}}, output);
    return 0;
}

int run_xi(const std::string& input, const std::string& example, const std::string& output,
           double tol) {
    auto P = load_polytope(input, example);
    auto rep = krs::k_optimal_vector(P, tol);
    json j = krs::soliton_report_to_json(rep);
    j["kahler_einstein"] = krs::is_kahler_einstein(P);
    auto opt = krs::k_optimality_check(rep.xi_star, 1e-8);
    j["rational_rank"] = opt.rank;
    j["rank_heuristic"] = opt.heuristic;
    emit_json(j, output);
    return 0;
}

int run_verify_momentmap(const std::string& output, double tol, unsigned long long seed,
                         bool inject_fault) {
    std::vector<CheckRow> rows;
    const int n_nodes = 256;
    auto S0 = krs::reduced_structure(n_nodes, 0.0, Eigen::VectorXd::Zero(n_nodes));
    Eigen::VectorXd s = krs::reduced_scalar_curvature(S0);
    rows.push_back({"round-scalar-curvature", (s.array() - 1.0).abs().maxCoeff(), 1e-8});
    Eigen::VectorXd s00 = krs::modified_scalar_curvature(S0, 0.0);
    rows.push_back({"round-modified-curvature", s00.array().abs().maxCoeff(), 1e-8});

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        double xi_c = 0.5 * unif(rng);
        double cv2 = unif(rng), cv3 = unif(rng), cv4 = unif(rng);
        double cf1 = unif(rng), cf2 = unif(rng), cf3 = unif(rng);
        double ca2 = unif(rng), ca3 = unif(rng), ca4 = unif(rng);
        Eigen::VectorXd v(n_nodes), f(n_nodes), a(n_nodes);
        for (int i = 0; i < n_nodes; ++i) {
            double x = S0.x[i];
            v[i] = 0.02 * (cv2 * x * x + cv3 * x * x * x + cv4 * x * x * x * x);
            f[i] = cf1 * x + cf2 * x * x + cf3 * x * x * x;
            a[i] = 0.1 * (ca2 * x * x + ca3 * x * x * x + ca4 * x * x * x * x);
        }
        auto S = krs::reduced_structure(n_nodes, xi_c, v);
        auto chk = krs::moment_map_derivative_check(S, f, a, 1e-4);
        if (inject_fault) {
            // negative control: misstate the direct-quadrature side by 50%
            chk.rhs *= 1.5;
            chk.rel_err = std::abs(chk.lhs - chk.rhs) /
                          std::max({std::abs(chk.lhs), std::abs(chk.rhs), 1e-12});
        }
        rows.push_back({"derivative-identity-" + std::to_string(trial), chk.rel_err, tol});
    }
    return emit_verification("momentmap", rows, output);
}

int run_verify_appendixb(const std::string& output, double tol, int seeds,
                         bool inject_fault) {
    double worst_rule = 0.0, worst_id = 0.0, worst_fd = 0.0;
    for (int n = 1; n <= 4; ++n) {
        for (int s = 0; s < seeds; ++s) {
            auto fr = krs::random_compatible_frame(n, 1000ull * (unsigned)n + (unsigned)s);
            if (inject_fault) fr.dtheta.array() += 1e-3;
            for (const auto& r : krs::check_tensor_rules(fr))
                worst_rule = std::max(worst_rule, r.residual);
            for (const auto& r : krs::check_pointwise_identities(fr)) {
                if (r.name == "metric-variation") worst_fd = std::max(worst_fd, r.residual);
                else worst_id = std::max(worst_id, r.residual);
            }
        }
    }
    std::vector<CheckRow> rows = {{"tensor-rules", worst_rule, tol},
                                  {"pointwise-identities", worst_id, tol},
                                  {"metric-variation-fd", worst_fd, 1e-6}};
    return emit_verification("appendixb", rows, output);
}

int run_git(const std::string& input, const std::string& output, bool assert_polystable) {
    if (input.empty()) throw std::invalid_argument("need --input with a representation file");
    auto rp = krs::rep_from_json(read_json_file(input));
    auto verdict = krs::polystable(rp);
    json j = krs::stability_to_json(verdict);
    Eigen::VectorXd mu = krs::linear_moment_map(rp);
    j["moment_norm"] = mu.norm();
    int rc = 0;
    if (verdict.verdict == krs::Stability::polystable) {
        krs::TorusRepPoint at_zero = rp;
        at_zero.point = verdict.zero_moment_point;
        double residual = krs::linear_moment_map(at_zero).norm();
        j["zero_moment_residual"] = residual;
        auto lemma = krs::sze_lemma_bound_check(rp, 1.0);
        j["lemma"] = {{"applicable", lemma.applicable},
                      {"holds", lemma.holds},
                      {"lambda", lemma.lambda},
                      {"v_star_norm", lemma.v_star_norm}};
        if (residual > 1e-8) rc = 1;
    } else if (assert_polystable) {
        rc = 1;
    }
    j["scaling_deviation"] = krs::scaling_expansion_check(rp, {0.5, 1.0, 2.0, 3.0});
    emit_json(j, output);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toric K-stability toolkit: Hilbert characters, modified "
                 "Donaldson-Futaki invariants, K-optimal vectors, moment-map and "
                 "Kempf-Ness verification"};
    app.require_subcommand(1);

    std::string input, example, output, weight_table, xi_arg, lambda_arg;
    std::string format = "json";
    int m_max = 1;
    int df_m_max = 160;
    double xi_tol = 1e-10;
    double vm_tol = 1e-4;
    double ab_tol = 1e-10;
    unsigned long long seed = 1;
    int seeds = 100;
    bool inject_fault = false;
    bool assert_polystable = false;

    auto add_source = [&](CLI::App* cmd) {
        cmd->add_option("--input", input, "input JSON file");
        cmd->add_option("--example", example, "built-in example: cp1, cp2, bl1cp2, p1xp1");
        cmd->add_option("--output", output, "output file (default stdout)");
    };
    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    auto* c_poly = app.add_subcommand("polytope", "H-rep, vertices, volume, barycenter");
    add_source(c_poly);
    add_format(c_poly);
    c_poly->add_option("--m-max", m_max, "lattice dump levels for csv output");

    auto* c_char = app.add_subcommand("character", "weight multiplicities of level m sections");
    add_source(c_char);
    add_format(c_char);
    c_char->add_option("--m-max", m_max, "character level");

    auto* c_df = app.add_subcommand("df", "Donaldson-Futaki convergence study");
    add_source(c_df);
    add_format(c_df);
    c_df->add_option("--weight-table", weight_table, "equivariant weight table JSON");
    c_df->add_option("--xi", xi_arg, "soliton vector, comma separated");
    c_df->add_option("--lambda", lambda_arg, "test configuration weight, comma separated");
    c_df->add_option("--m-max", df_m_max, "largest level (doubling from 10)");

    auto* c_xi = app.add_subcommand("xi", "K-optimal soliton vector");
    add_source(c_xi);
    c_xi->add_option("--tol", xi_tol, "gradient tolerance");

    auto* c_vm = app.add_subcommand("verify-momentmap", "reduced moment-map derivative checks");
    c_vm->add_option("--output", output, "output file (default stdout)");
    c_vm->add_option("--tol", vm_tol, "relative error tolerance");
    c_vm->add_option("--seed", seed, "RNG seed");
    c_vm->add_flag("--inject-fault", inject_fault, "negative control: mismatched variation");

    auto* c_ab = app.add_subcommand("verify-appendixb", "tensor rules and integrand identities");
    c_ab->add_option("--output", output, "output file (default stdout)");
    c_ab->add_option("--tol", ab_tol, "algebraic residual tolerance");
    c_ab->add_option("--seeds", seeds, "random frames per dimension");
    c_ab->add_flag("--inject-fault", inject_fault, "negative control: broken Hamiltonian covector");

    auto* c_git = app.add_subcommand("git", "finite-dimensional stability sandbox");
    c_git->add_option("--input", input, "representation JSON file");
    c_git->add_option("--output", output, "output file (default stdout)");
    c_git->add_flag("--assert-polystable", assert_polystable,
                    "exit nonzero unless the point is polystable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_poly->parsed()) return run_polytope(input, example, output, format, m_max);
        if (c_char->parsed()) return run_character(input, example, output, format, m_max);
        if (c_df->parsed())
            return run_df(input, example, weight_table, output, format, xi_arg, lambda_arg,
                          df_m_max);
        if (c_xi->parsed()) return run_xi(input, example, output, xi_tol);
        if (c_vm->parsed()) return run_verify_momentmap(output, vm_tol, seed, inject_fault);
        if (c_ab->parsed()) return run_verify_appendixb(output, ab_tol, seeds, inject_fault);
        if (c_git->parsed()) return run_git(input, output, assert_polystable);
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
