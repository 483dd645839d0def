#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <stdexcept>

#include "krs/json_io.hpp"
#include "krs/polytope.hpp"

using namespace krs;

namespace {

MomentPolytope example(const char* name) {
    return MomentPolytope::anticanonical(example_rays(name));
}

long long count(const MomentPolytope& P, int m) {
    return (long long)P.lattice_points(m).size();
}

}  // namespace

TEST_CASE("interval from the two rays of the projective line") {
    auto P = example("cp1");
    CHECK(P.dim() == 1);
    CHECK(P.vertices().size() == 2);
    CHECK(P.volume() == Rat(2));
    CHECK(P.barycenter()[0] == Rat(0));
    CHECK(P.lattice_points(1) == std::vector<std::vector<long long>>{{-1}, {0}, {1}});
    CHECK(count(P, 2) == 5);
    CHECK(count(P, 50) == 101);
}

TEST_CASE("plane examples: volume, barycenter, vertices, counts") {
    auto cp2 = example("cp2");
    CHECK(cp2.volume() == Rat(9) / 2);
    CHECK(cp2.barycenter() == RatVec{Rat(0), Rat(0)});
    CHECK(cp2.vertices().size() == 3);
    CHECK(count(cp2, 1) == 10);
    CHECK(count(cp2, 2) == 28);

    auto bl = example("bl1cp2");
    CHECK(bl.volume() == Rat(4));
    CHECK(bl.barycenter() == RatVec{Rat(1) / 12, Rat(1) / 12});
    CHECK(bl.vertices().size() == 4);
    CHECK(count(bl, 1) == 9);

    auto pp = example("p1xp1");
    CHECK(pp.volume() == Rat(4));
    CHECK(pp.barycenter() == RatVec{Rat(0), Rat(0)});
    CHECK(count(pp, 3) == 49);
}

TEST_CASE("Ehrhart counts match the closed forms") {
    auto cp2 = example("cp2");
    auto bl = example("bl1cp2");
    for (int m = 1; m <= 6; ++m) {
        CHECK(count(cp2, m) == (3 * m + 1) * (3 * m + 2) / 2);
        // area 4, 8 boundary points: (2m+1)^2 by Pick's theorem
        CHECK(count(bl, m) == (2 * m + 1) * (2 * m + 1));
    }
}

TEST_CASE("leading Ehrhart finite difference recovers n! vol") {
    auto cp2 = example("cp2");
    // second difference of a degree-2 polynomial is constant 2 * lead
    long long d2 = count(cp2, 3) - 2 * count(cp2, 2) + count(cp2, 1);
    CHECK(Rat(d2) == Rat(2) * cp2.volume());
    auto bl = example("bl1cp2");
    d2 = count(bl, 4) - 2 * count(bl, 3) + count(bl, 2);
    CHECK(Rat(d2) == Rat(2) * bl.volume());
}

TEST_CASE("unimodular change of rays preserves volume and counts") {
    auto bl = example("bl1cp2");
    // rays v -> U v with U = [[1,1],[0,1]]
    std::vector<std::vector<long long>> rays;
    for (const auto& v : example_rays("bl1cp2")) rays.push_back({v[0] + v[1], v[1]});
    auto blU = MomentPolytope::anticanonical(rays);
    CHECK(blU.volume() == bl.volume());
    for (int m = 1; m <= 4; ++m) CHECK(count(blU, m) == count(bl, m));
}

TEST_CASE("exponential moments of the interval at xi = 1") {
    auto P = example("cp1");
    Eigen::VectorXd xi(1);
    xi << 1.0;
    auto M = P.exp_moments(xi);
    // int e^t = e - 1/e, int t e^t = 2/e, int t^2 e^t over [-1,1]
    CHECK(M.value == doctest::Approx(2.3504023872876).epsilon(1e-12));
    CHECK(M.gradient[0] == doctest::Approx(0.735758882342885).epsilon(1e-12));
    CHECK(M.hessian(0, 0) == doctest::Approx(0.878884622601834).epsilon(1e-12));
}

TEST_CASE("moment value at xi = 0 is the volume, gradient the first moment") {
    for (const char* name : {"cp2", "bl1cp2", "p1xp1"}) {
        auto P = example(name);
        auto M = P.exp_moments(Eigen::VectorXd::Zero(2));
        CHECK(M.value ==
              doctest::Approx((double)Rat(P.volume()).convert_to<double>()).epsilon(1e-13));
        auto bc = P.barycenter();
        for (int i = 0; i < 2; ++i)
            CHECK(M.gradient[i] == doctest::Approx(M.value * bc[(size_t)i].convert_to<double>())
                                       .epsilon(1e-12));
    }
}

TEST_CASE("finite differences confirm the moment gradient and hessian") {
    auto P = example("bl1cp2");
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-0.8, 0.8);
    const double h = 1e-5;
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd xi(2);
        xi << U(rng), U(rng);
        auto M = P.exp_moments(xi);
        for (int i = 0; i < 2; ++i) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(2);
            e[i] = h;
            double fd = (P.exp_moments(xi + e).value - P.exp_moments(xi - e).value) / (2 * h);
            CHECK(M.gradient[i] == doctest::Approx(fd).epsilon(1e-7));
            double fd2 = (P.exp_moments(xi + e).gradient[i] -
                          P.exp_moments(xi - e).gradient[i]) / (2 * h);
            CHECK(M.hessian(i, i) == doctest::Approx(fd2).epsilon(1e-7));
        }
    }
}

TEST_CASE("moment hessian is positive definite") {
    for (const char* name : {"cp2", "bl1cp2", "p1xp1"}) {
        auto P = example(name);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        for (int trial = 0; trial < 5; ++trial) {
            Eigen::VectorXd xi(2);
            xi << U(rng), U(rng);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P.exp_moments(xi).hessian);
            CHECK(es.eigenvalues().minCoeff() > 0.0);
        }
    }
}

TEST_CASE("divided differences of exp: exact formulas and cluster limit") {
    CHECK(exp_divided_difference({0.3}) == doctest::Approx(std::exp(0.3)).epsilon(1e-14));
    double a = 0.7, b = -0.2;
    CHECK(exp_divided_difference({a, b}) ==
          doctest::Approx((std::exp(a) - std::exp(b)) / (a - b)).epsilon(1e-13));
    CHECK(exp_divided_difference({0.0, 0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(exp_divided_difference({0.4, 0.4}) == doctest::Approx(std::exp(0.4)).epsilon(1e-14));
    // continuity across the clustered-node switch
    double near = exp_divided_difference({0.3, 0.3 + 1e-9, 0.3 - 1e-9});
    CHECK(near == doctest::Approx(std::exp(0.3) / 2.0).epsilon(1e-7));
}

TEST_CASE("general H-rep: interval [-1, 2]") {
    std::vector<Facet> facets = {{{1}, Rat(-1)}, {{-1}, Rat(-2)}};
    auto P = MomentPolytope::from_facets(1, facets);
    CHECK(P.volume() == Rat(3));
    CHECK(P.barycenter()[0] == Rat(1) / 2);
    CHECK(count(P, 2) == 7);
}

TEST_CASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(MomentPolytope::anticanonical({{2}}), std::invalid_argument);
    CHECK_THROWS_AS(MomentPolytope::anticanonical({{1, 0}, {1, 0}, {0, 1}, {-1, -1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(MomentPolytope::anticanonical({{1, 0}, {0, 1}}), std::runtime_error);
    // half-space: unbounded
    CHECK_THROWS_AS(MomentPolytope::from_facets(1, {{{1}, Rat(-1)}}), std::runtime_error);
    // slab in the plane: not full-dimensional vertex set
    std::vector<Facet> slab = {{{1, 0}, Rat(0)}, {{-1, 0}, Rat(0)},
                               {{0, 1}, Rat(-1)}, {{0, -1}, Rat(-1)}};
    CHECK_THROWS_AS(MomentPolytope::from_facets(2, slab), std::runtime_error);
    auto P = MomentPolytope::anticanonical(example_rays("cp1"));
    CHECK_THROWS_AS(P.lattice_points(0), std::invalid_argument);
    CHECK_THROWS_AS(P.exp_moments(Eigen::VectorXd::Zero(2)), std::invalid_argument);
}
