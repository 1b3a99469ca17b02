#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "ppi/correlation.hpp"
#include "ppi/risk.hpp"
#include "ppi/single_obs.hpp"

using namespace ppi;

namespace {

std::vector<double> log_grid(double a, double b, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a * std::pow(b / a, double(i) / (n - 1));
    return g;
}

const CostMatrix kUniform = CostMatrix::uniform();

}  // namespace

TEST_CASE("risk against reference values") {
    const auto p = oracle::fig1();
    for (const auto& row : oracle::frozen::fig1) {
        const auto e = type_errors(p, row.r);
        CHECK(e.p_I == doctest::Approx(row.pI).epsilon(1e-11));
        CHECK(e.p_II == doctest::Approx(row.pII).epsilon(1e-11));
    }
}

TEST_CASE("identity rule risk matches the closed form") {
    const auto p = oracle::fig1().with_eta(3e-6);
    const CostMatrix c{0.2, 3.0, 1.5, 0.1};
    for (double r : {1.0, 10.0, 25.0, 60.0, 200.0}) {
        const auto t = abc_terms(p, r);
        const double closed = c.c00 + (c.c01 - c.c00) * std::exp(-t.A) + (c.c10 - c.c00) * std::exp(-t.B) +
                              (c.c11 + c.c00 - c.c10 - c.c01) * std::exp(-t.A - t.C);
        CHECK(bayes_risk(p, c, r) == doctest::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("uniform cost risk is the average error probability") {
    const auto p = oracle::fig1();
    const double pH = prior_success(p);
    for (double r : log_grid(0.1, 1e4, 200)) {
        const auto e = type_errors(p, r);
        CHECK(std::abs(bayes_risk(p, kUniform, r) - (e.p_I * (1 - pH) + e.p_II * pH)) < 1e-12);
    }
}

TEST_CASE("risk limits at extreme radii") {
    for (const auto& p : {oracle::fig1(), oracle::fig4(), oracle::fig1().with_eta(1e-5)}) {
        const double pH = prior_success(p);
        CHECK(std::abs(bayes_risk(p, kUniform, 1e-4 * p.r_T()) - (1 - pH)) < 1e-6);
        CHECK(std::abs(bayes_risk(p, kUniform, 1e4 * p.r_T()) - pH) < 1e-6);
    }
}

TEST_CASE("joint table sums to one") {
    const auto p = oracle::fig1();
    for (double r : log_grid(1e-3, 1e5, 100)) {
        const auto j = joint_hd(p, r);
        CHECK(j.h1d1 + j.h0d1 + j.h1d0 + j.h0d0 == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(j.p_h1() == doctest::Approx(prior_success(p)).epsilon(1e-12));
    }
}

TEST_CASE("type errors for constant rules") {
    const auto p = oracle::fig1();
    const auto one = type_errors(p, 30.0, {1, 1});
    CHECK(one.p_I == doctest::Approx(1.0));
    CHECK(one.p_II == 0.0);
    const auto zero = type_errors(p, 30.0, {0, 0});
    CHECK(zero.p_I == 0.0);
    CHECK(zero.p_II == doctest::Approx(1.0));
    const auto id = type_errors(p, 30.0);
    const auto flip = type_errors(p, 30.0, {1, 0});
    CHECK(flip.p_I == doctest::Approx(1 - id.p_I));
    CHECK(flip.p_II == doctest::Approx(1 - id.p_II));
}

TEST_CASE("identity type errors match the posterior expressions") {
    const auto p = oracle::fig1();
    const double pH = prior_success(p);
    for (double r : {5.0, 20.0, 45.0}) {
        const double pD = evidence_success(p, r);
        const double p11 = posterior(p, r).p_h1_d1;
        const auto e = type_errors(p, r);
        CHECK(e.p_I == doctest::Approx((1 - p11) * pD / (1 - pH)).epsilon(1e-12));
        CHECK(e.p_II == doctest::Approx(1 - p11 * pD / pH).epsilon(1e-12));
    }
}

TEST_CASE("optimal radius") {
    const auto p = oracle::fig1();
    const auto opt = optimal_radius(p, kUniform);
    REQUIRE(opt.interior);
    CHECK(opt.r_O == doctest::Approx(oracle::frozen::r_star_fig2).epsilon(1e-11));
    CHECK(opt.risk == doctest::Approx(oracle::frozen::risk_star_fig2).epsilon(1e-12));
    CHECK(std::abs(opt.residual) < 1e-10);
    CHECK(std::abs(opt.risk - bayes_risk(p, kUniform, opt.r_O)) < 1e-12);

    // dense grid brute force
    double best_r = 0, best = 1e9;
    for (double r = 5.0; r < 60.0; r += 0.001) {
        const double v = bayes_risk(p, kUniform, r);
        if (v < best) {
            best = v;
            best_r = r;
        }
    }
    CHECK(std::abs(best_r - opt.r_O) <= 0.001);
    CHECK(opt.risk <= best + 1e-15);
}

TEST_CASE("optimal radius with general costs and noise") {
    const CostMatrix c{0.1, 2.0, 1.0, 0.3};
    const auto p = oracle::fig1().with_eta(2e-5);
    const auto opt = optimal_radius(p, c);
    REQUIRE(opt.interior);
    CHECK(std::abs(opt.residual) < 1e-10);
    CHECK(std::abs(opt.risk - bayes_risk(p, c, opt.r_O)) < 1e-12);
    CHECK(bayes_risk(p, c, opt.r_O * 1.01) > opt.risk);
    CHECK(bayes_risk(p, c, opt.r_O * 0.99) > opt.risk);
}

TEST_CASE("no interior optimum when noise dominates") {
    // log 2 <= sigma eta
    const auto p = oracle::fig1().with_eta(2e-4);
    const auto opt = optimal_radius(p, kUniform);
    CHECK_FALSE(opt.interior);
    CHECK(std::isinf(opt.r_O));
    CHECK(opt.risk == doctest::Approx(prior_success(p)).epsilon(1e-12));
    CHECK(opt.risk <= bayes_risk(p, kUniform, 1e3) + 1e-15);
}

TEST_CASE("optimization preconditions") {
    CHECK_THROWS_AS(optimal_radius(oracle::fig1(), CostMatrix{1, 1, 1, 1}), ParamError);
    CHECK_THROWS_AS(optimal_radius(oracle::fig1(), CostMatrix{0, 1, -1, 0}), ParamError);
    CHECK_THROWS_AS(sensitivities(oracle::fig1().with_eta(1e-6), kUniform), ParamError);
}

TEST_CASE("sensitivities match finite differences") {
    for (const auto& p : {oracle::fig1(), ModelParams(2, 1e-3, 4.0, 2.0, 5.0), ModelParams(3, 1e-5, 4.0, 3.0, 8.0)}) {
        const auto s = sensitivities(p, kUniform);
        CHECK(s.d_lambda > 0);
        CHECK(s.d_sigma > 0);
        const double hl = 1e-4 * p.lambda();
        const double fd_l = (optimal_radius(p.with_lambda(p.lambda() + hl), kUniform).r_O -
                             optimal_radius(p.with_lambda(p.lambda() - hl), kUniform).r_O) /
                            (2 * hl);
        CHECK(std::abs(fd_l - s.d_lambda) < 1e-5 * std::abs(s.d_lambda));
        // sigma is proportional to beta
        const double hb = 1e-4 * p.beta();
        const double sig = derive(p).sigma;
        const double ds = sig * (2 * hb) / p.beta();
        const double fd_s = (optimal_radius(p.with_beta(p.beta() + hb), kUniform).r_O -
                             optimal_radius(p.with_beta(p.beta() - hb), kUniform).r_O) /
                            ds;
        CHECK(std::abs(fd_s - s.d_sigma) < 1e-5 * std::abs(s.d_sigma));
    }
}

TEST_CASE("operating points") {
    const auto p = oracle::fig1();
    const auto op = operating_points(p);
    REQUIRE(op.r_DI.has_value());
    CHECK(*op.r_DI == doctest::Approx(oracle::frozen::r_DI_fig1).epsilon(1e-13));
    CHECK(op.r_MM == doctest::Approx(oracle::frozen::r_MM_fig1).epsilon(1e-13));
    CHECK(op.r_EE == doctest::Approx(oracle::frozen::r_EE_fig1).epsilon(1e-11));
    const auto e = type_errors(p, op.r_EE);
    CHECK(std::abs(e.p_I - e.p_II) < 1e-9);
    CHECK(evidence_success(p, op.r_MM) == doctest::Approx(prior_success(p)).epsilon(1e-12));
    CHECK(p.r_T() <= *op.r_DI);
    CHECK(*op.r_DI <= op.r_MM);
}

TEST_CASE("operating point ordering across scenarios") {
    for (int n = 1; n <= 3; ++n)
        for (double beta : {1.0, 2.0, 10.0})
            for (double eta : {0.0, 1e-6}) {
                const ModelParams p(n, 1e-4, n + 1.5, beta, 5.0, eta);
                const auto op = operating_points(p);
                REQUIRE(op.r_DI.has_value());
                CHECK(p.r_T() <= *op.r_DI * (1 + 1e-14));
                CHECK(*op.r_DI <= op.r_MM);
            }
    const auto noisy = operating_points(oracle::fig1().with_eta(2.1e-4));
    CHECK_FALSE(noisy.r_DI.has_value());
    const auto e = type_errors(oracle::fig1().with_eta(2.1e-4), noisy.r_EE);
    CHECK(std::abs(e.p_I - e.p_II) < 1e-9);
}

TEST_CASE("risk has a single local minimum on a fine grid") {
    const auto p = oracle::fig1();
    const auto grid = log_grid(0.1, 1e4, 1000);
    int minima = 0;
    std::vector<double> R;
    for (double r : grid) R.push_back(bayes_risk(p, kUniform, r));
    for (size_t i = 1; i + 1 < R.size(); ++i)
        if (R[i] < R[i - 1] && R[i] < R[i + 1]) ++minima;
    CHECK(minima == 1);
}

TEST_CASE("identity rule beats the other three at the optimum") {
    const auto p = oracle::fig1();
    const double r = optimal_radius(p, kUniform).r_O;
    const double id = bayes_risk(p, kUniform, r);
    for (SingleObsRule g : {SingleObsRule{0, 0}, SingleObsRule{1, 1}, SingleObsRule{1, 0}})
        CHECK(bayes_risk(p, kUniform, r, g) > id);
}

TEST_CASE("ROC curve") {
    const auto p = oracle::fig1();
    const auto grid = log_grid(0.01, 1e4, 300);
    const auto roc = roc_curve(p, grid);
    REQUIRE(roc.size() == grid.size());
    CHECK(roc.front().p_I == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(roc.front().p_II < 1e-6);
    CHECK(roc.back().p_I < 1e-6);
    CHECK(roc.back().p_II == doctest::Approx(1.0).epsilon(1e-6));
    for (size_t i = 1; i < roc.size(); ++i) {
        CHECK(roc[i].p_I <= roc[i - 1].p_I);
        CHECK(roc[i].risk == bayes_risk(p, kUniform, grid[i]));
    }
    CHECK_THROWS(roc_curve(p, {1.0, 1.0}));
    CHECK_THROWS(roc_curve(p, {0.0, 1.0}));
}

TEST_CASE("minimum risk radius is close to the maximum correlation radius") {
    const auto p = oracle::fig1();
    const double r_risk = optimal_radius(p, kUniform).r_O;
    const double r_corr = radius_of_chi(derive(p), chi_star(p).chi);
    CHECK(std::abs(r_risk - r_corr) / r_corr < 0.2);
}
