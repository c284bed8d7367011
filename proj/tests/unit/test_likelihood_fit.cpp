#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grid_oracle.hpp"
#include "oracles.hpp"

#include <invcure/error.hpp>
#include <invcure/fit.hpp>
#include <invcure/kernel.hpp>
#include <invcure/likelihood.hpp>
#include <invcure/logistic.hpp>
#include <invcure/monte_carlo.hpp>
#include <invcure/rng.hpp>
#include <invcure/simulation.hpp>

#include <cmath>
#include <numeric>
#include <random>

using namespace invcure;

namespace {

std::vector<oracle::Rec> as_records(const SurvivalDataset& data) {
    std::vector<oracle::Rec> out;
    for (const auto& r : data) out.push_back({r.time, r.status, r.x});
    return out;
}

SurvivalDataset small_design(std::size_t n, std::uint64_t seed, CureScenario sc = CureScenario::cure20) {
    return simulate(standard_design(sc, 0.0, n, seed));
}

Beta central_difference(const LikelihoodModel& m, const Beta& b, double step) {
    Beta fd;
    for (int k = 0; k < 2; ++k) {
        Beta up = b, dn = b;
        up[k] += step;
        dn[k] -= step;
        fd[k] = (m.loglik(up).value - m.loglik(dn).value) / (2.0 * step);
    }
    return fd;
}

} // namespace

TEST_CASE("loglik: no censoring, uniform weights, phi = 1 gives -n log n") {
    std::vector<Observation> obs;
    for (int i = 0; i < 7; ++i) obs.push_back({1.0 + i, 1, -0.9 + 0.3 * i});
    const SurvivalDataset data(obs);
    const KernelSpec wide(10.0, KernelFamily::rectangular);
    for (auto tail : {LatencyTail::defective, LatencyTail::proper}) {
        const LikelihoodModel m(data, wide, CureLink::constant(1.0), tail);
        CHECK(m.loglik(Beta(0.3, -2.0)).value == doctest::Approx(-7.0 * std::log(7.0)).epsilon(1e-13));
        CHECK(m.loglik(Beta(0.3, -2.0)).floor_events == 0);
    }
}

TEST_CASE("loglik: all censored with a constant link is 0") {
    const SurvivalDataset data({{1.0, 0, 0.0}, {2.0, 0, 0.3}, {0.5, 0, -0.2}});
    for (double c : {0.2, 0.7, 1.0}) {
        const LikelihoodModel m(data, KernelSpec(2.0), CureLink::constant(c));
        CHECK(std::abs(m.loglik(Beta(1.0, 1.0)).value) <= 1e-15);
    }
}

TEST_CASE("loglik doubles when every record is duplicated") {
    const auto data = small_design(60, 5);
    const auto twice = repeat_rows(data, 2);
    const KernelSpec spec(fixed_bandwidth(3.0, data.size()));
    const LikelihoodModel a(data, spec, CureLink::logistic());
    const LikelihoodModel b(twice, spec, CureLink::logistic());
    for (const Beta& beta : {Beta(1.75, 2.0), Beta(0.0, 0.0), Beta(-1.0, 3.0), Beta(4.0, -2.0)})
        CHECK(b.loglik(beta).value == doctest::Approx(2.0 * a.loglik(beta).value).epsilon(1e-12));
}

TEST_CASE("loglik agrees with the brute-force formula") {
    std::mt19937_64 g(41);
    std::uniform_real_distribution<double> ub(-3.0, 3.0);
    for (int rep = 0; rep < 40; ++rep) {
        const auto data = small_design(10 + rep % 20, 1000 + rep, rep % 2 ? CureScenario::cure20 : CureScenario::cure30);
        const double h = fixed_bandwidth(3.0, data.size());
        const auto recs = as_records(data);
        for (auto tail : {LatencyTail::defective, LatencyTail::proper}) {
            const LikelihoodModel m(data, KernelSpec(h), CureLink::logistic(), tail);
            for (int k = 0; k < 3; ++k) {
                const Beta b(ub(g), ub(g));
                const double ref = oracle::loglik(recs, h, b[0], b[1], tail == LatencyTail::proper);
                CHECK(m.loglik(b).value == doctest::Approx(ref).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("the defective-tail likelihood is flat in beta; the proper one is not") {
    const auto data = small_design(400, 8);
    const KernelSpec spec(fixed_bandwidth(3.0, data.size()));
    const LikelihoodModel defective(data, spec, CureLink::logistic(), LatencyTail::defective);
    const LikelihoodModel proper(data, spec, CureLink::logistic(), LatencyTail::proper);
    // Away from capped increments the defective criterion does not move.
    const double d0 = defective.loglik(Beta(2.0, 2.0)).value;
    const double d1 = defective.loglik(Beta(2.5, 2.0)).value;
    if (defective.loglik(Beta(2.0, 2.0)).floor_events == 0 && defective.loglik(Beta(2.5, 2.0)).floor_events == 0)
        CHECK(d0 == doctest::Approx(d1).epsilon(1e-9));
    CHECK(std::abs(proper.loglik(Beta(2.0, 2.0)).value - proper.loglik(Beta(2.5, 2.0)).value) > 1e-3);
}

TEST_CASE("empty neighborhoods are reported with the subject index") {
    const SurvivalDataset data({{1.0, 1, -0.9}, {2.0, 0, -0.85}, {1.5, 1, 0.9}});
    // a sample point is always its own neighbor
    CHECK_NOTHROW(LikelihoodModel(data, KernelSpec(0.01), CureLink::logistic()));

    const std::vector<std::vector<double>> w{{0.5, 0.5, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
    try {
        LikelihoodModel(data, w, CureLink::logistic());
        FAIL("expected EmptyNeighborhood");
    } catch (const EmptyNeighborhood& e) {
        REQUIRE(e.subject().has_value());
        CHECK(*e.subject() == 1);
        CHECK(e.x() == -0.85);
    }
    const std::vector<std::vector<double>> short_w{{1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(LikelihoodModel(data, short_w, CureLink::logistic()), InvalidArgument);
}

TEST_CASE("explicit weights reproduce the kernel constructor") {
    const auto data = small_design(40, 12);
    const KernelSpec spec(0.6);
    std::vector<std::vector<double>> w;
    for (const auto& r : data) w.push_back(kernel_weights(data, r.x, spec));
    const LikelihoodModel a(data, spec, CureLink::logistic());
    const LikelihoodModel b(data, w, CureLink::logistic());
    for (const Beta& beta : {Beta(1.0, 1.0), Beta(-2.0, 0.5)}) {
        CHECK(a.loglik(beta).value == b.loglik(beta).value);
        CHECK(a.score(beta).gradient == b.score(beta).gradient);
    }
}

TEST_CASE("constant link gives an identically zero score") {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> ub(-5.0, 5.0);
    for (int rep = 0; rep < 20; ++rep) {
        const auto data = small_design(25, 50 + rep);
        for (auto tail : {LatencyTail::defective, LatencyTail::proper}) {
            const LikelihoodModel m(data, KernelSpec(0.8), CureLink::constant(0.6), tail);
            const auto s = m.score(Beta(ub(g), ub(g)));
            CHECK(s.gradient[0] == 0.0);
            CHECK(s.gradient[1] == 0.0);
        }
    }
}

TEST_CASE("analytic score matches central finite differences") {
    std::mt19937_64 g(17);
    std::uniform_real_distribution<double> ub1(-1.0, 3.0), ub2(-1.0, 4.0);
    std::uniform_int_distribution<int> size(5, 30);
    int checked = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto data = small_design(static_cast<std::size_t>(size(g)), 7000 + rep,
                                       rep % 2 ? CureScenario::cure20 : CureScenario::cure30);
        const KernelSpec spec(fixed_bandwidth(3.0, data.size()));
        const Beta b(ub1(g), ub2(g));
        for (auto tail : {LatencyTail::defective, LatencyTail::proper}) {
            const LikelihoodModel m(data, spec, CureLink::logistic(), tail);
            const auto s = m.score(b).gradient;
            const auto fd = central_difference(m, b, 1e-5);
            const double err = (s - fd).cwiseAbs().maxCoeff();
            CHECK_MESSAGE(err <= 1e-4 * (1.0 + s.cwiseAbs().maxCoeff()), "rep " << rep << " score " << s.transpose()
                                                                             << " fd " << fd.transpose());
            ++checked;
        }
    }
    CHECK(checked == 200);
}

TEST_CASE("first-order condition at an interior optimum") {
    // The criterion has kinks (capped hazard increments); where beta_hat sits
    // on one, only the one-sided condition fwd <= 0 <= bwd can hold.
    int smooth = 0;
    for (int r = 0; r < 12; ++r) {
        const auto data = small_design(300, substream_seed(2024, r));
        const LikelihoodModel m(data, KernelSpec(fixed_bandwidth(3.0, data.size())), CureLink::logistic());
        FitOptions opts;
        opts.tolerance = 1e-9;
        const auto res = fit(m, opts);
        REQUIRE(res.converged);
        REQUIRE_FALSE(res.at_boundary);
        const double step = 1e-7;
        bool differentiable = true;
        for (int k = 0; k < 2; ++k) {
            Beta up = res.beta_hat, dn = res.beta_hat;
            up[k] += step;
            dn[k] -= step;
            const double fwd = (m.loglik(up).value - res.loglik) / step;
            const double bwd = (res.loglik - m.loglik(dn).value) / step;
            CHECK(fwd <= 1e-4 * static_cast<double>(data.size()));
            CHECK(bwd >= -1e-4 * static_cast<double>(data.size()));
            differentiable &= std::abs(fwd - bwd) <= 1e-4 * static_cast<double>(data.size());
        }
        if (!differentiable) continue;
        ++smooth;
        CHECK(m.score(res.beta_hat).gradient.cwiseAbs().maxCoeff() <= 1e-4 * static_cast<double>(data.size()));
    }
    MESSAGE(smooth << " of 12 optima are smooth points");
    CHECK(smooth >= 3);
}

TEST_CASE("stage 1: logistic regression on the censoring indicator") {
    // constant covariate, balanced labels
    std::vector<Observation> obs;
    for (int i = 0; i < 10; ++i) obs.push_back({1.0 + i, i % 2, 0.0});
    const auto b = init_stage1(SurvivalDataset(obs), CureLink::logistic());
    CHECK(b[0] == doctest::Approx(0.0).scale(1e-12));
    CHECK(b[1] == 0.0);

    std::vector<Observation> all_events{{1.0, 1, 0.0}, {2.0, 1, 0.5}};
    CHECK_THROWS_AS(init_stage1(SurvivalDataset(all_events), CureLink::logistic()), SeparationError);
    std::vector<Observation> all_censored{{1.0, 0, 0.0}, {2.0, 0, 0.5}};
    CHECK_THROWS_AS(init_stage1(SurvivalDataset(all_censored), CureLink::logistic()), SeparationError);
    CHECK_THROWS_AS(init_stage1(SurvivalDataset(obs), CureLink::constant(0.5)), InvalidArgument);
}

TEST_CASE("stage 1 recovers logistic coefficients and matches IRLS") {
    std::mt19937_64 g(99);
    std::uniform_real_distribution<double> ux(-1.0, 1.0), uu(0.0, 1.0);
    const double b0 = 0.8, b1 = -1.5;
    std::vector<Observation> obs;
    std::vector<double> xs, ys;
    for (int i = 0; i < 10000; ++i) {
        const double x = ux(g);
        const int d = uu(g) < oracle::logistic(b0, b1, x) ? 1 : 0;
        obs.push_back({1.0, d, x});
        xs.push_back(x);
        ys.push_back(d);
    }
    const auto b = init_stage1(SurvivalDataset(obs), CureLink::logistic());
    CHECK(std::abs(b[0] - b0) <= 0.1);
    CHECK(std::abs(b[1] - b1) <= 0.1);
    const auto [r0, r1] = oracle::irls(xs, ys);
    CHECK(b[0] == doctest::Approx(static_cast<double>(r0)).epsilon(1e-8));
    CHECK(b[1] == doctest::Approx(static_cast<double>(r1)).epsilon(1e-8));
}

TEST_CASE("fit_logistic handles fractional labels and the box") {
    const std::vector<double> x{-1.0, -1.0, 1.0, 1.0};
    const std::vector<double> half{0.5, 0.5, 0.5, 0.5};
    const auto sym = fit_logistic(x, half, Beta(1.0, -1.0), ParamBox::uniform(-10, 10));
    CHECK(sym.beta.cwiseAbs().maxCoeff() <= 1e-8);
    CHECK_FALSE(sym.at_boundary);

    const std::vector<double> ones{1.0, 1.0, 1.0, 1.0};
    const auto edge = fit_logistic(x, ones, Beta::Zero(), ParamBox::uniform(-10, 10));
    CHECK(edge.at_boundary);
    CHECK(edge.beta[0] == doctest::Approx(10.0));
}

TEST_CASE("stage 2 examples") {
    const KernelSpec wide(10.0, KernelFamily::rectangular);
    // every subject's model-free plateau is 0: pi = 1 everywhere
    std::vector<Observation> all_events;
    for (int i = 0; i < 6; ++i) all_events.push_back({1.0 + i, 1, -0.5 + 0.2 * i});
    const LikelihoodModel m1(SurvivalDataset(all_events), wide, CureLink::logistic());
    for (double pi : m1.model_free_uncured()) CHECK(pi == 1.0);
    const auto s1 = init_stage2(m1, Beta::Zero());
    CHECK(s1.at_boundary);
    CHECK(s1.beta[0] == doctest::Approx(10.0));

    // plateau 0.5 everywhere, covariate symmetric: pi = 0.5, beta = (0, 0)
    const SurvivalDataset half({{1.0, 1, -1.0}, {2.0, 0, -1.0}, {1.0, 1, 1.0}, {2.0, 0, 1.0}});
    const LikelihoodModel m2(half, wide, CureLink::logistic());
    for (double pi : m2.model_free_uncured()) CHECK(pi == doctest::Approx(0.5).epsilon(1e-15));
    const auto s2 = init_stage2(m2, Beta(0.7, -0.4));
    CHECK(s2.beta.cwiseAbs().maxCoeff() <= 1e-8);
    CHECK_FALSE(s2.at_boundary);
    CHECK_THROWS_AS(init_stage2(m2, Beta(NAN, 0.0)), InvalidArgument);
}

TEST_CASE("stage 2 lands closer to the truth than stage 1") {
    const Beta truth(1.75, 2.0);
    int closer = 0;
    for (int r = 0; r < 50; ++r) {
        const auto data = small_design(300, substream_seed(606, r));
        const LikelihoodModel m(data, KernelSpec(fixed_bandwidth(3.0, data.size())), CureLink::logistic());
        const auto s1 = init_stage1(data, CureLink::logistic());
        const auto s2 = init_stage2(m, s1);
        closer += (s2.beta - truth).norm() < (s1 - truth).norm();
    }
    CHECK(closer >= 30);
}

TEST_CASE("fit never ends below its starting points") {
    for (int r = 0; r < 10; ++r) {
        const auto data = small_design(150, substream_seed(42, r));
        const LikelihoodModel m(data, KernelSpec(fixed_bandwidth(3.0, data.size())), CureLink::logistic());
        const auto res = fit(m);
        CHECK(res.loglik >= m.loglik(res.stage2).value - 1e-9);
        CHECK(res.loglik >= m.loglik(res.stage1).value - 1e-9);
        CHECK(res.loglik == m.loglik(res.beta_hat).value);
        CHECK(res.converged);
        CHECK_FALSE(res.at_boundary);
        CHECK(res.evals > 0);
    }
}

TEST_CASE("fit is deterministic and flags the box") {
    const auto data = small_design(150, 77);
    const LikelihoodModel m(data, KernelSpec(fixed_bandwidth(3.0, data.size())), CureLink::logistic());
    const auto a = fit(m);
    const auto b = fit(m);
    CHECK(a.beta_hat == b.beta_hat);
    CHECK(a.evals == b.evals);

    FitOptions tight;
    tight.box = ParamBox::uniform(-0.5, 0.5);
    const auto c = fit(m, tight);
    CHECK(c.at_boundary);
    CHECK(tight.box.contains(c.beta_hat));
}

TEST_CASE("fit is invariant to duplicating the data") {
    for (int r = 0; r < 5; ++r) {
        const auto data = small_design(100, substream_seed(11, r));
        const KernelSpec spec(fixed_bandwidth(3.0, data.size()));
        const auto a = fit(data, spec, CureLink::logistic());
        const auto b = fit(repeat_rows(data, 2), spec, CureLink::logistic());
        CHECK((a.beta_hat - b.beta_hat).cwiseAbs().maxCoeff() <= 1e-6);
    }
}

TEST_CASE("fit refuses unidentified data") {
    const SurvivalDataset censored({{1.0, 0, 0.0}, {2.0, 0, 0.5}, {3.0, 0, -0.5}});
    CHECK_THROWS_AS(fit(censored, KernelSpec(2.0), CureLink::logistic()), InvalidArgument);
    const SurvivalDataset events({{1.0, 1, 0.0}, {2.0, 1, 0.5}, {3.0, 1, -0.5}});
    CHECK_THROWS_AS(fit(events, KernelSpec(2.0), CureLink::logistic()), SeparationError);
}

TEST_CASE("fit matches an exhaustive grid search") {
    for (std::uint64_t seed : {1ULL, 8ULL}) {
        const auto data = simulate(standard_design(CureScenario::cure20, 0.0, 12, substream_seed(9000, seed)));
        REQUIRE(data.has_censoring());
        REQUIRE(data.has_events());
        const LikelihoodModel m(data, KernelSpec(fixed_bandwidth(3.0, data.size())), CureLink::logistic());
        const auto r = fit(m);
        const auto g = oracle::grid_argmax([&](double b1, double b2) { return m.loglik(Beta(b1, b2)).value; }, -10.0,
                                           10.0, 0.01);
        const double dist = (Beta(g.b1, g.b2) - r.beta_hat).cwiseAbs().maxCoeff();
        CHECK_MESSAGE(dist <= 0.01 + 1e-12, "fit " << r.beta_hat.transpose() << " (" << r.loglik << ") grid "
                                                   << g.b1 << ' ' << g.b2 << " (" << g.value << ")");
        CHECK(r.loglik >= g.coarse_value - 1e-9);
    }
}

TEST_CASE("pairwise_sum is order-fixed") {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(static_cast<double>(i)) * 1e-3 + 1.0;
    const double a = pairwise_sum(v);
    CHECK(a == pairwise_sum(v));
    CHECK(a == doctest::Approx(std::accumulate(v.begin(), v.end(), 0.0)).epsilon(1e-14));
}

TEST_SUITE("slow") {

TEST_CASE("loglik at the truth beats a ring of radius 1 at n = 5000") {
    int wins = 0;
    for (int r = 0; r < 20; ++r) {
        const auto data = simulate(standard_design(CureScenario::cure20, 0.0, 5000, substream_seed(777, r)));
        const LikelihoodModel m(data, KernelSpec(fixed_bandwidth(3.0, data.size())), CureLink::logistic());
        const Beta b0(1.75, 2.0);
        const double v0 = m.loglik(b0).value;
        bool ok = true;
        for (int k = 0; k < 8; ++k) {
            const double a = k * M_PI / 4.0;
            ok &= m.loglik(b0 + Beta(std::cos(a), std::sin(a))).value < v0;
        }
        wins += ok;
    }
    MESSAGE("truth beats the whole ring in " << wins << " of 20 replications");
    CHECK(wins >= 19);
}

TEST_CASE("simulation-table cell, 100-replication smoke (doubled tolerances)") {
    McDesign design;
    design.cells = {McCell{}};
    design.quantile_levels.clear();
    const auto report = run_mc(design, 100, 20240601, 0);
    const auto& cell = report.cells.front();
    const auto& b1 = cell.estimates[0];
    const auto& b2 = cell.estimates[1];
    MESSAGE("beta1 bias " << b1.bias << " mse " << b1.mse << "; beta2 bias " << b2.bias << " mse " << b2.mse
                          << "; excluded " << cell.failures);
    CHECK(std::abs(b1.bias - 0.012) <= 0.16);
    CHECK(std::abs(b2.bias + 0.231) <= 0.16);
    CHECK(std::abs(b1.mse - 0.183) <= 0.8 * 0.183);
    CHECK(std::abs(b2.mse - 0.438) <= 0.8 * 0.438);
}

} // TEST_SUITE
