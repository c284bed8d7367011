#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include <invcure/dataset.hpp>
#include <invcure/error.hpp>
#include <invcure/simulation.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace invcure;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / ("invcure_test_" + name);
    std::ofstream(p, std::ios::binary) << content;
    return p;
}

std::string parse_error(const std::string& content) {
    std::istringstream in(content);
    try {
        parse_csv(in, "f.csv");
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

struct Rates {
    double cure = 0.0;
    double censoring = 0.0;
};

Rates rates(const SimulationConfig& cfg) {
    const auto trace = simulate_with_latents(cfg);
    Rates r;
    for (std::size_t i = 0; i < trace.data.size(); ++i) {
        r.cure += trace.latents[i].cured;
        r.censoring += 1 - trace.data[i].status;
    }
    r.cure /= static_cast<double>(cfg.n);
    r.censoring /= static_cast<double>(cfg.n);
    return r;
}

} // namespace

TEST_CASE("load_csv reads the documented schema") {
    const auto p = temp_file("two.csv", "time,status,x\n1.2,1,0.3\n0.7,0,-0.5\n");
    const auto data = load_csv(p);
    REQUIRE(data.size() == 2);
    CHECK(data[0] == Observation{1.2, 1, 0.3});
    CHECK(data[1] == Observation{0.7, 0, -0.5});
    std::filesystem::remove(p);
}

TEST_CASE("columns may be permuted and extra columns are ignored") {
    std::istringstream in("x,id,status,time\n0.3,a,1,1.2\n");
    const auto data = parse_csv(in);
    CHECK(data[0] == Observation{1.2, 1, 0.3});
}

TEST_CASE("parse errors name the row and the column") {
    CHECK(parse_error("time,status,x\n1,2,0\n").find("invalid status") != std::string::npos);
    CHECK(parse_error("time,status,x\n1,2,0\n").find("row 2, column 'status'") != std::string::npos);
    CHECK(parse_error("time,status\n1,1\n").find("missing column 'x'") != std::string::npos);
    CHECK(parse_error("time,status,x\n1,1,0\n1,abc,0\n").find("row 3, column 'status'") != std::string::npos);
    CHECK(parse_error("time,status,x\n-1,1,0\n").find("negative time") != std::string::npos);
    CHECK(parse_error("").find("empty file") != std::string::npos);
    CHECK(parse_error("time,status,x\n").find("no data rows") != std::string::npos);
    CHECK(parse_error("time,status,x\n1,1\n").find("column 'x'") != std::string::npos);
    CHECK(parse_error("time,status,x\ninf,1,0\n").find("non-finite") != std::string::npos);
}

TEST_CASE("missing file names the path") {
    try {
        load_csv("/nonexistent/dir/data.csv");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/dir/data.csv") != std::string::npos);
    }
}

TEST_CASE("dataset invariants are enforced") {
    CHECK_THROWS_AS(SurvivalDataset({}), InvalidArgument);
    CHECK_THROWS_AS(SurvivalDataset({{-1.0, 1, 0.0}}), InvalidArgument);
    CHECK_THROWS_AS(SurvivalDataset({{std::numeric_limits<double>::infinity(), 1, 0.0}}), InvalidArgument);
    CHECK_THROWS_AS(SurvivalDataset({{1.0, 2, 0.0}}), InvalidArgument);
    CHECK_THROWS_AS(SurvivalDataset({{1.0, 1, std::nan("")}}), InvalidArgument);
    const SurvivalDataset ok({{1.0, 0, 0.0}, {2.0, 1, 0.5}});
    CHECK(ok.event_count() == 1);
    CHECK(ok.has_events());
    CHECK(ok.has_censoring());
}

TEST_CASE("CSV round trip is byte-identical at 12 significant digits") {
    auto cfg = standard_design(CureScenario::cure20, 0.0, 200, 11);
    std::ostringstream first;
    write_csv(simulate(cfg), first);
    const auto p = temp_file("rt.csv", first.str());
    std::ostringstream second;
    write_csv(load_csv(p), second);
    CHECK(first.str() == second.str());
    std::filesystem::remove(p);

    CHECK(format_number(0.1 + 0.2) == "0.3");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("simulate reproduces the 20% cure / 40% censoring design") {
    const auto r = rates(standard_design(CureScenario::cure20, 0.0, 100000, 2024));
    CHECK(std::abs(r.cure - 0.20) <= 0.01);
    CHECK(std::abs(r.censoring - 0.40) <= 0.01);
}

TEST_CASE("simulate reproduces the 30% cure / 50% censoring design") {
    const auto r = rates(standard_design(CureScenario::cure30, 0.0, 100000, 2024));
    CHECK(std::abs(r.cure - 0.30) <= 0.01);
    CHECK(std::abs(r.censoring - 0.50) <= 0.01);
}

TEST_CASE("simulate is deterministic and substreams are stable in n") {
    auto cfg = standard_design(CureScenario::cure20, 1.0, 50, 99);
    const auto a = simulate(cfg);
    const auto b = simulate(cfg);
    CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));

    cfg.n = 80;
    const auto longer = simulate(cfg);
    CHECK(std::equal(a.begin(), a.end(), longer.begin()));

    cfg.seed = 100;
    const auto other = simulate(cfg);
    CHECK_FALSE(std::equal(a.begin(), a.end(), other.begin()));
}

TEST_CASE("covariate is uniform on [-1, 1] (Kolmogorov-Smirnov, level 0.01)") {
    const auto data = simulate(standard_design(CureScenario::cure20, 0.0, 100000, 5));
    std::vector<double> x;
    for (const auto& r : data) x.push_back(r.x);
    const double d = oracle::ks_uniform(x, -1.0, 1.0);
    CHECK(d <= 1.628 / std::sqrt(100000.0));
}

TEST_CASE("observed times are finite and positive; events reveal the latent lifetime") {
    for (auto trunc : {Truncation::atom, Truncation::cure}) {
        auto cfg = standard_design(CureScenario::cure30, 2.0, 5000, 17);
        cfg.truncation = trunc;
        const auto trace = simulate_with_latents(cfg);
        const double tau = truncation_point(cfg);
        for (std::size_t i = 0; i < trace.data.size(); ++i) {
            const auto& r = trace.data[i];
            const auto& l = trace.latents[i];
            CHECK(std::isfinite(r.time));
            CHECK(r.time > 0.0);
            if (r.status == 1) {
                CHECK(r.time == l.event_time);
                CHECK_FALSE(l.cured);
            } else {
                CHECK(r.time == l.censor_time);
            }
            if (l.cured) CHECK(std::isinf(l.event_time));
            if (trunc == Truncation::atom && !l.cured) CHECK(l.event_time <= tau);
            if (trunc == Truncation::cure && std::isfinite(l.event_time)) CHECK(l.event_time <= tau);
        }
    }
}

TEST_CASE("longer censoring weakly lowers censoring on common random numbers") {
    auto cfg = standard_design(CureScenario::cure20, 0.0, 20000, 3);
    double previous = 1.0;
    for (double mean : {0.5, 1.0, 1.65, 3.0, 10.0}) {
        cfg.censoring_mean = mean;
        const auto data = simulate(cfg);
        const double frac = 1.0 - static_cast<double>(data.event_count()) / static_cast<double>(data.size());
        CHECK(frac <= previous);
        previous = frac;
    }
}

TEST_CASE("configuration validation") {
    SimulationConfig cfg;
    cfg.censoring_mean = 0.0;
    CHECK_THROWS_AS(simulate(cfg), InvalidArgument);
    cfg.censoring_mean = 1.0;
    cfg.n = 1;
    CHECK_THROWS_AS(simulate(cfg), InvalidArgument);
    CHECK_THROWS_AS(parse_scenario("cure40"), InvalidArgument);
    CHECK(parse_scenario("30") == CureScenario::cure30);
    CHECK_THROWS_AS(parse_truncation("drop"), InvalidArgument);
}

TEST_CASE("truncation point is the 0.97 quantile of the averaged exponential") {
    SimulationConfig cfg;
    cfg.gamma = {0.0, 0.0, 0.0};
    CHECK(truncation_point(cfg) == doctest::Approx(-std::log(0.03)).epsilon(1e-12));
    // E[exp(-(g0 + g1 X))] for X ~ U[-1, 1] has the closed form sinh(g1) / g1 * exp(-g0).
    cfg.gamma = {0.5, 0.5, 0.0};
    const double mean = std::exp(-0.5) * std::sinh(0.5) / 0.5;
    CHECK(truncation_point(cfg) == doctest::Approx(-mean * std::log(0.03)).epsilon(1e-10));
}

TEST_CASE("true_latency_quantile") {
    SimulationConfig unit;
    unit.gamma = {0.0, 0.0, 0.0};
    CHECK(true_latency_quantile(0.5, 0.3, unit) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(true_latency_quantile(1e-12, 0.0, unit) == doctest::Approx(1e-12).epsilon(1e-6));
    CHECK(true_latency_quantile(0.999999, 0.0, unit) == doctest::Approx(truncation_point(unit)));
    CHECK_THROWS_AS(true_latency_quantile(0.0, 0.0, unit), InvalidArgument);
    CHECK_THROWS_AS(true_latency_quantile(1.0, 0.0, unit), InvalidArgument);

    SimulationConfig cfg;
    cfg.gamma = {0.5, 0.5, 1.0};
    const long double lambda = std::exp(0.625L + 1.0L / 1.125L);
    const long double expected = -std::log(0.75L) / lambda;
    const double q = true_latency_quantile(0.25, 0.25, cfg);
    CHECK(std::abs(q - static_cast<double>(expected)) <= 1e-12);

    // Empirical quantile of 10^6 exponential draws from an unrelated generator.
    std::mt19937_64 g(12345);
    std::exponential_distribution<double> expo(static_cast<double>(lambda));
    std::vector<double> draws(1000000);
    for (auto& d : draws) d = expo(g);
    std::nth_element(draws.begin(), draws.begin() + 250000, draws.end());
    CHECK(std::abs(draws[250000] - q) <= 0.01 * q);
}
