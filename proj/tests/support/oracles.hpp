#pragma once
// Brute-force reference implementations. They work from raw records and
// weights only, so they share no code path with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

struct Rec {
    double y;
    int d;
    double x;
};

inline double epan(double u) { return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0; }

/// Normalized Epanechnikov weights at x; empty when all vanish.
inline std::vector<double> weights(const std::vector<Rec>& r, double x, double h) {
    std::vector<double> w(r.size());
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += (w[i] = epan((r[i].x - x) / h));
    if (s <= 0.0) return {};
    for (auto& v : w) v /= s;
    return w;
}

/// sum_i w_i 1{y_i >= t, d_i = k}
inline double sub_tail(const std::vector<Rec>& r, const std::vector<double>& w, int k, double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i].d == k && r[i].y >= t) s += w[i];
    return s;
}

/// Weighted Kaplan-Meier P(T > t): product over distinct event times s <= t
/// of 1 - d(s) / Y(s), everyone with y >= s at risk (events before
/// censorings at ties).
inline long double km(const std::vector<Rec>& r, const std::vector<double>& w, double t) {
    std::vector<double> ev;
    for (const auto& q : r)
        if (q.d == 1) ev.push_back(q.y);
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    long double s = 1.0L;
    for (double e : ev) {
        if (e > t) break;
        long double d = 0.0L, at = 0.0L;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (r[i].y >= e) at += w[i];
            if (r[i].y == e && r[i].d == 1) d += w[i];
        }
        if (d > 0.0L) s *= 1.0L - d / at;
    }
    return s;
}

/// Censoring survival left limit P(C >= s): product over censoring times u < s.
inline long double censor_left(const std::vector<Rec>& r, const std::vector<double>& w, double s) {
    std::vector<double> cs;
    for (const auto& q : r)
        if (q.d == 0) cs.push_back(q.y);
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    long double g = 1.0L;
    for (double u : cs) {
        if (u >= s) break;
        long double c = 0.0L, at = 0.0L;
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (r[i].y >= u) at += w[i];
            if (r[i].y == u && r[i].d == 0) c += w[i];
        }
        if (c > 0.0L) g *= 1.0L - std::min(1.0L, c / at);
    }
    return g;
}

/// Latency hazard at every event time carrying weight: (time, increment).
inline std::vector<std::pair<double, double>> latency_hazard(const std::vector<Rec>& r, const std::vector<double>& w,
                                                             double phi, bool proper) {
    std::vector<double> ev;
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i].d == 1 && w[i] > 0.0) ev.push_back(r[i].y);
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    std::vector<std::pair<double, double>> hz;
    for (double s : ev) {
        double a = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i)
            if (r[i].y == s && r[i].d == 1) a += w[i];
        const double at = sub_tail(r, w, 0, s) + sub_tail(r, w, 1, s);
        double den = at - (1.0 - phi) * static_cast<double>(censor_left(r, w, s));
        if (den < 1e-10) den = 1e-10;
        hz.push_back({s, std::min(1.0, a / den)});
    }
    if (proper && !hz.empty()) hz.back().second = 1.0;
    return hz;
}

inline double logistic(double b1, double b2, double x) { return 1.0 / (1.0 + std::exp(-(b1 + b2 * x))); }

/// The log-likelihood written out term by term.
inline double loglik(const std::vector<Rec>& r, double h, double b1, double b2, bool proper) {
    double total = 0.0;
    for (const auto& q : r) {
        const auto w = weights(r, q.x, h);
        const double phi = logistic(b1, b2, q.x);
        const auto hz = latency_hazard(r, w, phi, proper);
        double surv_before = 1.0, mass = 0.0;
        for (const auto& [s, inc] : hz) {
            if (s < q.y) surv_before *= 1.0 - inc;
            if (s == q.y) mass = surv_before * inc;
        }
        double surv_after = surv_before;
        for (const auto& [s, inc] : hz)
            if (s == q.y) surv_after *= 1.0 - inc;
        if (q.d == 1)
            total += std::log(std::max(phi, 1e-300)) + std::log(std::max(mass, 1e-300));
        else
            total += std::log(std::max(phi * surv_after + 1.0 - phi, 1e-300));
    }
    return total;
}

/// Logistic regression by plain IRLS in long double.
inline std::pair<long double, long double> irls(const std::vector<double>& x, const std::vector<double>& y) {
    long double b0 = 0.0L, b1 = 0.0L;
    for (int it = 0; it < 100; ++it) {
        long double g0 = 0, g1 = 0, h00 = 0, h01 = 0, h11 = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const long double p = 1.0L / (1.0L + std::exp(-(b0 + b1 * x[i])));
            const long double v = p * (1.0L - p);
            g0 += y[i] - p;
            g1 += (y[i] - p) * x[i];
            h00 += v;
            h01 += v * x[i];
            h11 += v * x[i] * x[i];
        }
        const long double det = h00 * h11 - h01 * h01;
        const long double d0 = (h11 * g0 - h01 * g1) / det;
        const long double d1 = (h00 * g1 - h01 * g0) / det;
        b0 += d0;
        b1 += d1;
        if (std::abs(d0) + std::abs(d1) < 1e-14L) break;
    }
    return {b0, b1};
}

/// Kolmogorov-Smirnov distance of a sample from U[a, b].
inline double ks_uniform(std::vector<double> v, double a, double b) {
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = (v[i] - a) / (b - a);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

/// Random small dataset with forced ties: times drawn from a few levels.
inline std::vector<Rec> random_records(std::mt19937_64& g, std::size_t n, int levels) {
    std::uniform_int_distribution<int> lv(1, levels), st(0, 1);
    std::uniform_real_distribution<double> ux(-1.0, 1.0);
    std::vector<Rec> r(n);
    for (auto& q : r) q = {0.5 * lv(g), st(g), ux(g)};
    return r;
}

} // namespace oracle
