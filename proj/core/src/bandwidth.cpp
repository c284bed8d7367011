#include "invcure/bandwidth.hpp"

#include "invcure/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace invcure {

std::vector<double> default_cv_grid(std::size_t n) {
    constexpr int kCount = 20;
    const double scale = fixed_bandwidth(1.0, n);
    const double lo = std::log(0.5), hi = std::log(4.0);
    std::vector<double> grid(kCount);
    for (int g = 0; g < kCount; ++g) grid[g] = scale * std::exp(lo + (hi - lo) * g / (kCount - 1));
    return grid;
}

double cv_criterion(const SurvivalDataset& data, int k, double h, KernelFamily family) {
    if (k != 0 && k != 1) throw InvalidArgument("event class must be 0 or 1");
    if (!(h > 0.0)) throw InvalidArgument("bandwidth must be positive");
    const std::size_t n = data.size();

    // Records by decreasing time; group_end[p] is one past the last position
    // sharing the time at position p.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return data[a].time > data[b].time; });
    std::vector<std::size_t> group_end(n);
    for (std::size_t p = n; p-- > 0;) {
        group_end[p] = (p + 1 < n && data[order[p + 1]].time == data[order[p]].time) ? group_end[p + 1] : p + 1;
    }

    std::vector<double> w(n);
    std::vector<double> estimate(n);  // by sorted position
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
            w[l] = l == i ? 0.0 : kernel_eval(family, (data[l].x - data[i].x) / h);
            sum += w[l];
        }
        if (!(sum > 0.0)) return std::numeric_limits<double>::infinity();

        // Tail sums H_k^(-i)([Y_(p), inf) | X_i) over the time-sorted records.
        double running = 0.0;
        std::size_t p = 0;
        while (p < n) {
            const std::size_t end = group_end[p];
            for (std::size_t q = p; q < end; ++q)
                if (data[order[q]].status == k) running += w[order[q]];
            for (std::size_t q = p; q < end; ++q) estimate[q] = running / sum;
            p = end;
        }

        const auto& own = data[i];
        double err = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            const double indicator = (own.status == k && own.time >= data[order[q]].time) ? 1.0 : 0.0;
            const double d = indicator - estimate[q];
            err += d * d;
        }
        total += err / static_cast<double>(n);
    }
    return total / static_cast<double>(n);
}

CvSelection cv_select(const SurvivalDataset& data, std::span<const double> grid, KernelFamily family) {
    if (grid.empty()) throw InvalidArgument("bandwidth grid must be nonempty");
    for (double h : grid)
        if (!(h > 0.0)) throw InvalidArgument("bandwidth candidates must be positive");

    CvSelection sel;
    sel.grid.assign(grid.begin(), grid.end());
    auto pick = [&](int k, std::vector<double>& scores) {
        scores.reserve(grid.size());
        std::size_t best = grid.size();
        for (std::size_t g = 0; g < grid.size(); ++g) {
            scores.push_back(cv_criterion(data, k, grid[g], family));
            if (std::isfinite(scores[g]) && (best == grid.size() || scores[g] < scores[best])) best = g;
        }
        if (best == grid.size())
            throw NoFeasibleBandwidth("no candidate bandwidth gives nonempty leave-one-out neighborhoods");
        return grid[best];
    };
    sel.censored_bandwidth = pick(0, sel.censored_scores);
    sel.event_bandwidth = pick(1, sel.event_scores);
    sel.bandwidth = 0.5 * (sel.censored_bandwidth + sel.event_bandwidth);
    return sel;
}

double cv_bandwidth(const SurvivalDataset& data, std::span<const double> grid) {
    return cv_select(data, grid).bandwidth;
}

BandwidthRule BandwidthRule::rate_constant(double c) {
    if (!(c > 0.0)) throw InvalidArgument("bandwidth constant must be positive");
    return BandwidthRule(Kind::rate_constant, c, {});
}

BandwidthRule BandwidthRule::fixed(double h) {
    if (!(h > 0.0)) throw InvalidArgument("bandwidth must be positive");
    return BandwidthRule(Kind::fixed, h, {});
}

BandwidthRule BandwidthRule::cross_validated(std::vector<double> grid) {
    return BandwidthRule(Kind::cross_validated, 0.0, std::move(grid));
}

double BandwidthRule::resolve(const SurvivalDataset& data) const {
    switch (kind_) {
    case Kind::rate_constant:
        return fixed_bandwidth(value_, data.size());
    case Kind::fixed:
        return value_;
    case Kind::cross_validated:
        return cv_bandwidth(data, grid_.empty() ? default_cv_grid(data.size()) : grid_);
    }
    return value_;
}

std::string BandwidthRule::label() const {
    switch (kind_) {
    case Kind::rate_constant:
        return "c=" + format_number(value_);
    case Kind::fixed:
        return "h=" + format_number(value_);
    case Kind::cross_validated:
        return "cv";
    }
    return {};
}

} // namespace invcure
