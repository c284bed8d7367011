#include "invcure/nelder_mead.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace invcure {

NelderMeadResult nelder_mead_maximize(const std::function<double(const Beta&)>& objective, const Beta& start,
                                      const ParamBox& box, const NelderMeadOptions& options) {
    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
    constexpr int kVertices = 3;

    NelderMeadResult result;
    auto eval = [&](const Beta& p) {
        ++result.evals;
        const double v = objective(p);
        return std::isnan(v) ? -HUGE_VAL : v;
    };

    std::array<Beta, kVertices> pts;
    std::array<double, kVertices> val{};
    pts[0] = box.project(start);
    const double step = pts[0].cwiseAbs().maxCoeff() > 0.0 ? 0.1 * pts[0].cwiseAbs().maxCoeff() : 0.1;
    for (int k = 0; k < 2; ++k) {
        Beta p = pts[0];
        p[k] += step;
        if (box.project(p) == pts[0]) p[k] -= 2.0 * step;  // starting on the upper bound
        pts[k + 1] = box.project(p);
    }
    for (int v = 0; v < kVertices; ++v) val[v] = eval(pts[v]);

    auto diameter = [&] {
        double d = 0.0;
        for (int a = 0; a < kVertices; ++a)
            for (int b = a + 1; b < kVertices; ++b) d = std::max(d, (pts[a] - pts[b]).norm());
        return d;
    };

    std::array<int, kVertices> order{};
    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return val[a] > val[b]; });
        const int best = order[0], mid = order[1], worst = order[2];

        if (diameter() <= options.tolerance) {
            result.converged = true;
            break;
        }
        if (result.evals >= options.max_evals) break;

        const Beta centroid = 0.5 * (pts[best] + pts[mid]);
        const Beta reflected = box.project(centroid + kReflect * (centroid - pts[worst]));
        const double fr = eval(reflected);

        if (fr > val[best]) {
            const Beta expanded = box.project(centroid + kExpand * (reflected - centroid));
            const double fe = eval(expanded);
            if (fe > fr) {
                pts[worst] = expanded;
                val[worst] = fe;
            } else {
                pts[worst] = reflected;
                val[worst] = fr;
            }
            continue;
        }
        if (fr > val[mid]) {
            pts[worst] = reflected;
            val[worst] = fr;
            continue;
        }

        const bool outside = fr > val[worst];
        const Beta contracted = outside ? box.project(centroid + kContract * (reflected - centroid))
                                        : box.project(centroid + kContract * (pts[worst] - centroid));
        const double fc = eval(contracted);
        if (fc > (outside ? fr : val[worst])) {
            pts[worst] = contracted;
            val[worst] = fc;
            continue;
        }

        for (int v : {mid, worst}) {
            pts[v] = box.project(pts[best] + kShrink * (pts[v] - pts[best]));
            val[v] = eval(pts[v]);
        }
    }

    const int best = static_cast<int>(std::max_element(val.begin(), val.end()) - val.begin());
    result.argmax = pts[best];
    result.value = val[best];
    return result;
}

} // namespace invcure
