#include "invcure/likelihood.hpp"

#include "invcure/error.hpp"
#include "invcure/inversion.hpp"

#include <algorithm>
#include <cmath>

namespace invcure {

double pairwise_sum(std::span<const double> values) noexcept {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

LikelihoodModel::LikelihoodModel(const SurvivalDataset& data, const KernelSpec& spec, CureLink link,
                                 LatencyTail tail)
    : data_(data), link_(link), tail_(tail) {
    subjects_.reserve(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) {
        std::vector<double> w;
        try {
            w = kernel_weights(data_, data_[i].x, spec);
        } catch (const EmptyNeighborhood& e) {
            throw EmptyNeighborhood(e.x(), i);
        }
        add_subject(i, w);
    }
}

LikelihoodModel::LikelihoodModel(const SurvivalDataset& data, std::span<const std::vector<double>> weights,
                                 CureLink link, LatencyTail tail)
    : data_(data), link_(link), tail_(tail) {
    if (weights.size() != data_.size()) throw InvalidArgument("one weight vector per subject is required");
    subjects_.reserve(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) {
        double total = 0.0;
        for (double w : weights[i]) total += w;
        if (!(total > 0.0)) throw EmptyNeighborhood(data_[i].x, i);
        add_subject(i, weights[i]);
    }
}

void LikelihoodModel::add_subject(std::size_t i, std::span<const double> weights) {
    const auto sub = subdistributions_from_weights(data_, weights);
    const InversionGrid grid(sub.censored, sub.events);
    const double y = data_[i].time;

    Subject s;
    s.begin = atoms_.size();
    const auto times = grid.times();
    for (std::size_t j = 0; j < grid.size() && times[j] <= y; ++j) {
        if (!(grid.event_mass()[j] > 0.0)) continue;
        atoms_.push_back({grid.event_mass()[j], grid.at_risk()[j], grid.censor_tail()[j]});
        s.atom_at_own_time = times[j] == y;
    }
    s.end = atoms_.size();
    s.reaches_horizon = tail_ == LatencyTail::proper && s.end > s.begin && grid.last_event_time() <= y;
    s.plateau = grid.model_free_plateau();
    subjects_.push_back(s);
}

LoglikValue LikelihoodModel::loglik(const Beta& beta) const {
    std::vector<double> terms(subjects_.size());
    std::size_t floors = 0;
    for (std::size_t i = 0; i < subjects_.size(); ++i) {
        const Subject& s = subjects_[i];
        const double x = data_[i].x;
        const double phi = link_.phi(x, beta);

        const std::size_t last = s.atom_at_own_time ? s.end - 1 : s.end;
        double surv = 1.0;  // F_{T,0}^beta([Y_i, inf) | X_i)
        for (std::size_t j = s.begin; j < last; ++j) {
            if (s.reaches_horizon && j + 1 == s.end) {
                surv = 0.0;
                break;
            }
            bool floored = false;
            surv *= 1.0 - latency_increment(atoms_[j].event_mass, atoms_[j].at_risk, atoms_[j].censor_tail, phi,
                                            floored);
            floors += floored;
        }
        double own_increment = 0.0;
        if (s.atom_at_own_time) {
            if (s.reaches_horizon) {
                own_increment = 1.0;
            } else {
                bool floored = false;
                const Atom& a = atoms_[last];
                own_increment = latency_increment(a.event_mass, a.at_risk, a.censor_tail, phi, floored);
                floors += floored;
            }
        }

        double arg;
        double log_phi = std::log(std::max(phi, kMassFloor));
        if (data_[i].status == 1) {
            arg = surv * own_increment;
        } else {
            arg = phi * surv * (1.0 - own_increment) + link_.cure_probability(x, beta);
            log_phi = 0.0;
        }
        if (!(arg >= kMassFloor)) {
            arg = kMassFloor;
            ++floors;
        }
        terms[i] = log_phi + std::log(arg);
    }
    return {pairwise_sum(terms), floors};
}

ScoreValue LikelihoodModel::score(const Beta& beta) const {
    std::vector<double> d0(subjects_.size()), d1(subjects_.size());
    std::size_t singular = 0;

    for (std::size_t i = 0; i < subjects_.size(); ++i) {
        const Subject& s = subjects_[i];
        const double x = data_[i].x;
        const double phi = link_.phi(x, beta);
        const double cure = link_.cure_probability(x, beta);
        const Beta g = link_.gradient(x, beta);

        // One step of T3 / T4: returns the increment and accumulates the
        // beta-derivative of log(1 - increment) (per unit of grad phi) into t4.
        double t4 = 0.0;
        auto step = [&](const Atom& a, bool& active, double& denom) {
            denom = a.at_risk - cure * a.censor_tail;  // T1
            active = denom >= kDenominatorFloor && a.event_mass < denom;
            if (!(denom - a.event_mass >= kDenominatorFloor)) ++singular;
            if (!active) return std::min(1.0, a.event_mass / std::max(denom, kDenominatorFloor));
            t4 += a.event_mass * a.censor_tail / (denom * (denom - a.event_mass));
            return a.event_mass / denom;
        };

        // Under the proper tail the hazard at the horizon atom is 1 whatever beta is.
        auto horizon_step = [&](std::size_t j, bool& active, double& denom) {
            if (s.reaches_horizon && j + 1 == s.end) {
                active = false;
                return 1.0;
            }
            return step(atoms_[j], active, denom);
        };

        const std::size_t last = s.atom_at_own_time ? s.end - 1 : s.end;
        double surv = 1.0;
        for (std::size_t j = s.begin; j < last; ++j) {
            bool active;
            double denom;
            surv *= 1.0 - horizon_step(j, active, denom);
        }

        Beta grad = Beta::Zero();
        if (data_[i].status == 1) {
            double own_increment = 0.0;
            bool own_active = false;
            double own_denom = 0.0;
            if (s.atom_at_own_time) {
                const double t4_before = t4;
                own_increment = horizon_step(last, own_active, own_denom);
                t4 = t4_before;  // the atom at Y_i is not part of F([Y_i, inf))
            }
            grad = g / phi;
            if (surv * own_increment >= kMassFloor) {
                grad += t4 * g;
                if (own_active) grad -= (atoms_[last].censor_tail / own_denom) * g;
            }
        } else {
            if (s.atom_at_own_time) {
                bool active;
                double denom;
                surv *= 1.0 - horizon_step(last, active, denom);
            }
            const double arg = phi * surv + cure;
            if (arg >= kMassFloor) grad = (surv * g + phi * surv * t4 * g - g) / arg;
        }
        d0[i] = grad[0];
        d1[i] = grad[1];
    }
    return {Beta(pairwise_sum(d0), pairwise_sum(d1)), singular};
}

std::vector<double> LikelihoodModel::model_free_uncured() const {
    std::vector<double> out(subjects_.size());
    for (std::size_t i = 0; i < subjects_.size(); ++i) out[i] = 1.0 - subjects_[i].plateau;
    return out;
}

double loglik(const SurvivalDataset& data, const KernelSpec& spec, const CureLink& link, const Beta& beta,
              LatencyTail tail) {
    return LikelihoodModel(data, spec, link, tail).loglik(beta).value;
}

Beta score(const SurvivalDataset& data, const KernelSpec& spec, const CureLink& link, const Beta& beta,
           LatencyTail tail) {
    return LikelihoodModel(data, spec, link, tail).score(beta).gradient;
}

} // namespace invcure
