#pragma once

#include "invcure/dataset.hpp"
#include "invcure/inversion.hpp"
#include "invcure/kernel.hpp"
#include "invcure/link.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace invcure {

/// Lower bound applied inside every log of the likelihood.
inline constexpr double kMassFloor = 1e-300;

struct LoglikValue {
    double value = 0.0;
    /// Clamped hazard denominators plus log arguments raised to kMassFloor.
    std::size_t floor_events = 0;
};

struct ScoreValue {
    Beta gradient = Beta::Zero();
    /// Event atoms where T1 - H1({s}) fell below kDenominatorFloor.
    std::size_t singular_events = 0;
};

/// Semiparametric log-likelihood of the mixture cure model
///
///   log L(beta) = sum_i delta_i [log phi(X_i) + log F_{T,0}^beta({Y_i} | X_i)]
///               + (1 - delta_i) log[phi(X_i) F_{T,0}^beta((Y_i, inf) | X_i) + 1 - phi(X_i)],
///
/// where F_{T,0}^beta is obtained by inverting the kernel estimates of
/// (H0, H1) at each X_i. Everything that does not depend on beta (the kernel
/// estimates, risk sets and censoring curves) is computed once here, so each
/// evaluation costs one pass over the event atoms preceding every Y_i.
///
/// F_{T,0}^beta is the proper version by default (LatencyTail::proper). With
/// the defective version the criterion is flat in beta wherever no hazard
/// increment is capped: phi F^beta({s}) telescopes to H1({s}) / F_C([s, inf))
/// and phi F^beta((t, inf)) + 1 - phi to H([t, inf)) / F_C([t, inf)).
class LikelihoodModel {
public:
    /// Throws EmptyNeighborhood (with the subject index) if some X_i has no
    /// neighbor within the bandwidth.
    LikelihoodModel(const SurvivalDataset& data, const KernelSpec& spec, CureLink link,
                    LatencyTail tail = LatencyTail::proper);

    /// `weights[i]` are the (already normalized) weights used at X_i.
    LikelihoodModel(const SurvivalDataset& data, std::span<const std::vector<double>> weights, CureLink link,
                    LatencyTail tail = LatencyTail::proper);

    LoglikValue loglik(const Beta& beta) const;
    /// Analytic gradient of loglik (the score sum_i m(Y_i, delta_i, X_i; beta)).
    ScoreValue score(const Beta& beta) const;

    /// 1 - model-free plateau of the conditional Kaplan-Meier curve at each X_i.
    std::vector<double> model_free_uncured() const;

    const SurvivalDataset& data() const noexcept { return data_; }
    const CureLink& link() const noexcept { return link_; }
    LatencyTail tail() const noexcept { return tail_; }
    std::size_t size() const noexcept { return data_.size(); }

private:
    struct Atom {
        double event_mass;   // H1({s} | X_i)
        double at_risk;      // H([s, inf) | X_i)
        double censor_tail;  // F_C([s, inf) | X_i)
    };
    struct Subject {
        std::size_t begin = 0;  // event atoms with s <= Y_i, in atoms_
        std::size_t end = 0;
        bool atom_at_own_time = false;  // last atom sits at s = Y_i
        bool reaches_horizon = false;   // last atom is the final event atom at X_i
        double plateau = 1.0;
    };

    void add_subject(std::size_t i, std::span<const double> weights);

    SurvivalDataset data_;
    CureLink link_;
    LatencyTail tail_;
    std::vector<Atom> atoms_;
    std::vector<Subject> subjects_;
};

double loglik(const SurvivalDataset& data, const KernelSpec& spec, const CureLink& link, const Beta& beta,
              LatencyTail tail = LatencyTail::proper);
Beta score(const SurvivalDataset& data, const KernelSpec& spec, const CureLink& link, const Beta& beta,
           LatencyTail tail = LatencyTail::proper);

/// Fixed-order pairwise summation (bit-stable for a given input order).
double pairwise_sum(std::span<const double> values) noexcept;

} // namespace invcure
