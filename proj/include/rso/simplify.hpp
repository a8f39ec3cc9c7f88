#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rso/distributions.hpp"
#include "rso/queueing_net.hpp"

namespace rso {

inline constexpr std::size_t kMinFitSamples = 1000;
inline constexpr double kKsAcceptanceP = 0.05;

struct LosSampleSet {
    std::vector<std::string> subsystem_group;  // one id for a plain subsystem
    std::vector<double> samples;               // minutes, post-warm-up
    std::uint64_t source_seed = 0;
};

// A fitted length-of-stay model: either a parametric distribution accepted by
// the KS test, or a Gaussian-kernel KDE over the training samples.
struct FittedLos {
    enum class Kind { Parametric, Kde } kind = Kind::Parametric;
    DistributionSpec dist;     // sampling spec for both kinds
    double ks_p_value = 0.0;   // parametric only
    double ks_statistic = 0.0;
    double bandwidth = 0.0;    // KDE only

    bool parametric() const { return kind == Kind::Parametric; }
};

// Simplification operation O = (K1, K2, K3): K1 members are each abstracted
// by their own LOS variable, K2 jointly by a single LOS variable, K3 replaced
// by one live subsystem.
struct SimplificationOp {
    std::vector<std::string> k1;
    std::vector<std::string> k2;
    std::vector<std::string> k3;
    std::optional<SubsystemSpec> replacement;  // required when k3 is nonempty

    bool empty() const { return k1.empty() && k2.empty() && k3.empty(); }

    // Pairwise disjoint, and |K1|+|K2|+|K3| strictly below the parent's
    // subsystem count (removing every subsystem is metamodelling, not
    // simplification). Throws InvalidOperation.
    void validate(std::size_t parent_subsystem_count) const;
};

// Key used in LOS maps for a jointly abstracted group.
std::string group_key(const std::vector<std::string>& members);

// Runs the parent and collects per-group LOS sample sets (a group with one
// member is that subsystem's own LOS).
std::map<std::string, LosSampleSet> collect_los(const NetworkSpec& spec,
                                                const std::vector<std::vector<std::string>>& groups,
                                                SimTime warmup, SimTime run_length,
                                                std::uint64_t seed);

// Fits every candidate family by maximum likelihood and keeps the best KS
// p-value; returns it when it clears 0.05, nothing otherwise.
std::optional<FittedLos> fit_parametric(const std::vector<double>& samples,
                                        const std::vector<DistFamily>& candidates);

// The candidate families used throughout: exponential, gamma, bounded normal,
// uniform, triangular, beta, beta-prime, generalised logistic.
const std::vector<DistFamily>& default_los_candidates();

FittedLos fit_kde(const std::vector<double>& samples, double bandwidth = 0.1);

// Parametric first, KDE fallback.
FittedLos fit_los(const std::vector<double>& samples);

// Histogram KL(P || Q): Freedman-Diaconis bin width on the pooled samples,
// additive smoothing (eps = 1e-9) on empty Q bins.
double kl_divergence(const std::vector<double>& p_samples, const std::vector<double>& q_samples);

// Builds the simplified network: K1 members each become a hold, the K2 group
// becomes one hold, the K3 group becomes the replacement subsystem; routing is
// rewired to preserve entity flow order. `los` must contain a FittedLos for
// every K1 member id and for group_key(K2).
NetworkSpec apply_simplification(const NetworkSpec& parent, const SimplificationOp& op,
                                 const std::map<std::string, FittedLos>& los);

}  // namespace rso
