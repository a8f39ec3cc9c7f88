#include "rso/simplify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rso/errors.hpp"
#include "rso/stats.hpp"

namespace rso {

namespace {

double interquartile_range(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(v.size() - 1);
        const std::size_t i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        return i + 1 < v.size() ? v[i] * (1.0 - frac) + v[i + 1] * frac : v[i];
    };
    return quantile(0.75) - quantile(0.25);
}

}  // namespace

void SimplificationOp::validate(std::size_t parent_subsystem_count) const {
    auto check_unique = [](const std::vector<std::string>& ids, const char* name) {
        std::set<std::string> seen(ids.begin(), ids.end());
        if (seen.size() != ids.size())
            throw InvalidOperation(std::string("duplicate ids inside ") + name);
        return seen;
    };
    const auto s1 = check_unique(k1, "K1");
    const auto s2 = check_unique(k2, "K2");
    const auto s3 = check_unique(k3, "K3");
    for (const auto& id : s2)
        if (s1.count(id)) throw InvalidOperation("K1 and K2 overlap on " + id);
    for (const auto& id : s3)
        if (s1.count(id) || s2.count(id)) throw InvalidOperation("K3 overlaps K1 or K2 on " + id);
    if (!k3.empty() && !replacement)
        throw InvalidOperation("K3 requires a replacement subsystem spec");
    const std::size_t total = k1.size() + k2.size() + k3.size();
    if (total >= parent_subsystem_count)
        throw InvalidOperation(
            "simplifying every subsystem leaves no model, only a metamodel; need k1+k2+k3 < " +
            std::to_string(parent_subsystem_count));
}

std::string group_key(const std::vector<std::string>& members) {
    std::vector<std::string> sorted = members;
    std::sort(sorted.begin(), sorted.end());
    std::string key;
    for (const std::string& m : sorted) {
        if (!key.empty()) key += '+';
        key += m;
    }
    return key;
}

std::map<std::string, LosSampleSet> collect_los(const NetworkSpec& spec,
                                                const std::vector<std::vector<std::string>>& groups,
                                                SimTime warmup, SimTime run_length,
                                                std::uint64_t seed) {
    RunOptions opt;
    opt.warmup_minutes = warmup;
    opt.run_minutes = run_length;
    opt.seed = seed;
    opt.collect_los = false;
    for (const auto& members : groups) {
        if (members.empty()) throw ConfigError("empty LOS group");
        for (const auto& id : members)
            if (!spec.find_subsystem(id)) throw ConfigError("LOS group names unknown subsystem " + id);
        opt.los_groups[members.size() == 1 ? members.front() : group_key(members)] = members;
    }
    SimulationResult result = run_simulation(spec, opt);
    std::map<std::string, LosSampleSet> out;
    for (const auto& members : groups) {
        const std::string key = members.size() == 1 ? members.front() : group_key(members);
        LosSampleSet set;
        set.subsystem_group = members;
        set.samples = std::move(result.los_samples.at(key));
        set.source_seed = seed;
        out[key] = std::move(set);
    }
    return out;
}

const std::vector<DistFamily>& default_los_candidates() {
    static const std::vector<DistFamily> families = {
        DistFamily::Exponential, DistFamily::Gamma,       DistFamily::Normal,
        DistFamily::Uniform,     DistFamily::Triangular,  DistFamily::Beta,
        DistFamily::BetaPrime,   DistFamily::GenLogistic,
    };
    return families;
}

std::optional<FittedLos> fit_parametric(const std::vector<double>& samples,
                                        const std::vector<DistFamily>& candidates) {
    if (samples.size() < kMinFitSamples)
        throw FitDataTooSmall("parametric fitting needs >= " + std::to_string(kMinFitSamples) +
                              " samples, got " + std::to_string(samples.size()));
    std::optional<FittedLos> best;
    for (DistFamily family : candidates) {
        const auto spec = fit_mle(family, samples);
        if (!spec) continue;
        const KsResult ks =
            ks_test(samples, [&](double x) { return distribution_cdf(*spec, x); });
        if (!best || ks.p_value > best->ks_p_value) {
            FittedLos fit;
            fit.kind = FittedLos::Kind::Parametric;
            fit.dist = *spec;
            fit.ks_p_value = ks.p_value;
            fit.ks_statistic = ks.statistic;
            best = fit;
        }
    }
    if (best && best->ks_p_value > kKsAcceptanceP) return best;
    return std::nullopt;
}

FittedLos fit_kde(const std::vector<double>& samples, double bandwidth) {
    if (samples.size() < kMinFitSamples)
        throw FitDataTooSmall("KDE fitting needs >= " + std::to_string(kMinFitSamples) +
                              " samples, got " + std::to_string(samples.size()));
    FittedLos fit;
    fit.kind = FittedLos::Kind::Kde;
    fit.dist = DistributionSpec::empirical_kde(samples, bandwidth);
    fit.bandwidth = bandwidth;
    return fit;
}

FittedLos fit_los(const std::vector<double>& samples) {
    if (auto parametric = fit_parametric(samples, default_los_candidates())) return *parametric;
    return fit_kde(samples);
}

double kl_divergence(const std::vector<double>& p_samples, const std::vector<double>& q_samples) {
    if (p_samples.empty() || q_samples.empty())
        throw FitDataTooSmall("KL divergence needs nonempty sample sets");
    std::vector<double> pooled = p_samples;
    pooled.insert(pooled.end(), q_samples.begin(), q_samples.end());
    const double lo = *std::min_element(pooled.begin(), pooled.end());
    const double hi = *std::max_element(pooled.begin(), pooled.end());
    if (!(hi > lo)) return 0.0;  // all mass on a single point in both sets

    const double iqr = interquartile_range(pooled);
    double width = 2.0 * iqr / std::cbrt(static_cast<double>(pooled.size()));
    if (!(width > 0.0)) width = (hi - lo) / 64.0;
    std::size_t bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    bins = std::clamp<std::size_t>(bins, 1, 2000);

    std::vector<double> p_count(bins, 0.0), q_count(bins, 0.0);
    auto bin_of = [&](double x) {
        auto b = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(bins));
        return std::min(b, bins - 1);
    };
    for (double x : p_samples) p_count[bin_of(x)] += 1.0;
    for (double x : q_samples) q_count[bin_of(x)] += 1.0;

    constexpr double eps = 1e-9;
    const double np = static_cast<double>(p_samples.size());
    const double nq = static_cast<double>(q_samples.size());
    const double q_norm = nq + eps * static_cast<double>(bins);
    double kl = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
        if (p_count[b] == 0.0) continue;
        const double p = p_count[b] / np;
        const double q = (q_count[b] + eps) / q_norm;
        kl += p * std::log(p / q);
    }
    return kl < 0.0 ? 0.0 : kl;
}

NetworkSpec apply_simplification(const NetworkSpec& parent, const SimplificationOp& op,
                                 const std::map<std::string, FittedLos>& los) {
    parent.validate();
    op.validate(parent.subsystems.size());
    for (const std::string& id : op.k1)
        if (!parent.find_subsystem(id)) throw InvalidOperation("K1 names unknown subsystem " + id);
    for (const std::string& id : op.k2)
        if (!parent.find_subsystem(id)) throw InvalidOperation("K2 names unknown subsystem " + id);
    for (const std::string& id : op.k3)
        if (!parent.find_subsystem(id)) throw InvalidOperation("K3 names unknown subsystem " + id);

    // Contracted node groups: K1 members individually, K2 jointly, K3 jointly.
    struct Contraction {
        std::vector<std::string> members;
        std::string new_id;
        bool to_hold = true;
    };
    std::vector<Contraction> contractions;
    NetworkSpec out;
    out.interarrival = parent.interarrival;
    out.holds = parent.holds;

    for (const std::string& id : op.k1) {
        auto it = los.find(id);
        if (it == los.end()) throw MissingLosModel("no LOS model for K1 subsystem " + id);
        HoldSpec hold;
        hold.id = "h_" + id;
        hold.los = it->second.dist;
        hold.replaced_group = {id};
        out.holds.push_back(std::move(hold));
        contractions.push_back({{id}, "h_" + id, true});
    }
    if (!op.k2.empty()) {
        const std::string key = group_key(op.k2);
        auto it = los.find(key);
        if (it == los.end()) throw MissingLosModel("no LOS model for K2 group " + key);
        HoldSpec hold;
        hold.id = "h_" + key;
        hold.los = it->second.dist;
        hold.replaced_group = op.k2;
        out.holds.push_back(std::move(hold));
        contractions.push_back({op.k2, "h_" + key, true});
    }
    if (!op.k3.empty()) contractions.push_back({op.k3, op.replacement->id, false});

    std::map<std::string, std::string> rename;
    for (const Contraction& c : contractions)
        for (const std::string& m : c.members) rename[m] = c.new_id;

    for (const SubsystemSpec& s : parent.subsystems)
        if (!rename.count(s.id)) out.subsystems.push_back(s);
    if (op.replacement) out.subsystems.push_back(*op.replacement);

    // Rewire routing through the contractions.
    struct TaggedEdge {
        std::string from, to;
        double probability;
    };
    std::vector<TaggedEdge> edges;
    for (const RouteEdge& e : parent.routing) {
        const std::string from = rename.count(e.from) ? rename.at(e.from) : e.from;
        const std::string to = rename.count(e.to) ? rename.at(e.to) : e.to;
        if (from == to) continue;  // edge internal to a contracted group
        edges.push_back({from, to, e.probability});
    }
    // A multi-member contraction has one downstream successor; several exit
    // edges landing on it collapse to probability one. Exits toward distinct
    // destinations would need flow rates the spec does not carry.
    for (const Contraction& c : contractions) {
        if (c.members.size() < 2) continue;
        std::set<std::string> dests;
        for (const TaggedEdge& e : edges)
            if (e.from == c.new_id) dests.insert(e.to);
        if (dests.size() > 1)
            throw RoutingInconsistency("group " + c.new_id +
                                       " exits to several destinations; cannot infer the split");
        bool first = true;
        std::vector<TaggedEdge> kept;
        for (TaggedEdge& e : edges) {
            if (e.from != c.new_id) {
                kept.push_back(e);
            } else if (first) {
                e.probability = 1.0;
                kept.push_back(e);
                first = false;
            }
        }
        edges.swap(kept);
    }
    // Merge duplicate (from, to) pairs: branches into a contracted node add up.
    std::map<std::pair<std::string, std::string>, double> merged;
    std::vector<std::pair<std::string, std::string>> order;
    for (const TaggedEdge& e : edges) {
        auto key = std::make_pair(e.from, e.to);
        if (!merged.count(key)) order.push_back(key);
        merged[key] += e.probability;
    }
    for (const auto& key : order)
        out.routing.push_back({key.first, key.second, merged.at(key)});

    out.validate();
    return out;
}

}  // namespace rso
