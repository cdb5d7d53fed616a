#include "patnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "patnet/csv.hpp"
#include "patnet/glm.hpp"

namespace patnet {

std::string_view to_string(Tercile t) {
    switch (t) {
        case Tercile::low: return "low";
        case Tercile::mid: return "mid";
        case Tercile::high: return "high";
    }
    return "low";
}

ExperienceIndex ExperienceIndex::build(std::span<const PatentApplication> records) {
    ExperienceIndex idx;
    for (const auto& r : records) {
        const std::int64_t day = r.filing_date.to_days();
        if (r.examiner_id) idx.examiner_days_[*r.examiner_id].push_back(day);
        for (const auto& name : r.inventor_names) idx.inventor_days_[name].push_back(day);
    }
    for (auto& [id, days] : idx.examiner_days_) std::sort(days.begin(), days.end());
    for (auto& [name, days] : idx.inventor_days_) std::sort(days.begin(), days.end());
    return idx;
}

namespace {

std::int64_t count_before(const std::unordered_map<std::string, std::vector<std::int64_t>>& map,
                          const std::string& key, Date as_of) {
    auto it = map.find(key);
    if (it == map.end()) return 0;
    const auto& days = it->second;
    return std::lower_bound(days.begin(), days.end(), as_of.to_days()) - days.begin();
}

}  // namespace

std::int64_t ExperienceIndex::examiner_prior(const std::string& id, Date as_of) const {
    return count_before(examiner_days_, id, as_of);
}

std::int64_t ExperienceIndex::inventor_prior(const std::string& name, Date as_of) const {
    return count_before(inventor_days_, name, as_of);
}

ExperienceRecord ExperienceIndex::examiner_experience(const std::string& id, Date as_of) const {
    ExperienceRecord rec;
    rec.person_id = id;
    rec.as_of = as_of;
    rec.count = static_cast<double>(examiner_prior(id, as_of));
    return rec;
}

ExperienceRecord ExperienceIndex::inventor_team_experience(std::span<const std::string> members,
                                                           Date as_of) const {
    if (members.empty())
        throw std::invalid_argument("inventor_team_experience: empty team");
    double sum = 0.0;
    for (const auto& name : members) sum += static_cast<double>(inventor_prior(name, as_of));
    ExperienceRecord rec;
    rec.as_of = as_of;
    rec.count = sum / static_cast<double>(members.size());
    return rec;
}

TercileCuts tercile_cuts(std::span<const double> population) {
    if (population.empty()) throw std::invalid_argument("tercile_cuts: empty population");
    std::vector<double> sorted(population.begin(), population.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    // Upper edge of bin b is the last value of its third; ties at an edge
    // land in the lower bin by the <= comparison in classify().
    TercileCuts cuts;
    cuts.low_upper = sorted[(n - 1) / 3];
    cuts.mid_upper = sorted[(2 * n - 1) / 3];
    return cuts;
}

ClaimsDelta claims_delta(int n_app, int n_grant) {
    if (n_app < 1)
        throw std::invalid_argument("claims_delta: n_app must be >= 1");
    if (n_grant < 0) throw std::invalid_argument("claims_delta: n_grant must be >= 0");
    ClaimsDelta d;
    d.delta_absolute = n_app - n_grant;
    d.delta_relative = static_cast<double>(d.delta_absolute) / static_cast<double>(n_app);
    return d;
}

std::int64_t grant_latency(Date filing_date, Date grant_date) {
    if (grant_date < filing_date)
        throw std::invalid_argument("grant_latency: grant date precedes filing date");
    return days_between(filing_date, grant_date);
}

double survivorship_index(std::span<const PatentApplication> records,
                          std::string_view cpc_class, const GenderDict& dict,
                          double threshold) {
    // Per-examiner application count within the class, then the gender
    // contrast of mean count weighted by gender share.
    std::map<std::string, std::pair<Gender, std::int64_t>> examiners;  // id -> (gender, n_apps)
    for (const auto& r : records) {
        if (!r.examiner_id || r.cpc_codes.empty()) continue;
        if (r.focal_code().cpc_class() != cpc_class) continue;
        auto it = examiners.find(*r.examiner_id);
        if (it == examiners.end()) {
            Gender g = Gender::unknown;
            if (r.examiner_name) g = infer_gender(*r.examiner_name, dict, threshold).value;
            it = examiners.emplace(*r.examiner_id, std::make_pair(g, 0)).first;
        }
        ++it->second.second;
    }
    double men_sum = 0.0, women_sum = 0.0;
    std::int64_t n_men = 0, n_women = 0;
    for (const auto& [id, gx] : examiners) {
        if (gx.first == Gender::man) {
            men_sum += static_cast<double>(gx.second);
            ++n_men;
        } else if (gx.first == Gender::woman) {
            women_sum += static_cast<double>(gx.second);
            ++n_women;
        }
    }
    const std::int64_t determined = n_men + n_women;
    if (determined == 0)
        throw std::invalid_argument("survivorship_index: no gender-determined examiner in class " +
                                    std::string(cpc_class));
    const double prop_men = static_cast<double>(n_men) / static_cast<double>(determined);
    const double prop_women = static_cast<double>(n_women) / static_cast<double>(determined);
    const double mean_men = n_men > 0 ? men_sum / static_cast<double>(n_men) : 0.0;
    const double mean_women = n_women > 0 ? women_sum / static_cast<double>(n_women) : 0.0;
    return mean_men * prop_men - mean_women * prop_women;
}

OverAssignment over_assignment(std::span<const AssignmentObs> obs) {
    std::int64_t n_ww = 0, n_w = 0, n_mw = 0, n_m = 0;
    for (const auto& o : obs) {
        if (o.all_women_team) {
            ++n_w;
            if (o.woman_examiner) ++n_ww;
        } else {
            ++n_m;
            if (o.woman_examiner) ++n_mw;
        }
    }
    if (n_w == 0 || n_m == 0)
        throw std::invalid_argument("over_assignment: empty team-type cell");

    const double p_w = static_cast<double>(n_ww) / static_cast<double>(n_w);
    const double p_m = static_cast<double>(n_mw) / static_cast<double>(n_m);
    if (p_m == 0.0)
        throw std::invalid_argument("over_assignment: no woman examiner among all-men teams");

    OverAssignment out;
    out.ratio_based = p_w / p_m - 1.0;

    DataTable table;
    {
        std::vector<double> y, x;
        y.reserve(obs.size());
        x.reserve(obs.size());
        for (const auto& o : obs) {
            y.push_back(o.woman_examiner ? 1.0 : 0.0);
            x.push_back(o.all_women_team ? 1.0 : 0.0);
        }
        table.add_numeric("woman_examiner", std::move(y));
        table.add_numeric("all_women_team", std::move(x));
    }
    GlmSpec spec;
    spec.family = GlmSpec::Family::logistic;
    spec.response = "woman_examiner";
    spec.terms = {GlmTerm::cont("all_women_team")};
    const GlmFit fit = fit_glm(spec, table);
    const auto beta = fit.coefficient("all_women_team");
    if (!beta) throw std::runtime_error("over_assignment: logit fit lost its term");
    out.logit_based = std::exp(*beta) - 1.0;
    return out;
}

AssignmentRows assignment_rows(std::span<const PatentApplication> records,
                               const GenderDict& dict, double threshold) {
    AssignmentRows out;
    for (const auto& r : records) {
        if (r.inventor_names.empty() || !r.examiner_name) {
            ++out.n_dropped;
            continue;
        }
        const Gender ex = infer_gender(*r.examiner_name, dict, threshold).value;
        if (ex == Gender::unknown) {
            ++out.n_dropped;
            continue;
        }
        std::vector<GenderLabel> labels;
        labels.reserve(r.inventor_names.size());
        for (const auto& name : r.inventor_names)
            labels.push_back(infer_gender(name, dict, threshold));
        const TeamComposition tc = team_composition(labels);
        if (!tc.all_women && !tc.all_men) {
            ++out.n_dropped;
            continue;
        }
        out.rows.push_back({tc.all_women, ex == Gender::woman});
    }
    return out;
}

ReversalTable reversal_rates(std::span<const ReversalObs> rows, int n_bins) {
    if (n_bins < 1) throw std::invalid_argument("reversal_rates: n_bins must be >= 1");
    ReversalTable table;
    table.conventional.resize(static_cast<std::size_t>(n_bins));
    table.unconventional.resize(static_cast<std::size_t>(n_bins));

    std::vector<double> appealed_exp;
    for (const auto& r : rows)
        if (r.appealed) appealed_exp.push_back(r.experience);
    if (appealed_exp.empty()) {
        table.bin_upper_edges.assign(static_cast<std::size_t>(n_bins), 0.0);
        return table;  // all-null cells
    }

    // Quantile edges over the appealed population, ties toward the lower bin.
    std::sort(appealed_exp.begin(), appealed_exp.end());
    table.bin_upper_edges.resize(static_cast<std::size_t>(n_bins));
    const std::size_t n = appealed_exp.size();
    for (int b = 0; b < n_bins; ++b) {
        const std::size_t pos = ((static_cast<std::size_t>(b) + 1) * n - 1) / n_bins;
        table.bin_upper_edges[static_cast<std::size_t>(b)] = appealed_exp[std::min(pos, n - 1)];
    }
    auto bin_of = [&](double exp_value) {
        for (int b = 0; b < n_bins; ++b)
            if (exp_value <= table.bin_upper_edges[static_cast<std::size_t>(b)]) return b;
        return n_bins - 1;
    };

    for (const auto& r : rows) {
        if (!r.appealed) continue;
        const int b = bin_of(r.experience);
        // exact zeros are conventional
        ReversalCell& cell = r.p_atypical > 0
                                 ? table.unconventional[static_cast<std::size_t>(b)]
                                 : table.conventional[static_cast<std::size_t>(b)];
        ++cell.n_appealed;
        if (r.reversed) ++cell.n_reversed;
    }
    for (auto* side : {&table.conventional, &table.unconventional})
        for (auto& cell : *side)
            if (cell.n_appealed > 0)
                cell.rate = static_cast<double>(cell.n_reversed) /
                            static_cast<double>(cell.n_appealed);
    return table;
}

LostValue lost_value(std::int64_t n_apps, double rate_men, double rate_women,
                     double per_patent_value) {
    if (rate_men < 0.0 || rate_men > 1.0 || rate_women < 0.0 || rate_women > 1.0)
        throw std::invalid_argument("lost_value: rates must lie in [0,1]");
    if (n_apps < 0) throw std::invalid_argument("lost_value: n_apps must be >= 0");
    LostValue out;
    out.negative = rate_women > rate_men;
    out.lost_patents = static_cast<std::int64_t>(
        std::floor(static_cast<double>(n_apps) * (rate_men - rate_women)));
    out.lost_dollars = static_cast<double>(out.lost_patents) * per_patent_value;
    return out;
}

double reassignment_gain(double rate_high, double rate_low, double reassigned_fraction) {
    for (double v : {rate_high, rate_low, reassigned_fraction})
        if (v < 0.0 || v > 1.0)
            throw std::invalid_argument("reassignment_gain: inputs must lie in [0,1]");
    return (rate_high - rate_low) * reassigned_fraction;
}

std::string EstimatorReport::to_json() const {
    nlohmann::json j;
    j["formula"] = formula;
    nlohmann::json in = nlohmann::json::object();
    for (const auto& [k, v] : inputs) in[k] = v;
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : outputs) out[k] = v;
    j["inputs"] = std::move(in);
    j["outputs"] = std::move(out);
    return j.dump(2);
}

EstimatorReport report_lost_value(std::int64_t n_apps, double rate_men, double rate_women,
                                  double per_patent_value) {
    const LostValue lv = lost_value(n_apps, rate_men, rate_women, per_patent_value);
    EstimatorReport rep;
    rep.formula = "lost_value";
    rep.inputs = {{"n_apps", static_cast<double>(n_apps)},
                  {"rate_men", rate_men},
                  {"rate_women", rate_women},
                  {"per_patent_value", per_patent_value}};
    rep.outputs = {{"lost_patents", static_cast<double>(lv.lost_patents)},
                   {"lost_dollars", lv.lost_dollars},
                   {"negative", lv.negative ? 1.0 : 0.0}};
    return rep;
}

EstimatorReport report_reassignment_gain(double rate_high, double rate_low,
                                         double reassigned_fraction) {
    EstimatorReport rep;
    rep.formula = "reassignment_gain";
    rep.inputs = {{"rate_high", rate_high},
                  {"rate_low", rate_low},
                  {"reassigned_fraction", reassigned_fraction}};
    rep.outputs = {{"gain", reassignment_gain(rate_high, rate_low, reassigned_fraction)}};
    return rep;
}

EstimatorReport report_over_assignment(std::span<const AssignmentObs> obs) {
    const OverAssignment oa = over_assignment(obs);
    std::int64_t n_women_teams = 0;
    for (const auto& o : obs) n_women_teams += o.all_women_team ? 1 : 0;
    EstimatorReport rep;
    rep.formula = "over_assignment";
    rep.inputs = {{"n_obs", static_cast<double>(obs.size())},
                  {"n_all_women_teams", static_cast<double>(n_women_teams)}};
    rep.outputs = {{"ratio_based", oa.ratio_based}, {"logit_based", oa.logit_based}};
    return rep;
}

}  // namespace patnet
