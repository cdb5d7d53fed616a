#include "patnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "patnet/gender.hpp"
#include "patnet/rng.hpp"

namespace patnet {

using nlohmann::json;

namespace {

constexpr std::string_view kWomenNames[] = {
    "Mary",      "Patricia", "Jennifer", "Linda",    "Elizabeth", "Barbara",
    "Susan",     "Jessica",  "Sarah",    "Karen",    "Lisa",      "Nancy",
    "Betty",     "Margaret", "Sandra",   "Ashley",   "Kimberly",  "Emily",
    "Donna",     "Michelle", "Carol",    "Amanda",   "Dorothy",   "Melissa",
    "Deborah",   "Stephanie", "Rebecca", "Sharon",   "Laura",     "Cynthia",
    "Kathleen",  "Amy",      "Angela",   "Shirley",  "Anna",      "Brenda",
    "Pamela",    "Emma",     "Nicole",   "Helen",    "Samantha",  "Katherine",
    "Christine", "Debra",    "Rachel",   "Carolyn",  "Janet",     "Catherine",
    "Maria",     "Heather",  "Diane",    "Ruth",     "Julie",     "Olivia",
    "Joyce",     "Virginia",
};

constexpr std::string_view kMenNames[] = {
    "James",   "Robert",  "John",      "Michael", "David",    "William",
    "Richard", "Joseph",  "Thomas",    "Charles", "Christopher", "Daniel",
    "Matthew", "Anthony", "Mark",      "Donald",  "Steven",   "Paul",
    "Andrew",  "Joshua",  "Kenneth",   "Kevin",   "Brian",    "George",
    "Timothy", "Ronald",  "Edward",    "Jason",   "Jeffrey",  "Ryan",
    "Jacob",   "Gary",    "Nicholas",  "Eric",    "Jonathan", "Stephen",
    "Larry",   "Justin",  "Scott",     "Brandon", "Benjamin", "Samuel",
    "Gregory", "Alexander", "Frank",   "Patrick", "Raymond",  "Jack",
    "Dennis",  "Jerry",   "Tyler",     "Aaron",   "Jose",     "Adam",
    "Nathan",  "Henry",
};

constexpr std::string_view kSurnames[] = {
    "Smith",    "Johnson", "Williams", "Brown",   "Jones",    "Garcia",
    "Miller",   "Davis",   "Rodriguez", "Martinez", "Hernandez", "Lopez",
    "Gonzalez", "Wilson",  "Anderson", "Thomas",  "Taylor",   "Moore",
    "Jackson",  "Martin",  "Lee",      "Perez",   "Thompson", "White",
    "Harris",   "Sanchez", "Clark",    "Ramirez", "Lewis",    "Robinson",
    "Walker",   "Young",   "Allen",    "King",    "Wright",   "Scott",
    "Torres",   "Nguyen",  "Hill",     "Flores",
};

double logistic(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

std::string make_code_string(int i) {
    // section letter, class 01..99, subclass letter; cycles deterministically
    static constexpr char kSections[] = {'A', 'B', 'C', 'D', 'E', 'F', 'G', 'H', 'Y'};
    const int per_section = 99 * 26;
    const int sec = i / per_section;
    const int rem = i % per_section;
    const int cls = rem / 26 + 1;
    const int letter = rem % 26;
    char buf[5];
    std::snprintf(buf, sizeof(buf), "%c%02d%c", kSections[sec % 9], cls,
                  static_cast<char>('A' + letter));
    return buf;
}

struct ExaminerState {
    std::int64_t total = 0;
    std::int64_t last_day = std::numeric_limits<std::int64_t>::min();
    std::int64_t at_last = 0;

    std::int64_t prior(std::int64_t day) {
        if (day != last_day) {
            last_day = day;
            at_last = 0;
        }
        return total - at_last;
    }
    void record() {
        ++total;
        ++at_last;
    }
};

}  // namespace

std::span<const std::string_view> synth_women_names() { return kWomenNames; }
std::span<const std::string_view> synth_men_names() { return kMenNames; }

void SynthParams::validate() const {
    auto check_prob = [](double p, const char* name) {
        if (p < 0.0 || p > 1.0)
            throw InfeasibleParamsError(std::string("SynthParams: ") + name +
                                        " outside [0,1]");
    };
    if (n_patents < 0) throw InfeasibleParamsError("SynthParams: n_patents negative");
    if (n_codes < 1) throw InfeasibleParamsError("SynthParams: n_codes must be >= 1");
    if (n_codes > 9 * 99 * 26)
        throw InfeasibleParamsError("SynthParams: n_codes exceeds the subclass universe");
    if (n_groups < 1 || n_groups > n_codes)
        throw InfeasibleParamsError("SynthParams: n_groups must lie in [1, n_codes]");
    if (first_year > last_year)
        throw InfeasibleParamsError("SynthParams: first_year > last_year");
    if (n_examiners < 1) throw InfeasibleParamsError("SynthParams: n_examiners must be >= 1");
    if (code_zipf_exponent < 0.0 || examiner_weight_exponent < 0.0)
        throw InfeasibleParamsError("SynthParams: negative skew exponent");
    if (homophily_odds <= 0.0)
        throw InfeasibleParamsError("SynthParams: homophily_odds must be > 0");
    if (mean_extra_claims < 0.0)
        throw InfeasibleParamsError("SynthParams: mean_extra_claims negative");
    check_prob(p_woman_inventor, "p_woman_inventor");
    check_prob(p_unknown_name, "p_unknown_name");
    check_prob(p_woman_examiner, "p_woman_examiner");
    check_prob(p_pending, "p_pending");
    check_prob(p_appeal, "p_appeal");

    auto check_dist = [&](const std::vector<double>& probs, const char* name) {
        if (probs.empty())
            throw InfeasibleParamsError(std::string("SynthParams: ") + name + " empty");
        double sum = 0.0;
        for (double p : probs) {
            if (p < 0.0)
                throw InfeasibleParamsError(std::string("SynthParams: ") + name +
                                            " has a negative entry");
            sum += p;
        }
        if (sum <= 0.0)
            throw InfeasibleParamsError(std::string("SynthParams: ") + name + " sums to zero");
    };
    check_dist(code_count_probs, "code_count_probs");
    check_dist(team_size_probs, "team_size_probs");
    for (std::size_t k = 0; k < code_count_probs.size(); ++k)
        if (code_count_probs[k] > 0.0 && static_cast<int>(k) + 1 > n_codes)
            throw InfeasibleParamsError(
                "SynthParams: code_count_probs requests more distinct codes than n_codes");
}

std::vector<PatentApplication> synth_corpus(const SynthParams& params, std::uint64_t seed) {
    params.validate();
    Rng rng(split_seed(seed, 0));

    const std::int64_t n = params.n_patents;
    std::vector<PatentApplication> out;
    if (n == 0) return out;
    out.reserve(static_cast<std::size_t>(n));

    // Code universe: popularity weights and interleaved group membership.
    std::vector<std::string> code_strings(static_cast<std::size_t>(params.n_codes));
    std::vector<CpcCode> codes(static_cast<std::size_t>(params.n_codes));
    std::vector<double> popularity(static_cast<std::size_t>(params.n_codes));
    std::vector<int> group(static_cast<std::size_t>(params.n_codes));
    std::vector<std::vector<std::uint32_t>> group_members(
        static_cast<std::size_t>(params.n_groups));
    std::vector<std::vector<double>> group_weights(static_cast<std::size_t>(params.n_groups));
    for (int i = 0; i < params.n_codes; ++i) {
        code_strings[i] = make_code_string(i);
        codes[i] = *CpcCode::parse(code_strings[i]);
        popularity[i] = 1.0 / std::pow(static_cast<double>(i + 1), params.code_zipf_exponent);
        group[i] = i % params.n_groups;
        group_members[group[i]].push_back(static_cast<std::uint32_t>(i));
        group_weights[group[i]].push_back(popularity[i]);
    }

    // Examiner pool: ids, genders, names, assignment weights per gender.
    struct Examiner {
        std::string id;
        std::string name;
        Gender gender;
    };
    std::vector<Examiner> examiners(static_cast<std::size_t>(params.n_examiners));
    std::vector<std::size_t> women_pool, men_pool;
    std::vector<double> women_weights, men_weights;
    for (int i = 0; i < params.n_examiners; ++i) {
        Examiner& ex = examiners[i];
        char buf[16];
        std::snprintf(buf, sizeof(buf), "EX%04d", i);
        ex.id = buf;
        ex.gender = rng.bernoulli(params.p_woman_examiner) ? Gender::woman : Gender::man;
        const auto pool = ex.gender == Gender::woman ? synth_women_names() : synth_men_names();
        ex.name = std::string(pool[i % pool.size()]) + " " +
                  std::string(kSurnames[(i / 7) % std::size(kSurnames)]);
        const double w = 1.0 / std::pow(static_cast<double>(i + 1),
                                        params.examiner_weight_exponent);
        if (ex.gender == Gender::woman) {
            women_pool.push_back(i);
            women_weights.push_back(w);
        } else {
            men_pool.push_back(i);
            men_weights.push_back(w);
        }
    }
    // Degenerate pools: a single-gender pool serves both draws.
    if (women_pool.empty()) {
        women_pool = men_pool;
        women_weights = men_weights;
    }
    if (men_pool.empty()) {
        men_pool = women_pool;
        men_weights = women_weights;
    }

    // Filing dates, sorted so examiner history grows chronologically.
    const std::int64_t day0 = Date{static_cast<std::int16_t>(params.first_year), 1, 1}.to_days();
    const std::int64_t day1 = Date{static_cast<std::int16_t>(params.last_year), 12, 31}.to_days();
    std::vector<std::int64_t> filing_days(static_cast<std::size_t>(n));
    for (auto& d : filing_days)
        d = day0 + static_cast<std::int64_t>(rng.bounded(static_cast<std::uint64_t>(day1 - day0 + 1)));
    std::sort(filing_days.begin(), filing_days.end());

    std::vector<ExaminerState> exam_state(static_cast<std::size_t>(params.n_examiners));
    const double base_odds = params.p_woman_examiner <= 0.0
                                 ? 0.0
                                 : params.p_woman_examiner / (1.0 - params.p_woman_examiner);

    for (std::int64_t idx = 0; idx < n; ++idx) {
        PatentApplication app;
        char buf[24];
        std::snprintf(buf, sizeof(buf), "P%08lld", static_cast<long long>(idx));
        app.app_id = buf;
        app.country = Country::US;
        app.filing_date = Date::from_days(filing_days[static_cast<std::size_t>(idx)]);

        // unconventionality propensity and code selection
        const double u = rng.next_double();
        const double u_c = 2.0 * u - 1.0;
        const int k = static_cast<int>(rng.categorical(params.code_count_probs)) + 1;
        const std::uint32_t focal = static_cast<std::uint32_t>(rng.categorical(popularity));
        const int g = group[focal];
        std::vector<std::uint32_t> chosen = {focal};
        int guard = 0;
        while (static_cast<int>(chosen.size()) < k && guard < 1000) {
            ++guard;
            std::uint32_t cand;
            if (rng.next_double() < u) {
                cand = static_cast<std::uint32_t>(rng.categorical(popularity));
            } else {
                cand = group_members[g][rng.categorical(group_weights[g])];
            }
            if (std::find(chosen.begin(), chosen.end(), cand) == chosen.end())
                chosen.push_back(cand);
        }
        // deterministic fallback when rejection stalls (tiny universes)
        for (std::uint32_t c = 0; static_cast<int>(chosen.size()) < k; ++c)
            if (std::find(chosen.begin(), chosen.end(), c) == chosen.end())
                chosen.push_back(c);
        for (std::uint32_t c : chosen) app.cpc_codes.push_back(codes[c]);

        // team
        const int team = static_cast<int>(rng.categorical(params.team_size_probs)) + 1;
        int n_women = 0, n_men = 0;
        bool any_unknown = false;
        for (int m = 0; m < team; ++m) {
            const bool unknown = rng.bernoulli(params.p_unknown_name);
            const bool woman = rng.bernoulli(params.p_woman_inventor);
            const std::string_view surname = kSurnames[rng.bounded(std::size(kSurnames))];
            if (unknown) {
                any_unknown = true;
                const char initial = static_cast<char>('A' + rng.bounded(26));
                app.inventor_names.push_back(std::string(1, initial) + ". " +
                                             std::string(surname));
            } else if (woman) {
                ++n_women;
                const auto pool = synth_women_names();
                app.inventor_names.push_back(std::string(pool[rng.bounded(pool.size())]) + " " +
                                             std::string(surname));
            } else {
                ++n_men;
                const auto pool = synth_men_names();
                app.inventor_names.push_back(std::string(pool[rng.bounded(pool.size())]) + " " +
                                             std::string(surname));
            }
        }
        const int determined = n_women + n_men;
        const bool women_majority = determined > 0 && 2 * n_women >= determined;
        const bool all_women = !any_unknown && n_women == team;

        // examiner assignment with optional homophily tilt
        double p_woman_exam = params.p_woman_examiner;
        if (all_women && base_odds > 0.0) {
            const double odds = base_odds * params.homophily_odds;
            p_woman_exam = odds / (1.0 + odds);
        }
        const bool woman_examiner = rng.bernoulli(p_woman_exam);
        const std::size_t ex_idx =
            woman_examiner ? women_pool[rng.categorical(women_weights)]
                           : men_pool[rng.categorical(men_weights)];
        const Examiner& ex = examiners[ex_idx];
        app.examiner_id = ex.id;
        app.examiner_name = ex.name;

        ExaminerState& es = exam_state[ex_idx];
        const std::int64_t prior = es.prior(filing_days[static_cast<std::size_t>(idx)]);
        es.record();
        const double e_norm = std::log1p(static_cast<double>(prior)) / 6.0;

        app.big_entity = rng.bernoulli(0.6);
        app.credit_hours =
            std::max(1.0, 20.0 + 2.0 * u_c - 1.2 * (women_majority ? 1.0 : 0.0) +
                              2.0 * rng.normal());

        // planted grant model
        const double w_ind = women_majority ? 1.0 : 0.0;
        const double eta = params.grant_intercept + params.beta_unconventional * u_c +
                           params.beta_women * w_ind +
                           params.beta_interaction * w_ind * u_c +
                           params.beta_examiner_experience * (e_norm - 0.5);
        const bool pending = rng.bernoulli(params.p_pending);
        const bool granted = !pending && rng.bernoulli(logistic(eta));

        app.n_claims_app = 1 + rng.poisson(params.mean_extra_claims);

        if (pending) {
            app.status = AppStatus::pending;
        } else if (granted) {
            app.status = AppStatus::granted;
            const std::int64_t latency =
                180 + static_cast<std::int64_t>(rng.bounded(900)) +
                static_cast<std::int64_t>(200.0 * u);
            app.grant_date =
                Date::from_days(filing_days[static_cast<std::size_t>(idx)] + latency);
            double q = 0.75 - 0.10 * w_ind - 0.05 * u_c;
            q = std::clamp(q, 0.05, 0.95);
            int kept = 0;
            for (int c = 0; c < *app.n_claims_app - 1; ++c)
                if (rng.bernoulli(q)) ++kept;
            app.n_claims_grant = 1 + kept;
            app.citation_count_8yr = rng.poisson(std::exp(0.8 + 0.9 * u_c));
            app.maintenance_fee_paid = rng.bernoulli(logistic(0.1 + 0.5 * u_c));
        } else {
            app.status = AppStatus::abandoned;
            const bool appealed = rng.bernoulli(params.p_appeal);
            app.appealed = appealed;
            if (appealed) {
                const double p_rev = logistic(params.reversal_intercept +
                                              params.reversal_beta_experience * e_norm +
                                              params.reversal_beta_unconventional * u_c);
                app.reversed = rng.bernoulli(p_rev);
            }
        }

        out.push_back(std::move(app));
    }
    return out;
}

std::string SynthParams::to_json() const {
    json j;
    j["n_patents"] = n_patents;
    j["n_codes"] = n_codes;
    j["code_zipf_exponent"] = code_zipf_exponent;
    j["n_groups"] = n_groups;
    j["code_count_probs"] = code_count_probs;
    j["team_size_probs"] = team_size_probs;
    j["first_year"] = first_year;
    j["last_year"] = last_year;
    j["p_woman_inventor"] = p_woman_inventor;
    j["p_unknown_name"] = p_unknown_name;
    j["n_examiners"] = n_examiners;
    j["p_woman_examiner"] = p_woman_examiner;
    j["examiner_weight_exponent"] = examiner_weight_exponent;
    j["homophily_odds"] = homophily_odds;
    j["grant_intercept"] = grant_intercept;
    j["beta_unconventional"] = beta_unconventional;
    j["beta_women"] = beta_women;
    j["beta_interaction"] = beta_interaction;
    j["beta_examiner_experience"] = beta_examiner_experience;
    j["p_pending"] = p_pending;
    j["p_appeal"] = p_appeal;
    j["reversal_intercept"] = reversal_intercept;
    j["reversal_beta_experience"] = reversal_beta_experience;
    j["reversal_beta_unconventional"] = reversal_beta_unconventional;
    j["mean_extra_claims"] = mean_extra_claims;
    return j.dump(2);
}

SynthParams SynthParams::from_json(const std::string& text) {
    json j = json::parse(text);
    SynthParams p;
    auto get = [&](const char* name, auto& field) {
        if (j.contains(name)) field = j.at(name).get<std::decay_t<decltype(field)>>();
    };
    get("n_patents", p.n_patents);
    get("n_codes", p.n_codes);
    get("code_zipf_exponent", p.code_zipf_exponent);
    get("n_groups", p.n_groups);
    get("code_count_probs", p.code_count_probs);
    get("team_size_probs", p.team_size_probs);
    get("first_year", p.first_year);
    get("last_year", p.last_year);
    get("p_woman_inventor", p.p_woman_inventor);
    get("p_unknown_name", p.p_unknown_name);
    get("n_examiners", p.n_examiners);
    get("p_woman_examiner", p.p_woman_examiner);
    get("examiner_weight_exponent", p.examiner_weight_exponent);
    get("homophily_odds", p.homophily_odds);
    get("grant_intercept", p.grant_intercept);
    get("beta_unconventional", p.beta_unconventional);
    get("beta_women", p.beta_women);
    get("beta_interaction", p.beta_interaction);
    get("beta_examiner_experience", p.beta_examiner_experience);
    get("p_pending", p.p_pending);
    get("p_appeal", p.p_appeal);
    get("reversal_intercept", p.reversal_intercept);
    get("reversal_beta_experience", p.reversal_beta_experience);
    get("reversal_beta_unconventional", p.reversal_beta_unconventional);
    get("mean_extra_claims", p.mean_extra_claims);
    p.validate();
    return p;
}

SynthParams SynthParams::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open synth params: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

}  // namespace patnet
