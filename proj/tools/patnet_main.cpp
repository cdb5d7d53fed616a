#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "patnet/cooccur.hpp"
#include "patnet/corpus.hpp"
#include "patnet/csv.hpp"
#include "patnet/frame.hpp"
#include "patnet/gender.hpp"
#include "patnet/glm.hpp"
#include "patnet/metrics.hpp"
#include "patnet/nullmodel.hpp"
#include "patnet/parallel.hpp"
#include "patnet/rng.hpp"
#include "patnet/scoring.hpp"
#include "patnet/summaries.hpp"
#include "patnet/synth.hpp"
#include "manifest.hpp"
#include "runconfig.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace patnet;
using namespace patnet::cli;

namespace {

/// Declared failure with a machine-readable code; maps to exit status 2.
struct CliError : std::runtime_error {
    CliError(std::string error_code, const std::string& message)
        : std::runtime_error(message), code(std::move(error_code)) {}
    std::string code;
};

std::string corpus_file_of(const std::string& path) {
    if (fs::is_directory(path)) return (fs::path(path) / "corpus.jsonl").string();
    return path;
}

std::vector<PatentApplication> load_corpus(const std::string& path, unsigned threads) {
    const std::string file = corpus_file_of(path);
    if (!fs::exists(file)) throw CliError("IO_ERROR", "corpus not found: " + file);
    auto parsed = parse_corpus_file(file, /*strict=*/false, threads);
    if (!parsed.report.errors.empty())
        throw CliError("PARSE_ERROR",
                       "corpus has " + std::to_string(parsed.report.errors.size()) +
                           " invalid lines (first at line " +
                           std::to_string(parsed.report.errors.front().line) + ": " +
                           parsed.report.errors.front().reason + ")");
    return std::move(parsed.records);
}

std::pair<int, int> parse_year_range(const std::string& range) {
    const auto colon = range.find(':');
    if (colon == std::string::npos)
        throw CliError("BAD_ARGS", "year range must look like A:B, got " + range);
    try {
        const int a = std::stoi(range.substr(0, colon));
        const int b = std::stoi(range.substr(colon + 1));
        if (a > b) throw CliError("BAD_ARGS", "year range is reversed: " + range);
        return {a, b};
    } catch (const CliError&) {
        throw;
    } catch (const std::exception&) {
        throw CliError("BAD_ARGS", "year range must look like A:B, got " + range);
    }
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw CliError("IO_ERROR", "cannot create directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError("IO_ERROR", "cannot write " + path.string());
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError("IO_ERROR", "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CommonArgs {
    unsigned threads = 0;  // 0 -> hardware
    bool timestamps = false;
};

int cmd_ingest(const CommonArgs& common, const std::string& in_file,
               const std::string& out_dir, bool strict) {
    ensure_dir(out_dir);
    std::ifstream in(in_file);
    if (!in) throw CliError("IO_ERROR", "cannot open " + in_file);

    ParsedCorpus parsed;
    try {
        parsed = parse_corpus(in, strict, common.threads);
    } catch (const StrictParseError& e) {
        throw CliError("PARSE_ERROR", e.what());
    }

    const fs::path corpus_path = fs::path(out_dir) / "corpus.jsonl";
    const fs::path errors_path = fs::path(out_dir) / "errors.csv";
    {
        auto out = open_out(corpus_path);
        write_corpus(out, parsed.records);
    }
    {
        auto out = open_out(errors_path);
        parsed.report.write_csv(out);
    }

    Manifest manifest;
    manifest.command = "ingest";
    manifest.config_sha256 =
        sha256_hex("ingest|" + in_file + "|strict=" + (strict ? "1" : "0"));
    manifest.inputs = {in_file};
    manifest.outputs = {corpus_path.string(), errors_path.string()};
    manifest.counters = {{"lines", static_cast<std::int64_t>(parsed.report.n_lines)},
                         {"accepted", static_cast<std::int64_t>(parsed.report.n_accepted)},
                         {"rejected", static_cast<std::int64_t>(parsed.report.errors.size())}};
    manifest.with_timestamp = common.timestamps;
    manifest.write((fs::path(out_dir) / "manifest.json").string());

    std::cout << "ingest: " << parsed.report.n_accepted << " records accepted, "
              << parsed.report.errors.size() << " rejected\n";
    return 0;
}

int cmd_network(const CommonArgs& common, const std::string& corpus, const std::string& years,
                const std::string& out_dir, int replicates, std::uint64_t seed) {
    const auto [year_a, year_b] = parse_year_range(years);
    ensure_dir(out_dir);
    auto records = load_corpus(corpus, common.threads);

    // Everything with >= 2 distinct subclasses filed up to B feeds the
    // cumulative networks; years before A only ever appear as history.
    CorpusFilter filter;
    filter.min_year = -9999;
    filter.max_year = year_b;
    auto usable = filter_scoreable(records, filter);

    std::map<int, std::vector<PatentApplication>> by_year;
    for (auto& r : usable) by_year[r.filing_year()].push_back(std::move(r));

    Manifest manifest;
    manifest.command = "network";
    manifest.config_sha256 =
        sha256_hex("network|" + years + "|R=" + std::to_string(replicates) +
                   "|seed=" + std::to_string(seed));
    manifest.master_seed = seed;
    manifest.has_seed = true;
    manifest.inputs = {corpus_file_of(corpus)};
    manifest.with_timestamp = common.timestamps;

    CooccurrenceNetwork net;
    bool have_net = false;
    for (auto& [year, recs] : by_year) {
        auto yearly = build_network(recs, year, common.threads);
        net = have_net ? merge_networks(net, yearly) : std::move(yearly);
        net.year_t = year;
        have_net = true;
        if (year < year_a) continue;

        char name[64];
        std::snprintf(name, sizeof(name), "network_%04d.csv", year);
        const fs::path net_path = fs::path(out_dir) / name;
        save_network_file(net, net_path.string());
        manifest.outputs.push_back(net_path.string());

        NullModelConfig config;
        config.replicates = replicates;
        config.master_seed = split_seed(seed, static_cast<std::uint64_t>(year));
        config.threads = effective_threads(common.threads);
        auto stats = null_stats(net, config);
        auto snapshot = make_snapshot(net, stats);
        std::snprintf(name, sizeof(name), "zscores_%04d.csv", year);
        const fs::path z_path = fs::path(out_dir) / name;
        save_snapshot_file(snapshot, z_path.string());
        manifest.outputs.push_back(z_path.string());
        if (stats.failed_replicates > 0)
            manifest.counters.emplace_back("failed_replicates_" + std::to_string(year),
                                           stats.failed_replicates);
    }
    if (!have_net)
        throw CliError("BAD_ARGS",
                       "no usable records at or below year " + std::to_string(year_b));

    manifest.counters.emplace_back("usable_records", static_cast<std::int64_t>(usable.size()));
    manifest.write((fs::path(out_dir) / "manifest.json").string());
    std::cout << "network: snapshots for years " << year_a << ".." << year_b << " in "
              << out_dir << "\n";
    return 0;
}

int cmd_score(const CommonArgs& common, const std::string& corpus,
              const std::string& snapshots_dir, const std::string& agg_name,
              const std::string& timing_name, const std::string& years,
              const std::string& out_dir) {
    const auto aggregation = aggregation_from_string(agg_name);
    if (!aggregation) throw CliError("BAD_ARGS", "unknown aggregation " + agg_name);
    const auto timing = timing_from_string(timing_name);
    if (!timing) throw CliError("BAD_ARGS", "unknown timing policy " + timing_name);
    ensure_dir(out_dir);

    SnapshotSet snapshots;
    if (!fs::is_directory(snapshots_dir))
        throw CliError("IO_ERROR", "snapshot directory not found: " + snapshots_dir);
    for (const auto& entry : fs::directory_iterator(snapshots_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.starts_with("zscores_") && name.ends_with(".csv")) {
            auto snap = load_snapshot_file(entry.path().string());
            snapshots.by_year[snap.year_t] = std::move(snap);
        }
    }
    if (snapshots.by_year.empty())
        throw CliError("IO_ERROR", "no zscores_*.csv snapshots in " + snapshots_dir);

    auto records = load_corpus(corpus, common.threads);
    const int offset = *timing == TimingPolicy::prior_year ? 1 : 0;
    int min_year, max_year;
    if (years.empty()) {
        min_year = snapshots.by_year.begin()->first + offset;
        max_year = snapshots.by_year.rbegin()->first + offset;
    } else {
        std::tie(min_year, max_year) = parse_year_range(years);
    }
    CorpusFilter filter;
    filter.min_year = min_year;
    filter.max_year = max_year;
    auto scoreable = filter_scoreable(records, filter);

    std::vector<ScoreResult> scores;
    try {
        scores = score_corpus(scoreable, snapshots, *aggregation, *timing, common.threads);
    } catch (const SnapshotMissingError& e) {
        throw CliError("SNAPSHOT_MISSING", e.what());
    }

    const fs::path scores_path = fs::path(out_dir) / "scores.csv";
    {
        auto out = open_out(scores_path);
        write_score_table(out, scores);
    }
    std::int64_t undefined = 0;
    for (const auto& s : scores) undefined += s.p_atypical ? 0 : 1;

    Manifest manifest;
    manifest.command = "score";
    manifest.config_sha256 = sha256_hex("score|" + agg_name + "|" + timing_name + "|" + years);
    manifest.inputs = {corpus_file_of(corpus), snapshots_dir};
    manifest.outputs = {scores_path.string()};
    manifest.counters = {{"scored", static_cast<std::int64_t>(scores.size())},
                         {"undefined", undefined}};
    manifest.with_timestamp = common.timestamps;
    manifest.write((fs::path(out_dir) / "manifest.json").string());
    std::cout << "score: " << scores.size() << " records scored (" << undefined
              << " undefined) in " << out_dir << "\n";
    return 0;
}

int cmd_synth(const CommonArgs& common, const std::string& params_file, std::uint64_t seed,
              const std::string& out_file) {
    SynthParams params;
    try {
        params = SynthParams::from_json_file(params_file);
    } catch (const InfeasibleParamsError& e) {
        throw CliError("INFEASIBLE_PARAMS", e.what());
    } catch (const std::exception& e) {
        throw CliError("CONFIG_INVALID", e.what());
    }
    std::vector<PatentApplication> records;
    try {
        records = synth_corpus(params, seed);
    } catch (const InfeasibleParamsError& e) {
        throw CliError("INFEASIBLE_PARAMS", e.what());
    }
    if (const auto parent = fs::path(out_file).parent_path(); !parent.empty())
        ensure_dir(parent.string());
    {
        auto out = open_out(out_file);
        write_corpus(out, records);
    }
    Manifest manifest;
    manifest.command = "synth";
    manifest.config_sha256 = sha256_hex(read_file(params_file));
    manifest.master_seed = seed;
    manifest.has_seed = true;
    manifest.inputs = {params_file};
    manifest.outputs = {out_file};
    manifest.counters = {{"records", static_cast<std::int64_t>(records.size())}};
    manifest.with_timestamp = common.timestamps;
    manifest.write(out_file + ".manifest.json");
    std::cout << "synth: " << records.size() << " records -> " << out_file << "\n";
    return 0;
}

int cmd_estimate(const CommonArgs& common, const std::string& formula,
                 const std::string& params_file, const std::string& out_file) {
    json params;
    try {
        params = json::parse(read_file(params_file));
    } catch (const CliError&) {
        throw;
    } catch (const std::exception& e) {
        throw CliError("CONFIG_INVALID", std::string("params not valid JSON: ") + e.what());
    }
    auto need = [&](const char* key) {
        if (!params.contains(key))
            throw CliError("CONFIG_INVALID", std::string("params missing \"") + key + "\"");
        return params.at(key);
    };

    EstimatorReport report;
    if (formula == "lost_value") {
        report = report_lost_value(
            need("n_apps").get<std::int64_t>(), need("rate_men").get<double>(),
            need("rate_women").get<double>(), need("per_patent_value").get<double>());
    } else if (formula == "reassignment_gain") {
        report = report_reassignment_gain(need("rate_high").get<double>(),
                                          need("rate_low").get<double>(),
                                          need("reassigned_fraction").get<double>());
    } else if (formula == "over_assignment") {
        const std::string corpus = need("corpus").get<std::string>();
        const std::string dict_path = need("gender_dict").get<std::string>();
        const double threshold = params.value("threshold", 0.5);
        auto records = load_corpus(corpus, common.threads);
        auto dict = GenderDict::load_file(dict_path);
        auto rows = assignment_rows(records, dict, threshold);
        if (rows.rows.empty())
            throw CliError("CONFIG_INVALID",
                           "no single-gender teams with determined examiners");
        report = report_over_assignment(rows.rows);
        report.inputs.emplace_back("n_dropped", static_cast<double>(rows.n_dropped));
    } else {
        throw CliError("BAD_ARGS", "unknown formula " + formula);
    }

    const std::string text = report.to_json();
    std::cout << text << "\n";
    if (!out_file.empty()) {
        if (const auto parent = fs::path(out_file).parent_path(); !parent.empty())
            ensure_dir(parent.string());
        auto out = open_out(out_file);
        out << text << '\n';

        Manifest manifest;
        manifest.command = "estimate";
        manifest.config_sha256 = sha256_hex(read_file(params_file));
        manifest.inputs = {params_file};
        manifest.outputs = {out_file};
        manifest.with_timestamp = common.timestamps;
        manifest.write(out_file + ".manifest.json");
    }
    return 0;
}

// --- analyze recipes -------------------------------------------------------

void run_glm_recipe(const Recipe& recipe, const DataTable& frame_table,
                    const fs::path& out_path, unsigned threads, Manifest& manifest) {
    GlmSpec spec;
    const std::string family = recipe.spec.value("family", "logistic");
    if (family == "logistic")
        spec.family = GlmSpec::Family::logistic;
    else if (family == "linear")
        spec.family = GlmSpec::Family::linear;
    else
        throw ConfigError("recipe " + recipe.name + ": unknown family " + family);
    if (!recipe.spec.contains("response"))
        throw ConfigError("recipe " + recipe.name + ": missing response");
    spec.response = recipe.spec.at("response").get<std::string>();

    std::vector<std::string> required = {spec.response};
    for (const auto& c : recipe.spec.value("continuous", std::vector<std::string>{})) {
        spec.terms.push_back(GlmTerm::cont(c));
        required.push_back(c);
    }
    for (const auto& f : recipe.spec.value("fixed_effects", std::vector<std::string>{}))
        spec.terms.push_back(GlmTerm::fe(f));
    if (recipe.spec.contains("interactions"))
        for (const auto& pair : recipe.spec.at("interactions")) {
            if (!pair.is_array() || pair.size() != 2)
                throw ConfigError("recipe " + recipe.name + ": interactions must be pairs");
            spec.terms.push_back(
                GlmTerm::inter(pair[0].get<std::string>(), pair[1].get<std::string>()));
        }
    if (recipe.spec.contains("cluster"))
        spec.cluster = recipe.spec.at("cluster").get<std::string>();

    // drop rows with nulls in any numeric column the model touches
    std::vector<std::string> numeric_needed;
    for (const auto& col : required)
        if (frame_table.is_numeric(col)) numeric_needed.push_back(col);
    auto complete = complete_rows(frame_table, numeric_needed);
    manifest.counters.emplace_back("recipe_" + recipe.name + "_null_dropped",
                                   static_cast<std::int64_t>(complete.n_dropped));

    auto fit = fit_glm(spec, complete.table, threads);
    auto out = open_out(out_path);
    write_glm_fit(out, fit);
}

void run_binned_scatter_recipe(const Recipe& recipe, const DataTable& table,
                               const fs::path& out_path, Manifest& manifest) {
    const std::string x = recipe.spec.value("x", "p_atypical");
    const std::string y = recipe.spec.value("y", "granted");
    const int bins = recipe.spec.value("bins", 85);
    auto complete = complete_rows(table, std::vector<std::string>{x, y});
    manifest.counters.emplace_back("recipe_" + recipe.name + "_null_dropped",
                                   static_cast<std::int64_t>(complete.n_dropped));
    auto points = binned_scatter(complete.table.numeric(x), complete.table.numeric(y), bins);
    auto out = open_out(out_path);
    write_binned_scatter(out, points);
}

void run_quantile_grid_recipe(const Recipe& recipe, const DataTable& table,
                              const fs::path& out_path, Manifest& manifest) {
    const std::string x1 = recipe.spec.value("x1", "examiner_experience");
    const std::string x2 = recipe.spec.value("x2", "p_atypical");
    const std::string y = recipe.spec.value("y", "granted");
    const int q = recipe.spec.value("q", 10);
    auto complete = complete_rows(table, std::vector<std::string>{x1, x2, y});
    manifest.counters.emplace_back("recipe_" + recipe.name + "_null_dropped",
                                   static_cast<std::int64_t>(complete.n_dropped));
    auto grid = quantile_grid(complete.table.numeric(x1), complete.table.numeric(x2),
                              complete.table.numeric(y), q);
    auto out = open_out(out_path);
    write_quantile_grid(out, grid);
}

void run_reversal_recipe(const Recipe& recipe, const DataTable& table,
                         const fs::path& out_path, Manifest& manifest) {
    const int bins = recipe.spec.value("bins", 3);
    auto complete = complete_rows(
        table, std::vector<std::string>{"examiner_experience", "p_atypical", "appealed"});
    manifest.counters.emplace_back("recipe_" + recipe.name + "_null_dropped",
                                   static_cast<std::int64_t>(complete.n_dropped));
    const auto exp_col = complete.table.numeric("examiner_experience");
    const auto p_col = complete.table.numeric("p_atypical");
    const auto appealed_col = complete.table.numeric("appealed");
    const auto reversed_col = complete.table.numeric("reversed");
    std::vector<ReversalObs> rows;
    rows.reserve(exp_col.size());
    for (std::size_t i = 0; i < exp_col.size(); ++i)
        rows.push_back({exp_col[i], p_col[i], appealed_col[i] == 1.0,
                        !std::isnan(reversed_col[i]) && reversed_col[i] == 1.0});
    auto result = reversal_rates(rows, bins);

    auto out = open_out(out_path);
    out << "bin,upper_edge,side,n_appealed,n_reversed,rate\n";
    for (int b = 0; b < bins; ++b) {
        for (const std::string side : {"conventional", "unconventional"}) {
            const auto& cell = side == "conventional"
                                   ? result.conventional[static_cast<std::size_t>(b)]
                                   : result.unconventional[static_cast<std::size_t>(b)];
            out << b << ','
                << format_double(result.bin_upper_edges[static_cast<std::size_t>(b)]) << ','
                << side << ',' << cell.n_appealed << ',' << cell.n_reversed << ',';
            if (cell.rate) out << format_double(*cell.rate);
            out << '\n';
        }
    }
}

void run_survivorship_recipe(const std::vector<PatentApplication>& records,
                             const GenderDict& dict, double threshold,
                             const fs::path& out_path) {
    std::set<std::string> classes;
    for (const auto& r : records)
        if (!r.cpc_codes.empty()) classes.insert(std::string(r.focal_code().cpc_class()));
    auto out = open_out(out_path);
    out << "cpc_class,survivorship_index\n";
    for (const auto& cls : classes) {
        try {
            out << cls << ','
                << format_double(survivorship_index(records, cls, dict, threshold)) << '\n';
        } catch (const std::invalid_argument&) {
            out << cls << ",\n";  // no gender-determined examiner in this class
        }
    }
}

int cmd_analyze(const CommonArgs& common, const std::string& recipe_name,
                const std::string& config_file) {
    RunConfig config;
    const Recipe* recipe = nullptr;
    try {
        config = RunConfig::load_file(config_file);
        recipe = &config.require_recipe(recipe_name);
    } catch (const ConfigError& e) {
        throw CliError("CONFIG_INVALID", e.what());
    }
    ensure_dir(config.output_dir);

    auto records = load_corpus(config.corpus_path, common.threads);
    auto dict = GenderDict::load_file(config.gender_dict_path);

    Manifest manifest;
    manifest.command = "analyze:" + recipe_name;
    manifest.config_sha256 = sha256_hex(config.raw_json);
    manifest.master_seed = config.master_seed;
    manifest.has_seed = true;
    manifest.inputs = {config.corpus_path, config.scores_path, config.gender_dict_path};
    manifest.with_timestamp = common.timestamps;

    const fs::path out_path = fs::path(config.output_dir) / (recipe_name + ".csv");

    if (recipe->type == "survivorship") {
        run_survivorship_recipe(records, dict, config.gender_threshold, out_path);
    } else {
        std::ifstream scores_in(config.scores_path);
        if (!scores_in) throw CliError("IO_ERROR", "cannot open " + config.scores_path);
        auto scores = read_score_table(scores_in);

        FrameOptions options;
        options.gender_threshold = config.gender_threshold;
        options.max_unknown_share = config.max_unknown_share;
        auto frame = build_analysis_frame(records, scores, dict, options);
        manifest.counters = {
            {"frame_rows", static_cast<std::int64_t>(frame.n_rows)},
            {"dropped_pending", static_cast<std::int64_t>(frame.n_dropped_pending)},
            {"dropped_unscored", static_cast<std::int64_t>(frame.n_dropped_unscored)},
            {"dropped_gender", static_cast<std::int64_t>(frame.n_dropped_gender)},
            {"dropped_missing", static_cast<std::int64_t>(frame.n_dropped_missing)},
        };

        try {
            if (recipe->type == "glm")
                run_glm_recipe(*recipe, frame.table, out_path, common.threads, manifest);
            else if (recipe->type == "binned_scatter")
                run_binned_scatter_recipe(*recipe, frame.table, out_path, manifest);
            else if (recipe->type == "quantile_grid")
                run_quantile_grid_recipe(*recipe, frame.table, out_path, manifest);
            else if (recipe->type == "reversal_rates")
                run_reversal_recipe(*recipe, frame.table, out_path, manifest);
            else
                throw CliError("CONFIG_INVALID", "unknown recipe type " + recipe->type);
        } catch (const ConfigError& e) {
            throw CliError("CONFIG_INVALID", e.what());
        }
    }

    manifest.outputs = {out_path.string()};
    manifest.write((fs::path(config.output_dir) / (recipe_name + ".manifest.json")).string());
    std::cout << "analyze: recipe " << recipe_name << " -> " << out_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"patent unconventionality scoring and analysis pipeline"};
    app.require_subcommand(1);

    CommonArgs common;
    app.add_option("--threads", common.threads,
                   "worker threads (0 = hardware); never affects numeric output");
    app.add_flag("--timestamps", common.timestamps, "include a timestamp in manifests");

    auto* ingest = app.add_subcommand("ingest", "validate a JSON-Lines corpus");
    std::string ingest_in, ingest_out;
    bool ingest_strict = false;
    ingest->add_option("--in", ingest_in, "input JSON-Lines file")->required();
    ingest->add_option("--out", ingest_out, "output directory")->required();
    ingest->add_flag("--strict", ingest_strict, "abort on the first invalid line");

    auto* network = app.add_subcommand("network", "build cumulative networks and z-scores");
    std::string net_corpus, net_years, net_out;
    int net_replicates = 100;
    std::uint64_t net_seed = 0;
    network->add_option("--corpus", net_corpus, "corpus directory or file")->required();
    network->add_option("--years", net_years, "snapshot year range A:B")->required();
    network->add_option("--out", net_out, "output directory")->required();
    network->add_option("--replicates", net_replicates, "null-model replicates per year");
    network->add_option("--seed", net_seed, "master seed (required, no entropy default)")
        ->required();

    auto* score = app.add_subcommand("score", "score patents against z-score snapshots");
    std::string score_corpus, score_snapshots, score_agg = "min", score_timing = "prior";
    std::string score_years, score_out;
    score->add_option("--corpus", score_corpus, "corpus directory or file")->required();
    score->add_option("--snapshots", score_snapshots, "snapshot directory")->required();
    score->add_option("--agg", score_agg, "aggregation: min|mean|median");
    score->add_option("--timing", score_timing, "snapshot timing: prior|same");
    score->add_option("--years", score_years, "filing-year range A:B (default: from snapshots)");
    score->add_option("--out", score_out, "output directory")->required();

    auto* analyze = app.add_subcommand("analyze", "run a named analysis recipe");
    std::string analyze_recipe, analyze_config;
    analyze->add_option("--recipe", analyze_recipe, "recipe name from the config")->required();
    analyze->add_option("--config", analyze_config, "run-config JSON file")->required();

    auto* estimate = app.add_subcommand("estimate", "closed-form estimators");
    std::string est_formula, est_params, est_out;
    estimate
        ->add_option("--formula", est_formula, "lost_value|reassignment_gain|over_assignment")
        ->required();
    estimate->add_option("--params", est_params, "JSON parameter file")->required();
    estimate->add_option("--out", est_out, "optional output report path");

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    std::string synth_params, synth_out = "synth_corpus.jsonl";
    std::uint64_t synth_seed = 0;
    synth->add_option("--params", synth_params, "JSON parameter file")->required();
    synth->add_option("--seed", synth_seed, "generator seed")->required();
    synth->add_option("--out", synth_out, "output JSON-Lines path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) return cmd_ingest(common, ingest_in, ingest_out, ingest_strict);
        if (*network)
            return cmd_network(common, net_corpus, net_years, net_out, net_replicates,
                               net_seed);
        if (*score)
            return cmd_score(common, score_corpus, score_snapshots, score_agg, score_timing,
                             score_years, score_out);
        if (*analyze) return cmd_analyze(common, analyze_recipe, analyze_config);
        if (*estimate) return cmd_estimate(common, est_formula, est_params, est_out);
        if (*synth) return cmd_synth(common, synth_params, synth_seed, synth_out);
    } catch (const CliError& e) {
        json err;
        err["error"] = {{"code", e.code}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        json err;
        err["error"] = {{"code", "INTERNAL"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
