#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "patnet/corpus.hpp"
#include "patnet/scoring.hpp"

namespace patnet::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One named analysis recipe from the run config. The raw JSON object is
/// kept so each recipe type can pull its own fields.
struct Recipe {
    std::string name;
    std::string type;  // glm | binned_scatter | quantile_grid | reversal_rates | survivorship
    nlohmann::json spec;
};

/// Declarative run configuration. All randomness flows from master_seed,
/// which must be explicit; referenced paths are checked at validation time.
struct RunConfig {
    std::string corpus_path;
    std::string scores_path;
    std::string gender_dict_path;
    double gender_threshold = 0.5;
    double max_unknown_share = 0.0;

    CorpusFilter filter;
    int null_replicates = 100;
    std::uint64_t master_seed = 0;
    Aggregation aggregation = Aggregation::min;
    TimingPolicy timing = TimingPolicy::prior_year;

    std::string output_dir;
    std::map<std::string, Recipe> recipes;

    std::string raw_json;  // canonical bytes for hashing

    static RunConfig load_file(const std::string& path);
    const Recipe& require_recipe(const std::string& name) const;
};

}  // namespace patnet::cli
