#include "runconfig.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace patnet::cli {

using nlohmann::json;

RunConfig RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();

    RunConfig config;
    config.raw_json = buf.str();
    json j;
    try {
        j = json::parse(config.raw_json);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    auto require_path = [&](const char* key) {
        if (!j.contains(key) || !j.at(key).is_string())
            throw ConfigError(std::string("config missing required path \"") + key + "\"");
        const std::string p = j.at(key).get<std::string>();
        if (!std::filesystem::exists(p))
            throw ConfigError(std::string(key) + " does not exist: " + p);
        return p;
    };

    config.corpus_path = require_path("corpus");
    config.scores_path = require_path("scores");
    config.gender_dict_path = require_path("gender_dict");
    config.gender_threshold = j.value("gender_threshold", 0.5);
    config.max_unknown_share = j.value("max_unknown_share", 0.0);

    if (!j.contains("master_seed") || !j.at("master_seed").is_number())
        throw ConfigError("config must set master_seed explicitly");
    config.master_seed = j.at("master_seed").get<std::uint64_t>();

    if (j.contains("filter")) {
        const auto& f = j.at("filter");
        config.filter.min_year = f.value("min_year", config.filter.min_year);
        config.filter.max_year = f.value("max_year", config.filter.max_year);
        config.filter.min_subclasses = f.value("min_subclasses", config.filter.min_subclasses);
        if (f.contains("countries")) {
            config.filter.countries.clear();
            for (const auto& c : f.at("countries")) {
                auto parsed = country_from_string(c.get<std::string>());
                if (!parsed) throw ConfigError("unknown country in filter");
                config.filter.countries.insert(*parsed);
            }
        }
    }
    if (j.contains("null_model"))
        config.null_replicates = j.at("null_model").value("replicates", 100);
    if (j.contains("scoring")) {
        const auto& s = j.at("scoring");
        if (s.contains("aggregation")) {
            auto agg = aggregation_from_string(s.at("aggregation").get<std::string>());
            if (!agg) throw ConfigError("unknown scoring.aggregation");
            config.aggregation = *agg;
        }
        if (s.contains("timing")) {
            auto t = timing_from_string(s.at("timing").get<std::string>());
            if (!t) throw ConfigError("unknown scoring.timing");
            config.timing = *t;
        }
    }

    if (!j.contains("output_dir") || !j.at("output_dir").is_string())
        throw ConfigError("config missing output_dir");
    config.output_dir = j.at("output_dir").get<std::string>();

    if (j.contains("recipes")) {
        for (const auto& [name, spec] : j.at("recipes").items()) {
            Recipe r;
            r.name = name;
            if (!spec.contains("type"))
                throw ConfigError("recipe " + name + " missing type");
            r.type = spec.at("type").get<std::string>();
            r.spec = spec;
            config.recipes.emplace(name, std::move(r));
        }
    }
    return config;
}

const Recipe& RunConfig::require_recipe(const std::string& name) const {
    auto it = recipes.find(name);
    if (it == recipes.end()) throw ConfigError("no recipe named \"" + name + "\" in config");
    return it->second;
}

}  // namespace patnet::cli
