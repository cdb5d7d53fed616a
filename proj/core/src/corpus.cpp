#include "patnet/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "patnet/csv.hpp"
#include "patnet/parallel.hpp"

namespace patnet {

using nlohmann::json;

std::string_view to_string(Country c) {
    switch (c) {
        case Country::US: return "US";
        case Country::UK: return "UK";
        case Country::CA: return "CA";
    }
    return "US";
}

std::string_view to_string(AppStatus s) {
    switch (s) {
        case AppStatus::granted: return "granted";
        case AppStatus::abandoned: return "abandoned";
        case AppStatus::pending: return "pending";
    }
    return "pending";
}

std::optional<Country> country_from_string(std::string_view s) {
    if (s == "US") return Country::US;
    if (s == "UK") return Country::UK;
    if (s == "CA") return Country::CA;
    return std::nullopt;
}

std::optional<AppStatus> status_from_string(std::string_view s) {
    if (s == "granted") return AppStatus::granted;
    if (s == "abandoned") return AppStatus::abandoned;
    if (s == "pending") return AppStatus::pending;
    return std::nullopt;
}

std::vector<CpcCode> PatentApplication::distinct_subclasses() const {
    std::vector<CpcCode> out;
    out.reserve(cpc_codes.size());
    for (const CpcCode& c : cpc_codes) {
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    return out;
}

std::optional<std::string> validate_record(const PatentApplication& app) {
    if (app.app_id.empty()) return "app_id empty";
    if (app.cpc_codes.empty()) return "cpc_codes empty";
    if (app.status == AppStatus::granted && !app.grant_date)
        return "grant_date missing";
    if (app.status != AppStatus::granted && app.grant_date)
        return "grant_date present on non-granted record";
    if (app.reversed.has_value() && !(app.appealed.has_value() && *app.appealed))
        return "reversed present without appealed=true";
    if (app.n_claims_app && *app.n_claims_app < 0) return "n_claims_app negative";
    if (app.n_claims_grant && *app.n_claims_grant < 0) return "n_claims_grant negative";
    if (app.citation_count_8yr && *app.citation_count_8yr < 0)
        return "citation_count_8yr negative";
    if (app.credit_hours && *app.credit_hours < 0) return "credit_hours negative";
    return std::nullopt;
}

StrictParseError::StrictParseError(std::size_t line_no, const std::string& why)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + why),
      line(line_no),
      reason(why) {}

namespace {

// Either a record or a rejection reason for one line.
struct LineResult {
    std::optional<PatentApplication> record;
    std::string reason;
};

template <class T>
std::optional<T> opt_field(const json& j, const char* name);

template <>
std::optional<std::string> opt_field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw std::runtime_error(std::string(name) + " not a string");
    return it->get<std::string>();
}

template <>
std::optional<bool> opt_field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_boolean()) throw std::runtime_error(std::string(name) + " not a boolean");
    return it->get<bool>();
}

template <>
std::optional<int> opt_field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer())
        throw std::runtime_error(std::string(name) + " not an integer");
    return it->get<int>();
}

template <>
std::optional<double> opt_field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) throw std::runtime_error(std::string(name) + " not a number");
    return it->get<double>();
}

LineResult parse_line(const std::string& line) {
    LineResult out;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        out.reason = "malformed JSON";
        return out;
    }
    try {
        PatentApplication app;
        auto require_string = [&](const char* name) {
            auto v = opt_field<std::string>(j, name);
            if (!v) throw std::runtime_error(std::string(name) + " missing");
            return *v;
        };

        app.app_id = require_string("app_id");
        auto country = country_from_string(require_string("country"));
        if (!country) throw std::runtime_error("unknown country");
        app.country = *country;

        auto filing = Date::parse(require_string("filing_date"));
        if (!filing) throw std::runtime_error("bad filing_date");
        app.filing_date = *filing;

        if (auto g = opt_field<std::string>(j, "grant_date")) {
            auto d = Date::parse(*g);
            if (!d) throw std::runtime_error("bad grant_date");
            app.grant_date = *d;
        }

        auto status = status_from_string(require_string("status"));
        if (!status) throw std::runtime_error("unknown status");
        app.status = *status;

        auto codes_it = j.find("cpc_codes");
        if (codes_it == j.end() || !codes_it->is_array() || codes_it->empty())
            throw std::runtime_error("cpc_codes missing or empty");
        for (const auto& c : *codes_it) {
            if (!c.is_string()) throw std::runtime_error("cpc code not a string");
            auto code = CpcCode::parse(c.get<std::string>());
            if (!code)
                throw std::runtime_error("invalid CPC string \"" + c.get<std::string>() + "\"");
            app.cpc_codes.push_back(*code);
        }

        auto inventors_it = j.find("inventor_names");
        if (inventors_it != j.end() && !inventors_it->is_null()) {
            if (!inventors_it->is_array())
                throw std::runtime_error("inventor_names not an array");
            for (const auto& n : *inventors_it) {
                if (!n.is_string()) throw std::runtime_error("inventor name not a string");
                app.inventor_names.push_back(n.get<std::string>());
            }
        }

        app.examiner_id = opt_field<std::string>(j, "examiner_id");
        app.examiner_name = opt_field<std::string>(j, "examiner_name");
        app.big_entity = opt_field<bool>(j, "big_entity");
        app.n_claims_app = opt_field<int>(j, "n_claims_app");
        app.n_claims_grant = opt_field<int>(j, "n_claims_grant");
        app.citation_count_8yr = opt_field<int>(j, "citation_count_8yr");
        app.maintenance_fee_paid = opt_field<bool>(j, "maintenance_fee_paid");
        app.credit_hours = opt_field<double>(j, "credit_hours");
        app.appealed = opt_field<bool>(j, "appealed");
        app.reversed = opt_field<bool>(j, "reversed");

        if (auto reason = validate_record(app)) throw std::runtime_error(*reason);
        out.record = std::move(app);
    } catch (const std::exception& e) {
        out.reason = e.what();
    }
    return out;
}

}  // namespace

ParsedCorpus parse_corpus(std::istream& in, bool strict, unsigned threads) {
    std::vector<std::string> lines;
    std::vector<std::size_t> line_numbers;
    std::string line;
    std::size_t lineno = 0;
    while (read_line(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        lines.push_back(line);
        line_numbers.push_back(lineno);
    }

    std::vector<LineResult> results(lines.size());
    for_each_chunk(lines.size(), 1024, threads,
                   [&](std::size_t, std::size_t begin, std::size_t end) {
                       for (std::size_t i = begin; i < end; ++i)
                           results[i] = parse_line(lines[i]);
                   });

    ParsedCorpus out;
    out.report.n_lines = lines.size();
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].record) {
            out.records.push_back(std::move(*results[i].record));
        } else {
            if (strict) throw StrictParseError(line_numbers[i], results[i].reason);
            out.report.errors.push_back({line_numbers[i], results[i].reason});
        }
    }
    out.report.n_accepted = out.records.size();
    return out;
}

ParsedCorpus parse_corpus_file(const std::string& path, bool strict, unsigned threads) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    return parse_corpus(in, strict, threads);
}

void ParseReport::write_csv(std::ostream& out) const {
    out << "line,reason\n";
    for (const auto& e : errors)
        out << e.line << ',' << csv_escape(e.reason) << '\n';
}

namespace {

json to_json_object(const PatentApplication& app) {
    json j;
    j["app_id"] = app.app_id;
    j["country"] = std::string(to_string(app.country));
    j["filing_date"] = app.filing_date.to_string();
    j["grant_date"] = app.grant_date ? json(app.grant_date->to_string()) : json(nullptr);
    j["status"] = std::string(to_string(app.status));
    json codes = json::array();
    for (const CpcCode& c : app.cpc_codes) codes.push_back(c.str());
    j["cpc_codes"] = std::move(codes);
    j["inventor_names"] = app.inventor_names;
    auto set_opt = [&j](const char* name, const auto& v) {
        if (v)
            j[name] = *v;
        else
            j[name] = nullptr;
    };
    set_opt("examiner_id", app.examiner_id);
    set_opt("examiner_name", app.examiner_name);
    set_opt("big_entity", app.big_entity);
    set_opt("n_claims_app", app.n_claims_app);
    set_opt("n_claims_grant", app.n_claims_grant);
    set_opt("citation_count_8yr", app.citation_count_8yr);
    set_opt("maintenance_fee_paid", app.maintenance_fee_paid);
    set_opt("credit_hours", app.credit_hours);
    set_opt("appealed", app.appealed);
    set_opt("reversed", app.reversed);
    return j;
}

}  // namespace

std::string to_jsonl(const PatentApplication& app) {
    return to_json_object(app).dump();
}

void write_corpus(std::ostream& out, std::span<const PatentApplication> records) {
    for (const auto& r : records) out << to_jsonl(r) << '\n';
}

std::vector<PatentApplication> filter_scoreable(std::span<const PatentApplication> records,
                                                const CorpusFilter& filter) {
    if (filter.min_year > filter.max_year)
        throw std::invalid_argument("CorpusFilter: min_year > max_year");
    if (filter.min_subclasses < 2)
        throw std::invalid_argument("CorpusFilter: min_subclasses must be >= 2");
    std::vector<PatentApplication> out;
    for (const auto& r : records) {
        const int year = r.filing_year();
        if (year < filter.min_year || year > filter.max_year) continue;
        if (!filter.countries.contains(r.country)) continue;
        auto distinct = r.distinct_subclasses();
        if (static_cast<int>(distinct.size()) < filter.min_subclasses) continue;
        PatentApplication kept = r;
        kept.cpc_codes = std::move(distinct);
        out.push_back(std::move(kept));
    }
    return out;
}

}  // namespace patnet
