#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "patnet/cpc.hpp"
#include "patnet/date.hpp"

namespace patnet {

enum class Country { US, UK, CA };
enum class AppStatus { granted, abandoned, pending };

std::string_view to_string(Country c);
std::string_view to_string(AppStatus s);
std::optional<Country> country_from_string(std::string_view s);
std::optional<AppStatus> status_from_string(std::string_view s);

/// One patent application record. Field names in the JSON-Lines schema match
/// the member names. Optional members are serialized as explicit nulls.
struct PatentApplication {
    std::string app_id;
    Country country = Country::US;
    Date filing_date;
    std::optional<Date> grant_date;
    AppStatus status = AppStatus::pending;
    std::vector<CpcCode> cpc_codes;  // element 0 is the focal code
    std::vector<std::string> inventor_names;
    std::optional<std::string> examiner_id;
    std::optional<std::string> examiner_name;
    std::optional<bool> big_entity;
    std::optional<int> n_claims_app;
    std::optional<int> n_claims_grant;
    std::optional<int> citation_count_8yr;
    std::optional<bool> maintenance_fee_paid;
    std::optional<double> credit_hours;
    std::optional<bool> appealed;
    std::optional<bool> reversed;

    int filing_year() const { return filing_date.year; }
    const CpcCode& focal_code() const { return cpc_codes.front(); }

    /// Subclasses deduplicated, first occurrence order preserved.
    std::vector<CpcCode> distinct_subclasses() const;
};

/// Checks the record invariants; returns a reason string on failure.
std::optional<std::string> validate_record(const PatentApplication& app);

struct ParseError {
    std::size_t line = 0;  // 1-based
    std::string reason;
};

struct ParseReport {
    std::size_t n_lines = 0;
    std::size_t n_accepted = 0;
    std::vector<ParseError> errors;

    /// CSV with columns line,reason.
    void write_csv(std::ostream& out) const;
};

struct ParsedCorpus {
    std::vector<PatentApplication> records;  // input order
    ParseReport report;
};

/// Thrown by parse_corpus in strict mode on the first bad line.
class StrictParseError : public std::runtime_error {
public:
    StrictParseError(std::size_t line, const std::string& reason);
    std::size_t line;
    std::string reason;
};

/// Parses JSON-Lines input. Lines are independent, so decoding is
/// chunk-parallel; output order always equals input order. Blank lines are
/// skipped. strict=true throws StrictParseError at the first rejected line.
ParsedCorpus parse_corpus(std::istream& in, bool strict, unsigned threads = 1);
ParsedCorpus parse_corpus_file(const std::string& path, bool strict, unsigned threads = 1);

/// One JSON object per record, exact schema, no trailing newline.
std::string to_jsonl(const PatentApplication& app);
void write_corpus(std::ostream& out, std::span<const PatentApplication> records);

struct CorpusFilter {
    int min_year = 2002;
    int max_year = 2018;
    int min_subclasses = 2;
    std::set<Country> countries = {Country::US, Country::UK, Country::CA};
};

/// Keeps records filed in [min_year, max_year] from the given countries whose
/// deduplicated subclass set has at least min_subclasses entries. Returned
/// records carry the deduplicated code list (focal still first), so no later
/// stage can double-count a subclass. Idempotent.
std::vector<PatentApplication> filter_scoreable(std::span<const PatentApplication> records,
                                                const CorpusFilter& filter);

}  // namespace patnet
