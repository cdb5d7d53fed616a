#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

namespace patnet {

enum class Gender { woman, man, unknown };

std::string_view to_string(Gender g);

struct GenderLabel {
    Gender value = Gender::unknown;
    std::optional<double> probability;  // unset for unknown
};

/// Version of the name normalization table. Bump only with a migration note;
/// normalized keys are part of every downstream artifact.
inline constexpr int kNameNormalizationVersion = 1;

/// Case-folds, trims, and strips diacritics from a first name using a fixed
/// table over the Latin-1 supplement and Latin Extended-A blocks. Unmapped
/// non-ASCII bytes pass through unchanged (such names simply miss the
/// dictionary and resolve to unknown).
std::string normalize_name(std::string_view name);

/// Immutable after load; lookups are safe from any number of threads.
class GenderDict {
public:
    /// CSV with columns name,gender,probability. gender is "woman" or "man";
    /// probability must lie in [0,1]. Duplicate normalized names keep the
    /// higher-probability row.
    static GenderDict load(std::istream& in);
    static GenderDict load_file(const std::string& path);

    std::optional<std::pair<Gender, double>> lookup(std::string_view normalized_name) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, std::pair<Gender, double>> entries_;
};

/// Looks up the first token of full_name. Initials (single letters with
/// optional periods, e.g. "J." or "J.K.") resolve to unknown, as do names
/// missing from the dictionary or below the probability threshold.
GenderLabel infer_gender(std::string_view full_name, const GenderDict& dict,
                         double threshold = 0.5);

struct TeamComposition {
    enum class ThreeWay { men_majority, women_majority, mixed_50_50 };

    int n_total = 0;
    int n_women = 0;
    int n_men = 0;
    int n_unknown = 0;

    /// Fields below are computed over determined members only and are unset
    /// when the whole team is of unknown gender (classifiable == false).
    std::optional<double> prop_women;
    std::optional<bool> women_majority;  // n_women/(n_women+n_men) >= 0.5
    std::optional<ThreeWay> three_way;

    bool all_women = false;  // n_women == n_total
    bool all_men = false;    // n_men == n_total
    bool classifiable = false;
    GenderLabel first_inventor_gender;
    int team_size_capped = 1;  // min(n_total, 5)

    double frac_unknown() const {
        return n_total == 0 ? 0.0 : static_cast<double>(n_unknown) / n_total;
    }
};

/// Throws std::invalid_argument on an empty label list.
TeamComposition team_composition(std::span<const GenderLabel> labels);

}  // namespace patnet
