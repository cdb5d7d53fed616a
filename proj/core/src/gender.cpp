#include "patnet/gender.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <stdexcept>

#include "patnet/csv.hpp"

namespace patnet {

std::string_view to_string(Gender g) {
    switch (g) {
        case Gender::woman: return "woman";
        case Gender::man: return "man";
        case Gender::unknown: return "unknown";
    }
    return "unknown";
}

namespace {

// Diacritic folding for Latin-1 supplement (U+00C0..U+00FF) and the parts of
// Latin Extended-A (U+0100..U+017F) that appear in personal names. Keyed by
// Unicode code point, value is the ASCII replacement (possibly two chars).
struct FoldEntry {
    std::uint32_t cp;
    const char* ascii;
};

constexpr FoldEntry kFoldTable[] = {
    {0x00C0, "a"}, {0x00C1, "a"}, {0x00C2, "a"}, {0x00C3, "a"}, {0x00C4, "a"},
    {0x00C5, "a"}, {0x00C6, "ae"}, {0x00C7, "c"}, {0x00C8, "e"}, {0x00C9, "e"},
    {0x00CA, "e"}, {0x00CB, "e"}, {0x00CC, "i"}, {0x00CD, "i"}, {0x00CE, "i"},
    {0x00CF, "i"}, {0x00D0, "d"}, {0x00D1, "n"}, {0x00D2, "o"}, {0x00D3, "o"},
    {0x00D4, "o"}, {0x00D5, "o"}, {0x00D6, "o"}, {0x00D8, "o"}, {0x00D9, "u"},
    {0x00DA, "u"}, {0x00DB, "u"}, {0x00DC, "u"}, {0x00DD, "y"}, {0x00DE, "th"},
    {0x00DF, "ss"},
    {0x00E0, "a"}, {0x00E1, "a"}, {0x00E2, "a"}, {0x00E3, "a"}, {0x00E4, "a"},
    {0x00E5, "a"}, {0x00E6, "ae"}, {0x00E7, "c"}, {0x00E8, "e"}, {0x00E9, "e"},
    {0x00EA, "e"}, {0x00EB, "e"}, {0x00EC, "i"}, {0x00ED, "i"}, {0x00EE, "i"},
    {0x00EF, "i"}, {0x00F0, "d"}, {0x00F1, "n"}, {0x00F2, "o"}, {0x00F3, "o"},
    {0x00F4, "o"}, {0x00F5, "o"}, {0x00F6, "o"}, {0x00F8, "o"}, {0x00F9, "u"},
    {0x00FA, "u"}, {0x00FB, "u"}, {0x00FC, "u"}, {0x00FD, "y"}, {0x00FE, "th"},
    {0x00FF, "y"},
    {0x0100, "a"}, {0x0101, "a"}, {0x0102, "a"}, {0x0103, "a"}, {0x0104, "a"},
    {0x0105, "a"}, {0x0106, "c"}, {0x0107, "c"}, {0x010C, "c"}, {0x010D, "c"},
    {0x010E, "d"}, {0x010F, "d"}, {0x0110, "d"}, {0x0111, "d"}, {0x0112, "e"},
    {0x0113, "e"}, {0x0116, "e"}, {0x0117, "e"}, {0x0118, "e"}, {0x0119, "e"},
    {0x011A, "e"}, {0x011B, "e"}, {0x011E, "g"}, {0x011F, "g"}, {0x0122, "g"},
    {0x0123, "g"}, {0x012A, "i"}, {0x012B, "i"}, {0x012E, "i"}, {0x012F, "i"},
    {0x0130, "i"}, {0x0131, "i"}, {0x0136, "k"}, {0x0137, "k"}, {0x013B, "l"},
    {0x013C, "l"}, {0x0141, "l"}, {0x0142, "l"}, {0x0143, "n"}, {0x0144, "n"},
    {0x0145, "n"}, {0x0146, "n"}, {0x0147, "n"}, {0x0148, "n"}, {0x014C, "o"},
    {0x014D, "o"}, {0x0150, "o"}, {0x0151, "o"}, {0x0152, "oe"}, {0x0153, "oe"},
    {0x0154, "r"}, {0x0155, "r"}, {0x0158, "r"}, {0x0159, "r"}, {0x015A, "s"},
    {0x015B, "s"}, {0x015E, "s"}, {0x015F, "s"}, {0x0160, "s"}, {0x0161, "s"},
    {0x0162, "t"}, {0x0163, "t"}, {0x0164, "t"}, {0x0165, "t"}, {0x016A, "u"},
    {0x016B, "u"}, {0x016E, "u"}, {0x016F, "u"}, {0x0170, "u"}, {0x0171, "u"},
    {0x0172, "u"}, {0x0173, "u"}, {0x0179, "z"}, {0x017A, "z"}, {0x017B, "z"},
    {0x017C, "z"}, {0x017D, "z"}, {0x017E, "z"},
};

const char* fold_codepoint(std::uint32_t cp) {
    for (const auto& e : kFoldTable)
        if (e.cp == cp) return e.ascii;
    return nullptr;
}

// Decodes one UTF-8 code point at s[i]; advances i past it. Returns 0xFFFD on
// malformed input (consuming one byte).
std::uint32_t decode_utf8(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<std::uint8_t>(s[k]); };
    const std::uint8_t b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    auto cont = [&](std::size_t k) {
        return k < s.size() && (byte(k) & 0xC0) == 0x80;
    };
    if ((b0 & 0xE0) == 0xC0 && cont(i + 1)) {
        const std::uint32_t cp = ((b0 & 0x1Fu) << 6) | (byte(i + 1) & 0x3Fu);
        i += 2;
        return cp;
    }
    if ((b0 & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
        const std::uint32_t cp =
            ((b0 & 0x0Fu) << 12) | ((byte(i + 1) & 0x3Fu) << 6) | (byte(i + 2) & 0x3Fu);
        i += 3;
        return cp;
    }
    if ((b0 & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
        const std::uint32_t cp = ((b0 & 0x07u) << 18) | ((byte(i + 1) & 0x3Fu) << 12) |
                                 ((byte(i + 2) & 0x3Fu) << 6) | (byte(i + 3) & 0x3Fu);
        i += 4;
        return cp;
    }
    ++i;
    return 0xFFFD;
}

void append_codepoint_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

}  // namespace

std::string normalize_name(std::string_view name) {
    // trim ASCII whitespace
    std::size_t b = 0, e = name.size();
    while (b < e && std::isspace(static_cast<unsigned char>(name[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(name[e - 1]))) --e;
    name = name.substr(b, e - b);

    std::string out;
    out.reserve(name.size());
    std::size_t i = 0;
    while (i < name.size()) {
        const std::uint32_t cp = decode_utf8(name, i);
        if (cp < 0x80) {
            out.push_back(static_cast<char>(std::tolower(static_cast<int>(cp))));
        } else if (cp >= 0x0300 && cp <= 0x036F) {
            // combining diacritical marks: drop
        } else if (const char* ascii = fold_codepoint(cp)) {
            out += ascii;
        } else {
            append_codepoint_utf8(out, cp);
        }
    }
    return out;
}

GenderDict GenderDict::load(std::istream& in) {
    GenderDict dict;
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (read_line(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = csv_split(line);
        if (first) {
            first = false;
            if (fields.size() >= 2 && fields[0] == "name") continue;  // header
        }
        if (fields.size() != 3)
            throw std::runtime_error("gender dict line " + std::to_string(lineno) +
                                     ": expected 3 columns");
        Gender g;
        if (fields[1] == "woman")
            g = Gender::woman;
        else if (fields[1] == "man")
            g = Gender::man;
        else
            throw std::runtime_error("gender dict line " + std::to_string(lineno) +
                                     ": unknown gender token \"" + fields[1] + "\"");
        char* endp = nullptr;
        const double p = std::strtod(fields[2].c_str(), &endp);
        if (endp == fields[2].c_str() || *endp != '\0' || p < 0.0 || p > 1.0)
            throw std::runtime_error("gender dict line " + std::to_string(lineno) +
                                     ": probability outside [0,1]");
        std::string key = normalize_name(fields[0]);
        auto [it, inserted] = dict.entries_.try_emplace(key, g, p);
        if (!inserted && p > it->second.second) it->second = {g, p};
    }
    return dict;
}

GenderDict GenderDict::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open gender dictionary: " + path);
    return load(in);
}

std::optional<std::pair<Gender, double>> GenderDict::lookup(
    std::string_view normalized_name) const {
    auto it = entries_.find(std::string(normalized_name));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

namespace {

// "J", "J.", "J.K." and the like carry no first name to look up.
bool is_initials(std::string_view token) {
    if (token.empty()) return false;
    if (token.size() == 1) return std::isalpha(static_cast<unsigned char>(token[0]));
    std::size_t i = 0;
    while (i < token.size()) {
        if (!std::isalpha(static_cast<unsigned char>(token[i]))) return false;
        ++i;
        if (i == token.size()) return token.size() == 1;  // lone trailing letter: not initials
        if (token[i] != '.') return false;
        ++i;
    }
    return true;
}

}  // namespace

GenderLabel infer_gender(std::string_view full_name, const GenderDict& dict,
                         double threshold) {
    // first whitespace-delimited token
    std::size_t b = 0;
    while (b < full_name.size() && std::isspace(static_cast<unsigned char>(full_name[b]))) ++b;
    std::size_t e = b;
    while (e < full_name.size() && !std::isspace(static_cast<unsigned char>(full_name[e]))) ++e;
    std::string_view token = full_name.substr(b, e - b);
    if (token.empty() || is_initials(token)) return {};

    // strip trailing punctuation before lookup ("Maria," -> "Maria")
    while (!token.empty() && (token.back() == '.' || token.back() == ',')) token.remove_suffix(1);
    if (token.empty()) return {};

    auto hit = dict.lookup(normalize_name(token));
    if (!hit || hit->second < threshold) return {};
    return {hit->first, hit->second};
}

TeamComposition team_composition(std::span<const GenderLabel> labels) {
    if (labels.empty()) throw std::invalid_argument("team_composition: empty team");
    TeamComposition tc;
    tc.n_total = static_cast<int>(labels.size());
    for (const auto& l : labels) {
        switch (l.value) {
            case Gender::woman: ++tc.n_women; break;
            case Gender::man: ++tc.n_men; break;
            case Gender::unknown: ++tc.n_unknown; break;
        }
    }
    tc.first_inventor_gender = labels.front();
    tc.team_size_capped = std::min(tc.n_total, 5);
    tc.all_women = tc.n_women == tc.n_total;
    tc.all_men = tc.n_men == tc.n_total;

    const int determined = tc.n_women + tc.n_men;
    tc.classifiable = determined > 0;
    if (tc.classifiable) {
        tc.prop_women = static_cast<double>(tc.n_women) / determined;
        tc.women_majority = tc.n_women * 2 >= determined;
        if (tc.n_women == tc.n_men)
            tc.three_way = TeamComposition::ThreeWay::mixed_50_50;
        else if (tc.n_women > tc.n_men)
            tc.three_way = TeamComposition::ThreeWay::women_majority;
        else
            tc.three_way = TeamComposition::ThreeWay::men_majority;
    }
    return tc;
}

}  // namespace patnet
