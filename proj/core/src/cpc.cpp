#include "patnet/cpc.hpp"

#include <cctype>

namespace patnet {

std::optional<CpcCode> CpcCode::parse(std::string_view raw) {
    if (raw.size() < 4) return std::nullopt;
    const char sec = static_cast<char>(std::toupper(static_cast<unsigned char>(raw[0])));
    const bool sec_ok = (sec >= 'A' && sec <= 'H') || sec == 'Y';
    if (!sec_ok) return std::nullopt;
    const char d1 = raw[1];
    const char d2 = raw[2];
    if (d1 < '0' || d1 > '9' || d2 < '0' || d2 > '9') return std::nullopt;
    const char sub = static_cast<char>(std::toupper(static_cast<unsigned char>(raw[3])));
    if (sub < 'A' || sub > 'Z') return std::nullopt;
    CpcCode code;
    code.code_ = {sec, d1, d2, sub};
    return code;
}

}  // namespace patnet
