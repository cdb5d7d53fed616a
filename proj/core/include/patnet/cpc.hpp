#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace patnet {

/// A CPC classification identifier held at subclass resolution, e.g. "A61B".
/// The three hierarchy levels are views into the same four validated
/// characters: section "A", class "A61", subclass "A61B". Anything deeper
/// than the subclass (group suffixes like "A61B5/02") is truncated on parse.
class CpcCode {
public:
    CpcCode() = default;

    /// Accepts any string whose first four characters form a valid subclass
    /// (section letter A-H or Y, two digits, one letter); lowercase input is
    /// folded to uppercase. Returns nullopt otherwise.
    static std::optional<CpcCode> parse(std::string_view raw);

    char section() const { return code_[0]; }
    std::string_view cpc_class() const { return {code_.data(), 3}; }
    std::string_view subclass() const { return {code_.data(), 4}; }
    std::string str() const { return std::string(subclass()); }

    /// Dense 32-bit key, strictly increasing with lexicographic order.
    std::uint32_t key() const {
        return (std::uint32_t(std::uint8_t(code_[0])) << 24) |
               (std::uint32_t(std::uint8_t(code_[1])) << 16) |
               (std::uint32_t(std::uint8_t(code_[2])) << 8) |
               std::uint32_t(std::uint8_t(code_[3]));
    }

    auto operator<=>(const CpcCode&) const = default;

private:
    std::array<char, 4> code_{{'\0', '\0', '\0', '\0'}};
};

struct CpcCodeHash {
    std::size_t operator()(const CpcCode& c) const noexcept {
        return std::hash<std::uint32_t>{}(c.key());
    }
};

/// Unordered pair of distinct subclasses, stored with a < b.
struct PairKey {
    CpcCode a;
    CpcCode b;

    PairKey() = default;
    PairKey(CpcCode x, CpcCode y) : a(x), b(y) {
        if (b < a) std::swap(a, b);
    }

    std::uint64_t key() const {
        return (std::uint64_t(a.key()) << 32) | std::uint64_t(b.key());
    }

    auto operator<=>(const PairKey&) const = default;
};

struct PairKeyHash {
    std::size_t operator()(const PairKey& p) const noexcept {
        // splitmix-style scramble of the packed key
        std::uint64_t z = p.key() + 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return static_cast<std::size_t>(z ^ (z >> 31));
    }
};

}  // namespace patnet
