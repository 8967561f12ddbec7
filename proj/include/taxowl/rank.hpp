// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 taxowl contributors

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace taxowl {

/// Linnaean ranks in descending order. Comparisons elsewhere rely on the
/// enumerator values: a numerically smaller rank is a higher (broader) rank.
enum class Rank : int {
    Kingdom = 0,
    Phylum,
    Class,
    Order,
    Family,
    Genus,
    Species,
    Subspecies,
};

inline constexpr std::array<Rank, 8> kAllRanks = {
    Rank::Kingdom, Rank::Phylum,  Rank::Class,   Rank::Order,
    Rank::Family,  Rank::Genus,   Rank::Species, Rank::Subspecies,
};

/// True when `a` is a strictly higher (broader) rank than `b`.
constexpr bool is_higher_rank(Rank a, Rank b) {
    return static_cast<int>(a) < static_cast<int>(b);
}

constexpr std::string_view rank_name(Rank r) {
    switch (r) {
    case Rank::Kingdom: return "KINGDOM";
    case Rank::Phylum: return "PHYLUM";
    case Rank::Class: return "CLASS";
    case Rank::Order: return "ORDER";
    case Rank::Family: return "FAMILY";
    case Rank::Genus: return "GENUS";
    case Rank::Species: return "SPECIES";
    case Rank::Subspecies: return "SUBSPECIES";
    }
    return "UNKNOWN";
}

/// "Kingdom", "Phylum", ... as used in document comment banners.
inline std::string rank_title(Rank r) {
    std::string s(rank_name(r));
    for (size_t i = 1; i < s.size(); ++i) {
        s[i] = static_cast<char>(s[i] - 'A' + 'a');
    }
    return s;
}

inline std::optional<Rank> rank_from_string(std::string_view s) {
    std::string upper(s);
    for (char& c : upper) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    for (Rank r : kAllRanks) {
        if (upper == rank_name(r)) return r;
    }
    return std::nullopt;
}

} // namespace taxowl
