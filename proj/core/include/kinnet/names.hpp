#pragma once

#include <string>
#include <string_view>

namespace kinnet {

/// Canonical form used for every name-like field: ASCII uppercased,
/// "Ñ"/"ñ" folded to "N", periods stripped, hyphens preserved, surrounding
/// whitespace trimmed and internal runs collapsed to single spaces.
/// Idempotent; empty input yields empty output.
std::string normalize_name(std::string_view raw);

/// Jaro-Winkler similarity in [0, 1] (prefix bonus up to 4 chars, p = 0.1).
double jaro_winkler(std::string_view a, std::string_view b);

/// Similarity used for record linkage: Jaro-Winkler over the concatenated
/// "LAST FIRST" strings, so both fields contribute to one score in [0, 1].
double name_pair_similarity(std::string_view last_a, std::string_view first_a,
                            std::string_view last_b, std::string_view first_b);

} // namespace kinnet
