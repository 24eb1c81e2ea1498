#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace sqlmend {

/// Lowercases, drops table qualifiers from dotted identifiers (`airline.names`
/// -> `names`, never inside quoted literals) and removes all whitespace.
/// Applied to a fixed point, so the result is idempotent.
std::string normalize_for_distance(std::string_view text);

/// Unit-cost Levenshtein distance over bytes.
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace sqlmend
