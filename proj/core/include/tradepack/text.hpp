#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tradepack::text {

/// `%.<digits>g` rendering; NaN prints as "NA", infinities as "inf"/"-inf".
std::string number(double value, int significant_digits = 12);
std::string number(std::optional<double> value, int significant_digits = 12);

std::vector<std::string_view> split(std::string_view line, char delimiter);

/// FNV-1a, 64-bit. Used for content checksums in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace tradepack::text
