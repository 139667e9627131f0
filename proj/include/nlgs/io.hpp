#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace nlgs {

/// Writes to a sibling temp file and renames over the target.
void atomic_write(const std::string& path, std::string_view contents);

/// %.17g formatting; "inf" for +infinity.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

}  // namespace nlgs
