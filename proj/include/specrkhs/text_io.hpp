#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "specrkhs/types.hpp"

namespace specrkhs {

std::string to_lower(std::string s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

double parse_double(const std::string& s, const std::string& what);
long long parse_int(const std::string& s, const std::string& what);

// `key=value,key=value` with lower-cased keys; duplicate keys are an error.
std::map<std::string, std::string> parse_key_values(const std::string& body, const std::string& what);

// Shortest round-trip-safe rendering (17 significant digits).
std::string format_double(double v);
// Real numbers print plainly; complex ones as `re+imi` / `re-imi`.
std::string format_complex(cplx z);
cplx parse_complex(const std::string& s);

// Writes to a sibling temporary file, then renames over the target.
void atomic_write_file(const std::string& path, const std::string& content);

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed = 14695981039346656037ull);
std::string hex64(std::uint64_t v);

} // namespace specrkhs
