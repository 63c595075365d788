#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scenicgen {

std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

/// Quantile of already-sorted data using linear interpolation between
/// order statistics (position (n-1)*p). p must be in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

double mean(std::span<const double> values);
double sample_variance(std::span<const double> values);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
std::vector<std::string> split_lines(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Deterministic RNG helpers. std::mt19937_64 raw output is specified by the
// standard, while the distribution classes are not; everything that must be
// reproducible across platforms goes through these two functions.
std::size_t bounded_draw(std::mt19937_64& rng, std::size_t n);
double unit_draw(std::mt19937_64& rng);  // in [0, 1)

}  // namespace scenicgen
