#pragma once

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vizlit {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool icontains(std::string_view haystack, std::string_view needle);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

// Rounds to at most `digits` significant decimal digits.
double round_sig(double v, int digits);

// Half-up rounding to `decimals` places; symmetric for negatives. Report
// percentages go through this so printed values do not depend on the libc's
// tie-breaking in printf.
double round_half_up(double v, int decimals);

// Fixed-decimal text of round_half_up(v, decimals), e.g. format_fixed(9.375, 2) == "9.38".
std::string format_fixed(double v, int decimals);

// Option index <-> letter ("A".."Z").
char option_letter(int index);
std::optional<int> option_index(char letter);

// Number of whitespace-separated words.
int word_count(std::string_view s);

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view content);

}  // namespace vizlit
