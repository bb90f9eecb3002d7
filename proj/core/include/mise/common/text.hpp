#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mise::text {

// Lowercased alphanumeric runs; apostrophes inside words are dropped
// ("what's" -> "whats").
std::vector<std::string> words(std::string_view s);

// words() minus a fixed English stopword list.
std::vector<std::string> content_tokens(std::string_view s);
std::set<std::string> content_token_set(std::string_view s);

std::size_t shared_token_count(const std::set<std::string>& a, const std::set<std::string>& b);

// Budget accounting unit: whitespace-separated tokens.
std::size_t whitespace_token_count(std::string_view s);

bool is_stopword(std::string_view w);

std::string lowercase(std::string_view s);
std::string trim(std::string_view s);
bool contains_ci(std::string_view haystack, std::string_view needle);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::vector<std::string> split(std::string_view s, char sep);

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace mise::text
