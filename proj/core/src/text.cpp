#include "mise/common/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <iterator>

namespace mise::text {
namespace {

constexpr std::string_view kStopwords[] = {
    "a",     "about", "after", "again", "all",   "am",    "an",     "and",   "any",    "are",
    "as",    "at",    "be",    "been",  "being", "but",   "by",     "can",   "could",  "did",
    "do",    "does",  "doing", "for",   "from",  "had",   "has",    "have",  "having", "he",
    "her",   "here",  "him",   "his",   "how",   "i",     "if",     "im",    "in",     "into",
    "is",    "it",    "its",   "ill",   "ive",   "just",  "me",     "more",  "my",     "myself",
    "now",   "of",    "on",    "or",    "our",   "out",   "please", "same",  "she",    "should",
    "so",    "some",  "than",  "that",  "thats", "the",   "their",  "them",  "then",   "there",
    "these", "they",  "this",  "those", "to",    "too",   "up",     "very",  "was",    "we",
    "were",  "what",  "whats", "when",  "where", "which", "while",  "who",   "why",    "will",
    "with",  "would", "you",   "your",  "youre", "yours",
};

}  // namespace

bool is_stopword(std::string_view w) {
  return std::find(std::begin(kStopwords), std::end(kStopwords), w) != std::end(kStopwords);
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (ch == '\'' && !cur.empty()) {
      continue;
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> content_tokens(std::string_view s) {
  auto all = words(s);
  std::erase_if(all, [](const std::string& w) { return is_stopword(w); });
  return all;
}

std::set<std::string> content_token_set(std::string_view s) {
  auto v = content_tokens(s);
  return {v.begin(), v.end()};
}

std::size_t shared_token_count(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

std::size_t whitespace_token_count(std::string_view s) {
  std::size_t n = 0;
  bool in_token = false;
  for (char ch : s) {
    const bool ws = std::isspace(static_cast<unsigned char>(ch)) != 0;
    if (!ws && !in_token) ++n;
    in_token = !ws;
  }
  return n;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  return lowercase(haystack).find(lowercase(needle)) != std::string::npos;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mise::text
