#pragma once

#include <set>
#include <string>
#include <vector>

namespace rasum::text {

/// Lowercased word tokens. A token is a run of alphanumerics, with internal
/// apostrophes and hyphens kept ("don't", "e-mail"); everything else splits.
std::vector<std::string> tokenize(const std::string& raw);

/// Tokens with original casing, same segmentation as tokenize().
std::vector<std::string> tokenize_preserve_case(const std::string& raw);

/// Split a paragraph into sentences on [.?!] + whitespace + uppercase,
/// guarded by a small abbreviation list (Mr., U.S., ...).
std::vector<std::string> split_sentences(const std::string& paragraph);

/// Collapse whitespace runs to single spaces and trim the ends.
std::string normalize_whitespace(const std::string& s);

std::string to_lower(const std::string& s);

bool is_stopword(const std::string& lowercased);

const std::set<std::string>& stopword_set();

}  // namespace rasum::text
