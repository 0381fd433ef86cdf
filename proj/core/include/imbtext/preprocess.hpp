#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace imbtext {

// Text normalization applied to every document and paragraph before
// feature extraction:
//   1. whole tokens that look like URLs (scheme:// or www. prefix) dropped
//   2. backslash escape sequences (\n, \t, ...) replaced by a space
//   3. punctuation and symbols (Unicode P*, S*) deleted
//   4. decimal digit runs (Unicode Nd) deleted
//   5. stray control/format characters replaced by a space
//   6. full Unicode case folding
//   7. whitespace collapsed to single spaces, result trimmed
// Total and idempotent: preprocess_text(preprocess_text(x)) == preprocess_text(x).
std::string preprocess_text(std::string_view raw);

// Whitespace split (Unicode whitespace). The token list of a preprocessed
// string is exactly what this returns on it.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace imbtext
