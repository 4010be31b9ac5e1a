#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nilesenti {

// Every recoverable failure in the library surfaces as this exception; the CLI
// maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Polarity { Positive, Negative, Neutral };

// Lowercase label as written to prediction files.
std::string_view to_string(Polarity p);

// Case-insensitive; accepts positive/negative/neutral and the pos/neg
// abbreviations used by lexicon files.
std::optional<Polarity> parse_polarity(std::string_view s);

}  // namespace nilesenti
