#include "nilesenti/types.hpp"

#include <algorithm>
#include <cctype>

namespace nilesenti {

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::Positive:
      return "positive";
    case Polarity::Negative:
      return "negative";
    case Polarity::Neutral:
      return "neutral";
  }
  return "neutral";
}

std::optional<Polarity> parse_polarity(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "positive" || lower == "pos") return Polarity::Positive;
  if (lower == "negative" || lower == "neg") return Polarity::Negative;
  if (lower == "neutral") return Polarity::Neutral;
  return std::nullopt;
}

}  // namespace nilesenti
