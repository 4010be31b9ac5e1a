#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nilesenti::utf8 {

// Invalid sequences decode to U+FFFD one byte at a time.
std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);
void append(std::string& out, char32_t cp);

// Number of code points.
std::size_t length(std::string_view s);

bool is_space(char32_t cp);
bool is_arabic_letter(char32_t cp);

// 64-bit FNV-1a, used for content fingerprints and seeding.
std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace nilesenti::utf8
