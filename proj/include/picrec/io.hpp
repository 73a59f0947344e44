#pragma once

#include <string>
#include <string_view>

#include "picrec/deck.hpp"
#include "picrec/errors.hpp"
#include "picrec/picture.hpp"

namespace picrec {

// Text formats:
//   picture: n lines of exactly n characters from {0,1}, top row first,
//            trailing newline optional.
//   deck:    header `DECK k=<k> total=<total>`, then one `<encoding> <count>`
//            line per distinct grid, sorted ascending by encoding.
// Decoders throw ParseError with a 1-based line number.

std::string encode_picture(const Picture& p);
Picture decode_picture(std::string_view text);

std::string encode_deck(const Deck& d);
Deck decode_deck(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view data);

} // namespace picrec
