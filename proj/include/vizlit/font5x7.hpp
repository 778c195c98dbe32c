#pragma once

#include <cstdint>

namespace vizlit::render {

// Classic 5x7 bitmap font, column-major, bit 0 = top row. Covers printable
// ASCII plus the degree sign; anything else falls back to a hollow box.
const std::uint8_t* glyph5x7(char32_t codepoint);

}  // namespace vizlit::render
