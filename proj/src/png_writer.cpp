#include <cstdint>
#include <string>
#include <vector>

#include "vizlit/render.hpp"

namespace vizlit::render {

namespace {

std::uint32_t crc32_table_entry(std::uint32_t n) {
    for (int k = 0; k < 8; ++k) n = (n & 1) ? 0xedb88320u ^ (n >> 1) : n >> 1;
    return n;
}

std::uint32_t crc32(const std::uint8_t* data, std::size_t len, std::uint32_t crc = 0) {
    static std::uint32_t table[256];
    static bool init = false;
    if (!init) {
        for (std::uint32_t i = 0; i < 256; ++i) table[i] = crc32_table_entry(i);
        init = true;
    }
    crc ^= 0xffffffffu;
    for (std::size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xff] ^ (crc >> 8);
    return crc ^ 0xffffffffu;
}

std::uint32_t adler32(const std::uint8_t* data, std::size_t len) {
    std::uint32_t a = 1, b = 0;
    for (std::size_t i = 0; i < len; ++i) {
        a = (a + data[i]) % 65521;
        b = (b + a) % 65521;
    }
    return (b << 16) | a;
}

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v >> 24));
    out.push_back(static_cast<char>(v >> 16));
    out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v));
}

void put_chunk(std::string& out, const char type[4], const std::string& payload) {
    put_u32(out, static_cast<std::uint32_t>(payload.size()));
    std::string body(type, 4);
    body += payload;
    out += body;
    put_u32(out, crc32(reinterpret_cast<const std::uint8_t*>(body.data()), body.size()));
}

}  // namespace

std::string encode_png(int width, int height, const std::vector<std::uint8_t>& rgba) {
    // raw scanlines, filter 0 per row
    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<std::size_t>(height) * (static_cast<std::size_t>(width) * 4 + 1));
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);
        const std::size_t offset = static_cast<std::size_t>(y) * width * 4;
        raw.insert(raw.end(), rgba.begin() + static_cast<std::ptrdiff_t>(offset),
                   rgba.begin() + static_cast<std::ptrdiff_t>(offset + static_cast<std::size_t>(width) * 4));
    }

    // zlib stream with stored (uncompressed) deflate blocks
    std::string idat;
    idat.push_back(0x78);
    idat.push_back(0x01);
    std::size_t pos = 0;
    while (pos < raw.size()) {
        const std::size_t take = std::min<std::size_t>(65535, raw.size() - pos);
        const bool final = pos + take == raw.size();
        idat.push_back(final ? 1 : 0);
        idat.push_back(static_cast<char>(take & 0xff));
        idat.push_back(static_cast<char>((take >> 8) & 0xff));
        idat.push_back(static_cast<char>(~take & 0xff));
        idat.push_back(static_cast<char>((~take >> 8) & 0xff));
        idat.append(reinterpret_cast<const char*>(raw.data() + pos), take);
        pos += take;
    }
    const std::uint32_t adler = adler32(raw.data(), raw.size());
    put_u32(idat, adler);

    std::string out("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(width));
    put_u32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);   // bit depth
    ihdr.push_back(6);   // RGBA
    ihdr.push_back(0);   // compression
    ihdr.push_back(0);   // filter
    ihdr.push_back(0);   // no interlace
    put_chunk(out, "IHDR", ihdr);
    put_chunk(out, "IDAT", idat);
    put_chunk(out, "IEND", "");
    return out;
}

}  // namespace vizlit::render
