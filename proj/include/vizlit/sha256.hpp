#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace vizlit {

// Minimal SHA-256 (FIPS 180-4). Used for prompt content hashes and cache keys;
// no external crypto dependency is warranted for that.
class Sha256 {
public:
    Sha256();
    void update(const void* data, std::size_t len);
    void update(std::string_view s) { update(s.data(), s.size()); }
    // Hex digest; finalizes a copy, so the hasher can keep accumulating.
    std::string hex_digest() const;

private:
    void process_block(const std::uint8_t* block);
    void finalize(std::uint8_t out[32]) const;

    std::uint32_t h_[8];
    std::uint64_t total_len_ = 0;
    std::uint8_t buffer_[64];
    std::size_t buffer_len_ = 0;
};

std::string sha256_hex(std::string_view data);

}  // namespace vizlit
