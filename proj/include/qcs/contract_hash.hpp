#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace qcs::protocol {

// Hashes a contract text to `bits` bits: block j is SHA-256(be32(j) || text),
// blocks are concatenated and truncated, bits taken most significant first.
std::vector<std::uint8_t> contract_hash_bits(std::string_view contract, std::size_t bits);

}  // namespace qcs::protocol
