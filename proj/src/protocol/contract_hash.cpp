#include "qcs/contract_hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>
#include <stdexcept>

namespace qcs::protocol {

std::vector<std::uint8_t> contract_hash_bits(std::string_view contract, std::size_t bits) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx) {
        throw std::runtime_error("contract_hash_bits: cannot allocate digest context");
    }
    std::vector<std::uint8_t> out;
    out.reserve(bits);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    for (std::uint32_t block = 0; out.size() < bits; ++block) {
        const std::array<unsigned char, 4> counter{
            static_cast<unsigned char>(block >> 24), static_cast<unsigned char>(block >> 16),
            static_cast<unsigned char>(block >> 8), static_cast<unsigned char>(block)};
        unsigned int len = 0;
        if (EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
            EVP_DigestUpdate(ctx.get(), counter.data(), counter.size()) != 1 ||
            EVP_DigestUpdate(ctx.get(), contract.data(), contract.size()) != 1 ||
            EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
            throw std::runtime_error("contract_hash_bits: SHA-256 failed");
        }
        for (unsigned int i = 0; i < len && out.size() < bits; ++i) {
            for (int b = 7; b >= 0 && out.size() < bits; --b) {
                out.push_back(static_cast<std::uint8_t>((digest[i] >> b) & 1U));
            }
        }
    }
    return out;
}

}  // namespace qcs::protocol
