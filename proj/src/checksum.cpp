#include "nyts/checksum.hpp"

#include "nyts/exceptions.hpp"  // nyts::input_error

#include "fmt/format.h"  // fmt::format

#include <openssl/evp.h>  // EVP_Digest, EVP_sha256

#include <array>       // std::array
#include <fstream>     // std::ifstream, std::ofstream
#include <iterator>    // std::istreambuf_iterator
#include <system_error>  // std::error_code

namespace nyts {

std::string sha256_hex(const std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
        throw exception{ "SHA-256 computation failed" };
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0x0F]);
    }
    return out;
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in{ path, std::ios::binary };
    if (!in) {
        throw input_error{ fmt::format("cannot open '{}' for reading", path.string()) };
    }
    return { std::istreambuf_iterator<char>{ in }, std::istreambuf_iterator<char>{} };
}

std::string sha256_file(const std::filesystem::path &path) {
    return sha256_hex(read_file(path));
}

void write_file_atomic(const std::filesystem::path &path, const std::string_view bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out{ tmp, std::ios::binary | std::ios::trunc };
        if (!out) {
            throw input_error{ fmt::format("cannot open '{}' for writing", tmp.string()) };
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw input_error{ fmt::format("write to '{}' failed", tmp.string()) };
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw input_error{ fmt::format("cannot rename '{}' to '{}': {}", tmp.string(), path.string(), ec.message()) };
    }
}

}  // namespace nyts
