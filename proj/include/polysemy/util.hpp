// Small shared helpers: file IO, string splitting, deterministic number
// formatting and hashing for manifest/golden output.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polysemy {

// Raised for malformed or unusable input data. The CLI maps this to exit
// code 2; usage problems are handled by the argument parser (exit code 1).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace util {

std::string read_file(const std::string& path);

// Writes bytes verbatim (binary mode, LF endings preserved).
void write_file(const std::string& path, std::string_view content);

std::vector<std::string_view> split(std::string_view text, char sep);
std::vector<std::string_view> split_whitespace(std::string_view text);
std::string_view trim(std::string_view text);
std::string lower(std::string_view text);
std::string upper(std::string_view text);

bool starts_with(std::string_view text, std::string_view prefix);

// "%.9g" rendering used by every CSV/JSON emitter so that golden outputs
// are reproducible byte for byte.
std::string format_double(double v);

// FNV-1a 64-bit; stable across platforms. Used for config hashes and
// input-file digests in the run manifest (not cryptographic).
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace util
}  // namespace polysemy
