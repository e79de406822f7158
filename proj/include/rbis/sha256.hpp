#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace rbis {

// FIPS 180-4 SHA-256, used for the output checksums in run manifests.
std::string sha256_hex(std::string_view data);

}  // namespace rbis
