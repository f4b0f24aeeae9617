#pragma once

#include <cstdint>
#include <string>

namespace skewlab {

// SHA-256 of a byte string, lowercase hex. Used for content addressing of
// configurations and certificates (not for security).
std::string sha256_hex(const std::string& data);

}  // namespace skewlab
