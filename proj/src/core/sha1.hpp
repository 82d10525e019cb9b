#pragma once

#include <cstdint>
#include <string>

namespace colhel {

// SHA-1 digest as a lowercase hex string; used to fingerprint run
// configurations in manifests.
std::string sha1_hex(const std::string& data);

} // namespace colhel
