//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_UTIL_HASH_H_
#define PAGFORGE_UTIL_HASH_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace pagforge {

std::array<std::uint8_t, 32> sha256(std::string_view data);

std::string sha256_hex(std::string_view data);

// Hex digest of a file's bytes. Throws NotFoundError if unreadable.
std::string sha256_file_hex(const std::filesystem::path &path);

} // namespace pagforge

#endif // PAGFORGE_UTIL_HASH_H_
