#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace litho {

std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_hex(std::string_view text);
std::string sha256_hex(const std::vector<std::uint8_t>& bytes);

}  // namespace litho
