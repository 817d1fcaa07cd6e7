#pragma once

#include <string_view>

namespace korm {

inline constexpr std::string_view version_string = "0.1.0";

}  // namespace korm
