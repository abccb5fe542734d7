#pragma once

#include <string_view>

namespace seaport {

std::string_view version() noexcept;

}  // namespace seaport
