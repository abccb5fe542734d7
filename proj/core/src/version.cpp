#include "seaport/version.hpp"

#ifndef SEAPORT_VERSION
#define SEAPORT_VERSION "0.0.0"
#endif

namespace seaport {

std::string_view version() noexcept { return SEAPORT_VERSION; }

}  // namespace seaport
