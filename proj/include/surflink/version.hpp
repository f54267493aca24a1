#pragma once

namespace surflink {

inline constexpr const char* version = "0.1.0";

}
