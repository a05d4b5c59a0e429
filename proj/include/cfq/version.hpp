#pragma once

namespace cfq {

inline constexpr const char* version = "0.1.0";

}
