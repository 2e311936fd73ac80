#pragma once

namespace qcorr {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace qcorr
