#pragma once

namespace salieval {

inline constexpr const char* kCodeVersion = "salieval 0.1.0";

}  // namespace salieval
