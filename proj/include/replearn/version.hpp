#pragma once

namespace replearn {

inline constexpr const char* kArtifactName = "replearn";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace replearn
