#pragma once

namespace bosegas {

inline constexpr const char* version_string = "0.1.0";

} // namespace bosegas
