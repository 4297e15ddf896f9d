#ifndef FBPAUG_VERSION_HPP
#define FBPAUG_VERSION_HPP

namespace fbpaug {
inline constexpr const char* kVersion = "0.1.0";
}

#endif  // FBPAUG_VERSION_HPP
