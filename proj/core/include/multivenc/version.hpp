#ifndef MULTIVENC_VERSION_HPP
#define MULTIVENC_VERSION_HPP

namespace mvenc {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
