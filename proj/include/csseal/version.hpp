#ifndef CSSEAL_VERSION_HPP
#define CSSEAL_VERSION_HPP

namespace csseal {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
