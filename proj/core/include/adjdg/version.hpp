#ifndef ADJDG_VERSION_HPP
#define ADJDG_VERSION_HPP

namespace adjdg {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
