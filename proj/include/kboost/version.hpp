#ifndef KBOOST_VERSION_HPP
#define KBOOST_VERSION_HPP

namespace kboost {
inline constexpr const char* version = "0.1.0";
}

#endif
