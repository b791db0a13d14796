#ifndef UNISTOCH_VERSION_HPP
#define UNISTOCH_VERSION_HPP

namespace unistoch {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
