#ifndef QGT_VERSION_HPP
#define QGT_VERSION_HPP

namespace qgt {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

} // namespace qgt

#endif
