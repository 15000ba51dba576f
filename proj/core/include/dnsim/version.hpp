#ifndef DNSIM_VERSION_HPP
#define DNSIM_VERSION_HPP

namespace dnsim {

inline constexpr const char* kVersion = "0.1.0";

} // namespace dnsim

#endif
