#pragma once

namespace pcoh {

inline constexpr const char* kToolVersion = "0.1.0";
/// Bumped whenever the certificate JSON layout changes.
inline constexpr int kCertificateSchemaVersion = 1;

}  // namespace pcoh
