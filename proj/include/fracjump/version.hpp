#pragma once

namespace fracjump {

inline const char* version_string() { return "fracjump 0.1.0"; }

} // namespace fracjump
