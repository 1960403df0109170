#pragma once

#include <charconv>
#include <string>
#include <system_error>

#include "spinnet/error.hpp"

namespace spinnet {

// Shortest round-trip decimal form, locale independent. Keeps repeated runs
// byte-identical and makes CSV values parse back to the exact double.
inline std::string format_double(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw ValidationError("format_double: conversion failed");
  return std::string(buffer, end);
}

// Degrees columns: 12 significant digits, enough to strip the radian
// round-trip noise (90.00000000000001 -> 90) while staying deterministic.
inline std::string format_degrees(double value) {
  char buffer[32];
  const auto [end, ec] =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 12);
  if (ec != std::errc()) throw ValidationError("format_degrees: conversion failed");
  return std::string(buffer, end);
}

}  // namespace spinnet
