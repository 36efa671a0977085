#include "corrgame/csv.hpp"

#include <charconv>

#include "corrgame/errors.hpp"

namespace corrgame {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw NumericError("format_double: conversion failed");
  return std::string(buf, ptr);
}

}  // namespace corrgame
