#include "srcf/log.hpp"

#include <iostream>
#include <mutex>
#include <string>
#include <utility>

namespace srcf {
namespace {

std::mutex sink_mutex;

void default_sink(std::string_view message) { std::cerr << "warning: " << message << '\n'; }

WarningSink& current_sink() {
  static WarningSink sink = default_sink;
  return sink;
}

}  // namespace

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(sink_mutex);
  if (!sink) sink = default_sink;
  return std::exchange(current_sink(), std::move(sink));
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex);
  current_sink()(message);
}

}  // namespace srcf
