#pragma once

#include <functional>
#include <string_view>

namespace srcf {

using WarningSink = std::function<void(std::string_view)>;

// Replaces the process-wide warning sink (default: one line to stderr).
// Passing an empty function restores the default. Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

}  // namespace srcf
