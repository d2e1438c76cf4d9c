// Copyright 2026 the chainlab developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chainlab::cli {

/// Front door used by the chainlab binary and by tests (in-process, so golden
/// outputs are captured bit-for-bit).
///
/// Exit codes: 0 success, 1 usage/config error, 2 validation failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace chainlab::cli
