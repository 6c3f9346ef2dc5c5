//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_UTIL_CLOCK_H_
#define PAGFORGE_UTIL_CLOCK_H_

#include <string>

namespace pagforge {

// Current wall-clock time as ISO 8601 UTC with milliseconds.
std::string utc_timestamp();

} // namespace pagforge

#endif // PAGFORGE_UTIL_CLOCK_H_
