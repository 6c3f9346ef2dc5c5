//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_UTIL_EMBEDDED_DATA_H_
#define PAGFORGE_UTIL_EMBEDDED_DATA_H_

#include <string_view>

// Parameter tables compiled into the library from data/.
namespace pagforge::embedded {

std::string_view crippen_table();
std::string_view sa_fragment_table();

} // namespace pagforge::embedded

#endif // PAGFORGE_UTIL_EMBEDDED_DATA_H_
