#pragma once

#include <string>
#include <string_view>

namespace sentiment {

/// Porter's suffix-stripping stemmer, following the reference implementation
/// published by Martin Porter (including its "logi" and "bli" rules).
///
/// Input is expected to be lowercase ASCII. Tokens containing bytes outside
/// ASCII are returned unchanged, as are tokens of one or two letters.
std::string porter_stem(std::string_view token);

}  // namespace sentiment
