#include "bsmsentinel/version.hpp"

namespace bsmsentinel {

const char* version() noexcept { return BSMSENTINEL_VERSION; }

}  // namespace bsmsentinel
