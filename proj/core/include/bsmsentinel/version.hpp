#pragma once

namespace bsmsentinel {

const char* version() noexcept;

}  // namespace bsmsentinel
