#include "fppvar/seeding.hpp"

namespace fppvar {

static_assert(to_unit_open(0) > 0.0);
static_assert(to_unit_open(~std::uint64_t{0}) < 1.0);

} // namespace fppvar
