#pragma once

#include <boost/dynamic_bitset.hpp>

namespace asimkit {

/// Dense bit-set; truth tables and relation rows are both stored this way.
using Bits = boost::dynamic_bitset<>;

}  // namespace asimkit
