#pragma once

#include <string>

#include "lindyn/operator_spec.hpp"

namespace lindyn {

// Parses the structured operator grammar, e.g.
//   {"op":"doubling_shift_fixed_line"}
//   {"op":"diagonal","prefix":["1/2"],"default":"1/2"}
//   {"op":"direct_sum","left":{...},"right":{...},"offset":1}
//   {"op":"rotation","a":"3/5","b":"4/5"}
// Rationals are always "num/den" strings; decimals are rejected. Throws
// ConfigError on unknown keys or kinds, ParseError on malformed rationals.
Operator operator_from_config_text(const std::string& text);

// Canonical round-tripping serialization of the same grammar.
std::string operator_to_config_text(const Operator& op);

}  // namespace lindyn
