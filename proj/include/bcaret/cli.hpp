#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bcaret/engine.hpp"
#include "bcaret/pds.hpp"

namespace bcaret {

// Labels file: a sequence of bindings
//   atom <name> states { <control>* } ;
//   atom <name> ma { trans <s> <sym|*> <s> ; ... final <s> ; ... } ;
Labelling parse_labels(const LabelledPds& pds, std::string_view text);

// Full command line driver, exposed for tests. Returns the process exit
// code: 0 satisfied, 1 unsatisfied, 2 unknown, 3 usage or input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bcaret
