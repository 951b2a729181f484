#pragma once

#include <string>
#include <vector>

#include "nsroot/methods.hpp"

namespace nsroot {

// Built-in reference computation: the bundled example problem
//   x^2 - exp((1/x) * sin(pi * x^2 / 2)) - 1 = 0,  root sqrt(2),
// run with both s = 2 nonstationary methods from 1.7/1.6/1.5 at 120 digits,
// compared row by row against the embedded expected values.
struct Table1Check {
    std::string label;
    std::string expected;
    std::string got;
    bool pass = false;
};

struct Table1Result {
    std::string rendered;  // two 7-row tables (iterate and error columns)
    std::vector<Table1Check> checks;
    bool all_pass = false;
    double elapsed_seconds = 0.0;
    IterationTrace halley_variant;
    IterationTrace chebyshev_variant;
};

Table1Result reproduce_table1();

// The canonical example function in the expression grammar.
extern const char* const kExampleFunctionText;

}  // namespace nsroot
