#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "spacefill/adapt.hpp"

namespace spacefill::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Test seams. wrap_subset_source receives the source `subset` is about to
/// read and returns the one to read from instead.
struct Hooks {
  std::function<RecordSource&(RecordSource&)> wrap_subset_source;
};

/// Runs one command line (without the program name). "-" as a file name
/// means `in` for inputs and `out` for outputs.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err, const Hooks& hooks = {});

}  // namespace spacefill::cli
