#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tmkit::cli {

/// Exit discipline: 0 clean, 1 when any ERROR-severity diagnostic was
/// produced, 2 on usage or I/O problems. Warnings alone never yield 1.
///
/// `args` excludes the program name. All output goes through the streams,
/// so commands stay testable in-process.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tmkit::cli
