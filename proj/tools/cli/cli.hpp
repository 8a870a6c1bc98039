#pragma once

#include <iosfwd>

namespace selinf::cli {

/// Exit statuses shared by every command.
enum Status : int {
  kPass = 0,
  kRuledOut = 1,
  kError = 2,
};

/// Entry point of the selinf tool; returns the process exit status.
/// `validate` returns kRuledOut for an invalid dataset.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace selinf::cli
