#pragma once

#include <ostream>

namespace vdlab::cli {

/// Exit codes of every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailure = 1;
inline constexpr int kInputError = 2;
inline constexpr int kBlowUp = 3;

/// Entry point of the `vdlab` tool.  Subcommands:
///   partition verify   partition-of-unity check on one lattice
///   besov              Besov / hybrid norm of a VDSF snapshot
///   green decay        linear decay curve by radial quadrature (CSV t,value)
///   green sumbound     dyadic sum bound scan (CSV t,value,I,II,III)
///   simulate           nonlinear run and decay experiments from a config
///   decay fit          log-log slope of a CSV column, with a JSON report
/// Normal output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vdlab::cli
