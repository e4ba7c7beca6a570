#pragma once

namespace otai::cli {

/// Parses argv, merges an optional JSON config (flags > config > defaults),
/// validates, dispatches to the experiment/analysis layer and writes CSV.
/// Exit codes: 0 success or predicate holds, 1 predicate fails,
/// 2 computation/domain error, 3 I/O error, 64 usage error.
int run_cli(int argc, const char* const* argv);

} // namespace otai::cli
