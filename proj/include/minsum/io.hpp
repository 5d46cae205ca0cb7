#pragma once

#include <string>

#include "minsum/decomposition.hpp"
#include "minsum/engine.hpp"
#include "minsum/problem.hpp"

namespace minsum {

/// Instance file: `n <count>` header, `h <i> <value>` lines, `e <i> <j> <value>`
/// lines with 0-based i<j, `#` comments. Throws ParseError / IoError.
RawProblem load_problem(const std::string& path);

/// Writes the same dialect, floats at 17 significant digits; byte-stable for
/// identical inputs.
void save_instance(const std::string& path, const RawProblem& raw);

/// One comma-separated row per iteration: t,max|dgamma|,max|dz|,residual,
/// illposed flag, with the async columns (activated count, max staleness)
/// appended when present.
void save_trace(const std::string& path, const Trace& trace);

/// Decomposition parameters as `g <i> <j> <value>` / `z <i> <j> <value>`
/// records per directed edge.
void save_params(const std::string& path, const QuadraticProblem& p, const EdgeParams& params);

/// Loads parameters back; every directed edge needs a g record, z records are
/// optional and default to zero (which is how witness files, g-only, load).
EdgeParams load_params(const std::string& path, const QuadraticProblem& p);

void save_witness(const std::string& path, const QuadraticProblem& p, const Witness& w);

std::string trace_row_string(const TraceRow& row, bool async);

}  // namespace minsum
