#ifndef EP1D_IO_HPP
#define EP1D_IO_HPP

#include <string>
#include <vector>

#include "ep1d/field.hpp"
#include "ep1d/grid.hpp"
#include "ep1d/scheme.hpp"

namespace ep1d {

/// Shortest round-trippable decimal form of a double ("%.17g" trimmed via
/// round-trip check); used for every floating-point value we emit so output
/// is bitwise reproducible across runs.
std::string format_double(double v);

/// Writes content to path atomically (temp file + rename in the same
/// directory) so interrupted runs never leave partial files.
void write_atomic(const std::string& path, const std::string& content);

/// One solution snapshot: TSV with columns x_center, rho, u, r, s, psi, xi
/// covering every stored cell of the layer, preceded by '#' header lines
/// carrying the layer index, time, and far-field states.  xi is the mean of
/// the charge imbalance over the two fine intervals the cell spans.
std::string render_snapshot(const GasContext& gas, const GridState& grid,
                            const FieldState& field, double t);

/// Per-step diagnostics table: TSV, one row per StepReport, with a '#' header
/// naming the columns and a trailing summary block of run-level verdicts.
std::string render_diagnostics(const RunSummary& summary);

std::string snapshot_path(const OutputConfig& out, long layer);

}  // namespace ep1d

#endif
