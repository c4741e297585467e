#pragma once

// Matplotlib scripts for the CSV tables written by the experiment drivers.

#include <string>
#include <vector>

namespace hbea::harness {

/// Writes plot_<stem>.py next to each CSV (or into out_dir when given) and
/// returns the script paths. Missing CSVs raise IoError naming the path.
std::vector<std::string> emit_plots(const std::vector<std::string>& csv_paths,
                                    const std::string& out_dir = "");

/// The script text for one table; `csv_rel` is the path the script opens,
/// relative to the script's own directory.
std::string plot_script(const std::string& csv_path, const std::string& csv_rel);

}  // namespace hbea::harness
